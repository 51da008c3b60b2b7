#ifndef IONET_STOCHASTIC_HPP_
#define IONET_STOCHASTIC_HPP_

#include <cstdint>

#include <ionet/influence.hpp>
#include <ionet/matrix.hpp>

namespace ionet {

// Counter-based deterministic stream: output k is a pure function of
// (key, k), so draws are independent of iteration order and schedule.
// This is splitmix64 with the key as the initial state.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

// One-way key mixing for deriving per-edge / per-trial stream keys.
std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0);

// Exact binomial draw (inversion walked outward from the mode, O(sqrt(npq))
// expected steps). Deterministic given the stream.
std::int64_t binomial_draw(std::int64_t n, double p, CounterRng &rng);

// Dollar-denominated flows y_ij = w_ij * II_i with integer entries. The row
// totals II_i are the row sums; M is the smallest positive y_ij.
class FlowMatrix {
  public:
    // y: nonnegative integers, zero diagonal, every row sum positive.
    static FlowMatrix from_integer_flows(const Eigen::Matrix<std::int64_t, Eigen::Dynamic,
                                                             Eigen::Dynamic> &y);

    Eigen::Index size() const noexcept { return y_.rows(); }
    std::int64_t flow(Eigen::Index i, Eigen::Index j) const { return y_(i, j); }
    std::int64_t total(Eigen::Index i) const { return ii_(i); }
    std::int64_t min_positive_flow() const noexcept { return m_; }

    // The underlying linkage matrix w_ij = y_ij / II_i.
    IoMatrix linkage() const;

  private:
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> y_;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> ii_;
    std::int64_t m_ = 0;
};

struct SampleDiagnostics {
    long resampled_rows = 0; // rows redrawn because every dollar went missing
};

// Observes each of the y_ij dollars independently with probability 1-zeta
// (X_ij ~ Bin(y_ij, 1-zeta), stream keyed by (seed, i, j)) and row-normalizes
// the observed counts. A row whose observed sum is zero is resampled, up to 64
// attempts. The optional outputs expose the raw counts and diagnostics.
IoMatrix sample_observed(const FlowMatrix &flows, double zeta, std::uint64_t seed,
                         SampleDiagnostics *diag = nullptr, Matrix *counts = nullptr);

// max(0, 1 - 2 n^2 exp(-eps^2 (1-zeta) M / 3)): the probability that the
// observed influence vector lands within the companion error threshold.
double chernoff_success_bound(long n, double epsilon, double zeta, std::int64_t m);

// 2 (1-a) eps / (a (1-eps)): the error radius certified by the bound above.
double chernoff_error_threshold(LaborShare alpha, double epsilon);

// sqrt(c ln n / (M (1-zeta))): the epsilon making the success bound
// 1 - 2 n^{2 - c/3}; any c > 6 drives it to 1.
double cor63_epsilon(long n, std::int64_t m, double zeta, double c = 7.0);

struct TrialReport {
    long trials = 0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double zeta = 0.0;
    double q = 1.0;
    double empirical_success = 0.0; // fraction of trials with ||v_U - v_W||_q <= threshold
    double bound_probability = 0.0;
    double error_threshold = 0.0;
    std::uint64_t seed = 0;
    long resampled_rows = 0;
};

// Runs independent sample_observed draws (trial t keyed by (seed, t)) and
// compares the per-trial q-norm error against the certified threshold.
TrialReport monte_carlo(const FlowMatrix &flows, LaborShare alpha, double zeta, double epsilon,
                        double q, long trials, std::uint64_t seed);

} // namespace ionet

#endif // IONET_STOCHASTIC_HPP_
