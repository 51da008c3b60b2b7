#include <ionet/stochastic.hpp>

#include <cmath>

namespace ionet {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t k = mix64(seed ^ 0x632be59bd9b4e019ull);
    k = mix64(k ^ (a * 0xff51afd7ed558ccdull + 1));
    k = mix64(k ^ (b * 0xc4ceb9fe1a85ec53ull + 2));
    k = mix64(k ^ (c * 0x2545f4914f6cdd1dull + 3));
    return k;
}

std::int64_t binomial_draw(std::int64_t n, double p, CounterRng &rng) {
    if (n < 0)
        fail(errc::invalid_argument, "binomial_draw needs n >= 0");
    if (n == 0 || p <= 0.0)
        return 0;
    if (p >= 1.0)
        return n;
    if (p > 0.5)
        return n - binomial_draw(n, 1.0 - p, rng);

    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    const std::int64_t mode = static_cast<std::int64_t>((nd + 1.0) * p);
    const double md = static_cast<double>(mode);
    // log pmf at the mode, then walk outward with the ratio recurrences
    //   P(k+1)/P(k) = (n-k)/(k+1) * p/q,  P(k-1)/P(k) = k/(n-k+1) * q/p.
    const double log_pm = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                          std::lgamma(nd - md + 1.0) + md * std::log(p) +
                          (nd - md) * std::log1p(-p);
    const double pm = std::exp(log_pm);

    double u = rng.next_unit();
    u -= pm;
    if (u < 0.0)
        return mode;
    double up_p = pm, down_p = pm;
    std::int64_t up = mode, down = mode;
    while (up < n || down > 0) {
        if (up < n) {
            up_p *= (nd - static_cast<double>(up)) / (static_cast<double>(up) + 1.0) * (p / q);
            ++up;
            u -= up_p;
            if (u < 0.0)
                return up;
        }
        if (down > 0) {
            down_p *= static_cast<double>(down) / (nd - static_cast<double>(down) + 1.0) *
                      (q / p);
            --down;
            u -= down_p;
            if (u < 0.0)
                return down;
        }
    }
    return mode; // float rounding exhausted the mass; probability ~2^-53
}

FlowMatrix FlowMatrix::from_integer_flows(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> &y) {
    if (y.rows() != y.cols())
        fail(errc::non_square, "flow matrix must be square");
    const Eigen::Index n = y.rows();
    FlowMatrix out;
    out.y_ = y;
    out.ii_.resize(n);
    std::int64_t min_pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::int64_t row = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::int64_t v = y(i, j);
            if (v < 0)
                fail(errc::negative_entry, "flow entry is negative");
            if (i == j && v != 0)
                fail(errc::nonzero_diagonal, "diagonal flows must be zero");
            row += v;
            if (v > 0 && (min_pos == 0 || v < min_pos))
                min_pos = v;
        }
        if (row <= 0)
            fail(errc::zero_row, "firm " + std::to_string(i) + " has no intermediate input");
        out.ii_(i) = row;
    }
    out.m_ = min_pos;
    return out;
}

IoMatrix FlowMatrix::linkage() const {
    const Eigen::Index n = y_.rows();
    Matrix w(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            w(i, j) = static_cast<double>(y_(i, j)) / static_cast<double>(ii_(i));
    return IoMatrix::validate(w, ValidationMode::strict);
}

IoMatrix sample_observed(const FlowMatrix &flows, double zeta, std::uint64_t seed,
                         SampleDiagnostics *diag, Matrix *counts) {
    if (!(zeta > 0.0) || !(zeta < 1.0))
        fail(errc::invalid_argument, "zeta must lie in (0,1)");
    const Eigen::Index n = flows.size();
    const double keep = 1.0 - zeta;
    Matrix x(n, n);
    long resampled = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (unsigned attempt = 0;; ++attempt) {
            if (attempt > 64)
                fail(errc::all_missing_row,
                     "row " + std::to_string(i) + " observed no dollars in 64 resamples");
            double row_sum = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (flows.flow(i, j) == 0) {
                    x(i, j) = 0.0;
                    continue;
                }
                CounterRng rng(mix_key(seed, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(j), attempt));
                x(i, j) = static_cast<double>(binomial_draw(flows.flow(i, j), keep, rng));
                row_sum += x(i, j);
            }
            if (row_sum > 0.0)
                break;
            ++resampled;
        }
    }
    if (diag)
        diag->resampled_rows = resampled;
    if (counts)
        *counts = x;
    Matrix u(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        u.row(i) = x.row(i) / x.row(i).sum();
    return IoMatrix::validate(u, ValidationMode::strict);
}

double chernoff_success_bound(long n, double epsilon, double zeta, std::int64_t m) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        fail(errc::invalid_argument, "epsilon must lie in (0,1)");
    if (m < 1)
        fail(errc::invalid_argument, "M must be at least 1");
    const double nn = static_cast<double>(n);
    const double tail = 2.0 * nn * nn *
                        std::exp(-epsilon * epsilon / 3.0 * (1.0 - zeta) *
                                 static_cast<double>(m));
    return std::max(0.0, 1.0 - tail);
}

double chernoff_error_threshold(LaborShare alpha, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        fail(errc::invalid_argument, "epsilon must lie in (0,1)");
    const double a = alpha.value();
    return 2.0 * (1.0 - a) * epsilon / (a * (1.0 - epsilon));
}

double cor63_epsilon(long n, std::int64_t m, double zeta, double c) {
    if (c <= 6.0)
        fail(errc::invalid_argument, "the constant must exceed 6");
    return std::sqrt(c * std::log(static_cast<double>(n)) /
                     (static_cast<double>(m) * (1.0 - zeta)));
}

TrialReport monte_carlo(const FlowMatrix &flows, LaborShare alpha, double zeta, double epsilon,
                        double q, long trials, std::uint64_t seed) {
    if (trials < 1)
        fail(errc::invalid_argument, "monte_carlo needs trials >= 1");
    if (!(q >= 1.0))
        fail(errc::invalid_p, "q-norm requires q >= 1");
    const IoMatrix w = flows.linkage();
    const Vec v_w = influence_direct(w, alpha).v;
    const double threshold = chernoff_error_threshold(alpha, epsilon);

    long successes = 0;
    long resampled = 0;
    for (long t = 0; t < trials; ++t) {
        SampleDiagnostics diag;
        const std::uint64_t trial_seed = mix_key(seed, 0x7472ull, static_cast<std::uint64_t>(t));
        const IoMatrix u = sample_observed(flows, zeta, trial_seed, &diag);
        resampled += diag.resampled_rows;
        const Vec v_u = influence_direct(u, alpha).v;
        if (vec_p_norm(v_u - v_w, q) <= threshold)
            ++successes;
    }

    TrialReport rep;
    rep.trials = trials;
    rep.alpha = alpha.value();
    rep.epsilon = epsilon;
    rep.zeta = zeta;
    rep.q = q;
    rep.empirical_success = static_cast<double>(successes) / static_cast<double>(trials);
    rep.bound_probability =
        chernoff_success_bound(flows.size(), epsilon, zeta, flows.min_positive_flow());
    rep.error_threshold = threshold;
    rep.seed = seed;
    rep.resampled_rows = resampled;
    return rep;
}

} // namespace ionet
