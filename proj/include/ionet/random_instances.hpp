#ifndef IONET_RANDOM_INSTANCES_HPP_
#define IONET_RANDOM_INSTANCES_HPP_

#include <utility>
#include <vector>

#include <ionet/chains.hpp>
#include <ionet/missing.hpp>
#include <ionet/stochastic.hpp>

namespace ionet {

// Deterministic, platform-independent draws on top of the counter stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : stream_(seed) {}

    double unit() { return stream_.next_unit(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    long uniform_int(long lo, long hi) { // inclusive range
        return lo + static_cast<long>(stream_.next_u64() %
                                      static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool bernoulli(double p) { return unit() < p; }
    std::uint64_t next_u64() { return stream_.next_u64(); }

  private:
    CounterRng stream_;
};

// Row-stochastic matrix with random support (every row keeps at least one
// off-diagonal entry) and random positive weights.
IoMatrix random_io_matrix(Rng &rng, long n);

// Missing-data description with d_i uniform in [0, delta], spread over a
// random subset of row i's support by a random split, clipped to c <= w and
// rescaled; infeasible d_i shrink to what the subset supports.
MissingSpec random_missing_spec(Rng &rng, const IoMatrix &w, double delta);

// Dense random vector with entries in [lo, hi].
Vec random_vec(Rng &rng, long n, double lo, double hi);

// Weakly coupled directed chain: first block is closed (needs size >= 2),
// later rows split their mass between the previous block and their own.
// Rejection-samples until the coupling constant is at most max_gamma.
std::pair<IoMatrix, ChainPartition> random_weakly_coupled_chain(
    Rng &rng, const std::vector<long> &sizes, LaborShare alpha, double max_gamma = 0.95);

// Closed head blocks have ||(I-(1-a)W_1')^{-1}|| ~ 1/a, so weak coupling
// needs the head to widen as alpha shrinks: roughly m_1 > ((1-a)/a)^2.
long min_head_size(double alpha);

// Random block sizes for a feasible weakly coupled chain: `blocks` blocks of
// at most max_block firms each, with the head widened per min_head_size.
std::vector<long> chain_sizes(Rng &rng, double alpha, long blocks, long max_block);

// Rewrites the data about suppliers in blocks K..M (1-based K >= 2): rows of
// blocks past K are redrawn and block K's rows redistribute their own-block
// mass, leaving every column of blocks < K untouched. Returns a matrix with
// the same chain structure.
IoMatrix perturb_chain_tail(Rng &rng, const IoMatrix &w, const ChainPartition &part, long k);

// Two-block matrix with cross edges in both directions whose Neumann gate is
// at most max_gamma; returns the matrix and the size of the first block.
std::pair<IoMatrix, long> random_bipartition_instance(Rng &rng, long m1, long m2,
                                                      LaborShare alpha,
                                                      double max_gamma = 0.9);

} // namespace ionet

#endif // IONET_RANDOM_INSTANCES_HPP_
