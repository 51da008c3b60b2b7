#include <ionet/random_instances.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ionet {

namespace {

// Random positive split of `total` over the index set, proportional to
// exponential draws so every choice of subset is treated symmetrically.
std::vector<double> random_split(Rng &rng, size_t count, double total) {
    std::vector<double> parts(count);
    double sum = 0.0;
    for (auto &p : parts) {
        p = -std::log(1.0 - rng.unit());
        sum += p;
    }
    if (sum <= 0.0) { // all draws hit exactly zero
        for (auto &p : parts)
            p = total / static_cast<double>(count);
        return parts;
    }
    for (auto &p : parts)
        p *= total / sum;
    return parts;
}

} // namespace

IoMatrix random_io_matrix(Rng &rng, long n) {
    if (n < 2)
        fail(errc::invalid_argument, "random_io_matrix needs n >= 2");
    Matrix m = Matrix::Zero(n, n);
    for (long i = 0; i < n; ++i) {
        std::vector<long> support;
        for (long j = 0; j < n; ++j)
            if (j != i && rng.bernoulli(0.5))
                support.push_back(j);
        if (support.empty()) {
            long j = rng.uniform_int(0, n - 2);
            if (j >= i)
                ++j;
            support.push_back(j);
        }
        const auto parts = random_split(rng, support.size(), 1.0);
        for (size_t t = 0; t < support.size(); ++t)
            m(i, support[t]) = parts[t];
    }
    return IoMatrix::validate(m, ValidationMode::strict);
}

MissingSpec random_missing_spec(Rng &rng, const IoMatrix &w, double delta) {
    if (!(delta >= 0.0) || !(delta < 1.0))
        fail(errc::invalid_delta, "delta must lie in [0,1)");
    const Eigen::Index n = w.size();
    MissingSpec spec;
    spec.d = Vec::Zero(n);
    spec.c = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<Eigen::Index> support;
        for (Eigen::Index j = 0; j < n; ++j)
            if (w(i, j) > 0.0)
                support.push_back(j);
        // choose a nonempty random subset of the row support
        std::vector<Eigen::Index> chosen;
        for (auto j : support)
            if (rng.bernoulli(0.6))
                chosen.push_back(j);
        if (chosen.empty())
            chosen.push_back(support[static_cast<size_t>(
                rng.uniform_int(0, static_cast<long>(support.size()) - 1))]);

        double d = rng.uniform(0.0, delta);
        double available = 0.0;
        for (auto j : chosen)
            available += w(i, j);
        if (d > available)
            d = available * (1.0 - 1e-12); // shrink infeasible draws

        std::vector<double> c(chosen.size());
        auto parts = random_split(rng, chosen.size(), d);
        // clip to c <= w and push the excess back onto unclipped entries
        for (int pass = 0; pass < 64; ++pass) {
            double excess = 0.0;
            double headroom = 0.0;
            for (size_t t = 0; t < chosen.size(); ++t) {
                const double cap = w(i, chosen[t]);
                if (parts[t] > cap) {
                    excess += parts[t] - cap;
                    parts[t] = cap;
                } else {
                    headroom += cap - parts[t];
                }
            }
            if (excess <= 0.0 || headroom <= 0.0)
                break;
            for (size_t t = 0; t < chosen.size(); ++t) {
                const double cap = w(i, chosen[t]);
                if (parts[t] < cap)
                    parts[t] += excess * (cap - parts[t]) / headroom;
            }
        }
        double placed = 0.0;
        for (size_t t = 0; t < chosen.size(); ++t) {
            parts[t] = std::min(parts[t], w(i, chosen[t]));
            spec.c(i, chosen[t]) = parts[t];
            placed += parts[t];
        }
        spec.d(i) = placed;
    }
    spec.check_against(w);
    return spec;
}

Vec random_vec(Rng &rng, long n, double lo, double hi) {
    Vec v(n);
    for (long i = 0; i < n; ++i)
        v(i) = rng.uniform(lo, hi);
    return v;
}

namespace {

Matrix random_chain_matrix(Rng &rng, const std::vector<long> &sizes) {
    const long m = static_cast<long>(sizes.size());
    long n = 0;
    std::vector<long> start(sizes.size() + 1, 0);
    for (long r = 0; r < m; ++r) {
        n += sizes[static_cast<size_t>(r)];
        start[static_cast<size_t>(r) + 1] = n;
    }
    Matrix w = Matrix::Zero(n, n);
    for (long r = 0; r < m; ++r) {
        const long lo = start[static_cast<size_t>(r)], hi = start[static_cast<size_t>(r) + 1];
        for (long i = lo; i < hi; ++i) {
            std::vector<long> own;
            for (long j = lo; j < hi; ++j)
                if (j != i)
                    own.push_back(j);
            if (r == 0) {
                // head block is a closed economy
                const auto parts = random_split(rng, own.size(), 1.0);
                for (size_t t = 0; t < own.size(); ++t)
                    w(i, own[t]) = parts[t];
                continue;
            }
            const long plo = start[static_cast<size_t>(r) - 1];
            const long phi = start[static_cast<size_t>(r)];
            // bias toward in-block mass to keep the coupling weak
            const double in_frac = own.empty() ? 0.0 : rng.uniform(0.35, 0.65);
            if (!own.empty()) {
                const auto parts = random_split(rng, own.size(), in_frac);
                for (size_t t = 0; t < own.size(); ++t)
                    w(i, own[t]) = parts[t];
            }
            const auto parts = random_split(rng, static_cast<size_t>(phi - plo), 1.0 - in_frac);
            for (long j = plo; j < phi; ++j)
                w(i, j) = parts[static_cast<size_t>(j - plo)];
        }
    }
    return w;
}

} // namespace

long min_head_size(double alpha) {
    const double ratio = (1.0 - alpha) / alpha;
    const long need = static_cast<long>(std::ceil(ratio * ratio)) + 1;
    return std::clamp(need, 2L, 8L);
}

std::vector<long> chain_sizes(Rng &rng, double alpha, long blocks, long max_block) {
    std::vector<long> sizes{std::max(min_head_size(alpha), rng.uniform_int(2, max_block))};
    for (long r = 1; r < blocks; ++r)
        sizes.push_back(rng.uniform_int(1, max_block));
    return sizes;
}

std::pair<IoMatrix, ChainPartition> random_weakly_coupled_chain(Rng &rng,
                                                                const std::vector<long> &sizes,
                                                                LaborShare alpha,
                                                                double max_gamma) {
    if (sizes.empty() || sizes.front() < 2)
        fail(errc::invalid_argument, "chain needs a closed head block of size >= 2");
    std::vector<std::vector<int>> blocks;
    int next = 0;
    for (long s : sizes) {
        std::vector<int> blk;
        for (long t = 0; t < s; ++t)
            blk.push_back(next++);
        blocks.push_back(std::move(blk));
    }
    for (int attempt = 0; attempt < 256; ++attempt) {
        IoMatrix w = IoMatrix::validate(random_chain_matrix(rng, sizes),
                                        ValidationMode::strict);
        ChainPartition part = ChainPartition::validate(w, blocks);
        if (decompose(w, part, alpha).gamma <= max_gamma)
            return {std::move(w), std::move(part)};
    }
    fail(errc::no_convergence, "could not draw a weakly coupled chain in 256 attempts");
}

IoMatrix perturb_chain_tail(Rng &rng, const IoMatrix &w, const ChainPartition &part, long k) {
    const long m = part.block_count();
    if (k < 2 || k > m)
        fail(errc::invalid_indices, "tail perturbation needs 2 <= K <= M");
    Matrix u = w.entries();
    const auto &blocks = part.blocks();
    for (long r = k - 1; r < m; ++r) { // 0-based blocks K..M
        const auto &blk = blocks[static_cast<size_t>(r)];
        const auto &prev = blocks[static_cast<size_t>(r - 1)];
        for (int i : blk) {
            std::vector<int> own;
            for (int j : blk)
                if (j != i)
                    own.push_back(j);
            if (r == k - 1) {
                // block K itself: only its own-block columns are >= K, so the
                // slice bought from block K-1 stays fixed
                if (own.empty())
                    continue;
                double fixed = 0.0;
                for (int j : prev)
                    fixed += u(i, j);
                for (int j : own)
                    u(i, j) = 0.0;
                const auto parts = random_split(rng, own.size(), 1.0 - fixed);
                for (size_t t = 0; t < own.size(); ++t)
                    u(i, own[t]) = parts[t];
            } else {
                for (int j : own)
                    u(i, j) = 0.0;
                for (int j : prev)
                    u(i, j) = 0.0;
                const double in_frac = own.empty() ? 0.0 : rng.uniform(0.35, 0.65);
                if (!own.empty()) {
                    const auto parts = random_split(rng, own.size(), in_frac);
                    for (size_t t = 0; t < own.size(); ++t)
                        u(i, own[t]) = parts[t];
                }
                const auto parts = random_split(rng, prev.size(), 1.0 - in_frac);
                for (size_t t = 0; t < prev.size(); ++t)
                    u(i, prev[t]) = parts[t];
            }
        }
    }
    return IoMatrix::validate(u, ValidationMode::strict);
}

std::pair<IoMatrix, long> random_bipartition_instance(Rng &rng, long m1, long m2,
                                                      LaborShare alpha, double max_gamma) {
    const long n = m1 + m2;
    std::vector<int> first;
    for (long i = 0; i < m1; ++i)
        first.push_back(static_cast<int>(i));
    for (int attempt = 0; attempt < 256; ++attempt) {
        Matrix m = Matrix::Zero(n, n);
        for (long i = 0; i < n; ++i) {
            const bool in_first = i < m1;
            std::vector<long> own, other;
            for (long j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                ((j < m1) == in_first ? own : other).push_back(j);
            }
            const double in_frac = own.empty() ? 0.0 : rng.uniform(0.55, 0.9);
            if (!own.empty()) {
                const auto parts = random_split(rng, own.size(), in_frac);
                for (size_t t = 0; t < own.size(); ++t)
                    m(i, own[t]) = parts[t];
            }
            const auto parts = random_split(rng, other.size(), 1.0 - in_frac);
            for (size_t t = 0; t < other.size(); ++t)
                m(i, other[t]) = parts[t];
        }
        IoMatrix w = IoMatrix::validate(m, ValidationMode::strict);
        if (decompose_bipartition(w, first, alpha).gamma <= max_gamma)
            return {std::move(w), m1};
    }
    fail(errc::no_convergence, "could not draw a weakly coupled bipartition in 256 attempts");
}

} // namespace ionet
