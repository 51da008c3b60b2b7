#include <ionet/chains.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

namespace ionet {

namespace {

constexpr double kWeakCouplingEdge = 1.0 - 1e-9;

std::vector<int> block_of_index(const std::vector<std::vector<int>> &blocks, Eigen::Index n) {
    std::vector<int> owner(static_cast<size_t>(n), -1);
    for (size_t r = 0; r < blocks.size(); ++r) {
        if (blocks[r].empty())
            fail(errc::not_a_partition, "block " + std::to_string(r) + " is empty");
        for (int i : blocks[r]) {
            if (i < 0 || i >= n)
                fail(errc::not_a_partition, "index " + std::to_string(i) + " out of range");
            if (owner[static_cast<size_t>(i)] != -1)
                fail(errc::not_a_partition, "index " + std::to_string(i) + " listed twice");
            owner[static_cast<size_t>(i)] = static_cast<int>(r);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (owner[static_cast<size_t>(i)] == -1)
            fail(errc::not_a_partition, "index " + std::to_string(i) + " not covered");
    return owner;
}

Matrix submatrix(const Matrix &m, const std::vector<int> &rows, const std::vector<int> &cols) {
    Matrix out(rows.size(), cols.size());
    for (size_t a = 0; a < rows.size(); ++a)
        for (size_t b = 0; b < cols.size(); ++b)
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                m(rows[a], cols[b]);
    return out;
}

// (I - (1-alpha) B')^{-1} for a diagonal block B (row sums <= 1).
Matrix block_leontief(const Matrix &b, double alpha) {
    const Eigen::Index m = b.rows();
    Matrix sys = Matrix::Identity(m, m) - (1.0 - alpha) * b.transpose();
    return Eigen::PartialPivLU<Matrix>(sys).solve(Matrix::Identity(m, m));
}

} // namespace

ChainPartition ChainPartition::validate(const IoMatrix &w,
                                        std::vector<std::vector<int>> blocks) {
    const Eigen::Index n = w.size();
    const std::vector<int> owner = block_of_index(blocks, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int r = owner[static_cast<size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (w(i, j) == 0.0)
                continue;
            const int s = owner[static_cast<size_t>(j)];
            if (s == r || s == r - 1)
                continue;
            const std::string what = "edge (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") from block " + std::to_string(r + 1) + " to supplier in block " +
                                     std::to_string(s + 1);
            if (s == r + 1)
                fail(errc::back_edge, what);
            fail(errc::skip_edge, what);
        }
    }
    return ChainPartition(std::move(blocks), n);
}

ChainDecomposition decompose(const IoMatrix &w, const ChainPartition &part, LaborShare alpha) {
    const long m = part.block_count();
    ChainDecomposition dec;
    dec.alpha = alpha.value();
    for (const auto &blk : part.blocks())
        dec.order.insert(dec.order.end(), blk.begin(), blk.end());
    dec.diag.reserve(static_cast<size_t>(m));
    for (long r = 0; r < m; ++r)
        dec.diag.push_back(submatrix(w.entries(), part.blocks()[r], part.blocks()[r]));
    double gamma = 0.0;
    for (long r = 0; r + 1 < m; ++r) {
        // A_1^{(r,r+1)} = (W_int^{(r,r+1)})' upper block: transpose of the
        // buyers-in-(r+1) x suppliers-in-r cross block.
        Matrix a1 =
            submatrix(w.entries(), part.blocks()[r + 1], part.blocks()[r]).transpose();
        const Matrix l = block_leontief(dec.diag[static_cast<size_t>(r)], dec.alpha);
        const double norm = operator_norm(l * a1, 1e-10);
        dec.interface_t.push_back(std::move(a1));
        dec.interface_norms.push_back(norm);
        gamma = std::max(gamma, (1.0 - dec.alpha) * norm);
    }
    dec.gamma = gamma;
    dec.weakly_coupled = gamma < kWeakCouplingEdge;
    return dec;
}

Matrix reassemble(const ChainDecomposition &dec) {
    const Eigen::Index n = static_cast<Eigen::Index>(dec.order.size());
    Matrix perm = Matrix::Zero(n, n);
    Eigen::Index off = 0;
    std::vector<Eigen::Index> starts;
    for (const auto &d : dec.diag) {
        starts.push_back(off);
        perm.block(off, off, d.rows(), d.cols()) = d;
        off += d.rows();
    }
    for (size_t r = 0; r < dec.interface_t.size(); ++r) {
        const Matrix cross = dec.interface_t[r].transpose(); // buyers x suppliers
        perm.block(starts[r + 1], starts[r], cross.rows(), cross.cols()) = cross;
    }
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(dec.order[static_cast<size_t>(i)], dec.order[static_cast<size_t>(j)]) =
                perm(i, j);
    return out;
}

BipartitionDecomposition decompose_bipartition(const IoMatrix &w,
                                               const std::vector<int> &first_block,
                                               LaborShare alpha) {
    const Eigen::Index n = w.size();
    std::vector<bool> in_first(static_cast<size_t>(n), false);
    for (int i : first_block) {
        if (i < 0 || i >= n)
            fail(errc::not_a_partition, "index " + std::to_string(i) + " out of range");
        if (in_first[static_cast<size_t>(i)])
            fail(errc::not_a_partition, "index " + std::to_string(i) + " listed twice");
        in_first[static_cast<size_t>(i)] = true;
    }
    std::vector<int> second;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!in_first[static_cast<size_t>(i)])
            second.push_back(static_cast<int>(i));
    if (first_block.empty() || second.empty())
        fail(errc::not_a_partition, "bipartition needs two nonempty blocks");

    BipartitionDecomposition bip;
    bip.alpha = alpha.value();
    bip.order = first_block;
    bip.order.insert(bip.order.end(), second.begin(), second.end());
    bip.w1 = submatrix(w.entries(), first_block, first_block);
    bip.w2 = submatrix(w.entries(), second, second);
    bip.a1 = submatrix(w.entries(), second, first_block).transpose();
    bip.a2 = submatrix(w.entries(), first_block, second).transpose();
    const double n1 = operator_norm(block_leontief(bip.w1, bip.alpha) * bip.a1, 1e-10);
    const double n2 = operator_norm(block_leontief(bip.w2, bip.alpha) * bip.a2, 1e-10);
    bip.gamma = (1.0 - bip.alpha) * std::sqrt(n1 * n2);
    return bip;
}

Matrix interaction_matrix(const BipartitionDecomposition &bip) {
    if (bip.gamma >= kWeakCouplingEdge)
        fail(errc::coupling_too_strong,
             "Neumann gate " + std::to_string(bip.gamma) + " is not below 1");
    const double lam = 1.0 - bip.alpha;
    const Eigen::Index m1 = bip.w1.rows(), m2 = bip.w2.rows();
    const Matrix l1 = block_leontief(bip.w1, bip.alpha);
    const Matrix l2 = block_leontief(bip.w2, bip.alpha);
    const Matrix la1 = l1 * bip.a1;
    const Matrix la2 = l2 * bip.a2;
    const Matrix x = Eigen::PartialPivLU<Matrix>(Matrix::Identity(m1, m1) -
                                                 lam * lam * la1 * la2)
                         .solve(Matrix::Identity(m1, m1));
    const Matrix y = Eigen::PartialPivLU<Matrix>(Matrix::Identity(m2, m2) -
                                                 lam * lam * la2 * la1)
                         .solve(Matrix::Identity(m2, m2));
    Matrix s(m1 + m2, m1 + m2);
    s.topLeftCorner(m1, m1) = x;
    s.topRightCorner(m1, m2) = lam * la1 * y;
    s.bottomLeftCorner(m2, m1) = lam * la2 * x;
    s.bottomRightCorner(m2, m2) = y;
    return s;
}

namespace {

Matrix bipartition_iteration_matrix(const BipartitionDecomposition &bip) {
    const double lam = 1.0 - bip.alpha;
    const Eigen::Index m1 = bip.w1.rows(), m2 = bip.w2.rows();
    Matrix t = Matrix::Zero(m1 + m2, m1 + m2);
    t.topRightCorner(m1, m2) = lam * block_leontief(bip.w1, bip.alpha) * bip.a1;
    t.bottomLeftCorner(m2, m1) = lam * block_leontief(bip.w2, bip.alpha) * bip.a2;
    return t;
}

} // namespace

Matrix interaction_matrix_direct(const BipartitionDecomposition &bip) {
    const Eigen::Index n = bip.w1.rows() + bip.w2.rows();
    const Matrix sys = Matrix::Identity(n, n) - bipartition_iteration_matrix(bip);
    return Eigen::PartialPivLU<Matrix>(sys).solve(Matrix::Identity(n, n));
}

std::vector<double> neumann_residuals(const BipartitionDecomposition &bip, int terms) {
    const Matrix s = interaction_matrix_direct(bip);
    const Matrix t = bipartition_iteration_matrix(bip);
    Matrix partial = Matrix::Identity(t.rows(), t.cols());
    Matrix power = partial;
    std::vector<double> residuals;
    for (int k = 0; k < terms; ++k) {
        residuals.push_back(operator_norm(s - partial, 1e-8));
        power = power * t;
        partial += power;
    }
    return residuals;
}

InfluenceResult chain_influence(const IoMatrix &w, const ChainPartition &part,
                                LaborShare alpha) {
    const ChainDecomposition dec = decompose(w, part, alpha);
    if (!dec.weakly_coupled)
        fail(errc::not_weakly_coupled,
             "coupling constant " + std::to_string(dec.gamma) + " is not below 1");
    const double a = alpha.value();
    const long m = part.block_count();
    const Eigen::Index n = part.size();

    std::vector<Vec> theta(static_cast<size_t>(m));
    Vec prev;
    for (long r = m - 1; r >= 0; --r) {
        const Matrix l = block_leontief(dec.diag[static_cast<size_t>(r)], a);
        const double mr = static_cast<double>(part.block_size(r));
        const Vec v_r = (a / mr) * (l * ones(part.block_size(r)));
        Vec th = mr * v_r;
        if (r + 1 < m)
            th += (1.0 - a) * (l * (dec.interface_t[static_cast<size_t>(r)] * prev));
        theta[static_cast<size_t>(r)] = th;
        prev = std::move(th);
    }

    Vec v(n);
    for (long r = 0; r < m; ++r)
        for (long t = 0; t < part.block_size(r); ++t)
            v(part.blocks()[static_cast<size_t>(r)][static_cast<size_t>(t)]) =
                theta[static_cast<size_t>(r)](t) / static_cast<double>(n);

    InfluenceResult out;
    out.v = std::move(v);
    out.method = SolveMethod::chain;
    out.iterations = 0;
    const Vec rhs = (a / static_cast<double>(n)) * ones(n);
    out.residual =
        ((Matrix::Identity(n, n) - (1.0 - a) * w.entries().transpose()) * out.v - rhs)
            .cwiseAbs()
            .sum();
    return out;
}

double truncation_bound(const ChainPartition &part, double gamma, long q, long k_cut) {
    const long m = part.block_count();
    if (q < 1 || q > k_cut || k_cut >= m)
        fail(errc::invalid_indices, "need 1 <= q <= k_cut < M");
    if (!(gamma >= 0.0) || gamma >= kWeakCouplingEdge)
        fail(errc::not_weakly_coupled, "truncation bound needs gamma < 1");
    double tail = 0.0;
    for (long r = k_cut - 1; r < m; ++r) // blocks K..M, 1-based K = k_cut
        tail += static_cast<double>(part.block_size(r));
    const double n = static_cast<double>(part.size());
    return 2.0 * std::sqrt(static_cast<double>(q)) * tail / n *
           std::pow(gamma, static_cast<double>(k_cut - q));
}

double projected_error(const Vec &v_w, const Vec &v_u, const ChainPartition &part, long q) {
    if (v_w.size() != part.size() || v_u.size() != part.size())
        fail(errc::invalid_argument, "vector length does not match partition");
    if (q < 1 || q > part.block_count())
        fail(errc::invalid_indices, "q out of range");
    double acc = 0.0;
    for (long r = 0; r < q; ++r)
        for (int i : part.blocks()[static_cast<size_t>(r)]) {
            const double d = v_w(i) - v_u(i);
            acc += d * d;
        }
    return std::sqrt(acc);
}

double combined_bound(LaborShare alpha, double gamma, double delta_k, long k) {
    if (!(delta_k >= 0.0) || !(delta_k < 1.0))
        fail(errc::invalid_delta, "delta_k must lie in [0,1)");
    if (!(gamma >= 0.0) || gamma >= kWeakCouplingEdge)
        fail(errc::not_weakly_coupled, "combined bound needs gamma < 1");
    if (k < 0)
        fail(errc::invalid_indices, "k must be nonnegative");
    const double a = alpha.value();
    const double share = (1.0 - a) * (2.0 * delta_k - delta_k * delta_k) /
                         (a * (1.0 - delta_k));
    return share + 2.0 * std::pow(gamma, static_cast<double>(k));
}

} // namespace ionet
