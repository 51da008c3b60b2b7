#include <ionet/matrix.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace ionet {

const char *errc_name(errc code) {
    switch (code) {
    case errc::non_square: return "NonSquare";
    case errc::negative_entry: return "NegativeEntry";
    case errc::nonzero_diagonal: return "NonzeroDiagonal";
    case errc::zero_row: return "ZeroRow";
    case errc::row_sum_violation: return "RowSumViolation";
    case errc::invalid_p: return "InvalidP";
    case errc::no_convergence: return "NoConvergence";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::singular_system: return "SingularSystem";
    case errc::self_loop_only: return "SelfLoopOnly";
    case errc::spec_mismatch: return "SpecMismatch";
    case errc::degenerate_row: return "DegenerateRow";
    case errc::invalid_delta: return "InvalidDelta";
    case errc::all_missing_row: return "AllMissingRow";
    case errc::not_a_partition: return "NotAPartition";
    case errc::back_edge: return "BackEdge";
    case errc::skip_edge: return "SkipEdge";
    case errc::coupling_too_strong: return "CouplingTooStrong";
    case errc::not_weakly_coupled: return "NotWeaklyCoupled";
    case errc::invalid_k: return "InvalidK";
    case errc::invalid_indices: return "InvalidIndices";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

namespace {

void check_square_finite(const Matrix &raw) {
    if (raw.rows() != raw.cols())
        fail(errc::non_square, "expected a square matrix, got " + std::to_string(raw.rows()) +
                                   "x" + std::to_string(raw.cols()));
    if (!raw.allFinite())
        fail(errc::invalid_argument, "matrix has non-finite entries");
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
        for (Eigen::Index j = 0; j < raw.cols(); ++j)
            if (raw(i, j) < 0.0) {
                std::ostringstream os;
                os << "entry (" << i << "," << j << ") = " << raw(i, j);
                fail(errc::negative_entry, os.str());
            }
}

} // namespace

IoMatrix IoMatrix::validate(const Matrix &raw, ValidationMode mode) {
    check_square_finite(raw);
    const Eigen::Index n = raw.rows();
    if (mode == ValidationMode::strict) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (raw(i, i) != 0.0)
                fail(errc::nonzero_diagonal,
                     "w(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
            const double s = raw.row(i).sum();
            if (std::abs(s - 1.0) > kRowSumTol) {
                std::ostringstream os;
                os << "row " << i << " sums to " << s;
                fail(errc::row_sum_violation, os.str());
            }
        }
        return IoMatrix(raw, true);
    }
    Matrix m = raw;
    m.diagonal().setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = m.row(i).sum();
        if (s <= 0.0)
            fail(errc::zero_row, "row " + std::to_string(i) + " has no off-diagonal mass");
        m.row(i) /= s;
    }
    return IoMatrix(std::move(m), true);
}

IoMatrix IoMatrix::from_substochastic(const Matrix &raw) {
    check_square_finite(raw);
    const Eigen::Index n = raw.rows();
    bool stochastic = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (raw(i, i) != 0.0)
            fail(errc::nonzero_diagonal,
                 "w(" + std::to_string(i) + "," + std::to_string(i) + ") != 0");
        const double s = raw.row(i).sum();
        if (s > 1.0 + kRowSumTol)
            fail(errc::row_sum_violation, "row " + std::to_string(i) + " sums above 1");
        if (std::abs(s - 1.0) > kRowSumTol)
            stochastic = false;
    }
    return IoMatrix(raw, stochastic);
}

double vec_p_norm(const Vec &v, double p) {
    if (std::isinf(p))
        return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    if (!(p >= 1.0))
        fail(errc::invalid_p, "p-norm requires p >= 1");
    if (p == 1.0)
        return v.cwiseAbs().sum();
    if (p == 2.0)
        return v.norm();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        acc += std::pow(std::abs(v(i)), p);
    return std::pow(acc, 1.0 / p);
}

double mat_inf_norm(const Matrix &a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

double mat_1_norm(const Matrix &a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

namespace {

// Deterministic start vector for the power iteration; pseudo-random so an
// adversarial alignment with a singular subspace is not reproducible by
// structured inputs (all-ones, basis vectors, ...).
Vec power_start(Eigen::Index n) {
    Vec v(n);
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    for (Eigen::Index i = 0; i < n; ++i) {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        v(i) = static_cast<double>(z >> 11) * 0x1.0p-53 + 0.5; // in [0.5, 1.5)
    }
    return v;
}

} // namespace

double operator_norm(const Matrix &a, double tol) {
    if (a.size() == 0)
        return 0.0;
    if (!(tol > 0.0))
        fail(errc::invalid_argument, "operator_norm requires tol > 0");
    const Eigen::Index n = a.cols(); // rectangular inputs iterate on A'A
    Vec v = power_start(n);
    v /= v.norm();
    const long cap = 100 * static_cast<long>(std::max(a.rows(), a.cols()));
    double lambda = 0.0;
    for (long it = 0; it < cap; ++it) {
        Vec w = a.transpose() * (a * v);
        const double wn = w.norm();
        if (wn == 0.0)
            return 0.0; // v in the kernel of A'A; for the power start this means A = 0
        lambda = v.dot(w); // Rayleigh quotient of A'A
        // residual ||A'A v - lambda v|| <= tol*lambda bounds the eigenvalue error
        const double res = (w - lambda * v).norm();
        v = w / wn;
        if (res <= tol * lambda)
            return std::sqrt(lambda);
    }
    fail(errc::no_convergence, "power iteration did not reach tol within 100*n iterations");
}

} // namespace ionet
