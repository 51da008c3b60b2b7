#include <ionet/influence.hpp>

#include <cmath>

#include <Eigen/LU>

namespace ionet {

namespace {

Matrix system_matrix(const IoMatrix &w, double alpha) {
    const Eigen::Index n = w.size();
    return Matrix::Identity(n, n) - (1.0 - alpha) * w.entries().transpose();
}

double l1_residual(const Matrix &a, const Vec &v, const Vec &rhs) {
    return (a * v - rhs).cwiseAbs().sum();
}

void check_result(const IoMatrix &w, double alpha, const Vec &v) {
    const Eigen::Index n = w.size();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(v(i) > 0.0) || !std::isfinite(v(i)))
            fail(errc::singular_system, "influence coefficient " + std::to_string(i) +
                                            " is not strictly positive");
    if (!w.row_stochastic())
        return; // sub-stochastic input: coefficients need not form a distribution
    if (std::abs(v.sum() - 1.0) > 1e-9)
        fail(errc::singular_system, "influence coefficients do not sum to 1");
    const double lo = alpha / static_cast<double>(n);
    const double hi =
        (1.0 - (static_cast<double>(n - 1) / static_cast<double>(n)) * alpha) / (2.0 - alpha) +
        1e-9;
    for (Eigen::Index i = 0; i < n; ++i)
        if (v(i) < lo - 1e-9 || v(i) > hi)
            fail(errc::singular_system, "influence coefficient outside extremal bounds");
}

} // namespace

Matrix leontief_inverse(const IoMatrix &w, LaborShare alpha) {
    const Eigen::Index n = w.size();
    const Matrix a = system_matrix(w, alpha.value());
    Eigen::PartialPivLU<Matrix> lu(a);
    Matrix inv = lu.solve(Matrix::Identity(n, n));
    if (mat_inf_norm(inv * a - Matrix::Identity(n, n)) > 1e-9)
        fail(errc::singular_system, "Leontief inverse residual above 1e-9");
    return inv;
}

InfluenceResult influence_direct(const IoMatrix &w, LaborShare alpha) {
    const Eigen::Index n = w.size();
    const Matrix a = system_matrix(w, alpha.value());
    const Vec rhs = (alpha.value() / static_cast<double>(n)) * ones(n);
    Eigen::PartialPivLU<Matrix> lu(a);
    Vec v = lu.solve(rhs);
    InfluenceResult out;
    out.v = std::move(v);
    out.method = SolveMethod::direct;
    out.iterations = 0;
    out.residual = l1_residual(a, out.v, rhs);
    if (!out.v.allFinite() || out.residual > 1e-9)
        fail(errc::singular_system, "direct solve residual above 1e-9");
    check_result(w, alpha.value(), out.v);
    return out;
}

long power_iteration_cap(LaborShare alpha, double tol) {
    const double steps = std::log(tol) / std::log1p(-alpha.value());
    return static_cast<long>(std::ceil(steps)) + 8;
}

InfluenceResult influence_power(const IoMatrix &w, LaborShare alpha, double tol, long cap) {
    if (!(tol > 0.0))
        fail(errc::invalid_argument, "influence_power requires tol > 0");
    const Eigen::Index n = w.size();
    const double a = alpha.value();
    const Vec teleport = (a / static_cast<double>(n)) * ones(n);
    const Matrix wt = (1.0 - a) * w.entries().transpose();
    Vec z = ones(n) / static_cast<double>(n);
    for (long it = 1; it <= cap; ++it) {
        Vec next = teleport + wt * z;
        const double gap = (next - z).cwiseAbs().sum();
        z = std::move(next);
        if (gap <= tol) {
            InfluenceResult out;
            out.v = std::move(z);
            out.method = SolveMethod::power;
            out.iterations = it;
            out.residual = (teleport + wt * out.v - out.v).cwiseAbs().sum();
            check_result(w, a, out.v);
            return out;
        }
    }
    fail(errc::no_convergence,
         "power iteration reached the cap of " + std::to_string(cap) + " iterations");
}

IoMatrix from_link_graph(const Matrix &adjacency, LinkMode mode) {
    if (adjacency.rows() != adjacency.cols())
        fail(errc::non_square, "link graph adjacency must be square");
    const Eigen::Index n = adjacency.rows();
    if (n < 2)
        fail(errc::invalid_argument, "link graph needs at least 2 vertices");
    if (!adjacency.allFinite())
        fail(errc::invalid_argument, "adjacency has non-finite entries");
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double total = 0.0;
        bool any_edge = false;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double aij = adjacency(i, j);
            if (aij < 0.0)
                fail(errc::negative_entry, "link weight at (" + std::to_string(i) + "," +
                                               std::to_string(j) + ") is negative");
            if (aij > 0.0) {
                any_edge = true;
                if (j != i)
                    total += mode == LinkMode::binary ? 1.0 : aij;
            }
        }
        if (total > 0.0) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i || adjacency(i, j) <= 0.0)
                    continue;
                w(i, j) = (mode == LinkMode::binary ? 1.0 : adjacency(i, j)) / total;
            }
        } else if (any_edge && mode == LinkMode::weighted) {
            fail(errc::self_loop_only,
                 "vertex " + std::to_string(i) + " links only to itself");
        } else {
            // dangling vertex: uniform over every other vertex
            const double u = 1.0 / static_cast<double>(n - 1);
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i)
                    w(i, j) = u;
        }
    }
    return IoMatrix::validate(w, ValidationMode::strict);
}

std::map<std::string, double> firm_scores(const FirmGoodNetwork &net, LaborShare alpha) {
    const Eigen::Index n = static_cast<Eigen::Index>(net.vertices.size());
    if (net.criticality.rows() != n || net.criticality.cols() != n)
        fail(errc::invalid_argument, "criticality matrix size does not match vertex list");
    IoMatrix w = IoMatrix::validate(net.criticality, ValidationMode::lenient);
    const InfluenceResult u = influence_direct(w, alpha);
    std::map<std::string, double> scores;
    for (Eigen::Index i = 0; i < n; ++i)
        scores[net.vertices[static_cast<size_t>(i)].first] += u.v(i);
    double total = 0.0;
    for (const auto &[firm, q] : scores)
        total += q;
    if (std::abs(total - 1.0) > 1e-9)
        fail(errc::singular_system, "firm scores do not sum to 1");
    return scores;
}

} // namespace ionet
