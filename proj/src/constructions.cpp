#include <ionet/constructions.hpp>

#include <cmath>

namespace ionet {

namespace {

IoMatrix strict(const Matrix &m) { return IoMatrix::validate(m, ValidationMode::strict); }

} // namespace

double star_max_coefficient(long n, double alpha) {
    const double nn = static_cast<double>(n);
    return (1.0 - (nn - 1.0) / nn * alpha) / (2.0 - alpha);
}

double lower_bound_x(long n, double delta, double alpha) {
    const double nn = static_cast<double>(n);
    return (nn - 1.0) * (nn - 1.0 - alpha * (1.0 - delta) * (nn - 2.0) - delta * (nn - 2.0)) /
           (nn * (2.0 * nn - 3.0 - alpha * (nn - 2.0)));
}

double lower_bound_y(long n, double delta, double alpha) {
    const double nn = static_cast<double>(n);
    return (nn - 1.0) * ((1.0 - alpha) * delta * (nn - 2.0) + 1.0) /
           (nn * (2.0 * nn - 3.0 - alpha * (nn - 2.0)));
}

double lower_bound_z(long n, double alpha) {
    const double nn = static_cast<double>(n);
    return (nn - alpha) / (nn * (2.0 * nn - 3.0 - alpha * (nn - 2.0)));
}

double lower_bound_gap(long n, double delta, double alpha) {
    const double nn = static_cast<double>(n);
    return (1.0 - alpha) * delta * (nn - 2.0) * (nn - 1.0) /
           (nn * (2.0 * nn - 3.0 - alpha * (nn - 2.0)));
}

NamedConstruction figure1() {
    Matrix m = Matrix::Zero(6, 6);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    for (Eigen::Index i = 2; i < 6; ++i) {
        m(i, 0) = 0.5;
        m(i, 1) = 0.5;
    }
    NamedConstruction c;
    c.name = "figure1";
    c.w = strict(m);
    c.closed_form = [](double a) {
        Vec v(6);
        v << 0.5 - a / 3.0, 0.5 - a / 3.0, a / 6.0, a / 6.0, a / 6.0, a / 6.0;
        return v;
    };
    c.params = {{"n", 6.0}};
    return c;
}

namespace {

Matrix two_uniform_rows_matrix(long n, double delta) {
    Matrix m = Matrix::Zero(n, n);
    const double u = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index j = 1; j < n; ++j)
        m(0, j) = u;
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != 1)
            m(1, j) = u;
    for (Eigen::Index i = 2; i < n; ++i) {
        m(i, 0) = 1.0 - delta;
        m(i, 1) = delta;
    }
    return m;
}

Vec lower_bound_vec(long n, double delta, double alpha) {
    Vec v(n);
    v(0) = lower_bound_x(n, delta, alpha);
    v(1) = lower_bound_y(n, delta, alpha);
    for (Eigen::Index i = 2; i < n; ++i)
        v(i) = lower_bound_z(n, alpha);
    return v;
}

} // namespace

std::pair<NamedConstruction, NamedConstruction> lower_bound_pair(long n, double delta) {
    if (n <= 2)
        fail(errc::invalid_argument, "lower_bound_pair needs n > 2");
    if (!(delta >= 0.0) || !(delta < 1.0))
        fail(errc::invalid_delta, "delta must lie in [0,1)");
    NamedConstruction w;
    w.name = "lower-bound-true";
    w.w = strict(two_uniform_rows_matrix(n, delta));
    w.closed_form = [n, delta](double a) { return lower_bound_vec(n, delta, a); };
    w.params = {{"n", static_cast<double>(n)}, {"delta", delta}};
    NamedConstruction u;
    u.name = "lower-bound-observed";
    u.w = strict(two_uniform_rows_matrix(n, 0.0));
    u.closed_form = [n](double a) { return lower_bound_vec(n, 0.0, a); };
    u.params = {{"n", static_cast<double>(n)}, {"delta", 0.0}};
    return {std::move(w), std::move(u)};
}

NamedConstruction star(long n) {
    if (n < 2)
        fail(errc::invalid_argument, "star needs n >= 2");
    Matrix m = Matrix::Zero(n, n);
    const double u = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index j = 1; j < n; ++j) {
        m(0, j) = u;
        m(j, 0) = 1.0;
    }
    NamedConstruction c;
    c.name = "star";
    c.w = strict(m);
    c.closed_form = [n](double a) {
        const double x = star_max_coefficient(n, a);
        Vec v = Vec::Constant(n, (1.0 - x) / static_cast<double>(n - 1));
        v(0) = x;
        return v;
    };
    c.params = {{"n", static_cast<double>(n)}};
    return c;
}

NamedConstruction two_hub(long n) {
    if (n < 3)
        fail(errc::invalid_argument, "two_hub needs n >= 3");
    Matrix m = Matrix::Zero(n, n);
    m(0, 1) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i)
        m(i, 0) = 1.0;
    NamedConstruction c;
    c.name = "two-hub";
    c.w = strict(m);
    c.closed_form = [n](double a) {
        const double x = star_max_coefficient(n, a);
        Vec v = Vec::Constant(n, a / static_cast<double>(n));
        v(0) = x;
        v(1) = (1.0 - a) * x + a / static_cast<double>(n);
        return v;
    };
    c.params = {{"n", static_cast<double>(n)}};
    return c;
}

std::pair<NamedConstruction, NamedConstruction> firm_share_pair(long n, double epsilon) {
    if (n <= 2)
        fail(errc::invalid_argument, "firm_share_pair needs n > 2");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        fail(errc::invalid_argument, "epsilon must lie in (0,1)");
    NamedConstruction g;
    g.name = "firm-share-true";
    g.w = strict(two_uniform_rows_matrix(n, epsilon));
    g.closed_form = [n, epsilon](double a) { return lower_bound_vec(n, epsilon, a); };
    g.params = {{"n", static_cast<double>(n)}, {"epsilon", epsilon}};

    // Observed network: firm 1's supply to the periphery is missing, so rows
    // >= 3 renormalize onto firm 2. Same as the delta=0 observed matrix with
    // the first two firms exchanged.
    Matrix q = Matrix::Zero(n, n);
    const double u = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index j = 1; j < n; ++j)
        q(0, j) = u;
    for (Eigen::Index j = 0; j < n; ++j)
        if (j != 1)
            q(1, j) = u;
    for (Eigen::Index i = 2; i < n; ++i)
        q(i, 1) = 1.0;
    NamedConstruction h;
    h.name = "firm-share-observed";
    h.w = strict(q);
    h.closed_form = [n](double a) {
        Vec v = lower_bound_vec(n, 0.0, a);
        std::swap(v(0), v(1));
        return v;
    };
    h.params = {{"n", static_cast<double>(n)}, {"epsilon", epsilon}};
    return {std::move(g), std::move(h)};
}

Vec locality_closed_form(long n, double alpha) {
    const double a = alpha;
    const double nn = static_cast<double>(n);
    const double pn = (1.0 - a / nn) * a * a /
                      (-a * a + std::pow(1.0 - a, nn + 1.0) + a * nn + a - 1.0);
    Vec p(n);
    for (long i = 0; i <= n - 2; ++i) // p_{n-i} for i = 0..n-2
        p(n - 1 - i) = (1.0 - std::pow(1.0 - a, static_cast<double>(i + 1))) / a * pn;
    p(0) = a / nn + (1.0 - a) * p(1);
    return p;
}

NamedConstruction locality_chain(long n, double b) {
    if (n <= 3)
        fail(errc::invalid_argument, "locality_chain needs n > 3");
    if (!(b > 0.0) || b >= 1.0)
        fail(errc::invalid_argument, "b must lie in (0,1)");
    Matrix m = Matrix::Zero(n, n);
    const double u = 1.0 / static_cast<double>(n - 1);
    for (Eigen::Index j = 1; j < n; ++j)
        m(0, j) = u;
    const double spread = b / static_cast<double>(n - 2);
    for (Eigen::Index i = 1; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i)
                continue;
            m(i, j) = (j == i - 1) ? 1.0 - b : spread;
        }
    NamedConstruction c;
    c.name = "locality-full";
    c.w = strict(m);
    c.closed_form = [n](double a) { return locality_closed_form(n, a); };
    c.params = {{"n", static_cast<double>(n)}, {"b", b}};
    // The closed form is the b -> 0 limit; at the default b = 1e-8 the
    // missing-share bound caps the distance at O(b/alpha).
    c.closed_form_tol = 1e-5;
    return c;
}

NamedConstruction locality_truncated(long n, long k, double b) {
    if (n <= 3)
        fail(errc::invalid_argument, "locality_truncated needs n > 3");
    if (k < 1 || k >= n - 1)
        fail(errc::invalid_k, "need 1 <= k < n-1");
    if (!(b > 0.0) || b >= 1.0)
        fail(errc::invalid_argument, "b must lie in (0,1)");
    const long m = k + 1; // vertices n-k..n of the full chain
    Matrix um = Matrix::Zero(m, m);
    for (Eigen::Index j = 1; j < m; ++j)
        um(0, j) = 1.0 / static_cast<double>(k);
    const double spread = b / static_cast<double>(n - 2);
    const double denom = 1.0 - b + static_cast<double>(k - 1) * spread;
    for (Eigen::Index i = 1; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            if (j == i)
                continue;
            um(i, j) = ((j == i - 1) ? 1.0 - b : spread) / denom;
        }
    NamedConstruction c;
    c.name = "locality-truncated";
    c.w = strict(um);
    c.closed_form = [m](double a) { return locality_closed_form(m, a); };
    c.params = {{"n", static_cast<double>(n)}, {"k", static_cast<double>(k)}, {"b", b}};
    c.closed_form_tol = 1e-5;
    return c;
}

Vec pad_truncated(const Vec &v_truncated, long n) {
    if (v_truncated.size() > n)
        fail(errc::invalid_argument, "truncated vector longer than target length");
    Vec out = Vec::Zero(n);
    out.tail(v_truncated.size()) = v_truncated;
    return out;
}

} // namespace ionet
