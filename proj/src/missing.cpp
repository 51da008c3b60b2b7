#include <ionet/missing.hpp>

#include <cmath>
#include <sstream>

namespace ionet {

namespace {
constexpr double kSpecTol = 1e-9;
constexpr double kCertTol = 1e-12;
} // namespace

void MissingSpec::check() const {
    const Eigen::Index n = d.size();
    if (c.rows() != n || c.cols() != n)
        fail(errc::spec_mismatch, "c must be n x n with n = len(d)");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(d(i) >= 0.0) || !(d(i) < 1.0))
            fail(errc::spec_mismatch, "d(" + std::to_string(i) + ") outside [0,1)");
        double sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (c(i, j) < 0.0)
                fail(errc::spec_mismatch, "negative c entry in row " + std::to_string(i));
            sum += c(i, j);
        }
        if (std::abs(sum - d(i)) > kSpecTol) {
            std::ostringstream os;
            os << "row " << i << ": sum c = " << sum << " but d = " << d(i);
            fail(errc::spec_mismatch, os.str());
        }
    }
}

void MissingSpec::check_against(const IoMatrix &w) const {
    check();
    if (d.size() != w.size())
        fail(errc::spec_mismatch, "spec size does not match matrix");
    for (Eigen::Index i = 0; i < w.size(); ++i)
        for (Eigen::Index j = 0; j < w.size(); ++j)
            if (c(i, j) > w(i, j) + kSpecTol) {
                std::ostringstream os;
                os << "c(" << i << "," << j << ") = " << c(i, j) << " exceeds w = " << w(i, j);
                fail(errc::spec_mismatch, os.str());
            }
}

IoMatrix observe(const IoMatrix &w, const MissingSpec &spec) {
    spec.check_against(w);
    const Eigen::Index n = w.size();
    Matrix u(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double keep = 1.0 - spec.d(i);
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double entry = std::max(0.0, w(i, j) - spec.c(i, j)) / keep;
            u(i, j) = entry;
            row_sum += entry;
        }
        if (row_sum <= kSpecTol)
            fail(errc::degenerate_row,
                 "row " + std::to_string(i) + " lost all of its observed input");
    }
    return IoMatrix::validate(u, ValidationMode::strict);
}

double ipsen_wills_bound(LaborShare alpha, double b_inf) {
    if (!(b_inf >= 0.0))
        fail(errc::invalid_argument, "b_inf must be nonnegative");
    return (1.0 - alpha.value()) * b_inf / alpha.value();
}

double delta_share_bound(LaborShare alpha, double delta) {
    if (!(delta >= 0.0) || !(delta < 1.0))
        fail(errc::invalid_delta, "delta must lie in [0,1)");
    const double a = alpha.value();
    return delta * (1.0 - a) * (2.0 - delta) / (a * (1.0 - delta));
}

BoundCertificate make_certificate(std::string theorem, std::map<std::string, double> inputs,
                                  double bound, double measured) {
    BoundCertificate cert;
    cert.theorem = std::move(theorem);
    cert.inputs = std::move(inputs);
    cert.bound = bound;
    cert.measured = measured;
    cert.holds = measured <= bound + kCertTol;
    return cert;
}

std::vector<BoundCertificate> certify(const IoMatrix &w, const IoMatrix &u, LaborShare alpha,
                                      std::optional<double> delta) {
    if (w.size() != u.size())
        fail(errc::invalid_argument, "true and observed matrices differ in size");
    const Matrix b = w.entries() - u.entries();
    const double b_inf = mat_inf_norm(b);
    const Vec diff = influence_direct(u, alpha).v - influence_direct(w, alpha).v;

    const double ps[] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    const char *tags[] = {"1", "2", "inf"};

    std::vector<BoundCertificate> certs;
    const double iw = ipsen_wills_bound(alpha, b_inf);
    for (int k = 0; k < 3; ++k) {
        certs.push_back(make_certificate(
            std::string("ipsen-wills-l") + tags[k],
            {{"alpha", alpha.value()}, {"b_inf", b_inf}, {"p", ps[k]}}, iw,
            vec_p_norm(diff, ps[k])));
    }
    if (delta) {
        const double ds = delta_share_bound(alpha, *delta);
        for (int k = 0; k < 3; ++k) {
            certs.push_back(make_certificate(
                std::string("missing-share-l") + tags[k],
                {{"alpha", alpha.value()}, {"delta", *delta}, {"b_inf", b_inf}, {"p", ps[k]}},
                ds, vec_p_norm(diff, ps[k])));
        }
    }
    return certs;
}

} // namespace ionet
