#ifndef IONET_MISSING_HPP_
#define IONET_MISSING_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <ionet/influence.hpp>
#include <ionet/matrix.hpp>

namespace ionet {

// How an observed matrix is derived from a true one: firm i is missing a d_i
// share of its intermediate input (in the same share units as w), of which
// c(i,j) comes from supplier j. Sum_j c(i,j) = d_i and c(i,j) <= w(i,j).
struct MissingSpec {
    Vec d;
    Matrix c;

    // Checks the internal invariants (c >= 0, sum_j c_ij = d_i, max d_i < 1).
    void check() const;
    // Checks the invariants plus compatibility with the paired true matrix.
    void check_against(const IoMatrix &w) const;
};

// u_ij = (w_ij - c_ij) / (1 - d_i); the row-renormalized matrix after the
// missing flows are removed. Identity when all d_i = 0.
IoMatrix observe(const IoMatrix &w, const MissingSpec &spec);

// (1-a) b_inf / a, the transition-matrix perturbation bound on ||v_U - v_W||_1.
double ipsen_wills_bound(LaborShare alpha, double b_inf);

// d (1-a) (2-d) / (a (1-d)), the worst-case bound when every firm is missing
// at most a d share of its input data.
double delta_share_bound(LaborShare alpha, double delta);

// A named bound with its inputs, the bound value, the measured error and a
// pass flag (measured <= bound + 1e-12).
struct BoundCertificate {
    std::string theorem;
    std::map<std::string, double> inputs;
    double bound = 0.0;
    double measured = 0.0;
    bool holds = false;
};

BoundCertificate make_certificate(std::string theorem, std::map<std::string, double> inputs,
                                  double bound, double measured);

// Emits perturbation certificates for p in {1, 2, inf} (the bound is a 1-norm
// bound and p-norms decrease in p, so one right-hand side covers all three),
// plus the missing-share certificates when delta is supplied.
std::vector<BoundCertificate> certify(const IoMatrix &w, const IoMatrix &u, LaborShare alpha,
                                      std::optional<double> delta = std::nullopt);

} // namespace ionet

#endif // IONET_MISSING_HPP_
