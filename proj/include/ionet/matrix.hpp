#ifndef IONET_MATRIX_HPP_
#define IONET_MATRIX_HPP_

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include <ionet/errors.hpp>

namespace ionet {

using Vec = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Vec ones(Eigen::Index n) { return Vec::Ones(n); }

constexpr double kRowSumTol = 1e-9;

// Share of labor in production; also the teleport probability of the
// associated random walk. Strictly inside (0,1).
class LaborShare {
  public:
    explicit LaborShare(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            fail(errc::invalid_argument, "labor share must lie in (0,1)");
    }
    double value() const noexcept { return alpha_; }

  private:
    double alpha_;
};

enum class ValidationMode { strict, lenient };

// Input-output linkage matrix: nonnegative, zero diagonal, rows summing to 1
// (or at most 1 for sub-stochastic matrices used by the chain algebra, where
// invertibility of I-(1-a)W' still holds).
class IoMatrix {
  public:
    IoMatrix() : stochastic_(false) {} // empty placeholder, size 0

    // Validates a raw square matrix. Strict mode rejects any invariant
    // violation; lenient mode zeroes the diagonal and renormalizes rows.
    static IoMatrix validate(const Matrix &raw, ValidationMode mode);

    // Accepts rows summing to anything in [0, 1+tol]. Used for block-extracted
    // and chain matrices that are not themselves full economies.
    static IoMatrix from_substochastic(const Matrix &raw);

    Eigen::Index size() const noexcept { return m_.rows(); }
    const Matrix &entries() const noexcept { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    // True when every row sums to 1 within tolerance.
    bool row_stochastic() const noexcept { return stochastic_; }

  private:
    IoMatrix(Matrix m, bool stochastic) : m_(std::move(m)), stochastic_(stochastic) {}

    Matrix m_;
    bool stochastic_;
};

// (sum_i |v_i|^p)^(1/p); max |v_i| for p = infinity. Throws invalid_p for p < 1.
double vec_p_norm(const Vec &v, double p);

// Maximum absolute row sum.
double mat_inf_norm(const Matrix &a);

// Maximum absolute column sum.
double mat_1_norm(const Matrix &a);

// Largest singular value via power iteration on A'A, to relative accuracy tol.
// Accepts rectangular inputs (block-interface products are not square).
// Iteration cap is 100*max(rows, cols); exceeding it raises no_convergence.
double operator_norm(const Matrix &a, double tol = 1e-10);

} // namespace ionet

#endif // IONET_MATRIX_HPP_
