#ifndef IONET_INFLUENCE_HPP_
#define IONET_INFLUENCE_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <ionet/matrix.hpp>

namespace ionet {

enum class SolveMethod { direct, power, chain };

// Influence vector plus solver metadata. The residual is ||f(v) - v||_1 for
// the teleporting-walk map f(z) = (a/n) 1 + (1-a) W' z.
struct InfluenceResult {
    Vec v;
    SolveMethod method = SolveMethod::direct;
    long iterations = 0; // 0 for the direct solver
    double residual = 0.0;
};

// (I - (1-a) W')^{-1}. Exists for any W with row sums <= 1 since
// ||(1-a) W'||_1 < 1. Kept as an explicit inverse because the chain block
// formulas consume it; the influence solvers never form it.
Matrix leontief_inverse(const IoMatrix &w, LaborShare alpha);

// Solves (I - (1-a) W') v = (a/n) 1 with a pivoted LU factorization.
InfluenceResult influence_direct(const IoMatrix &w, LaborShare alpha);

// Fixed-point iteration z <- (a/n) 1 + (1-a) W' z from the uniform start,
// stopping once ||f(z) - z||_1 <= tol. Contraction factor is 1-a, so the
// result agrees with the direct solve within tol/a in the 1-norm.
InfluenceResult influence_power(const IoMatrix &w, LaborShare alpha, double tol, long cap);

// Default iteration cap: ceil(log tol / log(1-a)) plus margin.
long power_iteration_cap(LaborShare alpha, double tol);

enum class LinkMode { binary, weighted };

// Turns a raw link/adjacency matrix into a row-stochastic IoMatrix using the
// dangling-node rule: rows with out-degree zero (ignoring self-loops) become
// uniform over all other vertices. Binary mode treats any positive entry as a
// unit link; weighted mode keeps proportions and rejects a vertex whose only
// out-edge is a self-loop.
IoMatrix from_link_graph(const Matrix &adjacency, LinkMode mode = LinkMode::binary);

// Vertices are (firm, good) pairs; criticality(i,j) >= 0 weighs how much
// production at vertex i depends on the good of vertex j.
struct FirmGoodNetwork {
    std::vector<std::pair<std::string, std::string>> vertices;
    Matrix criticality;
};

// Normalizes criticalities into an IoMatrix on the N firm-good vertices,
// computes its influence vector, and sums coordinates per firm. The scores
// add up to 1.
std::map<std::string, double> firm_scores(const FirmGoodNetwork &net, LaborShare alpha);

} // namespace ionet

#endif // IONET_INFLUENCE_HPP_
