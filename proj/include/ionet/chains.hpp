#ifndef IONET_CHAINS_HPP_
#define IONET_CHAINS_HPP_

#include <vector>

#include <ionet/influence.hpp>
#include <ionet/matrix.hpp>

namespace ionet {

// Ordered blocks V_1..V_M of firm indices forming a directed chain: every
// nonzero w_ij has firm j (the supplier) in firm i's own block or the block
// directly before it, so goods flow forward along the chain and influence
// corrections propagate from later blocks to earlier ones.
class ChainPartition {
  public:
    // Checks the blocks partition {0..n-1} and the edge pattern. An edge whose
    // supplier sits in the next block violates the direction (back_edge); one
    // spanning non-adjacent blocks is a skip_edge.
    static ChainPartition validate(const IoMatrix &w, std::vector<std::vector<int>> blocks);

    long block_count() const noexcept { return static_cast<long>(blocks_.size()); }
    Eigen::Index size() const noexcept { return n_; }
    const std::vector<std::vector<int>> &blocks() const noexcept { return blocks_; }
    long block_size(long r) const { return static_cast<long>(blocks_[r].size()); }

  private:
    ChainPartition(std::vector<std::vector<int>> blocks, Eigen::Index n)
        : blocks_(std::move(blocks)), n_(n) {}

    std::vector<std::vector<int>> blocks_;
    Eigen::Index n_;
};

// Block view of a chain matrix after relabeling to contiguous index ranges:
// diagonal blocks W_r, transposed interface blocks A_1^{(r,r+1)} of size
// m_r x m_{r+1}, and the coupling constant
//   gamma = (1-a) max_r || (I - (1-a) W_r')^{-1} A_1^{(r,r+1)} ||.
struct ChainDecomposition {
    double alpha = 0.0;
    std::vector<int> order; // original index of each relabeled position
    std::vector<Matrix> diag;
    std::vector<Matrix> interface_t;     // A_1^{(r,r+1)}
    std::vector<double> interface_norms; // ||L_r A_1^{(r,r+1)}||
    double gamma = 0.0;
    bool weakly_coupled = true;
};

ChainDecomposition decompose(const IoMatrix &w, const ChainPartition &part, LaborShare alpha);

// Rebuilds the full matrix (original index order) from a decomposition.
Matrix reassemble(const ChainDecomposition &dec);

// Two-block view with interfaces in both directions (no chain constraint):
// W_int' = [[0, A1], [A2, 0]] in the relabeled basis. gamma is the Neumann
// gate (1-a) sqrt(||L1 A1|| ||L2 A2||); below 1 the interaction series
// converges absolutely.
struct BipartitionDecomposition {
    double alpha = 0.0;
    std::vector<int> order;
    Matrix w1, w2;
    Matrix a1, a2;
    double gamma = 0.0;
};

BipartitionDecomposition decompose_bipartition(const IoMatrix &w,
                                               const std::vector<int> &first_block,
                                               LaborShare alpha);

// Interaction matrix S = (I - (1-a) L_perp W_int')^{-1} assembled from the
// closed block formula
//   S = [[X, (1-a) L1 A1 Y], [(1-a) L2 A2 X, Y]],
//   X = (I - (1-a)^2 L1 A1 L2 A2)^{-1},  Y = (I - (1-a)^2 L2 A2 L1 A1)^{-1}.
// Refused (coupling_too_strong) when the Neumann gate is >= 1; the direct
// inverse below stays available in that regime.
Matrix interaction_matrix(const BipartitionDecomposition &bip);

// Same S by direct inversion of the defining expression.
Matrix interaction_matrix_direct(const BipartitionDecomposition &bip);

// ||S - sum_{k<=terms} ((1-a) L_perp W_int')^k|| for successive partial sums;
// exposes the geometric decay of the interaction series.
std::vector<double> neumann_residuals(const BipartitionDecomposition &bip, int terms);

// Influence vector through the chain telescoping: per-block vectors
// v_r = (a/m_r) (I - (1-a) W_r')^{-1} 1 combined by
// theta_r = m_r v_r + S_hat^{(r)} theta_{r+1}, S_hat^{(r)} = (1-a) L_r A_1.
// Requires weak coupling; equals the direct solve.
InfluenceResult chain_influence(const IoMatrix &w, const ChainPartition &part,
                                LaborShare alpha);

// 2 sqrt(q) |V_K u ... u V_M| / N * gamma^(K-q): bound on the Euclidean error
// of the first q blocks' coordinates when only data about suppliers in blocks
// >= K (columns of the difference) is wrong. Blocks are 1-based, K = k_cut.
double truncation_bound(const ChainPartition &part, double gamma, long q, long k_cut);

// ||P_q (v_w - v_u)||_2 over the coordinates of V_1..V_q.
double projected_error(const Vec &v_w, const Vec &v_u, const ChainPartition &part, long q);

// Missing-share term plus chain tail term:
// (1-a)(2 d_k - d_k^2) / (a (1-d_k)) + 2 gamma^k. Bounds the per-coordinate
// error on V_1 when firms in V_1..V_{k+1} miss at most a d_k input share and
// data beyond is arbitrary.
double combined_bound(LaborShare alpha, double gamma, double delta_k, long k);

} // namespace ionet

#endif // IONET_CHAINS_HPP_
