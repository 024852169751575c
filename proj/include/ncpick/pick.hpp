// Displacement operator, Stein solve and the Pick matrix of an interpolation
// problem with points zeta_1..zeta_N and commutant targets Lambda_1..Lambda_N.
#ifndef NCPICK_PICK_HPP
#define NCPICK_PICK_HPP

#include <vector>

#include "ncpick/correspondence.hpp"

namespace ncpick
{

inline constexpr double default_level_cap = 2e6;

struct ProblemData
{
    Context ctx;
    std::vector<DualPoint> points;
    std::vector<CommutantElement> targets;
    ToleranceConfig tol;
    double level_cap = default_level_cap;

    int size() const { return static_cast<int>(points.size()); }
};

/// Validates shapes, point norms and tolerances.
ProblemData make_problem(const Context& ctx, std::vector<DualPoint> points, std::vector<CommutantElement> targets,
                         const ToleranceConfig& tol = {}, double level_cap = default_level_cap);

/// N x N array of commutant blocks.
using BlockMatrix = std::vector<std::vector<CommutantElement>>;

/// Full N*m_tot matrix, point-major.
Matrix assemble(const BlockMatrix& b);
/// Inverse of assemble; each block is checked for commutant membership.
BlockMatrix split_blocks(const Context& ctx, const Matrix& full, int n, const ToleranceConfig& tol = {});

class InfeasibleError : public Error
{
public:
    explicit InfeasibleError(PsdVerdict verdict);
    PsdVerdict verdict;
};

struct PickMatrix
{
    enum class Route
    {
        stein,
        series
    };

    BlockMatrix blocks;
    Matrix assembled;
    Route route = Route::stein;
    int series_levels = -1; ///< truncation level of the series route
    double tail_bound = 0.0;
    double asymmetry = 0.0; ///< max ||A_ij - A_ji^*|| before symmetrization
    double residual = 0.0;  ///< displacement residual of the Stein route
};

/// theta(B)_ij at vertex u = sum_{e: u -> v} Z_i[e]^* (B_ij)_v Z_j[e].
BlockMatrix theta_apply(const std::vector<DualPoint>& points, const BlockMatrix& b);

/// Per-vertex solution of S - zeta_i^*(I_E (x) S) zeta_j = R for one pair.
CommutantElement stein_solve_pair(const DualPoint& zi, const DualPoint& zj, const CommutantElement& rhs);

/// Unique A with A - theta(A) = RHS; the residual is verified on the literal
/// form zeta^*(I_E (x) A) zeta and reported through `residual`.
BlockMatrix stein_solve(const std::vector<DualPoint>& points, const BlockMatrix& rhs, const ToleranceConfig& tol = {},
                        double* residual = nullptr);

/// Blocks I - Lambda_i^* Lambda_j.
BlockMatrix pick_rhs(const ProblemData& problem);

PickMatrix pick_matrix(const ProblemData& problem);

/// Truncated series sum_k (zeta_i^(k))^* (I (x) (I - Lambda_i^* Lambda_j)) zeta_j^(k).
/// K is the smallest level with tail <= tol, lowered to the level cap. With
/// `strict` a cap-limited K throws CapExceeded instead.
PickMatrix pick_matrix_series(const ProblemData& problem, double tol, bool strict = false);

PsdVerdict feasibility(const PickMatrix& a, const ToleranceConfig& tol = {});

/// ||A - theta(A) - RHS|| using the literal amplified form.
double displacement_residual(const std::vector<DualPoint>& points, const BlockMatrix& a, const BlockMatrix& rhs);

} // namespace ncpick

#endif // NCPICK_PICK_HPP
