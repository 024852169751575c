// The Pick-type map of the complete-positivity criterion, Choi matrices and
// the two-problem example where positivity of the Pick matrix and complete
// positivity of the map disagree.
#ifndef NCPICK_CPCHECK_HPP
#define NCPICK_CPCHECK_HPP

#include <functional>

#include "ncpick/pick.hpp"

namespace ncpick
{

using LinearMap = std::function<Matrix(const Matrix&)>;

/// Block (i, j) of the image: S_ij - Lambda_i S_ij Lambda_j^*, where S_ij solves
/// S - zeta_i^*(I_E (x) S) zeta_j = E(B_ij) and E keeps the vertex-diagonal blocks.
Matrix ms_map_apply(const ProblemData& problem, const Matrix& b);

LinearMap ms_map(const ProblemData& problem);

/// [Phi(E_pq)]_{p,q}, matrix units in row-major order (p outer); entry
/// (p*dim + i, q*dim + j) is Phi(E_pq)(i, j).
Matrix choi_matrix(const LinearMap& phi, Index dim);

struct CpVerdict
{
    PsdVerdict choi;
    Matrix witness; ///< V(p, i) = v[p*dim + i] for the most negative eigenvector v
};

CpVerdict cp_verdict(const LinearMap& phi, Index dim, const ToleranceConfig& tol = {});

struct ExampleReport
{
    double r = 0.0;
    double eps = 0.0;
    Matrix cj_pick;
    PsdVerdict cj_verdict;
    double interpolation_residual = 0.0; ///< ||F(Z) - Lambda||, F from the synthesized colligation
    double interpolation_tail = 0.0;
    Matrix choi;
    CpVerdict ms_verdict;
    double minor_det = 0.0; ///< det of the Choi minor on indices {0, 3}
    Matrix ms_at_identity;
    PsdVerdict ms_identity_verdict;
};

/// One point Z = [[0, r], [0, 0]] with target diag(eps, 0) in the free case d = 1, m = 2.
ProblemData example_problem(double r, double eps, const ToleranceConfig& tol = {});

ExampleReport example_cj_vs_ms(double r, double eps, const ToleranceConfig& tol = {});

} // namespace ncpick

#endif // NCPICK_CPCHECK_HPP
