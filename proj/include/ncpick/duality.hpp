// The maps Phi_X^zeta and Psi_Lambda^zeta on the commutant, dual-side point
// evaluation and the comparison of the two interpolation statements for
// central data.
#ifndef NCPICK_DUALITY_HPP
#define NCPICK_DUALITY_HPP

#include <vector>

#include "ncpick/ncfunc.hpp"

namespace ncpick
{

struct MapValue
{
    CommutantElement value;
    Matrix full;
    double tail_bound = 0.0;
};

/// (sum_r T_0r (I_{E^r} (x) a^*) zeta^(r))^*, tail ||a|| c ||zeta||^{K+1} / (1 - ||zeta||).
MapValue phi_map(const SchurCoefficients& coeffs, const DualPoint& zeta, const CommutantElement& a,
                 const ToleranceConfig& tol = {});

/// Literal pairing C(zeta)^* (I (x) a) T^* C(0) on the truncated Fock space.
Matrix phi_map_literal(const SchurCoefficients& coeffs, const DualPoint& zeta, const CommutantElement& a);

/// a Lambda^*.
CommutantElement psi_map(const CommutantElement& lambda, const CommutantElement& a);

/// Literal pairing <C(zeta), (I (x) a Lambda^*) C(0)> over levels 0..k.
Matrix psi_map_literal(const DualPoint& zeta, const CommutantElement& lambda, const CommutantElement& a, int k);

/// max ||Phi_{pq}(a) - Phi_q(Phi_p(a))|| over the sample.
double antihom_check(const NCPolynomial& p, const NCPolynomial& q, const DualPoint& zeta,
                     const std::vector<CommutantElement>& sample, int k);

/// C(zeta)^* (Y (x) I) C(0) = sum_w y_w (Z[w_k] ... Z[w_1])^*. Linear in Y.
CommutantElement dual_eval(const NCPolynomial& y, const DualPoint& zeta, const ToleranceConfig& tol = {});

struct CentralCheck
{
    double dual_side = 0.0;   ///< max_i ||dual_eval(Y, zeta_i) - Lambda_i^*||
    double primal_side = 0.0; ///< max_i ||eval_point(Gamma(Y), zeta_i) - Lambda_i||
    double phi_psi = 0.0;     ///< max_{i,a} ||Phi(a) - Psi(a)||
    double tail_bound = 0.0;
};

/// Checks centrality of points and targets; throws DimensionError otherwise.
void require_central(const ProblemData& problem);

/// Reads T (central blocks t_p I) as X = sum_w conj(t_{rev w}) W_w, takes
/// Y = Gamma^{-1}(X) with the same word coefficients and compares the three
/// equivalent statements. Targets are taken from `problem`.
CentralCheck connection_check(const ProblemData& problem, const SchurCoefficients& coeffs,
                              const std::vector<CommutantElement>& sample);

/// Polynomial read off central upper-triangular coefficients.
NCPolynomial central_polynomial(const SchurCoefficients& coeffs, double tol);

} // namespace ncpick

#endif // NCPICK_DUALITY_HPP
