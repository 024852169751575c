// Constructive half of the interpolation theorem: a PSD factor of the Pick
// matrix gives the pair (A_hat, B_hat), the Douglas partial isometry Omega
// with Omega B_hat = A_hat, and the colligation Omega = [X Z; Y W].
#ifndef NCPICK_REALIZATION_HPP
#define NCPICK_REALIZATION_HPP

#include <vector>

#include "ncpick/pick.hpp"

namespace ncpick
{

struct HatPair
{
    Matrix a_hat; ///< [L^*; V^*]
    Matrix b_hat; ///< [(I_E (x) L^*) zeta; U^*]
    Matrix l;
    double invariant_residual = 0.0; ///< ||A_hat^* A_hat - B_hat^* B_hat||
};

HatPair assemble_hats(const Matrix& l, const ProblemData& problem);

struct DouglasReport
{
    double polar_deviation = 0.0; ///< max |s - 1| over singular values on range(B_hat)
    Index range_rank = 0;
};

/// Omega = polar part of (A_hat pinv(B_hat)) on range(B_hat), zero on its complement.
Matrix douglas_factor(const HatPair& hats, const ToleranceConfig& tol = {}, DouglasReport* report = nullptr);

struct ColligationReport
{
    double norm_excess = 0.0;        ///< max(0, ||Omega|| - 1)
    double partial_isometry = 0.0;   ///< ||(O^*O)^2 - O^*O||
    double factorization = 0.0;      ///< ||Omega B_hat - A_hat|| / (1 + ||A_hat||)
    double range_condition = 0.0;    ///< ||Omega (I - P_range(B_hat))||
    double state_equation = 0.0;     ///< ||L^* - X (I_E (x) L^*) zeta - Z U^*||
    double output_equation = 0.0;    ///< ||V^* - Y (I_E (x) L^*) zeta - W U^*||
    double sparsity = 0.0;           ///< largest entry coupling different vertices
    double polar_deviation = 0.0;
};

/// General colligation with a graded state space K:
/// X : E (x) K -> K, Z : H -> K, Y : E (x) K -> H, W : H -> H.
struct Colligation
{
    Context ctx;
    Grading state;
    Matrix x;
    Matrix z;
    Matrix y;
    Matrix w;
    ColligationReport report;

    Matrix omega() const;
    Index state_dimension() const { return static_cast<Index>(state.size()); }
};

/// Checks shapes; computes norm and sparsity entries of the report.
Colligation make_colligation(const Context& ctx, const Grading& state, Matrix x, Matrix z, Matrix y, Matrix w);

/// Splits Omega (rows: H^(N) then H; columns: E (x) H^(N) then H) and verifies
/// every contract. Throws ResidualError naming the failing equation.
Colligation split_and_verify(const Matrix& omega, const HatPair& hats, const ProblemData& problem,
                             const DouglasReport& douglas = {});

/// pick_matrix -> psd_sqrt_factor -> assemble_hats -> douglas_factor -> split_and_verify.
/// Throws InfeasibleError when the Pick matrix is not PSD.
Colligation synthesize(const ProblemData& problem);

struct SimulationResult
{
    std::vector<Matrix> outputs; ///< y(t) in E^t (x) H, one column per input column
    double input_energy = 0.0;
    double output_energy = 0.0;
};

/// Anti-causal recursion with x(T+1) = 0:
/// x(t) = (I (x) X) x(t+1) + (I (x) Z) u(t), y(t) = (I (x) Y) x(t+1) + (I (x) W) u(t).
SimulationResult simulate_system(const Colligation& coll, const std::vector<Matrix>& inputs);

/// Exact transfer function value W + Y (I_E (x) P) zeta with P = Z + X (I_E (x) P) zeta.
Matrix transfer_value(const Colligation& coll, const DualPoint& zeta);

} // namespace ncpick

#endif // NCPICK_REALIZATION_HPP
