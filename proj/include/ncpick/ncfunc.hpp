// The interpolant as a noncommutative function on the upper-triangular side:
// top-row coefficients T_0j : E^j (x) H -> H, point evaluation
// T(eta) = sum_r T_0r eta^(r), truncated operators and generator checks.
#ifndef NCPICK_NCFUNC_HPP
#define NCPICK_NCFUNC_HPP

#include <map>
#include <variant>
#include <vector>

#include "ncpick/realization.hpp"

namespace ncpick
{

struct SchurCoefficients
{
    Context ctx;
    int levels = 0;
    std::vector<Matrix> t0;        ///< t0[j] : m_tot x dim(E^j (x) H)
    double coefficient_bound = 1.0; ///< bound on ||T_0r|| used in tail estimates
    bool finite = false;            ///< no coefficients beyond `levels`

    /// Block of T_0j at path p: H_end(p) -> H_source(p).
    Matrix path_slice(int j, Index p) const;
};

/// dim(E^k (x) K) from path counts, without enumerating paths.
double level_dimension(const Context& ctx, int k, const Grading& base);
/// Entries needed for coefficients 0..K of a colligation with the given state grading.
double coefficient_entries(const Context& ctx, int k, const Grading& state);
/// Largest K <= upper whose coefficient recursion fits in `cap` entries (at least 0).
int max_levels_within_cap(const Context& ctx, const Grading& state, double cap, int upper = 64);

/// Q_1 = Y, Q_{k+1} = Q_k (I_{E^k} (x) X), T_0k = Q_k (I_{E^k} (x) Z), T_00 = W.
SchurCoefficients coefficients_from_colligation(const Colligation& coll, int k, double cap = default_level_cap);

struct Evaluation
{
    CommutantElement value;
    Matrix full;
    double tail_bound = 0.0;
};

Evaluation eval_point(const SchurCoefficients& coeffs, const DualPoint& zeta, const ToleranceConfig& tol = {});

struct TruncatedSchurOperator
{
    int levels = 0;
    std::vector<Index> level_offsets; ///< offsets of the levels, plus the total at the end
    Matrix matrix;                    ///< block (i, j) = I_{E^i} (x) T_{0, j-i}
};

TruncatedSchurOperator schur_truncate(const SchurCoefficients& coeffs, int k, double cap = default_level_cap);
double schur_truncate_and_norm(const SchurCoefficients& coeffs, int k, TruncatedSchurOperator* out = nullptr,
                               double cap = default_level_cap);

/// y(i) = sum_{j >= i} (I_{E^i} (x) T_{0, j-i}) u(j) without forming the operator.
std::vector<Matrix> apply_truncated(const SchurCoefficients& coeffs, const std::vector<Matrix>& inputs);

struct IntertwineReport
{
    double residual = 0.0;
    double bound = 0.0;
    int levels_checked = 0;
};

/// Residual of T C(eta) = (I (x) T(eta)) C(eta) on levels 0..check_levels,
/// with certified bound 2c ||eta||^{K+1} / (1 - ||eta||) + residual_tol.
IntertwineReport cauchy_intertwine_check(const SchurCoefficients& coeffs, const DualPoint& zeta, int check_levels,
                                         const ToleranceConfig& tol = {});

struct InducedCreation
{
    Vector xi; ///< one coefficient per edge
};

struct InducedLeftAction
{
    Vector b; ///< one scalar per vertex
};

using Generator = std::variant<DualPoint, CommutantElement, InducedCreation, InducedLeftAction>;

/// (K+1)-level truncations of rho(T_eta) (subdiagonal I_{E^k} (x) eta),
/// rho(phi(a)) = I (x) a, T_xi (x) I_H and phi_infinity(b) (x) I_H.
Matrix generator_matrix(const Context& ctx, const Generator& g, int k);

struct CommutationReport
{
    double creation = 0.0;
    double left_action = 0.0;
    int window = 0; ///< highest input level in the safe window for creation
};

/// Commutators of T^* with the induced generators on vectors supported in the
/// truncation-safe window (levels <= K - 1 for creation, all for left action).
CommutationReport commutation_check(const SchurCoefficients& coeffs, int k, const std::vector<InducedCreation>& xis,
                                    const std::vector<InducedLeftAction>& bs);

using Word = std::vector<int>;

/// Finite sum of monomials c_w W_w over edge words. On the upper-triangular
/// side the word w = (w_1..w_k) sits at path (w_k..w_1) with coefficient c_w^*,
/// so evaluation is sum_w c_w^* Z[w_1]...Z[w_k]: conjugate-linear in c.
class NCPolynomial
{
public:
    explicit NCPolynomial(const Context& ctx) : ctx_(ctx) {}

    static NCPolynomial constant(const Context& ctx, const CommutantElement& c);
    static NCPolynomial monomial(const Context& ctx, const Word& w, const CommutantElement& c);
    static NCPolynomial monomial(const Context& ctx, const Word& w, Scalar c);

    const Context& context() const { return ctx_; }
    const std::map<Word, CommutantElement>& terms() const { return terms_; }
    int degree() const;
    /// Every coefficient is one scalar times the identity.
    bool scalar_coefficients(double tol = 0.0) const;

    void add_term(const Word& w, const CommutantElement& c);
    NCPolynomial operator+(const NCPolynomial& other) const;
    NCPolynomial scaled(Scalar lambda) const;

private:
    Context ctx_;
    std::map<Word, CommutantElement> terms_;
};

/// Word w is admissible when (w_k, ..., w_1) is a path.
bool admissible_word(const Context& ctx, const Word& w);

/// Concatenation-convolution; requires deg p + deg q <= k and either s = 1 or
/// scalar coefficients.
NCPolynomial truncated_multiply(const NCPolynomial& p, const NCPolynomial& q, int k);

/// Upper-triangular coefficients of a polynomial, levels 0..k (finite).
SchurCoefficients schur_coefficients(const NCPolynomial& p, int k);

/// sum_w c_w^* Z[w_1] ... Z[w_k], straight from the words.
Matrix hat_eval(const NCPolynomial& p, const DualPoint& zeta);

} // namespace ncpick

#endif // NCPICK_NCFUNC_HPP
