// Seeded random instances: points, commutant elements and contractive graded
// colligations.
#ifndef NCPICK_RANDOM_HPP
#define NCPICK_RANDOM_HPP

#include <random>

#include "ncpick/realization.hpp"

namespace ncpick
{

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
Matrix random_matrix(Index rows, Index cols, Rng& rng);

/// Random point with ||zeta|| = norm.
DualPoint random_point(const Context& ctx, double norm, Rng& rng);

/// Random commutant element with ||a|| = norm.
CommutantElement random_commutant(const Context& ctx, double norm, Rng& rng);

/// Random graded colligation with ||Omega|| = norm.
Colligation random_colligation(const Context& ctx, const Grading& state, double norm, Rng& rng);

/// Interpolation problem whose targets are transfer values of a random
/// colligation with ||Omega|| = omega_norm, so it is feasible by construction.
ProblemData random_feasible_problem(const Context& ctx, int n_points, double point_norm, double omega_norm,
                                    Index state_per_vertex, Rng& rng, const ToleranceConfig& tol = {});

} // namespace ncpick

#endif // NCPICK_RANDOM_HPP
