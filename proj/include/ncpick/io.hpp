// JSON problem and solution files. Complex scalars are [re, im] (plain numbers
// are read as real); matrices are row-major nested arrays.
#ifndef NCPICK_IO_HPP
#define NCPICK_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ncpick/ncfunc.hpp"
#include "ncpick/pick.hpp"
#include "ncpick/realization.hpp"

namespace ncpick::io
{

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& where);

/// Applies NCPICK_PSD_TOL, NCPICK_RANK_TOL_FACTOR, NCPICK_RESIDUAL_TOL and
/// NCPICK_TRUNCATION_TOL on top of `base`.
ToleranceConfig tolerances_from_env(ToleranceConfig base = {});

/// Tolerances in the file override `base`; throws ParseError with the field path.
ProblemData parse_problem(const json& j, const ToleranceConfig& base = {});
ProblemData load_problem(const std::string& path, const ToleranceConfig& base = {});
json read_json_file(const std::string& path);
/// Array of points, each an array over edges.
std::vector<DualPoint> parse_points(const json& j, const Context& ctx, const std::string& where = "points");

/// Canonical form (always the quiver form, tolerances included).
json problem_to_json(const ProblemData& problem);
/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string problem_hash(const ProblemData& problem);

struct ResidualTable
{
    std::vector<double> interpolation; ///< ||T(zeta_i) - Lambda_i|| per point
    std::vector<double> tail;          ///< certified tail per point
    double factorization = 0.0;
    double partial_isometry = 0.0;
    double range_condition = 0.0;
    double state_equation = 0.0;
    double output_equation = 0.0;
    double sparsity = 0.0;
    double truncated_norm = 0.0;
    int norm_levels = 0;
};

json residuals_to_json(const ResidualTable& r);
ResidualTable residuals_from_json(const json& j);

struct Solution
{
    std::string problem_hash;
    json problem;
    Colligation colligation;
    SchurCoefficients coefficients;
    double tail_bound = 0.0;
    ResidualTable residuals;
    json verdict;
};

json solution_to_json(const Solution& s);
Solution parse_solution(const json& j);

} // namespace ncpick::io

#endif // NCPICK_IO_HPP
