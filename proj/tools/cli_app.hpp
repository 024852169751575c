// Subcommands of the ncpick command line tool. Each returns the process exit
// code and writes its report to `out`, diagnostics to `err`.
#ifndef NCPICK_CLI_APP_HPP
#define NCPICK_CLI_APP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncpick/io.hpp"

namespace ncpick::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_input = 1,
    exit_infeasible = 2, ///< infeasible problem or map not completely positive
    exit_cap = 3,
    exit_verification = 4, ///< a residual or re-verification check failed
};

struct Options
{
    std::string input;       ///< problem file (solution file for verify and eval)
    std::string points_path; ///< eval: file with {"points": [...]}
    std::string out_path;
    std::optional<double> tol; ///< overrides residual_tol
    std::optional<int> levels;
    std::optional<double> cap;
    bool machine = false;
    unsigned long long seed = 1;
    std::vector<double> example; ///< compare: r, eps
    double r = 0.5;
    double eps = 0.5;
    bool random_central = false;
    int random_points = 2;
};

int run_check(const Options& opt, std::ostream& out, std::ostream& err);
int run_solve(const Options& opt, std::ostream& out, std::ostream& err);
int run_verify(const Options& opt, std::ostream& out, std::ostream& err);
int run_eval(const Options& opt, std::ostream& out, std::ostream& err);
int run_ms_cp(const Options& opt, std::ostream& out, std::ostream& err);
int run_compare(const Options& opt, std::ostream& out, std::ostream& err);
int run_example(const Options& opt, std::ostream& out, std::ostream& err);

/// Residuals of a stored or freshly synthesized solution. The Douglas
/// residuals are recomputed from the problem's own hats, so solve and verify
/// go through the same arithmetic.
io::ResidualTable residual_table(const ProblemData& problem, const Colligation& coll, const SchurCoefficients& coeffs,
                                 int norm_levels);

/// Smallest K whose evaluation tail is below the truncation tolerance at every
/// point, lowered to what the level cap allows.
int auto_levels(const ProblemData& problem, const Grading& state);

/// Largest L <= k with at most `max_dim` truncated Fock coordinates.
int norm_levels_for(const Context& ctx, int k, double max_dim = 512);

/// Random central scalar problem in the free case d = 1, m = 2, feasible by construction.
ProblemData random_central_problem(int n_points, unsigned long long seed, const ToleranceConfig& tol = {});

} // namespace ncpick::cli

#endif // NCPICK_CLI_APP_HPP
