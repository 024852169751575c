#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>

#include "ncpick/cpcheck.hpp"
#include "ncpick/duality.hpp"
#include "ncpick/random.hpp"

namespace ncpick::cli
{

using io::json;

namespace
{

constexpr double reverify_tol = 1e-12;

void render(const json& j, std::ostream& os, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            os << pad << key << ":\n";
            render(value, os, indent + 2);
        } else if (value.is_string()) {
            os << pad << key << ": " << value.get<std::string>() << "\n";
        } else {
            os << pad << key << ": " << value.dump() << "\n";
        }
    }
}

void emit(const Options& opt, const json& report, std::ostream& out)
{
    if (opt.machine) {
        out << report.dump(2) << "\n";
    } else {
        json rest = report;
        for (const char* key : {"summary", "verdict"}) {
            if (rest.contains(key)) {
                out << key << ": " << rest.at(key).get<std::string>() << "\n";
                rest.erase(key);
            }
        }
        render(rest, out, 0);
    }
}

ToleranceConfig base_tolerances(const Options& opt)
{
    ToleranceConfig tol = io::tolerances_from_env();
    if (opt.tol) {
        tol.residual_tol = *opt.tol;
    }
    tol.validate();
    return tol;
}

ProblemData load(const Options& opt)
{
    const ToleranceConfig base = base_tolerances(opt);
    ProblemData p = io::load_problem(opt.input, base);
    if (opt.tol) {
        p.tol.residual_tol = *opt.tol;
    }
    if (opt.cap) {
        if (!(*opt.cap > 0)) {
            throw ParseError("--cap must be positive");
        }
        p.level_cap = *opt.cap;
    }
    return p;
}

json vector_json(const RealVector& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

json complex_vector_json(const Vector& v)
{
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(json::array({v(i).real(), v(i).imag()}));
    }
    return out;
}

json blocks_json(const CommutantElement& a)
{
    json out = json::array();
    for (const Matrix& b : a.blocks()) {
        out.push_back(io::matrix_to_json(b));
    }
    return out;
}

json verdict_json(const PsdVerdict& v)
{
    json out = {{"is_psd", v.is_psd}, {"min_eigenvalue", v.min_eigenvalue}, {"threshold", v.threshold}};
    if (!v.is_psd) {
        out["witness"] = complex_vector_json(v.witness);
    }
    return out;
}

void write_output(const Options& opt, const json& j, std::ostream& out)
{
    if (opt.out_path.empty()) {
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(opt.out_path);
    if (!f) {
        throw ParseError(opt.out_path + ": cannot write file");
    }
    f << j.dump(2) << "\n";
}

int guarded(const std::function<int()>& body, std::ostream& err)
{
    try {
        return body();
    } catch (const InfeasibleError& e) {
        err << "infeasible: min eigenvalue " << e.verdict.min_eigenvalue << "\n";
        return exit_infeasible;
    } catch (const CapExceeded& e) {
        err << e.what() << "\n";
        return exit_cap;
    } catch (const ResidualError& e) {
        err << e.what() << "\n";
        return exit_verification;
    } catch (const IndefiniteError& e) {
        err << e.what() << "\n";
        return exit_infeasible;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const io::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }
}

std::vector<double> flatten(const io::ResidualTable& r)
{
    std::vector<double> v = r.interpolation;
    v.insert(v.end(), r.tail.begin(), r.tail.end());
    v.insert(v.end(), {r.factorization, r.partial_isometry, r.range_condition, r.state_equation, r.output_equation,
                       r.sparsity, r.truncated_norm, static_cast<double>(r.norm_levels)});
    return v;
}

/// Which thresholds the residual table violates.
std::vector<std::string> table_failures(const io::ResidualTable& r, const ToleranceConfig& tol)
{
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < r.interpolation.size(); ++i) {
        if (!(r.interpolation[i] <= r.tail[i] + tol.residual_tol)) {
            bad.push_back("interpolation[" + std::to_string(i) + "]");
        }
    }
    const std::pair<const char*, double> checks[] = {{"factorization", r.factorization},
                                                     {"partial_isometry", r.partial_isometry},
                                                     {"range_condition", r.range_condition},
                                                     {"state_equation", r.state_equation},
                                                     {"output_equation", r.output_equation},
                                                     {"sparsity", r.sparsity}};
    for (const auto& [name, value] : checks) {
        if (!(value <= tol.residual_tol)) {
            bad.emplace_back(name);
        }
    }
    if (!(r.truncated_norm <= 1.0 + tol.residual_tol)) {
        bad.emplace_back("truncated_norm");
    }
    return bad;
}

std::vector<CommutantElement> central_sample(const Context& ctx, unsigned long long seed)
{
    Rng rng(seed);
    return {CommutantElement::identity(ctx), random_commutant(ctx, 1.0, rng), random_commutant(ctx, 0.5, rng)};
}

} // namespace

int norm_levels_for(const Context& ctx, int k, double max_dim)
{
    const Grading h = ctx.h_grading();
    double total = 0.0;
    int levels = -1;
    for (int j = 0; j <= k; ++j) {
        total += level_dimension(ctx, j, h);
        if (total > max_dim) {
            break;
        }
        levels = j;
    }
    return std::max(levels, 0);
}

int auto_levels(const ProblemData& problem, const Grading& state)
{
    constexpr int upper = 200;
    int needed = 0;
    for (const DualPoint& z : problem.points) {
        const double n = z.norm();
        if (n == 0.0) {
            continue;
        }
        int k = 0;
        while (k < upper && std::pow(n, k + 1) / (1.0 - n) > problem.tol.truncation_tol) {
            ++k;
        }
        needed = std::max(needed, k);
    }
    return std::min(needed, max_levels_within_cap(problem.ctx, state, problem.level_cap, upper));
}

io::ResidualTable residual_table(const ProblemData& problem, const Colligation& coll, const SchurCoefficients& coeffs,
                                 int norm_levels)
{
    io::ResidualTable t;
    ToleranceConfig loose = problem.tol;
    loose.residual_tol = 1e300;
    for (int i = 0; i < problem.size(); ++i) {
        const Evaluation ev = eval_point(coeffs, problem.points[i], loose);
        t.interpolation.push_back(op_norm((ev.full - problem.targets[i].full()).eval()));
        t.tail.push_back(ev.tail_bound);
    }
    const PickMatrix a = pick_matrix(problem);
    const HatPair hats = assemble_hats(psd_sqrt_factor(a.assembled, problem.tol), problem);
    ProblemData relaxed = problem;
    relaxed.tol.residual_tol = 1e300;
    const Colligation checked = split_and_verify(coll.omega(), hats, relaxed);
    t.factorization = checked.report.factorization;
    t.partial_isometry = checked.report.partial_isometry;
    t.range_condition = checked.report.range_condition;
    t.state_equation = checked.report.state_equation;
    t.output_equation = checked.report.output_equation;
    t.sparsity = checked.report.sparsity;
    t.norm_levels = std::min(norm_levels, coeffs.levels);
    t.truncated_norm = schur_truncate_and_norm(coeffs, t.norm_levels, nullptr, problem.level_cap);
    return t;
}

ProblemData random_central_problem(int n_points, unsigned long long seed, const ToleranceConfig& tol)
{
    Rng rng(seed);
    const Context scalar = free_context(1, 1);
    const ProblemData base = random_feasible_problem(scalar, n_points, 0.8, 0.95, 2, rng, tol);
    const Context ctx = free_context(1, 2);
    const Matrix id = Matrix::Identity(2, 2);
    std::vector<DualPoint> points;
    std::vector<CommutantElement> targets;
    for (int i = 0; i < n_points; ++i) {
        points.emplace_back(ctx, std::vector<Matrix>{base.points[i].block(0)(0, 0) * id});
        targets.emplace_back(ctx, std::vector<Matrix>{base.targets[i].block(0)(0, 0) * id});
    }
    return make_problem(ctx, std::move(points), std::move(targets), tol);
}

int run_check(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const ProblemData problem = load(opt);
            const PickMatrix a = pick_matrix(problem);
            const PsdVerdict v = feasibility(a, problem.tol);
            std::vector<double> margins;
            for (const DualPoint& z : problem.points) {
                margins.push_back(1.0 - z.norm());
            }
            const json report = {{"verdict", v.is_psd ? "feasible" : "infeasible"},
                                 {"pick_spectrum", vector_json(hermitian_eig(a.assembled).values)},
                                 {"psd", verdict_json(v)},
                                 {"norm_margins", margins},
                                 {"stein_residual", a.residual},
                                 {"asymmetry", a.asymmetry}};
            emit(opt, report, out);
            return v.is_psd ? exit_ok : exit_infeasible;
        },
        err);
}

int run_solve(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const ProblemData problem = load(opt);
            const PickMatrix a = pick_matrix(problem);
            const PsdVerdict v = feasibility(a, problem.tol);
            if (!v.is_psd) {
                emit(opt, {{"verdict", "infeasible"}, {"psd", verdict_json(v)}}, out);
                return static_cast<int>(exit_infeasible);
            }
            const Colligation coll = synthesize(problem);
            const int k = opt.levels ? *opt.levels : auto_levels(problem, coll.state);
            if (k < 0) {
                throw ParseError("--levels must be non-negative");
            }
            const SchurCoefficients coeffs = coefficients_from_colligation(coll, k, problem.level_cap);
            const io::ResidualTable table =
                residual_table(problem, coll, coeffs, norm_levels_for(problem.ctx, k));
            const std::vector<std::string> failures = table_failures(table, problem.tol);
            double tail = 0.0;
            for (double t : table.tail) {
                tail = std::max(tail, t);
            }
            io::Solution sol{io::problem_hash(problem),
                             io::problem_to_json(problem),
                             coll,
                             coeffs,
                             tail,
                             table,
                             {{"feasible", true},
                              {"pick_min_eigenvalue", v.min_eigenvalue},
                              {"polar_deviation", coll.report.polar_deviation},
                              {"residuals_within_tolerance", failures.empty()}}};
            const json sol_json = io::solution_to_json(sol);
            if (!opt.out_path.empty()) {
                write_output(opt, sol_json, out);
            }
            json report = {{"verdict", failures.empty() ? "solved" : "residuals out of tolerance"},
                           {"levels", k},
                           {"tail_bound", tail},
                           {"residuals", io::residuals_to_json(table)}};
            if (!failures.empty()) {
                report["failed"] = failures;
            }
            if (opt.out_path.empty() && opt.machine) {
                report["solution"] = sol_json;
            }
            emit(opt, report, out);
            return static_cast<int>(failures.empty() ? exit_ok : exit_verification);
        },
        err);
}

int run_verify(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const io::Solution sol = io::parse_solution(io::read_json_file(opt.input));
            const ProblemData problem = io::parse_problem(sol.problem);
            std::vector<std::string> failures;
            if (io::problem_hash(problem) != sol.problem_hash) {
                failures.emplace_back("problem_hash");
            }
            const io::ResidualTable table =
                residual_table(problem, sol.colligation, sol.coefficients, sol.residuals.norm_levels);
            const std::vector<double> now = flatten(table);
            const std::vector<double> recorded = flatten(sol.residuals);
            double drift = 0.0;
            if (now.size() != recorded.size()) {
                failures.emplace_back("residual table shape");
            } else {
                for (std::size_t i = 0; i < now.size(); ++i) {
                    drift = std::max(drift, std::abs(now[i] - recorded[i]));
                }
                if (!(drift <= reverify_tol)) {
                    failures.emplace_back("residual drift");
                }
            }
            for (const std::string& f : table_failures(table, problem.tol)) {
                failures.push_back(f);
            }
            json report = {{"verdict", failures.empty() ? "verified" : "verification failed"},
                           {"max_residual_drift", drift},
                           {"residuals", io::residuals_to_json(table)}};
            if (!failures.empty()) {
                report["failed"] = failures;
            }
            emit(opt, report, out);
            return static_cast<int>(failures.empty() ? exit_ok : exit_verification);
        },
        err);
}

int run_eval(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const io::Solution sol = io::parse_solution(io::read_json_file(opt.input));
            const ProblemData problem = io::parse_problem(sol.problem);
            const json pj = io::read_json_file(opt.points_path);
            if (!pj.is_object() || !pj.contains("points")) {
                throw ParseError(opt.points_path + ": missing field 'points'");
            }
            const std::vector<DualPoint> points = io::parse_points(pj.at("points"), problem.ctx);
            ToleranceConfig loose = problem.tol;
            loose.residual_tol = 1e300;
            json values = json::array();
            for (const DualPoint& z : points) {
                const Evaluation ev = eval_point(sol.coefficients, z, loose);
                const Matrix exact = transfer_value(sol.colligation, z);
                values.push_back({{"value", blocks_json(commutant_embed_check(problem.ctx, ev.full, problem.tol))},
                                  {"tail_bound", ev.tail_bound},
                                  {"transfer_difference", op_norm((ev.full - exact).eval())}});
            }
            emit(opt, {{"levels", sol.coefficients.levels}, {"values", values}}, out);
            return static_cast<int>(exit_ok);
        },
        err);
}

int run_ms_cp(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const ProblemData problem = load(opt);
            const Index dim = problem.size() * problem.ctx.m_tot();
            const CpVerdict v = cp_verdict(ms_map(problem), dim, problem.tol);
            json report = {{"verdict", v.choi.is_psd ? "completely positive" : "not completely positive"},
                           {"choi", verdict_json(v.choi)}};
            if (!v.choi.is_psd) {
                report["witness"] = io::matrix_to_json(v.witness);
            }
            emit(opt, report, out);
            return static_cast<int>(v.choi.is_psd ? exit_ok : exit_infeasible);
        },
        err);
}

int run_compare(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            if (!opt.example.empty()) {
                if (opt.example.size() != 2) {
                    throw ParseError("--example takes r and eps");
                }
                const ExampleReport rep = example_cj_vs_ms(opt.example[0], opt.example[1], base_tolerances(opt));
                const std::string summary = std::string("CJ: ") + (rep.cj_verdict.is_psd ? "feasible" : "infeasible") +
                                            "; MS: " +
                                            (rep.ms_verdict.choi.is_psd ? "CP" : "not CP (min Choi eig < 0)");
                const json report = {{"summary", summary},
                                     {"cj_pick", io::matrix_to_json(rep.cj_pick)},
                                     {"cj", verdict_json(rep.cj_verdict)},
                                     {"interpolation_residual", rep.interpolation_residual},
                                     {"interpolation_tail", rep.interpolation_tail},
                                     {"ms_choi", verdict_json(rep.ms_verdict.choi)},
                                     {"choi_minor_det", rep.minor_det},
                                     {"ms_at_identity", io::matrix_to_json(rep.ms_at_identity)},
                                     {"ms_at_identity_psd", verdict_json(rep.ms_identity_verdict)}};
                emit(opt, report, out);
                return static_cast<int>(exit_ok);
            }
            const ProblemData problem = load(opt);
            const PsdVerdict cj = feasibility(pick_matrix(problem), problem.tol);
            const Index dim = problem.size() * problem.ctx.m_tot();
            const CpVerdict ms = cp_verdict(ms_map(problem), dim, problem.tol);
            json report = {{"summary", std::string("CJ: ") + (cj.is_psd ? "feasible" : "infeasible") +
                                           "; MS: " + (ms.choi.is_psd ? "CP" : "not CP (min Choi eig < 0)")},
                           {"cj", verdict_json(cj)},
                           {"ms_choi", verdict_json(ms.choi)}};
            bool central = true;
            try {
                require_central(problem);
            } catch (const DimensionError&) {
                central = false;
            }
            report["central"] = central;
            if (central && cj.is_psd) {
                const Colligation coll = synthesize(problem);
                const int k = opt.levels ? *opt.levels : auto_levels(problem, coll.state);
                const SchurCoefficients coeffs = coefficients_from_colligation(coll, k, problem.level_cap);
                const CentralCheck cc = connection_check(problem, coeffs, central_sample(problem.ctx, opt.seed));
                report["connection_check"] = {{"levels", k},
                                              {"dual_side", cc.dual_side},
                                              {"primal_side", cc.primal_side},
                                              {"phi_psi", cc.phi_psi},
                                              {"tail_bound", cc.tail_bound}};
            }
            emit(opt, report, out);
            return static_cast<int>(exit_ok);
        },
        err);
}

int run_example(const Options& opt, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            const ToleranceConfig tol = base_tolerances(opt);
            const ProblemData problem = opt.random_central ? random_central_problem(opt.random_points, opt.seed, tol)
                                                           : example_problem(opt.r, opt.eps, tol);
            write_output(opt, io::problem_to_json(problem), out);
            return static_cast<int>(exit_ok);
        },
        err);
}

} // namespace ncpick::cli
