// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "cli_app.hpp"
#include "ncpick/cpcheck.hpp"
#include "ncpick/duality.hpp"
#include "support/random_problems.hpp"

using namespace ncpick;
using namespace ncpick::testing;

namespace
{

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

/// Suite shared by criteria 3, 5, 6 and 8.
struct SuiteCase
{
    ProblemData problem;
    std::optional<Colligation> colligation;
    std::optional<SchurCoefficients> coefficients;
};

std::vector<SuiteCase>& suite()
{
    static std::vector<SuiteCase> cases;
    return cases;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void criterion1(Outcome& o)
{
    const auto start = std::chrono::steady_clock::now();
    const ExampleReport rep = example_cj_vs_ms(0.5, 0.5);
    Matrix pick = Matrix::Zero(2, 2);
    pick(0, 0) = 0.75;
    pick(1, 1) = 1.1875;
    const double pick_err = (rep.cj_pick - pick).cwiseAbs().maxCoeff();
    const double t = seconds_since(start);
    o.detail << "pick err " << pick_err << ", ||F(Z)-Lambda|| " << rep.interpolation_residual << ", min Choi eig "
             << rep.ms_verdict.choi.min_eigenvalue << ", minor det " << rep.minor_det << ", " << t << " s";
    o.require(pick_err <= 1e-10, "Pick matrix");
    o.require(rep.cj_verdict.is_psd, "CJ feasible");
    o.require(rep.interpolation_residual <= 1e-8, "interpolation");
    o.require(rep.ms_verdict.choi.min_eigenvalue < 0 && !rep.ms_verdict.choi.is_psd, "MS not CP");
    o.require(std::abs(rep.minor_det + 0.25) <= 1e-10, "minor det");
    o.require(t < 1.0, "runtime");
}

void criterion2(Outcome& o)
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = uniform_int(rng, 1, 4);
        std::vector<Scalar> z;
        std::vector<Scalar> l;
        for (int i = 0; i < n; ++i) {
            z.push_back(random_disk(rng, 0.9));
            l.push_back(random_disk(rng, 1.2));
        }
        const PickMatrix a = pick_matrix(scalar_problem(z, l));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const Scalar closed = (1.0 - std::conj(l[i]) * l[j]) / (1.0 - std::conj(z[i]) * z[j]);
                worst = std::max(worst, std::abs(a.assembled(i, j) - closed));
            }
        }
    }
    const double t = seconds_since(start);
    o.detail << "max entry err " << worst << ", " << t << " s";
    o.require(worst <= 1e-9, "closed form");
    o.require(t < 5.0, "runtime");
}

void criterion3(Outcome& o)
{
    const auto start = std::chrono::steady_clock::now();
    Rng rng(3003);
    double min_eig = 1e300;
    double worst_excess = -1e300;
    double worst_exact = 0.0;
    double worst_norm = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SuiteCase c{random_free_instance(rng), std::nullopt, std::nullopt};
        const PickMatrix a = pick_matrix(c.problem);
        min_eig = std::min(min_eig, feasibility(a).min_eigenvalue);
        try {
            c.colligation = synthesize(c.problem);
        } catch (const Error& e) {
            ++failures;
            o.detail << " [instance " << trial << ": " << e.what() << "]";
            suite().push_back(std::move(c));
            continue;
        }
        const int k = cli::auto_levels(c.problem, c.colligation->state);
        c.coefficients = coefficients_from_colligation(*c.colligation, k, c.problem.level_cap);
        for (int i = 0; i < c.problem.size(); ++i) {
            const Evaluation ev = eval_point(*c.coefficients, c.problem.points[i]);
            const double res = op_norm((ev.full - c.problem.targets[i].full()).eval());
            worst_excess = std::max(worst_excess, res - ev.tail_bound);
            worst_exact = std::max(
                worst_exact,
                op_norm((transfer_value(*c.colligation, c.problem.points[i]) - c.problem.targets[i].full()).eval()));
        }
        const int nk = cli::norm_levels_for(c.problem.ctx, k);
        worst_norm = std::max(worst_norm, schur_truncate_and_norm(*c.coefficients, nk, nullptr, c.problem.level_cap));
        suite().push_back(std::move(c));
    }
    const double t = seconds_since(start);
    o.detail << "min Pick eig " << min_eig << ", synth failures " << failures << ", max(res - tail) " << worst_excess
             << ", exact transfer residual " << worst_exact << ", max truncated norm " << worst_norm << ", " << t
             << " s";
    o.require(min_eig >= -1e-8, "Pick PSD");
    o.require(failures == 0, "synthesis");
    o.require(worst_excess <= 1e-6, "interpolation");
    o.require(worst_norm <= 1.0 + 1e-6, "Schur norm");
    o.require(t < 60.0, "runtime");
}

void criterion4(Outcome& o)
{
    const PsdVerdict v = feasibility(pick_matrix(scalar_problem({0.0}, {2.0})));
    const std::string path = (std::filesystem::temp_directory_path() / "ncpick_acceptance_infeasible.json").string();
    std::ofstream(path) << R"({"d": 1, "m": 1, "points": [[[[0]]]], "targets": [[[[2]]]]})";
    const std::string cmd = std::string("\"") + NCPICK_CLI_PATH + "\" check \"" + path + "\" > /dev/null";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.detail << "min eig " << v.min_eigenvalue << ", CLI exit " << code;
    o.require(std::abs(v.min_eigenvalue + 3.0) <= 1e-12, "eigenvalue");
    o.require(code == 2, "exit code");
}

void criterion5(Outcome& o)
{
    const auto start = std::chrono::steady_clock::now();
    double worst_disp = 0.0;
    double worst_excess = -1e300;
    double worst_tail = 0.0;
    for (const SuiteCase& c : suite()) {
        const PickMatrix a = pick_matrix(c.problem);
        worst_disp = std::max(worst_disp, displacement_residual(c.problem.points, a.blocks, pick_rhs(c.problem)));
        const PickMatrix s = pick_matrix_series(c.problem, c.problem.tol.truncation_tol);
        worst_excess = std::max(worst_excess, op_norm((a.assembled - s.assembled).eval()) - s.tail_bound);
        worst_tail = std::max(worst_tail, s.tail_bound);
    }
    o.detail << "max displacement residual " << worst_disp << ", max(|stein - series| - tail) " << worst_excess
             << ", max series tail " << worst_tail << ", " << seconds_since(start) << " s";
    o.require(!suite().empty(), "suite");
    o.require(worst_disp <= 1e-8, "displacement");
    o.require(worst_excess <= 1e-8, "route agreement");
}

void criterion6(Outcome& o)
{
    double pi = 0.0;
    double fact = 0.0;
    double range = 0.0;
    for (const SuiteCase& c : suite()) {
        if (!c.colligation) {
            o.require(false, "suite synthesis");
            continue;
        }
        pi = std::max(pi, c.colligation->report.partial_isometry);
        fact = std::max(fact, c.colligation->report.factorization);
        range = std::max(range, c.colligation->report.range_condition);
    }
    Rng rng(6006);
    double sparsity = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const ProblemData p = random_feasible_problem(quiver_two(), uniform_int(rng, 1, 3), 0.7, 0.95, 1, rng);
        sparsity = std::max(sparsity, synthesize(p).report.sparsity);
    }
    o.detail << "partial isometry " << pi << ", factorization " << fact << ", range " << range
             << ", quiver sparsity " << sparsity;
    o.require(!suite().empty(), "suite");
    o.require(pi <= 1e-8, "partial isometry");
    o.require(fact <= 1e-8, "factorization");
    o.require(range <= 1e-8, "range condition");
    o.require(sparsity <= 1e-10, "sparsity");
}

void criterion7(Outcome& o)
{
    Rng rng(7007);
    double worst_slack = 1e300;
    double worst_diff = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Context ctx = trial % 4 == 3 ? quiver_two() : free_context(uniform_int(rng, 1, 3), uniform_int(rng, 1, 2));
        const Colligation c = random_colligation(ctx, uniform_state(ctx, uniform_int(rng, 1, 3)),
                                                 uniform_real(rng, 0.5, 1.0), rng);
        std::vector<Matrix> inputs;
        for (int t = 0; t < 6; ++t) {
            inputs.push_back(random_matrix(tensor_dimension(ctx, t, ctx.h_grading()), 1, rng));
        }
        const SimulationResult sim = simulate_system(c, inputs);
        worst_slack = std::min(worst_slack, sim.input_energy - sim.output_energy);
        const std::vector<Matrix> direct = apply_truncated(coefficients_from_colligation(c, 5), inputs);
        for (int t = 0; t < 6; ++t) {
            worst_diff = std::max(worst_diff, op_norm((direct[t] - sim.outputs[t]).eval()));
        }
    }
    o.detail << "min energy slack " << worst_slack << ", max simulator vs operator " << worst_diff;
    o.require(worst_slack >= -1e-10, "energy");
    o.require(worst_diff <= 1e-10, "simulator");
}

void criterion8(Outcome& o)
{
    Rng rng(8008);
    int checked = 0;
    double intertwine_excess = -1e300;
    double creation = 0.0;
    double left = 0.0;
    for (const SuiteCase& c : suite()) {
        if (checked == 50) {
            break;
        }
        if (!c.coefficients) {
            continue;
        }
        const Context& ctx = c.problem.ctx;
        const int levels = std::min(c.coefficients->levels, 3);
        for (const DualPoint& z : c.problem.points) {
            const IntertwineReport r = cauchy_intertwine_check(*c.coefficients, z, levels);
            intertwine_excess = std::max(intertwine_excess, r.residual - r.bound);
        }
        const int k = std::max(1, std::min(c.coefficients->levels, cli::norm_levels_for(ctx, 3, 400)));
        Vector xi = random_matrix(ctx.edge_count(), 1, rng);
        Vector b = random_matrix(ctx.vertex_count(), 1, rng);
        const CommutationReport r = commutation_check(*c.coefficients, k, {InducedCreation{xi}}, {InducedLeftAction{b}});
        creation = std::max(creation, r.creation);
        left = std::max(left, r.left_action);
        ++checked;
    }

    // Negative control: couple vertex 0 to vertex 1 inside T_01 of a quiver solution.
    const Context ctx = quiver_two();
    const ProblemData p = random_feasible_problem(ctx, 2, 0.6, 0.95, 1, rng);
    SchurCoefficients t = coefficients_from_colligation(synthesize(p), 3);
    Vector xi = random_matrix(ctx.edge_count(), 1, rng);
    Vector b(2);
    b << 1.0, -1.0;
    const double clean = commutation_check(t, 3, {InducedCreation{xi}}, {InducedLeftAction{b}}).left_action;
    const Grading eh = tensor_grading(ctx, 1, ctx.h_grading());
    Index col = 0;
    while (eh[col] != 1) {
        ++col;
    }
    t.t0[1](0, col) += 0.5;
    const double corrupted = commutation_check(t, 3, {InducedCreation{xi}}, {InducedLeftAction{b}}).left_action;

    o.detail << checked << " outputs, max(intertwine - bound) " << intertwine_excess << ", creation " << creation
             << ", left action " << left << ", control clean " << clean << " corrupted " << corrupted;
    o.require(checked == 50, "50 pipeline outputs");
    o.require(intertwine_excess <= 0.0, "intertwining");
    o.require(creation <= 1e-8 && left <= 1e-8, "commutation");
    o.require(clean <= 1e-8 && corrupted > 1e-3, "negative control");
}

NCPolynomial random_polynomial(const Context& ctx, int degree, Rng& rng)
{
    NCPolynomial p(ctx);
    for (int k = 0; k <= degree; ++k) {
        const int terms = uniform_int(rng, 1, 2);
        for (int t = 0; t < terms; ++t) {
            Word w;
            for (int i = 0; i < k; ++i) {
                w.push_back(uniform_int(rng, 0, ctx.edge_count() - 1));
            }
            p.add_term(w, random_commutant(ctx, 1.0, rng));
        }
    }
    return p;
}

void criterion9(Outcome& o)
{
    Rng rng(9009);
    double antihom = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Context ctx = free_context(uniform_int(rng, 1, 2), uniform_int(rng, 1, 2));
        const NCPolynomial p = random_polynomial(ctx, uniform_int(rng, 0, 3), rng);
        const NCPolynomial q = random_polynomial(ctx, uniform_int(rng, 0, 3), rng);
        const DualPoint z = random_point(ctx, uniform_real(rng, 0.1, 0.9), rng);
        const std::vector<CommutantElement> sample = {random_commutant(ctx, 1.0, rng),
                                                      random_commutant(ctx, 1.0, rng)};
        antihom = std::max(antihom, antihom_check(p, q, z, sample, 6));
    }
    double dual = 0.0;
    double primal = 0.0;
    double phi_psi = 0.0;
    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        const ProblemData p = cli::random_central_problem(uniform_int(rng, 1, 3), seed);
        const Colligation c = synthesize(p);
        const SchurCoefficients t = coefficients_from_colligation(c, cli::auto_levels(p, c.state), p.level_cap);
        const CentralCheck r =
            connection_check(p, t, {CommutantElement::identity(p.ctx), random_commutant(p.ctx, 1.0, rng)});
        dual = std::max(dual, r.dual_side);
        primal = std::max(primal, r.primal_side);
        phi_psi = std::max(phi_psi, r.phi_psi);
    }
    double collapse = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Context ctx = trial % 2 == 0 ? quiver_two() : free_context(2, 2);
        const DualPoint z = random_point(ctx, 0.6, rng);
        const CommutantElement l = random_commutant(ctx, 1.0, rng);
        const CommutantElement a = random_commutant(ctx, 1.0, rng);
        collapse = std::max(collapse, op_norm((psi_map_literal(z, l, a, 3) - psi_map(l, a).full()).eval()));
    }
    o.detail << "antihom " << antihom << ", dual side " << dual << ", primal side " << primal << ", Phi vs Psi "
             << phi_psi << ", Psi collapse " << collapse;
    o.require(antihom <= 1e-8, "antihomomorphism");
    o.require(dual <= 1e-8 && primal <= 1e-8 && phi_psi <= 1e-8, "connection");
    o.require(collapse <= 1e-13, "Psi collapse");
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"1 example reproduction", criterion1},
        {"2 classical scalar oracle", criterion2},
        {"3 round-trip synthesis", criterion3},
        {"4 infeasibility detection", criterion4},
        {"5 displacement residual and route agreement", criterion5},
        {"6 Douglas and colligation contracts", criterion6},
        {"7 transfer map contractivity", criterion7},
        {"8 intertwining and commutation", criterion8},
        {"9 duality suite", criterion9},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail.str() << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
