#include <iostream>

#include <CLI11.hpp>

#include "cli_app.hpp"

int main(int argc, char** argv)
{
    using namespace ncpick::cli;
    CLI::App app{"Operator-valued Nevanlinna-Pick interpolation on finite quiver correspondences"};
    app.require_subcommand(1);

    Options opt;
    std::string format = "human";
    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol", opt.tol, "residual tolerance");
        sub->add_option("--cap", opt.cap, "level cap in matrix entries");
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"human", "machine"}));
    };

    auto* check = app.add_subcommand("check", "decide feasibility from the Pick matrix");
    check->add_option("problem", opt.input)->required();
    common(check);

    auto* solve = app.add_subcommand("solve", "synthesize an interpolant and write a solution file");
    solve->add_option("problem", opt.input)->required();
    solve->add_option("--levels", opt.levels, "coefficient levels K (default: from the truncation tolerance)");
    solve->add_option("--out", opt.out_path, "solution file");
    common(solve);

    auto* verify = app.add_subcommand("verify", "reload a solution file and recompute its residuals");
    verify->add_option("solution", opt.input)->required();
    common(verify);

    auto* eval = app.add_subcommand("eval", "evaluate a stored interpolant at points");
    eval->add_option("solution", opt.input)->required();
    eval->add_option("points", opt.points_path, "JSON file with a 'points' array")->required();
    common(eval);

    auto* ms_cp = app.add_subcommand("ms-cp", "Choi test of the complete-positivity map");
    ms_cp->add_option("problem", opt.input)->required();
    common(ms_cp);

    auto* compare = app.add_subcommand("compare", "run both criteria on one problem");
    compare->add_option("problem", opt.input);
    compare->add_option("--example", opt.example, "built-in example with parameters r eps")->expected(2);
    compare->add_option("--levels", opt.levels, "coefficient levels for the central comparison");
    compare->add_option("--seed", opt.seed, "seed for the sampled commutant elements");
    common(compare);

    auto* example = app.add_subcommand("example", "write the built-in example or a random central problem");
    example->add_option("--r", opt.r);
    example->add_option("--eps", opt.eps);
    example->add_flag("--random-central", opt.random_central, "random feasible central scalar problem");
    example->add_option("--points", opt.random_points);
    example->add_option("--seed", opt.seed);
    example->add_option("--out", opt.out_path);
    common(example);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }
    opt.machine = format == "machine";
    if (compare->parsed() && opt.input.empty() && opt.example.empty()) {
        std::cerr << "compare: give a problem file or --example r eps\n";
        return exit_input;
    }

    if (check->parsed()) {
        return run_check(opt, std::cout, std::cerr);
    }
    if (solve->parsed()) {
        return run_solve(opt, std::cout, std::cerr);
    }
    if (verify->parsed()) {
        return run_verify(opt, std::cout, std::cerr);
    }
    if (eval->parsed()) {
        return run_eval(opt, std::cout, std::cerr);
    }
    if (ms_cp->parsed()) {
        return run_ms_cp(opt, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        return run_compare(opt, std::cout, std::cerr);
    }
    return run_example(opt, std::cout, std::cerr);
}
