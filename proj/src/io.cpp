#include "ncpick/io.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace ncpick::io
{

namespace
{

Scalar scalar_from_json(const json& j, const std::string& where)
{
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ParseError(where + ": expected a number or [re, im]");
}

const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

int int_from_json(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) {
        throw ParseError(where + ": expected an integer");
    }
    return j.get<int>();
}

double double_from_json(const json& j, const std::string& where)
{
    if (!j.is_number()) {
        throw ParseError(where + ": expected a number");
    }
    return j.get<double>();
}

std::vector<int> ints_from_json(const json& j, const std::string& where)
{
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array of integers");
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

json tolerances_to_json(const ToleranceConfig& t)
{
    return {{"psd_tol", t.psd_tol},
            {"rank_tol_factor", t.rank_tol_factor},
            {"residual_tol", t.residual_tol},
            {"truncation_tol", t.truncation_tol}};
}

ToleranceConfig tolerances_from_json(const json& j, ToleranceConfig base, const std::string& where)
{
    if (!j.is_object()) {
        throw ParseError(where + ": expected an object");
    }
    const std::pair<const char*, double*> keys[] = {{"psd_tol", &base.psd_tol},
                                                    {"rank_tol_factor", &base.rank_tol_factor},
                                                    {"residual_tol", &base.residual_tol},
                                                    {"truncation_tol", &base.truncation_tol}};
    for (const auto& [key, slot] : keys) {
        if (j.contains(key)) {
            *slot = double_from_json(j.at(key), where + "." + key);
        }
    }
    try {
        base.validate();
    } catch (const DimensionError& e) {
        throw ParseError(where + ": " + e.what());
    }
    return base;
}

Grading grading_from_json(const json& j, const std::string& where)
{
    return ints_from_json(j, where);
}

} // namespace

json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) {
            row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& where)
{
    if (!j.is_array()) {
        throw ParseError(where + ": expected a matrix (array of rows)");
    }
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) {
        return Matrix(0, 0);
    }
    if (!j[0].is_array()) {
        throw ParseError(where + "[0]: expected a row array");
    }
    const Index cols = static_cast<Index>(j[0].size());
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const std::string row_where = where + "[" + std::to_string(i) + "]";
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw ParseError(row_where + ": rows must be arrays of equal length");
        }
        for (Index k = 0; k < cols; ++k) {
            out(i, k) = scalar_from_json(row[static_cast<std::size_t>(k)], row_where + "[" + std::to_string(k) + "]");
        }
    }
    return out;
}

ToleranceConfig tolerances_from_env(ToleranceConfig base)
{
    const std::pair<const char*, double*> keys[] = {{"NCPICK_PSD_TOL", &base.psd_tol},
                                                    {"NCPICK_RANK_TOL_FACTOR", &base.rank_tol_factor},
                                                    {"NCPICK_RESIDUAL_TOL", &base.residual_tol},
                                                    {"NCPICK_TRUNCATION_TOL", &base.truncation_tol}};
    for (const auto& [name, slot] : keys) {
        if (const char* value = std::getenv(name)) {
            char* end = nullptr;
            const double v = std::strtod(value, &end);
            if (end == value || *end != '\0') {
                throw ParseError(std::string("environment variable ") + name + " is not a number");
            }
            *slot = v;
        }
    }
    base.validate();
    return base;
}

ProblemData parse_problem(const json& j, const ToleranceConfig& base)
{
    if (!j.is_object()) {
        throw ParseError("problem: expected a JSON object");
    }
    int s = 1;
    std::vector<int> m;
    std::vector<std::vector<int>> g;
    const json* corr = j.contains("correspondence") ? &j.at("correspondence") : nullptr;
    const bool shortcut = j.contains("d") || (corr != nullptr && corr->is_object() && corr->contains("d"));
    if (j.contains("algebra")) {
        const json& alg = j.at("algebra");
        s = alg.contains("vertices") ? int_from_json(alg.at("vertices"), "algebra.vertices") : 1;
        m = ints_from_json(field(alg, "multiplicities", "algebra"), "algebra.multiplicities");
    } else if (j.contains("m")) {
        m = {int_from_json(j.at("m"), "m")};
    } else {
        throw ParseError("problem: need 'algebra.multiplicities' or the free shortcut 'm'");
    }
    if (shortcut) {
        const json& dj = j.contains("d") ? j.at("d") : corr->at("d");
        const int d = int_from_json(dj, "d");
        if (s != 1) {
            throw ParseError("d: the free shortcut needs a single vertex");
        }
        g = {{d}};
    } else {
        if (corr == nullptr) {
            throw ParseError("problem: missing field 'correspondence'");
        }
        const json& edges = field(*corr, "edges", "correspondence");
        if (!edges.is_array()) {
            throw ParseError("correspondence.edges: expected an s x s integer matrix");
        }
        for (std::size_t u = 0; u < edges.size(); ++u) {
            g.push_back(ints_from_json(edges[u], "correspondence.edges[" + std::to_string(u) + "]"));
        }
    }
    std::optional<Context> ctx;
    try {
        ctx.emplace(s, m, g);
    } catch (const Error& e) {
        throw ParseError(std::string("correspondence: ") + e.what());
    }

    ToleranceConfig tol = base;
    if (j.contains("tolerances")) {
        tol = tolerances_from_json(j.at("tolerances"), base, "tolerances");
    }
    double cap = default_level_cap;
    if (j.contains("level_cap")) {
        cap = double_from_json(j.at("level_cap"), "level_cap");
    }

    const json& pts = field(j, "points", "problem");
    const json& tgs = field(j, "targets", "problem");
    if (!pts.is_array() || !tgs.is_array()) {
        throw ParseError("points/targets: expected arrays");
    }
    std::vector<DualPoint> points = parse_points(pts, *ctx);
    std::vector<CommutantElement> targets;
    for (std::size_t i = 0; i < tgs.size(); ++i) {
        const std::string where = "targets[" + std::to_string(i) + "]";
        if (!tgs[i].is_array()) {
            throw ParseError(where + ": expected an array over vertices");
        }
        std::vector<Matrix> blocks;
        for (std::size_t u = 0; u < tgs[i].size(); ++u) {
            blocks.push_back(matrix_from_json(tgs[i][u], where + "[" + std::to_string(u) + "]"));
        }
        try {
            targets.emplace_back(*ctx, std::move(blocks));
        } catch (const DimensionError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    try {
        return make_problem(*ctx, std::move(points), std::move(targets), tol, cap);
    } catch (const NormError& e) {
        throw ParseError(std::string("points: ") + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(std::string("problem: ") + e.what());
    }
}

std::vector<DualPoint> parse_points(const json& j, const Context& ctx, const std::string& where)
{
    if (!j.is_array()) {
        throw ParseError(where + ": expected an array of points");
    }
    std::vector<DualPoint> points;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!j[i].is_array()) {
            throw ParseError(at + ": expected an array over edges");
        }
        std::vector<Matrix> blocks;
        for (std::size_t e = 0; e < j[i].size(); ++e) {
            blocks.push_back(matrix_from_json(j[i][e], at + "[" + std::to_string(e) + "]"));
        }
        try {
            points.emplace_back(ctx, std::move(blocks));
        } catch (const DimensionError& e) {
            throw ParseError(at + ": " + e.what());
        }
    }
    return points;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path + ": cannot open file");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

ProblemData load_problem(const std::string& path, const ToleranceConfig& base)
{
    return parse_problem(read_json_file(path), base);
}

json problem_to_json(const ProblemData& problem)
{
    const Context& ctx = problem.ctx;
    json j;
    j["algebra"] = {{"vertices", ctx.vertex_count()}, {"multiplicities", ctx.multiplicities()}};
    j["correspondence"] = {{"edges", ctx.edge_multiplicity()}};
    json pts = json::array();
    for (const DualPoint& z : problem.points) {
        json blocks = json::array();
        for (const Matrix& b : z.blocks()) {
            blocks.push_back(matrix_to_json(b));
        }
        pts.push_back(std::move(blocks));
    }
    json tgs = json::array();
    for (const CommutantElement& l : problem.targets) {
        json blocks = json::array();
        for (const Matrix& b : l.blocks()) {
            blocks.push_back(matrix_to_json(b));
        }
        tgs.push_back(std::move(blocks));
    }
    j["points"] = std::move(pts);
    j["targets"] = std::move(tgs);
    j["tolerances"] = tolerances_to_json(problem.tol);
    j["level_cap"] = problem.level_cap;
    return j;
}

std::string problem_hash(const ProblemData& problem)
{
    const std::string text = problem_to_json(problem).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json residuals_to_json(const ResidualTable& r)
{
    return {{"interpolation", r.interpolation},
            {"tail", r.tail},
            {"factorization", r.factorization},
            {"partial_isometry", r.partial_isometry},
            {"range_condition", r.range_condition},
            {"state_equation", r.state_equation},
            {"output_equation", r.output_equation},
            {"sparsity", r.sparsity},
            {"truncated_norm", r.truncated_norm},
            {"norm_levels", r.norm_levels}};
}

ResidualTable residuals_from_json(const json& j)
{
    try {
        ResidualTable r;
        r.interpolation = j.at("interpolation").get<std::vector<double>>();
        r.tail = j.at("tail").get<std::vector<double>>();
        r.factorization = j.at("factorization").get<double>();
        r.partial_isometry = j.at("partial_isometry").get<double>();
        r.range_condition = j.at("range_condition").get<double>();
        r.state_equation = j.at("state_equation").get<double>();
        r.output_equation = j.at("output_equation").get<double>();
        r.sparsity = j.at("sparsity").get<double>();
        r.truncated_norm = j.at("truncated_norm").get<double>();
        r.norm_levels = j.at("norm_levels").get<int>();
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("residuals: ") + e.what());
    }
}

json solution_to_json(const Solution& s)
{
    json coeffs = json::array();
    for (const Matrix& t : s.coefficients.t0) {
        coeffs.push_back(matrix_to_json(t));
    }
    const Colligation& c = s.colligation;
    return {{"format", "ncpick-solution"},
            {"version", 1},
            {"problem_hash", s.problem_hash},
            {"problem", s.problem},
            {"colligation",
             {{"state_grading", c.state},
              {"X", matrix_to_json(c.x)},
              {"Z", matrix_to_json(c.z)},
              {"Y", matrix_to_json(c.y)},
              {"W", matrix_to_json(c.w)}}},
            {"levels", s.coefficients.levels},
            {"coefficient_bound", s.coefficients.coefficient_bound},
            {"T0", std::move(coeffs)},
            {"tail_bound", s.tail_bound},
            {"residuals", residuals_to_json(s.residuals)},
            {"verdict", s.verdict}};
}

Solution parse_solution(const json& j)
{
    if (!j.is_object() || j.value("format", "") != "ncpick-solution") {
        throw ParseError("solution: not an ncpick solution file");
    }
    const json& problem_json = field(j, "problem", "solution");
    const ProblemData problem = parse_problem(problem_json);
    const json& cj = field(j, "colligation", "solution");
    std::optional<Colligation> coll;
    try {
        coll.emplace(make_colligation(
            problem.ctx, grading_from_json(field(cj, "state_grading", "colligation"), "colligation.state_grading"),
            matrix_from_json(field(cj, "X", "colligation"), "colligation.X"),
            matrix_from_json(field(cj, "Z", "colligation"), "colligation.Z"),
            matrix_from_json(field(cj, "Y", "colligation"), "colligation.Y"),
            matrix_from_json(field(cj, "W", "colligation"), "colligation.W")));
    } catch (const DimensionError& e) {
        throw ParseError(std::string("colligation: ") + e.what());
    }
    const int levels = int_from_json(field(j, "levels", "solution"), "levels");
    const json& t0 = field(j, "T0", "solution");
    if (!t0.is_array() || static_cast<int>(t0.size()) != levels + 1) {
        throw ParseError("T0: expected levels + 1 coefficient matrices");
    }
    SchurCoefficients coeffs{problem.ctx, levels, {},
                             double_from_json(field(j, "coefficient_bound", "solution"), "coefficient_bound"), false};
    for (std::size_t k = 0; k < t0.size(); ++k) {
        coeffs.t0.push_back(matrix_from_json(t0[k], "T0[" + std::to_string(k) + "]"));
    }
    const json& hash = field(j, "problem_hash", "solution");
    if (!hash.is_string()) {
        throw ParseError("problem_hash: expected a string");
    }
    return Solution{hash.get<std::string>(),
                    problem_json,
                    std::move(*coll),
                    std::move(coeffs),
                    double_from_json(field(j, "tail_bound", "solution"), "tail_bound"),
                    residuals_from_json(field(j, "residuals", "solution")),
                    j.value("verdict", json::object())};
}

} // namespace ncpick::io
