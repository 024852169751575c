#include "ncpick/pick.hpp"

#include <cmath>
#include <limits>

namespace ncpick
{

namespace
{

// vec(Z_i^* A Z_j) = (Z_j^T (x) Z_i^*) vec(A), column-major vec.
Matrix vec_operator(const Matrix& zi, const Matrix& zj)
{
    return kron(zj.transpose().eval(), zi.adjoint().eval());
}

} // namespace

ProblemData make_problem(const Context& ctx, std::vector<DualPoint> points, std::vector<CommutantElement> targets,
                         const ToleranceConfig& tol, double level_cap)
{
    tol.validate();
    if (points.empty()) {
        throw DimensionError("a problem needs at least one point");
    }
    if (points.size() != targets.size()) {
        throw DimensionError("number of points and targets differ");
    }
    if (!(level_cap > 0)) {
        throw DimensionError("level cap must be positive");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto check = validate_point(ctx, points[i]);
        if (!check.is_interpolation_point) {
            throw NormError(check.norm);
        }
        if (static_cast<int>(targets[i].blocks().size()) != ctx.vertex_count()) {
            throw DimensionError("target " + std::to_string(i) + " has the wrong number of vertex blocks");
        }
        for (int u = 0; u < ctx.vertex_count(); ++u) {
            if (targets[i].block(u).rows() != ctx.multiplicity(u) || targets[i].block(u).cols() != ctx.multiplicity(u)) {
                throw DimensionError("target " + std::to_string(i) + " block " + std::to_string(u) +
                                     " has the wrong shape");
            }
        }
    }
    return {ctx, std::move(points), std::move(targets), tol, level_cap};
}

Matrix assemble(const BlockMatrix& b)
{
    const Index n = static_cast<Index>(b.size());
    if (n == 0) {
        return {};
    }
    const Index mt = b[0][0].full().rows();
    Matrix out(n * mt, n * mt);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out.block(i * mt, j * mt, mt, mt) = b[i][j].full();
        }
    }
    return out;
}

BlockMatrix split_blocks(const Context& ctx, const Matrix& full, int n, const ToleranceConfig& tol)
{
    const Index mt = ctx.m_tot();
    if (full.rows() != n * mt || full.cols() != n * mt) {
        throw DimensionError("block matrix must be N*m_tot square");
    }
    BlockMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out[i].push_back(commutant_embed_check(ctx, full.block(i * mt, j * mt, mt, mt), tol));
        }
    }
    return out;
}

InfeasibleError::InfeasibleError(PsdVerdict v)
    : Error("Pick matrix is not positive semidefinite: min eigenvalue " + std::to_string(v.min_eigenvalue)),
      verdict(std::move(v))
{
}

BlockMatrix theta_apply(const std::vector<DualPoint>& points, const BlockMatrix& b)
{
    const std::size_t n = points.size();
    if (b.size() != n) {
        throw DimensionError("theta_apply: block matrix size differs from the number of points");
    }
    const Context& ctx = points.front().context();
    BlockMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i].size() != n) {
            throw DimensionError("theta_apply: block matrix is not square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Matrix> blocks;
            for (int u = 0; u < ctx.vertex_count(); ++u) {
                Matrix acc = Matrix::Zero(ctx.multiplicity(u), ctx.multiplicity(u));
                for (int e : ctx.out_edges(u)) {
                    const int v = ctx.edge(e).target;
                    acc.noalias() += points[i].block(e).adjoint() * b[i][j].block(v) * points[j].block(e);
                }
                blocks.push_back(std::move(acc));
            }
            out[i].emplace_back(ctx, std::move(blocks));
        }
    }
    return out;
}

CommutantElement stein_solve_pair(const DualPoint& zi, const DualPoint& zj, const CommutantElement& rhs)
{
    const Context& ctx = zi.context();
    const int s = ctx.vertex_count();
    std::vector<Index> offset(s);
    Index unknowns = 0;
    for (int u = 0; u < s; ++u) {
        offset[u] = unknowns;
        unknowns += static_cast<Index>(ctx.multiplicity(u)) * ctx.multiplicity(u);
    }
    Matrix system = Matrix::Identity(unknowns, unknowns);
    Vector rhs_vec(unknowns);
    for (int u = 0; u < s; ++u) {
        const Index mu = ctx.multiplicity(u);
        rhs_vec.segment(offset[u], mu * mu) = rhs.block(u).reshaped();
        for (int e : ctx.out_edges(u)) {
            const int v = ctx.edge(e).target;
            const Index mv = ctx.multiplicity(v);
            system.block(offset[u], offset[v], mu * mu, mv * mv) -= vec_operator(zi.block(e), zj.block(e));
        }
    }
    const Vector sol = system.partialPivLu().solve(rhs_vec);
    if (!sol.allFinite()) {
        throw ResidualError("Stein linear system (singular)", std::numeric_limits<double>::infinity(), 0.0);
    }
    std::vector<Matrix> blocks;
    for (int u = 0; u < s; ++u) {
        const Index mu = ctx.multiplicity(u);
        blocks.push_back(sol.segment(offset[u], mu * mu).reshaped(mu, mu));
    }
    return {ctx, std::move(blocks)};
}

double displacement_residual(const std::vector<DualPoint>& points, const BlockMatrix& a, const BlockMatrix& rhs)
{
    const Context& ctx = points.front().context();
    const int n = static_cast<int>(points.size());
    const Grading g = ctx.h_grading(n);
    const Matrix zeta = stacked_points(ctx, points);
    const Matrix full = assemble(a);
    const Matrix theta = zeta.adjoint() * amplified_times(ctx, 1, full, g, g, zeta);
    return op_norm((full - theta - assemble(rhs)).eval());
}

BlockMatrix stein_solve(const std::vector<DualPoint>& points, const BlockMatrix& rhs, const ToleranceConfig& tol,
                        double* residual)
{
    const std::size_t n = points.size();
    if (rhs.size() != n) {
        throw DimensionError("stein_solve: right-hand side size differs from the number of points");
    }
    BlockMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i].push_back(stein_solve_pair(points[i], points[j], rhs[i][j]));
        }
    }
    const double res = displacement_residual(points, out, rhs);
    const double bound = tol.residual_tol * (1.0 + op_norm(assemble(rhs)));
    if (!(res <= bound)) {
        throw ResidualError("displacement equation", res, bound);
    }
    if (residual != nullptr) {
        *residual = res;
    }
    return out;
}

BlockMatrix pick_rhs(const ProblemData& problem)
{
    const int n = problem.size();
    BlockMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<Matrix> blocks;
            for (int u = 0; u < problem.ctx.vertex_count(); ++u) {
                const Index m = problem.ctx.multiplicity(u);
                blocks.push_back(Matrix::Identity(m, m) -
                                 problem.targets[i].block(u).adjoint() * problem.targets[j].block(u));
            }
            out[i].emplace_back(problem.ctx, std::move(blocks));
        }
    }
    return out;
}

namespace
{

double asymmetry_of(const BlockMatrix& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            worst = std::max(worst, op_norm((b[i][j].full() - b[j][i].full().adjoint()).eval()));
        }
    }
    return worst;
}

void symmetrize(const Context& ctx, PickMatrix& pm)
{
    pm.asymmetry = asymmetry_of(pm.blocks);
    const Matrix full = assemble(pm.blocks);
    pm.assembled = (full + full.adjoint()) / 2.0;
    ToleranceConfig loose;
    loose.residual_tol = std::numeric_limits<double>::max();
    pm.blocks = split_blocks(ctx, pm.assembled, static_cast<int>(pm.blocks.size()), loose);
}

} // namespace

PickMatrix pick_matrix(const ProblemData& problem)
{
    PickMatrix pm;
    pm.route = PickMatrix::Route::stein;
    pm.blocks = stein_solve(problem.points, pick_rhs(problem), problem.tol, &pm.residual);
    symmetrize(problem.ctx, pm);
    return pm;
}

PickMatrix pick_matrix_series(const ProblemData& problem, double tol, bool strict)
{
    if (!(tol > 0)) {
        throw DimensionError("series tolerance must be positive");
    }
    const Context& ctx = problem.ctx;
    const int n = problem.size();
    std::vector<double> zn(n);
    std::vector<double> ln(n);
    for (int i = 0; i < n; ++i) {
        zn[i] = problem.points[i].norm();
        ln[i] = problem.targets[i].norm();
    }
    // Level from the a priori bound c q^{K+1} / (1 - q).
    double q = 0.0;
    double c = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            q = std::max(q, zn[i] * zn[j]);
            c = std::max(c, 1.0 + ln[i] * ln[j]);
        }
    }
    int k = 0;
    if (q > 0.0) {
        while (c * std::pow(q, k + 1) / (1.0 - q) > tol && k < 10000) {
            ++k;
        }
    }
    int k_cap = k;
    while (k_cap > 0 && point_power_entries(ctx, k_cap) * n > problem.level_cap) {
        --k_cap;
    }
    if (k_cap < k && strict) {
        throw CapExceeded(k, point_power_entries(ctx, k) * n, problem.level_cap);
    }
    k = k_cap;

    std::vector<std::vector<PointPower>> powers;
    for (int i = 0; i < n; ++i) {
        powers.push_back(point_powers(problem.points[i], k));
    }
    std::vector<double> top_norm(n);
    for (int i = 0; i < n; ++i) {
        top_norm[i] = powers[i].back().norm(ctx);
    }
    PickMatrix pm;
    pm.route = PickMatrix::Route::series;
    pm.series_levels = k;
    pm.blocks.resize(n);
    double tail_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::vector<Matrix> rhs;
            std::vector<Matrix> acc;
            for (int u = 0; u < ctx.vertex_count(); ++u) {
                const Index m = ctx.multiplicity(u);
                rhs.push_back(Matrix::Identity(m, m) -
                              problem.targets[i].block(u).adjoint() * problem.targets[j].block(u));
                acc.push_back(Matrix::Zero(m, m));
            }
            for (int level = 0; level <= k; ++level) {
                const TensorLayout layout(ctx, level, ctx.h_grading());
                const auto& bi = powers[i][level].blocks;
                const auto& bj = powers[j][level].blocks;
                for (Index p = 0; p < layout.path_count(); ++p) {
                    const auto pi = static_cast<std::size_t>(p);
                    acc[layout.path_source(p)].noalias() += bi[pi].adjoint() * rhs[layout.path_end(p)] * bj[pi];
                }
            }
            pm.blocks[i].emplace_back(ctx, std::move(acc));
            // sum_{r > K} ||zeta_i^(r)|| ||zeta_j^(r)|| (1 + ||L_i|| ||L_j||)
            const double qij = zn[i] * zn[j];
            const double tail = top_norm[i] * top_norm[j] == 0.0
                                    ? 0.0
                                    : top_norm[i] * top_norm[j] * qij / (1.0 - qij) * (1.0 + ln[i] * ln[j]);
            tail_sq += tail * tail;
        }
    }
    pm.tail_bound = std::sqrt(tail_sq);
    symmetrize(ctx, pm);
    return pm;
}

PsdVerdict feasibility(const PickMatrix& a, const ToleranceConfig& tol)
{
    return psd_check(a.assembled, tol);
}

} // namespace ncpick
