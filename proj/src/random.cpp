#include "ncpick/random.hpp"

namespace ncpick
{

namespace
{

Matrix masked(const Grading& rows, const Grading& cols, Rng& rng)
{
    Matrix out = random_matrix(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()), rng);
    for (Index i = 0; i < out.rows(); ++i) {
        for (Index k = 0; k < out.cols(); ++k) {
            if (rows[i] != cols[k]) {
                out(i, k) = 0.0;
            }
        }
    }
    return out;
}

} // namespace

Matrix random_matrix(Index rows, Index cols, Rng& rng)
{
    std::normal_distribution<double> normal;
    Matrix out(rows, cols);
    for (Index k = 0; k < cols; ++k) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            out(i, k) = Scalar(re, normal(rng));
        }
    }
    return out;
}

DualPoint random_point(const Context& ctx, double norm, Rng& rng)
{
    std::vector<Matrix> blocks;
    for (const Edge& e : ctx.edges()) {
        blocks.push_back(random_matrix(ctx.multiplicity(e.target), ctx.multiplicity(e.source), rng));
    }
    DualPoint raw(ctx, blocks);
    const double n = raw.norm();
    if (n > 0) {
        for (Matrix& b : blocks) {
            b *= norm / n;
        }
    }
    return {ctx, std::move(blocks)};
}

CommutantElement random_commutant(const Context& ctx, double norm, Rng& rng)
{
    std::vector<Matrix> blocks;
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        blocks.push_back(random_matrix(ctx.multiplicity(u), ctx.multiplicity(u), rng));
    }
    const double n = CommutantElement(ctx, blocks).norm();
    if (n > 0) {
        for (Matrix& b : blocks) {
            b *= norm / n;
        }
    }
    return {ctx, std::move(blocks)};
}

Colligation random_colligation(const Context& ctx, const Grading& state, double norm, Rng& rng)
{
    const Grading h = ctx.h_grading();
    const Grading es = tensor_grading(ctx, 1, state);
    Matrix x = masked(state, es, rng);
    Matrix z = masked(state, h, rng);
    Matrix y = masked(h, es, rng);
    Matrix w = masked(h, h, rng);
    Matrix omega(x.rows() + y.rows(), x.cols() + z.cols());
    omega << x, z, y, w;
    const double scale = norm / op_norm(omega);
    return make_colligation(ctx, state, scale * x, scale * z, scale * y, scale * w);
}

ProblemData random_feasible_problem(const Context& ctx, int n_points, double point_norm, double omega_norm,
                                    Index state_per_vertex, Rng& rng, const ToleranceConfig& tol)
{
    Grading state;
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        state.insert(state.end(), static_cast<std::size_t>(state_per_vertex), u);
    }
    const Colligation coll = random_colligation(ctx, state, omega_norm, rng);
    std::uniform_real_distribution<double> radius(0.05, point_norm);
    std::vector<DualPoint> points;
    std::vector<CommutantElement> targets;
    for (int i = 0; i < n_points; ++i) {
        points.push_back(random_point(ctx, radius(rng), rng));
        targets.push_back(commutant_embed_check(ctx, transfer_value(coll, points.back()), tol));
    }
    return make_problem(ctx, std::move(points), std::move(targets), tol);
}

} // namespace ncpick
