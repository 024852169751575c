#include "ncpick/cpcheck.hpp"

#include "ncpick/ncfunc.hpp"
#include "ncpick/realization.hpp"

namespace ncpick
{

Matrix ms_map_apply(const ProblemData& problem, const Matrix& b)
{
    const Context& ctx = problem.ctx;
    const int n = problem.size();
    const Index mt = ctx.m_tot();
    if (b.rows() != n * mt || b.cols() != n * mt) {
        throw DimensionError("ms_map_apply: argument must be N*m_tot square");
    }
    Matrix out = Matrix::Zero(n * mt, n * mt);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Matrix bij = b.block(i * mt, j * mt, mt, mt);
            std::vector<Matrix> diag;
            for (int u = 0; u < ctx.vertex_count(); ++u) {
                diag.push_back(bij.block(ctx.vertex_offset(u), ctx.vertex_offset(u), ctx.multiplicity(u),
                                         ctx.multiplicity(u)));
            }
            const Matrix s =
                stein_solve_pair(problem.points[i], problem.points[j], CommutantElement(ctx, std::move(diag))).full();
            out.block(i * mt, j * mt, mt, mt) =
                s - problem.targets[i].full() * s * problem.targets[j].full().adjoint();
        }
    }
    return out;
}

LinearMap ms_map(const ProblemData& problem)
{
    return [problem](const Matrix& b) { return ms_map_apply(problem, b); };
}

Matrix choi_matrix(const LinearMap& phi, Index dim)
{
    Matrix out(dim * dim, dim * dim);
    for (Index p = 0; p < dim; ++p) {
        for (Index q = 0; q < dim; ++q) {
            Matrix unit = Matrix::Zero(dim, dim);
            unit(p, q) = 1.0;
            const Matrix image = phi(unit);
            if (image.rows() != dim || image.cols() != dim) {
                throw DimensionError("choi_matrix: map does not preserve the matrix size");
            }
            out.block(p * dim, q * dim, dim, dim) = image;
        }
    }
    return out;
}

CpVerdict cp_verdict(const LinearMap& phi, Index dim, const ToleranceConfig& tol)
{
    CpVerdict out;
    out.choi = psd_check(choi_matrix(phi, dim), tol);
    if (out.choi.witness.size() > 0) {
        out.witness = out.choi.witness.reshaped(dim, dim).transpose();
    }
    return out;
}

ProblemData example_problem(double r, double eps, const ToleranceConfig& tol)
{
    if (!(r > 0.0 && r < 1.0) || !(eps > 0.0 && eps <= 1.0)) {
        throw DimensionError("example parameters need 0 < r < 1 and 0 < eps <= 1");
    }
    const Context ctx = free_context(1, 2);
    Matrix z = Matrix::Zero(2, 2);
    z(0, 1) = r;
    Matrix lambda = Matrix::Zero(2, 2);
    lambda(0, 0) = eps;
    return make_problem(ctx, {DualPoint(ctx, {z})}, {CommutantElement(ctx, {lambda})}, tol);
}

ExampleReport example_cj_vs_ms(double r, double eps, const ToleranceConfig& tol)
{
    const ProblemData problem = example_problem(r, eps, tol);
    ExampleReport rep;
    rep.r = r;
    rep.eps = eps;
    const PickMatrix a = pick_matrix(problem);
    rep.cj_pick = a.assembled;
    rep.cj_verdict = feasibility(a, tol);

    const Colligation coll = synthesize(problem);
    // Z^2 = 0, so levels 0 and 1 already give the exact value.
    const SchurCoefficients coeffs = coefficients_from_colligation(coll, 2, problem.level_cap);
    const Evaluation ev = eval_point(coeffs, problem.points[0], tol);
    rep.interpolation_residual = op_norm((ev.full - problem.targets[0].full()).eval());
    rep.interpolation_tail = ev.tail_bound;

    const LinearMap phi = ms_map(problem);
    rep.choi = choi_matrix(phi, 2);
    rep.ms_verdict = cp_verdict(phi, 2, tol);
    Matrix minor(2, 2);
    minor << rep.choi(0, 0), rep.choi(0, 3), rep.choi(3, 0), rep.choi(3, 3);
    rep.minor_det = minor.determinant().real();
    rep.ms_at_identity = phi(Matrix::Identity(2, 2));
    rep.ms_identity_verdict = psd_check(rep.ms_at_identity, tol);
    return rep;
}

} // namespace ncpick
