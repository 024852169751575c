#include "ncpick/duality.hpp"

#include <cmath>

namespace ncpick
{

namespace
{

bool is_scalar_identity(const Matrix& m, Scalar& value, double tol)
{
    value = m.rows() > 0 ? m(0, 0) : Scalar(0.0);
    return (m - value * Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

MapValue phi_map(const SchurCoefficients& coeffs, const DualPoint& zeta, const CommutantElement& a,
                 const ToleranceConfig& tol)
{
    const Context& ctx = coeffs.ctx;
    const double n = zeta.norm();
    if (n >= 1.0) {
        throw NormError(n);
    }
    const auto powers = point_powers(zeta, coeffs.levels);
    const CommutantElement a_star = a.adjoint();
    Matrix acc = Matrix::Zero(ctx.m_tot(), ctx.m_tot());
    for (int j = 0; j <= coeffs.levels; ++j) {
        const TensorLayout layout(ctx, j, ctx.h_grading());
        for (Index p = 0; p < layout.path_count(); ++p) {
            const Matrix& b = powers[j].blocks[static_cast<std::size_t>(p)];
            acc.middleCols(ctx.vertex_offset(layout.path_source(p)), b.cols()).noalias() +=
                coeffs.t0[j].middleCols(layout.block_offset(p), b.rows()) * a_star.block(layout.path_end(p)) * b;
        }
    }
    MapValue out;
    out.full = acc.adjoint();
    out.value = commutant_embed_check(ctx, out.full, tol);
    out.tail_bound = coeffs.finite ? 0.0
                                   : a.norm() * coeffs.coefficient_bound *
                                         geometric_tail(powers.back().norm(ctx), n, coeffs.levels);
    return out;
}

Matrix phi_map_literal(const SchurCoefficients& coeffs, const DualPoint& zeta, const CommutantElement& a)
{
    const Context& ctx = coeffs.ctx;
    const Grading h = ctx.h_grading();
    const Matrix c_zeta = cauchy_kernel(zeta, coeffs.levels, true).dense(ctx);
    // T^* C(0): level r carries T_0r^*.
    Matrix amp_a_t = Matrix::Zero(c_zeta.rows(), ctx.m_tot());
    Index off = 0;
    for (int r = 0; r <= coeffs.levels; ++r) {
        const Matrix col = coeffs.t0[r].adjoint();
        amp_a_t.middleRows(off, col.rows()) = amplify(ctx, r, a.full(), h, h) * col;
        off += col.rows();
    }
    return c_zeta.adjoint() * amp_a_t;
}

CommutantElement psi_map(const CommutantElement& lambda, const CommutantElement& a)
{
    return a * lambda.adjoint();
}

Matrix psi_map_literal(const DualPoint& zeta, const CommutantElement& lambda, const CommutantElement& a, int k)
{
    const Context& ctx = zeta.context();
    const Grading h = ctx.h_grading();
    const Matrix c_zeta = cauchy_kernel(zeta, k, true).dense(ctx);
    const Matrix c_zero = cauchy_kernel(DualPoint::zero(ctx), k, true).dense(ctx);
    const Matrix al = (a * lambda.adjoint()).full();
    Matrix amplified_c0(c_zero.rows(), ctx.m_tot());
    Index off = 0;
    for (int r = 0; r <= k; ++r) {
        const Index dim = tensor_dimension(ctx, r, h);
        amplified_c0.middleRows(off, dim) = amplify(ctx, r, al, h, h) * c_zero.middleRows(off, dim);
        off += dim;
    }
    return c_zeta.adjoint() * amplified_c0;
}

double antihom_check(const NCPolynomial& p, const NCPolynomial& q, const DualPoint& zeta,
                     const std::vector<CommutantElement>& sample, int k)
{
    const NCPolynomial pq = truncated_multiply(p, q, k);
    const SchurCoefficients cp = schur_coefficients(p, k);
    const SchurCoefficients cq = schur_coefficients(q, k);
    const SchurCoefficients cpq = schur_coefficients(pq, k);
    ToleranceConfig loose;
    loose.residual_tol = 1e300;
    double worst = 0.0;
    for (const CommutantElement& a : sample) {
        const Matrix lhs = phi_map(cpq, zeta, a, loose).full;
        const CommutantElement inner = phi_map(cp, zeta, a).value;
        const Matrix rhs = phi_map(cq, zeta, inner, loose).full;
        worst = std::max(worst, op_norm((lhs - rhs).eval()));
    }
    return worst;
}

CommutantElement dual_eval(const NCPolynomial& y, const DualPoint& zeta, const ToleranceConfig& tol)
{
    if (!y.scalar_coefficients()) {
        throw DimensionError("dual_eval: coefficients must be scalar (central)");
    }
    const Context& ctx = y.context();
    const Grading h = ctx.h_grading();
    const int k = y.degree();
    const Matrix c_zeta = cauchy_kernel(zeta, k, true).dense(ctx);
    // (Y (x) I) C(0): word w places y_w I at path w, columns H_end(w).
    Matrix yc0 = Matrix::Zero(c_zeta.rows(), ctx.m_tot());
    std::vector<Index> level_offset;
    Index off = 0;
    for (int r = 0; r <= k; ++r) {
        level_offset.push_back(off);
        off += tensor_dimension(ctx, r, h);
    }
    for (const auto& [w, c] : y.terms()) {
        const Scalar value = c.block(0)(0, 0);
        const int r = static_cast<int>(w.size());
        if (r == 0) {
            yc0.topRows(ctx.m_tot()) += value * Matrix::Identity(ctx.m_tot(), ctx.m_tot());
            continue;
        }
        const PathLevel level(ctx, r);
        const Index idx = level.find(w);
        if (idx < 0) {
            throw DimensionError("dual_eval: word is not a path");
        }
        Index row = level_offset[r];
        for (Index p = 0; p < idx; ++p) {
            row += ctx.multiplicity(level[p].end);
        }
        const int end = level[idx].end;
        const Index m = ctx.multiplicity(end);
        yc0.block(row, ctx.vertex_offset(end), m, m) += value * Matrix::Identity(m, m);
    }
    return commutant_embed_check(ctx, (c_zeta.adjoint() * yc0).eval(), tol);
}

void require_central(const ProblemData& problem)
{
    const Context& ctx = problem.ctx;
    if (!ctx.is_free()) {
        throw DimensionError("central comparison is implemented for a single vertex only");
    }
    const double tol = problem.tol.residual_tol;
    Scalar value;
    for (const DualPoint& z : problem.points) {
        for (const Matrix& b : z.blocks()) {
            if (!is_scalar_identity(b, value, tol)) {
                throw DimensionError("point is not central (blocks must be scalar multiples of I)");
            }
        }
    }
    for (const CommutantElement& l : problem.targets) {
        if (!is_scalar_identity(l.block(0), value, tol)) {
            throw DimensionError("target is not central (must be a scalar multiple of I)");
        }
    }
}

NCPolynomial central_polynomial(const SchurCoefficients& coeffs, double tol)
{
    const Context& ctx = coeffs.ctx;
    if (!ctx.is_free()) {
        throw DimensionError("central_polynomial: single vertex only");
    }
    NCPolynomial x(ctx);
    for (int j = 0; j <= coeffs.levels; ++j) {
        const PathLevel level(ctx, j);
        for (Index p = 0; p < level.size(); ++p) {
            Scalar t;
            if (!is_scalar_identity(coeffs.path_slice(j, p), t, tol)) {
                throw DimensionError("coefficients are not central at level " + std::to_string(j));
            }
            const Word w(level[p].edges.rbegin(), level[p].edges.rend());
            x.add_term(w, CommutantElement(ctx, {std::conj(t) * Matrix::Identity(ctx.m_tot(), ctx.m_tot())}));
        }
    }
    return x;
}

CentralCheck connection_check(const ProblemData& problem, const SchurCoefficients& coeffs,
                              const std::vector<CommutantElement>& sample)
{
    require_central(problem);
    const NCPolynomial x = central_polynomial(coeffs, problem.tol.residual_tol);
    const NCPolynomial& y = x; // Gamma is the identity on word coefficients
    const SchurCoefficients gx = schur_coefficients(y, coeffs.levels);
    CentralCheck out;
    ToleranceConfig loose = problem.tol;
    loose.residual_tol = 1e300;
    for (int i = 0; i < problem.size(); ++i) {
        const DualPoint& z = problem.points[i];
        const CommutantElement& lambda = problem.targets[i];
        const double n = z.norm();
        out.tail_bound =
            std::max(out.tail_bound, coeffs.finite ? 0.0 : coeffs.coefficient_bound * std::pow(n, coeffs.levels + 1) / (1.0 - n));
        const Matrix dual = dual_eval(y, z, loose).full();
        out.dual_side = std::max(out.dual_side, op_norm((dual - lambda.adjoint().full()).eval()));
        const Matrix primal = eval_point(gx, z, loose).full;
        out.primal_side = std::max(out.primal_side, op_norm((primal - lambda.full()).eval()));
        for (const CommutantElement& a : sample) {
            const Matrix phi = phi_map(gx, z, a, loose).full;
            out.phi_psi = std::max(out.phi_psi, op_norm((phi - psi_map(lambda, a).full()).eval()));
        }
    }
    return out;
}

} // namespace ncpick
