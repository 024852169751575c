#include "ncpick/realization.hpp"

#include <cmath>

namespace ncpick
{

HatPair assemble_hats(const Matrix& l, const ProblemData& problem)
{
    const Context& ctx = problem.ctx;
    const int n = problem.size();
    const Index mt = ctx.m_tot();
    const Index nm = n * mt;
    if (l.rows() != nm || l.cols() != nm) {
        throw DimensionError("assemble_hats: factor must be N*m_tot square");
    }
    const Grading g = ctx.h_grading(n);
    const Matrix zeta = stacked_points(ctx, problem.points);
    Matrix u_star(mt, nm);
    Matrix v_star(mt, nm);
    for (int i = 0; i < n; ++i) {
        u_star.middleCols(i * mt, mt) = Matrix::Identity(mt, mt);
        v_star.middleCols(i * mt, mt) = problem.targets[i].full();
    }
    HatPair hats;
    hats.l = l;
    hats.a_hat.resize(nm + mt, nm);
    hats.a_hat << l.adjoint(), v_star;
    const Matrix lz = amplified_times(ctx, 1, l.adjoint(), g, g, zeta);
    hats.b_hat.resize(lz.rows() + mt, nm);
    hats.b_hat << lz, u_star;
    hats.invariant_residual =
        op_norm((hats.a_hat.adjoint() * hats.a_hat - hats.b_hat.adjoint() * hats.b_hat).eval());
    const double bound = problem.tol.residual_tol * (1.0 + std::pow(op_norm(hats.a_hat), 2));
    if (!(hats.invariant_residual <= bound)) {
        throw ResidualError("A_hat^* A_hat = B_hat^* B_hat", hats.invariant_residual, bound);
    }
    return hats;
}

Matrix douglas_factor(const HatPair& hats, const ToleranceConfig& tol, DouglasReport* report)
{
    const Matrix omega0 = hats.a_hat * pinv(hats.b_hat, tol);
    const Matrix q = range_basis(hats.b_hat, tol);
    DouglasReport rep;
    rep.range_rank = q.cols();
    Matrix omega = Matrix::Zero(omega0.rows(), omega0.cols());
    if (q.cols() > 0) {
        const auto f = svd((omega0 * q).eval());
        const Index r = std::min(f.u.cols(), f.v.cols());
        for (Index k = 0; k < f.values.size(); ++k) {
            rep.polar_deviation = std::max(rep.polar_deviation, std::abs(f.values(k) - 1.0));
        }
        if (f.values.size() < q.cols()) {
            rep.polar_deviation = std::max(rep.polar_deviation, 1.0); // more range than rows
        }
        omega = f.u.leftCols(r) * f.v.leftCols(r).adjoint() * q.adjoint();
    }
    if (report != nullptr) {
        *report = rep;
    }
    return omega;
}

Matrix Colligation::omega() const
{
    Matrix out(x.rows() + y.rows(), x.cols() + z.cols());
    out << x, z, y, w;
    return out;
}

Colligation make_colligation(const Context& ctx, const Grading& state, Matrix x, Matrix z, Matrix y, Matrix w)
{
    const Index ns = static_cast<Index>(state.size());
    const Grading es = tensor_grading(ctx, 1, state);
    const Index nes = static_cast<Index>(es.size());
    const Index mt = ctx.m_tot();
    if (x.rows() != ns || x.cols() != nes || z.rows() != ns || z.cols() != mt || y.rows() != mt || y.cols() != nes ||
        w.rows() != mt || w.cols() != mt) {
        throw DimensionError("colligation blocks have inconsistent shapes");
    }
    Colligation c{ctx, state, std::move(x), std::move(z), std::move(y), std::move(w), {}};
    const Grading h = ctx.h_grading();
    c.report.sparsity = std::max({grading_violation(c.x, es, state), grading_violation(c.z, h, state),
                                  grading_violation(c.y, es, h), grading_violation(c.w, h, h)});
    c.report.norm_excess = std::max(0.0, op_norm(c.omega()) - 1.0);
    return c;
}

Colligation split_and_verify(const Matrix& omega, const HatPair& hats, const ProblemData& problem,
                             const DouglasReport& douglas)
{
    const Context& ctx = problem.ctx;
    const int n = problem.size();
    const Index mt = ctx.m_tot();
    const Index nm = n * mt;
    const Index ne = n * ctx.dim_EH();
    if (omega.rows() != nm + mt || omega.cols() != ne + mt) {
        throw DimensionError("split_and_verify: Omega has the wrong shape");
    }
    Colligation c = make_colligation(ctx, ctx.h_grading(n), omega.topLeftCorner(nm, ne), omega.topRightCorner(nm, mt),
                                     omega.bottomLeftCorner(mt, ne), omega.bottomRightCorner(mt, mt));
    const ToleranceConfig& tol = problem.tol;
    ColligationReport& rep = c.report;
    rep.polar_deviation = douglas.polar_deviation;

    const Matrix oo = omega.adjoint() * omega;
    rep.partial_isometry = op_norm((oo * oo - oo).eval());
    const double a_norm = op_norm(hats.a_hat);
    rep.factorization = op_norm((omega * hats.b_hat - hats.a_hat).eval()) / (1.0 + a_norm);
    const Matrix q = range_basis(hats.b_hat, tol);
    const Matrix complement = Matrix::Identity(omega.cols(), omega.cols()) - q * q.adjoint();
    rep.range_condition = op_norm((omega * complement).eval());

    const Matrix lz = hats.b_hat.topRows(ne);
    const Matrix u_star = hats.b_hat.bottomRows(mt);
    const Matrix l_star = hats.a_hat.topRows(nm);
    const Matrix v_star = hats.a_hat.bottomRows(mt);
    rep.state_equation = op_norm((l_star - c.x * lz - c.z * u_star).eval());
    rep.output_equation = op_norm((v_star - c.y * lz - c.w * u_star).eval());

    const double scale = 1.0 + a_norm;
    const struct
    {
        const char* name;
        double value;
        double bound;
    } checks[] = {
        {"||Omega|| <= 1", rep.norm_excess, tol.residual_tol},
        {"partial isometry", rep.partial_isometry, tol.residual_tol},
        {"Omega B_hat = A_hat", rep.factorization, tol.residual_tol},
        {"range condition", rep.range_condition, tol.residual_tol},
        {"L^* = X (I (x) L^*) zeta + Z U^*", rep.state_equation, tol.residual_tol * scale},
        {"V^* = Y (I (x) L^*) zeta + W U^*", rep.output_equation, tol.residual_tol * scale},
        {"intertwining sparsity", rep.sparsity, tol.residual_tol},
    };
    for (const auto& check : checks) {
        if (!(check.value <= check.bound)) {
            throw ResidualError(check.name, check.value, check.bound);
        }
    }
    return c;
}

Colligation synthesize(const ProblemData& problem)
{
    const PickMatrix a = pick_matrix(problem);
    const PsdVerdict verdict = feasibility(a, problem.tol);
    if (!verdict.is_psd) {
        throw InfeasibleError(verdict);
    }
    const Matrix l = psd_sqrt_factor(a.assembled, problem.tol);
    const HatPair hats = assemble_hats(l, problem);
    DouglasReport douglas;
    const Matrix omega = douglas_factor(hats, problem.tol, &douglas);
    return split_and_verify(omega, hats, problem, douglas);
}

SimulationResult simulate_system(const Colligation& coll, const std::vector<Matrix>& inputs)
{
    const Context& ctx = coll.ctx;
    const Grading h = ctx.h_grading();
    const Grading es = tensor_grading(ctx, 1, coll.state);
    const int horizon = static_cast<int>(inputs.size()) - 1;
    SimulationResult out;
    if (horizon < 0) {
        return out;
    }
    const Index cols = inputs.front().cols();
    for (int t = 0; t <= horizon; ++t) {
        if (inputs[t].rows() != tensor_dimension(ctx, t, h) || inputs[t].cols() != cols) {
            throw DimensionError("simulate_system: input at level " + std::to_string(t) + " has the wrong shape");
        }
        out.input_energy += inputs[t].squaredNorm();
    }
    out.outputs.resize(inputs.size());
    Matrix next_state = Matrix::Zero(tensor_dimension(ctx, horizon + 1, coll.state), cols);
    for (int t = horizon; t >= 0; --t) {
        const Matrix& u = inputs[t];
        out.outputs[t] = amplified_times(ctx, t, coll.y, es, h, next_state) + amplified_times(ctx, t, coll.w, h, h, u);
        next_state = amplified_times(ctx, t, coll.x, es, coll.state, next_state) +
                     amplified_times(ctx, t, coll.z, h, coll.state, u);
        out.output_energy += out.outputs[t].squaredNorm();
    }
    return out;
}

Matrix transfer_value(const Colligation& coll, const DualPoint& zeta)
{
    const Context& ctx = coll.ctx;
    const Grading h = ctx.h_grading();
    const Matrix zcol = zeta.column_map();
    // Unknowns: entries of P on the graded positions (state vertex = H vertex).
    std::vector<std::pair<Index, Index>> slots;
    for (Index i = 0; i < coll.state_dimension(); ++i) {
        for (Index j = 0; j < ctx.m_tot(); ++j) {
            if (coll.state[i] == h[j]) {
                slots.emplace_back(i, j);
            }
        }
    }
    const Index nu = static_cast<Index>(slots.size());
    auto apply = [&](const Matrix& p) -> Matrix {
        return p - coll.x * amplified_times(ctx, 1, p, h, coll.state, zcol);
    };
    Matrix system(nu, nu);
    for (Index k = 0; k < nu; ++k) {
        Matrix basis = Matrix::Zero(coll.state_dimension(), ctx.m_tot());
        basis(slots[k].first, slots[k].second) = 1.0;
        const Matrix image = apply(basis);
        for (Index r = 0; r < nu; ++r) {
            system(r, k) = image(slots[r].first, slots[r].second);
        }
    }
    Vector rhs(nu);
    for (Index r = 0; r < nu; ++r) {
        rhs(r) = coll.z(slots[r].first, slots[r].second);
    }
    const Vector sol = system.partialPivLu().solve(rhs);
    Matrix p = Matrix::Zero(coll.state_dimension(), ctx.m_tot());
    for (Index k = 0; k < nu; ++k) {
        p(slots[k].first, slots[k].second) = sol(k);
    }
    return coll.w + coll.y * amplified_times(ctx, 1, p, h, coll.state, zcol);
}

} // namespace ncpick
