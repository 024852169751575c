#include "ncpick/ncfunc.hpp"

#include <algorithm>
#include <cmath>

namespace ncpick
{

namespace
{

// Number of level-k paths from u to v.
std::vector<std::vector<double>> path_counts(const Context& ctx, int k)
{
    const int s = ctx.vertex_count();
    std::vector<std::vector<double>> count(s, std::vector<double>(s, 0.0));
    for (int u = 0; u < s; ++u) {
        count[u][u] = 1.0;
    }
    for (int level = 0; level < k; ++level) {
        std::vector<std::vector<double>> next(s, std::vector<double>(s, 0.0));
        for (int u = 0; u < s; ++u) {
            for (int v = 0; v < s; ++v) {
                if (count[u][v] == 0.0) {
                    continue;
                }
                for (int w = 0; w < s; ++w) {
                    next[u][w] += count[u][v] * ctx.edge_multiplicity()[v][w];
                }
            }
        }
        count.swap(next);
    }
    return count;
}

std::vector<Index> path_offsets(const Context& ctx, const PathLevel& level)
{
    std::vector<Index> out;
    Index off = 0;
    for (const Path& p : level.paths()) {
        out.push_back(off);
        off += ctx.multiplicity(p.end);
    }
    return out;
}

std::vector<Grading> coefficient_gradings(const Context& ctx, int k)
{
    std::vector<Grading> out;
    const Grading h = ctx.h_grading();
    for (int j = 0; j <= k; ++j) {
        out.push_back(tensor_grading(ctx, j, h));
    }
    return out;
}

double max_coefficient_norm(const SchurCoefficients& coeffs)
{
    double c = 1.0;
    for (const Matrix& t : coeffs.t0) {
        c = std::max(c, op_norm(t));
    }
    return c;
}

} // namespace

Matrix SchurCoefficients::path_slice(int j, Index p) const
{
    const TensorLayout layout(ctx, j, ctx.h_grading());
    const int src = layout.path_source(p);
    const int end = layout.path_end(p);
    return t0[j].block(ctx.vertex_offset(src), layout.block_offset(p), ctx.multiplicity(src), ctx.multiplicity(end));
}

double level_dimension(const Context& ctx, int k, const Grading& base)
{
    if (k == 0) {
        return static_cast<double>(base.size());
    }
    std::vector<double> fiber(ctx.vertex_count(), 0.0);
    for (int v : base) {
        fiber[v] += 1.0;
    }
    const auto count = path_counts(ctx, k);
    double dim = 0.0;
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        for (int v = 0; v < ctx.vertex_count(); ++v) {
            dim += count[u][v] * fiber[v];
        }
    }
    return dim;
}

double coefficient_entries(const Context& ctx, int k, const Grading& state)
{
    const Grading h = ctx.h_grading();
    const double mt = static_cast<double>(ctx.m_tot());
    double total = mt * mt;
    for (int j = 1; j <= k; ++j) {
        total += mt * (level_dimension(ctx, j, h) + level_dimension(ctx, j, state));
    }
    return total;
}

int max_levels_within_cap(const Context& ctx, const Grading& state, double cap, int upper)
{
    int k = 0;
    while (k < upper && coefficient_entries(ctx, k + 1, state) <= cap) {
        ++k;
    }
    return k;
}

SchurCoefficients coefficients_from_colligation(const Colligation& coll, int k, double cap)
{
    if (k < 0) {
        throw DimensionError("coefficient level must be nonnegative");
    }
    const Context& ctx = coll.ctx;
    const double needed = coefficient_entries(ctx, k, coll.state);
    if (needed > cap) {
        throw CapExceeded(k, needed, cap);
    }
    const Grading h = ctx.h_grading();
    const Grading es = tensor_grading(ctx, 1, coll.state);
    SchurCoefficients out{ctx, k, {coll.w}, 1.0 + coll.report.norm_excess, false};
    Matrix q = coll.y;
    for (int j = 1; j <= k; ++j) {
        out.t0.push_back(times_amplified(ctx, j, q, coll.z, h, coll.state));
        if (j < k) {
            q = times_amplified(ctx, j, q, coll.x, es, coll.state);
        }
    }
    return out;
}

Evaluation eval_point(const SchurCoefficients& coeffs, const DualPoint& zeta, const ToleranceConfig& tol)
{
    const Context& ctx = coeffs.ctx;
    const double n = zeta.norm();
    if (n >= 1.0) {
        throw NormError(n);
    }
    const auto powers = point_powers(zeta, coeffs.levels);
    Matrix full = Matrix::Zero(ctx.m_tot(), ctx.m_tot());
    for (int j = 0; j <= coeffs.levels; ++j) {
        const TensorLayout layout(ctx, j, ctx.h_grading());
        for (Index p = 0; p < layout.path_count(); ++p) {
            const Matrix& b = powers[j].blocks[static_cast<std::size_t>(p)];
            full.middleCols(ctx.vertex_offset(layout.path_source(p)), b.cols()).noalias() +=
                coeffs.t0[j].middleCols(layout.block_offset(p), b.rows()) * b;
        }
    }
    Evaluation ev;
    ev.full = full;
    ev.value = commutant_embed_check(ctx, full, tol);
    ev.tail_bound = coeffs.finite ? 0.0
                                  : coeffs.coefficient_bound *
                                        geometric_tail(powers.back().norm(ctx), n, coeffs.levels);
    return ev;
}

TruncatedSchurOperator schur_truncate(const SchurCoefficients& coeffs, int k, double cap)
{
    if (k < 0 || k > coeffs.levels) {
        throw DimensionError("schur_truncate: level outside the computed coefficients");
    }
    const Context& ctx = coeffs.ctx;
    const Grading h = ctx.h_grading();
    TruncatedSchurOperator out;
    out.levels = k;
    Index total = 0;
    for (int t = 0; t <= k; ++t) {
        out.level_offsets.push_back(total);
        total += tensor_dimension(ctx, t, h);
    }
    out.level_offsets.push_back(total);
    if (static_cast<double>(total) * static_cast<double>(total) > cap) {
        throw CapExceeded(k, static_cast<double>(total) * static_cast<double>(total), cap);
    }
    const auto grades = coefficient_gradings(ctx, k);
    out.matrix = Matrix::Zero(total, total);
    for (int i = 0; i <= k; ++i) {
        for (int j = i; j <= k; ++j) {
            const Matrix block = amplify(ctx, i, coeffs.t0[j - i], grades[j - i], h);
            out.matrix.block(out.level_offsets[i], out.level_offsets[j], block.rows(), block.cols()) = block;
        }
    }
    return out;
}

double schur_truncate_and_norm(const SchurCoefficients& coeffs, int k, TruncatedSchurOperator* out, double cap)
{
    TruncatedSchurOperator op = schur_truncate(coeffs, k, cap);
    const double n = op_norm(op.matrix);
    if (out != nullptr) {
        *out = std::move(op);
    }
    return n;
}

std::vector<Matrix> apply_truncated(const SchurCoefficients& coeffs, const std::vector<Matrix>& inputs)
{
    const int k = static_cast<int>(inputs.size()) - 1;
    if (k > coeffs.levels) {
        throw DimensionError("apply_truncated: more input levels than coefficients");
    }
    const Context& ctx = coeffs.ctx;
    const Grading h = ctx.h_grading();
    const auto grades = coefficient_gradings(ctx, std::max(k, 0));
    std::vector<Matrix> out;
    for (int i = 0; i <= k; ++i) {
        Matrix y = Matrix::Zero(tensor_dimension(ctx, i, h), inputs[i].cols());
        for (int j = i; j <= k; ++j) {
            y += amplified_times(ctx, i, coeffs.t0[j - i], grades[j - i], h, inputs[j]);
        }
        out.push_back(std::move(y));
    }
    return out;
}

IntertwineReport cauchy_intertwine_check(const SchurCoefficients& coeffs, const DualPoint& zeta, int check_levels,
                                         const ToleranceConfig& tol)
{
    const Context& ctx = coeffs.ctx;
    const int k = coeffs.levels;
    if (check_levels < 0 || check_levels > k) {
        throw DimensionError("cauchy_intertwine_check: check levels must lie in 0..K");
    }
    const double n = zeta.norm();
    if (n >= 1.0) {
        throw NormError(n);
    }
    const Grading h = ctx.h_grading();
    const auto grades = coefficient_gradings(ctx, k);
    const auto powers = point_powers(zeta, k);
    std::vector<Matrix> dense;
    for (const PointPower& p : powers) {
        dense.push_back(p.dense(ctx));
    }
    ToleranceConfig loose = tol;
    loose.residual_tol = 1e300; // membership is not the point here
    const Matrix t_eta = eval_point(coeffs, zeta, loose).full;
    IntertwineReport rep;
    rep.levels_checked = check_levels;
    for (int i = 0; i <= check_levels; ++i) {
        Matrix lhs = Matrix::Zero(dense[i].rows(), ctx.m_tot());
        for (int j = i; j <= k; ++j) {
            lhs += amplified_times(ctx, i, coeffs.t0[j - i], grades[j - i], h, dense[j]);
        }
        const Matrix rhs = amplified_times(ctx, i, t_eta, h, h, dense[i]);
        rep.residual = std::max(rep.residual, op_norm((lhs - rhs).eval()));
    }
    const double c = max_coefficient_norm(coeffs);
    rep.bound = 2.0 * c * std::pow(n, k + 1) / (1.0 - n) + tol.residual_tol;
    return rep;
}

Matrix generator_matrix(const Context& ctx, const Generator& g, int k)
{
    if (k < 0) {
        throw DimensionError("generator level must be nonnegative");
    }
    const Grading h = ctx.h_grading();
    std::vector<Index> offsets;
    Index total = 0;
    for (int t = 0; t <= k; ++t) {
        offsets.push_back(total);
        total += tensor_dimension(ctx, t, h);
    }
    Matrix out = Matrix::Zero(total, total);
    if (const auto* eta = std::get_if<DualPoint>(&g)) {
        const Grading eh = tensor_grading(ctx, 1, h);
        const Matrix col = eta->column_map();
        for (int t = 0; t < k; ++t) {
            const Matrix block = amplify(ctx, t, col, h, eh);
            out.block(offsets[t + 1], offsets[t], block.rows(), block.cols()) = block;
        }
    } else if (const auto* a = std::get_if<CommutantElement>(&g)) {
        const Matrix full = a->full();
        for (int t = 0; t <= k; ++t) {
            const Matrix block = amplify(ctx, t, full, h, h);
            out.block(offsets[t], offsets[t], block.rows(), block.cols()) = block;
        }
    } else if (const auto* xi = std::get_if<InducedCreation>(&g)) {
        if (xi->xi.size() != ctx.edge_count()) {
            throw DimensionError("induced creation needs one coefficient per edge");
        }
        for (int t = 0; t < k; ++t) {
            const PathLevel from(ctx, t);
            const PathLevel to(ctx, t + 1);
            const auto from_off = path_offsets(ctx, from);
            const auto to_off = path_offsets(ctx, to);
            for (Index p = 0; p < from.size(); ++p) {
                const Path& path = from[p];
                for (int e : ctx.in_edges(path.source)) {
                    std::vector<int> word{e};
                    word.insert(word.end(), path.edges.begin(), path.edges.end());
                    const Index q = to.find(word);
                    const Index m = ctx.multiplicity(path.end);
                    out.block(offsets[t + 1] + to_off[q], offsets[t] + from_off[p], m, m) +=
                        xi->xi(e) * Matrix::Identity(m, m);
                }
            }
        }
    } else {
        const auto& b = std::get<InducedLeftAction>(g).b;
        if (b.size() != ctx.vertex_count()) {
            throw DimensionError("induced left action needs one scalar per vertex");
        }
        for (int t = 0; t <= k; ++t) {
            const Grading gt = tensor_grading(ctx, t, h);
            for (std::size_t c = 0; c < gt.size(); ++c) {
                const Index idx = offsets[t] + static_cast<Index>(c);
                out(idx, idx) = b(gt[c]);
            }
        }
    }
    return out;
}

CommutationReport commutation_check(const SchurCoefficients& coeffs, int k, const std::vector<InducedCreation>& xis,
                                    const std::vector<InducedLeftAction>& bs)
{
    if (k < 1) {
        throw DimensionError("commutation_check: the safe window is empty for K < 1");
    }
    const TruncatedSchurOperator op = schur_truncate(coeffs, k);
    const Matrix ts = op.matrix.adjoint();
    CommutationReport rep;
    rep.window = k - 1;
    const Index safe_cols = op.level_offsets[static_cast<std::size_t>(k)];
    for (const auto& xi : xis) {
        const Matrix g = generator_matrix(coeffs.ctx, xi, k);
        const Matrix comm = ts * g - g * ts;
        rep.creation = std::max(rep.creation, op_norm(comm.leftCols(safe_cols).eval()));
    }
    for (const auto& b : bs) {
        const Matrix g = generator_matrix(coeffs.ctx, b, k);
        rep.left_action = std::max(rep.left_action, op_norm((ts * g - g * ts).eval()));
    }
    return rep;
}

NCPolynomial NCPolynomial::constant(const Context& ctx, const CommutantElement& c)
{
    NCPolynomial p(ctx);
    p.add_term({}, c);
    return p;
}

NCPolynomial NCPolynomial::monomial(const Context& ctx, const Word& w, const CommutantElement& c)
{
    NCPolynomial p(ctx);
    p.add_term(w, c);
    return p;
}

NCPolynomial NCPolynomial::monomial(const Context& ctx, const Word& w, Scalar c)
{
    std::vector<Matrix> blocks;
    for (int m : ctx.multiplicities()) {
        blocks.push_back(c * Matrix::Identity(m, m));
    }
    return monomial(ctx, w, CommutantElement(ctx, std::move(blocks)));
}

int NCPolynomial::degree() const
{
    int d = 0;
    for (const auto& [w, c] : terms_) {
        d = std::max(d, static_cast<int>(w.size()));
    }
    return d;
}

bool NCPolynomial::scalar_coefficients(double tol) const
{
    for (const auto& [w, c] : terms_) {
        const Scalar s = c.block(0)(0, 0);
        for (const Matrix& b : c.blocks()) {
            if ((b - s * Matrix::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() > tol) {
                return false;
            }
        }
    }
    return true;
}

bool admissible_word(const Context& ctx, const Word& w)
{
    for (int e : w) {
        if (e < 0 || e >= ctx.edge_count()) {
            return false;
        }
    }
    // Path (w_k, ..., w_1): target(w_{i+1}) = source(w_i).
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (ctx.edge(w[i + 1]).target != ctx.edge(w[i]).source) {
            return false;
        }
    }
    return true;
}

void NCPolynomial::add_term(const Word& w, const CommutantElement& c)
{
    if (!admissible_word(ctx_, w)) {
        throw DimensionError("word is not admissible in this quiver");
    }
    if (static_cast<int>(c.blocks().size()) != ctx_.vertex_count()) {
        throw DimensionError("coefficient has the wrong number of vertex blocks");
    }
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
        return;
    }
    std::vector<Matrix> sum;
    for (int u = 0; u < ctx_.vertex_count(); ++u) {
        sum.push_back(it->second.block(u) + c.block(u));
    }
    it->second = CommutantElement(ctx_, std::move(sum));
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& other) const
{
    NCPolynomial out = *this;
    for (const auto& [w, c] : other.terms_) {
        out.add_term(w, c);
    }
    return out;
}

NCPolynomial NCPolynomial::scaled(Scalar lambda) const
{
    NCPolynomial out(ctx_);
    for (const auto& [w, c] : terms_) {
        std::vector<Matrix> blocks;
        for (const Matrix& b : c.blocks()) {
            blocks.push_back(lambda * b);
        }
        out.terms_.emplace(w, CommutantElement(ctx_, std::move(blocks)));
    }
    return out;
}

NCPolynomial truncated_multiply(const NCPolynomial& p, const NCPolynomial& q, int k)
{
    if (!(p.context() == q.context())) {
        throw DimensionError("truncated_multiply: polynomials live over different contexts");
    }
    const int deg = p.degree() + q.degree();
    if (deg > k) {
        throw CapExceeded(deg, static_cast<double>(deg), static_cast<double>(k));
    }
    const Context& ctx = p.context();
    if (!ctx.is_free() && !(p.scalar_coefficients() && q.scalar_coefficients())) {
        throw DimensionError("truncated_multiply: matrix coefficients need a single vertex");
    }
    NCPolynomial out(ctx);
    for (const auto& [u, cu] : p.terms()) {
        for (const auto& [v, cv] : q.terms()) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            if (admissible_word(ctx, w)) {
                out.add_term(w, cu * cv);
            }
        }
    }
    return out;
}

SchurCoefficients schur_coefficients(const NCPolynomial& p, int k)
{
    const Context& ctx = p.context();
    if (p.degree() > k) {
        throw DimensionError("schur_coefficients: degree exceeds the level");
    }
    const Grading h = ctx.h_grading();
    SchurCoefficients out{ctx, k, {}, 1.0, true};
    std::vector<PathLevel> levels;
    for (int j = 0; j <= k; ++j) {
        out.t0.push_back(Matrix::Zero(ctx.m_tot(), tensor_dimension(ctx, j, h)));
        levels.emplace_back(ctx, j);
    }
    for (const auto& [w, c] : p.terms()) {
        const int j = static_cast<int>(w.size());
        if (j == 0) {
            out.t0[0] = c.adjoint().full();
            continue;
        }
        const Word path(w.rbegin(), w.rend());
        const Index idx = levels[j].find(path);
        const Path& pp = levels[j][idx];
        if (ctx.multiplicity(pp.source) != ctx.multiplicity(pp.end)) {
            throw DimensionError("schur_coefficients: path endpoints have different multiplicities");
        }
        const auto offs = path_offsets(ctx, levels[j]);
        out.t0[j].block(ctx.vertex_offset(pp.source), offs[idx], ctx.multiplicity(pp.source),
                        ctx.multiplicity(pp.end)) = c.block(pp.end).adjoint();
    }
    out.coefficient_bound = max_coefficient_norm(out);
    return out;
}

Matrix hat_eval(const NCPolynomial& p, const DualPoint& zeta)
{
    const Context& ctx = p.context();
    Matrix out = Matrix::Zero(ctx.m_tot(), ctx.m_tot());
    for (const auto& [w, c] : p.terms()) {
        if (w.empty()) {
            out += c.adjoint().full();
            continue;
        }
        const int src = ctx.edge(w.back()).source;
        const int end = ctx.edge(w.front()).target;
        Matrix prod = Matrix::Identity(ctx.multiplicity(src), ctx.multiplicity(src));
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            prod = zeta.block(*it) * prod;
        }
        out.block(ctx.vertex_offset(src), ctx.vertex_offset(src), prod.cols(), prod.cols()) +=
            c.block(end).adjoint() * prod;
    }
    return out;
}

} // namespace ncpick
