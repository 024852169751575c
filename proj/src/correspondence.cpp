#include "ncpick/correspondence.hpp"

#include <limits>
#include <numeric>

namespace ncpick
{

namespace
{

// Source and end vertex of every level-t path, lexicographic order.
void enumerate_endpoints(const Context& ctx, int t, std::vector<int>& sources, std::vector<int>& ends)
{
    const int s = ctx.vertex_count();
    sources.resize(s);
    ends.resize(s);
    std::iota(sources.begin(), sources.end(), 0);
    std::iota(ends.begin(), ends.end(), 0);
    for (int level = 0; level < t; ++level) {
        std::vector<int> next_sources;
        std::vector<int> next_ends;
        for (std::size_t p = 0; p < sources.size(); ++p) {
            for (int e : ctx.out_edges(ends[p])) {
                next_sources.push_back(sources[p]);
                next_ends.push_back(ctx.edge(e).target);
            }
        }
        sources.swap(next_sources);
        ends.swap(next_ends);
    }
}

std::vector<std::vector<Index>> fibers_of(const Grading& base, int s)
{
    std::vector<std::vector<Index>> fibers(s);
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] < 0 || base[i] >= s) {
            throw DimensionError("grading refers to a vertex out of range");
        }
        fibers[base[i]].push_back(static_cast<Index>(i));
    }
    return fibers;
}

Matrix restrict(const Matrix& b, const std::vector<Index>& rows, const std::vector<Index>& cols)
{
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Index>(i), static_cast<Index>(j)) = b(rows[i], cols[j]);
        }
    }
    return out;
}

std::vector<Matrix> fiber_blocks(const Context& ctx, const Matrix& b, const Grading& dom, const Grading& cod)
{
    if (b.rows() != static_cast<Index>(cod.size()) || b.cols() != static_cast<Index>(dom.size())) {
        throw DimensionError("amplify: operator shape does not match its gradings");
    }
    const auto df = fibers_of(dom, ctx.vertex_count());
    const auto cf = fibers_of(cod, ctx.vertex_count());
    std::vector<Matrix> out(ctx.vertex_count());
    for (int v = 0; v < ctx.vertex_count(); ++v) {
        out[v] = restrict(b, cf[v], df[v]);
    }
    return out;
}

} // namespace

Context::Context(int s, std::vector<int> m, std::vector<std::vector<int>> g) : m_(std::move(m)), g_(std::move(g))
{
    if (s < 1) {
        throw DimensionError("vertex count must be at least 1");
    }
    if (static_cast<int>(m_.size()) != s || static_cast<int>(g_.size()) != s) {
        throw DimensionError("multiplicity and edge-multiplicity sizes must equal the vertex count");
    }
    for (int u = 0; u < s; ++u) {
        if (m_[u] < 1) {
            throw DimensionError("vertex multiplicities must be positive");
        }
        if (static_cast<int>(g_[u].size()) != s) {
            throw DimensionError("edge-multiplicity matrix must be s x s");
        }
        for (int v = 0; v < s; ++v) {
            if (g_[u][v] < 0) {
                throw DimensionError("edge multiplicities must be nonnegative");
            }
        }
    }
    offsets_.resize(s);
    for (int u = 0; u < s; ++u) {
        offsets_[u] = m_tot_;
        m_tot_ += m_[u];
    }
    out_.resize(s);
    in_.resize(s);
    for (int u = 0; u < s; ++u) {
        for (int v = 0; v < s; ++v) {
            for (int k = 0; k < g_[u][v]; ++k) {
                const int e = static_cast<int>(edges_.size());
                edges_.push_back({u, v, k});
                out_[u].push_back(e);
                in_[v].push_back(e);
                edge_offsets_.push_back(dim_eh_);
                dim_eh_ += m_[v];
            }
        }
    }
    if (edges_.empty()) {
        throw DegenerateCorrespondence();
    }
}

Grading Context::h_grading() const
{
    Grading out;
    out.reserve(static_cast<std::size_t>(m_tot_));
    for (int u = 0; u < vertex_count(); ++u) {
        out.insert(out.end(), m_[u], u);
    }
    return out;
}

Grading Context::h_grading(int n_points) const
{
    const Grading one = h_grading();
    Grading out;
    for (int i = 0; i < n_points; ++i) {
        out.insert(out.end(), one.begin(), one.end());
    }
    return out;
}

Context build_context(int s, const std::vector<int>& m, const std::vector<std::vector<int>>& g)
{
    return Context(s, m, g);
}

Context free_context(int d, int m)
{
    return Context(1, {m}, {{d}});
}

PathLevel::PathLevel(const Context& ctx, int k) : level_(k)
{
    if (k < 0) {
        throw DimensionError("path level must be nonnegative");
    }
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        paths_.push_back({{}, u, u});
    }
    for (int level = 0; level < k; ++level) {
        std::vector<Path> next;
        for (const Path& p : paths_) {
            for (int e : ctx.out_edges(p.end)) {
                Path q = p;
                q.edges.push_back(e);
                q.end = ctx.edge(e).target;
                next.push_back(std::move(q));
            }
        }
        paths_.swap(next);
    }
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        dimension_ += ctx.multiplicity(paths_[i].end);
        if (k > 0) {
            index_.emplace(paths_[i].edges, static_cast<Index>(i));
        }
    }
}

Index PathLevel::find(const std::vector<int>& edges) const
{
    if (static_cast<int>(edges.size()) != level_) {
        return -1;
    }
    if (level_ == 0) {
        return -1; // empty paths are per vertex; look them up by vertex
    }
    const auto it = index_.find(edges);
    return it == index_.end() ? -1 : it->second;
}

TensorLayout::TensorLayout(const Context& ctx, int t, const Grading& base) : level_(t), base_(base)
{
    if (t < 0) {
        throw DimensionError("tensor level must be nonnegative");
    }
    fibers_ = fibers_of(base, ctx.vertex_count());
    enumerate_endpoints(ctx, t, sources_, ends_);
    offsets_.resize(sources_.size());
    for (std::size_t p = 0; p < sources_.size(); ++p) {
        offsets_[p] = dimension_;
        dimension_ += static_cast<Index>(fibers_[ends_[p]].size());
    }
}

Grading TensorLayout::grading() const
{
    if (level_ == 0) {
        return base_;
    }
    Grading out;
    out.reserve(static_cast<std::size_t>(dimension_));
    for (std::size_t p = 0; p < sources_.size(); ++p) {
        out.insert(out.end(), fibers_[ends_[p]].size(), sources_[p]);
    }
    return out;
}

Grading tensor_grading(const Context& ctx, int t, const Grading& base)
{
    return TensorLayout(ctx, t, base).grading();
}

Index tensor_dimension(const Context& ctx, int t, const Grading& base)
{
    if (t == 0) {
        return static_cast<Index>(base.size());
    }
    return TensorLayout(ctx, t, base).dimension();
}

Matrix amplify(const Context& ctx, int t, const Matrix& b, const Grading& dom, const Grading& cod)
{
    if (t == 0) {
        if (b.rows() != static_cast<Index>(cod.size()) || b.cols() != static_cast<Index>(dom.size())) {
            throw DimensionError("amplify: operator shape does not match its gradings");
        }
        return b;
    }
    const auto blocks = fiber_blocks(ctx, b, dom, cod);
    const TensorLayout dl(ctx, t, dom);
    const TensorLayout cl(ctx, t, cod);
    Matrix out = Matrix::Zero(cl.dimension(), dl.dimension());
    for (Index p = 0; p < dl.path_count(); ++p) {
        const Matrix& bv = blocks[dl.path_end(p)];
        out.block(cl.block_offset(p), dl.block_offset(p), bv.rows(), bv.cols()) = bv;
    }
    return out;
}

Matrix amplified_times(const Context& ctx, int t, const Matrix& b, const Grading& dom, const Grading& cod,
                       const Matrix& x)
{
    if (t == 0) {
        if (x.rows() != b.cols()) {
            throw DimensionError("amplified_times: shape mismatch");
        }
        return b * x;
    }
    const auto blocks = fiber_blocks(ctx, b, dom, cod);
    const TensorLayout dl(ctx, t, dom);
    const TensorLayout cl(ctx, t, cod);
    if (x.rows() != dl.dimension()) {
        throw DimensionError("amplified_times: shape mismatch");
    }
    Matrix out(cl.dimension(), x.cols());
    for (Index p = 0; p < dl.path_count(); ++p) {
        const Matrix& bv = blocks[dl.path_end(p)];
        out.middleRows(cl.block_offset(p), bv.rows()).noalias() = bv * x.middleRows(dl.block_offset(p), bv.cols());
    }
    return out;
}

Matrix times_amplified(const Context& ctx, int t, const Matrix& x, const Matrix& b, const Grading& dom,
                       const Grading& cod)
{
    if (t == 0) {
        if (x.cols() != b.rows()) {
            throw DimensionError("times_amplified: shape mismatch");
        }
        return x * b;
    }
    const auto blocks = fiber_blocks(ctx, b, dom, cod);
    const TensorLayout dl(ctx, t, dom);
    const TensorLayout cl(ctx, t, cod);
    if (x.cols() != cl.dimension()) {
        throw DimensionError("times_amplified: shape mismatch");
    }
    Matrix out(x.rows(), dl.dimension());
    for (Index p = 0; p < dl.path_count(); ++p) {
        const Matrix& bv = blocks[dl.path_end(p)];
        out.middleCols(dl.block_offset(p), bv.cols()).noalias() = x.middleCols(cl.block_offset(p), bv.rows()) * bv;
    }
    return out;
}

double grading_violation(const Matrix& b, const Grading& dom, const Grading& cod)
{
    if (b.rows() != static_cast<Index>(cod.size()) || b.cols() != static_cast<Index>(dom.size())) {
        throw DimensionError("grading_violation: operator shape does not match its gradings");
    }
    double worst = 0.0;
    for (Index i = 0; i < b.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            if (cod[i] != dom[j]) {
                worst = std::max(worst, std::abs(b(i, j)));
            }
        }
    }
    return worst;
}

CommutantElement::CommutantElement(const Context& ctx, std::vector<Matrix> blocks) : blocks_(std::move(blocks))
{
    if (static_cast<int>(blocks_.size()) != ctx.vertex_count()) {
        throw DimensionError("commutant element needs one block per vertex");
    }
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        if (blocks_[u].rows() != ctx.multiplicity(u) || blocks_[u].cols() != ctx.multiplicity(u)) {
            throw DimensionError("commutant block " + std::to_string(u) + " has the wrong shape");
        }
        sizes_.push_back(ctx.multiplicity(u));
    }
}

CommutantElement CommutantElement::identity(const Context& ctx)
{
    std::vector<Matrix> blocks;
    for (int m : ctx.multiplicities()) {
        blocks.push_back(Matrix::Identity(m, m));
    }
    return {ctx, std::move(blocks)};
}

CommutantElement CommutantElement::zero(const Context& ctx)
{
    std::vector<Matrix> blocks;
    for (int m : ctx.multiplicities()) {
        blocks.push_back(Matrix::Zero(m, m));
    }
    return {ctx, std::move(blocks)};
}

Matrix CommutantElement::full() const
{
    const Index n = std::accumulate(sizes_.begin(), sizes_.end(), Index{0});
    Matrix out = Matrix::Zero(n, n);
    Index off = 0;
    for (const Matrix& b : blocks_) {
        out.block(off, off, b.rows(), b.cols()) = b;
        off += b.rows();
    }
    return out;
}

double CommutantElement::norm() const
{
    double out = 0.0;
    for (const Matrix& b : blocks_) {
        out = std::max(out, op_norm(b));
    }
    return out;
}

CommutantElement CommutantElement::adjoint() const
{
    CommutantElement out = *this;
    for (Matrix& b : out.blocks_) {
        b.adjointInPlace();
    }
    return out;
}

CommutantElement operator*(const CommutantElement& a, const CommutantElement& b)
{
    if (a.blocks().size() != b.blocks().size()) {
        throw DimensionError("commutant product: vertex counts differ");
    }
    CommutantElement out = a;
    for (std::size_t u = 0; u < a.blocks().size(); ++u) {
        out.blocks_[u] = a.blocks_[u] * b.blocks_[u];
    }
    return out;
}

CommutantElement commutant_embed_check(const Context& ctx, const Matrix& a, const ToleranceConfig& tol)
{
    if (a.rows() != ctx.m_tot() || a.cols() != ctx.m_tot()) {
        throw DimensionError("commutant_embed_check: matrix must be m_tot x m_tot");
    }
    Matrix off = a;
    std::vector<Matrix> blocks;
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        const Index o = ctx.vertex_offset(u);
        const Index m = ctx.multiplicity(u);
        blocks.push_back(a.block(o, o, m, m));
        off.block(o, o, m, m).setZero();
    }
    const double leak = op_norm(off);
    if (leak > tol.residual_tol * (1.0 + op_norm(a))) {
        throw NotInCommutant(leak);
    }
    return {ctx, std::move(blocks)};
}

DualPoint::DualPoint(const Context& ctx, std::vector<Matrix> blocks) : ctx_(ctx), blocks_(std::move(blocks))
{
    if (static_cast<int>(blocks_.size()) != ctx.edge_count()) {
        throw DimensionError("point needs one block per edge (" + std::to_string(ctx.edge_count()) + ")");
    }
    for (int e = 0; e < ctx.edge_count(); ++e) {
        const Edge& ed = ctx.edge(e);
        if (blocks_[e].rows() != ctx.multiplicity(ed.target) || blocks_[e].cols() != ctx.multiplicity(ed.source)) {
            throw DimensionError("point block for edge " + std::to_string(e) + " must be " +
                                 std::to_string(ctx.multiplicity(ed.target)) + "x" +
                                 std::to_string(ctx.multiplicity(ed.source)));
        }
    }
}

DualPoint DualPoint::zero(const Context& ctx)
{
    std::vector<Matrix> blocks;
    for (const Edge& e : ctx.edges()) {
        blocks.push_back(Matrix::Zero(ctx.multiplicity(e.target), ctx.multiplicity(e.source)));
    }
    return {ctx, std::move(blocks)};
}

Matrix DualPoint::column_map() const
{
    Matrix out = Matrix::Zero(ctx_.dim_EH(), ctx_.m_tot());
    for (int e = 0; e < ctx_.edge_count(); ++e) {
        out.block(ctx_.edge_offset(e), ctx_.vertex_offset(ctx_.edge(e).source), blocks_[e].rows(),
                  blocks_[e].cols()) = blocks_[e];
    }
    return out;
}

double DualPoint::norm() const
{
    return op_norm(column_map());
}

PointValidation validate_point(const Context& ctx, const DualPoint& zeta)
{
    if (!(zeta.context() == ctx)) {
        throw DimensionError("point belongs to a different context");
    }
    const double n = zeta.norm();
    return {n, n < 1.0};
}

Matrix PointPower::dense(const Context& ctx) const
{
    const TensorLayout layout(ctx, level, ctx.h_grading());
    Matrix out = Matrix::Zero(layout.dimension(), ctx.m_tot());
    for (Index p = 0; p < layout.path_count(); ++p) {
        const Matrix& b = blocks[static_cast<std::size_t>(p)];
        out.block(layout.block_offset(p), ctx.vertex_offset(layout.path_source(p)), b.rows(), b.cols()) = b;
    }
    return out;
}

double PointPower::norm(const Context& ctx) const
{
    // ||eta^(k)||^2 is the top eigenvalue of the per-vertex Gram sums.
    std::vector<Matrix> gram(ctx.vertex_count());
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        gram[u] = Matrix::Zero(ctx.multiplicity(u), ctx.multiplicity(u));
    }
    std::vector<int> sources;
    std::vector<int> ends;
    enumerate_endpoints(ctx, level, sources, ends);
    for (std::size_t p = 0; p < blocks.size(); ++p) {
        gram[sources[p]].noalias() += blocks[p].adjoint() * blocks[p];
    }
    double top = 0.0;
    for (const Matrix& g : gram) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
        top = std::max(top, es.eigenvalues().maxCoeff());
    }
    return std::sqrt(std::max(top, 0.0));
}

Index PointPower::entries() const
{
    Index n = 0;
    for (const Matrix& b : blocks) {
        n += b.size();
    }
    return n;
}

std::vector<PointPower> point_powers(const DualPoint& zeta, int k)
{
    if (k < 0) {
        throw DimensionError("point power level must be nonnegative");
    }
    const Context& ctx = zeta.context();
    std::vector<PointPower> out;
    PointPower level0{0, {}};
    for (int u = 0; u < ctx.vertex_count(); ++u) {
        level0.blocks.push_back(Matrix::Identity(ctx.multiplicity(u), ctx.multiplicity(u)));
    }
    out.push_back(std::move(level0));
    std::vector<int> ends(ctx.vertex_count());
    std::iota(ends.begin(), ends.end(), 0);
    for (int level = 1; level <= k; ++level) {
        const PointPower& prev = out.back();
        PointPower next{level, {}};
        std::vector<int> next_ends;
        for (std::size_t p = 0; p < prev.blocks.size(); ++p) {
            for (int e : ctx.out_edges(ends[p])) {
                next.blocks.push_back(zeta.block(e) * prev.blocks[p]);
                next_ends.push_back(ctx.edge(e).target);
            }
        }
        ends.swap(next_ends);
        out.push_back(std::move(next));
    }
    return out;
}

PointPower point_power(const DualPoint& zeta, int k)
{
    auto all = point_powers(zeta, k);
    return std::move(all.back());
}

double point_power_entries(const Context& ctx, int k)
{
    // Per vertex pair (u, v): number of level-k paths u -> v times m[u] m[v].
    const int s = ctx.vertex_count();
    std::vector<std::vector<double>> count(s, std::vector<double>(s, 0.0));
    for (int u = 0; u < s; ++u) {
        count[u][u] = 1.0;
    }
    for (int level = 0; level < k; ++level) {
        std::vector<std::vector<double>> next(s, std::vector<double>(s, 0.0));
        for (int u = 0; u < s; ++u) {
            for (int v = 0; v < s; ++v) {
                for (int w = 0; w < s; ++w) {
                    next[u][w] += count[u][v] * ctx.edge_multiplicity()[v][w];
                }
            }
        }
        count.swap(next);
    }
    double total = 0.0;
    for (int u = 0; u < s; ++u) {
        for (int v = 0; v < s; ++v) {
            total += count[u][v] * ctx.multiplicity(u) * ctx.multiplicity(v);
        }
    }
    return total;
}

Matrix CauchyKernel::dense(const Context& ctx) const
{
    std::vector<Matrix> parts;
    Index rows = 0;
    for (const PointPower& p : powers) {
        parts.push_back(p.dense(ctx));
        rows += parts.back().rows();
    }
    Matrix out(rows, ctx.m_tot());
    Index off = 0;
    for (const Matrix& part : parts) {
        out.middleRows(off, part.rows()) = part;
        off += part.rows();
    }
    return out;
}

double geometric_tail(double power_norm_k, double eta_norm, int /*k*/)
{
    if (eta_norm >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    if (power_norm_k == 0.0) {
        return 0.0;
    }
    return power_norm_k * eta_norm / (1.0 - eta_norm);
}

CauchyKernel cauchy_kernel(const DualPoint& zeta, int k, bool force)
{
    if (k < 0) {
        throw DimensionError("Cauchy kernel level must be nonnegative");
    }
    const double n = zeta.norm();
    if (n >= 1.0 && !force) {
        throw NormError(n);
    }
    CauchyKernel out{k, point_powers(zeta, k), 0.0};
    out.tail_bound = n >= 1.0 ? std::numeric_limits<double>::infinity()
                              : std::pow(n, k + 1) / (1.0 - n);
    return out;
}

Matrix stacked_points(const Context& ctx, const std::vector<DualPoint>& points)
{
    const Index n = static_cast<Index>(points.size());
    const Index mt = ctx.m_tot();
    const TensorLayout layout(ctx, 1, ctx.h_grading(static_cast<int>(n)));
    Matrix out = Matrix::Zero(layout.dimension(), n * mt);
    for (int e = 0; e < ctx.edge_count(); ++e) {
        const Edge& ed = ctx.edge(e);
        const Index mt_target = ctx.multiplicity(ed.target);
        for (Index i = 0; i < n; ++i) {
            // Within path block e the fiber is point-major over H_target.
            out.block(layout.block_offset(e) + i * mt_target, i * mt + ctx.vertex_offset(ed.source), mt_target,
                      ctx.multiplicity(ed.source)) = points[static_cast<std::size_t>(i)].block(e);
        }
    }
    return out;
}

} // namespace ncpick
