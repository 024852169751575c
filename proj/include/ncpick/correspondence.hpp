// Finite-dimensional model of a correspondence over M = C^s represented on
// H = (+)_u C^{m[u]}: edges, path levels of tensor powers, points of the
// sigma-dual, their powers and Cauchy kernels.
//
// Coordinates:
//  * H is vertex-major: vertex u owns rows [offset(u), offset(u) + m[u]).
//  * A graded space K is described by a Grading, the vertex of each coordinate.
//  * E^t (x) K has coordinates (p, c) for level-t paths p in lexicographic
//    order and c over the K coordinates of vertex end(p), in K's order. The
//    vertex of (p, c) is source(p). For t = 0 the layout is K itself.
#ifndef NCPICK_CORRESPONDENCE_HPP
#define NCPICK_CORRESPONDENCE_HPP

#include <map>
#include <vector>

#include "ncpick/linalg.hpp"

namespace ncpick
{

struct Edge
{
    int source;
    int target;
    int slot; ///< index among the parallel edges u -> v
};

using Grading = std::vector<int>;

class Context
{
public:
    Context(int s, std::vector<int> m, std::vector<std::vector<int>> g);

    int vertex_count() const { return static_cast<int>(m_.size()); }
    int multiplicity(int u) const { return m_[u]; }
    const std::vector<int>& multiplicities() const { return m_; }
    const std::vector<std::vector<int>>& edge_multiplicity() const { return g_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int e) const { return edges_[e]; }

    Index m_tot() const { return m_tot_; }
    Index dim_EH() const { return dim_eh_; }
    Index vertex_offset(int u) const { return offsets_[u]; }
    /// Row offset of edge e's block inside E (x) H.
    Index edge_offset(int e) const { return edge_offsets_[e]; }
    /// Edges leaving vertex u, ascending.
    const std::vector<int>& out_edges(int u) const { return out_[u]; }
    /// Edges entering vertex u, ascending.
    const std::vector<int>& in_edges(int u) const { return in_[u]; }

    bool is_free() const { return vertex_count() == 1; }
    /// Grading of H (vertex of each coordinate).
    Grading h_grading() const;
    /// Grading of H^(N), point-major.
    Grading h_grading(int n_points) const;

    bool operator==(const Context& other) const { return m_ == other.m_ && g_ == other.g_; }

private:
    std::vector<int> m_;
    std::vector<std::vector<int>> g_;
    std::vector<Edge> edges_;
    std::vector<Index> offsets_;
    std::vector<Index> edge_offsets_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    Index m_tot_ = 0;
    Index dim_eh_ = 0;
};

Context build_context(int s, const std::vector<int>& m, const std::vector<std::vector<int>>& g);
/// Free case: one vertex of multiplicity m with d loops.
Context free_context(int d, int m);

struct Path
{
    std::vector<int> edges;
    int source;
    int end;
};

class PathLevel
{
public:
    PathLevel(const Context& ctx, int k);

    int level() const { return level_; }
    Index size() const { return static_cast<Index>(paths_.size()); }
    const Path& operator[](Index i) const { return paths_[i]; }
    const std::vector<Path>& paths() const { return paths_; }
    /// Dimension of E^k (x) H.
    Index dimension() const { return dimension_; }
    /// Index of a path given by its edges; -1 if it is not a level-k path.
    Index find(const std::vector<int>& edges) const;

private:
    int level_;
    std::vector<Path> paths_;
    Index dimension_ = 0;
    std::map<std::vector<int>, Index> index_;
};

/// Coordinates of E^t (x) K for a graded space K.
class TensorLayout
{
public:
    TensorLayout(const Context& ctx, int t, const Grading& base);

    int level() const { return level_; }
    Index dimension() const { return dimension_; }
    Index path_count() const { return static_cast<Index>(sources_.size()); }
    int path_source(Index p) const { return sources_[p]; }
    int path_end(Index p) const { return ends_[p]; }
    Index block_offset(Index p) const { return offsets_[p]; }
    /// Base coordinates of vertex v, in base order.
    const std::vector<Index>& fiber(int v) const { return fibers_[v]; }
    Grading grading() const;

private:
    int level_;
    Index dimension_ = 0;
    std::vector<int> sources_;
    std::vector<int> ends_;
    std::vector<Index> offsets_;
    std::vector<std::vector<Index>> fibers_;
    Grading base_;
};

/// Grading of E^t (x) K.
Grading tensor_grading(const Context& ctx, int t, const Grading& base);
Index tensor_dimension(const Context& ctx, int t, const Grading& base);

/// Dense I_{E^t} (x) B for B : K1 -> K2 intertwining the vertex gradings.
/// At t = 0 this is B itself; for t >= 1 each path block is B restricted to
/// the fibers of end(p).
Matrix amplify(const Context& ctx, int t, const Matrix& b, const Grading& dom, const Grading& cod);
/// (I_{E^t} (x) B) x without materializing the amplification.
Matrix amplified_times(const Context& ctx, int t, const Matrix& b, const Grading& dom,
                       const Grading& cod, const Matrix& x);
/// x (I_{E^t} (x) B) without materializing the amplification.
Matrix times_amplified(const Context& ctx, int t, const Matrix& x, const Matrix& b,
                       const Grading& dom, const Grading& cod);

/// Largest |B(i, j)| over coordinates with different vertices.
double grading_violation(const Matrix& b, const Grading& dom, const Grading& cod);

class CommutantElement
{
public:
    CommutantElement() = default;
    CommutantElement(const Context& ctx, std::vector<Matrix> blocks);

    static CommutantElement identity(const Context& ctx);
    static CommutantElement zero(const Context& ctx);

    const std::vector<Matrix>& blocks() const { return blocks_; }
    const Matrix& block(int u) const { return blocks_[u]; }
    Matrix full() const;
    double norm() const;
    CommutantElement adjoint() const;

    friend CommutantElement operator*(const CommutantElement& a, const CommutantElement& b);

private:
    std::vector<Index> sizes_;
    std::vector<Matrix> blocks_;
};

CommutantElement operator*(const CommutantElement& a, const CommutantElement& b);

/// Block-diagonal projection of A after checking the off-vertex blocks.
CommutantElement commutant_embed_check(const Context& ctx, const Matrix& a, const ToleranceConfig& tol = {});

class DualPoint
{
public:
    DualPoint(const Context& ctx, std::vector<Matrix> blocks);
    static DualPoint zero(const Context& ctx);

    const Context& context() const { return ctx_; }
    const std::vector<Matrix>& blocks() const { return blocks_; }
    const Matrix& block(int e) const { return blocks_[e]; }
    /// The column map H -> E (x) H.
    Matrix column_map() const;
    double norm() const;

private:
    Context ctx_;
    std::vector<Matrix> blocks_;
};

struct PointValidation
{
    double norm;
    bool is_interpolation_point;
};

PointValidation validate_point(const Context& ctx, const DualPoint& zeta);

/// eta^(k) : H -> E^k (x) H, one block per level-k path.
struct PointPower
{
    int level;
    std::vector<Matrix> blocks; ///< block(p) = Z[e_k] ... Z[e_1]
    Matrix dense(const Context& ctx) const;
    double norm(const Context& ctx) const;
    Index entries() const;
};

PointPower point_power(const DualPoint& zeta, int k);
/// Powers 0..k, sharing the recursion.
std::vector<PointPower> point_powers(const DualPoint& zeta, int k);
/// Number of stored entries of eta^(k).
double point_power_entries(const Context& ctx, int k);

struct CauchyKernel
{
    int levels;
    std::vector<PointPower> powers;
    double tail_bound;
    Matrix dense(const Context& ctx) const;
};

/// Stacked [I; eta; ...; eta^(K)]. Throws NormError for ||eta|| >= 1 unless
/// `force` is set, in which case the tail bound is +inf.
CauchyKernel cauchy_kernel(const DualPoint& zeta, int k, bool force = false);

/// Block-diagonal N-point map H^(N) -> E (x) H^(N) with entries delta_ii' Z_i[e].
Matrix stacked_points(const Context& ctx, const std::vector<DualPoint>& points);

/// Certified bound for sum_{r > K} ||eta^(r)|| given ||eta^(K)|| and ||eta||.
double geometric_tail(double power_norm_k, double eta_norm, int k);

} // namespace ncpick

#endif // NCPICK_CORRESPONDENCE_HPP
