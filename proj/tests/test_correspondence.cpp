#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpick/ncfunc.hpp"
#include "support/random_problems.hpp"

using namespace ncpick;
using namespace ncpick::testing;

namespace
{

/// Level-k path counts by vertex pair, from powers of the edge-multiplicity matrix.
Eigen::MatrixXd path_counts(const Context& ctx, int k)
{
    const int s = ctx.vertex_count();
    Eigen::MatrixXd g(s, s);
    for (int u = 0; u < s; ++u) {
        for (int v = 0; v < s; ++v) {
            g(u, v) = ctx.edge_multiplicity()[u][v];
        }
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(s, s);
    for (int i = 0; i < k; ++i) {
        out = out * g;
    }
    return out;
}

} // namespace

TEST_CASE("edges are sorted by source, target and slot")
{
    const Context ctx = quiver_two();
    REQUIRE(ctx.edge_count() == 4);
    CHECK(ctx.edge(0).source == 0);
    CHECK(ctx.edge(0).target == 0);
    CHECK(ctx.edge(1).target == 1);
    CHECK(ctx.edge(2).source == 1);
    CHECK(ctx.edge(2).slot == 0);
    CHECK(ctx.edge(3).slot == 1);
    CHECK(ctx.m_tot() == 3);
    // E (x) H carries H_target(e) for each edge.
    CHECK(ctx.dim_EH() == 1 + 2 + 1 + 1);
}

TEST_CASE("invalid correspondences are rejected")
{
    CHECK_THROWS_AS(Context(2, {1, 1}, {{0, 0}, {0, 0}}), DegenerateCorrespondence);
    CHECK_THROWS_AS(Context(2, {1}, {{1, 0}, {0, 1}}), DimensionError);
    CHECK_THROWS_AS(Context(1, {0}, {{1}}), DimensionError);
}

TEST_CASE("path levels match powers of the edge-multiplicity matrix")
{
    const Context ctx = quiver_two();
    const Grading h = ctx.h_grading();
    for (int k = 0; k <= 5; ++k) {
        const Eigen::MatrixXd counts = path_counts(ctx, k);
        const PathLevel level(ctx, k);
        CHECK(static_cast<double>(level.size()) == doctest::Approx(counts.sum()));
        // Each (p, c) coordinate has c in H_end(p).
        double dim = 0.0;
        for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) {
                dim += counts(u, v) * ctx.multiplicity(v);
            }
        }
        CHECK(static_cast<double>(tensor_dimension(ctx, k, h)) == doctest::Approx(dim));
        CHECK(level_dimension(ctx, k, h) == doctest::Approx(dim));
        for (Index p = 0; k > 0 && p + 1 < level.size(); ++p) {
            CHECK(level[p].edges < level[p + 1].edges);
        }
        for (Index p = 0; p < level.size(); ++p) {
            CHECK(level.find(level[p].edges) == (k == 0 ? -1 : p));
        }
    }
}

TEST_CASE("the grading of E^t (x) H records the source vertex of each path")
{
    const Context ctx = quiver_two();
    const TensorLayout layout(ctx, 2, ctx.h_grading());
    const Grading g = layout.grading();
    for (Index p = 0; p < layout.path_count(); ++p) {
        const Index size = ctx.multiplicity(layout.path_end(p));
        for (Index c = 0; c < size; ++c) {
            CHECK(g[layout.block_offset(p) + c] == layout.path_source(p));
        }
    }
}

TEST_CASE("point powers satisfy the amplification recursion")
{
    Rng rng(21);
    for (const Context& ctx : {free_context(2, 2), quiver_two(), free_context(3, 1)}) {
        const DualPoint z = random_point(ctx, 0.8, rng);
        const Grading h = ctx.h_grading();
        const Grading eh = tensor_grading(ctx, 1, h);
        const auto powers = point_powers(z, 4);
        CHECK(op_norm((powers[0].dense(ctx) - Matrix::Identity(ctx.m_tot(), ctx.m_tot())).eval()) == 0.0);
        CHECK(op_norm((powers[1].dense(ctx) - z.column_map()).eval()) == 0.0);
        for (int k = 2; k <= 4; ++k) {
            const Matrix oracle = amplify(ctx, k - 1, z.column_map(), h, eh) * powers[k - 1].dense(ctx);
            CHECK(op_norm((powers[k].dense(ctx) - oracle).eval()) < 1e-14);
            CHECK(powers[k].norm(ctx) == doctest::Approx(op_norm(powers[k].dense(ctx))).epsilon(1e-12));
            CHECK(static_cast<double>(powers[k].entries()) == doctest::Approx(point_power_entries(ctx, k)));
        }
    }
}

TEST_CASE("scalar point powers are plain powers")
{
    const Context ctx = free_context(1, 1);
    const Scalar z(0.3, -0.4);
    const DualPoint p(ctx, {Matrix::Constant(1, 1, z)});
    const auto powers = point_powers(p, 6);
    for (int k = 0; k <= 6; ++k) {
        CHECK(std::abs(powers[k].blocks[0](0, 0) - std::pow(z, k)) < 1e-15);
    }
}

TEST_CASE("Cauchy kernel tail bound dominates the remaining power norms")
{
    Rng rng(4);
    const Context ctx = quiver_two();
    const DualPoint z = random_point(ctx, 0.6, rng);
    const int k = 3;
    const CauchyKernel c = cauchy_kernel(z, k);
    // Paths double per level here, so stay at a modest depth.
    const auto powers = point_powers(z, 14);
    double rest = 0.0;
    for (int r = k + 1; r <= 14; ++r) {
        rest += powers[r].norm(ctx);
    }
    CHECK(rest <= c.tail_bound);
    CHECK(geometric_tail(powers[k].norm(ctx), z.norm(), k) >= rest);
    CHECK(c.dense(ctx).rows() == tensor_dimension(ctx, 0, ctx.h_grading()) + tensor_dimension(ctx, 1, ctx.h_grading()) +
                                    tensor_dimension(ctx, 2, ctx.h_grading()) +
                                    tensor_dimension(ctx, 3, ctx.h_grading()));
    CHECK_THROWS_AS(cauchy_kernel(random_point(ctx, 1.2, rng), 2), NormError);
}

TEST_CASE("amplified products agree with the dense amplification")
{
    Rng rng(8);
    const Context ctx = quiver_two();
    const Grading h = ctx.h_grading();
    const CommutantElement a = random_commutant(ctx, 1.0, rng);
    for (int t = 0; t <= 3; ++t) {
        const Matrix amp = amplify(ctx, t, a.full(), h, h);
        const Matrix x = random_matrix(amp.cols(), 2, rng);
        const Matrix y = random_matrix(2, amp.rows(), rng);
        CHECK(op_norm((amplified_times(ctx, t, a.full(), h, h, x) - amp * x).eval()) < 1e-13);
        CHECK(op_norm((times_amplified(ctx, t, y, a.full(), h, h) - y * amp).eval()) < 1e-13);
        CHECK(grading_violation(amp, tensor_grading(ctx, t, h), tensor_grading(ctx, t, h)) == 0.0);
    }
}

TEST_CASE("commutant elements multiply blockwise and embed back")
{
    Rng rng(10);
    const Context ctx = quiver_two();
    const CommutantElement a = random_commutant(ctx, 1.0, rng);
    const CommutantElement b = random_commutant(ctx, 2.0, rng);
    CHECK(op_norm(((a * b).full() - a.full() * b.full()).eval()) < 1e-14);
    CHECK(op_norm((a.adjoint().full() - a.full().adjoint()).eval()) == 0.0);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op_norm((commutant_embed_check(ctx, a.full()).full() - a.full()).eval()) == 0.0);
    Matrix off = a.full();
    off(0, 1) = 0.5;
    CHECK_THROWS_AS(commutant_embed_check(ctx, off), NotInCommutant);
}

TEST_CASE("points validate their norm and block shapes")
{
    const Context ctx = free_context(2, 1);
    CHECK_THROWS_AS(DualPoint(ctx, {Matrix::Zero(1, 1)}), DimensionError);
    const DualPoint z(ctx, {Matrix::Constant(1, 1, 0.6), Matrix::Constant(1, 1, 0.8)});
    // Column map stacks the two scalars, so the norm is the Euclidean length.
    CHECK(z.norm() == doctest::Approx(1.0));
    CHECK_FALSE(validate_point(ctx, z).is_interpolation_point);
    const DualPoint w(ctx, {Matrix::Constant(1, 1, 0.3), Matrix::Constant(1, 1, 0.4)});
    CHECK(validate_point(ctx, w).is_interpolation_point);
    CHECK(validate_point(ctx, w).norm == doctest::Approx(0.5));
}

TEST_CASE("stacked points are block diagonal over the points")
{
    Rng rng(12);
    const Context ctx = quiver_two();
    const std::vector<DualPoint> pts = {random_point(ctx, 0.5, rng), random_point(ctx, 0.7, rng)};
    const Matrix s = stacked_points(ctx, pts);
    CHECK(s.rows() == 2 * ctx.dim_EH());
    CHECK(s.cols() == 2 * ctx.m_tot());
    CHECK(grading_violation(s, ctx.h_grading(2), tensor_grading(ctx, 1, ctx.h_grading(2))) == 0.0);
    // Removing the diagonal point blocks leaves exactly the stacked column norms.
    CHECK(s.squaredNorm() == doctest::Approx(pts[0].column_map().squaredNorm() + pts[1].column_map().squaredNorm()));
}
