#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpick/cpcheck.hpp"
#include "support/random_problems.hpp"

using namespace ncpick;
using namespace ncpick::testing;

TEST_CASE("Choi matrix of the identity map is the rank-one matrix of units")
{
    const Matrix c = choi_matrix([](const Matrix& x) { return x; }, 2);
    Matrix oracle = Matrix::Zero(4, 4);
    for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
            oracle(p * 2 + p, q * 2 + q) = 1.0;
        }
    }
    CHECK(op_norm((c - oracle).eval()) == 0.0);
    CHECK(cp_verdict([](const Matrix& x) { return x; }, 2).choi.is_psd);
}

TEST_CASE("transpose is positive but not completely positive")
{
    const CpVerdict v = cp_verdict([](const Matrix& x) { return Matrix(x.transpose()); }, 2);
    CHECK_FALSE(v.choi.is_psd);
    CHECK(v.choi.min_eigenvalue == doctest::Approx(-1.0));
    // The witness reshapes the eigenvector: V(p, i) = v[p * dim + i].
    for (int p = 0; p < 2; ++p) {
        for (int i = 0; i < 2; ++i) {
            CHECK(v.witness(p, i) == v.choi.witness(p * 2 + i));
        }
    }
}

TEST_CASE("Kraus maps are completely positive")
{
    Rng rng(61);
    const Matrix k1 = random_matrix(3, 3, rng);
    const Matrix k2 = random_matrix(3, 3, rng);
    const LinearMap phi = [&](const Matrix& x) { return Matrix(k1 * x * k1.adjoint() + k2 * x * k2.adjoint()); };
    CHECK(cp_verdict(phi, 3).choi.is_psd);
}

TEST_CASE("worked example: Pick matrix, interpolation and Choi minor")
{
    for (double r : {0.25, 0.5, 0.9}) {
        for (double eps : {0.1, 0.5, 1.0}) {
            const ExampleReport rep = example_cj_vs_ms(r, eps);
            Matrix pick = Matrix::Zero(2, 2);
            pick(0, 0) = 1.0 - eps * eps;
            pick(1, 1) = 1.0 + r * r * (1.0 - eps * eps);
            CHECK(op_norm((rep.cj_pick - pick).eval()) < 1e-12);
            CHECK(rep.cj_verdict.is_psd);
            CHECK(rep.interpolation_residual <= 1e-8);
            CHECK(rep.minor_det == doctest::Approx(-eps * eps).epsilon(1e-12));
            CHECK_FALSE(rep.ms_verdict.choi.is_psd);
            Matrix ms_id = Matrix::Zero(2, 2);
            ms_id(0, 0) = 1.0 - eps * eps;
            ms_id(1, 1) = 1.0 + r * r;
            CHECK(op_norm((rep.ms_at_identity - ms_id).eval()) < 1e-12);
            CHECK(rep.ms_identity_verdict.is_psd);
        }
    }
    CHECK_THROWS_AS(example_problem(1.0, 0.5), DimensionError);
    CHECK_THROWS_AS(example_problem(0.5, 0.0), DimensionError);
}

TEST_CASE("zero point with a contractive scalar target: the map is completely positive")
{
    for (double lambda : {0.0, 0.5, 1.0}) {
        const ProblemData p = scalar_problem({0.0}, {Scalar(lambda * 0.6, lambda * 0.8)});
        CHECK(cp_verdict(ms_map(p), 1).choi.is_psd);
        CHECK(feasibility(pick_matrix(p)).is_psd);
    }
}

TEST_CASE("the MS map only sees the vertex-diagonal part of its argument")
{
    Rng rng(62);
    const ProblemData p = random_feasible_problem(quiver_two(), 1, 0.5, 0.9, 1, rng);
    Matrix b = Matrix::Zero(3, 3);
    b(0, 1) = 1.0;
    b(2, 0) = 1.0;
    CHECK(op_norm(ms_map_apply(p, b)) == 0.0);
    CHECK_THROWS_AS(ms_map_apply(p, Matrix::Zero(2, 2)), DimensionError);
}

TEST_CASE("the example map has the finite nilpotent expansion")
{
    Rng rng(63);
    const double r = 0.5;
    const double eps = 0.5;
    const ProblemData p = example_problem(r, eps);
    const Matrix z = p.points[0].block(0);
    const Matrix l = p.targets[0].full();
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix b = random_matrix(2, 2, rng);
        const Matrix oracle =
            b + z.adjoint() * b * z - l.adjoint() * b * l - l.adjoint() * z.adjoint() * b * z * l;
        CHECK(op_norm((ms_map_apply(p, b) - oracle).eval()) < 1e-14);
    }
}

TEST_CASE("the map at the all-identity block matrix matches a fixed-point recomputation")
{
    Rng rng(64);
    const ProblemData p = random_feasible_problem(quiver_two(), 2, 0.6, 0.9, 1, rng);
    const Index mt = p.ctx.m_tot();
    Matrix ones(2 * mt, 2 * mt);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            ones.block(i * mt, j * mt, mt, mt) = Matrix::Identity(mt, mt);
        }
    }
    const Matrix image = ms_map_apply(p, ones);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            // S = I + theta(S) by iteration, then S - Lambda_i S Lambda_j^*.
            std::vector<Matrix> s;
            for (int u = 0; u < 2; ++u) {
                s.push_back(Matrix::Identity(p.ctx.multiplicity(u), p.ctx.multiplicity(u)));
            }
            for (int it = 0; it < 300; ++it) {
                std::vector<Matrix> next;
                for (int u = 0; u < 2; ++u) {
                    next.push_back(Matrix::Identity(p.ctx.multiplicity(u), p.ctx.multiplicity(u)));
                }
                for (int e = 0; e < p.ctx.edge_count(); ++e) {
                    const Edge& ed = p.ctx.edge(e);
                    next[ed.source] += p.points[i].block(e).adjoint() * s[ed.target] * p.points[j].block(e);
                }
                s = std::move(next);
            }
            const Matrix sf = CommutantElement(p.ctx, s).full();
            const Matrix oracle = sf - p.targets[i].full() * sf * p.targets[j].full().adjoint();
            CHECK(op_norm((image.block(i * mt, j * mt, mt, mt) - oracle).eval()) <= 1e-8);
        }
    }
}

TEST_CASE("Choi matrices are linear in the map; the zero map gives zero")
{
    Rng rng(65);
    const Matrix v = random_matrix(3, 3, rng);
    const Matrix w = random_matrix(3, 3, rng);
    const LinearMap phi = [&](const Matrix& x) { return Matrix(v * x * w); };
    const LinearMap psi = [&](const Matrix& x) { return Matrix(x.transpose() * v); };
    const Scalar alpha(0.3, -1.2);
    const LinearMap combo = [&](const Matrix& x) { return Matrix(alpha * phi(x) + psi(x)); };
    const Matrix lhs = choi_matrix(combo, 3);
    const Matrix rhs = alpha * choi_matrix(phi, 3) + choi_matrix(psi, 3);
    CHECK(op_norm((lhs - rhs).eval()) <= 1e-12);
    CHECK(choi_matrix([](const Matrix& x) { return Matrix(Matrix::Zero(x.rows(), x.cols())); }, 2).norm() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(choi_matrix([](const Matrix& x) { return x; }, 2));
    CHECK(eig.eigenvalues()(3) == doctest::Approx(2.0));
    CHECK(std::abs(eig.eigenvalues()(0)) < 1e-14);
}

TEST_CASE("completely positive maps are positive at the identity")
{
    Rng rng(66);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Matrix> kraus;
        for (int k = 0; k < 3; ++k) {
            kraus.push_back(random_matrix(4, 4, rng));
        }
        const LinearMap phi = [&](const Matrix& x) {
            Matrix out = Matrix::Zero(4, 4);
            for (const Matrix& v : kraus) {
                out += v.adjoint() * x * v;
            }
            return out;
        };
        REQUIRE(cp_verdict(phi, 4).choi.is_psd);
        CHECK(psd_check(phi(Matrix::Identity(4, 4))).is_psd);
    }
}
