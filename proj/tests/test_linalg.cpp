#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpick/random.hpp"

using namespace ncpick;

namespace
{

Matrix low_rank(Index rows, Index cols, Index rank, Rng& rng)
{
    return random_matrix(rows, rank, rng) * random_matrix(rank, cols, rng);
}

} // namespace

TEST_CASE("op_norm matches the largest eigenvalue of A^*A")
{
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_matrix(5, 3, rng);
        const Matrix gram = a.adjoint() * a;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        CHECK(op_norm(a) == doctest::Approx(std::sqrt(eig.eigenvalues().maxCoeff())).epsilon(1e-12));
    }
    CHECK(op_norm(Matrix(0, 0)) == 0.0);
}

TEST_CASE("pinv satisfies the Moore-Penrose equations on rank-deficient input")
{
    Rng rng(3);
    const Matrix a = low_rank(6, 5, 2, rng);
    const Matrix p = pinv(a);
    CHECK(op_norm((a * p * a - a).eval()) < 1e-10 * op_norm(a));
    CHECK(op_norm((p * a * p - p).eval()) < 1e-10 * op_norm(p));
    CHECK(hermitian_defect((a * p).eval()) < 1e-10);
    CHECK(hermitian_defect((p * a).eval()) < 1e-10);
}

TEST_CASE("range_basis is orthonormal and spans the column space")
{
    Rng rng(5);
    const Matrix a = low_rank(7, 4, 3, rng);
    const Matrix q = range_basis(a);
    REQUIRE(q.cols() == 3);
    CHECK(op_norm((q.adjoint() * q - Matrix::Identity(3, 3)).eval()) < 1e-12);
    CHECK(op_norm((a - q * q.adjoint() * a).eval()) < 1e-10 * op_norm(a));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input")
{
    Matrix a = Matrix::Identity(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(a), NotHermitianError);
}

TEST_CASE("psd_check reports the minimum eigenvalue and a witness")
{
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 2.0, -0.5, 1.0;
    const PsdVerdict v = psd_check(a);
    CHECK_FALSE(v.is_psd);
    CHECK(v.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(std::abs(v.witness(1)) - 1.0) < 1e-12);

    Rng rng(7);
    const Matrix b = low_rank(4, 2, 2, rng);
    CHECK(psd_check((b * b.adjoint()).eval()).is_psd);
}

TEST_CASE("psd_sqrt_factor is the principal root")
{
    Rng rng(9);
    const Matrix b = low_rank(5, 5, 3, rng);
    const Matrix a = b * b.adjoint();
    const Matrix l = psd_sqrt_factor(a);
    CHECK(op_norm((l * l.adjoint() - a).eval()) < 1e-10 * op_norm(a));
    CHECK(hermitian_defect(l) < 1e-10 * op_norm(l));
    CHECK(psd_check(l).is_psd);

    Matrix neg = Matrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(psd_sqrt_factor(neg), IndefiniteError);
}

TEST_CASE("kron agrees with the entrywise definition")
{
    Rng rng(13);
    const Matrix a = random_matrix(2, 3, rng);
    const Matrix b = random_matrix(3, 2, rng);
    const Matrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 3; ++j) {
            for (Index p = 0; p < 3; ++p) {
                for (Index q = 0; q < 2; ++q) {
                    CHECK(k(i * 3 + p, j * 2 + q) == a(i, j) * b(p, q));
                }
            }
        }
    }
}

TEST_CASE("tolerances must be positive")
{
    ToleranceConfig tol;
    tol.psd_tol = 0.0;
    CHECK_THROWS_AS(tol.validate(), DimensionError);
}
