// Dense numerical substrate: Hermitian eigendecomposition, SVD, pseudo-inverse,
// PSD tests and square roots. Everything here is header-only and templated on
// the Eigen expression type so it composes with block and product expressions.
#ifndef NCPICK_LINALG_HPP
#define NCPICK_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ncpick/errors.hpp"

namespace ncpick
{

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// One tolerance policy shared by every module.
struct ToleranceConfig
{
    double psd_tol = 1e-9;          ///< relative to 1 + ||A||
    double rank_tol_factor = 1e-12; ///< times max dimension times sigma_1
    double residual_tol = 1e-8;
    double truncation_tol = 1e-10;

    void validate() const
    {
        if (!(psd_tol > 0) || !(rank_tol_factor > 0) || !(residual_tol > 0) ||
            !(truncation_tol > 0)) {
            throw DimensionError("tolerances must be strictly positive");
        }
    }
};

struct PsdVerdict
{
    bool is_psd = true;
    double min_eigenvalue = 0.0;
    double threshold = 0.0; ///< is_psd <=> min_eigenvalue >= -threshold
    Vector witness;         ///< unit eigenvector of min_eigenvalue when negative
};

template <typename Scalar_>
struct EigenDecomposition
{
    Eigen::Matrix<typename Eigen::NumTraits<Scalar_>::Real, Eigen::Dynamic, 1> values; // ascending
    Eigen::Matrix<Scalar_, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

template <typename Scalar_>
struct SvdResult
{
    Eigen::Matrix<typename Eigen::NumTraits<Scalar_>::Real, Eigen::Dynamic, 1> values; // descending
    Eigen::Matrix<Scalar_, Eigen::Dynamic, Eigen::Dynamic> u;
    Eigen::Matrix<Scalar_, Eigen::Dynamic, Eigen::Dynamic> v;
};

template <typename Derived>
using PlainOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Full SVD, A = U diag(s) V^*.
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a)
{
    SvdResult<typename Derived::Scalar> out;
    if (a.size() == 0) {
        out.u = PlainOf<Derived>::Identity(a.rows(), a.rows());
        out.v = PlainOf<Derived>::Identity(a.cols(), a.cols());
        out.values.resize(0);
        return out;
    }
    Eigen::BDCSVD<PlainOf<Derived>> solver(a.eval(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.values = solver.singularValues();
    out.u = solver.matrixU();
    out.v = solver.matrixV();
    return out;
}

/// Largest singular value; zero for empty matrices.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a)
{
    if (a.size() == 0) {
        return 0.0;
    }
    if (a.cols() == 1 || a.rows() == 1) {
        return a.norm();
    }
    Eigen::BDCSVD<PlainOf<Derived>> solver(a.eval());
    return solver.singularValues()(0);
}

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a)
{
    return op_norm((a - a.adjoint()).eval());
}

/// Eigendecomposition of a Hermitian matrix (symmetrized before solving),
/// eigenvalues ascending.
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& a,
                                                           const ToleranceConfig& tol = {})
{
    if (a.rows() != a.cols()) {
        throw DimensionError("hermitian_eig: matrix is not square");
    }
    const double scale = 1.0 + op_norm(a);
    const double defect = hermitian_defect(a);
    if (defect > tol.residual_tol * scale) {
        throw NotHermitianError(defect);
    }
    PlainOf<Derived> sym = (a + a.adjoint()) / 2.0;
    EigenDecomposition<typename Derived::Scalar> out;
    if (sym.size() == 0) {
        return out;
    }
    Eigen::SelfAdjointEigenSolver<PlainOf<Derived>> solver(sym);
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    return out;
}

/// Numerical rank threshold: rank_tol_factor * max(rows, cols) * sigma_1.
template <typename RealVec>
double rank_threshold(const RealVec& singular_values, Index rows, Index cols,
                      const ToleranceConfig& tol)
{
    if (singular_values.size() == 0) {
        return 0.0;
    }
    return tol.rank_tol_factor * static_cast<double>(std::max(rows, cols)) * singular_values(0);
}

/// Moore-Penrose pseudo-inverse with the shared rank cutoff.
template <typename Derived>
PlainOf<Derived> pinv(const Eigen::MatrixBase<Derived>& a, const ToleranceConfig& tol = {})
{
    PlainOf<Derived> out = PlainOf<Derived>::Zero(a.cols(), a.rows());
    if (a.size() == 0) {
        return out;
    }
    const auto f = svd(a);
    const double cut = rank_threshold(f.values, a.rows(), a.cols(), tol);
    for (Index k = 0; k < f.values.size(); ++k) {
        if (f.values(k) > cut) {
            out.noalias() += (f.v.col(k) / f.values(k)) * f.u.col(k).adjoint();
        }
    }
    return out;
}

/// Orthonormal basis of the numerical range of A (columns).
template <typename Derived>
PlainOf<Derived> range_basis(const Eigen::MatrixBase<Derived>& a, const ToleranceConfig& tol = {})
{
    if (a.size() == 0) {
        return PlainOf<Derived>::Zero(a.rows(), 0);
    }
    const auto f = svd(a);
    const double cut = rank_threshold(f.values, a.rows(), a.cols(), tol);
    Index rank = 0;
    while (rank < f.values.size() && f.values(rank) > cut) {
        ++rank;
    }
    return f.u.leftCols(rank);
}

template <typename Derived>
PsdVerdict psd_check(const Eigen::MatrixBase<Derived>& a, const ToleranceConfig& tol = {})
{
    PsdVerdict verdict;
    if (a.rows() == 0) {
        return verdict;
    }
    const auto eig = hermitian_eig(a, tol);
    const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    verdict.min_eigenvalue = eig.values(0);
    verdict.threshold = tol.psd_tol * (1.0 + norm);
    verdict.is_psd = verdict.min_eigenvalue >= -verdict.threshold;
    if (verdict.min_eigenvalue < 0) {
        verdict.witness = eig.vectors.col(0).template cast<Scalar>();
    }
    return verdict;
}

/// Principal square root L = L^* >= 0 with L L^* = A. Eigenvalues inside the
/// PSD tolerance band are clamped to zero; anything more negative is an error.
template <typename Derived>
PlainOf<Derived> psd_sqrt_factor(const Eigen::MatrixBase<Derived>& a, const ToleranceConfig& tol = {})
{
    const auto verdict = psd_check(a, tol);
    if (!verdict.is_psd) {
        throw IndefiniteError(verdict.min_eigenvalue);
    }
    if (a.rows() == 0) {
        return PlainOf<Derived>(0, 0);
    }
    const auto eig = hermitian_eig(a, tol);
    auto roots = eig.values.array().max(0.0).sqrt().matrix().eval();
    PlainOf<Derived> l = eig.vectors * roots.template cast<typename Derived::Scalar>().asDiagonal() *
                         eig.vectors.adjoint();
    return (l + l.adjoint()) / 2.0;
}

/// Kronecker product A (x) B.
template <typename DA, typename DB>
PlainOf<DA> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b)
{
    PlainOf<DA> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace ncpick

#endif // NCPICK_LINALG_HPP
