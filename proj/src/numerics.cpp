// SPDX-License-Identifier: Apache-2.0
//
// irsfd: robust joint active/passive beamforming for IRS-assisted MIMO full duplex
// Copyright (C) 2026 The irsfd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsfd/numerics.hpp"

#include <cmath>
#include <numbers>

namespace irsfd
{

namespace
{

void require_square(const ComplexMatrix &a, const char *what)
{
    if (a.rows() != a.cols())
        throw DimensionError(std::string(what) + ": expected a square matrix, got " + dims(a));
}

} // namespace

std::string dims(const ComplexMatrix &a)
{
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

ComplexMatrix hermitian(const ComplexMatrix &a)
{
    return a.adjoint();
}

ComplexMatrix symmetrize(const ComplexMatrix &a)
{
    require_square(a, "symmetrize");
    return 0.5 * (a + a.adjoint());
}

double hermitian_defect(const ComplexMatrix &a)
{
    require_square(a, "hermitian_defect");
    if (a.size() == 0)
        return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Svd svd(const ComplexMatrix &a)
{
    if (a.size() == 0)
        return {ComplexMatrix(a.rows(), 0), RealVector(0), ComplexMatrix(a.cols(), 0)};

    Eigen::BDCSVD<ComplexMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw NumericFailure("svd: iteration did not converge for a " + dims(a) + " matrix");
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

double max_eigenvalue_hermitian(const ComplexMatrix &a)
{
    require_square(a, "max_eigenvalue_hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericFailure("max_eigenvalue_hermitian: eigensolver failed");
    return es.eigenvalues().maxCoeff();
}

double min_eigenvalue_hermitian(const ComplexMatrix &a)
{
    require_square(a, "min_eigenvalue_hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericFailure("min_eigenvalue_hermitian: eigensolver failed");
    return es.eigenvalues().minCoeff();
}

ComplexMatrix hadamard(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("hadamard: " + dims(a) + " vs " + dims(b));
    return a.cwiseProduct(b);
}

ComplexMatrix solve_hpd(const ComplexMatrix &a, const ComplexMatrix &b)
{
    require_square(a, "solve_hpd");
    if (a.rows() != b.rows())
        throw DimensionError("solve_hpd: lhs " + dims(a) + " vs rhs " + dims(b));

    const ComplexMatrix h = symmetrize(a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmax > 0.0) || lmin < 1e-12 * lmax)
        throw SingularityError("solve_hpd: matrix is numerically singular (min eig " + std::to_string(lmin) +
                               ", max eig " + std::to_string(lmax) + ")");
    Eigen::LLT<ComplexMatrix> llt(h);
    if (llt.info() != Eigen::Success)
        throw SingularityError("solve_hpd: Cholesky factorization failed");
    return llt.solve(b);
}

ComplexMatrix solve_hpd_regularized(const ComplexMatrix &a, const ComplexMatrix &b)
{
    require_square(a, "solve_hpd_regularized");
    if (a.rows() != b.rows())
        throw DimensionError("solve_hpd_regularized: lhs " + dims(a) + " vs rhs " + dims(b));

    ComplexMatrix h = symmetrize(a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmax > 0.0) || lmin < 1e-12 * lmax)
    {
        const double n = static_cast<double>(h.rows());
        double ridge = 1e-12 * h.trace().real() / n;
        if (!(ridge > 0.0))
            throw SingularityError("solve_hpd_regularized: matrix has no positive spectrum");
        if (lmin < -1e-9 * std::max(lmax, 1.0))
            throw SingularityError("solve_hpd_regularized: matrix is indefinite");
        // Lift clearly above the ridge floor when tiny negative round-off is present.
        ridge += std::max(0.0, -lmin);
        h.diagonal().array() += ridge;
    }
    Eigen::LLT<ComplexMatrix> llt(h);
    if (llt.info() != Eigen::Success)
        throw SingularityError("solve_hpd_regularized: Cholesky factorization failed");
    return llt.solve(b);
}

double log2det_hpd(const ComplexMatrix &a)
{
    require_square(a, "log2det_hpd");
    Eigen::LLT<ComplexMatrix> llt(symmetrize(a));
    if (llt.info() != Eigen::Success)
        throw SingularityError("log2det_hpd: matrix is not positive definite");
    const auto d = llt.matrixLLT().diagonal();
    double s = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        s += 2.0 * std::log2(d(i).real());
    return s;
}

ComplexMatrix sqrt_psd(const ComplexMatrix &a)
{
    require_square(a, "sqrt_psd");
    if (a.size() == 0)
        return a;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(symmetrize(a));
    if (es.info() != Eigen::Success)
        throw NumericFailure("sqrt_psd: eigensolver failed");
    RealVector ev = es.eigenvalues();
    const double floor = -1e-10 * std::max(1.0, ev.maxCoeff());
    if (ev.minCoeff() < floor)
        throw DomainError("sqrt_psd: matrix is not positive semidefinite");
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b)
{
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw DimensionError("trace_product: " + dims(a) + " times " + dims(b) + " is not square");
    return (a.array() * b.transpose().array()).sum();
}

ComplexMatrix sample_cn(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    ComplexMatrix g(rows, cols);
    // Column-major fill so the draw order is fixed independently of Eigen internals.
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const double re = n(rng);
            const double im = n(rng);
            g(r, c) = Complex(re, im);
        }
    return g;
}

ComplexVector random_phases(Eigen::Index n, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = std::polar(1.0, u(rng));
    return v;
}

} // namespace irsfd
