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

#ifndef IRSFD_NUMERICS_HPP
#define IRSFD_NUMERICS_HPP

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace irsfd
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Single RNG type used throughout; every sampling routine takes it explicitly.
using Rng = std::mt19937_64;

class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class SingularityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class NumericFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

struct Svd
{
    ComplexMatrix left;   // rows x k
    RealVector singulars; // k = min(rows, cols), descending
    ComplexMatrix right;  // cols x k
};

ComplexMatrix hermitian(const ComplexMatrix &a);

// (A + A^H) / 2
ComplexMatrix symmetrize(const ComplexMatrix &a);

// max |A - A^H|, elementwise
double hermitian_defect(const ComplexMatrix &a);

// Thin SVD, A = left * diag(singulars) * right^H.
Svd svd(const ComplexMatrix &a);

double max_eigenvalue_hermitian(const ComplexMatrix &a);
double min_eigenvalue_hermitian(const ComplexMatrix &a);

ComplexMatrix hadamard(const ComplexMatrix &a, const ComplexMatrix &b);

// Solves A X = B for Hermitian positive-definite A. Throws SingularityError
// when min eig(A) < 1e-12 * max eig(A).
ComplexMatrix solve_hpd(const ComplexMatrix &a, const ComplexMatrix &b);

// Same as solve_hpd, but adds a ridge of 1e-12 * Tr(A) / n before solving
// when the eigenvalue check fails. Only throws if A is not even PSD.
ComplexMatrix solve_hpd_regularized(const ComplexMatrix &a, const ComplexMatrix &b);

// log2 det(A) for Hermitian positive-definite A.
double log2det_hpd(const ComplexMatrix &a);

// Principal square root of a Hermitian PSD matrix. Throws DomainError when
// an eigenvalue is below -1e-10 * max(1, max eig).
ComplexMatrix sqrt_psd(const ComplexMatrix &a);

// Real trace of a product without forming it: Tr(A B).
Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b);

// Entries i.i.d. CN(0, variance): real and imaginary parts N(0, variance / 2).
ComplexMatrix sample_cn(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng);

// Unit-modulus vector with i.i.d. uniform phases.
ComplexVector random_phases(Eigen::Index n, Rng &rng);

std::string dims(const ComplexMatrix &a);

} // namespace irsfd

#endif
