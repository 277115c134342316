// SPDX-License-Identifier: Apache-2.0
//
// cboia: codebook-based opportunistic interference alignment simulator
// Copyright (C) 2026 The cboia authors
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

#include "cboia/hermitian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace cboia {

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> eig(const CMatrix& a) {
    return Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(a));
}

} // namespace

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

bool is_hermitian_pd(const CMatrix& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) return false;
    const double scale = std::max(1.0, a.norm());
    if ((a - a.adjoint()).norm() > tol * scale) return false;
    return eig(a).eigenvalues().minCoeff() > 0.0;
}

void require_hermitian_pd(const CMatrix& a, const char* what, double tol) {
    if (!is_hermitian_pd(a, tol))
        throw std::domain_error(std::string(what) + " must be Hermitian positive definite");
}

double log2det_hpd(const CMatrix& a) {
    const RVector lambda = eig(a).eigenvalues();
    double acc = 0.0;
    for (double l : lambda) acc += std::log(l);
    return acc / std::numbers::ln2;
}

CMatrix inv_sqrt_hpd(const CMatrix& a) {
    const auto es = eig(a);
    const RVector d = es.eigenvalues().array().rsqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix sqrt_hpd(const CMatrix& a) {
    const auto es = eig(a);
    const RVector d = es.eigenvalues().cwiseMax(0.0).array().sqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const CMatrix& a) { return eig(a).eigenvalues().minCoeff(); }

} // namespace cboia
