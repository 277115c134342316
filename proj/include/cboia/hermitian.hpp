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

#ifndef CBOIA_HERMITIAN_HPP
#define CBOIA_HERMITIAN_HPP

#include "cboia/types.hpp"

namespace cboia {

// Matrix functions of Hermitian positive-definite matrices, all evaluated
// through one eigendecomposition so log-determinants stay in log space.

CMatrix hermitian_part(const CMatrix& a);

// Throws std::domain_error unless `a` is square, Hermitian within `tol`
// (relative to its norm) and has a strictly positive smallest eigenvalue.
void require_hermitian_pd(const CMatrix& a, const char* what, double tol = 1e-9);

bool is_hermitian_pd(const CMatrix& a, double tol = 1e-9);

double log2det_hpd(const CMatrix& a);
CMatrix inv_sqrt_hpd(const CMatrix& a);
CMatrix sqrt_hpd(const CMatrix& a);
double min_eigenvalue(const CMatrix& a);

} // namespace cboia

#endif
