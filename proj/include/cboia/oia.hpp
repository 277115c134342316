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

#ifndef CBOIA_OIA_HPP
#define CBOIA_OIA_HPP

#include <vector>

#include "cboia/channel.hpp"
#include "cboia/codebook.hpp"
#include "cboia/types.hpp"

namespace cboia {

/// Step 1 outcome for user j of cell i. Cells and users are 0-based;
/// cw_index is the 1-based codeword index, 0 when the SVD weight is applied
/// unquantized.
struct UserState {
    int cell = 0;
    int user = 0;
    CMatrix g;
    RVector sigma;
    CVector v_last;
    CVector w;
    int cw_index = 0;
    double d_sq = 0.0;
    double eta = 0.0;
};

/// Step 2 outcome for one cell. `lifs` is sorted non-decreasing and the other
/// vectors follow the same order.
struct CellSelection {
    int cell = 0;
    std::vector<int> selected;
    std::vector<CVector> weights;
    std::vector<double> lifs;
    std::vector<int> cw_indices;
};

struct SvdWeight {
    CVector v_last;
    RVector sigma;
};

/// Rows U_k^H H_k^{[i,j]} for k != i, ascending k: a (K-1)S x L matrix.
CMatrix stack_interference(const ChannelSet& channels, const ReferenceBasis& bases, int i, int j);

/// Singular values (descending, zero-padded to L) and the right-singular
/// vector of the smallest one. The largest-magnitude entry of v_last is made
/// real positive.
SvdWeight svd_weight(const CMatrix& g);

/// Leakage of interference ||g w||^2 for a unit-norm w.
double lif(const CMatrix& g, const CVector& w);

double lemma1_bound(double sigma_1, double sigma_L, double d_sq);
double eta_gc(double sigma_1, double sigma_L, double nu_f_val, double delta = 0.0);
double eta_rc(double sigma_1, double sigma_L, double d_sq, double delta_p = 0.0);

/// Indices of the S smallest values, ordered by value then by index.
std::vector<int> select_users(const std::vector<double>& lifs, int S);

/// Makes the largest-magnitude entry of v real positive (first one on ties).
CVector normalize_phase(const CVector& v);

/// SVD stage of Step 1 for every user of every cell, indexed [i][j]. The
/// result is independent of the codebook, so one call can feed several
/// schemes. w is v_last and eta its exact LIF.
std::vector<std::vector<UserState>> compute_user_states(const ChannelSet& channels, const ReferenceBasis& bases,
                                                        const Scenario& scenario);

/// Replaces w by quantize(v_last) and refreshes cw_index, d_sq and eta. A
/// null codebook leaves the SVD weights in place.
std::vector<std::vector<UserState>> apply_codebook(std::vector<std::vector<UserState>> states,
                                                   const Codebook* codebook);

std::vector<CellSelection> select_cells(const std::vector<std::vector<UserState>>& states, int S);

/// Steps 1 and 2 for all K cells. codebook == nullptr selects svd_exact mode.
std::vector<CellSelection> run_cell_pipeline(const ChannelSet& channels, const ReferenceBasis& bases,
                                             const Codebook* codebook, const Scenario& scenario);

} // namespace cboia

#endif
