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

#ifndef CBOIA_RECEIVERS_HPP
#define CBOIA_RECEIVERS_HPP

#include <vector>

#include "cboia/channel.hpp"
#include "cboia/oia.hpp"
#include "cboia/rng.hpp"
#include "cboia/types.hpp"

namespace cboia {

/// Received-signal pieces at BS i after selection in every cell.
struct EffectiveChannel {
    CMatrix h_c;                // M x S, columns H_i^{[i,j]} w^{[i,j]}
    CMatrix h_tilde;            // S x S, U_i^H h_c
    std::vector<CVector> cross; // H_i^{[k,m]} w^{[k,m]} for k != i
};

EffectiveChannel build_effective_channel(const ChannelSet& channels, const ReferenceBasis& bases,
                                         const std::vector<CellSelection>& selections, int i);

/// F = (h_tilde^{-1})^H. Throws SingularChannelError when the condition
/// number of h_tilde exceeds 1e12.
CMatrix zf_equalizer(const CMatrix& h_tilde);

/// Per-user log2(1 + SNR / (||f_j||^2 + I_j)) with SNR = 1/n0.
std::vector<double> zf_rates(const CMatrix& h_tilde, const std::vector<CVector>& cross, const CMatrix& u_i,
                             double n0);

/// sum (U_i^H v)(U_i^H v)^H + n0 I_S over the cross vectors v.
CMatrix interference_covariance(const std::vector<CVector>& cross, const CMatrix& u_i, double n0);

/// log2 det(I_M + R_c^{-1/2} h_c h_c^H R_c^{-1/2}), R_c = sum v v^H + n0 I_M.
double capacity_ic(const CMatrix& h_c, const std::vector<CVector>& cross, double n0);

/// I(theta) of the Gaussian metric with covariance r_hat when the true
/// effective noise covariance is r.
///
/// With A = r_hat^{-1/2} and A H H^H A = V diag(lambda) V^H,
///   I(theta) = theta/ln2 * (-tr(r_hat^{-1} r) + sum_b D_bb / (1 + theta lambda_b))
///              + sum_b log2(1 + theta lambda_b),
/// where D = V^H A (H H^H + r) A V. One eigendecomposition serves every theta.
class GmiObjective {
public:
    GmiObjective(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat);
    double operator()(double theta) const;

private:
    RVector lambda_;
    RVector d_noise_;
};

double gmi_itheta(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat, double theta);

struct GmiResult {
    double theta_star = 0.0;
    double gmi = 0.0;
};

/// sup over theta >= 0. theta_hi comes from doubling 1 until I falls on two
/// consecutive doublings; then a 64-point grid (0 and log-spaced points on
/// [1e-8 theta_hi, theta_hi]) and golden-section refinement around the best
/// grid point.
GmiResult gmi_sup(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat);

/// gmi_sup with the minimum Euclidean distance metric, r_hat = n0 I_S.
GmiResult gmi_med(const CMatrix& h_tilde, const CMatrix& r, double n0);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Sample mean of log2[Q(y|x)^theta / E_x' Q(y|x')^theta] over x ~ CN(0, I)
/// and z ~ CN(0, r), with the inner expectation in closed form. Uses plain
/// inverses and an LU determinant, independent of GmiObjective.
McEstimate mc_gmi_estimate(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat, double theta,
                           int n_samples, RngStream& rng);

/// Brute force over the S-fold product constellation (at most 4096 points);
/// the lowest lexicographic index (user 0 most significant) wins ties.
CVector med_decode(const CVector& y_tilde, const CMatrix& h_tilde, const std::vector<cplx>& constellation);
CVector ml_decode(const CVector& y, const CMatrix& h_c, const CMatrix& r_c, const std::vector<cplx>& constellation);

/// Eigen-beamforming: right-singular vector of the largest singular value.
CVector max_snr_beamformer(const CMatrix& h_direct);

struct ReceiverEval {
    std::vector<double> zf_rates;
    bool outage = false;
    double capacity = 0.0;
    double gmi = 0.0;
    double theta_star = 0.0;
    CMatrix r_cov;
    double n0 = 0.0;
};

struct ReceiverSet {
    bool zf = true;
    bool capacity = true;
    bool gmi = true;
};

/// All receiver metrics for one cell. A singular ZF channel yields zero ZF
/// rates with `outage` set instead of an exception.
ReceiverEval evaluate_cell(const EffectiveChannel& ec, const CMatrix& u_i, double n0, ReceiverSet which = {});

} // namespace cboia

#endif
