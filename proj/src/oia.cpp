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

#include "cboia/oia.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/SVD>

namespace cboia {

CMatrix stack_interference(const ChannelSet& channels, const ReferenceBasis& bases, int i, int j) {
    const int K = channels.K();
    if (K < 2) throw std::domain_error("stack_interference: needs K >= 2");
    if (i < 0 || i >= K || j < 0 || j >= channels.N()) throw std::out_of_range("stack_interference: bad user index");
    const Eigen::Index S = bases.u.at(0).cols();
    CMatrix g(static_cast<Eigen::Index>(K - 1) * S, channels.L());
    Eigen::Index row = 0;
    for (int k = 0; k < K; ++k) {
        if (k == i) continue;
        g.middleRows(row, S).noalias() = bases.u[static_cast<std::size_t>(k)].adjoint() * channels.h(k, i, j);
        row += S;
    }
    return g;
}

CVector normalize_phase(const CVector& v) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index l = 0; l < v.size(); ++l) {
        const double mag = std::abs(v(l));
        if (mag > best) {
            best = mag;
            arg = l;
        }
    }
    if (best <= 0.0) return v;
    return v * (std::conj(v(arg)) / best);
}

SvdWeight svd_weight(const CMatrix& g) {
    const Eigen::Index L = g.cols();
    if (L < 1) throw std::domain_error("svd_weight: g has no columns");
    SvdWeight out;
    out.sigma = RVector::Zero(L);
    if (g.rows() == 0) {
        out.v_last = CVector::Unit(L, L - 1);
        return out;
    }
    Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.sigma.head(sv.size()) = sv;
    out.v_last = normalize_phase(svd.matrixV().col(L - 1));
    return out;
}

double lif(const CMatrix& g, const CVector& w) {
    if (w.size() != g.cols()) throw std::domain_error("lif: dimension mismatch");
    if (std::abs(w.norm() - 1.0) > 1e-9) throw std::domain_error("lif: weight must be unit norm");
    return (g * w).squaredNorm();
}

double lemma1_bound(double sigma_1, double sigma_L, double d_sq) {
    return sigma_L * sigma_L + d_sq * sigma_1 * sigma_1;
}

double eta_rc(double sigma_1, double sigma_L, double d_sq, double delta_p) {
    if (delta_p < 0.0) throw std::domain_error("eta_rc: delta must be non-negative");
    const double s1 = sigma_1 * sigma_1;
    const double sl = sigma_L * sigma_L;
    if (sl <= (1.0 + delta_p) * d_sq * s1) return (2.0 + delta_p) * d_sq * s1;
    return (1.0 + 1.0 / (1.0 + delta_p)) * sl;
}

double eta_gc(double sigma_1, double sigma_L, double nu_f_val, double delta) {
    if (delta < 0.0) throw std::domain_error("eta_gc: delta must be non-negative");
    return eta_rc(sigma_1, sigma_L, nu_f_val, delta);
}

std::vector<int> select_users(const std::vector<double>& lifs, int S) {
    if (S < 0 || static_cast<std::size_t>(S) > lifs.size())
        throw std::domain_error("select_users: need 0 <= S <= N");
    std::vector<int> idx(lifs.size());
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](int a, int b) {
        return lifs[static_cast<std::size_t>(a)] < lifs[static_cast<std::size_t>(b)] ||
               (lifs[static_cast<std::size_t>(a)] == lifs[static_cast<std::size_t>(b)] && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + S, idx.end(), less);
    idx.resize(static_cast<std::size_t>(S));
    return idx;
}

std::vector<std::vector<UserState>> compute_user_states(const ChannelSet& channels, const ReferenceBasis& bases,
                                                        const Scenario& scenario) {
    scenario.validate_for_alignment();
    std::vector<std::vector<UserState>> states(static_cast<std::size_t>(scenario.K));
    for (int i = 0; i < scenario.K; ++i) {
        auto& cell = states[static_cast<std::size_t>(i)];
        cell.resize(static_cast<std::size_t>(scenario.N));
        for (int j = 0; j < scenario.N; ++j) {
            UserState& u = cell[static_cast<std::size_t>(j)];
            u.cell = i;
            u.user = j;
            u.g = stack_interference(channels, bases, i, j);
            SvdWeight sw = svd_weight(u.g);
            u.sigma = std::move(sw.sigma);
            u.v_last = std::move(sw.v_last);
            u.w = u.v_last;
            u.eta = (u.g * u.w).squaredNorm();
        }
    }
    return states;
}

std::vector<std::vector<UserState>> apply_codebook(std::vector<std::vector<UserState>> states,
                                                   const Codebook* codebook) {
    if (codebook == nullptr) return states;
    for (auto& cell : states) {
        for (auto& u : cell) {
            const QuantizationResult q = quantize(u.v_last, *codebook);
            u.w = q.w;
            u.cw_index = q.index;
            u.d_sq = q.d_sq;
            u.eta = (u.g * u.w).squaredNorm();
        }
    }
    return states;
}

std::vector<CellSelection> select_cells(const std::vector<std::vector<UserState>>& states, int S) {
    std::vector<CellSelection> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& cell = states[i];
        std::vector<double> lifs(cell.size());
        for (std::size_t j = 0; j < cell.size(); ++j) lifs[j] = cell[j].eta;
        CellSelection sel;
        sel.cell = static_cast<int>(i);
        sel.selected = select_users(lifs, S);
        for (int j : sel.selected) {
            const UserState& u = cell[static_cast<std::size_t>(j)];
            sel.weights.push_back(u.w);
            sel.lifs.push_back(u.eta);
            sel.cw_indices.push_back(u.cw_index);
        }
        out.push_back(std::move(sel));
    }
    return out;
}

std::vector<CellSelection> run_cell_pipeline(const ChannelSet& channels, const ReferenceBasis& bases,
                                             const Codebook* codebook, const Scenario& scenario) {
    if (codebook != nullptr && codebook->dim != scenario.L)
        throw std::domain_error("run_cell_pipeline: codebook dimension differs from L");
    return select_cells(apply_codebook(compute_user_states(channels, bases, scenario), codebook), scenario.S);
}

} // namespace cboia
