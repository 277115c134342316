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

#ifndef CBOIA_CHANNEL_HPP
#define CBOIA_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cboia/rng.hpp"
#include "cboia/types.hpp"

namespace cboia {

/// Immutable experiment parameters for the K-cell uplink.
///
/// SNR is 1/N0 with unit transmit power per selected user. `n_f` is the
/// number of feedforward bits, so a codebook holds 2^n_f codewords.
struct Scenario {
    int K = 2;
    int M = 3;
    int N = 20;
    int L = 2;
    int S = 2;
    std::vector<double> snr_db{};
    CodebookKind codebook_kind = CodebookKind::svd_exact;
    int n_f = 6;
    int trials = 100;
    std::uint64_t seed = 42;

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;
    /// Same checks plus K >= 2, which the alignment pipeline needs.
    void validate_for_alignment() const;
    /// Non-fatal remarks, e.g. (K-1)S < L makes perfect alignment trivial.
    std::vector<std::string> warnings() const;

    int codebook_size() const { return 1 << n_f; }
    int stacked_rows() const { return (K - 1) * S; }
};

/// Every channel matrix H_k^{[i,j]} (M x L) of one trial: the link from
/// user j of cell i to base station k.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int K, int N, int M, int L);

    const CMatrix& h(int k, int i, int j) const { return h_[index(k, i, j)]; }
    CMatrix& h(int k, int i, int j) { return h_[index(k, i, j)]; }

    int K() const { return K_; }
    int N() const { return N_; }
    int M() const { return M_; }
    int L() const { return L_; }
    std::size_t size() const { return h_.size(); }

private:
    std::size_t index(int k, int i, int j) const {
        return (static_cast<std::size_t>(k) * K_ + i) * N_ + j;
    }

    int K_ = 0, N_ = 0, M_ = 0, L_ = 0;
    std::vector<CMatrix> h_;
};

/// Per-cell interference basis Q_k (M x (M-S)) and signal basis U_k (M x S).
struct ReferenceBasis {
    std::vector<CMatrix> q;
    std::vector<CMatrix> u;
};

/// Entries i.i.d. CN(0, 1/L). Each matrix comes from its own child stream
/// keyed by (k, i, j), so user j's channels do not depend on N.
ChannelSet draw_channel_set(const Scenario& scenario, const RngStream& trial_stream);

/// Haar-distributed frames: Q_k uniform over M x (M-S) orthonormal frames,
/// U_k its orthogonal complement. For S = M, Q_k has zero columns.
ReferenceBasis draw_reference_bases(const Scenario& scenario, const RngStream& trial_stream);

/// Haar unitary of size n: QR of a complex Gaussian matrix with the phases of
/// R's diagonal moved into Q.
CMatrix haar_unitary(int n, RngStream& rng);

/// Uniformly distributed unit vector in C^n.
CVector isotropic_unit_vector(int n, RngStream& rng);

} // namespace cboia

#endif
