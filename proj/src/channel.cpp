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

#include "cboia/channel.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

namespace cboia {

namespace {
std::mutex g_warn_mutex;
WarningSink g_warn_sink;
} // namespace

void set_warning_sink(WarningSink sink) {
    std::lock_guard lock(g_warn_mutex);
    g_warn_sink = std::move(sink);
}

void warn(const std::string& message) {
    std::lock_guard lock(g_warn_mutex);
    if (g_warn_sink)
        g_warn_sink(message);
    else
        std::cerr << "warning: " << message << '\n';
}

std::string to_string(CodebookKind kind) {
    switch (kind) {
    case CodebookKind::random: return "random";
    case CodebookKind::grassmannian: return "grassmannian";
    case CodebookKind::svd_exact: return "svd_exact";
    }
    return "unknown";
}

CodebookKind codebook_kind_from_string(const std::string& text) {
    if (text == "random") return CodebookKind::random;
    if (text == "grassmannian") return CodebookKind::grassmannian;
    if (text == "svd_exact") return CodebookKind::svd_exact;
    throw std::invalid_argument("unknown codebook kind '" + text + "'");
}

void Scenario::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
    if (K < 1) fail("K must be >= 1");
    if (M < 1) fail("M must be >= 1");
    if (L < 1) fail("L must be >= 1");
    if (S < 1 || S > M) fail("S must satisfy 1 <= S <= M");
    if (N < S) fail("N must be >= S");
    if (n_f < 0 || n_f > 24) fail("n_f must be in [0, 24]");
    if (trials < 0) fail("trials must be >= 0");
    for (double s : snr_db)
        if (!std::isfinite(s)) fail("snr_db entries must be finite");
}

void Scenario::validate_for_alignment() const {
    validate();
    if (K < 2) throw std::invalid_argument("scenario: the alignment pipeline needs K >= 2");
}

std::vector<std::string> Scenario::warnings() const {
    std::vector<std::string> out;
    if (K >= 2 && stacked_rows() < L) {
        std::ostringstream os;
        os << "(K-1)S = " << stacked_rows() << " < L = " << L
           << ": the stacked interference matrix has a null space, so perfect alignment is attainable";
        out.push_back(os.str());
    }
    return out;
}

ChannelSet::ChannelSet(int K, int N, int M, int L)
    : K_(K), N_(N), M_(M), L_(L),
      h_(static_cast<std::size_t>(K) * K * N, CMatrix::Zero(M, L)) {}

ChannelSet draw_channel_set(const Scenario& scenario, const RngStream& trial_stream) {
    ChannelSet set(scenario.K, scenario.N, scenario.M, scenario.L);
    const double variance = 1.0 / scenario.L;
    for (int k = 0; k < scenario.K; ++k)
        for (int i = 0; i < scenario.K; ++i)
            for (int j = 0; j < scenario.N; ++j) {
                RngStream rng = trial_stream.derive(
                    Purpose::channel,
                    {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
                set.h(k, i, j) = complex_gaussian(scenario.M, scenario.L, variance, rng);
            }
    return set;
}

CMatrix haar_unitary(int n, RngStream& rng) {
    const CMatrix a = complex_gaussian(n, n, 1.0, rng);
    Eigen::HouseholderQR<CMatrix> qr(a);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix& r = qr.matrixQR();
    for (int c = 0; c < n; ++c) {
        const cplx d = r(c, c);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(c) *= d / mag;
    }
    return q;
}

CVector isotropic_unit_vector(int n, RngStream& rng) {
    CVector v = complex_gaussian(n, 1, 1.0, rng);
    return v / v.norm();
}

ReferenceBasis draw_reference_bases(const Scenario& scenario, const RngStream& trial_stream) {
    ReferenceBasis bases;
    const int m = scenario.M;
    const int s = scenario.S;
    for (int k = 0; k < scenario.K; ++k) {
        RngStream rng = trial_stream.derive(Purpose::bases, {static_cast<std::uint64_t>(k)});
        const CMatrix frame = haar_unitary(m, rng);
        bases.q.push_back(frame.leftCols(m - s));
        bases.u.push_back(frame.rightCols(s));
    }
    return bases;
}

} // namespace cboia
