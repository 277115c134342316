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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cboia/channel.hpp"

using namespace cboia;

namespace {

Scenario small_scenario() {
    Scenario s;
    s.K = 2;
    s.M = 3;
    s.N = 4;
    s.L = 2;
    s.S = 2;
    return s;
}

// Kolmogorov-Smirnov distance of samples from Uniform(0, 1).
double ks_uniform(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        d = std::max({d, std::abs(x[i] - i / n), std::abs(x[i] - (i + 1) / n)});
    return d;
}

} // namespace

TEST_CASE("channel: set dimensions") {
    const Scenario s = small_scenario();
    const ChannelSet set = draw_channel_set(s, RngStream::from_path(1, {0}));
    CHECK(set.size() == 16);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) {
                CHECK(set.h(k, i, j).rows() == 3);
                CHECK(set.h(k, i, j).cols() == 2);
            }
}

TEST_CASE("channel: entries have second moment 1/L") {
    Scenario s = small_scenario();
    s.N = 6;
    double sum = 0.0;
    long count = 0;
    for (int t = 0; count < 1000000; ++t) {
        const ChannelSet set = draw_channel_set(s, RngStream::from_path(5, {static_cast<std::uint64_t>(t)}));
        for (int k = 0; k < s.K; ++k)
            for (int i = 0; i < s.K; ++i)
                for (int j = 0; j < s.N; ++j) {
                    sum += set.h(k, i, j).cwiseAbs2().sum();
                    count += set.h(k, i, j).size();
                }
    }
    CHECK(std::abs(sum / count - 0.5) < 0.01);
}

TEST_CASE("channel: determinism and per-user keying") {
    Scenario s = small_scenario();
    const RngStream stream = RngStream::from_path(9, {3});
    const ChannelSet a = draw_channel_set(s, stream);
    const ChannelSet b = draw_channel_set(s, stream);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) CHECK((a.h(k, i, j) - b.h(k, i, j)).norm() == 0.0);
    // A larger N keeps the channels of the first users.
    s.N = 10;
    const ChannelSet c = draw_channel_set(s, stream);
    CHECK((a.h(1, 0, 3) - c.h(1, 0, 3)).norm() == 0.0);
}

TEST_CASE("channel: reference bases are orthonormal complements") {
    const Scenario s = small_scenario();
    const ReferenceBasis b = draw_reference_bases(s, RngStream::from_path(2, {0}));
    REQUIRE(b.q.size() == 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(b.q[k].rows() == 3);
        CHECK(b.q[k].cols() == 1);
        CHECK(b.u[k].cols() == 2);
        CHECK((b.u[k].adjoint() * b.q[k]).norm() <= 1e-10);
        CHECK((b.u[k].adjoint() * b.u[k] - CMatrix::Identity(2, 2)).norm() <= 1e-10);
        CHECK((b.q[k].adjoint() * b.q[k] - CMatrix::Identity(1, 1)).norm() <= 1e-10);
    }
}

TEST_CASE("channel: S = M leaves an empty Q and a unitary U") {
    Scenario s = small_scenario();
    s.M = 2;
    s.S = 2;
    const ReferenceBasis b = draw_reference_bases(s, RngStream::from_path(2, {1}));
    CHECK(b.q[0].cols() == 0);
    CHECK((b.u[0].adjoint() * b.u[0] - CMatrix::Identity(2, 2)).norm() <= 1e-10);
}

TEST_CASE("channel: Haar frame projections follow Beta(1,1)") {
    // For M = 2 a Haar-distributed unit vector has |q^H e1|^2 ~ Uniform(0,1).
    Scenario s = small_scenario();
    s.M = 2;
    s.S = 1;
    s.K = 1;
    std::vector<double> x;
    for (int t = 0; t < 10000; ++t) {
        const ReferenceBasis b = draw_reference_bases(s, RngStream::from_path(4, {static_cast<std::uint64_t>(t)}));
        x.push_back(std::norm(b.q[0](0, 0)));
    }
    CHECK(ks_uniform(x) < 0.02);
}

TEST_CASE("channel: Q and VQ have matching projected moments") {
    Scenario s = small_scenario();
    s.K = 1;
    RngStream vr(77);
    const CMatrix v = haar_unitary(3, vr);
    double m_plain = 0, m_rot = 0, m2_plain = 0, m2_rot = 0;
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        const ReferenceBasis b = draw_reference_bases(s, RngStream::from_path(6, {static_cast<std::uint64_t>(t)}));
        const double a = std::norm(b.q[0](1, 0));
        const double r = std::norm((v * b.q[0])(1, 0));
        m_plain += a / n;
        m_rot += r / n;
        m2_plain += a * a / n;
        m2_rot += r * r / n;
    }
    // Haar on C^3: |q_1|^2 ~ Beta(1, 2), mean 1/3, second moment 1/6.
    CHECK(m_plain == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(m_rot == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(m2_plain == doctest::Approx(1.0 / 6.0).epsilon(0.04));
    CHECK(m2_rot == doctest::Approx(1.0 / 6.0).epsilon(0.04));
}

TEST_CASE("channel: scenario validation") {
    Scenario s = small_scenario();
    CHECK_NOTHROW(s.validate_for_alignment());
    s.S = 4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_scenario();
    s.N = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_scenario();
    s.n_f = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_scenario();
    s.K = 1;
    CHECK_NOTHROW(s.validate());
    CHECK_THROWS_AS(s.validate_for_alignment(), std::invalid_argument);
}

TEST_CASE("channel: warning when (K-1)S < L") {
    Scenario s = small_scenario();
    CHECK(s.warnings().empty());
    s.S = 1;
    s.L = 2;
    CHECK(s.warnings().size() == 1);
}
