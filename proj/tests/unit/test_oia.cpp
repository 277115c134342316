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
#include <numeric>

#include "cboia/analysis.hpp"
#include "cboia/oia.hpp"

using namespace cboia;

namespace {

Scenario scenario(int K, int M, int N, int L, int S) {
    Scenario s;
    s.K = K;
    s.M = M;
    s.N = N;
    s.L = L;
    s.S = S;
    s.n_f = 4;
    return s;
}

struct World {
    Scenario s;
    ChannelSet ch;
    ReferenceBasis b;
};

World world(const Scenario& s, std::uint64_t seed) {
    const RngStream stream = RngStream::from_path(seed, {0});
    return {s, draw_channel_set(s, stream), draw_reference_bases(s, stream)};
}

} // namespace

TEST_CASE("oia: stacked interference dimensions and zero cross links") {
    World w = world(scenario(2, 3, 4, 2, 2), 1);
    CHECK(stack_interference(w.ch, w.b, 0, 1).rows() == 2);
    CHECK(stack_interference(w.ch, w.b, 0, 1).cols() == 2);
    World w3 = world(scenario(3, 4, 2, 2, 2), 1);
    CHECK(stack_interference(w3.ch, w3.b, 1, 0).rows() == 4);
    for (int j = 0; j < 4; ++j) w.ch.h(1, 0, j).setZero();
    CHECK(stack_interference(w.ch, w.b, 0, 2).norm() == 0.0);
}

TEST_CASE("oia: K = 1 is rejected") {
    World w = world(scenario(1, 3, 4, 2, 2), 1);
    CHECK_THROWS_AS(stack_interference(w.ch, w.b, 0, 0), std::domain_error);
}

TEST_CASE("oia: ||G w||^2 equals the per-cell sum") {
    for (int K : {2, 3}) {
        World w = world(scenario(K, 4, 3, 2, 2), 10 + K);
        RngStream rng(5);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < 3; ++j) {
                const CMatrix g = stack_interference(w.ch, w.b, i, j);
                for (int t = 0; t < 100; ++t) {
                    const CVector v = isotropic_unit_vector(2, rng);
                    double direct = 0.0;
                    for (int k = 0; k < K; ++k)
                        if (k != i) direct += (w.b.u[k].adjoint() * w.ch.h(k, i, j) * v).squaredNorm();
                    CHECK(lif(g, v) == doctest::Approx(direct).epsilon(1e-8));
                }
            }
    }
}

TEST_CASE("oia: svd_weight on a diagonal matrix") {
    CMatrix g = CMatrix::Zero(2, 2);
    g(0, 0) = 2.0;
    g(1, 1) = 1.0;
    const SvdWeight sw = svd_weight(g);
    CHECK(sw.sigma(0) == doctest::Approx(2.0));
    CHECK(sw.sigma(1) == doctest::Approx(1.0));
    CHECK(std::abs(sw.v_last(1)) == doctest::Approx(1.0));
    CHECK(sw.v_last(1).imag() == doctest::Approx(0.0));
    CHECK(sw.v_last(1).real() > 0.0);
}

TEST_CASE("oia: fewer rows than columns leaves an exact null space") {
    RngStream rng(3);
    const CMatrix g = complex_gaussian(1, 2, 0.5, rng);
    const SvdWeight sw = svd_weight(g);
    CHECK(sw.sigma(1) == 0.0);
    CHECK(lif(g, sw.v_last) <= 1e-28);
}

TEST_CASE("oia: v_last minimizes the LIF against random probes") {
    RngStream rng(4);
    for (int t = 0; t < 20; ++t) {
        const CMatrix g = complex_gaussian(2, 2, 0.5, rng);
        const SvdWeight sw = svd_weight(g);
        const double eta = lif(g, sw.v_last);
        CHECK(eta == doctest::Approx(sw.sigma(1) * sw.sigma(1)).epsilon(1e-9));
        for (int p = 0; p < 1000 / 20; ++p) CHECK(eta <= lif(g, isotropic_unit_vector(2, rng)) + 1e-12);
    }
    const CMatrix g = complex_gaussian(4, 3, 0.5, rng);
    const SvdWeight sw = svd_weight(g);
    const double eta = lif(g, sw.v_last);
    for (int p = 0; p < 1000; ++p) CHECK(eta <= lif(g, isotropic_unit_vector(3, rng)) + 1e-12);
}

TEST_CASE("oia: lif basics") {
    RngStream rng(6);
    const CVector w = isotropic_unit_vector(3, rng);
    CHECK(lif(CMatrix::Identity(3, 3), w) == doctest::Approx(1.0));
    CMatrix g = CMatrix::Zero(1, 2);
    g(0, 0) = 1.0;
    CHECK(lif(g, CVector::Unit(2, 1)) == 0.0);
    CHECK_THROWS_AS(lif(g, CVector::Ones(2)), std::domain_error);
}

TEST_CASE("oia: quantized LIF bound values and sweep") {
    CHECK(lemma1_bound(2.0, 0.5, 0.0) == doctest::Approx(0.25));
    CHECK(lemma1_bound(1.0, 1.0, 0.5) == doctest::Approx(1.5));
    RngStream rng(7);
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
        const CMatrix g = complex_gaussian(2, 2, 0.5, rng);
        const Codebook cb = gen_random_codebook(2, 3, rng);
        const SvdWeight sw = svd_weight(g);
        const auto q = quantize(sw.v_last, cb);
        if (lif(g, q.w) > lemma1_bound(sw.sigma(0), sw.sigma(1), q.d_sq) + 1e-9) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("oia: eta_gc and eta_rc branches") {
    // nu_f * sigma_1^2 = 0.2 with sigma_1 = 1.
    CHECK(eta_gc(1.0, std::sqrt(0.1), 0.2, 0.0) == doctest::Approx(0.4));
    CHECK(eta_gc(1.0, std::sqrt(0.5), 0.2, 0.0) == doctest::Approx(1.0));
    CHECK(eta_gc(1.0, std::sqrt(0.5), 0.2, 1.0) == doctest::Approx(0.75));
    CHECK(eta_rc(1.0, 0.0, 0.3, 0.0) == doctest::Approx(0.6));
    for (double sl : {0.1, 0.4, 0.9})
        for (double d : {0.05, 0.2, 0.6}) CHECK(eta_rc(1.3, sl, d, 0.5) == eta_gc(1.3, sl, d, 0.5));
    CHECK_THROWS_AS(eta_gc(1, 1, 0.1, -1), std::domain_error);
}

TEST_CASE("oia: eta_rc bounds the measured LIF") {
    RngStream rng(8);
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
        const CMatrix g = complex_gaussian(2, 2, 0.5, rng);
        const Codebook cb = gen_random_codebook(2, 4, rng);
        const SvdWeight sw = svd_weight(g);
        const auto q = quantize(sw.v_last, cb);
        if (lif(g, q.w) > eta_rc(sw.sigma(0), sw.sigma(1), q.d_sq, 0.0) + 1e-9) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("oia: select_users") {
    CHECK(select_users({3, 1, 2}, 2) == std::vector<int>{1, 2});
    CHECK(select_users({1, 1, 2}, 1) == std::vector<int>{0});
    CHECK_THROWS_AS(select_users({1, 2}, 3), std::domain_error);
    RngStream rng(9);
    std::vector<double> v(500);
    for (auto& x : v) x = rng.uniform();
    std::vector<int> idx(500);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    idx.resize(7);
    CHECK(select_users(v, 7) == idx);
}

TEST_CASE("oia: pipeline with N = S selects everyone") {
    World w = world(scenario(2, 3, 2, 2, 2), 20);
    const auto sel = run_cell_pipeline(w.ch, w.b, nullptr, w.s);
    for (const auto& c : sel) {
        std::vector<int> s = c.selected;
        std::sort(s.begin(), s.end());
        CHECK(s == std::vector<int>{0, 1});
        CHECK(std::is_sorted(c.lifs.begin(), c.lifs.end()));
    }
}

TEST_CASE("oia: svd_exact mode applies sigma_L") {
    World w = world(scenario(2, 3, 30, 2, 2), 21);
    const auto states = compute_user_states(w.ch, w.b, w.s);
    for (const auto& cell : states)
        for (const auto& u : cell) {
            CHECK(u.cw_index == 0);
            CHECK(std::abs(u.eta - u.sigma(1) * u.sigma(1)) <= 1e-9 * std::max(1.0, u.sigma(0) * u.sigma(0)));
            CHECK(u.eta >= u.sigma(1) * u.sigma(1) - 1e-9);
            CHECK(u.eta <= u.sigma(0) * u.sigma(0) + 1e-9);
        }
}

TEST_CASE("oia: selection agrees with a reference built from raw channels") {
    const Scenario s = scenario(3, 4, 25, 2, 2);
    World w = world(s, 22);
    RngStream rng(23);
    const Codebook cb = gen_random_codebook(2, 4, rng);
    const auto sel = run_cell_pipeline(w.ch, w.b, &cb, s);
    for (int i = 0; i < s.K; ++i) {
        std::vector<std::pair<double, int>> ranked;
        for (int j = 0; j < s.N; ++j) {
            // Weight from a fresh SVD of G^H G and a plain argmax over codewords.
            CMatrix gram = CMatrix::Zero(2, 2);
            for (int k = 0; k < s.K; ++k)
                if (k != i) {
                    const CMatrix p = w.b.u[k].adjoint() * w.ch.h(k, i, j);
                    gram += p.adjoint() * p;
                }
            Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
            const CVector v = es.eigenvectors().col(0);
            int best = 0;
            for (int n = 1; n < cb.size(); ++n)
                if (std::norm(v.dot(cb.vectors[n])) > std::norm(v.dot(cb.vectors[best]))) best = n;
            const CVector wq = cb.vectors[best];
            double eta = 0.0;
            for (int k = 0; k < s.K; ++k)
                if (k != i) eta += (w.b.u[k].adjoint() * w.ch.h(k, i, j) * wq).squaredNorm();
            ranked.emplace_back(eta, j);
        }
        std::sort(ranked.begin(), ranked.end());
        for (int m = 0; m < s.S; ++m) {
            CHECK(sel[i].selected[m] == ranked[m].second);
            CHECK(sel[i].lifs[m] == doctest::Approx(ranked[m].first).epsilon(1e-9));
            CHECK(sel[i].cw_indices[m] >= 1);
        }
    }
}

TEST_CASE("oia: network identity holds for arbitrary weights") {
    for (int K : {2, 3}) {
        const Scenario s = scenario(K, 4, 12, 2, 2);
        World w = world(s, 30 + K);
        RngStream rng(31);
        const Codebook cb = gen_random_codebook(2, 3, rng);
        const auto sel = run_cell_pipeline(w.ch, w.b, &cb, s);
        CHECK(sum_lif(sel) == doctest::Approx(network_interference(w.ch, w.b, sel)).epsilon(1e-8));
    }
}

TEST_CASE("oia: phase rotation of v_last changes neither LIF nor selection") {
    const Scenario s = scenario(2, 3, 20, 2, 2);
    World w = world(s, 40);
    auto states = compute_user_states(w.ch, w.b, s);
    auto rotated = states;
    RngStream rng(41);
    for (auto& cell : rotated)
        for (auto& u : cell) {
            u.w *= std::polar(1.0, 6.28 * rng.uniform());
            u.eta = lif(u.g, u.w);
        }
    const auto a = select_cells(states, 2);
    const auto b = select_cells(rotated, 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(a[i].selected == b[i].selected);
        for (int m = 0; m < 2; ++m) CHECK(a[i].lifs[m] == doctest::Approx(b[i].lifs[m]).epsilon(1e-12));
    }
}

TEST_CASE("oia: codebook dimension must match L") {
    const Scenario s = scenario(2, 3, 5, 2, 2);
    World w = world(s, 50);
    RngStream rng(51);
    const Codebook cb = gen_random_codebook(3, 2, rng);
    CHECK_THROWS_AS(run_cell_pipeline(w.ch, w.b, &cb, s), std::domain_error);
}
