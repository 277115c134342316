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

#include <cmath>
#include <numbers>

#include "cboia/channel.hpp"
#include "cboia/hermitian.hpp"
#include "cboia/oia.hpp"
#include "cboia/receivers.hpp"

using namespace cboia;

namespace {

CMatrix random_pd(int S, RngStream& rng) {
    const CMatrix a = complex_gaussian(S, S, 1.0, rng);
    return hermitian_part(a * a.adjoint() + 0.2 * CMatrix::Identity(S, S));
}

double matched(const CMatrix& h, const CMatrix& r) {
    const CMatrix m = r.inverse() * h * h.adjoint() + CMatrix::Identity(h.rows(), h.rows());
    return std::log2(std::abs(m.determinant()));
}

CMatrix diag2(double a, double b) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("receivers: zf_equalizer") {
    CHECK((zf_equalizer(CMatrix::Identity(2, 2)) - CMatrix::Identity(2, 2)).norm() < 1e-15);
    const CMatrix f = zf_equalizer(diag2(2, 4));
    CHECK((f.adjoint() - diag2(0.5, 0.25)).norm() < 1e-15);
    RngStream rng(1);
    const CMatrix h = complex_gaussian(3, 3, 1.0, rng);
    CHECK((zf_equalizer(h).adjoint() * h - CMatrix::Identity(3, 3)).norm() < 1e-8);
    CHECK_THROWS_AS(zf_equalizer(diag2(1, 0)), SingularChannelError);
    CHECK_THROWS_AS(zf_equalizer(diag2(1, 1e-13)), SingularChannelError);
}

TEST_CASE("receivers: scalar ZF rate") {
    CMatrix h(1, 1);
    h(0, 0) = cplx(0.6, 0.8) * 1.5;
    const CMatrix u = CMatrix::Identity(1, 1);
    const auto r = zf_rates(h, {}, u, 0.1);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(std::log2(1.0 + 10.0 * 2.25)));
}

TEST_CASE("receivers: interference inside span(Q) does not cost ZF rate") {
    Scenario s;
    s.K = 1;
    s.M = 3;
    s.S = 2;
    s.L = 2;
    s.N = 2;
    const ReferenceBasis b = draw_reference_bases(s, RngStream::from_path(3, {0}));
    RngStream rng(4);
    const CMatrix h_c = complex_gaussian(3, 2, 1.0, rng);
    const CMatrix h_t = b.u[0].adjoint() * h_c;
    std::vector<CVector> cross;
    for (int m = 0; m < 2; ++m) cross.emplace_back(b.q[0] * complex_gaussian(1, 1, 4.0, rng));
    const auto a = zf_rates(h_t, cross, b.u[0], 0.01);
    const auto clean = zf_rates(h_t, {}, b.u[0], 0.01);
    for (int j = 0; j < 2; ++j) CHECK(a[j] == doctest::Approx(clean[j]).epsilon(1e-12));
}

TEST_CASE("receivers: ZF rate agrees with an SINR computed from raw channels") {
    Scenario s;
    s.K = 2;
    s.M = 3;
    s.S = 2;
    s.L = 2;
    s.N = 6;
    const RngStream stream = RngStream::from_path(5, {0});
    const ChannelSet ch = draw_channel_set(s, stream);
    const ReferenceBasis b = draw_reference_bases(s, stream);
    const auto sel = run_cell_pipeline(ch, b, nullptr, s);
    const double n0 = 0.05;
    for (int i = 0; i < 2; ++i) {
        const EffectiveChannel ec = build_effective_channel(ch, b, sel, i);
        const auto rates = zf_rates(ec.h_tilde, ec.cross, b.u[i], n0);
        // Second path: equalized output r = F^H U^H y, signal, noise and
        // interference powers read from the full composite matrix.
        CMatrix all(3, 4);
        for (int j = 0; j < 2; ++j) all.col(j) = ch.h(i, i, sel[i].selected[j]) * sel[i].weights[j];
        for (int m = 0; m < 2; ++m) all.col(2 + m) = ch.h(i, 1 - i, sel[1 - i].selected[m]) * sel[1 - i].weights[m];
        const CMatrix ht = b.u[i].adjoint() * all.leftCols(2);
        const CMatrix g = ht.inverse() * b.u[i].adjoint();
        for (int j = 0; j < 2; ++j) {
            const CMatrix row = g.row(j) * all;
            const double sig = std::norm(row(0, j));
            const double interf = std::norm(row(0, 2)) + std::norm(row(0, 3));
            const double noise = n0 * g.row(j).squaredNorm();
            CHECK(sig == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(rates[j] == doctest::Approx(std::log2(1.0 + sig / (noise + interf))).epsilon(1e-9));
        }
    }
}

TEST_CASE("receivers: interference covariance") {
    const CMatrix u = CMatrix::Identity(3, 2);
    CHECK((interference_covariance({}, u, 0.3) - 0.3 * CMatrix::Identity(2, 2)).norm() < 1e-15);
    CVector v = CVector::Unit(3, 0);
    CMatrix expect = 0.3 * CMatrix::Identity(2, 2);
    expect(0, 0) += 1.0;
    CHECK((interference_covariance({v}, u, 0.3) - expect).norm() < 1e-15);
    RngStream rng(6);
    for (int t = 0; t < 100; ++t) {
        std::vector<CVector> cross;
        for (int m = 0; m < 3; ++m) cross.emplace_back(complex_gaussian(3, 1, 1.0, rng));
        const CMatrix q = haar_unitary(3, rng).leftCols(2);
        CHECK(min_eigenvalue(interference_covariance(cross, q, 0.1)) >= 0.1 - 1e-10);
    }
}

TEST_CASE("receivers: capacity_ic") {
    CMatrix h(1, 1);
    h(0, 0) = 1.0;
    CHECK(capacity_ic(h, {}, 1.0) == doctest::Approx(1.0));
    RngStream rng(7);
    const CMatrix hc = complex_gaussian(3, 2, 1.0, rng);
    const double n0 = 0.2;
    const CMatrix m = hc * hc.adjoint() / n0 + CMatrix::Identity(3, 3);
    CHECK(capacity_ic(hc, {}, n0) == doctest::Approx(std::log2(std::abs(m.determinant()))).epsilon(1e-12));

    std::vector<CVector> cross;
    for (int k = 0; k < 2; ++k) cross.emplace_back(complex_gaussian(3, 1, 1.0, rng));
    const CMatrix rot = haar_unitary(3, rng);
    std::vector<CVector> cross_rot;
    for (const auto& v : cross) cross_rot.emplace_back(rot * v);
    CHECK(capacity_ic(rot * hc, cross_rot, n0) == doctest::Approx(capacity_ic(hc, cross, n0)).epsilon(1e-9));
}

TEST_CASE("receivers: GMI with a zero channel is zero") {
    RngStream rng(8);
    const CMatrix r = random_pd(2, rng);
    const CMatrix rh = random_pd(2, rng);
    for (double th : {0.0, 0.5, 3.0}) CHECK(std::abs(gmi_itheta(CMatrix::Zero(2, 2), r, rh, th)) < 1e-12);
    const GmiResult g = gmi_sup(CMatrix::Zero(2, 2), r, rh);
    CHECK(std::abs(g.gmi) < 1e-12);
}

TEST_CASE("receivers: matched decoder identity and theta* = 1") {
    RngStream rng(9);
    for (int S : {1, 2, 3}) {
        for (int t = 0; t < 10; ++t) {
            const CMatrix h = complex_gaussian(S, S, 1.0, rng);
            const CMatrix r = random_pd(S, rng);
            const double ref = matched(h, r);
            CHECK(gmi_itheta(h, r, r, 1.0) == doctest::Approx(ref).epsilon(1e-9));
            const GmiResult g = gmi_sup(h, r, r);
            CHECK(std::abs(g.theta_star - 1.0) <= 1e-3);
            CHECK(std::abs(g.gmi - ref) <= 1e-6);
        }
    }
}

TEST_CASE("receivers: closed-form I(theta) matches the definition by Monte Carlo") {
    RngStream rng(10);
    for (int S : {1, 2, 3}) {
        const CMatrix h = complex_gaussian(S, S, 1.0, rng);
        const CMatrix r = random_pd(S, rng);
        const CMatrix rh = random_pd(S, rng);
        const double theta = 0.3 + rng.uniform();
        const McEstimate mc = mc_gmi_estimate(h, r, rh, theta, 100000, rng);
        CHECK(std::abs(mc.estimate - gmi_itheta(h, r, rh, theta)) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("receivers: Monte Carlo GMI trivial case and 1/n variance") {
    RngStream rng(11);
    const CMatrix i2 = CMatrix::Identity(2, 2);
    const McEstimate z = mc_gmi_estimate(CMatrix::Zero(2, 2), i2, i2, 1.0, 10000, rng);
    CHECK(std::abs(z.estimate) <= 3.0 * z.std_error + 1e-12);
    const CMatrix h = complex_gaussian(2, 2, 1.0, rng);
    const CMatrix r = random_pd(2, rng);
    RngStream r1(13), r2(14);
    const McEstimate s1 = mc_gmi_estimate(h, r, i2, 0.7, 10000, r1);
    const McEstimate s4 = mc_gmi_estimate(h, r, i2, 0.7, 40000, r2);
    CHECK(s4.std_error / s1.std_error == doctest::Approx(0.5).epsilon(0.2));
    CHECK_THROWS_AS(mc_gmi_estimate(h, r, i2, 0.7, 10, r1), std::domain_error);
}

TEST_CASE("receivers: gmi_med under perfect alignment and inflated noise") {
    RngStream rng(14);
    const double n0 = 0.1;
    const CMatrix h = complex_gaussian(2, 2, 1.0, rng);
    const CMatrix r = n0 * CMatrix::Identity(2, 2);
    const GmiResult g = gmi_med(h, r, n0);
    CHECK(g.gmi == doctest::Approx(matched(h, r)).epsilon(1e-6));
    const GmiResult worse = gmi_med(h, 2.0 * r, n0);
    CHECK(worse.gmi < g.gmi);
}

TEST_CASE("receivers: gmi_med at each theta equals the MED closed form") {
    // With R_hat = n0 I the GMI objective reduces to
    // -theta/ln2 tr(R)/n0 + theta/ln2 tr(Omega'^{-1}(HH^H + R))/n0 + log2 det Omega'.
    RngStream rng(15);
    const double n0 = 0.05;
    const CMatrix h = complex_gaussian(2, 2, 1.0, rng);
    const CMatrix r = random_pd(2, rng) * 0.1 + n0 * CMatrix::Identity(2, 2);
    const CMatrix hh = h * h.adjoint();
    for (double th : {0.1, 0.5, 1.0, 2.0}) {
        const CMatrix om = th / n0 * hh + CMatrix::Identity(2, 2);
        const double direct = (-th / std::numbers::ln2) * r.trace().real() / n0 +
                              (th / std::numbers::ln2) * (om.inverse() * (hh + r)).trace().real() / n0 +
                              std::log2(std::abs(om.determinant()));
        CHECK(gmi_itheta(h, r, n0 * CMatrix::Identity(2, 2), th) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("receivers: mismatched GMI stays below capacity") {
    RngStream rng(16);
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const double n0 = std::pow(10.0, -rng.uniform() * 4.0);
        const CMatrix u = haar_unitary(3, rng).leftCols(2);
        const CMatrix hc = complex_gaussian(3, 2, 0.5, rng);
        std::vector<CVector> cross;
        for (int m = 0; m < 2; ++m) cross.emplace_back(complex_gaussian(3, 1, 0.5 * rng.uniform(), rng));
        const CMatrix r = interference_covariance(cross, u, n0);
        const GmiResult g = gmi_med(u.adjoint() * hc, r, n0);
        if (g.gmi > capacity_ic(hc, cross, n0) + 1e-6) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("receivers: decoders") {
    const std::vector<cplx> bpsk{1.0, -1.0};
    CVector y(1);
    y(0) = 0.9;
    CHECK(med_decode(y, CMatrix::Identity(1, 1), bpsk)(0) == cplx(1.0));

    const std::vector<cplx> qpsk{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    RngStream rng(17);
    const CMatrix h = complex_gaussian(2, 2, 1.0, rng);
    CVector x0(2);
    x0 << cplx(1, -1), cplx(-1, 1);
    CHECK((med_decode(h * x0, h, qpsk) - x0).norm() == 0.0);
    const CMatrix hc = complex_gaussian(3, 2, 1.0, rng);
    CHECK((ml_decode(hc * x0, hc, random_pd(3, rng), qpsk) - x0).norm() == 0.0);

    // With R_c = I the ML metric is the Euclidean one.
    for (int t = 0; t < 200; ++t) {
        const CVector yy = complex_gaussian(3, 1, 2.0, rng);
        CHECK((ml_decode(yy, hc, CMatrix::Identity(3, 3), qpsk) - med_decode(yy, hc, qpsk)).norm() == 0.0);
    }
    const std::vector<cplx> big(17, cplx(1.0));
    CHECK_THROWS_AS(med_decode(CVector::Zero(3), CMatrix::Identity(3, 3), big), std::domain_error);
}

TEST_CASE("receivers: ML symbol error rate does not exceed MED after nulling") {
    Scenario s;
    s.K = 2;
    s.M = 3;
    s.S = 2;
    s.L = 2;
    s.N = 2;
    const std::vector<cplx> qpsk{{M_SQRT1_2, M_SQRT1_2}, {M_SQRT1_2, -M_SQRT1_2}, {-M_SQRT1_2, M_SQRT1_2}, {-M_SQRT1_2, -M_SQRT1_2}};
    const double n0 = 0.1;
    RngStream rng(18);
    long ml_err = 0, med_err = 0;
    for (int t = 0; t < 10000; ++t) {
        const RngStream stream = RngStream::from_path(19, {static_cast<std::uint64_t>(t)});
        const ChannelSet ch = draw_channel_set(s, stream);
        const ReferenceBasis b = draw_reference_bases(s, stream);
        const auto sel = run_cell_pipeline(ch, b, nullptr, s);
        const EffectiveChannel ec = build_effective_channel(ch, b, sel, 0);
        CVector x(2), xi(2);
        for (int j = 0; j < 2; ++j) {
            x(j) = qpsk[rng.next_u64() % 4];
            xi(j) = qpsk[rng.next_u64() % 4];
        }
        CVector y = ec.h_c * x + std::sqrt(n0) * complex_gaussian(3, 1, 1.0, rng);
        CMatrix rc = n0 * CMatrix::Identity(3, 3);
        for (int m = 0; m < 2; ++m) {
            y += ec.cross[m] * xi(m);
            rc += ec.cross[m] * ec.cross[m].adjoint();
        }
        const CVector a = ml_decode(y, ec.h_c, rc, qpsk);
        const CVector d = med_decode(b.u[0].adjoint() * y, ec.h_tilde, qpsk);
        for (int j = 0; j < 2; ++j) {
            ml_err += std::abs(a(j) - x(j)) > 1e-9;
            med_err += std::abs(d(j) - x(j)) > 1e-9;
        }
    }
    CHECK(ml_err <= med_err);
}

TEST_CASE("receivers: max-SNR beamformer") {
    CVector w = max_snr_beamformer(diag2(2, 1));
    CHECK(std::abs(w(0)) == doctest::Approx(1.0));
    CHECK(w(0).real() > 0.0);
    RngStream rng(20);
    const CMatrix h = complex_gaussian(3, 2, 0.5, rng);
    w = max_snr_beamformer(h);
    for (int t = 0; t < 1000; ++t)
        CHECK((h * w).squaredNorm() >= (h * isotropic_unit_vector(2, rng)).squaredNorm() - 1e-12);
    const CVector a = complex_gaussian(3, 1, 1.0, rng);
    CVector bb = complex_gaussian(2, 1, 1.0, rng);
    bb.normalize();
    w = max_snr_beamformer(a * bb.adjoint());
    CHECK(std::norm(w.dot(bb)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("receivers: evaluate_cell records outages") {
    EffectiveChannel ec;
    ec.h_c = CMatrix::Zero(3, 2);
    ec.h_c(0, 0) = 1.0;
    const CMatrix u = CMatrix::Identity(3, 2);
    ec.h_tilde = u.adjoint() * ec.h_c;
    const ReceiverEval ev = evaluate_cell(ec, u, 0.1);
    CHECK(ev.outage);
    CHECK(ev.zf_rates == std::vector<double>{0.0, 0.0});
    CHECK(ev.capacity > 0.0);
    CHECK(ev.gmi <= ev.capacity + 1e-6);
    CHECK(is_hermitian_pd(ev.r_cov));
}
