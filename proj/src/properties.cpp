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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cboia/analysis.hpp"
#include "cboia/harness.hpp"
#include "cboia/hermitian.hpp"
#include "cboia/oia.hpp"
#include "cboia/receivers.hpp"

namespace cboia {

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// log2 det(R^{-1} H H^H + I) through a plain LU determinant.
double matched_log2det(const CMatrix& h, const CMatrix& r) {
    const Eigen::Index S = h.rows();
    const CMatrix m = r.inverse() * h * h.adjoint() + CMatrix::Identity(S, S);
    return std::log2(std::abs(m.partialPivLu().determinant()));
}

struct Instance {
    ChannelSet channels;
    ReferenceBasis bases;
    std::vector<std::vector<UserState>> states;
    std::vector<CellSelection> selections;
    Codebook codebook;
};

Instance make_instance(const Scenario& s, std::uint64_t seed, int trial) {
    Instance in;
    const RngStream stream = RngStream::from_path(seed, {0x70726f70ULL, static_cast<std::uint64_t>(trial)});
    in.channels = draw_channel_set(s, stream);
    in.bases = draw_reference_bases(s, stream);
    RngStream cb = stream.derive(Purpose::codebook);
    in.codebook = gen_random_codebook(s.L, s.n_f, cb);
    in.states = apply_codebook(compute_user_states(in.channels, in.bases, s), &in.codebook);
    in.selections = select_cells(in.states, s.S);
    return in;
}

// Effective covariance at BS i straight from the channel matrices, without
// the cross-vector list.
CMatrix reference_covariance(const Instance& in, int i, double n0) {
    const CMatrix& u = in.bases.u[static_cast<std::size_t>(i)];
    CMatrix r = n0 * CMatrix::Identity(u.cols(), u.cols());
    for (int k = 0; k < in.channels.K(); ++k) {
        if (k == i) continue;
        const CellSelection& sel = in.selections[static_cast<std::size_t>(k)];
        for (std::size_t m = 0; m < sel.selected.size(); ++m) {
            const CMatrix h = u.adjoint() * in.channels.h(i, k, sel.selected[m]);
            r += h * sel.weights[m] * sel.weights[m].adjoint() * h.adjoint();
        }
    }
    return r;
}

CMatrix random_pd(int S, RngStream& rng) {
    const CMatrix a = complex_gaussian(S, S, 1.0, rng);
    return hermitian_part(a * a.adjoint() + 0.2 * CMatrix::Identity(S, S));
}

} // namespace

bool PropertyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

void print_report(std::ostream& os, const PropertyReport& report) {
    for (const auto& c : report.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return !c.passed; });
    os << report.checks.size() - static_cast<std::size_t>(failed) << '/' << report.checks.size() << " checks passed\n";
}

PropertyReport run_property_suite(const RunConfig& config, const CovarianceFn& covariance_in) {
    const CovarianceFn covariance = covariance_in ? covariance_in : CovarianceFn(interference_covariance);
    Scenario s = config.scenario;
    s.N = config.n_grid.empty() ? 20 : config.n_grid.front();
    s.n_f = config.nf_grid.empty() ? 6 : config.nf_grid.front();
    s.validate_for_alignment();
    const std::uint64_t seed = s.seed;
    const int instances = 50;
    const double snr_db = 20.0;
    const double n0 = std::pow(10.0, -snr_db / 10.0);
    PropertyReport report;
    auto add = [&](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    std::vector<Instance> pool;
    for (int t = 0; t < instances; ++t) pool.push_back(make_instance(s, seed, t));

    {
        double worst = 0.0;
        for (const auto& in : pool)
            for (int k = 0; k < s.K; ++k) {
                const CMatrix& u = in.bases.u[static_cast<std::size_t>(k)];
                const CMatrix& q = in.bases.q[static_cast<std::size_t>(k)];
                worst = std::max(worst, (u.adjoint() * u - CMatrix::Identity(s.S, s.S)).norm());
                if (q.cols() > 0) worst = std::max(worst, (u.adjoint() * q).norm());
            }
        add("bases_orthonormal", worst <= 1e-10, fmt("max residual %.3g (limit 1e-10)", worst));
    }
    {
        RngStream rng = RngStream::from_path(seed, {0x6d6f6dULL});
        const double mean = complex_gaussian(1000, 1000, 1.0 / s.L, rng).cwiseAbs2().mean();
        const double rel = std::abs(mean * s.L - 1.0);
        add("channel_second_moment", rel < 0.02, fmt("mean |h|^2 * L = %.5f (limit 1 +- 0.02)", mean * s.L));
    }
    {
        double worst = 0.0;
        for (const auto& in : pool)
            for (const auto& cell : in.states)
                for (const auto& user : cell) {
                    double direct = 0.0;
                    for (int k = 0; k < s.K; ++k)
                        if (k != user.cell)
                            direct += (in.bases.u[static_cast<std::size_t>(k)].adjoint() *
                                       in.channels.h(k, user.cell, user.user) * user.w).squaredNorm();
                    worst = std::max(worst, rel_err(user.eta, direct));
                }
        add("lif_stacked_equals_sum", worst <= 1e-8, fmt("max relative error %.3g (limit 1e-8)", worst));
    }
    {
        double worst = 0.0;
        for (const auto& in : pool)
            worst = std::max(worst, rel_err(sum_lif(in.selections), network_interference(in.channels, in.bases, in.selections)));
        add("network_identity", worst <= 1e-8, fmt("max relative error %.3g (limit 1e-8)", worst));
    }
    {
        int sandwich = 0, bound = 0;
        for (const auto& in : pool)
            for (const auto& cell : in.states)
                for (const auto& u : cell) {
                    const double s1 = u.sigma(0), sl = u.sigma(u.sigma.size() - 1);
                    if (u.eta < sl * sl - 1e-9 || u.eta > s1 * s1 + 1e-9) ++sandwich;
                    if (u.eta > lemma1_bound(s1, sl, u.d_sq) + 1e-9) ++bound;
                }
        add("lif_sandwich", sandwich == 0, std::to_string(sandwich) + " violations");
        add("quantized_lif_bound", bound == 0, std::to_string(bound) + " violations");
    }
    {
        const Instance& in = pool.front();
        double worst = 0.0;
        int wrong = 0;
        for (std::size_t k = 0; k < in.codebook.vectors.size(); ++k) {
            const auto q = quantize(in.codebook.vectors[k], in.codebook);
            worst = std::max(worst, q.d_sq);
            if (q.index != static_cast<int>(k) + 1) ++wrong;
        }
        add("codeword_self_quantization", worst <= 1e-12 && wrong == 0,
            fmt("max d^2 %.3g", worst) + ", " + std::to_string(wrong) + " wrong indices");
        RngStream rng = RngStream::from_path(seed, {0x7068ULL});
        int mismatches = 0;
        for (int n = 0; n < 1000; ++n) {
            const CVector v = isotropic_unit_vector(s.L, rng);
            const double phi = 2.0 * M_PI * rng.uniform();
            const auto a = quantize(v, in.codebook);
            const auto b = quantize(v * std::polar(1.0, phi), in.codebook);
            if (a.index != b.index || std::abs(a.d_sq - b.d_sq) > 1e-12) ++mismatches;
        }
        add("quantize_phase_invariance", mismatches == 0, std::to_string(mismatches) + " of 1000 differ");
    }
    {
        const int L = 2, nf = 4, samples = 10000;
        RngStream rng = RngStream::from_path(seed, {0x636466ULL});
        std::vector<double> d;
        for (int n = 0; n < samples; ++n) {
            const Codebook cb = gen_random_codebook(L, nf, rng);
            d.push_back(quantize(isotropic_unit_vector(L, rng), cb).d_sq);
        }
        std::sort(d.begin(), d.end());
        double ks = 0.0;
        for (int n = 0; n < samples; ++n) {
            const double f = residual_distance_cdf(L, 1 << nf, d[static_cast<std::size_t>(n)]);
            ks = std::max({ks, std::abs(f - double(n) / samples), std::abs(f - double(n + 1) / samples)});
        }
        add("random_codebook_cdf", ks < 0.02, fmt("sup deviation %.4f (limit 0.02)", ks));
    }
    {
        bool ok = true;
        std::string detail;
        for (int nf : {2, 3, 4}) {
            const Codebook g = gen_grassmannian_codebook(2, nf, seed, config.grassmannian);
            RngStream rng = RngStream::from_path(seed, {0x6772ULL, static_cast<std::uint64_t>(nf)});
            const Codebook r = gen_random_codebook(2, nf, rng);
            double mg = 0.0, mr = 0.0;
            for (int n = 0; n < 1000; ++n) {
                const CVector v = isotropic_unit_vector(2, rng);
                mg += quantize(v, g).d_sq / 1000.0;
                mr += quantize(v, r).d_sq / 1000.0;
            }
            ok &= mg < mr;
            detail += "N_f=" + std::to_string(1 << nf) + fmt(": %.4f", mg) + fmt(" vs %.4f; ", mr);
        }
        add("grassmannian_beats_random", ok, detail);
    }
    {
        int svd_bad = 0;
        double ref_bad = 0;
        for (const auto& in : pool) {
            auto exact = compute_user_states(in.channels, in.bases, s);
            for (const auto& cell : exact)
                for (const auto& u : cell) {
                    const double sl = u.sigma(u.sigma.size() - 1);
                    if (std::abs(u.eta - sl * sl) > 1e-9 * std::max(1.0, u.sigma(0) * u.sigma(0))) ++svd_bad;
                }
            for (int i = 0; i < s.K; ++i) {
                std::vector<std::pair<double, int>> ranked;
                for (int j = 0; j < s.N; ++j) {
                    const UserState& u = in.states[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    double eta = 0.0;
                    for (int k = 0; k < s.K; ++k)
                        if (k != i)
                            eta += (in.bases.u[static_cast<std::size_t>(k)].adjoint() * in.channels.h(k, i, j) * u.w).squaredNorm();
                    ranked.emplace_back(eta, j);
                }
                std::sort(ranked.begin(), ranked.end());
                for (int m = 0; m < s.S; ++m)
                    if (ranked[static_cast<std::size_t>(m)].second != in.selections[static_cast<std::size_t>(i)].selected[static_cast<std::size_t>(m)]) ++ref_bad;
            }
        }
        add("svd_exact_eta_equals_sigma", svd_bad == 0, std::to_string(svd_bad) + " users off by more than 1e-9");
        add("selection_matches_reference", ref_bad == 0, fmt("%.0f mismatched picks", ref_bad));
    }
    {
        double worst_identity = 0.0;
        int penalty = 0, dpi = 0, cap_bad = 0, phase_bad = 0;
        bool identity_ok = true;
        RngStream rng = RngStream::from_path(seed, {0x7068617365ULL});
        for (const auto& in : pool)
            for (int i = 0; i < s.K; ++i) {
                const EffectiveChannel ec = build_effective_channel(in.channels, in.bases, in.selections, i);
                const CMatrix& u = in.bases.u[static_cast<std::size_t>(i)];
                const CMatrix r_ref = reference_covariance(in, i, n0);
                const double ref = matched_log2det(ec.h_tilde, r_ref);
                try {
                    const CMatrix r = covariance(ec.cross, u, n0);
                    worst_identity = std::max(worst_identity, rel_err(gmi_itheta(ec.h_tilde, r, r, 1.0), ref));
                } catch (const std::exception&) {
                    identity_ok = false;
                }
                const double cap = capacity_ic(ec.h_c, ec.cross, n0);
                const double gmi = gmi_med(ec.h_tilde, r_ref, n0).gmi;
                if (gmi > ref + 1e-6) ++penalty;
                if (ref > cap + 1e-6) ++dpi;
                if (gmi > cap + 1e-6) ++cap_bad;

                // Rotate every weight by its own phase; ZF rates must not move.
                std::vector<CellSelection> rotated = in.selections;
                for (auto& sel : rotated)
                    for (auto& w : sel.weights) w *= std::polar(1.0, 2.0 * M_PI * rng.uniform());
                const EffectiveChannel er = build_effective_channel(in.channels, in.bases, rotated, i);
                try {
                    const auto a = zf_rates(ec.h_tilde, ec.cross, u, n0);
                    const auto b = zf_rates(er.h_tilde, er.cross, u, n0);
                    for (std::size_t j = 0; j < a.size(); ++j)
                        if (std::abs(a[j] - b[j]) > 1e-9) ++phase_bad;
                } catch (const SingularChannelError&) {
                }
            }
        identity_ok &= worst_identity <= 1e-9;
        add("matched_decoder_identity", identity_ok, fmt("max relative error %.3g (limit 1e-9)", worst_identity));
        add("mismatch_penalty", penalty == 0, std::to_string(penalty) + " violations");
        add("data_processing", dpi == 0, std::to_string(dpi) + " violations");
        add("gmi_below_capacity", cap_bad == 0, std::to_string(cap_bad) + " violations");
        add("zf_phase_invariance", phase_bad == 0, std::to_string(phase_bad) + " rates moved");
    }
    {
        const std::vector<double> snrs{0, 10, 20, 30, 40};
        const auto gap = aligned_interference_gap(snrs, 200, seed);
        bool ok = gap.back() < 0.05;
        std::string detail;
        for (std::size_t p = 0; p < gap.size(); ++p) {
            ok &= gap[p] > 0.0 && (p == 0 || gap[p] < gap[p - 1]);
            detail += fmt("%g dB: ", snrs[p]) + fmt("%.4f", gap[p]) + (p + 1 < gap.size() ? ", " : "");
        }
        add("aligned_interference_gap", ok, detail);
    }
    {
        RngStream rng = RngStream::from_path(seed, {0x6d63ULL});
        int outside = 0;
        double worst = 0.0;
        const int tuples = 10;
        for (int t = 0; t < tuples; ++t) {
            const int S = 1 + t % 3;
            const CMatrix h = complex_gaussian(S, S, 1.0, rng);
            const CMatrix r = random_pd(S, rng);
            const CMatrix r_hat = random_pd(S, rng);
            const double theta = 0.2 + 1.8 * rng.uniform();
            const double exact = gmi_itheta(h, r, r_hat, theta);
            const McEstimate mc = mc_gmi_estimate(h, r, r_hat, theta, 20000, rng);
            const double z = std::abs(exact - mc.estimate) / mc.std_error;
            worst = std::max(worst, z);
            if (z > 3.0) ++outside;
        }
        add("gmi_closed_form_vs_monte_carlo", outside == 0,
            std::to_string(outside) + " of " + std::to_string(tuples) + fmt(" outside 3 SE, worst %.2f SE", worst));
    }
    return report;
}

} // namespace cboia
