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

#include "cboia/receivers.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "cboia/hermitian.hpp"

namespace cboia {

namespace {

constexpr double kZfConditionLimit = 1e12;
constexpr std::size_t kMaxSearchPoints = 4096;

void require_noise(double n0, const char* what) {
    if (!(n0 > 0.0) || !std::isfinite(n0)) throw std::domain_error(std::string(what) + ": n0 must be positive");
}

// Walks the product constellation in lexicographic order (user 0 most
// significant) and keeps the first minimizer of `metric`.
template <class Metric>
CVector brute_force_decode(Eigen::Index S, const std::vector<cplx>& constellation, Metric&& metric) {
    const std::size_t q = constellation.size();
    if (q == 0) throw std::domain_error("decode: empty constellation");
    std::size_t total = 1;
    for (Eigen::Index s = 0; s < S; ++s) {
        total *= q;
        if (total > kMaxSearchPoints) throw std::domain_error("decode: search space exceeds 4096 points");
    }
    CVector x(S), best_x(S);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (Eigen::Index s = S - 1; s >= 0; --s) {
            x(s) = constellation[rem % q];
            rem /= q;
        }
        const double m = metric(x);
        if (m < best) {
            best = m;
            best_x = x;
        }
    }
    return best_x;
}

} // namespace

EffectiveChannel build_effective_channel(const ChannelSet& channels, const ReferenceBasis& bases,
                                         const std::vector<CellSelection>& selections, int i) {
    const int K = channels.K();
    if (static_cast<int>(selections.size()) != K) throw std::domain_error("build_effective_channel: need K selections");
    const CellSelection& own = selections[static_cast<std::size_t>(i)];
    const auto S = static_cast<Eigen::Index>(own.selected.size());
    EffectiveChannel ec;
    ec.h_c.resize(channels.M(), S);
    for (Eigen::Index s = 0; s < S; ++s)
        ec.h_c.col(s) = channels.h(i, i, own.selected[static_cast<std::size_t>(s)]) * own.weights[static_cast<std::size_t>(s)];
    ec.h_tilde = bases.u.at(static_cast<std::size_t>(i)).adjoint() * ec.h_c;
    for (int k = 0; k < K; ++k) {
        if (k == i) continue;
        const CellSelection& other = selections[static_cast<std::size_t>(k)];
        for (std::size_t m = 0; m < other.selected.size(); ++m)
            ec.cross.emplace_back(channels.h(i, k, other.selected[m]) * other.weights[m]);
    }
    return ec;
}

CMatrix zf_equalizer(const CMatrix& h_tilde) {
    if (h_tilde.rows() != h_tilde.cols() || h_tilde.rows() == 0)
        throw std::domain_error("zf_equalizer: h_tilde must be square and non-empty");
    Eigen::JacobiSVD<CMatrix> svd(h_tilde);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || smax / smin > kZfConditionLimit)
        throw SingularChannelError("zf_equalizer: effective channel is singular (condition number > 1e12)");
    return h_tilde.inverse().adjoint();
}

std::vector<double> zf_rates(const CMatrix& h_tilde, const std::vector<CVector>& cross, const CMatrix& u_i,
                             double n0) {
    require_noise(n0, "zf_rates");
    const CMatrix f = zf_equalizer(h_tilde);
    const double snr = 1.0 / n0;
    CMatrix projected(u_i.cols(), static_cast<Eigen::Index>(cross.size()));
    for (std::size_t c = 0; c < cross.size(); ++c) projected.col(static_cast<Eigen::Index>(c)) = u_i.adjoint() * cross[c];
    std::vector<double> rates(static_cast<std::size_t>(f.cols()));
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        const double leak = cross.empty() ? 0.0 : (f.col(j).adjoint() * projected).squaredNorm() * snr;
        rates[static_cast<std::size_t>(j)] = std::log2(1.0 + snr / (f.col(j).squaredNorm() + leak));
    }
    return rates;
}

CMatrix interference_covariance(const std::vector<CVector>& cross, const CMatrix& u_i, double n0) {
    require_noise(n0, "interference_covariance");
    CMatrix r = n0 * CMatrix::Identity(u_i.cols(), u_i.cols());
    for (const auto& v : cross) {
        const CVector p = u_i.adjoint() * v;
        r.noalias() += p * p.adjoint();
    }
    return r;
}

double capacity_ic(const CMatrix& h_c, const std::vector<CVector>& cross, double n0) {
    require_noise(n0, "capacity_ic");
    const Eigen::Index M = h_c.rows();
    CMatrix rc = n0 * CMatrix::Identity(M, M);
    for (const auto& v : cross) rc.noalias() += v * v.adjoint();
    const CMatrix a = inv_sqrt_hpd(rc);
    const CMatrix s = a * h_c;
    return log2det_hpd(hermitian_part(CMatrix::Identity(M, M) + s * s.adjoint()));
}

GmiObjective::GmiObjective(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat) {
    const Eigen::Index S = h_tilde.rows();
    if (r.rows() != S || r_hat.rows() != S) throw std::domain_error("gmi: dimension mismatch");
    require_hermitian_pd(r, "gmi: r");
    require_hermitian_pd(r_hat, "gmi: r_hat");
    const CMatrix a = inv_sqrt_hpd(r_hat);
    const CMatrix hh = h_tilde * h_tilde.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a * hh * a));
    lambda_ = es.eigenvalues().cwiseMax(0.0);
    const CMatrix av = a * es.eigenvectors();
    d_noise_ = (av.adjoint() * r * av).diagonal().real();
}

double GmiObjective::operator()(double theta) const {
    if (!(theta >= 0.0)) throw std::domain_error("gmi: theta must be non-negative");
    // D_bb = lambda_b + (V^H A R A V)_bb and tr(A R A) is the sum of the latter,
    // so the trace cancels term by term and I(theta) vanishes exactly when H = 0.
    double acc = 0.0;
    double logdet = 0.0;
    for (Eigen::Index b = 0; b < lambda_.size(); ++b) {
        acc += lambda_(b) * (1.0 - theta * d_noise_(b)) / (1.0 + theta * lambda_(b));
        logdet += std::log1p(theta * lambda_(b));
    }
    return (theta * acc + logdet) / std::numbers::ln2;
}

double gmi_itheta(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat, double theta) {
    return GmiObjective(h_tilde, r, r_hat)(theta);
}

GmiResult gmi_sup(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat) {
    const GmiObjective f(h_tilde, r, r_hat);

    double hi = 1.0;
    double prev = f(hi);
    int falls = 0;
    for (int n = 0; n < 64 && falls < 2; ++n) {
        const double next = f(2.0 * hi);
        falls = next < prev ? falls + 1 : 0;
        prev = next;
        hi *= 2.0;
    }

    constexpr int kGrid = 64;
    std::array<double, kGrid> grid{};
    grid[0] = 0.0;
    const double lo = hi * 1e-8;
    for (int g = 1; g < kGrid; ++g) grid[g] = lo * std::pow(hi / lo, double(g - 1) / double(kGrid - 2));
    int best_g = 0;
    double best = f(0.0);
    for (int g = 1; g < kGrid; ++g) {
        const double v = f(grid[g]);
        if (v > best) {
            best = v;
            best_g = g;
        }
    }

    double a = grid[std::max(0, best_g - 1)];
    double b = grid[std::min(kGrid - 1, best_g + 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    const double floor_tol = 1e-12 * hi;
    for (int it = 0; it < 200 && (b - a) > std::max(1e-6 * 0.5 * (a + b), floor_tol); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double theta = 0.5 * (a + b);
    const double v = f(theta);
    if (v >= best) return {theta, v};
    return {grid[best_g], best};
}

GmiResult gmi_med(const CMatrix& h_tilde, const CMatrix& r, double n0) {
    require_noise(n0, "gmi_med");
    return gmi_sup(h_tilde, r, n0 * CMatrix::Identity(h_tilde.rows(), h_tilde.rows()));
}

McEstimate mc_gmi_estimate(const CMatrix& h_tilde, const CMatrix& r, const CMatrix& r_hat, double theta,
                           int n_samples, RngStream& rng) {
    if (n_samples < 1000) throw std::domain_error("mc_gmi_estimate: need at least 1000 samples");
    require_hermitian_pd(r, "mc_gmi_estimate: r");
    require_hermitian_pd(r_hat, "mc_gmi_estimate: r_hat");
    const Eigen::Index S = h_tilde.rows();
    const CMatrix hh = h_tilde * h_tilde.adjoint();
    const CMatrix r_hat_inv = r_hat.inverse();
    const CMatrix inner_inv = (theta * hh + r_hat).inverse();
    const CMatrix omega = theta * r_hat_inv * hh + CMatrix::Identity(S, S);
    const double log2det_omega = std::log2(std::abs(omega.partialPivLu().determinant()));
    const CMatrix chol = Eigen::LLT<CMatrix>(r).matrixL();

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int n = 0; n < n_samples; ++n) {
        const CMatrix x = complex_gaussian(S, 1, 1.0, rng);
        const CMatrix z = chol * complex_gaussian(S, 1, 1.0, rng);
        const CMatrix y = h_tilde * x + z;
        const double own = -theta * (z.adjoint() * r_hat_inv * z)(0, 0).real();
        const double avg = theta * (y.adjoint() * inner_inv * y)(0, 0).real();
        const double sample = (own + avg) / std::numbers::ln2 + log2det_omega;
        sum += sample;
        sum_sq += sample * sample;
    }
    const double mean = sum / n_samples;
    const double var = std::max(0.0, (sum_sq - n_samples * mean * mean) / (n_samples - 1));
    return {mean, std::sqrt(var / n_samples)};
}

CVector med_decode(const CVector& y_tilde, const CMatrix& h_tilde, const std::vector<cplx>& constellation) {
    return brute_force_decode(h_tilde.cols(), constellation,
                              [&](const CVector& x) { return (y_tilde - h_tilde * x).squaredNorm(); });
}

CVector ml_decode(const CVector& y, const CMatrix& h_c, const CMatrix& r_c, const std::vector<cplx>& constellation) {
    require_hermitian_pd(r_c, "ml_decode: r_c");
    const Eigen::LLT<CMatrix> llt(r_c);
    return brute_force_decode(h_c.cols(), constellation, [&](const CVector& x) {
        const CVector e = llt.matrixL().solve(y - h_c * x);
        return e.squaredNorm();
    });
}

CVector max_snr_beamformer(const CMatrix& h_direct) {
    if (h_direct.cols() == 0) throw std::domain_error("max_snr_beamformer: empty channel");
    Eigen::JacobiSVD<CMatrix> svd(h_direct, Eigen::ComputeFullV);
    return normalize_phase(svd.matrixV().col(0));
}

ReceiverEval evaluate_cell(const EffectiveChannel& ec, const CMatrix& u_i, double n0, ReceiverSet which) {
    ReceiverEval out;
    out.n0 = n0;
    out.r_cov = interference_covariance(ec.cross, u_i, n0);
    if (which.zf) {
        try {
            out.zf_rates = zf_rates(ec.h_tilde, ec.cross, u_i, n0);
        } catch (const SingularChannelError&) {
            out.zf_rates.assign(static_cast<std::size_t>(ec.h_tilde.cols()), 0.0);
            out.outage = true;
        }
    }
    if (which.capacity) out.capacity = capacity_ic(ec.h_c, ec.cross, n0);
    if (which.gmi) {
        const GmiResult g = gmi_med(ec.h_tilde, out.r_cov, n0);
        out.gmi = std::max(0.0, g.gmi);
        out.theta_star = g.theta_star;
    }
    return out;
}

} // namespace cboia
