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

#include "cboia/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace cboia {

namespace {

constexpr std::size_t kMinTailSamples = 10000;
constexpr int kFitPoints = 40;
constexpr int kQuadNodes = 4001; // odd, for Simpson

struct Regression {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

Regression least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Regression r;
    r.slope = sxx > 0 ? sxy / sxx : 0.0;
    r.intercept = my - r.slope * mx;
    r.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return r;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, double(i) / double(n - 1));
    return out;
}

// Sample at lower-tail quantile q of a sorted vector.
double quantile_at(const std::vector<double>& sorted, double q) {
    const auto n = static_cast<double>(sorted.size());
    const auto idx = static_cast<std::ptrdiff_t>(std::llround(q * n)) - 1;
    return sorted[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(sorted.size()) - 1))];
}

// Density t^(p-1) e^(-beta t) on [t0, 1], written in u = log t on [u0, 0].
class TiltedPowerLaw {
public:
    explicit TiltedPowerLaw(double u0) : u_(kQuadNodes), e_(kQuadNodes), w_(kQuadNodes) {
        const double h = -u0 / (kQuadNodes - 1);
        for (int n = 0; n < kQuadNodes; ++n) {
            u_[n] = u0 + h * n;
            e_[n] = std::exp(u_[n]);
            const double simpson = (n == 0 || n == kQuadNodes - 1) ? 1.0 : (n % 2 == 1 ? 4.0 : 2.0);
            w_[n] = simpson * h / 3.0;
        }
    }

    struct Moments {
        double log_z;
        double eu, et;           // E[u], E[t]
        double vuu, vut, vtt;    // covariances of (u, t)
    };

    Moments moments(double p, double beta) const {
        double peak = -std::numeric_limits<double>::infinity();
        std::vector<double> lw(kQuadNodes);
        for (int n = 0; n < kQuadNodes; ++n) {
            lw[n] = p * u_[n] - beta * e_[n];
            peak = std::max(peak, lw[n]);
        }
        double z = 0, su = 0, st = 0, suu = 0, sut = 0, stt = 0;
        for (int n = 0; n < kQuadNodes; ++n) {
            const double m = w_[n] * std::exp(lw[n] - peak);
            z += m;
            su += m * u_[n];
            st += m * e_[n];
            suu += m * u_[n] * u_[n];
            sut += m * u_[n] * e_[n];
            stt += m * e_[n] * e_[n];
        }
        Moments out{};
        out.log_z = peak + std::log(z);
        out.eu = su / z;
        out.et = st / z;
        out.vuu = suu / z - out.eu * out.eu;
        out.vut = sut / z - out.eu * out.et;
        out.vtt = stt / z - out.et * out.et;
        return out;
    }

    // Model CDF at t (within [t0, 1]) by trapezoid accumulation.
    double cdf(double p, double beta, double t) const {
        const double ut = std::log(t);
        double total = 0, below = 0;
        double peak = -std::numeric_limits<double>::infinity();
        for (int n = 0; n < kQuadNodes; ++n) peak = std::max(peak, p * u_[n] - beta * e_[n]);
        double prev = std::exp(p * u_[0] - beta * e_[0] - peak);
        for (int n = 1; n < kQuadNodes; ++n) {
            const double cur = std::exp(p * u_[n] - beta * e_[n] - peak);
            const double seg = 0.5 * (prev + cur) * (u_[n] - u_[n - 1]);
            total += seg;
            if (u_[n] <= ut)
                below += seg;
            else if (u_[n - 1] < ut)
                below += seg * (ut - u_[n - 1]) / (u_[n] - u_[n - 1]);
            prev = cur;
        }
        return total > 0 ? below / total : 0.0;
    }

private:
    std::vector<double> u_, e_, w_;
};

struct TiltedFit {
    double p = 1.0;
    double beta = 0.0;
};

// Newton's method on the concave log-likelihood of an exponential family
// with sufficient statistics (log t, -t).
TiltedFit fit_tilted(const TiltedPowerLaw& model, double mean_u, double mean_t) {
    TiltedFit fit;
    auto loglik = [&](double p, double beta) { return p * mean_u - beta * mean_t - model.moments(p, beta).log_z; };
    double current = loglik(fit.p, fit.beta);
    for (int it = 0; it < 100; ++it) {
        const auto m = model.moments(fit.p, fit.beta);
        // Score in (p, beta) and Fisher information of (u, -t).
        const double gp = mean_u - m.eu;
        const double gb = m.et - mean_t;
        const double a = m.vuu, b = -m.vut, d = m.vtt;
        const double det = a * d - b * b;
        if (!(det > 0)) break;
        double dp = (d * gp - b * gb) / det;
        double db = (a * gb - b * gp) / det;
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double np = fit.p + step * dp;
            const double nb = fit.beta + step * db;
            const double cand = np > 0 ? loglik(np, nb) : -std::numeric_limits<double>::infinity();
            if (cand >= current) {
                fit.p = np;
                fit.beta = nb;
                current = cand;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved || std::abs(step * dp) + std::abs(step * db) < 1e-10) break;
    }
    return fit;
}

} // namespace

int psi(int K, int S, int L) {
    return (K - 1) * S - L + 1;
}

double condition_number_sq(const CMatrix& g) {
    if (g.cols() == 0) throw std::domain_error("condition_number_sq: empty matrix");
    if (g.rows() < g.cols()) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<CMatrix> svd(g);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return (sv(0) * sv(0)) / (smin * smin);
}

TailFit empirical_tail_exponent(std::vector<double> samples, double lo_q, double hi_q, Tail tail,
                                TailMethod method) {
    if (samples.size() < kMinTailSamples) throw std::domain_error("empirical_tail_exponent: need at least 1e4 samples");
    if (!(lo_q > 0.0 && lo_q < hi_q && hi_q < 1.0))
        throw std::domain_error("empirical_tail_exponent: need 0 < lo_q < hi_q < 1");

    // Work on a lower tail in both cases: the upper tail of x is the lower
    // tail of 1/x.
    double ql = lo_q, qh = hi_q;
    if (tail == Tail::upper) {
        for (double& s : samples) s = 1.0 / s;
        ql = 1.0 - hi_q;
        qh = 1.0 - lo_q;
    }
    std::sort(samples.begin(), samples.end());
    const double sign = tail == Tail::upper ? -1.0 : 1.0;

    TailFit out;
    out.range = {lo_q, hi_q};
    const std::vector<double> qs = log_spaced(ql, qh, kFitPoints);
    std::vector<double> lx, lq;
    for (double q : qs) {
        const double x = quantile_at(samples, q);
        if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("empirical_tail_exponent: window holds non-positive samples");
        lx.push_back(std::log(x));
        lq.push_back(std::log(q));
    }

    if (method == TailMethod::least_squares) {
        const Regression r = least_squares_line(lx, lq);
        out.exponent = sign * r.slope;
        out.intercept = r.intercept;
        out.r_squared = r.r_squared;
        out.points = kFitPoints;
        return out;
    }

    const double a = quantile_at(samples, ql);
    const double b = quantile_at(samples, qh);
    double su = 0, st = 0;
    int k = 0;
    for (double x : samples) {
        if (x < a || x > b) continue;
        su += std::log(x / b);
        st += x / b;
        ++k;
    }
    if (k < 8) throw std::domain_error("empirical_tail_exponent: fewer than 8 samples in the window");
    const TiltedPowerLaw model(std::log(a / b));
    const TiltedFit fit = fit_tilted(model, su / k, st / k);

    out.exponent = sign * fit.p;
    out.intercept = std::log(qh) - fit.p * std::log(b);
    out.points = k;
    double ss_res = 0, ss_tot = 0, mean = 0;
    for (double v : lq) mean += v / kFitPoints;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double t = std::exp(lx[i]) / b;
        const double pred = std::log(ql + (qh - ql) * model.cdf(fit.p, fit.beta, t));
        ss_res += (lq[i] - pred) * (lq[i] - pred);
        ss_tot += (lq[i] - mean) * (lq[i] - mean);
    }
    out.r_squared = ss_tot > 0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    return out;
}

double sum_lif(const std::vector<CellSelection>& selections) {
    double total = 0.0;
    for (const auto& sel : selections)
        for (double v : sel.lifs) total += v;
    return total;
}

double network_interference(const ChannelSet& channels, const ReferenceBasis& bases,
                            const std::vector<CellSelection>& selections) {
    double total = 0.0;
    for (int i = 0; i < channels.K(); ++i) {
        const CMatrix& u = bases.u[static_cast<std::size_t>(i)];
        for (int k = 0; k < channels.K(); ++k) {
            if (k == i) continue;
            const CellSelection& sel = selections[static_cast<std::size_t>(k)];
            for (std::size_t m = 0; m < sel.selected.size(); ++m)
                total += (u.adjoint() * (channels.h(i, k, sel.selected[m]) * sel.weights[m])).squaredNorm();
        }
    }
    return total;
}

LineFit loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::domain_error("loglog_slope: size mismatch");
    if (xs.size() < 3) throw std::domain_error("loglog_slope: need at least 3 points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::domain_error("loglog_slope: data must be positive");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const Regression r = least_squares_line(lx, ly);
    return {r.slope, r.intercept, r.r_squared};
}

} // namespace cboia
