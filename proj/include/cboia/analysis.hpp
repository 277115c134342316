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

#ifndef CBOIA_ANALYSIS_HPP
#define CBOIA_ANALYSIS_HPP

#include <utility>
#include <vector>

#include "cboia/channel.hpp"
#include "cboia/oia.hpp"
#include "cboia/types.hpp"

namespace cboia {

/// (K-1)S - L + 1. May be <= 0.
int psi(int K, int S, int L);

/// sigma_1^2 / sigma_L^2 of g; +infinity when sigma_L = 0.
double condition_number_sq(const CMatrix& g);

enum class Tail { lower, upper };
enum class TailMethod { least_squares, tilted_mle };

struct TailFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> range{0.0, 0.0};
    int points = 0;
};

/// Power-law exponent of a distribution tail from samples.
///
/// Lower tails report p in F(x) ~ x^p, upper tails report -p in
/// 1 - F(x) ~ x^(-p). The window (lo_q, hi_q) is in CDF quantiles.
///
/// least_squares regresses the log empirical (tail) CDF on log x at 40
/// log-spaced quantiles inside the window. tilted_mle fits the density
/// x^(p-1) e^(-beta x) truncated to the window by maximum likelihood; the
/// exponential factor absorbs the curvature of the tail away from 0, so
/// wider windows can be used. Upper tails are fitted through 1/x.
TailFit empirical_tail_exponent(std::vector<double> samples, double lo_q, double hi_q, Tail tail,
                                TailMethod method = TailMethod::tilted_mle);

/// Sum of the selected LIFs over all cells.
double sum_lif(const std::vector<CellSelection>& selections);

/// sum_i sum_{k != i} sum_m ||U_i^H H_i^{[k,m]} w^{[k,m]}||^2, the unaligned
/// interference seen by every BS, computed from raw channels.
double network_interference(const ChannelSet& channels, const ReferenceBasis& bases,
                            const std::vector<CellSelection>& selections);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log y on log x. Needs >= 3 points, all positive.
LineFit loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace cboia

#endif
