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

#include "cboia/rng.hpp"

#include <cmath>
#include <numbers>

namespace cboia {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngStream RngStream::from_path(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    RngStream s(mix64(seed + kGamma));
    for (auto p : path) s = s.derive(p);
    return s;
}

RngStream RngStream::derive(std::uint64_t tag) const noexcept {
    return RngStream(mix64(key_ ^ mix64(tag + 0x632BE59BD9B4E019ULL)));
}

RngStream RngStream::derive(Purpose purpose, std::initializer_list<std::uint64_t> indices) const noexcept {
    RngStream s = derive(static_cast<std::uint64_t>(purpose));
    for (auto i : indices) s = s.derive(i);
    return s;
}

std::uint64_t RngStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double RngStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

cplx RngStream::complex_normal(double variance) noexcept {
    // Both Box-Muller outputs go into one sample, so a complex draw never
    // straddles a cached spare.
    const double r = std::sqrt(-variance * std::log(uniform_open0()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, RngStream& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.complex_normal(variance);
    return m;
}

} // namespace cboia
