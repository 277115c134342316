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

#ifndef CBOIA_RNG_HPP
#define CBOIA_RNG_HPP

#include <cstdint>
#include <initializer_list>

#include "cboia/types.hpp"

namespace cboia {

// Stream purposes. Every random draw in the simulator is keyed by
// (master seed, trial, purpose, indices...) so that the value of a draw never
// depends on which worker computed it or in which order.
enum class Purpose : std::uint64_t {
    channel = 1,
    bases = 2,
    codebook = 3,
    grassmannian = 4,
    oracle = 5,
    target = 6,
    noise = 7,
};

// Counter-based generator: output n is a bijective mix of (key + n * gamma).
// Copying a stream copies its position; derive() gives independent children.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) noexcept : key_(key) {}

    static RngStream from_path(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

    RngStream derive(std::uint64_t tag) const noexcept;
    RngStream derive(Purpose purpose, std::initializer_list<std::uint64_t> indices = {}) const noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on [0, 1).
    double uniform() noexcept;
    // Uniform on (0, 1].
    double uniform_open0() noexcept { return 1.0 - uniform(); }
    double normal() noexcept;
    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_normal(double variance = 1.0) noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

// i.i.d. CN(0, variance) matrix.
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, RngStream& rng);

} // namespace cboia

#endif
