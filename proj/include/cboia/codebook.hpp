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

#ifndef CBOIA_CODEBOOK_HPP
#define CBOIA_CODEBOOK_HPP

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cboia/rng.hpp"
#include "cboia/types.hpp"

namespace cboia {

/// Ordered set of unit-norm codewords in C^dim.
struct Codebook {
    int dim = 0;
    CodebookKind kind = CodebookKind::random;
    std::uint64_t seed = 0;
    std::vector<CVector> vectors;
    /// min over pairs of 1 - |c_a^H c_b|^2; 1 for a single codeword, NaN when
    /// the codebook is too large for the pair scan (N_f > 4096).
    double min_chordal_sq = std::numeric_limits<double>::quiet_NaN();

    int size() const { return static_cast<int>(vectors.size()); }
};

/// Validates unit norms (1e-12) and fills in min_chordal_sq.
Codebook make_codebook(int dim, CodebookKind kind, std::uint64_t seed, std::vector<CVector> vectors);

/// Result of quantizing a unit vector: codeword index (1-based, as fed forward), the chosen
/// codeword, and the squared residual chordal distance 1 - |w^H v|^2.
struct QuantizationResult {
    int index = 0;
    CVector w;
    double d_sq = 0.0;
};

Codebook gen_random_codebook(int L, int n_f, RngStream& rng);

struct GrassmannianOptions {
    int restarts = 4;
    int iters = 400;
};

/// Line packing that locally maximizes the minimum chordal distance.
///
/// Each restart starts from an isotropic codebook, runs alternating
/// projection between the Gram matrices with clipped cross-correlations and
/// the Gram matrices of unit-norm tight frames, then refines with a
/// repulsion step on the sphere. The best iterate across all restarts (by
/// minimum chordal distance) is returned; non-convergence is not an error.
Codebook gen_grassmannian_codebook(int L, int n_f, std::uint64_t seed, const GrassmannianOptions& options = {});

/// min{1/2, (L-1)N_f/(2L(N_f-1)), N_f^(-1/(L-1))}. N_f < 2 is a domain error.
double packing_bound(int L, int N_f);

/// Rankin simplex bound (L-1)N_f/(L(N_f-1)) on the minimum squared chordal
/// distance of N_f lines in C^L.
double rankin_simplex_bound(int L, int N_f);

/// Quantization-distance bound (1/N_f)^(1/(L-1)). L = 1 is a domain error.
double nu_f(int L, int N_f);

/// argmax_n |v^H c_n|^2 with the lowest index winning exact ties.
QuantizationResult quantize(const CVector& v, const Codebook& codebook);

/// Pr{d^2 <= z} = 1 - (1 - z^(L-1))^N_f for an isotropic random codebook.
double residual_distance_cdf(int L, int N_f, double z);

double chordal_distance_sq(const CVector& a, const CVector& b);

/// Exhaustive pair scan; needs at least two codewords.
double min_chordal_distance(const Codebook& codebook);

// Text format: header "L N_f kind seed", then one line per codeword with 2L
// decimal floats (re im per coordinate, 17 significant digits).
std::string serialize_codebook(const Codebook& codebook);
Codebook parse_codebook(std::string_view text);
void save_codebook(const Codebook& codebook, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

/// Loads `dir/grassmannian_L{L}_nf{n_f}_seed{seed}.txt` if present, otherwise
/// builds and writes it. An empty `dir` disables caching.
Codebook cached_grassmannian_codebook(const std::filesystem::path& dir, int L, int n_f, std::uint64_t seed,
                                      const GrassmannianOptions& options = {});

} // namespace cboia

#endif
