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

#include "cboia/codebook.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cboia/channel.hpp"

namespace cboia {

namespace {

constexpr double kUnitNormTol = 1e-12;
// Above this size the O(N_f^2) pair scan is left to explicit calls.
constexpr std::size_t kMaxCachedPairScan = 4096;

void require_codebook_size(int n_f) {
    if (n_f < 0 || n_f > 24) throw std::domain_error("codebook: n_f must be in [0, 24]");
}

CMatrix to_matrix(const std::vector<CVector>& vectors, int dim) {
    CMatrix x(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t n = 0; n < vectors.size(); ++n) x.col(static_cast<Eigen::Index>(n)) = vectors[n];
    return x;
}

std::vector<CVector> to_vectors(const CMatrix& x) {
    std::vector<CVector> out;
    out.reserve(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index n = 0; n < x.cols(); ++n) out.emplace_back(x.col(n));
    return out;
}

void normalize_columns(CMatrix& x) {
    for (Eigen::Index n = 0; n < x.cols(); ++n) x.col(n).normalize();
}

// Largest off-diagonal |G_ab| of the Gram matrix of the columns of x.
double coherence(const CMatrix& x) {
    const CMatrix g = x.adjoint() * x;
    double c = 0.0;
    for (Eigen::Index b = 0; b < g.cols(); ++b)
        for (Eigen::Index a = 0; a < b; ++a) c = std::max(c, std::abs(g(a, b)));
    return c;
}

struct PackingState {
    CMatrix x;
    double coherence = std::numeric_limits<double>::infinity();

    void offer(const CMatrix& candidate, double c) {
        if (c < coherence) {
            coherence = c;
            x = candidate;
        }
    }
};

// Alternating projection between {G : G_aa = 1, |G_ab| <= mu} and the Gram
// matrices of unit-norm tight frames. mu tracks just below the current
// coherence, floored at the Welch bound.
void alternating_projection(CMatrix& x, int iters, PackingState& best) {
    const Eigen::Index n = x.cols();
    const Eigen::Index l = x.rows();
    const double welch = std::sqrt(std::max(0.0, double(n - l) / double(l * (n - 1))));
    for (int it = 0; it < iters; ++it) {
        CMatrix g = x.adjoint() * x;
        double c = 0.0;
        for (Eigen::Index b = 0; b < n; ++b)
            for (Eigen::Index a = 0; a < b; ++a) c = std::max(c, std::abs(g(a, b)));
        best.offer(x, c);
        const double mu = std::max(welch, 0.97 * c);
        for (Eigen::Index b = 0; b < n; ++b) {
            g(b, b) = 1.0;
            for (Eigen::Index a = 0; a < b; ++a) {
                const double mag = std::abs(g(a, b));
                if (mag > mu) {
                    g(a, b) *= mu / mag;
                    g(b, a) = std::conj(g(a, b));
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
        x = es.eigenvectors().rightCols(l).adjoint();
        normalize_columns(x);
    }
    best.offer(x, coherence(x));
}

// Projected descent on sum_{a != b} (1 - |c_a^H c_b|^2)^(-2). Each codeword
// moves a fixed arc length along its own normalized tangent gradient; the arc
// length anneals from 0.3 to 0.003 of the typical codeword spacing.
void repulsion_refine(CMatrix& x, int iters, PackingState& best) {
    const Eigen::Index n = x.cols();
    const Eigen::Index l = x.rows();
    const double spacing = std::min(1.0, std::pow(double(n), -1.0 / (2.0 * double(l - 1))));
    Eigen::MatrixXd w(n, n);
    for (int it = 0; it < iters; ++it) {
        const double frac = double(it) / double(iters);
        CMatrix g = x.adjoint() * x;
        double max_a2 = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) {
            for (Eigen::Index a = 0; a < n; ++a) {
                if (a == b) {
                    w(a, b) = 0.0;
                    continue;
                }
                const double a2 = std::norm(g(a, b));
                max_a2 = std::max(max_a2, a2);
                const double d2 = std::max(1.0 - a2, 1e-12);
                w(a, b) = 1.0 / (d2 * d2 * d2);
            }
        }
        best.offer(x, std::sqrt(max_a2));
        const CMatrix m = w.cast<cplx>().cwiseProduct(g);
        CMatrix grad = x * m;
        const double eta = 0.3 * spacing * std::pow(0.01, frac);
        for (Eigen::Index c = 0; c < n; ++c) {
            const cplx along = x.col(c).dot(grad.col(c));
            grad.col(c) -= along * x.col(c);
            const double gn = grad.col(c).norm();
            if (gn > 0.0) x.col(c) -= (eta / gn) * grad.col(c);
        }
        normalize_columns(x);
    }
    best.offer(x, coherence(x));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Codebook make_codebook(int dim, CodebookKind kind, std::uint64_t seed, std::vector<CVector> vectors) {
    if (dim < 1) throw std::domain_error("codebook: dimension must be >= 1");
    if (kind == CodebookKind::svd_exact) throw std::domain_error("codebook: kind must be random or grassmannian");
    for (const auto& v : vectors) {
        if (v.size() != dim) throw std::domain_error("codebook: codeword dimension mismatch");
        if (std::abs(v.norm() - 1.0) > kUnitNormTol) throw std::domain_error("codebook: codewords must be unit norm");
    }
    Codebook cb;
    cb.dim = dim;
    cb.kind = kind;
    cb.seed = seed;
    cb.vectors = std::move(vectors);
    if (cb.vectors.size() < 2)
        cb.min_chordal_sq = 1.0;
    else if (cb.vectors.size() <= kMaxCachedPairScan)
        cb.min_chordal_sq = min_chordal_distance(cb);
    return cb;
}

Codebook gen_random_codebook(int L, int n_f, RngStream& rng) {
    if (L < 1) throw std::domain_error("codebook: L must be >= 1");
    require_codebook_size(n_f);
    std::vector<CVector> vectors;
    const int size = 1 << n_f;
    vectors.reserve(static_cast<std::size_t>(size));
    for (int n = 0; n < size; ++n) vectors.push_back(isotropic_unit_vector(L, rng));
    return make_codebook(L, CodebookKind::random, rng.key(), std::move(vectors));
}

Codebook gen_grassmannian_codebook(int L, int n_f, std::uint64_t seed, const GrassmannianOptions& options) {
    if (L < 1) throw std::domain_error("codebook: L must be >= 1");
    require_codebook_size(n_f);
    if (L == 1) {
        warn("grassmannian codebook with L = 1: all unit scalars are equivalent, returning a single codeword");
        return make_codebook(1, CodebookKind::grassmannian, seed, {CVector::Ones(1)});
    }
    const int size = 1 << n_f;
    const RngStream root = RngStream::from_path(seed, {static_cast<std::uint64_t>(Purpose::grassmannian),
                                                       static_cast<std::uint64_t>(L),
                                                       static_cast<std::uint64_t>(n_f)});
    if (size == 1) {
        RngStream rng = root.derive(0);
        return make_codebook(L, CodebookKind::grassmannian, seed, {isotropic_unit_vector(L, rng)});
    }

    PackingState best;
    const int restarts = std::max(1, options.restarts);
    const int iters = std::max(1, options.iters);
    for (int r = 0; r < restarts; ++r) {
        RngStream rng = root.derive(static_cast<std::uint64_t>(r));
        CMatrix x = complex_gaussian(L, size, 1.0, rng);
        normalize_columns(x);
        PackingState local;
        local.offer(x, coherence(x));
        // Exact eigendecompositions of the N_f x N_f Gram matrix are only
        // affordable, and only help, for small codebooks.
        if (size <= 64) {
            alternating_projection(x, iters / 2, local);
            x = local.x;
        }
        repulsion_refine(x, iters, local);
        best.offer(local.x, local.coherence);
    }
    CMatrix x = best.x;
    normalize_columns(x);
    return make_codebook(L, CodebookKind::grassmannian, seed, to_vectors(x));
}

double packing_bound(int L, int N_f) {
    if (N_f < 2) throw std::domain_error("packing_bound: N_f must be >= 2");
    if (L < 2) throw std::domain_error("packing_bound: L must be >= 2");
    const double n = N_f;
    const double rankin = (L - 1) * n / (2.0 * L * (n - 1));
    const double hamming = std::pow(1.0 / n, 1.0 / (L - 1));
    return std::min({0.5, rankin, hamming});
}

double rankin_simplex_bound(int L, int N_f) {
    if (N_f < 2) throw std::domain_error("rankin_simplex_bound: N_f must be >= 2");
    const double n = N_f;
    return (L - 1) * n / (L * (n - 1));
}

double nu_f(int L, int N_f) {
    if (L < 2) throw std::domain_error("nu_f: L must be >= 2");
    if (N_f < 1) throw std::domain_error("nu_f: N_f must be >= 1");
    return std::pow(1.0 / N_f, 1.0 / (L - 1));
}

QuantizationResult quantize(const CVector& v, const Codebook& codebook) {
    if (codebook.vectors.empty()) throw std::domain_error("quantize: empty codebook");
    if (v.size() != codebook.dim) throw std::domain_error("quantize: dimension mismatch");
    if (std::abs(v.norm() - 1.0) > 1e-9) throw std::domain_error("quantize: target must be unit norm");
    int best = 0;
    double best_corr = -1.0;
    for (int n = 0; n < codebook.size(); ++n) {
        const double corr = std::norm(v.dot(codebook.vectors[static_cast<std::size_t>(n)]));
        if (corr > best_corr) {
            best_corr = corr;
            best = n;
        }
    }
    double d_sq = 1.0 - best_corr;
    if (d_sq < 0.0) {
        if (d_sq < -1e-12) throw std::logic_error("quantize: residual distance below -1e-12");
        d_sq = 0.0;
    }
    return {best + 1, codebook.vectors[static_cast<std::size_t>(best)], d_sq};
}

double residual_distance_cdf(int L, int N_f, double z) {
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("residual_distance_cdf: z must lie in [0, 1]");
    if (L < 2) throw std::domain_error("residual_distance_cdf: L must be >= 2");
    return 1.0 - std::pow(1.0 - std::pow(z, L - 1), N_f);
}

double chordal_distance_sq(const CVector& a, const CVector& b) {
    return std::max(0.0, 1.0 - std::norm(a.dot(b)));
}

double min_chordal_distance(const Codebook& codebook) {
    if (codebook.size() < 2) throw std::domain_error("min_chordal_distance: need at least two codewords");
    const CMatrix x = to_matrix(codebook.vectors, codebook.dim);
    return std::max(0.0, 1.0 - std::pow(coherence(x), 2));
}

std::string serialize_codebook(const Codebook& codebook) {
    std::ostringstream os;
    os << codebook.dim << ' ' << codebook.size() << ' ' << to_string(codebook.kind) << ' ' << codebook.seed << '\n';
    for (const auto& v : codebook.vectors) {
        for (Eigen::Index l = 0; l < v.size(); ++l) {
            if (l > 0) os << ' ';
            os << format_double(v(l).real()) << ' ' << format_double(v(l).imag());
        }
        os << '\n';
    }
    return os.str();
}

Codebook parse_codebook(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos > start) tokens.push_back(text.substr(start, pos - start));
    }
    auto fail = [](const std::string& msg) -> Codebook { throw std::invalid_argument("codebook file: " + msg); };
    if (tokens.size() < 4) return fail("missing header");

    auto parse_int = [&](std::string_view t, auto& out) {
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
        if (ec != std::errc() || p != t.data() + t.size()) fail("bad integer '" + std::string(t) + "'");
    };
    int dim = 0;
    int size = 0;
    std::uint64_t seed = 0;
    parse_int(tokens[0], dim);
    parse_int(tokens[1], size);
    const CodebookKind kind = codebook_kind_from_string(std::string(tokens[2]));
    parse_int(tokens[3], seed);
    if (dim < 1 || size < 1) return fail("dimension and size must be positive");
    const std::size_t expected = 4 + static_cast<std::size_t>(size) * 2 * static_cast<std::size_t>(dim);
    if (tokens.size() != expected) return fail("expected " + std::to_string(expected - 4) + " values");

    std::vector<CVector> vectors;
    std::size_t t = 4;
    for (int n = 0; n < size; ++n) {
        CVector v(dim);
        for (int l = 0; l < dim; ++l) {
            double re = 0.0;
            double im = 0.0;
            for (double* out : {&re, &im}) {
                const auto tok = tokens[t++];
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *out);
                if (ec != std::errc() || p != tok.data() + tok.size()) fail("bad float '" + std::string(tok) + "'");
            }
            v(l) = cplx(re, im);
        }
        vectors.push_back(std::move(v));
    }
    return make_codebook(dim, kind, seed, std::move(vectors));
}

void save_codebook(const Codebook& codebook, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    out << serialize_codebook(codebook);
    if (!out) throw std::ios_base::failure("failed writing '" + path.string() + "'");
}

Codebook load_codebook(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_codebook(ss.str());
}

Codebook cached_grassmannian_codebook(const std::filesystem::path& dir, int L, int n_f, std::uint64_t seed,
                                      const GrassmannianOptions& options) {
    if (dir.empty()) return gen_grassmannian_codebook(L, n_f, seed, options);
    const auto path = dir / ("grassmannian_L" + std::to_string(L) + "_nf" + std::to_string(n_f) + "_seed" +
                             std::to_string(seed) + ".txt");
    if (std::filesystem::exists(path)) {
        Codebook cb = load_codebook(path);
        if (cb.dim == L && cb.size() == (L == 1 ? 1 : (1 << n_f)) && cb.kind == CodebookKind::grassmannian)
            return cb;
    }
    Codebook cb = gen_grassmannian_codebook(L, n_f, seed, options);
    std::filesystem::create_directories(dir);
    // Write-then-rename so concurrent readers never see a partial file.
    const auto tmp = path.string() + ".tmp" + std::to_string(mix64(seed ^ static_cast<std::uint64_t>(n_f)));
    save_codebook(cb, tmp);
    std::filesystem::rename(tmp, path);
    return cb;
}

} // namespace cboia
