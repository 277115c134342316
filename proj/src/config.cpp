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
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cboia/harness.hpp"

namespace cboia {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T out{};
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigError("invalid value '" + text + "' for '" + key + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("invalid boolean '" + text + "' for '" + key + "'");
}

template <class T>
std::vector<T> parse_numbers(const std::string& key, const std::string& value) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) out.push_back(parse_number<T>(key, item));
    return out;
}

// "a:b:step" expands to an inclusive arithmetic range.
std::vector<double> parse_real_grid(const std::string& key, const std::string& value) {
    if (value.find(':') == std::string::npos) return parse_numbers<double>(key, value);
    std::vector<std::string> parts;
    std::stringstream ss(value);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
    if (parts.size() != 3) throw ConfigError("range for '" + key + "' must be start:stop:step");
    const double a = parse_number<double>(key, parts[0]);
    const double b = parse_number<double>(key, parts[1]);
    const double step = parse_number<double>(key, parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("empty or invalid range for '" + key + "'");
    std::vector<double> out;
    for (int n = 0; a + n * step <= b + 1e-9 * step; ++n) out.push_back(a + n * step);
    return out;
}

template <class T>
bool strictly_increasing(const std::vector<T>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](const T& x, const T& y) { return !(x < y); }) == v.end();
}

} // namespace

std::string to_string(Scheme s) {
    switch (s) {
    case Scheme::svd_oia: return "svd_oia";
    case Scheme::gc_oia: return "gc_oia";
    case Scheme::rc_oia: return "rc_oia";
    case Scheme::max_snr: return "max_snr";
    }
    return "unknown";
}

std::string to_string(Receiver r) {
    switch (r) {
    case Receiver::zf: return "zf";
    case Receiver::med_gmi: return "med_gmi";
    case Receiver::capacity: return "capacity";
    case Receiver::none: return "none";
    }
    return "unknown";
}

std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::sumlif_vs_n: return "sumlif-vs-n";
    case Experiment::sumlif_vs_nf: return "sumlif-vs-nf";
    case Experiment::rate_vs_snr: return "rate-vs-snr";
    case Experiment::rate_vs_n: return "rate-vs-n";
    }
    return "unknown";
}

Scheme scheme_from_string(std::string_view text) {
    for (Scheme s : {Scheme::svd_oia, Scheme::gc_oia, Scheme::rc_oia, Scheme::max_snr})
        if (text == to_string(s)) return s;
    throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

Receiver receiver_from_string(std::string_view text) {
    for (Receiver r : {Receiver::zf, Receiver::med_gmi, Receiver::capacity, Receiver::none})
        if (text == to_string(r)) return r;
    throw ConfigError("unknown receiver '" + std::string(text) + "'");
}

Experiment experiment_from_string(std::string_view text) {
    for (Experiment e : {Experiment::sumlif_vs_n, Experiment::sumlif_vs_nf, Experiment::rate_vs_snr,
                         Experiment::rate_vs_n})
        if (text == to_string(e)) return e;
    throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

SweepAxis sweep_axis(Experiment e) {
    switch (e) {
    case Experiment::sumlif_vs_n:
    case Experiment::rate_vs_n: return SweepAxis::n_grid;
    case Experiment::sumlif_vs_nf: return SweepAxis::nf_grid;
    case Experiment::rate_vs_snr: return SweepAxis::snr_grid;
    }
    return SweepAxis::n_grid;
}

RunConfig default_config(Experiment experiment) {
    RunConfig c;
    c.experiment = experiment;
    c.scenario = Scenario{};
    c.scenario.K = 2;
    c.scenario.M = 3;
    c.scenario.L = 2;
    c.scenario.S = 2;
    c.scenario.trials = 100;
    c.scenario.seed = 42;
    const std::vector<Scheme> all{Scheme::svd_oia, Scheme::gc_oia, Scheme::rc_oia, Scheme::max_snr};
    const std::vector<Receiver> rates{Receiver::zf, Receiver::med_gmi, Receiver::capacity};
    switch (experiment) {
    case Experiment::sumlif_vs_n:
        c.n_grid = {25, 50, 100, 200, 400};
        c.nf_grid = {4, 8};
        c.schemes = all;
        c.receivers = {Receiver::none};
        break;
    case Experiment::sumlif_vs_nf:
        c.n_grid = {100};
        c.nf_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        c.schemes = {Scheme::svd_oia, Scheme::gc_oia, Scheme::rc_oia};
        c.receivers = {Receiver::none};
        break;
    case Experiment::rate_vs_snr:
        c.n_grid = {20, 100};
        c.nf_grid = {6};
        for (int s = 0; s <= 40; s += 5) c.snr_grid.push_back(s);
        c.schemes = all;
        c.receivers = rates;
        break;
    case Experiment::rate_vs_n:
        c.n_grid = {20, 50, 125, 320, 800};
        c.nf_grid = {6};
        c.snr_grid = {20.0};
        c.schemes = {Scheme::rc_oia};
        c.receivers = rates;
        break;
    }
    return c;
}

void apply_config_value(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    Scenario& s = c.scenario;
    if (key == "K") s.K = parse_number<int>(key, value);
    else if (key == "M") s.M = parse_number<int>(key, value);
    else if (key == "L") s.L = parse_number<int>(key, value);
    else if (key == "S") s.S = parse_number<int>(key, value);
    else if (key == "N" || key == "n_grid") c.n_grid = parse_numbers<int>(key, value);
    else if (key == "n_f" || key == "nf_grid") c.nf_grid = parse_numbers<int>(key, value);
    else if (key == "snr_db" || key == "snr_grid") c.snr_grid = parse_real_grid(key, value);
    else if (key == "trials") s.trials = parse_number<int>(key, value);
    else if (key == "seed") s.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "workers") c.workers = parse_number<int>(key, value);
    else if (key == "out") c.out_path = value;
    else if (key == "codebook_dir") c.codebook_dir = value;
    else if (key == "summary") c.summary = parse_bool(key, value);
    else if (key == "grassmannian_restarts") c.grassmannian.restarts = parse_number<int>(key, value);
    else if (key == "grassmannian_iters") c.grassmannian.iters = parse_number<int>(key, value);
    else if (key == "schemes") {
        c.schemes.clear();
        for (const auto& item : split_list(value)) c.schemes.push_back(scheme_from_string(item));
    } else if (key == "receivers") {
        c.receivers.clear();
        for (const auto& item : split_list(value)) c.receivers.push_back(receiver_from_string(item));
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_config_text(RunConfig& config, std::string_view text, const std::string& origin) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        try {
            apply_config_value(config, content.substr(0, eq), content.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str(), path.string());
}

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (workers < 1) fail("workers must be >= 1");
    if (scenario.trials < 1) fail("trials must be >= 1");
    if (n_grid.empty() || nf_grid.empty()) fail("N and n_f grids must not be empty");
    if (!strictly_increasing(n_grid)) fail("N grid must be strictly increasing");
    if (!strictly_increasing(nf_grid)) fail("n_f grid must be strictly increasing");
    if (!strictly_increasing(snr_grid)) fail("SNR grid must be strictly increasing");
    if (schemes.empty()) fail("at least one scheme is required");
    if (grassmannian.restarts < 1 || grassmannian.iters < 1) fail("grassmannian restarts and iters must be >= 1");
    const bool rates = experiment == Experiment::rate_vs_snr || experiment == Experiment::rate_vs_n;
    if (rates) {
        if (snr_grid.empty()) fail("SNR grid must not be empty");
        if (receivers.empty()) fail("at least one receiver is required");
        for (Receiver r : receivers)
            if (r == Receiver::none) fail("receiver 'none' is only valid for sum-LIF experiments");
    }
    for (int n : n_grid)
        for (int nf : nf_grid) {
            Scenario s = scenario;
            s.N = n;
            s.n_f = nf;
            s.snr_db = snr_grid;
            try {
                s.validate_for_alignment();
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
}

} // namespace cboia
