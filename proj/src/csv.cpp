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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "cboia/harness.hpp"

namespace cboia {

namespace {

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <class T>
T parse_field(std::string_view field, const char* name) {
    T out{};
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc() || p != field.data() + field.size())
        throw std::invalid_argument(std::string("csv: bad ") + name + " '" + std::string(field) + "'");
    return out;
}

std::string point_key(const ExperimentRecord& r) {
    std::string key = r.experiment + ',' + to_string(r.scheme) + ',' + to_string(r.receiver);
    for (int v : {r.K, r.M, r.N, r.L, r.S, r.n_f}) key += ',' + std::to_string(v);
    key += ',' + (r.snr_db ? format_real(*r.snr_db) : std::string()) + ',' + r.metric;
    return key;
}

} // namespace

std::string format_record(const ExperimentRecord& r) {
    if (!std::isfinite(r.value)) throw std::logic_error("csv: metric '" + r.metric + "' is not finite");
    std::string line = r.experiment;
    line += ',' + to_string(r.scheme) + ',' + to_string(r.receiver);
    for (int v : {r.K, r.M, r.N, r.L, r.S, r.n_f}) line += ',' + std::to_string(v);
    line += ',';
    if (r.snr_db) line += format_real(*r.snr_db);
    line += ',' + std::to_string(r.trial) + ',' + r.metric + ',' + format_real(r.value);
    return line;
}

ExperimentRecord parse_record(std::string_view line) {
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        f.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (f.size() != 13) throw std::invalid_argument("csv: expected 13 fields, got " + std::to_string(f.size()));
    ExperimentRecord r;
    r.experiment = std::string(f[0]);
    r.scheme = scheme_from_string(f[1]);
    r.receiver = receiver_from_string(f[2]);
    r.K = parse_field<int>(f[3], "K");
    r.M = parse_field<int>(f[4], "M");
    r.N = parse_field<int>(f[5], "N");
    r.L = parse_field<int>(f[6], "L");
    r.S = parse_field<int>(f[7], "S");
    r.n_f = parse_field<int>(f[8], "n_f");
    if (!f[9].empty()) r.snr_db = parse_field<double>(f[9], "snr_db");
    r.trial = parse_field<long long>(f[10], "trial");
    r.metric = std::string(f[11]);
    r.value = parse_field<double>(f[12], "value");
    if (!std::isfinite(r.value)) throw std::invalid_argument("csv: value must be finite");
    return r;
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) os << format_record(r) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_csv(out, records);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ExperimentRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw std::invalid_argument("csv: missing or wrong header");
    std::vector<ExperimentRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        out.push_back(parse_record(line));
    }
    return out;
}

std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_csv(in);
}

std::vector<ExperimentRecord> summarize(const std::vector<ExperimentRecord>& records) {
    struct Acc {
        ExperimentRecord proto;
        double sum = 0.0;
        double sum_sq = 0.0;
        long long n = 0;
    };
    std::vector<Acc> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& r : records) {
        if (r.trial < 0) continue;
        const std::string key = point_key(r);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, groups.size()).first;
            groups.push_back({r, 0.0, 0.0, 0});
        }
        Acc& a = groups[it->second];
        a.sum += r.value;
        a.sum_sq += r.value * r.value;
        ++a.n;
    }
    std::vector<ExperimentRecord> out;
    for (const auto& a : groups) {
        const double mean = a.sum / static_cast<double>(a.n);
        const double var =
            a.n > 1 ? std::max(0.0, (a.sum_sq - a.n * mean * mean) / static_cast<double>(a.n - 1)) : 0.0;
        ExperimentRecord m = a.proto;
        m.trial = -1;
        m.metric = a.proto.metric + "_mean";
        m.value = mean;
        out.push_back(m);
        m.metric = a.proto.metric + "_stderr";
        m.value = std::sqrt(var / static_cast<double>(a.n));
        out.push_back(m);
    }
    return out;
}

} // namespace cboia
