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

#ifndef CBOIA_HARNESS_HPP
#define CBOIA_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cboia/channel.hpp"
#include "cboia/codebook.hpp"
#include "cboia/types.hpp"

namespace cboia {

enum class Scheme { svd_oia, gc_oia, rc_oia, max_snr };
// `none` tags receiver-independent rows such as sum-LIF.
enum class Receiver { zf, med_gmi, capacity, none };
enum class Experiment { sumlif_vs_n, sumlif_vs_nf, rate_vs_snr, rate_vs_n };
enum class SweepAxis { n_grid, nf_grid, snr_grid };

std::string to_string(Scheme s);
std::string to_string(Receiver r);
std::string to_string(Experiment e);
Scheme scheme_from_string(std::string_view text);
Receiver receiver_from_string(std::string_view text);
Experiment experiment_from_string(std::string_view text);
SweepAxis sweep_axis(Experiment e);

/// Raised for malformed or inconsistent configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for file-system failures, with the path in the message (exit code 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One experiment run. The sweep axis is fixed by the experiment; the other
/// grids hold series values (e.g. n_f in {4, 8} for sum-LIF versus N) and
/// usually a single entry. Scenario::N, n_f and snr_db are ignored in favour
/// of the grids.
struct RunConfig {
    Experiment experiment = Experiment::sumlif_vs_n;
    Scenario scenario;
    std::vector<int> n_grid;
    std::vector<int> nf_grid;
    std::vector<double> snr_grid;
    std::vector<Scheme> schemes;
    std::vector<Receiver> receivers;
    std::filesystem::path out_path;
    std::filesystem::path codebook_dir;
    GrassmannianOptions grassmannian;
    int workers = 1;
    bool summary = false;

    /// Throws ConfigError.
    void validate() const;
};

/// Per-experiment default grids, schemes and receivers.
RunConfig default_config(Experiment experiment);

/// Applies `key = value` lines (`#` starts a comment). Lists are comma or
/// space separated. Unknown keys are errors.
void apply_config_text(RunConfig& config, std::string_view text, const std::string& origin = "<config>");
void apply_config_file(RunConfig& config, const std::filesystem::path& path);
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

struct ExperimentRecord {
    std::string experiment;
    Scheme scheme = Scheme::svd_oia;
    Receiver receiver = Receiver::none;
    int K = 0, M = 0, N = 0, L = 0, S = 0, n_f = 0;
    std::optional<double> snr_db;
    long long trial = 0; // -1 for aggregate rows
    std::string metric;
    double value = 0.0;
};

inline constexpr std::string_view kCsvHeader = "experiment,scheme,receiver,K,M,N,L,S,n_f,snr_db,trial,metric,value";

std::string format_record(const ExperimentRecord& r);
ExperimentRecord parse_record(std::string_view line);
void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_csv(std::istream& is);
std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path);

/// Mean and standard error per (point, metric) with trial = -1 and metric
/// suffixes `_mean` / `_stderr`, in first-appearance order.
std::vector<ExperimentRecord> summarize(const std::vector<ExperimentRecord>& records);

/// Runs `fn(trial)` for every trial on `workers` threads and returns the
/// results in trial order.
template <class T>
std::vector<T> run_trials(int trials, int workers, const std::function<T(int)>& fn);

std::vector<ExperimentRecord> run_sumlif_vs_n(const RunConfig& config);
std::vector<ExperimentRecord> run_sumlif_vs_nf(const RunConfig& config);
std::vector<ExperimentRecord> run_rate_vs_snr(const RunConfig& config);
std::vector<ExperimentRecord> run_rate_vs_n(const RunConfig& config);
std::vector<ExperimentRecord> run_experiment(const RunConfig& config);

/// Appends summary rows when config.summary is set and writes the CSV to
/// config.out_path (stdout when empty).
void emit_results(const RunConfig& config, std::vector<ExperimentRecord> records, std::ostream& fallback);

/// Shared by the property suite and the acceptance test: mean of
/// capacity_ic - gmi_med over `instances` cells (K = 2, M = 3, S = 2, L = 2)
/// whose cross-interference lies exactly in span(Q_i), per SNR point.
std::vector<double> aligned_interference_gap(const std::vector<double>& snr_db, int instances, std::uint64_t seed);

struct PropertyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;
    bool all_passed() const;
};

/// Signature of interference_covariance; the suite takes it as a parameter
/// so tests can inject a faulty implementation.
using CovarianceFn = std::function<CMatrix(const std::vector<CVector>&, const CMatrix&, double)>;

PropertyReport run_property_suite(const RunConfig& config, const CovarianceFn& covariance = {});
void print_report(std::ostream& os, const PropertyReport& report);

} // namespace cboia

#include "cboia/detail/run_trials.hpp"

#endif
