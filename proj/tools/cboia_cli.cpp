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

// Command-line front end: one subcommand per experiment plus the property
// suite and codebook generation.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cboia/codebook.hpp"
#include "cboia/harness.hpp"

namespace {

enum ExitCode { ok = 0, invalid_config = 1, property_failure = 2, io_error = 3 };

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> workers;
    std::optional<std::string> out;
    bool summary = false;
    std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials");
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--out", f.out, "output path (stdout if omitted)");
    cmd->add_flag("--summary", f.summary, "append per-point mean/stderr rows");
    cmd->add_option("--set", f.set, "extra key=value overrides, applied after the config file");
}

cboia::RunConfig build_config(cboia::Experiment e, const CommonFlags& f) {
    cboia::RunConfig c = cboia::default_config(e);
    if (!f.config.empty()) cboia::apply_config_file(c, f.config);
    for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw cboia::ConfigError("--set expects key=value, got '" + kv + "'");
        cboia::apply_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (f.seed) c.scenario.seed = *f.seed;
    if (f.trials) c.scenario.trials = *f.trials;
    if (f.workers) c.workers = *f.workers;
    if (f.out) c.out_path = *f.out;
    if (f.summary) c.summary = true;
    c.validate();
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cboia: codebook-based opportunistic interference alignment simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    const std::vector<std::pair<std::string, cboia::Experiment>> experiments{
        {"sumlif-vs-n", cboia::Experiment::sumlif_vs_n},
        {"sumlif-vs-nf", cboia::Experiment::sumlif_vs_nf},
        {"rate-vs-snr", cboia::Experiment::rate_vs_snr},
        {"rate-vs-n", cboia::Experiment::rate_vs_n},
    };
    std::vector<CLI::App*> experiment_cmds;
    for (const auto& [name, e] : experiments) {
        auto* cmd = app.add_subcommand(name, "run the " + name + " sweep and write CSV");
        add_common(cmd, flags);
        experiment_cmds.push_back(cmd);
    }
    auto* props = app.add_subcommand("props", "run the property suite (exit 2 on failure)");
    add_common(props, flags);

    auto* make_cb = app.add_subcommand("make-codebook", "build a codebook file");
    int cb_L = 2;
    int cb_nf = 6;
    std::string cb_kind = "grassmannian";
    cboia::GrassmannianOptions cb_opts;
    make_cb->add_option("--L", cb_L, "codeword dimension")->check(CLI::PositiveNumber);
    make_cb->add_option("--n-f", cb_nf, "feedforward bits")->check(CLI::Range(0, 24));
    make_cb->add_option("--kind", cb_kind, "grassmannian | random")->check(CLI::IsMember({"grassmannian", "random"}));
    make_cb->add_option("--restarts", cb_opts.restarts, "random restarts")->check(CLI::PositiveNumber);
    make_cb->add_option("--iters", cb_opts.iters, "iterations per stage")->check(CLI::PositiveNumber);
    add_common(make_cb, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ExitCode::ok : ExitCode::invalid_config;
    }

    try {
        for (std::size_t n = 0; n < experiments.size(); ++n) {
            if (!experiment_cmds[n]->parsed()) continue;
            const cboia::RunConfig config = build_config(experiments[n].second, flags);
            cboia::emit_results(config, cboia::run_experiment(config), std::cout);
            return ExitCode::ok;
        }
        if (props->parsed()) {
            const cboia::RunConfig config = build_config(cboia::Experiment::sumlif_vs_n, flags);
            const cboia::PropertyReport report = cboia::run_property_suite(config);
            cboia::print_report(std::cout, report);
            return report.all_passed() ? ExitCode::ok : ExitCode::property_failure;
        }
        if (make_cb->parsed()) {
            const std::uint64_t seed = flags.seed.value_or(42);
            cboia::Codebook cb;
            if (cb_kind == "grassmannian") {
                cb = cboia::gen_grassmannian_codebook(cb_L, cb_nf, seed, cb_opts);
            } else {
                cboia::RngStream rng = cboia::RngStream::from_path(seed, {static_cast<std::uint64_t>(cboia::Purpose::codebook)});
                cb = cboia::gen_random_codebook(cb_L, cb_nf, rng);
            }
            if (flags.out) {
                cboia::save_codebook(cb, *flags.out);
                std::cerr << "min squared chordal distance " << cb.min_chordal_sq << '\n';
            } else {
                std::cout << cboia::serialize_codebook(cb);
            }
            return ExitCode::ok;
        }
    } catch (const cboia::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitCode::invalid_config;
    } catch (const cboia::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return ExitCode::io_error;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return ExitCode::io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return ExitCode::invalid_config;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return ExitCode::invalid_config;
    }
    return ExitCode::ok;
}
