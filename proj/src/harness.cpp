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

#include "cboia/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include "cboia/analysis.hpp"
#include "cboia/oia.hpp"
#include "cboia/receivers.hpp"

namespace cboia {

namespace {

// Everything a trial needs that does not depend on the scheme. Channels are
// keyed per user, so the largest N of the grid contains every smaller one.
struct TrialData {
    Scenario scenario;
    RngStream stream{0};
    ChannelSet channels;
    ReferenceBasis bases;
    std::vector<std::vector<UserState>> svd_states;
    std::vector<std::vector<UserState>> max_snr_states;
    std::vector<std::vector<double>> max_snr_gain;
};

TrialData prepare_trial(const RunConfig& config, int trial, bool need_max_snr) {
    TrialData d;
    d.scenario = config.scenario;
    d.scenario.N = config.n_grid.back();
    d.stream = RngStream::from_path(config.scenario.seed, {static_cast<std::uint64_t>(trial)});
    d.channels = draw_channel_set(d.scenario, d.stream);
    d.bases = draw_reference_bases(d.scenario, d.stream);
    d.svd_states = compute_user_states(d.channels, d.bases, d.scenario);
    if (need_max_snr) {
        d.max_snr_states = d.svd_states;
        d.max_snr_gain.resize(d.max_snr_states.size());
        for (std::size_t i = 0; i < d.max_snr_states.size(); ++i) {
            for (auto& u : d.max_snr_states[i]) {
                const CMatrix& h = d.channels.h(u.cell, u.cell, u.user);
                u.w = max_snr_beamformer(h);
                u.cw_index = 0;
                u.d_sq = 0.0;
                u.eta = (u.g * u.w).squaredNorm();
                d.max_snr_gain[i].push_back((h * u.w).squaredNorm());
            }
        }
    }
    return d;
}

CellSelection make_selection(int cell, const std::vector<UserState>& users, const std::vector<int>& picked) {
    CellSelection sel;
    sel.cell = cell;
    sel.selected = picked;
    for (int j : picked) {
        const UserState& u = users[static_cast<std::size_t>(j)];
        sel.weights.push_back(u.w);
        sel.lifs.push_back(u.eta);
        sel.cw_indices.push_back(u.cw_index);
    }
    return sel;
}

// Step 2 restricted to the first n users of every cell.
std::vector<CellSelection> select_lowest_lif(const std::vector<std::vector<UserState>>& states, int n, int S) {
    std::vector<CellSelection> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        std::vector<double> lifs;
        for (int j = 0; j < n; ++j) lifs.push_back(states[i][static_cast<std::size_t>(j)].eta);
        out.push_back(make_selection(static_cast<int>(i), states[i], select_users(lifs, S)));
    }
    return out;
}

// Max-SNR baseline: the S users with the largest beamformed direct gain.
std::vector<CellSelection> select_max_gain(const TrialData& d, int n, int S) {
    std::vector<CellSelection> out;
    for (std::size_t i = 0; i < d.max_snr_states.size(); ++i) {
        std::vector<double> neg_gain;
        for (int j = 0; j < n; ++j) neg_gain.push_back(-d.max_snr_gain[i][static_cast<std::size_t>(j)]);
        out.push_back(make_selection(static_cast<int>(i), d.max_snr_states[i], select_users(neg_gain, S)));
    }
    return out;
}

using CodebookTable = std::map<int, Codebook>;

CodebookTable build_grassmannian_codebooks(const RunConfig& config) {
    CodebookTable table;
    if (std::find(config.schemes.begin(), config.schemes.end(), Scheme::gc_oia) == config.schemes.end()) return table;
    const std::function<Codebook(int)> build = [&](int idx) {
        const int nf = config.nf_grid[static_cast<std::size_t>(idx)];
        return cached_grassmannian_codebook(config.codebook_dir, config.scenario.L, nf, config.scenario.seed,
                                            config.grassmannian);
    };
    const auto books = run_trials<Codebook>(static_cast<int>(config.nf_grid.size()), config.workers, build);
    for (std::size_t n = 0; n < books.size(); ++n) table.emplace(config.nf_grid[n], books[n]);
    return table;
}

// Selections of every (scheme, n_f, N) point of one trial, in output order.
struct PointSelection {
    Scheme scheme;
    int n_f;
    int N;
    std::vector<CellSelection> selections;
};

std::vector<PointSelection> select_points(const RunConfig& config, const TrialData& d, const CodebookTable& gc) {
    std::vector<PointSelection> out;
    const int S = config.scenario.S;
    for (Scheme scheme : config.schemes) {
        for (int nf : config.nf_grid) {
            std::vector<std::vector<UserState>> states;
            const std::vector<std::vector<UserState>>* use = &d.svd_states;
            if (scheme == Scheme::gc_oia) {
                states = apply_codebook(d.svd_states, &gc.at(nf));
                use = &states;
            } else if (scheme == Scheme::rc_oia) {
                RngStream rng = d.stream.derive(Purpose::codebook, {static_cast<std::uint64_t>(nf)});
                const Codebook cb = gen_random_codebook(config.scenario.L, nf, rng);
                states = apply_codebook(d.svd_states, &cb);
                use = &states;
            }
            for (int n : config.n_grid) {
                PointSelection p{scheme, nf, n, {}};
                p.selections = scheme == Scheme::max_snr ? select_max_gain(d, n, S) : select_lowest_lif(*use, n, S);
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

ExperimentRecord base_record(const RunConfig& config, const PointSelection& p, int trial) {
    ExperimentRecord r;
    r.experiment = to_string(config.experiment);
    r.scheme = p.scheme;
    r.K = config.scenario.K;
    r.M = config.scenario.M;
    r.N = p.N;
    r.L = config.scenario.L;
    r.S = config.scenario.S;
    r.n_f = p.n_f;
    r.trial = trial;
    return r;
}

// Interleaves per-trial record lists into point-major order: all trials of
// the first point, then all trials of the second, and so on.
std::vector<ExperimentRecord> point_major(std::vector<std::vector<ExperimentRecord>> per_trial) {
    std::vector<ExperimentRecord> out;
    if (per_trial.empty()) return out;
    const std::size_t points = per_trial.front().size();
    out.reserve(points * per_trial.size());
    for (std::size_t p = 0; p < points; ++p)
        for (auto& trial : per_trial) out.push_back(std::move(trial[p]));
    return out;
}

std::vector<ExperimentRecord> run_sumlif(const RunConfig& config) {
    config.validate();
    const CodebookTable gc = build_grassmannian_codebooks(config);
    const bool need_max_snr =
        std::find(config.schemes.begin(), config.schemes.end(), Scheme::max_snr) != config.schemes.end();
    const std::function<std::vector<ExperimentRecord>(int)> trial_fn = [&](int trial) {
        const TrialData d = prepare_trial(config, trial, need_max_snr);
        std::vector<ExperimentRecord> rows;
        for (const auto& p : select_points(config, d, gc)) {
            ExperimentRecord r = base_record(config, p, trial);
            r.receiver = Receiver::none;
            r.metric = "sum_lif";
            r.value = sum_lif(p.selections);
            rows.push_back(std::move(r));
        }
        return rows;
    };
    return point_major(run_trials(config.scenario.trials, config.workers, trial_fn));
}

std::vector<ExperimentRecord> run_rates(const RunConfig& config) {
    config.validate();
    const CodebookTable gc = build_grassmannian_codebooks(config);
    const bool need_max_snr =
        std::find(config.schemes.begin(), config.schemes.end(), Scheme::max_snr) != config.schemes.end();
    ReceiverSet which{false, false, false};
    for (Receiver r : config.receivers) {
        which.zf |= r == Receiver::zf;
        which.gmi |= r == Receiver::med_gmi;
        which.capacity |= r == Receiver::capacity;
    }
    const int K = config.scenario.K;
    const std::function<std::vector<ExperimentRecord>(int)> trial_fn = [&](int trial) {
        const TrialData d = prepare_trial(config, trial, need_max_snr);
        std::vector<ExperimentRecord> rows;
        for (const auto& p : select_points(config, d, gc)) {
            std::vector<EffectiveChannel> ecs;
            for (int i = 0; i < K; ++i) ecs.push_back(build_effective_channel(d.channels, d.bases, p.selections, i));
            for (double snr_db : config.snr_grid) {
                const double n0 = std::pow(10.0, -snr_db / 10.0);
                double zf = 0.0, gmi = 0.0, cap = 0.0;
                bool outage = false;
                for (int i = 0; i < K; ++i) {
                    const ReceiverEval ev =
                        evaluate_cell(ecs[static_cast<std::size_t>(i)], d.bases.u[static_cast<std::size_t>(i)], n0, which);
                    for (double r : ev.zf_rates) zf += r;
                    outage |= ev.outage;
                    gmi += ev.gmi;
                    cap += ev.capacity;
                }
                ExperimentRecord r = base_record(config, p, trial);
                r.snr_db = snr_db;
                for (Receiver rx : config.receivers) {
                    r.receiver = rx;
                    r.metric = "sum_rate";
                    r.value = rx == Receiver::zf ? zf : rx == Receiver::med_gmi ? gmi : cap;
                    rows.push_back(r);
                    if (rx == Receiver::zf) {
                        r.metric = "outage";
                        r.value = outage ? 1.0 : 0.0;
                        rows.push_back(r);
                    }
                }
            }
        }
        return rows;
    };
    return point_major(run_trials(config.scenario.trials, config.workers, trial_fn));
}

void require_experiment(const RunConfig& config, Experiment e) {
    if (config.experiment != e)
        throw ConfigError("config is for '" + to_string(config.experiment) + "', expected '" + to_string(e) + "'");
}

} // namespace

std::vector<ExperimentRecord> run_sumlif_vs_n(const RunConfig& config) {
    require_experiment(config, Experiment::sumlif_vs_n);
    return run_sumlif(config);
}

std::vector<ExperimentRecord> run_sumlif_vs_nf(const RunConfig& config) {
    require_experiment(config, Experiment::sumlif_vs_nf);
    return run_sumlif(config);
}

std::vector<ExperimentRecord> run_rate_vs_snr(const RunConfig& config) {
    require_experiment(config, Experiment::rate_vs_snr);
    return run_rates(config);
}

std::vector<ExperimentRecord> run_rate_vs_n(const RunConfig& config) {
    require_experiment(config, Experiment::rate_vs_n);
    return run_rates(config);
}

std::vector<ExperimentRecord> run_experiment(const RunConfig& config) {
    switch (config.experiment) {
    case Experiment::sumlif_vs_n: return run_sumlif_vs_n(config);
    case Experiment::sumlif_vs_nf: return run_sumlif_vs_nf(config);
    case Experiment::rate_vs_snr: return run_rate_vs_snr(config);
    case Experiment::rate_vs_n: return run_rate_vs_n(config);
    }
    throw ConfigError("unknown experiment");
}

void emit_results(const RunConfig& config, std::vector<ExperimentRecord> records, std::ostream& fallback) {
    if (config.summary) {
        auto agg = summarize(records);
        records.insert(records.end(), std::make_move_iterator(agg.begin()), std::make_move_iterator(agg.end()));
    }
    if (config.out_path.empty()) {
        write_csv(fallback, records);
        return;
    }
    if (config.out_path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(config.out_path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + config.out_path.parent_path().string() + "': " + ec.message());
    }
    write_csv(config.out_path, records);
}

std::vector<double> aligned_interference_gap(const std::vector<double>& snr_db, int instances, std::uint64_t seed) {
    Scenario s;
    s.K = 2;
    s.M = 3;
    s.L = 2;
    s.S = 2;
    s.N = 2;
    std::vector<double> gap(snr_db.size(), 0.0);
    for (int inst = 0; inst < instances; ++inst) {
        const RngStream stream = RngStream::from_path(seed, {static_cast<std::uint64_t>(inst)});
        const ChannelSet ch = draw_channel_set(s, stream);
        const ReferenceBasis b = draw_reference_bases(s, stream);
        RngStream wrng = stream.derive(Purpose::target);
        const CMatrix& q = b.q[0];
        const CMatrix& u = b.u[0];
        CMatrix h_c(s.M, s.S);
        for (int j = 0; j < s.S; ++j) h_c.col(j) = ch.h(0, 0, j) * isotropic_unit_vector(s.L, wrng);
        // Interference from cell 1 forced into span(Q_0).
        std::vector<CVector> cross;
        for (int m = 0; m < s.S; ++m) cross.emplace_back(q * (q.adjoint() * (ch.h(0, 1, m) * isotropic_unit_vector(s.L, wrng))));
        const CMatrix h_tilde = u.adjoint() * h_c;
        for (std::size_t p = 0; p < snr_db.size(); ++p) {
            const double n0 = std::pow(10.0, -snr_db[p] / 10.0);
            const CMatrix r = interference_covariance(cross, u, n0);
            gap[p] += capacity_ic(h_c, cross, n0) - gmi_med(h_tilde, r, n0).gmi;
        }
    }
    for (double& g : gap) g /= instances;
    return gap;
}

} // namespace cboia
