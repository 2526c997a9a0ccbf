// SPDX-License-Identifier: Apache-2.0
//
// beamlab - robust adaptive beamforming via preprocessing-based spatial sampling
// Copyright (C) 2026 The beamlab authors
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

#include "beamlab/experiment.hpp"

#include "beamlab/analysis.hpp"
#include "beamlab/covariance.hpp"
#include "beamlab/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace beamlab
{

namespace
{

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::vector<double> range(double lo, double hi, double step)
{
    std::vector<double> v;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i)
        v.push_back(lo + i * step);
    return v;
}

// Sweep value as a file-name fragment: -10 -> m10, 0.5 -> 0p5.
std::string value_tag(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s(buf);
    for (char &c : s)
    {
        if (c == '-')
            c = 'm';
        else if (c == '.')
            c = 'p';
    }
    return s;
}

Error config_error(const std::string &msg) { return Error(ErrorCode::config, msg); }

} // namespace

std::string_view to_string(SweepKind kind)
{
    switch (kind)
    {
    case SweepKind::snr:
        return "snr";
    case SweepKind::snapshots:
        return "snapshots";
    case SweepKind::beampattern_rho:
        return "beampattern_rho";
    case SweepKind::beampattern_eta:
        return "beampattern_eta";
    case SweepKind::correlation:
        return "correlation";
    case SweepKind::crb:
        return "crb";
    }
    return "snr";
}

SweepKind sweep_kind_from_string(std::string_view name)
{
    for (auto k : {SweepKind::snr, SweepKind::snapshots, SweepKind::beampattern_rho, SweepKind::beampattern_eta,
                   SweepKind::correlation, SweepKind::crb})
        if (to_string(k) == name)
            return k;
    throw config_error("unknown sweep '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const
{
    if (trials < 1)
        throw config_error("trials must be at least 1");
    if (sweep_values.empty())
        throw config_error("sweep_values must not be empty");
    if (methods.empty())
        throw config_error("methods must not be empty");
    if (Q < 4)
        throw config_error("Q must be at least 4");
    if (S < 2)
        throw config_error("S must be at least 2");
    if (!(c_deg > 0.0) || !(fine_step_deg > 0.0) || fine_step_deg > 2.0 * c_deg)
        throw config_error("need c_deg > 0 and 0 < fine_step_deg <= 2 c_deg");
    if (!(soi_half_width_deg > 0.0))
        throw config_error("soi_half_width_deg must be positive");
    if (tracked_interferers < 0)
        throw config_error("tracked_interferers must be nonnegative");
    if (scenario.geometry.empty())
        throw config_error("array geometry has no elements");
    if (scenario.interferer_doas_deg.size() != scenario.inr_db.size())
        throw config_error("interferer_doas_deg and inr_db differ in length");
    if (scenario.snapshots < 1)
        throw config_error("snapshots must be at least 1");
    if (!(scenario.noise_power >= 0.0))
        throw config_error("noise_power must be nonnegative");
    scenario.mismatch.validate();
    if (sweep == SweepKind::snapshots)
        for (double v : sweep_values)
            if (!(v >= 1.0) || v != std::floor(v))
                throw config_error("snapshot sweep values must be positive integers");
    if (sweep == SweepKind::beampattern_rho)
        for (double v : sweep_values)
            if (!(v >= 0.0))
                throw config_error("rho values must be nonnegative");
    if (sweep == SweepKind::beampattern_eta)
        for (double v : sweep_values)
            if (!(v > 0.0))
                throw config_error("eta values must be positive");
    if (!(fixed_eta > 0.0) || !(fixed_rho >= 0.0))
        throw config_error("need fixed_eta > 0 and fixed_rho >= 0");
    if (sweep == SweepKind::crb && trials < 10)
        throw config_error("the crb sweep needs at least 10 trials");
}

PpbssConfig ExperimentConfig::ppbss_config() const
{
    PpbssConfig p;
    if (tracked_interferers > 0)
        p.tracking.interferer_count = static_cast<std::size_t>(tracked_interferers);
    else
        p.tracking.interferer_count.reset();
    p.tracking.half_width_deg = c_deg;
    p.tracking.step_deg = fine_step_deg;
    p.tracking.grid_size = Q;
    p.soi.center_deg = scenario.soi_doa_deg;
    p.soi.half_width_deg = soi_half_width_deg;
    p.soi.samples = S;
    return p;
}

ExperimentConfig ExperimentConfig::at_sweep_value(double value) const
{
    ExperimentConfig c = *this;
    switch (sweep)
    {
    case SweepKind::snr:
    case SweepKind::correlation:
        c.scenario.snr_db = value;
        break;
    case SweepKind::snapshots:
        c.scenario.snapshots = static_cast<Index>(std::llround(value));
        break;
    case SweepKind::crb:
        c.scenario.inr_db.assign(c.scenario.interferer_doas_deg.size(), value);
        c.scenario.snr_db = soi_snr_db;
        break;
    case SweepKind::beampattern_rho:
    case SweepKind::beampattern_eta:
        break;
    }
    return c;
}

namespace
{

struct PresetDef
{
    const char *name;
    const char *alias;
    std::function<void(ExperimentConfig &)> apply;
};

const std::vector<PresetDef> &presets()
{
    static const std::vector<PresetDef> defs = [] {
        const auto snr_axis = range(-20.0, 40.0, 5.0);
        const auto k_axis = range(10.0, 100.0, 10.0);
        const std::vector<MethodTag> all{MethodTag::ppbss, MethodTag::optimal, MethodTag::smi,
                                         MethodTag::diagonal_loading};
        auto mc = [=](MismatchKind kind, bool snapshots, Index k) {
            return [=](ExperimentConfig &c) {
                c.scenario.mismatch.kind = kind;
                c.scenario.snapshots = k;
                c.methods = all;
                if (snapshots)
                {
                    c.sweep = SweepKind::snapshots;
                    c.sweep_values = k_axis;
                    c.scenario.snr_db = 20.0;
                }
                else
                {
                    c.sweep = SweepKind::snr;
                    c.sweep_values = snr_axis;
                }
            };
        };
        std::vector<PresetDef> d;
        d.push_back({"correlation", "fig1", [](ExperimentConfig &c) {
                         c.sweep = SweepKind::correlation;
                         c.sweep_values = {-20.0};
                         c.trials = 10;
                         c.methods = {MethodTag::ppbss};
                     }});
        d.push_back({"power_method", "fig2", [](ExperimentConfig &c) {
                         c.sweep = SweepKind::snr;
                         c.sweep_values = {10.0};
                         c.methods = {MethodTag::ppbss};
                     }});
        d.push_back({"beampattern_rho", "fig3", [](ExperimentConfig &c) {
                         c.sweep = SweepKind::beampattern_rho;
                         c.sweep_values = {0.1, 0.5, 0.9};
                         c.scenario.snr_db = -10.0;
                         c.trials = 1;
                         c.methods = {MethodTag::ppbss};
                     }});
        d.push_back({"beampattern_eta", "fig4", [](ExperimentConfig &c) {
                         c.sweep = SweepKind::beampattern_eta;
                         c.sweep_values = {0.1, 1.0, 10.0};
                         c.scenario.snr_db = -10.0;
                         c.trials = 1;
                         c.methods = {MethodTag::ppbss};
                     }});
        d.push_back({"look_snr", "fig5", mc(MismatchKind::look_direction, false, 100)});
        d.push_back({"look_snapshots", "fig6", mc(MismatchKind::look_direction, true, 100)});
        d.push_back({"random_sv_snr", "fig7", mc(MismatchKind::random_sv, false, 100)});
        d.push_back({"random_sv_snapshots", "fig8", mc(MismatchKind::random_sv, true, 100)});
        d.push_back({"gain_phase_snr", "fig9", mc(MismatchKind::gain_phase, false, 100)});
        d.push_back({"gain_phase_snapshots", "fig10", mc(MismatchKind::gain_phase, true, 100)});
        d.push_back({"geometry_snr", "fig11", mc(MismatchKind::geometry, false, 50)});
        d.push_back({"geometry_snapshots", "fig12", mc(MismatchKind::geometry, true, 100)});
        d.push_back({"crb", "", [](ExperimentConfig &c) {
                         c.sweep = SweepKind::crb;
                         c.sweep_values = range(-20.0, 30.0, 5.0);
                         c.methods = {MethodTag::ppbss};
                     }});
        return d;
    }();
    return defs;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const auto &p : presets())
        out.emplace_back(p.name);
    return out;
}

ExperimentConfig make_preset(std::string_view name)
{
    for (const auto &p : presets())
    {
        if (name == p.name || (*p.alias && name == p.alias))
        {
            ExperimentConfig c;
            c.name = p.name;
            p.apply(c);
            return c;
        }
    }
    throw config_error("unknown preset '" + std::string(name) + "'");
}

void apply_flat_config(ExperimentConfig &c, const FlatConfig &f)
{
    if (f.has("preset"))
    {
        const std::filesystem::path out = c.output_dir;
        c = make_preset(f.get_string("preset"));
        c.output_dir = out;
    }

    using Setter = std::function<void(const std::string &)>;
    auto &sc = c.scenario;
    const std::map<std::string, Setter> setters{
        {"preset", [](const std::string &) {}},
        {"name", [&](const std::string &k) { c.name = f.get_string(k); }},
        {"sweep", [&](const std::string &k) { c.sweep = sweep_kind_from_string(f.get_string(k)); }},
        {"sweep_values", [&](const std::string &k) { c.sweep_values = f.get_double_list(k); }},
        {"trials", [&](const std::string &k) { c.trials = static_cast<int>(f.get_int(k)); }},
        {"seed",
         [&](const std::string &k) {
             const std::string s = f.get_string(k);
             char *end = nullptr;
             c.seed = std::strtoull(s.c_str(), &end, 10);
             if (s.empty() || *end != '\0' || s.front() == '-')
                 throw config_error("seed must be an unsigned integer");
         }},
        {"methods",
         [&](const std::string &k) {
             c.methods.clear();
             for (const auto &m : f.get_string_list(k))
                 c.methods.push_back(method_from_string(m));
         }},
        {"output_dir", [&](const std::string &k) { c.output_dir = f.get_string(k); }},
        {"Q", [&](const std::string &k) { c.Q = f.get_int(k); }},
        {"S", [&](const std::string &k) { c.S = f.get_int(k); }},
        {"c_deg", [&](const std::string &k) { c.c_deg = f.get_double(k); }},
        {"fine_step_deg", [&](const std::string &k) { c.fine_step_deg = f.get_double(k); }},
        {"soi_half_width_deg", [&](const std::string &k) { c.soi_half_width_deg = f.get_double(k); }},
        {"tracked_interferers", [&](const std::string &k) { c.tracked_interferers = f.get_int(k); }},
        {"loading_factor", [&](const std::string &k) { c.loading_factor = f.get_double(k); }},
        {"fixed_eta", [&](const std::string &k) { c.fixed_eta = f.get_double(k); }},
        {"fixed_rho", [&](const std::string &k) { c.fixed_rho = f.get_double(k); }},
        {"soi_snr_db", [&](const std::string &k) { c.soi_snr_db = f.get_double(k); }},
        {"threads", [&](const std::string &k) { c.threads = static_cast<unsigned>(f.get_int(k)); }},
        {"elements",
         [&](const std::string &k) {
             const auto n = f.get_int(k);
             if (n < 1)
                 throw config_error("elements must be at least 1");
             sc.geometry = ArrayGeometry::uniform_linear(n, f.has("spacing") ? f.get_double("spacing") : 0.5);
         }},
        {"spacing", [](const std::string &) {}},
        {"positions", [&](const std::string &k) { sc.geometry = ArrayGeometry(f.get_double_list(k)); }},
        {"soi_doa_deg", [&](const std::string &k) { sc.soi_doa_deg = f.get_double(k); }},
        {"snr_db", [&](const std::string &k) { sc.snr_db = f.get_double(k); }},
        {"interferer_doas_deg", [&](const std::string &k) { sc.interferer_doas_deg = f.get_double_list(k); }},
        {"inr_db", [&](const std::string &k) { sc.inr_db = f.get_double_list(k); }},
        {"noise_power", [&](const std::string &k) { sc.noise_power = f.get_double(k); }},
        {"snapshots", [&](const std::string &k) { sc.snapshots = f.get_int(k); }},
        {"mismatch", [&](const std::string &k) { sc.mismatch.kind = mismatch_kind_from_string(f.get_string(k)); }},
        {"look_bound_deg", [&](const std::string &k) { sc.mismatch.look_bound_deg = f.get_double(k); }},
        {"epsilon_bound", [&](const std::string &k) { sc.mismatch.epsilon_bound = f.get_double(k); }},
        {"gain_std", [&](const std::string &k) { sc.mismatch.gain_std = f.get_double(k); }},
        {"phase_std", [&](const std::string &k) { sc.mismatch.phase_std = f.get_double(k); }},
        {"position_bound", [&](const std::string &k) { sc.mismatch.position_bound = f.get_double(k); }},
    };
    for (const auto &key : f.keys())
    {
        const auto it = setters.find(key);
        if (it == setters.end())
            throw config_error("unknown config key '" + key + "'");
        try
        {
            it->second(key);
        }
        catch (const Error &e)
        {
            if (e.code() == ErrorCode::config)
                throw;
            throw config_error("invalid value for '" + key + "': " + e.what());
        }
    }
    if (f.has("spacing") && !f.has("elements"))
        sc.geometry = ArrayGeometry::uniform_linear(sc.geometry.element_count(), f.get_double("spacing"));
}

ExperimentConfig experiment_config_from(const FlatConfig &flat)
{
    ExperimentConfig c;
    apply_flat_config(c, flat);
    return c;
}

TrialOutcome run_trial(const ExperimentConfig &config, int trial_index)
{
    if (trial_index < 0)
        throw Error(ErrorCode::invalid_argument, "trial index must be nonnegative");
    const auto t = static_cast<std::uint64_t>(trial_index);
    RandomStream mis = RandomStream::for_trial(config.seed, t, StreamId::mismatch);
    RandomStream snap = RandomStream::for_trial(config.seed, t, StreamId::snapshots);

    TrialOutcome out;
    out.truth = realize_scenario(config.scenario, mis);
    const SnapshotSet snapshots = generate_snapshots(out.truth, snap);
    const HermitianMatrix scm = sample_covariance(snapshots);
    const auto &geom = out.truth.geometry;

    for (MethodTag m : config.methods)
    {
        MethodOutcome mo;
        mo.method = m;
        try
        {
            BeamformerResult r;
            switch (m)
            {
            case MethodTag::ppbss:
                r = ppbss_beamformer(snapshots, geom, config.ppbss_config());
                break;
            case MethodTag::optimal:
                r = optimal_beamformer(out.truth);
                break;
            case MethodTag::smi:
                r = smi_beamformer(scm, geom, config.scenario.soi_doa_deg);
                break;
            case MethodTag::diagonal_loading:
                r = diagonal_loading_beamformer(scm, geom, config.scenario.soi_doa_deg, out.truth.noise_power,
                                                config.loading_factor);
                break;
            }
            r.output_sinr_db = output_sinr_db(r.weights, out.truth);
            mo.result = std::move(r);
        }
        catch (const Error &e)
        {
            mo.failure = e.code();
            mo.message = e.what();
        }
        out.methods.push_back(std::move(mo));
    }
    return out;
}

std::vector<TrialRecord> trial_records(const ExperimentConfig &config, int trial_index, double sweep_value,
                                       const TrialOutcome &outcome)
{
    double opt = nan_value;
    try
    {
        opt = optimal_sinr_db(outcome.truth);
    }
    catch (const Error &)
    {
    }

    std::vector<TrialRecord> rows;
    for (const auto &mo : outcome.methods)
    {
        TrialRecord r;
        r.seed = config.seed;
        r.trial = trial_index;
        r.method = mo.method;
        r.sweep_value = sweep_value;
        r.optimal_sinr_db = opt;
        if (!mo.result)
        {
            r.status = std::string(to_string(*mo.failure));
            r.sinr_db = r.distortion = nan_value;
            rows.push_back(std::move(r));
            continue;
        }
        const auto &res = *mo.result;
        r.sinr_db = res.output_sinr_db;
        r.distortion = res.distortion();
        if (res.diagnostics)
        {
            const auto &d = *res.diagnostics;
            r.mu_hat = d.stats.mu_hat;
            r.zeta_hat = d.stats.zeta_hat;
            r.eta_tilde = d.stats.eta_tilde;
            r.rho_tilde = d.stats.rho_tilde;
            r.c_rank = d.c_rank;
            r.kappa = d.power.eigenvalue;
            r.kappa_evd = d.soi_covariance.eigenvalues().maxCoeff();
            r.iterations = d.power.iterations;
            for (const auto &track : d.tracking.tracks)
                r.est_doas.push_back(track.mean_estimate());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord> &rows)
{
    std::vector<AggregateRow> out;
    std::vector<double> sums;
    for (const auto &r : rows)
    {
        std::size_t i = 0;
        while (i < out.size() && !(out[i].sweep_value == r.sweep_value && out[i].method == r.method))
            ++i;
        if (i == out.size())
        {
            out.push_back({r.sweep_value, r.method, 0.0, 0, 0});
            sums.push_back(0.0);
        }
        if (r.ok())
        {
            sums[i] += r.sinr_db;
            ++out[i].trials_used;
        }
        else
        {
            ++out[i].excluded;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].mean_sinr_db = out[i].trials_used ? sums[i] / out[i].trials_used : nan_value;
    return out;
}

namespace
{

const std::vector<std::string> trial_header{
    "seed",     "trial",     "method",    "sweep_value", "status", "sinr_db", "optimal_sinr_db", "distortion", "mu_hat",
    "zeta_hat", "eta_tilde", "rho_tilde", "c_rank",      "kappa",  "kappa_evd", "iterations",    "est_doas"};

const std::vector<std::string> aggregate_header{"sweep_value", "method", "mean_sinr_db", "trials_used", "excluded"};

CsvTable aggregate_table(const std::vector<AggregateRow> &rows)
{
    CsvTable t{aggregate_header, {}};
    for (const auto &a : rows)
        t.rows.push_back({format_double(a.sweep_value), std::string(to_string(a.method)),
                          format_double(a.mean_sinr_db), std::to_string(a.trials_used), std::to_string(a.excluded)});
    return t;
}

} // namespace

void write_trial_csv(const std::filesystem::path &path, const std::vector<TrialRecord> &rows)
{
    CsvTable t{trial_header, {}};
    for (const auto &r : rows)
    {
        std::string doas;
        for (std::size_t i = 0; i < r.est_doas.size(); ++i)
            doas += (i ? ";" : "") + format_double(r.est_doas[i]);
        t.rows.push_back({std::to_string(r.seed), std::to_string(r.trial), std::string(to_string(r.method)),
                          format_double(r.sweep_value), r.status, format_double(r.sinr_db),
                          format_double(r.optimal_sinr_db), format_double(r.distortion), format_double(r.mu_hat),
                          format_double(r.zeta_hat), format_double(r.eta_tilde), format_double(r.rho_tilde),
                          std::to_string(r.c_rank), format_double(r.kappa), format_double(r.kappa_evd),
                          std::to_string(r.iterations), doas});
    }
    write_csv(path, t);
}

std::vector<TrialRecord> read_trial_csv(const std::filesystem::path &path)
{
    const CsvTable t = read_csv(path);
    if (t.header != trial_header)
        throw Error(ErrorCode::io, "'" + path.string() + "' does not have the trial CSV schema");
    auto num = [](const std::string &s) { return parse_double(s, "trial CSV field"); };
    std::vector<TrialRecord> rows;
    for (const auto &f : t.rows)
    {
        TrialRecord r;
        r.seed = std::strtoull(f[0].c_str(), nullptr, 10);
        r.trial = static_cast<int>(parse_int(f[1], "trial"));
        r.method = method_from_string(f[2]);
        r.sweep_value = num(f[3]);
        r.status = f[4];
        r.sinr_db = num(f[5]);
        r.optimal_sinr_db = num(f[6]);
        r.distortion = num(f[7]);
        r.mu_hat = num(f[8]);
        r.zeta_hat = num(f[9]);
        r.eta_tilde = num(f[10]);
        r.rho_tilde = num(f[11]);
        r.c_rank = parse_int(f[12], "c_rank");
        r.kappa = num(f[13]);
        r.kappa_evd = num(f[14]);
        r.iterations = static_cast<int>(parse_int(f[15], "iterations"));
        std::istringstream doas(f[16]);
        std::string item;
        while (std::getline(doas, item, ';'))
            r.est_doas.push_back(num(item));
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_aggregate_csv(const std::filesystem::path &path, const std::vector<AggregateRow> &rows)
{
    write_csv(path, aggregate_table(rows));
}

void verify_aggregate_csv(const std::filesystem::path &trials_csv, const std::filesystem::path &aggregate_csv)
{
    const CsvTable expected = aggregate_table(aggregate(read_trial_csv(trials_csv)));
    const CsvTable stored = read_csv(aggregate_csv);
    if (stored.header != expected.header)
        throw Error(ErrorCode::io, "aggregate CSV header differs from the schema");
    if (stored.rows.size() != expected.rows.size())
        throw Error(ErrorCode::io, "aggregate CSV has " + std::to_string(stored.rows.size()) + " rows, expected " +
                                       std::to_string(expected.rows.size()));
    for (std::size_t i = 0; i < stored.rows.size(); ++i)
        if (stored.rows[i] != expected.rows[i])
            throw Error(ErrorCode::io, "aggregate row " + std::to_string(i + 1) + " does not match the trial rows");
}

unsigned worker_count(unsigned requested)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("BEAMLAB_THREADS"))
    {
        char *end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0)
            n = std::min(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

namespace
{

// Runs task(i) for i in [0, count) on `workers` threads. Exceptions are
// rethrown in task order after all workers finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &task)
{
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
        {
            try
            {
                task(i);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace

std::vector<TrialRecord> run_monte_carlo(const ExperimentConfig &config, unsigned workers)
{
    config.validate();
    const std::size_t V = config.sweep_values.size();
    const std::size_t T = static_cast<std::size_t>(config.trials);
    std::vector<ExperimentConfig> per_value;
    for (double v : config.sweep_values)
        per_value.push_back(config.at_sweep_value(v));

    std::vector<std::vector<TrialRecord>> slots(V * T);
    parallel_for(V * T, std::max(1u, workers), [&](std::size_t i) {
        const std::size_t v = i / T;
        const int trial = static_cast<int>(i % T);
        slots[i] = trial_records(per_value[v], trial, config.sweep_values[v], run_trial(per_value[v], trial));
    });

    std::vector<TrialRecord> rows;
    for (auto &s : slots)
        for (auto &r : s)
            rows.push_back(std::move(r));
    return rows;
}

NullDepthReport beampattern_study(const ExperimentConfig &config, int trial_index,
                                  const std::filesystem::path *output_dir)
{
    config.validate();
    if (config.sweep != SweepKind::beampattern_rho && config.sweep != SweepKind::beampattern_eta)
        throw config_error("beampattern study needs sweep = beampattern_rho or beampattern_eta");

    const auto t = static_cast<std::uint64_t>(trial_index);
    RandomStream mis = RandomStream::for_trial(config.seed, t, StreamId::mismatch);
    RandomStream snap = RandomStream::for_trial(config.seed, t, StreamId::snapshots);
    const ScenarioTruth truth = realize_scenario(config.scenario, mis);
    const SnapshotSet snapshots = generate_snapshots(truth, snap);
    const BeamformerResult base = ppbss_beamformer(snapshots, truth.geometry, config.ppbss_config());
    const auto &d = *base.diagnostics;
    const ArrayGeometry &geom = truth.geometry;

    NullDepthReport rep;
    rep.kind = config.sweep;
    rep.values = config.sweep_values;
    rep.interferer_doas_deg = truth.actual_interferer_doas_deg;
    rep.eta = config.fixed_eta;
    rep.rho = config.fixed_rho;
    rep.eta_tilde = d.stats.eta_tilde;
    rep.rho_tilde = d.stats.rho_tilde;

    const std::vector<double> grid = range(-90.0, 90.0, 0.1);
    const Index V = static_cast<Index>(rep.values.size());
    const Index P = static_cast<Index>(rep.interferer_doas_deg.size());
    rep.exact_db.resize(V, P);
    rep.approx_db.resize(V, P);

    for (Index v = 0; v < V; ++v)
    {
        const double value = rep.values[static_cast<std::size_t>(v)];
        const double eta = config.sweep == SweepKind::beampattern_eta ? value : rep.eta;
        const double rho = config.sweep == SweepKind::beampattern_rho ? value : rep.rho;
        const HermitianMatrix r = HermitianMatrix::identity(geom.element_count(), eta) + d.preprocessing * rho;
        const CVector w = mvdr_weight(r, base.soi_sv_used);

        const auto exact = beampattern(w, grid, geom);
        const auto approx = approx_beampattern(d.preprocessing, eta, rho, base.soi_sv_used, grid, geom);
        const double exact_max = *std::max_element(exact.begin(), exact.end());
        const double approx_max = *std::max_element(approx.values.begin(), approx.values.end());
        const auto exact_at = beampattern(w, rep.interferer_doas_deg, geom);
        const auto approx_at =
            approx_beampattern(d.preprocessing, eta, rho, base.soi_sv_used, rep.interferer_doas_deg, geom);
        for (Index p = 0; p < P; ++p)
        {
            rep.exact_db(v, p) = 20.0 * std::log10(exact_at[static_cast<std::size_t>(p)] / exact_max);
            rep.approx_db(v, p) = 20.0 * std::log10(approx_at.values[static_cast<std::size_t>(p)] / approx_max);
        }

        if (output_dir)
        {
            const std::string stem = std::string(to_string(config.sweep)) + "_" + value_tag(value);
            write_beampattern_csv(*output_dir / (stem + ".csv"), grid, exact);
            write_beampattern_csv(*output_dir / (stem + "_approx.csv"), grid, approx.values);
        }
    }

    // Sort by parameter so the check does not depend on the listed order.
    std::vector<Index> order(static_cast<std::size_t>(V));
    for (Index v = 0; v < V; ++v)
        order[static_cast<std::size_t>(v)] = v;
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return rep.values[static_cast<std::size_t>(a)] < rep.values[static_cast<std::size_t>(b)]; });
    const bool deeper = config.sweep == SweepKind::beampattern_rho;
    auto monotone = [&](const RMatrix &m) {
        for (std::size_t i = 1; i < order.size(); ++i)
            for (Index p = 0; p < P; ++p)
            {
                const double prev = m(order[i - 1], p), cur = m(order[i], p);
                if (deeper ? cur > prev + 1e-9 : cur < prev - 1e-9)
                    return false;
            }
        return true;
    };
    rep.exact_monotone = monotone(rep.exact_db);
    rep.approx_monotone = monotone(rep.approx_db);
    return rep;
}

std::vector<CorrelationRecord> correlation_study(const ExperimentConfig &config,
                                                 const std::filesystem::path *output_dir)
{
    config.validate();
    std::vector<CorrelationRecord> out;
    for (double value : config.sweep_values)
    {
        ExperimentConfig c = config;
        c.sweep = SweepKind::correlation;
        c = c.at_sweep_value(value);
        for (int trial = 0; trial < c.trials; ++trial)
        {
            CorrelationRecord rec;
            rec.sweep_value = value;
            rec.trial = trial;
            const auto t = static_cast<std::uint64_t>(trial);
            RandomStream mis = RandomStream::for_trial(c.seed, t, StreamId::mismatch);
            RandomStream snap = RandomStream::for_trial(c.seed, t, StreamId::snapshots);
            const ScenarioTruth truth = realize_scenario(c.scenario, mis);
            const SnapshotSet snapshots = generate_snapshots(truth, snap);
            try
            {
                const BeamformerResult r = ppbss_beamformer(snapshots, truth.geometry, c.ppbss_config());
                const HermitianMatrix ipn = theoretical_ipnc(truth);
                const HermitianMatrix &rec_ipn = r.diagnostics->reconstructed_ipnc;
                const RMatrix cross = pearson_correlation(ipn, rec_ipn);
                rec.mean_column_correlation = cross.diagonal().mean();
                rec.min_column_correlation = cross.diagonal().minCoeff();
                if (output_dir && trial == 0)
                {
                    const Index L = ipn.dim();
                    CMatrix joint(L, 2 * L);
                    joint << ipn.matrix(), rec_ipn.matrix();
                    const std::string tag = value_tag(value);
                    write_real_matrix_csv(*output_dir / ("correlation_heatmap_" + tag + ".csv"),
                                          pearson_correlation(joint, joint));
                    write_real_matrix_csv(*output_dir / ("correlation_cross_" + tag + ".csv"), cross);
                    write_complex_matrix_csv(*output_dir / ("ipnc_true_" + tag + ".csv"), ipn.matrix());
                    write_complex_matrix_csv(*output_dir / ("ipnc_reconstructed_" + tag + ".csv"), rec_ipn.matrix());
                }
            }
            catch (const Error &e)
            {
                rec.status = std::string(to_string(e.code()));
                rec.mean_column_correlation = rec.min_column_correlation = nan_value;
            }
            out.push_back(rec);
        }
    }
    return out;
}

namespace
{

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text))
        throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
}

std::string sinr_plot_script(const ExperimentConfig &c)
{
    std::ostringstream s;
    s << "# gnuplot -p plot.gp\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output 'sinr.png'\n"
      << "set title '" << c.name << "'\n"
      << "set xlabel '" << (c.sweep == SweepKind::snapshots ? "Number of snapshots" : "Input SNR (dB)") << "'\n"
      << "set ylabel 'Output SINR (dB)'\n"
      << "set grid\nset key bottom right\n"
      << "plot ";
    for (std::size_t i = 0; i < c.methods.size(); ++i)
    {
        const std::string m(to_string(c.methods[i]));
        s << (i ? ", \\\n     " : "") << "'aggregate.csv' skip 1 using 1:(strcol(2) eq '" << m
          << "' ? $3 : NaN) with linespoints title '" << m << "'";
    }
    s << "\n";
    return s.str();
}

std::string beampattern_plot_script(const ExperimentConfig &c)
{
    std::ostringstream s;
    const std::string kind(to_string(c.sweep));
    const std::string sym = c.sweep == SweepKind::beampattern_rho ? "rho" : "eta";
    s << "# gnuplot -p plot.gp\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << kind << ".png'\n"
      << "set xlabel 'Angle (deg)'\nset ylabel 'Beampattern (dB)'\n"
      << "set xrange [-90:90]\nset yrange [-80:5]\nset grid\n"
      << "plot ";
    for (std::size_t i = 0; i < c.sweep_values.size(); ++i)
    {
        const std::string tag = value_tag(c.sweep_values[i]);
        s << (i ? ", \\\n     " : "") << "'" << kind << "_" << tag << ".csv' skip 1 using 1:2 with lines title '" << sym
          << " = " << format_double(c.sweep_values[i]) << "'";
    }
    s << "\n";
    return s.str();
}

std::string correlation_plot_script(const ExperimentConfig &c)
{
    std::ostringstream s;
    const std::string tag = value_tag(c.sweep_values.front());
    s << "# gnuplot -p plot.gp\n"
      << "set datafile separator ','\n"
      << "set terminal pngcairo size 700,600\n"
      << "set output 'correlation.png'\n"
      << "set title 'Pearson correlation, [true IPNC | reconstruction] columns'\n"
      << "set cbrange [-1:1]\nset palette defined (-1 'blue', 0 'white', 1 'red')\n"
      << "set yrange [] reverse\n"
      << "plot 'correlation_heatmap_" << tag << ".csv' skip 1 matrix with image notitle\n";
    return s.str();
}

std::string crb_plot_script()
{
    return "# gnuplot -p plot.gp\n"
           "set datafile separator ','\n"
           "set terminal pngcairo size 900,600\n"
           "set output 'crb.png'\n"
           "set xlabel 'Input SNR (dB)'\nset ylabel 'MSE (deg^2)'\n"
           "set logscale y\nset grid\n"
           "plot 'crb.csv' skip 1 using 1:2 with linespoints title 'DoA MSE', \\\n"
           "     'crb.csv' skip 1 using 1:3 with lines title 'CRB'\n";
}

} // namespace

SweepResult run_sweep(const ExperimentConfig &config)
{
    config.validate();
    const auto &dir = config.output_dir;
    ensure_writable_directory(dir);

    SweepResult res;
    auto emit = [&](const std::string &name) { res.files.push_back(dir / name); };

    switch (config.sweep)
    {
    case SweepKind::snr:
    case SweepKind::snapshots:
    {
        res.rows = run_monte_carlo(config, worker_count(config.threads));
        res.aggregate = aggregate(res.rows);
        write_trial_csv(dir / "trials.csv", res.rows);
        emit("trials.csv");
        write_aggregate_csv(dir / "aggregate.csv", res.aggregate);
        emit("aggregate.csv");
        write_text(dir / "plot.gp", sinr_plot_script(config));
        emit("plot.gp");
        break;
    }
    case SweepKind::beampattern_rho:
    case SweepKind::beampattern_eta:
    {
        res.null_depth = beampattern_study(config, 0, &dir);
        const auto &rep = *res.null_depth;
        CsvTable t{{"sweep_value", "interferer_doa_deg", "exact_null_db", "approx_null_db"}, {}};
        for (std::size_t v = 0; v < rep.values.size(); ++v)
            for (std::size_t p = 0; p < rep.interferer_doas_deg.size(); ++p)
                t.rows.push_back({format_double(rep.values[v]), format_double(rep.interferer_doas_deg[p]),
                                  format_double(rep.exact_db(static_cast<Index>(v), static_cast<Index>(p))),
                                  format_double(rep.approx_db(static_cast<Index>(v), static_cast<Index>(p)))});
        write_csv(dir / "null_depth.csv", t);
        emit("null_depth.csv");
        write_csv(dir / "null_depth_monotonicity.csv",
                  CsvTable{{"eta", "rho", "eta_tilde", "rho_tilde", "exact_monotone", "approx_monotone"},
                           {{format_double(rep.eta), format_double(rep.rho), format_double(rep.eta_tilde),
                             format_double(rep.rho_tilde), rep.exact_monotone ? "1" : "0",
                             rep.approx_monotone ? "1" : "0"}}});
        emit("null_depth_monotonicity.csv");
        write_text(dir / "plot.gp", beampattern_plot_script(config));
        emit("plot.gp");
        break;
    }
    case SweepKind::correlation:
    {
        res.correlation = correlation_study(config, &dir);
        CsvTable t{{"sweep_value", "trial", "status", "mean_column_correlation", "min_column_correlation"}, {}};
        for (const auto &r : res.correlation)
            t.rows.push_back({format_double(r.sweep_value), std::to_string(r.trial), r.status,
                              format_double(r.mean_column_correlation), format_double(r.min_column_correlation)});
        write_csv(dir / "correlation.csv", t);
        emit("correlation.csv");
        write_text(dir / "plot.gp", correlation_plot_script(config));
        emit("plot.gp");
        break;
    }
    case SweepKind::crb:
    {
        DoaMseConfig m;
        m.scenario = config.scenario;
        m.snr_db_values = config.sweep_values;
        m.soi_snr_db = config.soi_snr_db;
        m.trials = config.trials;
        m.seed = config.seed;
        m.tracking = config.ppbss_config().tracking;
        m.soi_half_width_deg = config.soi_half_width_deg;
        write_crb_csv(dir / "crb.csv", doa_mse_experiment(m));
        emit("crb.csv");
        write_text(dir / "plot.gp", crb_plot_script());
        emit("plot.gp");
        break;
    }
    }
    return res;
}

} // namespace beamlab
