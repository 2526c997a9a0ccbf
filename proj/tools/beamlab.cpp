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

#include "beamlab/csv.hpp"
#include "beamlab/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

using namespace beamlab;

namespace
{

struct Options
{
    std::string config_path;
    std::string preset;
    std::string out;
    std::string methods;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
};

void add_common(CLI::App *cmd, Options &o)
{
    cmd->add_option("--config", o.config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset, "Named preset (see 'beamlab presets')");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per sweep value");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--methods", o.methods, "Comma separated: ppbss,optimal,smi,diagonal_loading");
}

ExperimentConfig build_config(const Options &o, std::optional<SweepKind> required, const char *default_preset)
{
    ExperimentConfig c;
    const bool explicit_source = !o.preset.empty() || !o.config_path.empty();
    if (!o.preset.empty())
        c = make_preset(o.preset);
    else if (default_preset && o.config_path.empty())
        c = make_preset(default_preset);
    if (!o.config_path.empty())
        apply_flat_config(c, FlatConfig::load(o.config_path));
    if (o.seed)
        c.seed = *o.seed;
    if (o.trials)
        c.trials = *o.trials;
    if (!o.out.empty())
        c.output_dir = o.out;
    if (!o.methods.empty())
    {
        c.methods.clear();
        std::istringstream in(o.methods);
        std::string m;
        while (std::getline(in, m, ','))
            if (!m.empty())
                c.methods.push_back(method_from_string(m));
    }
    if (required && c.sweep != *required)
    {
        const bool beampattern_cmd = *required == SweepKind::beampattern_rho;
        const bool is_beampattern = c.sweep == SweepKind::beampattern_rho || c.sweep == SweepKind::beampattern_eta;
        if (!(beampattern_cmd && is_beampattern))
        {
            if (explicit_source)
                throw Error(ErrorCode::config, "configured sweep '" + std::string(to_string(c.sweep)) +
                                                   "' does not match this subcommand");
        }
    }
    c.validate();
    return c;
}

void report(const SweepResult &r, const ExperimentConfig &c)
{
    for (const auto &f : r.files)
        std::cout << "wrote " << f.string() << "\n";
    for (const auto &a : r.aggregate)
        std::cout << to_string(c.sweep) << "=" << format_double(a.sweep_value) << " method=" << to_string(a.method)
                  << " mean_sinr_db=" << format_double(a.mean_sinr_db) << " used=" << a.trials_used
                  << " excluded=" << a.excluded << "\n";
    if (r.null_depth)
    {
        const auto &n = *r.null_depth;
        std::cout << "eta=" << format_double(n.eta) << " rho=" << format_double(n.rho)
                  << " exact_monotone=" << (n.exact_monotone ? "yes" : "no")
                  << " approx_monotone=" << (n.approx_monotone ? "yes" : "no") << "\n";
    }
    if (!r.correlation.empty())
    {
        double s = 0.0;
        int n = 0;
        for (const auto &rec : r.correlation)
            if (rec.status == "ok")
            {
                s += rec.mean_column_correlation;
                ++n;
            }
        std::cout << "mean_column_correlation=" << format_double(n ? s / n : 0.0) << " trials=" << n << "\n";
    }
}

int fail(const std::string &code, const std::string &message)
{
    std::string m = message;
    for (char &ch : m)
        if (ch == '"' || ch == '\n')
            ch = '\'';
    std::cerr << "error: code=" << code << " message=\"" << m << "\"\n";
    return code == "config" || code == "usage" ? 2 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"beamlab: robust adaptive beamforming simulator"};
    app.require_subcommand(1);

    Options run_o, sweep_o, bp_o, corr_o, crb_o;
    auto *run = app.add_subcommand("run", "Monte Carlo trials of a single scenario");
    auto *sweep = app.add_subcommand("sweep", "Sweep configured by preset or config file");
    auto *bp = app.add_subcommand("beampattern", "Beampatterns over rho or eta");
    auto *corr = app.add_subcommand("correlation", "IPNC correlation heatmap");
    auto *crb = app.add_subcommand("crb", "DoA MSE against the Cramer-Rao bound");
    auto *list = app.add_subcommand("presets", "List preset names");
    add_common(run, run_o);
    add_common(sweep, sweep_o);
    add_common(bp, bp_o);
    add_common(corr, corr_o);
    add_common(crb, crb_o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return fail("usage", e.what());
    }

    try
    {
        if (list->parsed())
        {
            for (const auto &n : preset_names())
                std::cout << n << "\n";
            return 0;
        }
        ExperimentConfig c;
        if (run->parsed())
        {
            c = build_config(run_o, std::nullopt, nullptr);
            c.sweep = SweepKind::snr;
            c.sweep_values = {c.scenario.snr_db};
        }
        else if (sweep->parsed())
        {
            if (sweep_o.preset.empty() && sweep_o.config_path.empty())
                throw Error(ErrorCode::config, "sweep needs --preset or --config");
            c = build_config(sweep_o, std::nullopt, nullptr);
        }
        else if (bp->parsed())
            c = build_config(bp_o, SweepKind::beampattern_rho, "beampattern_rho");
        else if (corr->parsed())
            c = build_config(corr_o, SweepKind::correlation, "correlation");
        else
            c = build_config(crb_o, SweepKind::crb, "crb");

        const SweepResult r = run_sweep(c);
        report(r, c);
        return 0;
    }
    catch (const Error &e)
    {
        return fail(std::string(to_string(e.code())), e.what());
    }
    catch (const std::exception &e)
    {
        return fail("internal", e.what());
    }
}
