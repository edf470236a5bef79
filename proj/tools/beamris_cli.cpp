// SPDX-License-Identifier: Apache-2.0
//
// beamris: multi-RIS aided mmWave beamspace MIMO simulation and optimization
// Copyright (C) 2026 The beamris authors
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

// Command line front end: single trials, parameter sweeps and convergence traces.

#include "beamris/harness.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>

namespace
{
    struct Overrides
    {
        std::string config_path;
        std::optional<std::size_t> n_users;
        std::optional<std::size_t> m_total;
        std::optional<std::size_t> n_selected_beams;
        std::optional<double> power_dbm;
        std::optional<std::size_t> n_particles;
        std::optional<std::size_t> n_iterations;
        std::uint64_t seed = 1;
    };

    void add_common(CLI::App *cmd, Overrides &o)
    {
        cmd->add_option("--config", o.config_path, "JSON config file (flags override its values)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--n-users", o.n_users, "Number of users K");
        cmd->add_option("--m-total", o.m_total, "Total RIS unit cells M (split evenly over the RISs)");
        cmd->add_option("--n-selected-beams", o.n_selected_beams, "Number of selected beams N_s");
        cmd->add_option("--power-dbm", o.power_dbm, "Total transmit power [dBm]");
        cmd->add_option("--particles", o.n_particles, "Swarm size");
        cmd->add_option("--iterations", o.n_iterations, "Optimizer iterations");
        cmd->add_option("--seed", o.seed, "Top-level seed");
    }

    beamris::RunConfig resolve(const Overrides &o)
    {
        beamris::RunConfig c;
        if (!o.config_path.empty())
            c = beamris::load_config(o.config_path, c);
        if (o.n_users)
            c.scenario.n_users = *o.n_users;
        if (o.m_total)
            beamris::set_total_uc(c.scenario, *o.m_total);
        if (o.n_selected_beams)
            c.scenario.n_selected_beams = *o.n_selected_beams;
        if (o.power_dbm)
            c.scenario.total_power = beamris::dbm_to_watt(*o.power_dbm);
        if (o.n_particles)
            c.pso.n_particles = *o.n_particles;
        if (o.n_iterations)
            c.pso.n_iterations = *o.n_iterations;
        return c;
    }

    void print_progress(std::size_t done, std::size_t total)
    {
        if (done == total || done % 10 == 0)
            std::fprintf(stderr, "\r%zu/%zu trials", done, total);
        if (done == total)
            std::fprintf(stderr, "\n");
    }

    int fail(const std::string &kind, const std::string &message)
    {
        nlohmann::json e{{"error", kind}, {"message", message}};
        std::cerr << e.dump() << '\n';
        return 2;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Multi-RIS beamspace MIMO simulator and swarm optimizer"};
    app.require_subcommand(1);

    Overrides trial_o, sweep_o, conv_o;
    std::size_t trial_index = 0;
    std::string trial_out;

    auto *trial = app.add_subcommand("trial", "Run one channel realization and optimizer run");
    add_common(trial, trial_o);
    trial->add_option("--trial-index", trial_index, "Trial index (selects the derived seeds)");
    trial->add_option("--out", trial_out, "Write the per-iteration trace CSV here");

    std::string axis_name = "n_users";
    std::vector<std::size_t> sweep_values;
    std::size_t sweep_trials = beamris::kDeskTrials;
    std::size_t sweep_jobs = 1;
    std::string sweep_out = "sweep.csv";
    bool full_scale = false;

    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one parameter");
    add_common(sweep, sweep_o);
    sweep->add_option("--axis", axis_name, "n_users | n_selected_beams | m_total | n_iterations");
    sweep->add_option("--values", sweep_values, "Sweep values")->required()->delimiter(',');
    sweep->add_option("--trials", sweep_trials, "Trials per sweep value");
    sweep->add_flag("--full-scale", full_scale, "Use 1000 trials per value");
    sweep->add_option("--jobs", sweep_jobs, "Concurrent trials");
    sweep->add_option("--out", sweep_out, "Detail CSV path (aggregate and metadata are written next to it)");

    std::vector<std::size_t> conv_values{64, 128, 256};
    std::size_t conv_trials = beamris::kDeskTrials;
    std::size_t conv_jobs = 1;
    std::string conv_out = "convergence.csv";

    auto *conv = app.add_subcommand("convergence", "Mean best-rate trace versus iteration for several M");
    add_common(conv, conv_o);
    conv->add_option("--values", conv_values, "Total UC counts M")->delimiter(',');
    conv->add_option("--trials", conv_trials, "Trials per M");
    conv->add_option("--jobs", conv_jobs, "Concurrent trials");
    conv->add_option("--out", conv_out, "Output CSV path");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        return fail("usage", e.what());
    }

    try
    {
        if (*trial)
        {
            const auto cfg = resolve(trial_o);
            auto scenario = cfg.scenario;
            auto pso = cfg.pso;
            scenario.rng_seed = beamris::derive_seed(trial_o.seed, 0, 0);
            pso.rng_seed = beamris::derive_seed(trial_o.seed, 0, 1);
            scenario.validate();
            pso.validate();
            const auto r = beamris::run_trial(scenario, pso, trial_index);
            std::cout << "pso_rate_bps_hz," << beamris::format_double(r.pso_rate) << '\n'
                      << "random_rate_bps_hz," << beamris::format_double(r.random_rate) << '\n';
            if (!trial_out.empty())
                beamris::emit_trace_csv(r.trace, trial_out);
        }
        else if (*sweep)
        {
            beamris::ExperimentSpec spec;
            spec.base = resolve(sweep_o);
            spec.axis = beamris::parse_sweep_axis(axis_name);
            spec.values = sweep_values;
            spec.n_trials = full_scale ? beamris::kFullTrials : sweep_trials;
            spec.seed = sweep_o.seed;
            spec.jobs = sweep_jobs;
            const auto result = beamris::run_sweep(spec, print_progress);
            const auto paths = beamris::emit_csv(result, sweep_out);
            beamris::emit_metadata(result, sweep_out);
            for (std::size_t v = 0; v < result.values.size(); ++v)
                std::cout << axis_name << '=' << result.values[v] << " mean=" << beamris::format_double(result.mean(v))
                          << " stderr=" << beamris::format_double(result.std_error(v)) << '\n';
            std::cout << "wrote " << paths.detail.string() << " and " << paths.aggregate.string() << '\n';
        }
        else if (*conv)
        {
            beamris::ExperimentSpec spec;
            spec.base = resolve(conv_o);
            spec.axis = beamris::SweepAxis::m_total;
            spec.values = conv_values;
            spec.n_trials = conv_trials;
            spec.seed = conv_o.seed;
            spec.jobs = conv_jobs;
            const auto result = beamris::run_sweep(spec, print_progress);
            beamris::emit_convergence_csv(result, conv_out);
            for (std::size_t v = 0; v < result.values.size(); ++v)
            {
                const auto trace = result.mean_trace(v);
                std::cout << "m_total=" << result.values[v] << " random=" << beamris::format_double(trace.front())
                          << " final=" << beamris::format_double(trace.back())
                          << " iters_to_95pct=" << beamris::iterations_to_reach(trace, 0.95) << '\n';
            }
            std::cout << "wrote " << conv_out << '\n';
        }
    }
    catch (const std::invalid_argument &e)
    {
        return fail("invalid_argument", e.what());
    }
    catch (const std::exception &e)
    {
        return fail("runtime", e.what());
    }
    return 0;
}
