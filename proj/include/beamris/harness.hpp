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

#ifndef beamris_harness_H
#define beamris_harness_H

#include "beamris/config_io.hpp"
#include "beamris/pso.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace beamris
{
    enum class SweepAxis
    {
        n_users,
        n_selected_beams,
        m_total,
        n_iterations,
    };

    std::string_view to_string(SweepAxis axis);
    SweepAxis parse_sweep_axis(std::string_view name); // throws std::invalid_argument

    // Trials per sweep point. Desk scale keeps a full sweep within minutes on one core.
    inline constexpr std::size_t kDeskTrials = 200;
    inline constexpr std::size_t kFullTrials = 1000;

    struct ExperimentSpec
    {
        RunConfig base;
        SweepAxis axis = SweepAxis::n_users;
        std::vector<std::size_t> values;
        std::size_t n_trials = kDeskTrials;
        std::uint64_t seed = 1;
        std::size_t jobs = 1;

        // Every derived config must be valid; the message names the sweep value and constraint.
        void validate() const;

        // Base config with the axis set to values[value_index] and the seeds of that sweep point
        RunConfig derive(std::size_t value_index) const;
    };

    struct TrialResult
    {
        double pso_rate = 0.0;
        double random_rate = 0.0;     // best of the random initial swarm (trace[0])
        double initial_best = 0.0;    // max of the initial qualities, recorded separately
        std::vector<double> trace;
    };

    // One channel realization plus one optimizer run. The channel stream is seeded from
    // (scenario.rng_seed, trial_index) and the optimizer stream from (pso.rng_seed, trial_index).
    TrialResult run_trial(const ScenarioConfig &scenario, const PsoConfig &pso, std::size_t trial_index);

    struct SweepResult
    {
        SweepAxis axis = SweepAxis::n_users;
        std::vector<std::size_t> values;
        std::vector<std::vector<TrialResult>> trials; // [value][trial]
        std::uint64_t seed = 0;
        std::size_t n_trials = 0;
        std::string config_echo;

        double mean(std::size_t value_index) const;
        double std_error(std::size_t value_index) const;
        double mean_random(std::size_t value_index) const;
        std::vector<double> mean_trace(std::size_t value_index) const;
    };

    // Progress callback: (finished trials, total trials). May be called from worker threads.
    using ProgressFn = std::function<void(std::size_t, std::size_t)>;

    // Runs values x n_trials trials on up to spec.jobs threads. The result does not depend on
    // the job count or completion order.
    SweepResult run_sweep(const ExperimentSpec &spec, const ProgressFn &progress = {});

    struct CsvPaths
    {
        std::filesystem::path detail;
        std::filesystem::path aggregate;
    };

    // "<stem>_aggregate<ext>" next to the detail file
    std::filesystem::path aggregate_path_for(const std::filesystem::path &detail);

    // Detail file:    sweep_param,sweep_value,trial,sum_rate_bps_hz
    // Aggregate file: sweep_value,mean,stderr,n_trials
    // Floats use 9 significant digits, LF line endings.
    CsvPaths emit_csv(const SweepResult &result, const std::filesystem::path &detail_path);

    // Seeds, timestamp and the base config, as JSON next to the detail file ("<stem>_meta.json")
    std::filesystem::path emit_metadata(const SweepResult &result, const std::filesystem::path &detail_path);

    // iteration,best_rate
    void emit_trace_csv(std::span<const double> trace, const std::filesystem::path &path);

    // m_total,iteration,best_rate  (mean trace per sweep value)
    void emit_convergence_csv(const SweepResult &result, const std::filesystem::path &path);

    // First iteration whose value reaches `fraction` of the final value (trace.size()-1 if never)
    std::size_t iterations_to_reach(std::span<const double> trace, double fraction);

    std::string format_double(double v); // %.9g
}

#endif
