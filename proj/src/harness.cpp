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

#include "beamris/harness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace beamris
{
    std::string_view to_string(SweepAxis axis)
    {
        switch (axis)
        {
        case SweepAxis::n_users:
            return "n_users";
        case SweepAxis::n_selected_beams:
            return "n_selected_beams";
        case SweepAxis::m_total:
            return "m_total";
        case SweepAxis::n_iterations:
            return "n_iterations";
        }
        return "unknown";
    }

    SweepAxis parse_sweep_axis(std::string_view name)
    {
        for (auto a : {SweepAxis::n_users, SweepAxis::n_selected_beams, SweepAxis::m_total, SweepAxis::n_iterations})
            if (to_string(a) == name)
                return a;
        throw std::invalid_argument("unknown sweep axis '" + std::string(name) +
                                    "' (expected n_users, n_selected_beams, m_total or n_iterations)");
    }

    RunConfig ExperimentSpec::derive(std::size_t value_index) const
    {
        if (value_index >= values.size())
            throw std::out_of_range("sweep value index out of range.");
        RunConfig c = base;
        const std::size_t v = values[value_index];
        switch (axis)
        {
        case SweepAxis::n_users:
            c.scenario.n_users = v;
            break;
        case SweepAxis::n_selected_beams:
            c.scenario.n_selected_beams = v;
            break;
        case SweepAxis::m_total:
            set_total_uc(c.scenario, v);
            break;
        case SweepAxis::n_iterations:
            c.pso.n_iterations = v;
            break;
        }
        c.scenario.rng_seed = derive_seed(seed, value_index, 0);
        c.pso.rng_seed = derive_seed(seed, value_index, 1);
        return c;
    }

    void ExperimentSpec::validate() const
    {
        if (values.empty())
            throw std::invalid_argument("sweep needs at least one value.");
        if (n_trials == 0)
            throw std::invalid_argument("n_trials must be positive.");
        if (jobs == 0)
            throw std::invalid_argument("jobs must be positive.");
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            try
            {
                const RunConfig c = derive(i);
                c.scenario.validate();
                c.pso.validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument(std::string(to_string(axis)) + "=" + std::to_string(values[i]) + ": " +
                                            e.what());
            }
        }
    }

    TrialResult run_trial(const ScenarioConfig &scenario, const PsoConfig &pso, std::size_t trial_index)
    {
        Rng channel_rng(derive_seed(scenario.rng_seed, trial_index));
        Rng pso_rng(derive_seed(pso.rng_seed, trial_index));
        const auto realization = draw_realization(scenario, channel_rng);
        auto opt = optimize(realization.channels, scenario, pso, pso_rng);

        TrialResult r;
        r.pso_rate = opt.best_rate;
        r.random_rate = opt.trace.front();
        r.initial_best = opt.initial_quality.max();
        r.trace = std::move(opt.trace);
        return r;
    }

    double SweepResult::mean(std::size_t v) const
    {
        const auto &t = trials.at(v);
        double s = 0.0;
        for (const auto &r : t)
            s += r.pso_rate;
        return t.empty() ? 0.0 : s / static_cast<double>(t.size());
    }

    double SweepResult::std_error(std::size_t v) const
    {
        const auto &t = trials.at(v);
        if (t.size() < 2)
            return 0.0;
        const double mu = mean(v);
        double ss = 0.0;
        for (const auto &r : t)
            ss += (r.pso_rate - mu) * (r.pso_rate - mu);
        const double n = static_cast<double>(t.size());
        return std::sqrt(ss / (n - 1.0) / n);
    }

    double SweepResult::mean_random(std::size_t v) const
    {
        const auto &t = trials.at(v);
        double s = 0.0;
        for (const auto &r : t)
            s += r.random_rate;
        return t.empty() ? 0.0 : s / static_cast<double>(t.size());
    }

    std::vector<double> SweepResult::mean_trace(std::size_t v) const
    {
        const auto &t = trials.at(v);
        if (t.empty())
            return {};
        std::vector<double> out(t.front().trace.size(), 0.0);
        for (const auto &r : t)
            for (std::size_t i = 0; i < out.size() && i < r.trace.size(); ++i)
                out[i] += r.trace[i];
        for (auto &x : out)
            x /= static_cast<double>(t.size());
        return out;
    }

    SweepResult run_sweep(const ExperimentSpec &spec, const ProgressFn &progress)
    {
        spec.validate();

        SweepResult result;
        result.axis = spec.axis;
        result.values = spec.values;
        result.seed = spec.seed;
        result.n_trials = spec.n_trials;
        result.config_echo = to_config_json(spec.base);

        std::vector<RunConfig> configs;
        for (std::size_t v = 0; v < spec.values.size(); ++v)
            configs.push_back(spec.derive(v));
        result.trials.assign(spec.values.size(), std::vector<TrialResult>(spec.n_trials));

        const std::size_t total = spec.values.size() * spec.n_trials;
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> done{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&]() {
            for (std::size_t task = next++; task < total; task = next++)
            {
                const std::size_t v = task / spec.n_trials;
                const std::size_t t = task % spec.n_trials;
                try
                {
                    result.trials[v][t] = run_trial(configs[v].scenario, configs[v].pso, t);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = total;
                    return;
                }
                const std::size_t finished = ++done;
                if (progress)
                    progress(finished, total);
            }
        };

        const std::size_t n_threads = std::min(spec.jobs, total);
        if (n_threads <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t i = 0; i < n_threads; ++i)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);
        return result;
    }

    std::string format_double(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return buf;
    }

    std::filesystem::path aggregate_path_for(const std::filesystem::path &detail)
    {
        auto p = detail;
        p.replace_filename(detail.stem().string() + "_aggregate" + detail.extension().string());
        return p;
    }

    namespace
    {
        std::ofstream open_for_write(const std::filesystem::path &path)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open " + path.string() + " for writing");
            return out;
        }

        void finish(std::ofstream &out, const std::filesystem::path &path)
        {
            out.flush();
            if (!out)
                throw std::runtime_error("write failed: " + path.string());
        }
    }

    CsvPaths emit_csv(const SweepResult &result, const std::filesystem::path &detail_path)
    {
        CsvPaths paths{detail_path, aggregate_path_for(detail_path)};
        const std::string axis(to_string(result.axis));
        {
            auto out = open_for_write(paths.detail);
            out << "sweep_param,sweep_value,trial,sum_rate_bps_hz\n";
            for (std::size_t v = 0; v < result.values.size(); ++v)
                for (std::size_t t = 0; t < result.trials[v].size(); ++t)
                    out << axis << ',' << result.values[v] << ',' << t << ','
                        << format_double(result.trials[v][t].pso_rate) << '\n';
            finish(out, paths.detail);
        }
        {
            auto out = open_for_write(paths.aggregate);
            out << "sweep_value,mean,stderr,n_trials\n";
            for (std::size_t v = 0; v < result.values.size(); ++v)
                out << result.values[v] << ',' << format_double(result.mean(v)) << ','
                    << format_double(result.std_error(v)) << ',' << result.trials[v].size() << '\n';
            finish(out, paths.aggregate);
        }
        return paths;
    }

    std::filesystem::path emit_metadata(const SweepResult &result, const std::filesystem::path &detail_path)
    {
        auto path = detail_path;
        path.replace_filename(detail_path.stem().string() + "_meta.json");

        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);

        nlohmann::ordered_json doc;
        doc["timestamp"] = stamp;
        doc["seed"] = result.seed;
        doc["sweep_param"] = std::string(to_string(result.axis));
        doc["sweep_values"] = result.values;
        doc["n_trials"] = result.n_trials;
        doc["config"] = nlohmann::ordered_json::parse(result.config_echo);

        auto out = open_for_write(path);
        out << doc.dump(2) << '\n';
        finish(out, path);
        return path;
    }

    void emit_trace_csv(std::span<const double> trace, const std::filesystem::path &path)
    {
        auto out = open_for_write(path);
        out << "iteration,best_rate\n";
        for (std::size_t i = 0; i < trace.size(); ++i)
            out << i << ',' << format_double(trace[i]) << '\n';
        finish(out, path);
    }

    void emit_convergence_csv(const SweepResult &result, const std::filesystem::path &path)
    {
        auto out = open_for_write(path);
        out << to_string(result.axis) << ",iteration,best_rate\n";
        for (std::size_t v = 0; v < result.values.size(); ++v)
        {
            const auto trace = result.mean_trace(v);
            for (std::size_t i = 0; i < trace.size(); ++i)
                out << result.values[v] << ',' << i << ',' << format_double(trace[i]) << '\n';
        }
        finish(out, path);
    }

    std::size_t iterations_to_reach(std::span<const double> trace, double fraction)
    {
        if (trace.empty())
            return 0;
        const double target = fraction * trace.back();
        for (std::size_t i = 0; i < trace.size(); ++i)
            if (trace[i] >= target)
                return i;
        return trace.size() - 1;
    }
}
