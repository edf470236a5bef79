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

#include "beamris/pso.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace beamris
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        std::span<double> column_span(arma::mat &m, arma::uword col)
        {
            return {m.colptr(col), m.n_rows};
        }

        std::span<const double> column_span(const arma::mat &m, arma::uword col)
        {
            return {m.colptr(col), m.n_rows};
        }
    }

    void PsoConfig::validate() const
    {
        if (n_particles < 3)
            throw std::invalid_argument("n_particles must be >= 3 for a ring topology.");
        if (n_iterations < 1)
            throw std::invalid_argument("n_iterations must be >= 1.");
        if (inertia < 0.0 || learn_global < 0.0 || learn_local < 0.0)
            throw std::invalid_argument("inertia and learning factors must be nonnegative.");
    }

    void project_beams(std::span<double> beams, Rng &rng)
    {
        if (beams.empty())
            return;
        double peak = 0.0;
        for (double &b : beams)
        {
            b = std::abs(b);
            peak = std::max(peak, b);
        }
        if (peak == 0.0)
        {
            for (double &b : beams)
            {
                b = uniform(rng, 0.0, 1.0);
                peak = std::max(peak, b);
            }
            if (peak == 0.0)
            {
                std::fill(beams.begin(), beams.end(), 1.0);
                return;
            }
        }
        for (double &b : beams)
            b /= peak;
    }

    void project_powers(std::span<double> powers, double total_power)
    {
        if (powers.empty())
            return;
        double sum = 0.0;
        for (double &p : powers)
        {
            p = std::abs(p);
            sum += p;
        }
        if (sum == 0.0)
        {
            std::fill(powers.begin(), powers.end(), total_power / static_cast<double>(powers.size()));
            return;
        }
        for (double &p : powers)
            p = p / sum * total_power;
    }

    void project_phases(std::span<double> phases)
    {
        for (double &x : phases)
        {
            if (x >= 0.0 && x <= two_pi)
                continue;
            x = std::fmod(x, two_pi);
            if (x < 0.0)
                x += two_pi;
        }
    }

    void project_column(std::span<double> column, const ScenarioConfig &scenario, Rng &rng)
    {
        const std::size_t n = scenario.n_antennas;
        const std::size_t k = scenario.n_users;
        if (column.size() != scenario.n_variables())
            throw std::invalid_argument("particle length must equal N + K + M.");
        project_beams(column.subspan(0, n), rng);
        project_powers(column.subspan(n, k), scenario.total_power);
        project_phases(column.subspan(n + k));
    }

    std::vector<std::size_t> top_beams(std::span<const double> scores, std::size_t n_selected)
    {
        if (n_selected > scores.size())
            throw std::invalid_argument("cannot select more beams than exist.");
        std::vector<std::size_t> idx(scores.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_selected), idx.end(),
                          [&](std::size_t a, std::size_t b) {
                              return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                          });
        idx.resize(n_selected);
        std::sort(idx.begin(), idx.end());
        return idx;
    }

    Solution decode(std::span<const double> column, const ScenarioConfig &scenario)
    {
        const std::size_t n = scenario.n_antennas;
        const std::size_t k = scenario.n_users;
        const std::size_t m = scenario.total_uc();
        if (column.size() != n + k + m)
            throw std::invalid_argument("particle length must equal N + K + M.");

        Solution sol;
        sol.beam_scores = arma::vec(column.subspan(0, n).data(), n);
        sol.beam_set = BeamSelection{top_beams(column.subspan(0, n), scenario.n_selected_beams)};
        sol.powers.powers = arma::vec(column.subspan(n, k).data(), k);
        sol.phases.phases = arma::vec(column.subspan(n + k, m).data(), m);
        return sol;
    }

    Swarm init_swarm(const ScenarioConfig &scenario, const PsoConfig &cfg, Rng &rng)
    {
        const std::size_t n = scenario.n_antennas;
        const std::size_t k = scenario.n_users;
        const std::size_t n_var = scenario.n_variables();
        const std::size_t n_part = cfg.n_particles;

        Swarm s;
        s.population.set_size(n_var, n_part);
        for (std::size_t a = 0; a < n_part; ++a)
        {
            for (std::size_t i = 0; i < n; ++i)
                s.population(i, a) = uniform(rng, 0.0, 1.0);
            for (std::size_t i = n; i < n + k; ++i)
                s.population(i, a) = 1.0 - uniform(rng, 0.0, 1.0);
            for (std::size_t i = n + k; i < n_var; ++i)
                s.population(i, a) = uniform(rng, 0.0, two_pi);
        }
        s.velocity.zeros(n_var, n_part);
        for (std::size_t a = 0; a < n_part; ++a)
            project_column(column_span(s.population, a), scenario, rng);
        s.quality.set_size(n_part);
        s.quality.fill(-std::numeric_limits<double>::infinity());
        s.local_best.resize(n_part);
        return s;
    }

    void update_bests(Swarm &swarm, LocalBestMemory memory)
    {
        const std::size_t n_part = swarm.population.n_cols;
        if (swarm.quality.n_elem != n_part || n_part < 3)
            throw std::invalid_argument("update_bests: need a quality per particle and at least 3 particles.");
        swarm.local_best.resize(n_part);

        const arma::uword best = swarm.quality.index_max();
        if (swarm.quality[best] > swarm.global_best.value)
            swarm.global_best = {swarm.population.col(best), swarm.quality[best]};

        for (std::size_t a = 0; a < n_part; ++a)
        {
            const std::size_t left = (a + n_part - 1) % n_part;
            const std::size_t right = (a + 1) % n_part;
            const std::size_t pick = swarm.quality[right] > swarm.quality[left] ? right : left;
            auto &lb = swarm.local_best[a];
            if (memory == LocalBestMemory::instantaneous || swarm.quality[pick] > lb.value)
                lb = {swarm.population.col(pick), swarm.quality[pick]};
        }
    }

    void update_velocity_and_position(Swarm &swarm, const PsoConfig &cfg, const ScenarioConfig &scenario, Rng &rng)
    {
        const std::size_t n_var = swarm.population.n_rows;
        const std::size_t n_part = swarm.population.n_cols;
        if (swarm.global_best.position.n_elem != n_var || swarm.local_best.size() != n_part)
            throw std::logic_error("update_velocity_and_position: bests not available.");

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double *gb = swarm.global_best.position.memptr();
        for (std::size_t a = 0; a < n_part; ++a)
        {
            const double *lb = swarm.local_best[a].position.memptr();
            double *f = swarm.population.colptr(a);
            double *x = swarm.velocity.colptr(a);
            for (std::size_t i = 0; i < n_var; ++i)
            {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                x[i] = velocity_step(x[i], gb[i] - f[i], lb[i] - f[i], cfg.inertia, cfg.learn_global,
                                     cfg.learn_local, r1, r2);
            }
        }
        swarm.population += swarm.velocity;
        for (std::size_t a = 0; a < n_part; ++a)
            project_column(column_span(swarm.population, a), scenario, rng);
    }

    namespace
    {
        void evaluate_swarm(Swarm &swarm, const SumRateObjective &objective, const ScenarioConfig &scenario)
        {
            const std::size_t n = scenario.n_antennas;
            const std::size_t k = scenario.n_users;
            for (arma::uword a = 0; a < swarm.population.n_cols; ++a)
            {
                const auto col = column_span(std::as_const(swarm.population), a);
                const auto beams = top_beams(col.subspan(0, n), scenario.n_selected_beams);
                swarm.quality[a] = objective(beams, col.subspan(n, k), col.subspan(n + k));
            }
        }
    }

    OptimizeResult optimize(const ChannelSet &channels, const ScenarioConfig &scenario, const PsoConfig &cfg, Rng &rng,
                            const SwarmObserver &observer)
    {
        scenario.validate();
        cfg.validate();
        if (channels.n_antennas() != scenario.n_antennas || channels.n_users() != scenario.n_users ||
            channels.uc_per_ris() != scenario.uc_per_ris)
            throw std::invalid_argument("optimize: channel dimensions do not match the scenario.");

        const SumRateObjective objective(channels, scenario.noise_variance);
        Swarm swarm = init_swarm(scenario, cfg, rng);

        OptimizeResult out;
        out.trace.reserve(cfg.n_iterations + 1);

        evaluate_swarm(swarm, objective, scenario);
        update_bests(swarm, cfg.local_best);
        out.initial_quality = swarm.quality;
        out.trace.push_back(swarm.global_best.value);
        if (observer)
            observer(0, swarm);

        for (std::size_t t = 1; t <= cfg.n_iterations; ++t)
        {
            update_velocity_and_position(swarm, cfg, scenario, rng);
            evaluate_swarm(swarm, objective, scenario);
            update_bests(swarm, cfg.local_best);
            out.trace.push_back(swarm.global_best.value);
            if (observer)
                observer(t, swarm);
        }

        const auto &gb = swarm.global_best.position;
        out.best = decode({gb.memptr(), gb.n_elem}, scenario);
        out.best_rate = swarm.global_best.value;
        return out;
    }

    OptimizeResult optimize(const ChannelSet &channels, const ScenarioConfig &scenario, const PsoConfig &cfg)
    {
        Rng rng(cfg.rng_seed);
        return optimize(channels, scenario, cfg, rng);
    }
}
