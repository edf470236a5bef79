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

#ifndef beamris_pso_H
#define beamris_pso_H

#include "beamris/linkrate.hpp"

#include <armadillo>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace beamris
{
    // How a particle's local best remembers its ring neighbours.
    enum class LocalBestMemory
    {
        best_ever,     // keep the best neighbour position ever seen
        instantaneous, // better of the two neighbours in the current iteration only
    };

    struct PsoConfig
    {
        std::size_t n_particles = 50;  // A
        std::size_t n_iterations = 200; // T
        double inertia = 0.05;         // mu
        double learn_global = 2.0;     // w1
        double learn_local = 2.0;      // w2
        std::uint64_t rng_seed = 1;
        LocalBestMemory local_best = LocalBestMemory::best_ever;

        void validate() const;
    };

    struct BestRecord
    {
        arma::vec position;
        double value = -std::numeric_limits<double>::infinity();
    };

    // Population and velocity are N_v x A, one particle per column:
    //   rows [0, N)       beam scores
    //   rows [N, N+K)     user powers
    //   rows [N+K, N_v)   UC phases, RIS blocks back to back
    struct Swarm
    {
        arma::mat population;
        arma::mat velocity;
        arma::vec quality;                 // -inf until evaluated
        BestRecord global_best;
        std::vector<BestRecord> local_best; // one per particle
    };

    // |x| / max|x| over the beam block. An all-zero block is redrawn uniform on [0, 1] first.
    void project_beams(std::span<double> beams, Rng &rng);

    // |x| / sum|x| * P over the power block. An all-zero block becomes an equal split P / K.
    void project_powers(std::span<double> powers, double total_power);

    // Wraps every phase into [0, 2 pi] by modular reduction; in-range values are left untouched.
    void project_phases(std::span<double> phases);

    // All three projections on one particle column
    void project_column(std::span<double> column, const ScenarioConfig &scenario, Rng &rng);

    // Indices of the n_selected largest scores, ties to the lower index, returned ascending.
    std::vector<std::size_t> top_beams(std::span<const double> scores, std::size_t n_selected);

    Solution decode(std::span<const double> column, const ScenarioConfig &scenario);

    // Uniform population (beams [0,1], powers (0,1], phases [0, 2 pi)), zero velocity,
    // projections applied once, qualities unset.
    Swarm init_swarm(const ScenarioConfig &scenario, const PsoConfig &cfg, Rng &rng);

    // Ring topology: the neighbours of particle a are a-1 and a+1 (mod A).
    void update_bests(Swarm &swarm, LocalBestMemory memory = LocalBestMemory::best_ever);

    // mu v + w1 r1 (gb - f) + w2 r2 (lb - f), written in terms of the two gaps
    constexpr double velocity_step(double v, double gap_global, double gap_local, double inertia, double learn_global,
                                   double learn_local, double r1, double r2)
    {
        return inertia * v + learn_global * r1 * gap_global + learn_local * r2 * gap_local;
    }

    // Velocity update with fresh r1, r2 per element (column-major draw order), F += X, then projections.
    void update_velocity_and_position(Swarm &swarm, const PsoConfig &cfg, const ScenarioConfig &scenario, Rng &rng);

    struct OptimizeResult
    {
        Solution best;
        double best_rate = 0.0;
        std::vector<double> trace;    // T + 1 entries, [0] = best of the random initial swarm
        arma::vec initial_quality;    // qualities of the random initial swarm
    };

    // Called after each evaluation round (iteration 0 = initial swarm) with the projected,
    // evaluated swarm and updated bests.
    using SwarmObserver = std::function<void(std::size_t iteration, const Swarm &swarm)>;

    OptimizeResult optimize(const ChannelSet &channels, const ScenarioConfig &scenario, const PsoConfig &cfg, Rng &rng,
                            const SwarmObserver &observer = {});

    // Convenience overload seeding the stream from cfg.rng_seed
    OptimizeResult optimize(const ChannelSet &channels, const ScenarioConfig &scenario, const PsoConfig &cfg);
}

#endif
