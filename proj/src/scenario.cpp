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

#include "beamris/scenario.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace beamris
{
    std::size_t ScenarioConfig::total_uc() const
    {
        return std::accumulate(uc_per_ris.begin(), uc_per_ris.end(), std::size_t{0});
    }

    std::size_t ScenarioConfig::n_variables() const
    {
        return n_antennas + n_users + total_uc();
    }

    std::size_t ScenarioConfig::uc_offset(std::size_t j) const
    {
        if (j > uc_per_ris.size())
            throw std::out_of_range("RIS index out of range.");
        return std::accumulate(uc_per_ris.begin(), uc_per_ris.begin() + static_cast<std::ptrdiff_t>(j), std::size_t{0});
    }

    void ScenarioConfig::validate() const
    {
        if (n_antennas == 0)
            throw std::invalid_argument("n_antennas must be positive.");
        if (n_users == 0)
            throw std::invalid_argument("n_users must be positive.");
        if (n_ris == 0)
            throw std::invalid_argument("n_ris must be positive.");
        if (uc_per_ris.size() != n_ris)
            throw std::invalid_argument("uc_per_ris must have n_ris entries.");
        for (auto m : uc_per_ris)
            if (m == 0)
                throw std::invalid_argument("every RIS needs at least one unit cell (uc_per_ris >= 1).");
        if (n_selected_beams < n_users)
            throw std::invalid_argument("n_selected_beams must be >= n_users.");
        if (n_selected_beams > n_antennas)
            throw std::invalid_argument("n_selected_beams must be <= n_antennas.");
        if (!(total_power > 0.0))
            throw std::invalid_argument("total_power must be positive.");
        if (!(noise_variance > 0.0))
            throw std::invalid_argument("noise_variance must be positive.");
        if (!(carrier_freq_ghz > 0.0))
            throw std::invalid_argument("carrier_freq_ghz must be positive.");
        if (!(ue_ring_min_m > 0.0))
            throw std::invalid_argument("ue_ring_min_m must be positive.");
        if (ue_ring_min_m > ue_ring_max_m)
            throw std::invalid_argument("ue_ring_min_m must not exceed ue_ring_max_m.");
        if (ue_ring_max_m > cell_radius_m)
            throw std::invalid_argument("ue_ring_max_m must not exceed cell_radius_m.");
    }

    std::vector<std::size_t> split_uc(std::size_t m_total, std::size_t n_ris)
    {
        if (n_ris == 0)
            throw std::invalid_argument("n_ris must be positive.");
        std::vector<std::size_t> out(n_ris, m_total / n_ris);
        for (std::size_t j = 0; j < m_total % n_ris; ++j)
            ++out[j];
        return out;
    }

    ScenarioConfig ScenarioConfig::defaults(std::size_t m_total)
    {
        ScenarioConfig c;
        c.total_power = dbm_to_watt(40.0);
        c.noise_variance = dbm_to_watt(-110.0);
        c.uc_per_ris = split_uc(m_total, c.n_ris);
        return c;
    }

    NodeLayout place_nodes(const ScenarioConfig &config, Rng &rng)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        NodeLayout layout;
        layout.ris_positions.reserve(config.n_ris);
        for (std::size_t j = 0; j < config.n_ris; ++j)
        {
            double a = two_pi * static_cast<double>(j) / static_cast<double>(config.n_ris);
            layout.ris_positions.push_back({config.cell_radius_m * std::cos(a), config.cell_radius_m * std::sin(a)});
        }
        layout.ue_positions.reserve(config.n_users);
        for (std::size_t k = 0; k < config.n_users; ++k)
        {
            double a = uniform(rng, 0.0, two_pi);
            double r = config.ue_ring_min_m == config.ue_ring_max_m
                           ? config.ue_ring_min_m
                           : uniform(rng, config.ue_ring_min_m, config.ue_ring_max_m);
            layout.ue_positions.push_back({r * std::cos(a), r * std::sin(a)});
        }
        return layout;
    }

    double path_loss_db(double distance_m, double f_c_ghz, bool is_los)
    {
        if (!(distance_m > 0.0))
            throw std::domain_error("path_loss_db: distance must be positive.");
        if (!(f_c_ghz > 0.0))
            throw std::domain_error("path_loss_db: carrier frequency must be positive.");
        const double exponent = is_los ? 21.0 : 31.9;
        return 32.4 + exponent * std::log10(distance_m) + 20.0 * std::log10(f_c_ghz);
    }

    cdouble path_gain(double loss_db, bool scattered, Rng &rng)
    {
        const double amplitude = std::sqrt(std::pow(10.0, -loss_db / 10.0));
        if (!scattered)
            return {amplitude, 0.0};
        const double u = uniform(rng, 0.0, 1.0);
        return std::polar(amplitude, -2.0 * std::numbers::pi * u);
    }

    cdouble draw_path_gain(double distance_m, double f_c_ghz, bool is_los, Rng &rng)
    {
        return path_gain(path_loss_db(distance_m, f_c_ghz, is_los), !is_los, rng);
    }

    PathDirection draw_direction(double lo_rad, double hi_rad, Rng &rng)
    {
        double psi = uniform(rng, lo_rad, hi_rad);
        return {psi, spatial_frequency(psi)};
    }

    PathAngles draw_angles(const NodeLayout &layout, const ScenarioConfig &config, Rng &rng)
    {
        constexpr double pi = std::numbers::pi;
        const std::size_t n_ris = layout.ris_positions.size();
        const std::size_t n_ue = layout.ue_positions.size();
        const std::size_t n_paths = config.n_nlos_paths + 1;

        PathAngles out;
        out.bs_departure.resize(n_ris);
        out.ris_arrival.resize(n_ris);
        out.ris_to_ue.resize(n_ris);
        for (std::size_t j = 0; j < n_ris; ++j)
        {
            for (std::size_t l = 0; l < n_paths; ++l)
            {
                out.bs_departure[j].push_back(draw_direction(-pi, pi, rng));
                out.ris_arrival[j].push_back(draw_direction(-pi / 2.0, pi / 2.0, rng));
            }
            out.ris_to_ue[j].resize(n_ue);
            for (std::size_t k = 0; k < n_ue; ++k)
                for (std::size_t l = 0; l < n_paths; ++l)
                    out.ris_to_ue[j][k].push_back(draw_direction(-pi, pi, rng));
        }
        return out;
    }
}
