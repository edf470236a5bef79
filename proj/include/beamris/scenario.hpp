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

#ifndef beamris_scenario_H
#define beamris_scenario_H

#include "beamris/random.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace beamris
{
    using cdouble = std::complex<double>;

    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

    // Which UMi branch sets the amplitude of the scattered paths of a link.
    enum class ScatterLoss
    {
        link, // every path of a link shares the link's LoS-branch loss; scattered paths differ by phase
        nlos, // scattered paths use the NLoS branch
    };

    // Physical and system constants of one deployment.
    //
    // Powers are linear (watts) internally. Conversion from dBm happens once,
    // when a config is parsed or built from defaults.
    struct ScenarioConfig
    {
        std::size_t n_antennas = 64;          // N, lens-array elements (= beams)
        std::size_t n_users = 8;              // K
        std::size_t n_ris = 8;                // J
        std::vector<std::size_t> uc_per_ris;  // M_j, length J
        std::size_t n_nlos_paths = 2;         // N_p, shared by BS-RIS and RIS-UE links
        std::size_t n_selected_beams = 8;     // N_s, RF chains
        double total_power = 10.0;            // P [W]
        double noise_variance = 1.0e-14;      // sigma^2 [W]
        double carrier_freq_ghz = 30.0;       // f_c
        double cell_radius_m = 40.0;          // R
        double ue_ring_min_m = 25.0;          // d_min
        double ue_ring_max_m = 35.0;          // d_max
        ScatterLoss scatter_loss = ScatterLoss::link;
        std::uint64_t rng_seed = 1;

        std::size_t total_uc() const;         // M
        std::size_t n_variables() const;      // N + K + M (one PSO particle)

        // Offset of RIS j's first unit cell inside the length-M phase vector
        std::size_t uc_offset(std::size_t j) const;

        // Throws std::invalid_argument naming the first violated constraint.
        void validate() const;

        // Reference deployment: 64 beams, 8 users, 8 RISs, 40 dBm, -110 dBm noise.
        static ScenarioConfig defaults(std::size_t m_total = 128);
    };

    // Splits M unit cells over J surfaces; the first M mod J surfaces get one extra.
    std::vector<std::size_t> split_uc(std::size_t m_total, std::size_t n_ris);

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;
        double norm() const { return std::hypot(x, y); }
    };

    inline double distance(const Point2 &a, const Point2 &b) { return std::hypot(a.x - b.x, a.y - b.y); }

    struct NodeLayout
    {
        Point2 bs_position;
        std::vector<Point2> ris_positions; // J, on the cell edge
        std::vector<Point2> ue_positions;  // K, inside the [d_min, d_max] annulus
    };

    // BS at origin, RIS j at angle 2*pi*j/J on radius R, users uniform in angle and radius.
    NodeLayout place_nodes(const ScenarioConfig &config, Rng &rng);

    // 3GPP UMi path loss [dB], distance in meters and carrier in GHz.
    //   LoS:  32.4 + 21.0 log10(d) + 20 log10(f_c)
    //   NLoS: 32.4 + 31.9 log10(d) + 20 log10(f_c)
    double path_loss_db(double distance_m, double f_c_ghz, bool is_los);

    // sqrt(10^(-loss/10)), rotated by exp(-j 2 pi u), u ~ U[0, 1), when scattered
    cdouble path_gain(double loss_db, bool scattered, Rng &rng);

    // Complex path gain. LoS: sqrt(10^(-PL/10)) (real, phase 0).
    // NLoS: same amplitude times exp(-j 2 pi u), u ~ U[0, 1). LoS consumes no randomness.
    cdouble draw_path_gain(double distance_m, double f_c_ghz, bool is_los, Rng &rng);

    // Half-wavelength ULA: theta = sin(psi) / 2, always in [-0.5, 0.5].
    inline double spatial_frequency(double angle_rad) { return 0.5 * std::sin(angle_rad); }

    struct PathDirection
    {
        double angle_rad = 0.0;
        double spatial_freq = 0.0;
    };

    // Directions for one realization. Index 0 of every path list is the LoS path,
    // followed by N_p scattered paths.
    struct PathAngles
    {
        std::vector<std::vector<PathDirection>> bs_departure;            // [j][l], psi ~ U(-pi, pi)
        std::vector<std::vector<PathDirection>> ris_arrival;             // [j][l], psi ~ U(-pi/2, pi/2)
        std::vector<std::vector<std::vector<PathDirection>>> ris_to_ue;  // [j][k][l], psi ~ U(-pi, pi)
    };

    PathDirection draw_direction(double lo_rad, double hi_rad, Rng &rng);

    // Angles are drawn independently of the node layout; the layout only fixes
    // the dimensions here.
    PathAngles draw_angles(const NodeLayout &layout, const ScenarioConfig &config, Rng &rng);
}

#endif
