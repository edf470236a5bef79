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

#ifndef beamris_config_io_H
#define beamris_config_io_H

#include "beamris/pso.hpp"
#include "beamris/scenario.hpp"

#include <filesystem>
#include <string>

namespace beamris
{
    struct RunConfig
    {
        ScenarioConfig scenario = ScenarioConfig::defaults();
        PsoConfig pso;
    };

    // Config files are a flat JSON object whose keys mirror the config field names:
    //
    //   n_antennas, n_users, n_ris, uc_per_ris (array) or m_total (even split),
    //   n_nlos_paths, n_selected_beams, total_power_dbm, noise_variance_dbm,
    //   carrier_freq_ghz, cell_radius_m, ue_ring_min_m, ue_ring_max_m, rng_seed,
    //   scatter_path_loss ("link" | "nlos"),
    //   n_particles, n_iterations, inertia, learn_global, learn_local,
    //   local_best ("best_ever" | "instantaneous")
    //
    // Keys not present keep the value from `base`. Unknown keys are an error.
    RunConfig parse_config(const std::string &text, RunConfig base = {});
    RunConfig load_config(const std::filesystem::path &path, RunConfig base = {});

    // Same key set, powers in dBm. parse_config(to_config_json(c)) reproduces c up to dBm rounding.
    std::string to_config_json(const RunConfig &config);

    // Re-split M evenly after J or M changed
    void set_total_uc(ScenarioConfig &scenario, std::size_t m_total);
}

#endif
