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

#include "beamris/config_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace beamris
{
    namespace
    {
        const std::set<std::string> &known_keys()
        {
            static const std::set<std::string> keys = {
                "n_antennas",       "n_users",       "n_ris",         "uc_per_ris",     "m_total",
                "n_nlos_paths",     "n_selected_beams", "total_power_dbm", "noise_variance_dbm",
                "carrier_freq_ghz", "cell_radius_m", "ue_ring_min_m", "ue_ring_max_m",  "rng_seed",
                "scatter_path_loss",
                "n_particles",      "n_iterations",  "inertia",       "learn_global",   "learn_local",
                "local_best"};
            return keys;
        }

        template <typename T>
        void read(const nlohmann::json &doc, const char *key, T &field)
        {
            if (auto it = doc.find(key); it != doc.end())
            {
                try
                {
                    field = it->get<T>();
                }
                catch (const nlohmann::json::exception &)
                {
                    throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type.");
                }
            }
        }
    }

    void set_total_uc(ScenarioConfig &scenario, std::size_t m_total)
    {
        scenario.uc_per_ris = split_uc(m_total, scenario.n_ris);
    }

    RunConfig parse_config(const std::string &text, RunConfig base)
    {
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object())
            throw std::invalid_argument("config must be a flat JSON object.");
        for (const auto &[key, value] : doc.items())
            if (!known_keys().contains(key))
                throw std::invalid_argument("unknown config key '" + key + "'.");
        if (doc.contains("uc_per_ris") && doc.contains("m_total"))
            throw std::invalid_argument("config: give either uc_per_ris or m_total, not both.");

        auto &s = base.scenario;
        auto &p = base.pso;
        const std::size_t old_m = s.total_uc();
        const std::size_t old_j = s.n_ris;

        read(doc, "n_antennas", s.n_antennas);
        read(doc, "n_users", s.n_users);
        read(doc, "n_ris", s.n_ris);
        read(doc, "n_nlos_paths", s.n_nlos_paths);
        read(doc, "n_selected_beams", s.n_selected_beams);
        read(doc, "carrier_freq_ghz", s.carrier_freq_ghz);
        read(doc, "cell_radius_m", s.cell_radius_m);
        read(doc, "ue_ring_min_m", s.ue_ring_min_m);
        read(doc, "ue_ring_max_m", s.ue_ring_max_m);
        read(doc, "rng_seed", s.rng_seed);

        if (doc.contains("total_power_dbm"))
        {
            double dbm = 0.0;
            read(doc, "total_power_dbm", dbm);
            s.total_power = dbm_to_watt(dbm);
        }
        if (doc.contains("noise_variance_dbm"))
        {
            double dbm = 0.0;
            read(doc, "noise_variance_dbm", dbm);
            s.noise_variance = dbm_to_watt(dbm);
        }

        if (doc.contains("scatter_path_loss"))
        {
            std::string mode;
            read(doc, "scatter_path_loss", mode);
            if (mode == "link")
                s.scatter_loss = ScatterLoss::link;
            else if (mode == "nlos")
                s.scatter_loss = ScatterLoss::nlos;
            else
                throw std::invalid_argument("scatter_path_loss must be 'link' or 'nlos'.");
        }

        if (doc.contains("uc_per_ris"))
            read(doc, "uc_per_ris", s.uc_per_ris);
        else if (doc.contains("m_total"))
        {
            std::size_t m = 0;
            read(doc, "m_total", m);
            set_total_uc(s, m);
        }
        else if (s.n_ris != old_j)
            set_total_uc(s, old_m);

        read(doc, "n_particles", p.n_particles);
        read(doc, "n_iterations", p.n_iterations);
        read(doc, "inertia", p.inertia);
        read(doc, "learn_global", p.learn_global);
        read(doc, "learn_local", p.learn_local);
        if (doc.contains("local_best"))
        {
            std::string mode;
            read(doc, "local_best", mode);
            if (mode == "best_ever")
                p.local_best = LocalBestMemory::best_ever;
            else if (mode == "instantaneous")
                p.local_best = LocalBestMemory::instantaneous;
            else
                throw std::invalid_argument("local_best must be 'best_ever' or 'instantaneous'.");
        }
        return base;
    }

    RunConfig load_config(const std::filesystem::path &path, RunConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        try
        {
            return parse_config(buf.str(), std::move(base));
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument(path.string() + ": " + e.what());
        }
    }

    std::string to_config_json(const RunConfig &config)
    {
        const auto &s = config.scenario;
        const auto &p = config.pso;
        nlohmann::ordered_json doc;
        doc["n_antennas"] = s.n_antennas;
        doc["n_users"] = s.n_users;
        doc["n_ris"] = s.n_ris;
        doc["uc_per_ris"] = s.uc_per_ris;
        doc["n_nlos_paths"] = s.n_nlos_paths;
        doc["n_selected_beams"] = s.n_selected_beams;
        doc["total_power_dbm"] = watt_to_dbm(s.total_power);
        doc["noise_variance_dbm"] = watt_to_dbm(s.noise_variance);
        doc["carrier_freq_ghz"] = s.carrier_freq_ghz;
        doc["cell_radius_m"] = s.cell_radius_m;
        doc["ue_ring_min_m"] = s.ue_ring_min_m;
        doc["ue_ring_max_m"] = s.ue_ring_max_m;
        doc["scatter_path_loss"] = s.scatter_loss == ScatterLoss::link ? "link" : "nlos";
        doc["rng_seed"] = s.rng_seed;
        doc["n_particles"] = p.n_particles;
        doc["n_iterations"] = p.n_iterations;
        doc["inertia"] = p.inertia;
        doc["learn_global"] = p.learn_global;
        doc["learn_local"] = p.learn_local;
        doc["local_best"] = p.local_best == LocalBestMemory::best_ever ? "best_ever" : "instantaneous";
        return doc.dump(2);
    }
}
