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

#include "beamris/channel.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace beamris
{
    namespace
    {
        constexpr const char *kFormat = "beamris-channel";
        constexpr int kVersion = 1;

        nlohmann::json encode(const arma::cx_mat &m)
        {
            std::vector<double> data;
            data.reserve(2 * m.n_elem);
            for (arma::uword i = 0; i < m.n_elem; ++i)
            {
                data.push_back(m[i].real());
                data.push_back(m[i].imag());
            }
            return {{"rows", m.n_rows}, {"cols", m.n_cols}, {"data", std::move(data)}};
        }

        arma::cx_mat decode(const nlohmann::json &j)
        {
            const auto rows = j.at("rows").get<arma::uword>();
            const auto cols = j.at("cols").get<arma::uword>();
            const auto data = j.at("data").get<std::vector<double>>();
            if (data.size() != 2 * rows * cols)
                throw std::runtime_error("channel dump: matrix data length does not match its dimensions.");
            arma::cx_mat m(rows, cols);
            for (arma::uword i = 0; i < m.n_elem; ++i)
                m[i] = {data[2 * i], data[2 * i + 1]};
            return m;
        }
    }

    void write_channel_dump(const ChannelSet &channels, const std::filesystem::path &path)
    {
        channels.check_shapes();
        nlohmann::json doc;
        doc["format"] = kFormat;
        doc["version"] = kVersion;
        doc["n_antennas"] = channels.n_antennas();
        doc["n_users"] = channels.n_users();
        doc["uc_per_ris"] = channels.uc_per_ris();
        doc["layout"] = "column-major, interleaved re/im float64";
        doc["bs_ris"] = nlohmann::json::array();
        doc["ris_ue"] = nlohmann::json::array();
        for (std::size_t j = 0; j < channels.n_ris(); ++j)
        {
            doc["bs_ris"].push_back(encode(channels.bs_ris[j]));
            doc["ris_ue"].push_back(encode(channels.ris_ue[j]));
        }

        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << doc.dump() << '\n';
        if (!out)
            throw std::runtime_error("write failed: " + path.string());
    }

    ChannelSet read_channel_dump(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path.string());
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(in);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw std::runtime_error(path.string() + ": " + e.what());
        }
        if (doc.value("format", "") != kFormat || doc.value("version", 0) != kVersion)
            throw std::runtime_error(path.string() + ": not a beamris channel dump (v1)");

        ChannelSet ch;
        ch.dft = dft_matrix(doc.at("n_antennas").get<std::size_t>());
        for (const auto &m : doc.at("bs_ris"))
            ch.bs_ris.push_back(decode(m));
        for (const auto &m : doc.at("ris_ue"))
            ch.ris_ue.push_back(decode(m));
        ch.check_shapes();
        return ch;
    }
}
