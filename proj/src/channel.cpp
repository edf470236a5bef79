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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace beamris
{
    std::size_t ChannelSet::total_uc() const
    {
        std::size_t m = 0;
        for (const auto &c : bs_ris)
            m += c.n_cols;
        return m;
    }

    std::vector<std::size_t> ChannelSet::uc_per_ris() const
    {
        std::vector<std::size_t> out;
        out.reserve(bs_ris.size());
        for (const auto &c : bs_ris)
            out.push_back(c.n_cols);
        return out;
    }

    void ChannelSet::check_shapes() const
    {
        if (dft.n_rows != dft.n_cols || dft.n_rows == 0)
            throw std::invalid_argument("ChannelSet: DFT matrix must be square and non-empty.");
        if (bs_ris.empty() || bs_ris.size() != ris_ue.size())
            throw std::invalid_argument("ChannelSet: need one G_j per C_j and at least one RIS.");
        const auto k = ris_ue.front().n_cols;
        for (std::size_t j = 0; j < bs_ris.size(); ++j)
        {
            if (bs_ris[j].n_rows != dft.n_rows)
                throw std::invalid_argument("ChannelSet: C_j must have N rows.");
            if (ris_ue[j].n_rows != bs_ris[j].n_cols)
                throw std::invalid_argument("ChannelSet: G_j rows must equal C_j columns.");
            if (ris_ue[j].n_cols != k)
                throw std::invalid_argument("ChannelSet: all G_j must have K columns.");
        }
    }

    arma::cx_vec steering(double theta, std::size_t n_elements)
    {
        if (n_elements == 0)
            throw std::invalid_argument("steering: n_elements must be positive.");
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
        arma::cx_vec a(n_elements);
        for (std::size_t i = 0; i < n_elements; ++i)
            a[i] = std::polar(scale, -2.0 * std::numbers::pi * theta * static_cast<double>(i));
        return a;
    }

    arma::cx_vec ris_ue_channel(const PathTerm &los, std::span<const PathTerm> nlos, std::size_t m_j)
    {
        const double m = static_cast<double>(m_j);
        arma::cx_vec g = std::sqrt(m) * los.gain * steering(los.theta, m_j);
        if (!nlos.empty())
        {
            const double scale = std::sqrt(m / static_cast<double>(nlos.size()));
            for (const auto &p : nlos)
                g += scale * p.gain * steering(p.theta, m_j);
        }
        return g;
    }

    arma::cx_mat bs_ris_channel(const PathPair &los, std::span<const PathPair> nlos, std::size_t n_antennas,
                                std::size_t m_j)
    {
        const double nm = static_cast<double>(n_antennas * m_j);
        arma::cx_mat c = std::sqrt(nm) * los.gain *
                         (steering(los.theta_departure, n_antennas) * steering(los.theta_arrival, m_j).t());
        if (!nlos.empty())
        {
            const double scale = std::sqrt(nm / static_cast<double>(nlos.size()));
            for (const auto &p : nlos)
                c += scale * p.gain * (steering(p.theta_departure, n_antennas) * steering(p.theta_arrival, m_j).t());
        }
        return c;
    }

    arma::cx_mat dft_matrix(std::size_t n_antennas)
    {
        if (n_antennas == 0)
            throw std::invalid_argument("dft_matrix: N must be positive.");
        const double n = static_cast<double>(n_antennas);
        arma::cx_mat u(n_antennas, n_antennas);
        for (std::size_t col = 0; col < n_antennas; ++col)
        {
            const double n_tilde = static_cast<double>(col) - 0.5 * (n - 1.0);
            u.col(col) = steering(n_tilde / n, n_antennas);
        }
        return u;
    }

    arma::cx_mat cascaded_spatial(const ChannelSet &channels, const RisProfile &profile)
    {
        if (profile.phases.n_elem != channels.total_uc())
            throw std::invalid_argument("cascaded_spatial: profile length must equal the total UC count.");
        arma::cx_mat h(channels.n_antennas(), channels.n_users(), arma::fill::zeros);
        std::size_t offset = 0;
        for (std::size_t j = 0; j < channels.n_ris(); ++j)
        {
            const auto m_j = channels.bs_ris[j].n_cols;
            arma::cx_vec phasor(m_j);
            for (std::size_t m = 0; m < m_j; ++m)
                phasor[m] = std::polar(1.0, profile.phases[offset + m]);
            // diag(phasor) G_j as a row scaling
            h += channels.bs_ris[j] * (channels.ris_ue[j].each_col() % phasor);
            offset += m_j;
        }
        return h;
    }

    arma::cx_mat to_beamspace(const arma::cx_mat &h_spatial, const arma::cx_mat &dft)
    {
        if (dft.n_cols != h_spatial.n_rows)
            throw std::invalid_argument("to_beamspace: dimension mismatch.");
        return dft * h_spatial;
    }

    ChannelRealization draw_realization(const ScenarioConfig &config, Rng &rng, const arma::cx_mat *dft)
    {
        config.validate();
        ChannelRealization out;
        out.layout = place_nodes(config, rng);
        out.angles = draw_angles(out.layout, config, rng);

        const std::size_t n = config.n_antennas;
        const std::size_t n_p = config.n_nlos_paths;
        const double fc = config.carrier_freq_ghz;
        const bool scatter_los_branch = config.scatter_loss == ScatterLoss::link;
        auto &ch = out.channels;
        ch.dft = (dft != nullptr && dft->n_rows == n) ? *dft : dft_matrix(n);
        ch.bs_ris.reserve(config.n_ris);
        ch.ris_ue.reserve(config.n_ris);

        for (std::size_t j = 0; j < config.n_ris; ++j)
        {
            const std::size_t m_j = config.uc_per_ris[j];
            const Point2 &ris = out.layout.ris_positions[j];
            const auto &dep = out.angles.bs_departure[j];
            const auto &arr = out.angles.ris_arrival[j];

            const double d_bs = distance(out.layout.bs_position, ris);
            const double loss_bs = path_loss_db(d_bs, fc, scatter_los_branch);
            PathPair los{draw_path_gain(d_bs, fc, true, rng), dep[0].spatial_freq, arr[0].spatial_freq};
            std::vector<PathPair> scattered;
            for (std::size_t l = 1; l <= n_p; ++l)
                scattered.push_back({path_gain(loss_bs, true, rng), dep[l].spatial_freq, arr[l].spatial_freq});
            ch.bs_ris.push_back(bs_ris_channel(los, scattered, n, m_j));

            arma::cx_mat g(m_j, config.n_users);
            for (std::size_t k = 0; k < config.n_users; ++k)
            {
                const auto &dirs = out.angles.ris_to_ue[j][k];
                const double d_ue = distance(ris, out.layout.ue_positions[k]);
                const double loss_ue = path_loss_db(d_ue, fc, scatter_los_branch);
                PathTerm los_ue{draw_path_gain(d_ue, fc, true, rng), dirs[0].spatial_freq};
                std::vector<PathTerm> sc_ue;
                for (std::size_t l = 1; l <= n_p; ++l)
                    sc_ue.push_back({path_gain(loss_ue, true, rng), dirs[l].spatial_freq});
                g.col(k) = ris_ue_channel(los_ue, sc_ue, m_j);
            }
            ch.ris_ue.push_back(std::move(g));
        }
        return out;
    }
}
