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

#ifndef beamris_channel_H
#define beamris_channel_H

#include "beamris/scenario.hpp"

#include <armadillo>
#include <filesystem>
#include <span>
#include <vector>

namespace beamris
{
    // One propagation path seen by a RIS array: complex gain and spatial frequency
    struct PathTerm
    {
        cdouble gain;
        double theta = 0.0;
    };

    // One BS-to-RIS path: gain, departure frequency at the BS, arrival frequency at the RIS
    struct PathPair
    {
        cdouble gain;
        double theta_departure = 0.0;
        double theta_arrival = 0.0;
    };

    // Spatial channels of one realization plus the (realization-independent) DFT beamformer.
    // Immutable after construction; share freely across threads.
    struct ChannelSet
    {
        std::vector<arma::cx_mat> bs_ris; // C_j, N x M_j
        std::vector<arma::cx_mat> ris_ue; // G_j, M_j x K
        arma::cx_mat dft;                 // U, N x N

        std::size_t n_antennas() const { return dft.n_rows; }
        std::size_t n_users() const { return ris_ue.empty() ? 0 : ris_ue.front().n_cols; }
        std::size_t n_ris() const { return bs_ris.size(); }
        std::size_t total_uc() const;
        std::vector<std::size_t> uc_per_ris() const;

        // Throws std::invalid_argument on inconsistent dimensions
        void check_shapes() const;
    };

    // RIS phase profile over all M unit cells, RIS blocks stored back to back.
    struct RisProfile
    {
        arma::vec phases;
    };

    // Normalized ULA response: [a]_i = exp(-j 2 pi theta i) / sqrt(n), i = 0..n-1
    arma::cx_vec steering(double theta, std::size_t n_elements);

    // RIS-to-user vector (M_j):
    //   sqrt(M_j) eta_0 a(theta_0) + sqrt(M_j / N_p) sum_l eta_l a(theta_l)
    // with N_p = nlos.size(); the scattered sum is absent when nlos is empty.
    arma::cx_vec ris_ue_channel(const PathTerm &los, std::span<const PathTerm> nlos, std::size_t m_j);

    // BS-to-RIS matrix (N x M_j):
    //   sqrt(M_j N) eta_0 a(theta_0, N) a(bar_theta_0, M_j)^H + sqrt(M_j N / N_p) sum_l (...)
    arma::cx_mat bs_ris_channel(const PathPair &los, std::span<const PathPair> nlos, std::size_t n_antennas,
                                std::size_t m_j);

    // Beamforming matrix of a lens array: column n is a((n - (N-1)/2) / N, N). Unitary.
    arma::cx_mat dft_matrix(std::size_t n_antennas);

    // H_bar = sum_j C_j diag(exp(j phi_j)) G_j   (N x K)
    arma::cx_mat cascaded_spatial(const ChannelSet &channels, const RisProfile &profile);

    // H = U H_bar
    arma::cx_mat to_beamspace(const arma::cx_mat &h_spatial, const arma::cx_mat &dft);

    struct ChannelRealization
    {
        NodeLayout layout;
        PathAngles angles;
        ChannelSet channels;
    };

    // Draws layout, path gains and angles, then assembles C_j and G_j.
    // The LoS path uses the UMi LoS branch; scattered paths follow config.scatter_loss.
    // Pass a cached dft_matrix(N) to skip recomputing it.
    ChannelRealization draw_realization(const ScenarioConfig &config, Rng &rng, const arma::cx_mat *dft = nullptr);

    // Self-describing JSON container for C_j and G_j (interleaved re/im doubles, column-major).
    void write_channel_dump(const ChannelSet &channels, const std::filesystem::path &path);
    ChannelSet read_channel_dump(const std::filesystem::path &path);
}

#endif
