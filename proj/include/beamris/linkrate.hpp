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

#ifndef beamris_linkrate_H
#define beamris_linkrate_H

#include "beamris/channel.hpp"

#include <armadillo>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace beamris
{
    // Active beams (0-based, strictly increasing). Equivalent to a 0/1 diagonal mask.
    struct BeamSelection
    {
        std::vector<std::size_t> selected;

        static BeamSelection all(std::size_t n_beams);
        static BeamSelection from_indices(std::vector<std::size_t> indices); // sorts, rejects duplicates

        bool contains(std::size_t beam) const;
        arma::vec mask(std::size_t n_beams) const;

        // Indices unique, in range and exactly n_selected of them
        void validate(std::size_t n_beams, std::size_t n_selected) const;
    };

    struct PowerAllocation
    {
        arma::vec powers; // per user [W]
    };

    struct RateReport
    {
        arma::vec per_ue_sinr;
        arma::vec per_ue_rate; // bit/s/Hz
        double sum_rate = 0.0;
    };

    // One candidate operating point: beam scores and the top-N_s set derived from them,
    // per-user powers and per-UC phases.
    struct Solution
    {
        arma::vec beam_scores;
        BeamSelection beam_set;
        PowerAllocation powers;
        RisProfile phases;
    };

    // log2(1 + x), accurate for small x
    inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

    // Masked MRT: conj(D h) / ||D h||, zero outside the selected beams.
    // Returns nullopt when D h vanishes; that user then gets rate 0 and a zero precoder.
    std::optional<arma::cx_vec> mrt_precoder(const arma::cx_vec &h, const BeamSelection &mask);

    // SINR of user k under masked MRT for every user. Throws std::domain_error for sigma2 <= 0.
    double sinr(std::size_t k, const arma::cx_mat &h_beam, const BeamSelection &mask, const PowerAllocation &powers,
                double sigma2);

    RateReport sum_rate(const arma::cx_mat &h_beam, const BeamSelection &mask, const PowerAllocation &powers,
                        double sigma2);

    // Rate report from the masked channel rows only (N_s x K), using the Gram matrix of the
    // masked columns instead of explicit precoders.
    RateReport sum_rate_masked(const arma::cx_mat &h_selected_rows, std::span<const double> powers, double sigma2);

    // Sum rate of a feasible solution: cascaded channel -> beamspace -> masked MRT rates.
    // Throws std::invalid_argument if the solution violates the power, beam-count or phase constraints.
    double evaluate_solution(const ChannelSet &channels, const ScenarioConfig &scenario, const Solution &sol);

    // Objective used inside the optimizer. Precomputes U [C_1 .. C_J] and the stacked G_j once,
    // then only touches the N_s selected beam rows per evaluation (N_s M K work instead of N M K).
    // Const and allocation-local, so one instance may be shared by concurrent evaluators.
    class SumRateObjective
    {
    public:
        SumRateObjective(const ChannelSet &channels, double sigma2);

        double operator()(std::span<const std::size_t> beams, std::span<const double> powers,
                          std::span<const double> phases) const;
        double operator()(const Solution &sol) const;

        // Masked beamspace channel rows for the given beams and phases (|beams| x K)
        arma::cx_mat selected_rows(std::span<const std::size_t> beams, std::span<const double> phases) const;

        std::size_t n_antennas() const { return beam_bs_ris_.n_rows; }
        std::size_t total_uc() const { return ris_ue_.n_rows; }
        std::size_t n_users() const { return ris_ue_.n_cols; }

    private:
        arma::cx_mat beam_bs_ris_; // N x M
        arma::cx_mat ris_ue_;      // M x K
        double sigma2_;
    };
}

#endif
