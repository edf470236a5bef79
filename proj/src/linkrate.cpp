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

#include "beamris/linkrate.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamris
{
    BeamSelection BeamSelection::all(std::size_t n_beams)
    {
        BeamSelection s;
        s.selected.resize(n_beams);
        for (std::size_t n = 0; n < n_beams; ++n)
            s.selected[n] = n;
        return s;
    }

    BeamSelection BeamSelection::from_indices(std::vector<std::size_t> indices)
    {
        std::sort(indices.begin(), indices.end());
        if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
            throw std::invalid_argument("BeamSelection: duplicate beam index.");
        return BeamSelection{std::move(indices)};
    }

    bool BeamSelection::contains(std::size_t beam) const
    {
        return std::binary_search(selected.begin(), selected.end(), beam);
    }

    arma::vec BeamSelection::mask(std::size_t n_beams) const
    {
        arma::vec d(n_beams, arma::fill::zeros);
        for (auto n : selected)
        {
            if (n >= n_beams)
                throw std::out_of_range("BeamSelection: beam index out of range.");
            d[n] = 1.0;
        }
        return d;
    }

    void BeamSelection::validate(std::size_t n_beams, std::size_t n_selected) const
    {
        if (selected.size() != n_selected)
            throw std::invalid_argument("BeamSelection: expected exactly " + std::to_string(n_selected) +
                                        " beams, got " + std::to_string(selected.size()) + ".");
        for (std::size_t i = 0; i < selected.size(); ++i)
        {
            if (selected[i] >= n_beams)
                throw std::invalid_argument("BeamSelection: beam index out of range.");
            if (i > 0 && selected[i] <= selected[i - 1])
                throw std::invalid_argument("BeamSelection: indices must be strictly increasing.");
        }
    }

    std::optional<arma::cx_vec> mrt_precoder(const arma::cx_vec &h, const BeamSelection &mask)
    {
        arma::cx_vec w(h.n_elem, arma::fill::zeros);
        for (auto n : mask.selected)
        {
            if (n >= h.n_elem)
                throw std::out_of_range("mrt_precoder: beam index out of range.");
            w[n] = std::conj(h[n]);
        }
        const double nrm = arma::norm(w);
        if (nrm == 0.0)
            return std::nullopt;
        return arma::cx_vec(w / nrm);
    }

    namespace
    {
        void check_inputs(const arma::cx_mat &h_beam, const PowerAllocation &powers, double sigma2)
        {
            if (!(sigma2 > 0.0))
                throw std::domain_error("noise variance must be positive.");
            if (powers.powers.n_elem != h_beam.n_cols)
                throw std::invalid_argument("power vector length must equal the number of users.");
            if (arma::any(powers.powers < 0.0))
                throw std::invalid_argument("powers must be nonnegative.");
        }

        // Columns are masked MRT precoders, zero for degenerate users
        arma::cx_mat precoders(const arma::cx_mat &h_beam, const BeamSelection &mask)
        {
            arma::cx_mat w(h_beam.n_rows, h_beam.n_cols, arma::fill::zeros);
            for (std::size_t i = 0; i < h_beam.n_cols; ++i)
                if (auto wi = mrt_precoder(h_beam.col(i), mask))
                    w.col(i) = *wi;
            return w;
        }

        // cross(k, i) = h_k^T w_i
        double sinr_from_cross(std::size_t k, const arma::cx_mat &cross, const arma::vec &p, double sigma2)
        {
            double interference = 0.0;
            for (std::size_t i = 0; i < cross.n_cols; ++i)
                if (i != k)
                    interference += p[i] * std::norm(cross(k, i));
            return p[k] * std::norm(cross(k, k)) / (interference + sigma2);
        }
    }

    double sinr(std::size_t k, const arma::cx_mat &h_beam, const BeamSelection &mask, const PowerAllocation &powers,
                double sigma2)
    {
        check_inputs(h_beam, powers, sigma2);
        if (k >= h_beam.n_cols)
            throw std::out_of_range("sinr: user index out of range.");
        const arma::cx_mat cross = h_beam.st() * precoders(h_beam, mask);
        return sinr_from_cross(k, cross, powers.powers, sigma2);
    }

    RateReport sum_rate(const arma::cx_mat &h_beam, const BeamSelection &mask, const PowerAllocation &powers,
                        double sigma2)
    {
        check_inputs(h_beam, powers, sigma2);
        const arma::cx_mat cross = h_beam.st() * precoders(h_beam, mask);
        const std::size_t n_ue = h_beam.n_cols;

        RateReport r;
        r.per_ue_sinr.set_size(n_ue);
        r.per_ue_rate.set_size(n_ue);
        for (std::size_t k = 0; k < n_ue; ++k)
        {
            r.per_ue_sinr[k] = sinr_from_cross(k, cross, powers.powers, sigma2);
            r.per_ue_rate[k] = log2_1p(r.per_ue_sinr[k]);
        }
        r.sum_rate = arma::accu(r.per_ue_rate);
        return r;
    }

    RateReport sum_rate_masked(const arma::cx_mat &h_selected_rows, std::span<const double> powers, double sigma2)
    {
        if (!(sigma2 > 0.0))
            throw std::domain_error("noise variance must be positive.");
        const std::size_t n_ue = h_selected_rows.n_cols;
        if (powers.size() != n_ue)
            throw std::invalid_argument("power vector length must equal the number of users.");

        // gram(i, k) = h_i^H h_k over the selected rows, so |h_k^T w_i|^2 = |gram(i, k)|^2 / gram(i, i)
        const arma::cx_mat gram = h_selected_rows.t() * h_selected_rows;
        arma::vec gain(n_ue);
        for (std::size_t i = 0; i < n_ue; ++i)
            gain[i] = gram(i, i).real();

        RateReport r;
        r.per_ue_sinr.zeros(n_ue);
        r.per_ue_rate.zeros(n_ue);
        for (std::size_t k = 0; k < n_ue; ++k)
        {
            if (gain[k] == 0.0)
                continue;
            double interference = 0.0;
            for (std::size_t i = 0; i < n_ue; ++i)
                if (i != k && gain[i] > 0.0)
                    interference += powers[i] * std::norm(gram(i, k)) / gain[i];
            r.per_ue_sinr[k] = powers[k] * gain[k] / (interference + sigma2);
            r.per_ue_rate[k] = log2_1p(r.per_ue_sinr[k]);
        }
        r.sum_rate = arma::accu(r.per_ue_rate);
        return r;
    }

    namespace
    {
        void check_feasible(const ChannelSet &channels, const ScenarioConfig &scenario, const Solution &sol)
        {
            constexpr double two_pi = 2.0 * std::numbers::pi;
            sol.beam_set.validate(channels.n_antennas(), scenario.n_selected_beams);
            const arma::vec &p = sol.powers.powers;
            if (p.n_elem != channels.n_users())
                throw std::invalid_argument("solution: power vector length must equal K.");
            if (arma::any(p < 0.0))
                throw std::invalid_argument("solution: powers must be nonnegative.");
            if (arma::accu(p) > scenario.total_power * (1.0 + 1e-9))
                throw std::invalid_argument("solution: total power exceeds the budget.");
            const arma::vec &phi = sol.phases.phases;
            if (phi.n_elem != channels.total_uc())
                throw std::invalid_argument("solution: phase vector length must equal M.");
            if (arma::any(phi < 0.0) || arma::any(phi > two_pi))
                throw std::invalid_argument("solution: phases must lie in [0, 2 pi].");
        }
    }

    double evaluate_solution(const ChannelSet &channels, const ScenarioConfig &scenario, const Solution &sol)
    {
        check_feasible(channels, scenario, sol);
        const arma::cx_mat h = to_beamspace(cascaded_spatial(channels, sol.phases), channels.dft);
        return sum_rate(h, sol.beam_set, sol.powers, scenario.noise_variance).sum_rate;
    }

    SumRateObjective::SumRateObjective(const ChannelSet &channels, double sigma2) : sigma2_(sigma2)
    {
        channels.check_shapes();
        if (!(sigma2 > 0.0))
            throw std::domain_error("noise variance must be positive.");
        const auto m_total = channels.total_uc();
        arma::cx_mat c_all(channels.n_antennas(), m_total);
        ris_ue_.set_size(m_total, channels.n_users());
        arma::uword offset = 0;
        for (std::size_t j = 0; j < channels.n_ris(); ++j)
        {
            const arma::uword m_j = channels.bs_ris[j].n_cols;
            c_all.cols(offset, offset + m_j - 1) = channels.bs_ris[j];
            ris_ue_.rows(offset, offset + m_j - 1) = channels.ris_ue[j];
            offset += m_j;
        }
        beam_bs_ris_ = channels.dft * c_all;
    }

    arma::cx_mat SumRateObjective::selected_rows(std::span<const std::size_t> beams,
                                                 std::span<const double> phases) const
    {
        if (phases.size() != ris_ue_.n_rows)
            throw std::invalid_argument("objective: phase vector length must equal M.");
        arma::uvec rows(beams.size());
        for (std::size_t i = 0; i < beams.size(); ++i)
        {
            if (beams[i] >= beam_bs_ris_.n_rows)
                throw std::out_of_range("objective: beam index out of range.");
            rows[i] = beams[i];
        }
        arma::cx_mat scaled(ris_ue_.n_rows, ris_ue_.n_cols);
        for (arma::uword m = 0; m < ris_ue_.n_rows; ++m)
        {
            const cdouble phasor(std::cos(phases[m]), std::sin(phases[m]));
            for (arma::uword k = 0; k < ris_ue_.n_cols; ++k)
                scaled(m, k) = phasor * ris_ue_(m, k);
        }
        return beam_bs_ris_.rows(rows) * scaled;
    }

    double SumRateObjective::operator()(std::span<const std::size_t> beams, std::span<const double> powers,
                                        std::span<const double> phases) const
    {
        return sum_rate_masked(selected_rows(beams, phases), powers, sigma2_).sum_rate;
    }

    double SumRateObjective::operator()(const Solution &sol) const
    {
        return (*this)(sol.beam_set.selected, {sol.powers.powers.memptr(), sol.powers.powers.n_elem},
                       {sol.phases.phases.memptr(), sol.phases.phases.n_elem});
    }
}
