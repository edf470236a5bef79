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

#include <catch_amalgamated.hpp>

#include "beamris/linkrate.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

using namespace beamris;
using Catch::Approx;

namespace
{
    constexpr double two_pi = 2.0 * std::numbers::pi;

    ScenarioConfig tiny(std::size_t n = 8, std::size_t k = 3, std::size_t n_s = 4, std::size_t j = 2, std::size_t m = 8)
    {
        auto c = ScenarioConfig::defaults(m);
        c.n_antennas = n;
        c.n_users = k;
        c.n_selected_beams = n_s;
        c.n_ris = j;
        c.uc_per_ris = split_uc(m, j);
        return c;
    }

    Solution random_solution(const ScenarioConfig &c, Rng &rng)
    {
        Solution s;
        std::vector<std::size_t> idx(c.n_antennas);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(c.n_selected_beams);
        s.beam_set = BeamSelection::from_indices(idx);
        arma::vec p(c.n_users);
        for (auto &x : p)
            x = uniform(rng, 0.0, 1.0);
        s.powers.powers = p / arma::accu(p) * c.total_power;
        s.phases.phases.set_size(c.total_uc());
        for (auto &x : s.phases.phases)
            x = uniform(rng, 0.0, two_pi);
        return s;
    }

    double oracle_rate(const ChannelSet &ch, const ScenarioConfig &c, const Solution &s)
    {
        return oracle::eq_sum_rate(ch, oracle::to_std(s.phases.phases), oracle::mask_of(s.beam_set.selected, c.n_antennas),
                                   oracle::to_std(s.powers.powers), c.noise_variance);
    }
}

TEST_CASE("Linkrate - beam selection")
{
    const auto s = BeamSelection::from_indices({5, 1, 3});
    CHECK(s.selected == std::vector<std::size_t>{1, 3, 5});
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(2));
    const arma::vec m = s.mask(6);
    CHECK(arma::accu(m) == 3.0);
    CHECK(m[5] == 1.0);
    CHECK_NOTHROW(s.validate(6, 3));
    CHECK_THROWS_AS(s.validate(6, 2), std::invalid_argument);
    CHECK_THROWS_AS(s.validate(5, 3), std::invalid_argument);
    CHECK_THROWS_AS(BeamSelection::from_indices({1, 1}), std::invalid_argument);
    CHECK(BeamSelection::all(4).selected == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("Linkrate - masked MRT precoder")
{
    SECTION("conjugate and normalize")
    {
        const arma::cx_vec h{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
        const auto w = mrt_precoder(h, BeamSelection::all(3));
        REQUIRE(w.has_value());
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(std::abs((*w)[0] - cdouble(r, 0.0)) < 1e-15);
        CHECK(std::abs((*w)[1] - cdouble(0.0, -r)) < 1e-15);
        CHECK(std::abs((*w)[2]) == 0.0);
    }

    SECTION("mask drops unselected beams")
    {
        const arma::cx_vec h{{3.0, 0.0}, {4.0, 0.0}};
        const auto w = mrt_precoder(h, BeamSelection::from_indices({0}));
        REQUIRE(w.has_value());
        CHECK(std::abs((*w)[0] - cdouble(1.0, 0.0)) < 1e-15);
        CHECK((*w)[1] == cdouble(0.0, 0.0));
    }

    SECTION("vanishing masked channel")
    {
        const arma::cx_vec h{{0.0, 0.0}, {4.0, 0.0}};
        CHECK_FALSE(mrt_precoder(h, BeamSelection::from_indices({0})).has_value());
    }

    SECTION("matched filter gain equals the masked norm")
    {
        Rng rng(6);
        for (int rep = 0; rep < 50; ++rep)
        {
            arma::cx_vec h(16);
            for (auto &x : h)
                x = cdouble(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
            const auto sel = BeamSelection::from_indices({0, 3, 7, 11, 15});
            const auto w = mrt_precoder(h, sel);
            REQUIRE(w.has_value());
            CHECK(arma::norm(*w) == Approx(1.0).epsilon(1e-14));
            double masked = 0.0;
            for (auto b : sel.selected)
                masked += std::norm(h[b]);
            CHECK(std::abs(arma::dot(h, *w)) == Approx(std::sqrt(masked)).epsilon(1e-13));
        }
    }
}

TEST_CASE("Linkrate - SINR and rates")
{
    SECTION("orthogonal users see no interference")
    {
        arma::cx_mat h(2, 2, arma::fill::zeros);
        h(0, 0) = 2.0;
        h(1, 1) = cdouble(0.0, 1.0);
        const PowerAllocation p{arma::vec{1.0, 3.0}};
        CHECK(sinr(0, h, BeamSelection::all(2), p, 0.5) == Approx(8.0));
        CHECK(sinr(1, h, BeamSelection::all(2), p, 0.5) == Approx(6.0));
        const auto r = sum_rate(h, BeamSelection::all(2), p, 0.5);
        CHECK(r.sum_rate == Approx(std::log2(9.0) + std::log2(7.0)));
    }

    SECTION("identical users interfere fully")
    {
        arma::cx_mat h(2, 2);
        h.col(0) = arma::cx_vec{{1.0, 0.0}, {1.0, 0.0}};
        h.col(1) = h.col(0);
        const PowerAllocation p{arma::vec{1.0, 1.0}};
        // |h^T w|^2 = 2 for both; SINR = 2 / (2 + 1)
        CHECK(sinr(0, h, BeamSelection::all(2), p, 1.0) == Approx(2.0 / 3.0));
    }

    SECTION("single user closed form")
    {
        Rng rng(9);
        for (int rep = 0; rep < 20; ++rep)
        {
            arma::cx_mat h(8, 1);
            for (auto &x : h)
                x = cdouble(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
            const double p = uniform(rng, 0.1, 5.0);
            const double s2 = uniform(rng, 0.1, 2.0);
            const auto r = sum_rate(h, BeamSelection::all(8), PowerAllocation{arma::vec{p}}, s2);
            CHECK(r.sum_rate == Approx(std::log2(1.0 + p * std::pow(arma::norm(h), 2) / s2)).epsilon(1e-12));
        }
    }

    SECTION("zero power gives zero rate")
    {
        Rng rng(10);
        arma::cx_mat h(4, 3);
        for (auto &x : h)
            x = cdouble(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
        const auto r = sum_rate(h, BeamSelection::all(4), PowerAllocation{arma::zeros<arma::vec>(3)}, 1e-3);
        CHECK(r.sum_rate == 0.0);
    }

    SECTION("argument checks")
    {
        arma::cx_mat h(4, 2, arma::fill::ones);
        const auto all = BeamSelection::all(4);
        CHECK_THROWS_AS(sum_rate(h, all, PowerAllocation{arma::vec{1.0, 1.0}}, 0.0), std::domain_error);
        CHECK_THROWS_AS(sum_rate(h, all, PowerAllocation{arma::vec{1.0, 1.0}}, -1.0), std::domain_error);
        CHECK_THROWS_AS(sum_rate(h, all, PowerAllocation{arma::vec{1.0}}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(sum_rate(h, all, PowerAllocation{arma::vec{1.0, -1.0}}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(sinr(2, h, all, PowerAllocation{arma::vec{1.0, 1.0}}, 1.0), std::out_of_range);
    }
}

TEST_CASE("Linkrate - beamspace and spatial rates agree with every beam active")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        Rng rng(seed);
        const auto c = tiny(16, 4, 16, 2, 12);
        const auto ch = draw_realization(c, rng).channels;
        auto s = random_solution(c, rng);
        s.beam_set = BeamSelection::all(16);
        const double beam = sum_rate(to_beamspace(cascaded_spatial(ch, s.phases), ch.dft), s.beam_set, s.powers,
                                     c.noise_variance)
                                .sum_rate;
        const double spatial =
            oracle::spatial_sum_rate(ch, oracle::to_std(s.phases.phases), oracle::to_std(s.powers.powers), c.noise_variance);
        CHECK(std::abs(beam - spatial) <= 1e-9 * spatial);
    }
}

TEST_CASE("Linkrate - evaluate_solution against the reference")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        Rng rng(100 + seed);
        const auto c = tiny();
        const auto ch = draw_realization(c, rng).channels;
        const auto s = random_solution(c, rng);
        const double got = evaluate_solution(ch, c, s);
        CHECK(got == Approx(oracle_rate(ch, c, s)).epsilon(1e-10));
        CHECK(got >= 0.0);
    }
}

TEST_CASE("Linkrate - user permutation leaves the sum rate unchanged")
{
    Rng rng(55);
    const auto c = tiny();
    auto ch = draw_realization(c, rng).channels;
    auto s = random_solution(c, rng);
    const double before = evaluate_solution(ch, c, s);

    const arma::uvec perm{2, 0, 1};
    for (auto &g : ch.ris_ue)
        g = g.cols(perm);
    s.powers.powers = s.powers.powers.elem(perm);
    CHECK(evaluate_solution(ch, c, s) == Approx(before).epsilon(1e-12));
}

TEST_CASE("Linkrate - fast objective matches the full evaluation")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        Rng rng(200 + seed);
        const auto c = seed % 2 ? tiny() : ScenarioConfig::defaults(40);
        const auto ch = draw_realization(c, rng).channels;
        const SumRateObjective objective(ch, c.noise_variance);
        REQUIRE(objective.n_antennas() == c.n_antennas);
        REQUIRE(objective.total_uc() == c.total_uc());
        const auto s = random_solution(c, rng);
        const double full = evaluate_solution(ch, c, s);
        CHECK(objective(s) == Approx(full).epsilon(1e-10));

        const auto rows = objective.selected_rows(s.beam_set.selected, oracle::to_std(s.phases.phases));
        const arma::cx_mat h = to_beamspace(cascaded_spatial(ch, s.phases), ch.dft);
        const arma::uvec sel = arma::conv_to<arma::uvec>::from(s.beam_set.selected);
        CHECK(arma::norm(rows - h.rows(sel), "fro") <= 1e-12 * arma::norm(h, "fro"));
    }
}

TEST_CASE("Linkrate - degenerate users")
{
    // User 1 lives entirely outside the selected beams
    arma::cx_mat h(3, 2, arma::fill::zeros);
    h(0, 0) = 1.0;
    h(1, 0) = 0.5;
    h(2, 1) = 2.0;
    const auto sel = BeamSelection::from_indices({0, 1});
    const PowerAllocation p{arma::vec{1.0, 1.0}};
    const auto r = sum_rate(h, sel, p, 0.1);
    CHECK(r.per_ue_rate[1] == 0.0);
    CHECK(r.per_ue_rate[0] == Approx(std::log2(1.0 + 1.25 / 0.1)));

    const arma::cx_mat rows = h.rows(arma::uvec{0, 1});
    const std::vector<double> pw{1.0, 1.0};
    CHECK(sum_rate_masked(rows, pw, 0.1).sum_rate == Approx(r.sum_rate).epsilon(1e-14));

    const std::vector<oracle::CVec> cols{{h(0, 0), h(1, 0), h(2, 0)}, {h(0, 1), h(1, 1), h(2, 1)}};
    CHECK(oracle::sum_rate_from_columns(cols, {true, true, false}, pw, 0.1) == Approx(r.sum_rate));
}

TEST_CASE("Linkrate - structural properties")
{
    Rng rng(77);
    const auto c = tiny();
    const auto ch = draw_realization(c, rng).channels;
    const auto s = random_solution(c, rng);
    const arma::cx_mat h = to_beamspace(cascaded_spatial(ch, s.phases), ch.dft);

    SECTION("single user rate grows with its power")
    {
        const arma::cx_mat h1 = h.col(0);
        double last = -1.0;
        for (double p = 0.5; p < 20.0; p *= 1.5)
        {
            const double r = sum_rate(h1, s.beam_set, PowerAllocation{arma::vec{p}}, c.noise_variance).sum_rate;
            CHECK(r > last);
            last = r;
        }
    }

    SECTION("scaling the channel and the noise together keeps the rate")
    {
        const double a = 3.7;
        const double base = sum_rate(h, s.beam_set, s.powers, c.noise_variance).sum_rate;
        const double scaled = sum_rate(a * h, s.beam_set, s.powers, a * a * c.noise_variance).sum_rate;
        CHECK(scaled == Approx(base).epsilon(1e-12));
    }

    SECTION("a common phase rotation of all UCs keeps the rate")
    {
        auto t = s;
        t.phases.phases = arma::vec(s.phases.phases + 1.1);
        for (auto &x : t.phases.phases)
            x = std::fmod(x, two_pi);
        CHECK(evaluate_solution(ch, c, t) == Approx(evaluate_solution(ch, c, s)).epsilon(1e-11));
    }

    SECTION("feasibility checks")
    {
        auto bad = s;
        bad.powers.powers *= 1.01;
        CHECK_THROWS_AS(evaluate_solution(ch, c, bad), std::invalid_argument);
        bad = s;
        bad.powers.powers[0] = -bad.powers.powers[0];
        CHECK_THROWS_AS(evaluate_solution(ch, c, bad), std::invalid_argument);
        bad = s;
        bad.phases.phases[0] = 7.0;
        CHECK_THROWS_AS(evaluate_solution(ch, c, bad), std::invalid_argument);
        bad = s;
        bad.beam_set = BeamSelection::from_indices({0, 1, 2});
        CHECK_THROWS_AS(evaluate_solution(ch, c, bad), std::invalid_argument);
    }
}
