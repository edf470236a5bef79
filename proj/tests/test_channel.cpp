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

#include "beamris/channel.hpp"
#include "oracle.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace beamris;
using Catch::Approx;

namespace
{
    ScenarioConfig small_config(std::size_t n_ris = 2, std::size_t m_total = 16)
    {
        auto c = ScenarioConfig::defaults(m_total);
        c.n_antennas = 16;
        c.n_users = 3;
        c.n_selected_beams = 4;
        c.n_ris = n_ris;
        c.uc_per_ris = split_uc(m_total, n_ris);
        return c;
    }

    std::size_t numerical_rank(const arma::cx_mat &m)
    {
        const arma::vec s = arma::svd(m);
        std::size_t r = 0;
        for (double v : s)
            if (v > 1e-10 * s.max())
                ++r;
        return r;
    }

    arma::vec random_phases(std::size_t m, Rng &rng)
    {
        arma::vec p(m);
        for (auto &x : p)
            x = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        return p;
    }
}

TEST_CASE("Channel - steering vector")
{
    const arma::cx_vec a0 = steering(0.0, 4);
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(a0[i].real() == Approx(0.5).epsilon(1e-15));
        CHECK(a0[i].imag() == Approx(0.0).margin(1e-15));
    }

    const arma::cx_vec a1 = steering(0.5, 2);
    CHECK(a1[0].real() == Approx(1.0 / std::sqrt(2.0)));
    CHECK(a1[1].real() == Approx(-1.0 / std::sqrt(2.0)));
    CHECK(std::abs(a1[1].imag()) < 1e-15);

    Rng rng(2);
    for (int rep = 0; rep < 200; ++rep)
    {
        const double theta = uniform(rng, -0.5, 0.5);
        const std::size_t n = 1 + rng() % 128;
        const arma::cx_vec a = steering(theta, n);
        CHECK(std::abs(arma::norm(a) - 1.0) < 1e-14);
        const std::size_t i = rng() % n;
        const auto expected = std::polar(1.0 / std::sqrt(double(n)), -2.0 * std::numbers::pi * theta * double(i));
        CHECK(std::abs(a[i] - expected) < 1e-14);
    }

    CHECK_THROWS_AS(steering(0.1, 0), std::invalid_argument);
}

TEST_CASE("Channel - RIS to user vector")
{
    SECTION("LoS only, broadside")
    {
        const auto g = ris_ue_channel({{1.0, 0.0}, 0.0}, {}, 4);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(g[i] - cdouble(1.0, 0.0)) < 1e-15);
    }

    SECTION("single scattered path")
    {
        const std::vector<PathTerm> nlos{{{1.0, 0.0}, 0.0}};
        const auto g = ris_ue_channel({{0.0, 0.0}, 0.3}, nlos, 4);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(g[i] - cdouble(1.0, 0.0)) < 1e-15);
    }

    SECTION("generic draw matches term-by-term sum and the triangle bound")
    {
        Rng rng(21);
        for (int rep = 0; rep < 50; ++rep)
        {
            const std::size_t m = 1 + rng() % 32;
            const std::size_t n_p = 1 + rng() % 4;
            PathTerm los{std::polar(uniform(rng, 0.0, 2.0), uniform(rng, -3.0, 3.0)), uniform(rng, -0.5, 0.5)};
            std::vector<PathTerm> nlos;
            for (std::size_t l = 0; l < n_p; ++l)
                nlos.push_back({std::polar(uniform(rng, 0.0, 2.0), uniform(rng, -3.0, 3.0)), uniform(rng, -0.5, 0.5)});

            const auto g = ris_ue_channel(los, nlos, m);
            REQUIRE(g.n_elem == m);
            double bound = std::abs(los.gain);
            for (const auto &p : nlos)
                bound += std::abs(p.gain) / std::sqrt(double(n_p));
            bound *= std::sqrt(double(m));
            CHECK(arma::norm(g) <= bound * (1.0 + 1e-12));

            for (std::size_t i = 0; i < m; ++i)
            {
                auto term = [&](const PathTerm &p) {
                    return p.gain * std::exp(oracle::cd(0.0, -2.0 * std::numbers::pi * p.theta * double(i))) /
                           std::sqrt(double(m));
                };
                oracle::cd expected = std::sqrt(double(m)) * term(los);
                for (const auto &p : nlos)
                    expected += std::sqrt(double(m) / double(n_p)) * term(p);
                CHECK(std::abs(g[i] - expected) < 1e-12 * (1.0 + std::abs(expected)));
            }
        }
    }
}

TEST_CASE("Channel - BS to RIS matrix")
{
    Rng rng(4);
    const PathPair los{{1.0, 0.0}, 0.13, -0.27};
    const auto c0 = bs_ris_channel(los, {}, 16, 8);
    REQUIRE(c0.n_rows == 16);
    REQUIRE(c0.n_cols == 8);
    CHECK(numerical_rank(c0) == 1);
    const arma::vec s = arma::svd(c0);
    CHECK(s[0] == Approx(std::sqrt(16.0 * 8.0)).epsilon(1e-12));

    std::vector<PathPair> nlos{{std::polar(0.7, 1.0), 0.31, 0.05}, {std::polar(0.4, -2.0), -0.41, 0.22}};
    const auto c2 = bs_ris_channel(los, nlos, 16, 8);
    CHECK(numerical_rank(c2) <= 3);

    // Entry check against the outer-product definition
    const auto ad = steering(0.31, 16);
    const auto aa = steering(0.05, 8);
    const auto expected01 = std::sqrt(16.0 * 8.0) * (steering(0.13, 16)[0] * std::conj(steering(-0.27, 8)[1])) +
                            std::sqrt(16.0 * 8.0 / 2.0) *
                                (nlos[0].gain * ad[0] * std::conj(aa[1]) +
                                 nlos[1].gain * steering(-0.41, 16)[0] * std::conj(steering(0.22, 8)[1]));
    CHECK(std::abs(c2(0, 1) - expected01) < 1e-12);
}

TEST_CASE("Channel - DFT beamformer")
{
    const auto u4 = dft_matrix(4);
    const auto a = steering(-0.375, 4);
    CHECK(arma::norm(u4.col(0) - a) < 1e-15);

    const auto u1 = dft_matrix(1);
    REQUIRE(u1.n_elem == 1);
    CHECK(std::abs(u1(0, 0) - cdouble(1.0, 0.0)) < 1e-15);

    for (std::size_t n = 1; n <= 64; ++n)
    {
        const auto u = dft_matrix(n);
        const arma::cx_mat eye = arma::eye<arma::cx_mat>(n, n);
        CHECK(arma::norm(u * u.t() - eye, "fro") < 1e-12);
        CHECK(arma::norm(u.t() * u - eye, "fro") < 1e-12);
    }
    CHECK_THROWS_AS(dft_matrix(0), std::invalid_argument);
}

TEST_CASE("Channel - cascaded spatial channel")
{
    Rng rng(8);

    SECTION("single RIS, zero phases reduces to C G")
    {
        const auto ch = draw_realization(small_config(1, 8), rng).channels;
        const RisProfile zero{arma::zeros<arma::vec>(8)};
        const arma::cx_mat expected = ch.bs_ris[0] * ch.ris_ue[0];
        CHECK(arma::norm(cascaded_spatial(ch, zero) - expected, "fro") <= 1e-12 * arma::norm(expected, "fro"));
    }

    SECTION("common phase offset scales the channel")
    {
        const auto ch = draw_realization(small_config(1, 8), rng).channels;
        const RisProfile p{random_phases(8, rng)};
        const double shift = 0.9;
        const RisProfile q{p.phases + shift};
        const arma::cx_mat h = cascaded_spatial(ch, p);
        const arma::cx_mat hq = cascaded_spatial(ch, q);
        CHECK(arma::norm(hq - std::polar(1.0, shift) * h, "fro") <= 1e-12 * arma::norm(h, "fro"));
    }

    SECTION("two RIS equals the per-RIS products summed entry by entry")
    {
        const auto ch = draw_realization(small_config(2, 12), rng).channels;
        const RisProfile p{random_phases(12, rng)};
        const arma::cx_mat h = cascaded_spatial(ch, p);
        const auto phases = oracle::to_std(p.phases);
        for (std::size_t k = 0; k < ch.n_users(); ++k)
        {
            // Undo U from the oracle's beamspace column
            const auto beam = oracle::beamspace_column(ch, phases, k);
            arma::cx_vec b(beam.size());
            for (std::size_t i = 0; i < beam.size(); ++i)
                b[i] = beam[i];
            const arma::cx_vec spatial = ch.dft.t() * b;
            CHECK(arma::norm(h.col(k) - spatial) <= 1e-11 * arma::norm(spatial));
        }
    }

    SECTION("linear in G")
    {
        auto ch = draw_realization(small_config(1, 8), rng).channels;
        const RisProfile p{random_phases(8, rng)};
        const arma::cx_mat h = cascaded_spatial(ch, p);
        ch.ris_ue[0] *= 2.0;
        CHECK(arma::norm(cascaded_spatial(ch, p) - 2.0 * h, "fro") == Approx(0.0).margin(1e-12 * arma::norm(h, "fro")));
    }

    SECTION("rank one with a single LoS path and a single RIS")
    {
        auto c = small_config(1, 8);
        c.n_nlos_paths = 0;
        const auto ch = draw_realization(c, rng).channels;
        const RisProfile p{random_phases(8, rng)};
        CHECK(numerical_rank(cascaded_spatial(ch, p)) <= 1);
    }

    SECTION("profile length is checked")
    {
        const auto ch = draw_realization(small_config(2, 12), rng).channels;
        CHECK_THROWS_AS(cascaded_spatial(ch, RisProfile{arma::zeros<arma::vec>(11)}), std::invalid_argument);
    }
}

TEST_CASE("Channel - beamspace transform")
{
    Rng rng(13);
    const auto ch = draw_realization(small_config(2, 16), rng).channels;
    const arma::cx_mat hbar = cascaded_spatial(ch, RisProfile{random_phases(16, rng)});

    const arma::cx_mat eye = arma::eye<arma::cx_mat>(16, 16);
    CHECK(arma::norm(to_beamspace(hbar, eye) - hbar, "fro") == 0.0);

    const arma::cx_mat h = to_beamspace(hbar, ch.dft);
    for (std::size_t k = 0; k < h.n_cols; ++k)
        CHECK(arma::norm(h.col(k)) == Approx(arma::norm(hbar.col(k))).epsilon(1e-12));

    // h_k^T h_i^* is preserved because U^T U^* = I
    const arma::cx_mat gram_beam = h.st() * arma::conj(h);
    const arma::cx_mat gram_spatial = hbar.st() * arma::conj(hbar);
    CHECK(arma::norm(gram_beam - gram_spatial, "fro") <= 1e-12 * arma::norm(gram_spatial, "fro"));

    CHECK_THROWS_AS(to_beamspace(hbar, dft_matrix(8)), std::invalid_argument);
}

TEST_CASE("Channel - realization shapes and determinism")
{
    const auto c = ScenarioConfig::defaults(20);
    Rng a(31), b(31);
    const auto ra = draw_realization(c, a);
    const auto rb = draw_realization(c, b);
    REQUIRE(ra.channels.n_ris() == 8);
    CHECK_NOTHROW(ra.channels.check_shapes());
    CHECK(ra.channels.uc_per_ris() == c.uc_per_ris);
    CHECK(ra.channels.n_users() == 8);
    CHECK(ra.channels.n_antennas() == 64);
    for (std::size_t j = 0; j < 8; ++j)
    {
        CHECK(arma::approx_equal(ra.channels.bs_ris[j], rb.channels.bs_ris[j], "absdiff", 0.0));
        CHECK(arma::approx_equal(ra.channels.ris_ue[j], rb.channels.ris_ue[j], "absdiff", 0.0));
    }

    // The scattered-path amplitude rule changes the channel but not the stream layout
    auto nlos_cfg = c;
    nlos_cfg.scatter_loss = ScatterLoss::nlos;
    Rng d(31);
    const auto rn = draw_realization(nlos_cfg, d);
    CHECK(arma::norm(rn.channels.ris_ue[0], "fro") < arma::norm(ra.channels.ris_ue[0], "fro") * 1.5);
    CHECK(ra.layout.ue_positions[0].x == rn.layout.ue_positions[0].x);

    // BS-RIS LoS amplitude follows the UMi LoS loss at the cell radius
    auto los_only = c;
    los_only.n_nlos_paths = 0;
    Rng e(1);
    const auto rl = draw_realization(los_only, e);
    const double eta = std::sqrt(std::pow(10.0, -path_loss_db(40.0, 30.0, true) / 10.0));
    const arma::vec s = arma::svd(rl.channels.bs_ris[0]);
    CHECK(s[0] == Approx(eta * std::sqrt(64.0 * c.uc_per_ris[0])).epsilon(1e-10));
}

TEST_CASE("Channel - dump round trip")
{
    Rng rng(17);
    const auto ch = draw_realization(small_config(2, 10), rng).channels;
    const auto path = std::filesystem::temp_directory_path() / "beamris_channel_dump_test.json";
    write_channel_dump(ch, path);
    const auto back = read_channel_dump(path);
    REQUIRE(back.n_ris() == ch.n_ris());
    for (std::size_t j = 0; j < ch.n_ris(); ++j)
    {
        CHECK(arma::approx_equal(back.bs_ris[j], ch.bs_ris[j], "absdiff", 0.0));
        CHECK(arma::approx_equal(back.ris_ue[j], ch.ris_ue[j], "absdiff", 0.0));
    }
    CHECK(arma::approx_equal(back.dft, ch.dft, "absdiff", 0.0));

    {
        std::ofstream out(path);
        out << R"({"format": "something-else", "version": 1})";
    }
    CHECK_THROWS_AS(read_channel_dump(path), std::runtime_error);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_channel_dump(path), std::runtime_error);
}

TEST_CASE("Channel - shape checks")
{
    Rng rng(3);
    auto ch = draw_realization(small_config(2, 8), rng).channels;
    ch.ris_ue[1] = arma::cx_mat(5, 3, arma::fill::zeros);
    CHECK_THROWS_AS(ch.check_shapes(), std::invalid_argument);
}
