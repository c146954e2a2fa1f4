// SPDX-License-Identifier: Apache-2.0
//
// gfdmsim: semi-blind multiuser SIMO GFDM link simulation
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

#include "test_support.hpp"

#include "gfdmsim/impairments.hpp"

using namespace gfdmsim;
using Catch::Approx;

namespace {

SystemConfig small_system() {
    return small_reference_config().system;
}

AssignmentPlan small_plan(const SystemConfig& cfg) {
    return build_assignment(cfg, build_modulation_matrix(cfg), contiguous_block_sets(cfg));
}

UserImpairment random_user(const SystemConfig& cfg, Rng& rng) {
    std::uniform_real_distribution<double> cfo(-0.5, 0.5);
    std::uniform_real_distribution<double> eps(0.8, 1.2);
    std::uniform_real_distribution<double> theta(-0.26, 0.26);
    const double phi = cfo(rng);
    const double e = eps(rng);
    const double t = theta(rng);
    return make_impairment(phi, e, t, draw_channel(cfg.channel_taps, 1.5, cfg.rx_antennas, rng), cfg.subcarriers);
}

} // namespace

TEST_CASE("iq parameters", "[impairments]") {
    const auto ideal = iq_params(1.0, 0.0);
    CHECK(std::abs(ideal.alpha - 1.0) < 1e-15);
    CHECK(std::abs(ideal.beta) < 1e-15);

    const auto p = iq_params(1.2, 15.0 * kPi / 180.0);
    CHECK(p.alpha.real() == Approx(1.0796).margin(1e-4));
    CHECK(p.alpha.imag() == Approx(0.1553).margin(1e-4));
    CHECK(p.beta.real() == Approx(-0.0796).margin(1e-4));
    CHECK(p.beta.imag() == Approx(-0.1553).margin(1e-4));

    Rng rng(11);
    std::uniform_real_distribution<double> eps(0.5, 1.5);
    std::uniform_real_distribution<double> theta(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double e = eps(rng);
        const double t = theta(rng);
        const auto q = iq_params(e, t);
        CHECK(std::abs(q.alpha + q.beta - 1.0) < 1e-15);
    }
}

TEST_CASE("exponential delay profile", "[impairments]") {
    const RVector p = exponential_delay_profile(3, 1.5);
    CHECK(p.sum() == Approx(1.0).margin(1e-15));
    CHECK(p[1] / p[0] == Approx(std::exp(-1.0 / 1.5)).epsilon(1e-14));
    CHECK(exponential_delay_profile(1, 1.5)[0] == 1.0);
    CHECK_THROWS_AS(exponential_delay_profile(0, 1.5), ConfigError);
    CHECK_THROWS_AS(exponential_delay_profile(3, 0.0), ConfigError);
}

TEST_CASE("drawn channels follow the profile on average", "[impairments]") {
    Rng rng(5);
    const int draws = 100000;
    SECTION("three taps") {
        RVector power = RVector::Zero(3);
        for (int i = 0; i < draws; ++i) {
            power += draw_channel(3, 1.5, 1, rng).row(0).cwiseAbs2().transpose();
        }
        power /= draws;
        CHECK(power[1] / power[0] == Approx(0.5134).epsilon(0.02));
        CHECK(power.sum() == Approx(1.0).epsilon(0.02));
    }
    SECTION("single tap") {
        double power = 0.0;
        for (int i = 0; i < draws; ++i) {
            power += std::norm(draw_channel(1, 1.5, 1, rng)(0, 0));
        }
        CHECK(power / draws == Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("CFO-included CIR", "[impairments]") {
    Rng rng(2);
    const CMatrix hbar = test::random_cmatrix(3, 4, rng);
    SECTION("zero CFO only reorders the taps") {
        const CVector h = cfo_included_cir(hbar, 0.0, 16);
        for (int j = 0; j < 4; ++j) {
            CHECK(h.segment(3 * j, 3) == hbar.col(3 - j));
        }
    }
    SECTION("magnitudes are preserved") {
        const CVector h = cfo_included_cir(hbar, 0.37, 16);
        for (int j = 0; j < 4; ++j) {
            CHECK((h.segment(3 * j, 3).cwiseAbs() - hbar.col(3 - j).cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
    SECTION("tap 2 at phi = 0.25, K = 16 turns by pi / 16") {
        const CVector h = cfo_included_cir(hbar, 0.25, 16);
        // tap 2 lives in block L - 2 = 2
        const CVector ratio = h.segment(6, 3).cwiseQuotient(hbar.col(1));
        for (int n = 0; n < 3; ++n) {
            CHECK(std::abs(ratio[n] - std::exp(cplx(0.0, kPi / 16.0))) < 1e-14);
        }
    }
}

TEST_CASE("CFO matrix", "[impairments]") {
    CHECK(build_cfo_matrix(0.0, 5, 8).isIdentity(0.0));
    const CMatrix e = build_cfo_matrix(0.5, 3, 2);
    CHECK(std::abs(e(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(e(1, 1) - kJ) < 1e-15);
    CHECK(std::abs(e(2, 2) + 1.0) < 1e-15);
    const CMatrix e2 = build_cfo_matrix(-0.31, 20, 16);
    CHECK((e2.diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
    CHECK((e2 - CMatrix(e2.diagonal().asDiagonal())).isZero(0.0));
}

TEST_CASE("channel matrix structure", "[impairments]") {
    Rng rng(8);
    SECTION("single tap, single antenna gives a scaled identity") {
        const CVector h = test::random_cvector(1, rng);
        const CMatrix H = build_channel_matrix(h, 6, 1, 1);
        CHECK(H == h[0] * CMatrix::Identity(6, 6));
    }
    SECTION("banded rows touch only their own antenna") {
        const int G = 10;
        const int L = 3;
        const int nr = 2;
        const CVector h = test::random_cvector(L * nr, rng);
        const CMatrix H = build_channel_matrix(h, G, L, nr);
        REQUIRE(H.rows() == (G - L + 1) * nr);
        for (Eigen::Index r = 0; r < H.rows(); ++r) {
            int nonzero = 0;
            for (Eigen::Index c = 0; c < G; ++c) {
                if (H(r, c) != cplx{}) {
                    ++nonzero;
                    const auto j = c - r / nr;
                    CHECK(H(r, c) == h[j * nr + r % nr]);
                }
            }
            CHECK(nonzero <= L);
        }
    }
    SECTION("H s equals linear convolution with the rotated raw taps") {
        const int G = 12;
        const int L = 3;
        const int nr = 2;
        const double phi = 0.23;
        const int K = 4;
        const CMatrix hbar = test::random_cmatrix(nr, L, rng);
        const CVector h = cfo_included_cir(hbar, phi, K);
        const CVector s = test::random_cvector(G, rng);
        const CVector y = build_channel_matrix(h, G, L, nr) * s;
        for (int r = 0; r < G - L + 1; ++r) {
            for (int n = 0; n < nr; ++n) {
                cplx acc{};
                const int g = r + L - 1; // the kept sample
                for (int l = 1; l <= L; ++l) {
                    acc += hbar(n, l - 1) * std::exp(cplx(0.0, 2.0 * kPi * phi * l / K)) * s[g - (l - 1)];
                }
                CHECK(std::abs(y[r * nr + n] - acc) < 1e-12);
            }
        }
        CHECK((apply_channel(h, s, L, nr) - y).cwiseAbs().maxCoeff() < 1e-13);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(build_channel_matrix(CVector::Zero(5), 10, 3, 2), InputError);
    }
}

TEST_CASE("upsilon identity gamma^H H = h^T Upsilon", "[impairments]") {
    // the estimator's Upsilon builder is exercised here against the channel matrix
    Rng rng(21);
    const int G = 14;
    const int L = 3;
    const int nr = 3;
    for (int trial = 0; trial < 5; ++trial) {
        const CVector h = test::random_cvector(L * nr, rng);
        const CVector gamma = test::random_cvector((G - L + 1) * nr, rng);
        const CMatrix lhs = gamma.adjoint() * build_channel_matrix(h, G, L, nr);
        const CMatrix rhs = h.transpose() * build_upsilon(gamma, G, L, nr);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("received symbol equals the dense model", "[impairments]") {
    const auto sys = small_system();
    const auto plan = small_plan(sys);
    Rng rng(4);
    std::vector<UserImpairment> users;
    std::vector<CVector> data;
    for (int u = 0; u < sys.users; ++u) {
        users.push_back(random_user(sys, rng));
        data.push_back(test::random_cvector(plan.resources_per_user(), rng));
    }
    const CVector y = received_symbol(sys, plan, users, data);
    CHECK(test::relative_error(y, test::dense_received(sys, plan, users, data)) < 1e-12);

    // CFO commutes with the diagonal: (H E) (Psi d) == H (E Psi d)
    const auto& u0 = users[0];
    const CMatrix H = build_channel_matrix(u0.h, sys.cp_symbol_length(), sys.channel_taps, sys.rx_antennas);
    const CMatrix E = build_cfo_matrix(u0.phi, sys.cp_symbol_length(), sys.subcarriers);
    const CVector a = (H * E) * (plan.psi(0) * data[0]);
    const CVector b = H * (E * plan.psi(0) * data[0]);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("received model special cases", "[impairments]") {
    Rng rng(9);
    SECTION("all impairments off") {
        auto sys = small_system();
        sys.users = 1;
        sys.data_subcarriers = 6;
        const auto plan = build_assignment(sys, build_modulation_matrix(sys),
                                           {{data_subcarrier_bins(8, 6), data_subcarrier_bins(8, 6)}});
        const auto user = make_impairment(0.0, 1.0, 0.0, draw_channel(sys.channel_taps, 1.5, sys.rx_antennas, rng),
                                          sys.subcarriers);
        const CVector d = test::random_cvector(plan.resources_per_user(), rng);
        const CMatrix H = build_channel_matrix(user.h, sys.cp_symbol_length(), sys.channel_taps, sys.rx_antennas);
        const CVector y = received_symbol(sys, plan, {user}, {d});
        CHECK((y - H * plan.psi(0) * d).cwiseAbs().maxCoeff() < 1e-13);
    }
    SECTION("real pulse and real data: the image adds (alpha + beta) = 1 times the source") {
        auto sys = small_system();
        sys.prototype = PrototypeShape::Rectangular;
        sys.subsymbols = 1;
        // the DC column of a rectangular single-subsymbol A_cp is real
        const CVector real_column = build_modulation_matrix(sys).A_cp.col(0);
        REQUIRE(real_column.imag().isZero(0.0));
        const auto user = make_impairment(0.1, 1.1, 0.2, draw_channel(sys.channel_taps, 1.5, sys.rx_antennas, rng),
                                          sys.subcarriers);
        const CMatrix H = build_channel_matrix(user.h, sys.cp_symbol_length(), sys.channel_taps, sys.rx_antennas);
        const CMatrix E = build_cfo_matrix(user.phi, sys.cp_symbol_length(), sys.subcarriers);
        const CVector s = 0.7 * real_column;
        const CVector both = H * E * (user.alpha * s + user.beta * s.conjugate());
        CHECK((both - (user.alpha + user.beta) * (H * E * s)).cwiseAbs().maxCoeff() < 1e-13);
    }
    SECTION("linearity in the data") {
        const auto sys = small_system();
        const auto plan = small_plan(sys);
        std::vector<UserImpairment> users;
        std::vector<CVector> d1;
        std::vector<CVector> d2;
        std::vector<CVector> sum;
        for (int u = 0; u < sys.users; ++u) {
            users.push_back(random_user(sys, rng));
            d1.push_back(test::random_cvector(plan.resources_per_user(), rng));
            d2.push_back(test::random_cvector(plan.resources_per_user(), rng));
            sum.push_back(d1.back() + d2.back());
        }
        const CVector lhs = received_symbol(sys, plan, users, sum);
        const CVector rhs = received_symbol(sys, plan, users, d1) + received_symbol(sys, plan, users, d2);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("frame synthesis", "[impairments]") {
    const auto sys = small_system();
    const auto plan = small_plan(sys);
    Rng rng(13);
    std::vector<UserImpairment> users;
    for (int u = 0; u < sys.users; ++u) {
        users.push_back(random_user(sys, rng));
    }
    std::vector<std::vector<CVector>> data(sys.symbols_per_frame);
    for (auto& s : data) {
        for (int u = 0; u < sys.users; ++u) {
            s.push_back(test::random_cvector(plan.resources_per_user(), rng));
        }
    }

    SECTION("noise-free frame and measured power") {
        const auto frame = synthesize_received(sys, plan, users, data, 0.0, rng);
        REQUIRE(frame.y.size() == data.size());
        double power = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            CHECK(frame.y[i].size() == sys.received_length());
            CHECK(test::relative_error(frame.y[i], test::dense_received(sys, plan, users, data[i])) < 1e-12);
            power += frame.y[i].squaredNorm();
        }
        CHECK(frame.truth.signal_power ==
              Approx(power / (static_cast<double>(data.size()) * sys.received_length())).epsilon(1e-12));
        CHECK(frame.sigma2 == 0.0);
    }
    SECTION("noise-only frame has the requested variance") {
        for (auto& s : data) {
            for (auto& d : s) {
                d.setZero();
            }
        }
        auto big = sys;
        big.symbols_per_frame = 2000; // 2000 * 51 samples
        data.resize(2000, data.front());
        const double sigma2 = 0.3;
        const auto frame = synthesize_received(big, plan, users, data, sigma2, rng);
        double acc = 0.0;
        double n = 0.0;
        for (const auto& y : frame.y) {
            acc += y.squaredNorm();
            n += static_cast<double>(y.size());
        }
        CHECK(acc / n == Approx(sigma2).epsilon(0.02));
    }
    SECTION("layout mismatches are input errors") {
        auto short_frame = data;
        short_frame.pop_back();
        CHECK_THROWS_AS(synthesize_received(sys, plan, users, short_frame, 0.0, rng), InputError);
        auto bad = data;
        bad[0].pop_back();
        CHECK_THROWS_AS(synthesize_received(sys, plan, users, bad, 0.0, rng), InputError);
        ReceivedFrame f;
        CHECK_THROWS_AS(add_noise(f, -1.0, rng), InputError);
    }
}
