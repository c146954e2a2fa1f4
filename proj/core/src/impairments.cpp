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

#include "gfdmsim/impairments.hpp"

#include <cmath>
#include <string>

namespace gfdmsim {

IqParams iq_params(double epsilon, double theta) {
    const cplx mismatch = std::polar(epsilon, theta);
    return {(1.0 + mismatch) / 2.0, (1.0 - mismatch) / 2.0};
}

UserImpairment make_impairment(double phi, double epsilon, double theta, CMatrix hbar, int subcarriers) {
    UserImpairment imp;
    imp.phi = phi;
    imp.epsilon = epsilon;
    imp.theta = theta;
    const auto iq = iq_params(epsilon, theta);
    imp.alpha = iq.alpha;
    imp.beta = iq.beta;
    imp.h = cfo_included_cir(hbar, phi, subcarriers);
    imp.hbar = std::move(hbar);
    return imp;
}

RVector exponential_delay_profile(int taps, double rms_delay_spread) {
    if (taps < 1 || !(rms_delay_spread > 0.0)) {
        throw ConfigError("delay profile needs L >= 1 and a positive rms delay spread");
    }
    RVector p(taps);
    for (int l = 0; l < taps; ++l) {
        p[l] = std::exp(-static_cast<double>(l) / rms_delay_spread);
    }
    return p / p.sum();
}

CMatrix draw_channel(int taps, double rms_delay_spread, int rx_antennas, Rng& rng) {
    const RVector profile = exponential_delay_profile(taps, rms_delay_spread);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix hbar(rx_antennas, taps);
    for (int l = 0; l < taps; ++l) {
        const double scale = std::sqrt(profile[l] / 2.0);
        for (int n = 0; n < rx_antennas; ++n) {
            const double re = normal(rng);
            const double im = normal(rng);
            hbar(n, l) = scale * cplx(re, im);
        }
    }
    return hbar;
}

CVector cfo_included_cir(const CMatrix& hbar, double phi, int subcarriers) {
    const auto rx = hbar.rows();
    const auto taps = hbar.cols();
    CVector h(rx * taps);
    for (Eigen::Index j = 0; j < taps; ++j) {
        const Eigen::Index tap = taps - j; // 1-based tap index held by block j
        const cplx rot = std::polar(1.0, 2.0 * kPi * phi * static_cast<double>(tap) / subcarriers);
        h.segment(j * rx, rx) = hbar.col(tap - 1) * rot;
    }
    return h;
}

CVector cfo_ramp(double phi, int length, int subcarriers) {
    CVector e(length);
    for (int g = 0; g < length; ++g) {
        e[g] = std::polar(1.0, 2.0 * kPi * phi * static_cast<double>(g) / subcarriers);
    }
    return e;
}

CMatrix build_cfo_matrix(double phi, int length, int subcarriers) {
    return cfo_ramp(phi, length, subcarriers).asDiagonal();
}

CMatrix build_channel_matrix(const CVector& h, int length, int taps, int rx_antennas) {
    if (h.size() != static_cast<Eigen::Index>(taps) * rx_antennas || taps > length) {
        throw InputError("CIR length " + std::to_string(h.size()) + " does not match N_r*L = " +
                         std::to_string(taps * rx_antennas));
    }
    const int kept = length - taps + 1;
    CMatrix H = CMatrix::Zero(static_cast<Eigen::Index>(kept) * rx_antennas, length);
    for (int r = 0; r < kept; ++r) {
        for (int j = 0; j < taps; ++j) {
            H.block(static_cast<Eigen::Index>(r) * rx_antennas, r + j, rx_antennas, 1) =
                h.segment(static_cast<Eigen::Index>(j) * rx_antennas, rx_antennas);
        }
    }
    return H;
}

CVector apply_channel(const CVector& h, const CVector& x, int taps, int rx_antennas) {
    const auto length = x.size();
    const auto kept = length - taps + 1;
    CVector y = CVector::Zero(kept * rx_antennas);
    for (Eigen::Index r = 0; r < kept; ++r) {
        auto block = y.segment(r * rx_antennas, rx_antennas);
        for (int j = 0; j < taps; ++j) {
            block += h.segment(static_cast<Eigen::Index>(j) * rx_antennas, rx_antennas) * x[r + j];
        }
    }
    return y;
}

CMatrix apply_channel(const CVector& h, const CMatrix& x, int taps, int rx_antennas) {
    CMatrix y(static_cast<Eigen::Index>(x.rows() - taps + 1) * rx_antennas, x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        y.col(c) = apply_channel(h, CVector(x.col(c)), taps, rx_antennas);
    }
    return y;
}

CMatrix effective_matrix(const CVector& h, double phi, const CMatrix& psi, int subcarriers, int taps,
                         int rx_antennas, bool conjugate_psi) {
    const CVector ramp = cfo_ramp(phi, static_cast<int>(psi.rows()), subcarriers);
    const CMatrix rotated = conjugate_psi ? CMatrix(ramp.asDiagonal() * psi.conjugate())
                                          : CMatrix(ramp.asDiagonal() * psi);
    return apply_channel(h, rotated, taps, rx_antennas);
}

CVector received_symbol(const SystemConfig& cfg, const AssignmentPlan& plan,
                        const std::vector<UserImpairment>& users, const std::vector<CVector>& data) {
    if (static_cast<int>(users.size()) != plan.users() || static_cast<int>(data.size()) != plan.users()) {
        throw InputError("need one impairment record and one data vector per user");
    }
    const int G = cfg.cp_symbol_length();
    CVector y = CVector::Zero(cfg.received_length());
    for (int u = 0; u < plan.users(); ++u) {
        const CVector s = modulate_symbol(plan, u, data[u]);
        if (s.size() != G) {
            throw InputError("transmit vector length does not match G");
        }
        const auto& imp = users[u];
        const CVector with_iq = imp.alpha * s + imp.beta * s.conjugate();
        const CVector rotated = cfo_ramp(imp.phi, G, cfg.subcarriers).cwiseProduct(with_iq);
        y += apply_channel(imp.h, rotated, cfg.channel_taps, cfg.rx_antennas);
    }
    return y;
}

ReceivedFrame synthesize_received(const SystemConfig& cfg, const AssignmentPlan& plan,
                                  std::vector<UserImpairment> users, std::vector<std::vector<CVector>> data,
                                  double sigma2, Rng& rng) {
    if (static_cast<int>(data.size()) != cfg.symbols_per_frame) {
        throw InputError("frame carries " + std::to_string(data.size()) + " symbols, expected N_s = " +
                         std::to_string(cfg.symbols_per_frame));
    }
    ReceivedFrame frame;
    frame.y.reserve(data.size());
    double power = 0.0;
    for (const auto& symbol : data) {
        frame.y.push_back(received_symbol(cfg, plan, users, symbol));
        power += frame.y.back().squaredNorm();
    }
    frame.truth.signal_power = power / (static_cast<double>(data.size()) * cfg.received_length());
    frame.truth.users = std::move(users);
    frame.truth.data = std::move(data);
    add_noise(frame, sigma2, rng);
    return frame;
}

void add_noise(ReceivedFrame& frame, double sigma2, Rng& rng) {
    if (sigma2 < 0.0) {
        throw InputError("noise variance must be non-negative");
    }
    frame.sigma2 = sigma2;
    if (sigma2 == 0.0) {
        return;
    }
    std::normal_distribution<double> normal(0.0, std::sqrt(sigma2 / 2.0));
    for (auto& y : frame.y) {
        for (Eigen::Index n = 0; n < y.size(); ++n) {
            const double re = normal(rng);
            const double im = normal(rng);
            y[n] += cplx(re, im);
        }
    }
}

} // namespace gfdmsim
