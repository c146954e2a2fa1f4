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

#include "gfdmsim/waveform.hpp"

#include <cmath>
#include <string>

namespace gfdmsim {

void SystemConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    require(subcarriers >= 1 && subsymbols >= 1 && users >= 1, "K, M and U must be >= 1");
    require(data_subcarriers >= 1 && data_subcarriers <= subcarriers, "K_D must lie in [1, K]");
    require(channel_taps >= 1, "L must be >= 1");
    require(cp_length >= 0, "L_cp must be >= 0");
    require(channel_taps <= cp_symbol_length(), "L must not exceed G");
    require(rx_antennas >= 1, "N_r must be >= 1");
    require(symbols_per_frame >= 1, "N_s must be >= 1");
    require(rolloff >= 0.0 && rolloff <= 1.0, "roll-off must lie in [0, 1]");
    require(pilots_per_user >= 1, "P_pil must be >= 1");
    require(search_step > 0.0 && search_step < 1.0, "search step must lie in (0, 1)");
    require(data_resources() % users == 0,
            "M*K_D = " + std::to_string(data_resources()) + " cannot be split evenly over " +
                std::to_string(users) + " users");
}

double rrc_impulse(double t, double rolloff) {
    constexpr double kEps = 1e-12;
    const double a = rolloff;
    if (std::abs(t) < kEps) {
        return 1.0 - a + 4.0 * a / kPi;
    }
    if (a > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * a)) < kEps) {
        return a / std::sqrt(2.0) *
               ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * a)) +
                (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * a)));
    }
    const double num = std::sin(kPi * t * (1.0 - a)) + 4.0 * a * t * std::cos(kPi * t * (1.0 + a));
    const double den = kPi * t * (1.0 - (4.0 * a * t) * (4.0 * a * t));
    return num / den;
}

RVector build_prototype_filter(int subcarriers, int subsymbols, double rolloff, PrototypeShape shape) {
    const int n_total = subcarriers * subsymbols;
    if (subcarriers < 1 || subsymbols < 1 || n_total < 2) {
        throw ConfigError("prototype filter needs K*M >= 2");
    }
    if (!(rolloff >= 0.0 && rolloff <= 1.0)) {
        throw ConfigError("roll-off must lie in [0, 1]");
    }

    RVector g = RVector::Zero(n_total);
    if (shape == PrototypeShape::Rectangular) {
        g.head(subcarriers).setConstant(1.0 / std::sqrt(static_cast<double>(subcarriers)));
        return g;
    }

    const int centre = n_total / 2;
    for (int n = 0; n < n_total; ++n) {
        const double t = static_cast<double>(n - centre) / subcarriers;
        // rotate so the t = 0 sample lands on index 0
        g[(n - centre + n_total) % n_total] = rrc_impulse(t, rolloff);
    }
    return g / g.norm();
}

ModulationMatrix build_modulation_matrix(const RVector& prototype, int subcarriers, int subsymbols,
                                         int cp_length) {
    const int n_total = subcarriers * subsymbols;
    if (prototype.size() != n_total || subcarriers < 1 || subsymbols < 1) {
        throw ConfigError("prototype length must equal K*M");
    }
    if (cp_length < 0 || cp_length > n_total) {
        throw ConfigError("CP length must lie in [0, K*M]");
    }

    ModulationMatrix mod;
    mod.prototype = prototype;
    mod.subcarriers = subcarriers;
    mod.subsymbols = subsymbols;
    mod.cp_length = cp_length;
    mod.A.resize(n_total, n_total);

    for (int m = 0; m < subsymbols; ++m) {
        for (int k = 0; k < subcarriers; ++k) {
            const int col = m * subcarriers + k;
            for (int n = 0; n < n_total; ++n) {
                const int shifted = ((n - m * subcarriers) % n_total + n_total) % n_total;
                // reduce k*n mod K first so the phase stays exact for large n
                const double phase = -2.0 * kPi * static_cast<double>((k * n) % subcarriers) / subcarriers;
                mod.A(n, col) = prototype[shifted] * std::polar(1.0, phase);
            }
        }
    }

    mod.A_cp.resize(n_total + cp_length, n_total);
    mod.A_cp.topRows(cp_length) = mod.A.bottomRows(cp_length);
    mod.A_cp.bottomRows(n_total) = mod.A;
    return mod;
}

} // namespace gfdmsim
