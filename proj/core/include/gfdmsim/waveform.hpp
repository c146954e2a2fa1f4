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

#ifndef GFDMSIM_WAVEFORM_HPP
#define GFDMSIM_WAVEFORM_HPP

#include "gfdmsim/types.hpp"

namespace gfdmsim {

enum class PrototypeShape { RootRaisedCosine, Rectangular };

/// Dimensioning of one GFDM link. Names follow the usual GFDM roles; the
/// derived sizes are N = M*K samples per symbol and G = N + L_cp after the
/// cyclic prefix.
struct SystemConfig {
    int subcarriers = 16;        // K
    int subsymbols = 4;          // M
    int users = 2;               // U
    int data_subcarriers = 14;   // K_D
    int channel_taps = 3;        // L
    int cp_length = 4;           // L_cp
    int rx_antennas = 4;         // N_r
    int symbols_per_frame = 200; // N_s
    double rolloff = 0.4;
    int pilots_per_user = 1;     // P_pil
    double search_step = 0.01;   // coarse CFO grid step
    PrototypeShape prototype = PrototypeShape::RootRaisedCosine;

    [[nodiscard]] int symbol_length() const { return subcarriers * subsymbols; }
    [[nodiscard]] int cp_symbol_length() const { return symbol_length() + cp_length; }
    /// Samples per antenna that survive ISI truncation: G - L + 1.
    [[nodiscard]] int kept_samples() const { return cp_symbol_length() - channel_taps + 1; }
    /// Length of one stacked received vector y_i.
    [[nodiscard]] int received_length() const { return rx_antennas * kept_samples(); }
    /// Length of a stacked CIR: N_r * L.
    [[nodiscard]] int cir_length() const { return rx_antennas * channel_taps; }
    [[nodiscard]] int data_resources() const { return subsymbols * data_subcarriers; }

    /// Throws ConfigError when a count is non-positive, K_D > K, the
    /// roll-off is outside [0,1], the search step is outside (0,1) or the data
    /// resources cannot be split evenly over the users.
    void validate() const;
};

/// Unit-energy prototype filter of length K*M, peak tap at index 0.
///
/// The RRC taps are the continuous root-raised-cosine impulse response
/// (symbol period K samples) sampled at t = (n - floor(N/2)) / K, with the
/// removable singularities at t = 0 and |t| = 1/(4 rolloff) replaced by their
/// limits, then rotated left by floor(N/2). The rectangular shape is 1/sqrt(K)
/// over the first K samples and zero elsewhere.
RVector build_prototype_filter(int subcarriers, int subsymbols, double rolloff,
                               PrototypeShape shape = PrototypeShape::RootRaisedCosine);

/// Continuous RRC impulse response h(t), t in symbol periods.
double rrc_impulse(double t, double rolloff);

struct ModulationMatrix {
    RVector prototype; // g, length N
    CMatrix A;         // N x N, column m*K + k is g_{k,m}
    CMatrix A_cp;      // G x N, last L_cp rows of A on top of A
    int subcarriers = 0;
    int subsymbols = 0;
    int cp_length = 0;
};

/// Column (k, m) (zero-based) is g[(n - mK) mod N] * exp(-j 2 pi k n / K).
ModulationMatrix build_modulation_matrix(const RVector& prototype, int subcarriers, int subsymbols,
                                         int cp_length);

inline ModulationMatrix build_modulation_matrix(const SystemConfig& cfg) {
    return build_modulation_matrix(
        build_prototype_filter(cfg.subcarriers, cfg.subsymbols, cfg.rolloff, cfg.prototype),
        cfg.subcarriers, cfg.subsymbols, cfg.cp_length);
}

} // namespace gfdmsim

#endif // GFDMSIM_WAVEFORM_HPP
