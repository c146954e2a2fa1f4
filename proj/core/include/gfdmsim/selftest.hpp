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

#ifndef GFDMSIM_SELFTEST_HPP
#define GFDMSIM_SELFTEST_HPP

#include <string>
#include <vector>

#include "gfdmsim/config.hpp"

namespace gfdmsim {

/// K=8, M=2, U=2, K_D=6, L=2, L_cp=2, N_r=3, N_s=50, noise free, one trial.
CampaignConfig small_reference_config();

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick invariant checks on small instances; a few seconds in total.
std::vector<SelftestCheck> run_selftest();

} // namespace gfdmsim

#endif // GFDMSIM_SELFTEST_HPP
