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

#ifndef GFDMSIM_CONFIG_HPP
#define GFDMSIM_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gfdmsim/assignment.hpp"

namespace gfdmsim {

enum class Mode { Jcciqe, Genie };

const char* mode_name(Mode mode);

struct CampaignConfig {
    SystemConfig system;
    std::string assignment = "contiguous-block"; // contiguous-block | interleaved | explicit
    SubcarrierSets explicit_sets;                // used when assignment == "explicit"
    std::vector<double> snr_db{10.0, 20.0, 30.0}; // +inf means noise free
    int trials = 50;
    std::uint64_t seed = 1;
    double cfo_max = 0.5;
    std::pair<double, double> eps_range{0.8, 1.2};
    std::pair<double, double> theta_range_deg{-15.0, 15.0};
    double outage_threshold = 0.01;
    std::vector<Mode> modes{Mode::Jcciqe};
    bool crlb = false;
    double rms_delay_spread = 1.5; // taps
    int workers = 1;
    bool record_timing = false; // wall_ms is written as 0 otherwise

    void validate() const;
};

/// Flat "key = value" lines; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Applies one key. Throws ConfigError for unknown keys or malformed values.
void apply_setting(CampaignConfig& cfg, const std::string& key, const std::string& value);

/// "key=value" override, as given on the command line.
void apply_override(CampaignConfig& cfg, const std::string& assignment);

CampaignConfig load_campaign(std::istream& in, const std::vector<std::string>& overrides = {});
CampaignConfig load_campaign_file(const std::string& path, const std::vector<std::string>& overrides = {});

/// Renders the configuration back into the key-value format.
std::string to_key_values(const CampaignConfig& cfg);

} // namespace gfdmsim

#endif // GFDMSIM_CONFIG_HPP
