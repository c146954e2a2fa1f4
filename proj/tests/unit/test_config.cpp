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

#include <cmath>
#include <sstream>

using namespace gfdmsim;

namespace {

CampaignConfig load(const std::string& text, const std::vector<std::string>& overrides = {}) {
    std::istringstream in(text);
    return load_campaign(in, overrides);
}

} // namespace

TEST_CASE("defaults match the reference campaign", "[config]") {
    const CampaignConfig cfg;
    CHECK(cfg.system.subcarriers == 16);
    CHECK(cfg.system.subsymbols == 4);
    CHECK(cfg.system.users == 2);
    CHECK(cfg.system.data_subcarriers == 14);
    CHECK(cfg.system.channel_taps == 3);
    CHECK(cfg.system.cp_length == 4);
    CHECK(cfg.system.rx_antennas == 4);
    CHECK(cfg.system.pilots_per_user == 1);
    CHECK(cfg.system.search_step == 0.01);
    CHECK(cfg.system.rolloff == 0.4);
    CHECK(cfg.snr_db == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(cfg.trials == 50);
    CHECK(cfg.outage_threshold == 0.01);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("key-value parsing", "[config]") {
    std::istringstream in("# header\nK = 8   # inline\n\n  M=2\nK = 32\n");
    const auto kv = parse_key_values(in);
    CHECK(kv.size() == 2);
    CHECK(kv.at("K") == "32");
    CHECK(kv.at("M") == "2");

    std::istringstream bad("K 8\n");
    CHECK_THROWS_AS(parse_key_values(bad), ConfigError);
    std::istringstream empty_key(" = 3\n");
    CHECK_THROWS_AS(parse_key_values(empty_key), ConfigError);
}

TEST_CASE("settings are applied", "[config]") {
    const auto cfg = load("K = 8\nM = 2\nK_D = 6\nL = 2\nL_cp = 2\nN_r = 3\nN_s = 50\n"
                          "snr_db = 0, 12.5, inf\nmodes = jcciqe, genie\ncrlb = yes\n"
                          "eps_range = 0.9, 1.1\ntheta_range_deg = -5, 5\nprototype = rect\n"
                          "seed = 99\nworkers = 3\nrecord_timing = off\n");
    CHECK(cfg.system.subcarriers == 8);
    CHECK(cfg.system.rx_antennas == 3);
    REQUIRE(cfg.snr_db.size() == 3);
    CHECK(cfg.snr_db[1] == 12.5);
    CHECK(std::isinf(cfg.snr_db[2]));
    CHECK(cfg.modes == std::vector<Mode>{Mode::Jcciqe, Mode::Genie});
    CHECK(cfg.crlb);
    CHECK(cfg.eps_range == std::pair<double, double>{0.9, 1.1});
    CHECK(cfg.theta_range_deg.first == -5.0);
    CHECK(cfg.system.prototype == PrototypeShape::Rectangular);
    CHECK(cfg.seed == 99);
    CHECK(cfg.workers == 3);
    CHECK_FALSE(cfg.record_timing);
}

TEST_CASE("overrides win over the file", "[config]") {
    const auto cfg = load("trials = 5\n", {"trials=7", " seed = 3 "});
    CHECK(cfg.trials == 7);
    CHECK(cfg.seed == 3);
    CampaignConfig direct;
    CHECK_THROWS_AS(apply_override(direct, "trials"), ConfigError);
}

TEST_CASE("explicit subcarrier sets", "[config]") {
    const auto cfg = load("K = 8\nM = 2\nK_D = 6\nassignment = explicit\n"
                          "set.0.0 = 1, 2, 3\nset.1.0 = 5, 6, 7\nset.0.1 = 1, 6, 7\nset.1.1 = 2, 3, 5\n");
    REQUIRE(cfg.explicit_sets.size() == 2);
    CHECK(cfg.explicit_sets[0][1] == std::vector<int>{1, 6, 7});
    CHECK(make_subcarrier_sets(cfg) == cfg.explicit_sets);
    CHECK_THROWS_AS(load("assignment = explicit\n"), ConfigError);
    CHECK_THROWS_AS(load("set.0 = 1\n"), ConfigError);
    CHECK_THROWS_AS(load("set.-1.0 = 1\n"), ConfigError);
}

TEST_CASE("malformed values are rejected", "[config]") {
    const std::vector<std::string> bad{
        "bogus = 1",        "K = eight",        "K = 8.5",          "rolloff = 1.5",
        "trials = 0",       "cfo_max = 0.7",    "eps_range = 1.2",  "eps_range = 1.2, 0.8",
        "modes = psychic",  "modes = ",         "crlb = maybe",     "prototype = sinc",
        "snr_db = -inf",    "snr_db = nan",     "workers = 0",      "seed = -1",
        "assignment = zig", "delta = 0",        "K = 99999999999",  "rms_delay_spread = 0",
    };
    for (const auto& line : bad) {
        INFO(line);
        CHECK_THROWS_AS(load(line + "\n"), ConfigError);
    }
}

TEST_CASE("rendering round trips", "[config]") {
    auto cfg = load("K = 8\nM = 2\nK_D = 6\nassignment = explicit\n"
                    "set.0.0 = 1, 2, 3\nset.1.0 = 5, 6, 7\nset.0.1 = 1, 6, 7\nset.1.1 = 2, 3, 5\n"
                    "snr_db = -3.25, inf\nmodes = genie\ncrlb = true\nseed = 18446744073709551615\n"
                    "rolloff = 0.1\n");
    const auto text = to_key_values(cfg);
    const auto again = load(text);
    CHECK(to_key_values(again) == text);
    CHECK(again.seed == 18446744073709551615ULL);
    CHECK(again.explicit_sets == cfg.explicit_sets);
    CHECK(again.snr_db[0] == -3.25);
    CHECK(std::isinf(again.snr_db[1]));
    CHECK(again.system.rolloff == 0.1);
    CHECK(again.modes == std::vector<Mode>{Mode::Genie});
}

TEST_CASE("config files", "[config]") {
    CHECK_THROWS_AS(load_campaign_file("/nonexistent/campaign.cfg"), ConfigError);
}
