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

#include "gfdmsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace gfdmsim {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double to_double(const std::string& key, const std::string& value) {
    const auto v = lower(trim(value));
    if (v == "inf" || v == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (v == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used == v.size()) {
            return out;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
}

long long to_integer(const std::string& key, const std::string& value) {
    const auto v = trim(value);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    }
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    const auto v = to_integer(key, value);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("key '" + key + "': value out of range");
    }
    return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
    const auto v = lower(trim(value));
    if (v == "1" || v == "true" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "0" || v == "false" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError("key '" + key + "': '" + value + "' is not a boolean");
}

std::pair<double, double> to_range(const std::string& key, const std::string& value) {
    const auto parts = split(value, ',');
    if (parts.size() != 2) {
        throw ConfigError("key '" + key + "' expects 'low, high'");
    }
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string format_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

} // namespace

const char* mode_name(Mode mode) {
    return mode == Mode::Jcciqe ? "jcciqe" : "genie";
}

void CampaignConfig::validate() const {
    system.validate();
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    require(assignment == "contiguous-block" || assignment == "interleaved" || assignment == "explicit",
            "assignment must be contiguous-block, interleaved or explicit");
    require(assignment != "explicit" || !explicit_sets.empty(), "explicit assignment needs set.u.m entries");
    require(!snr_db.empty(), "snr_db list is empty");
    for (double s : snr_db) {
        require(!std::isnan(s) && s != -std::numeric_limits<double>::infinity(), "snr_db entries must be numbers or inf");
    }
    require(trials >= 1, "trials must be >= 1");
    require(cfo_max > 0.0 && cfo_max <= 0.5, "cfo_max must lie in (0, 0.5]");
    require(eps_range.first <= eps_range.second && eps_range.first > 0.0, "eps range must be ordered and positive");
    require(theta_range_deg.first <= theta_range_deg.second, "theta range must be ordered");
    require(outage_threshold >= 0.0, "outage_threshold must be >= 0");
    require(!modes.empty(), "modes list is empty");
    require(rms_delay_spread > 0.0, "rms_delay_spread must be positive");
    require(workers >= 1, "workers must be >= 1");
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(number) + ": empty key");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_setting(CampaignConfig& cfg, const std::string& key, const std::string& value) {
    auto& s = cfg.system;
    if (key == "K") {
        s.subcarriers = to_int(key, value);
    } else if (key == "M") {
        s.subsymbols = to_int(key, value);
    } else if (key == "U") {
        s.users = to_int(key, value);
    } else if (key == "K_D") {
        s.data_subcarriers = to_int(key, value);
    } else if (key == "L") {
        s.channel_taps = to_int(key, value);
    } else if (key == "L_cp") {
        s.cp_length = to_int(key, value);
    } else if (key == "N_r") {
        s.rx_antennas = to_int(key, value);
    } else if (key == "N_s") {
        s.symbols_per_frame = to_int(key, value);
    } else if (key == "rolloff") {
        s.rolloff = to_double(key, value);
    } else if (key == "P_pil") {
        s.pilots_per_user = to_int(key, value);
    } else if (key == "delta") {
        s.search_step = to_double(key, value);
    } else if (key == "prototype") {
        const auto v = lower(value);
        if (v == "rrc") {
            s.prototype = PrototypeShape::RootRaisedCosine;
        } else if (v == "rect" || v == "rectangular") {
            s.prototype = PrototypeShape::Rectangular;
        } else {
            throw ConfigError("prototype must be rrc or rect");
        }
    } else if (key == "assignment") {
        cfg.assignment = lower(value);
    } else if (key.rfind("set.", 0) == 0) {
        const auto parts = split(key.substr(4), '.');
        if (parts.size() != 2) {
            throw ConfigError("explicit set key must read set.<user>.<subsymbol>");
        }
        const int u = to_int(key, parts[0]);
        const int m = to_int(key, parts[1]);
        if (u < 0 || m < 0 || u > 4096 || m > 4096) {
            throw ConfigError("key '" + key + "': user or subsymbol index out of range");
        }
        if (static_cast<int>(cfg.explicit_sets.size()) <= u) {
            cfg.explicit_sets.resize(u + 1);
        }
        auto& per_user = cfg.explicit_sets[u];
        if (static_cast<int>(per_user.size()) <= m) {
            per_user.resize(m + 1);
        }
        per_user[m].clear();
        for (const auto& bin : split(value, ',')) {
            per_user[m].push_back(to_int(key, bin));
        }
    } else if (key == "snr_db") {
        cfg.snr_db.clear();
        for (const auto& v : split(value, ',')) {
            cfg.snr_db.push_back(to_double(key, v));
        }
    } else if (key == "trials") {
        cfg.trials = to_int(key, value);
    } else if (key == "seed") {
        const auto v = trim(value);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw ConfigError("seed must be an unsigned 64-bit integer");
        }
        cfg.seed = seed;
    } else if (key == "cfo_max") {
        cfg.cfo_max = to_double(key, value);
    } else if (key == "eps_range") {
        cfg.eps_range = to_range(key, value);
    } else if (key == "theta_range_deg") {
        cfg.theta_range_deg = to_range(key, value);
    } else if (key == "outage_threshold") {
        cfg.outage_threshold = to_double(key, value);
    } else if (key == "modes") {
        cfg.modes.clear();
        for (const auto& m : split(lower(value), ',')) {
            if (m == "jcciqe") {
                cfg.modes.push_back(Mode::Jcciqe);
            } else if (m == "genie") {
                cfg.modes.push_back(Mode::Genie);
            } else {
                throw ConfigError("unknown mode '" + m + "'");
            }
        }
    } else if (key == "crlb") {
        cfg.crlb = to_bool(key, value);
    } else if (key == "rms_delay_spread") {
        cfg.rms_delay_spread = to_double(key, value);
    } else if (key == "workers") {
        cfg.workers = to_int(key, value);
    } else if (key == "record_timing") {
        cfg.record_timing = to_bool(key, value);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void apply_override(CampaignConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' must read key=value");
    }
    apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

CampaignConfig load_campaign(std::istream& in, const std::vector<std::string>& overrides) {
    CampaignConfig cfg;
    for (const auto& [key, value] : parse_key_values(in)) {
        apply_setting(cfg, key, value);
    }
    for (const auto& o : overrides) {
        apply_override(cfg, o);
    }
    cfg.validate();
    return cfg;
}

CampaignConfig load_campaign_file(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return load_campaign(in, overrides);
}

std::string to_key_values(const CampaignConfig& cfg) {
    const auto& s = cfg.system;
    std::ostringstream out;
    out << "K = " << s.subcarriers << "\nM = " << s.subsymbols << "\nU = " << s.users
        << "\nK_D = " << s.data_subcarriers << "\nL = " << s.channel_taps << "\nL_cp = " << s.cp_length
        << "\nN_r = " << s.rx_antennas << "\nN_s = " << s.symbols_per_frame
        << "\nrolloff = " << format_double(s.rolloff) << "\nP_pil = " << s.pilots_per_user
        << "\ndelta = " << format_double(s.search_step)
        << "\nprototype = " << (s.prototype == PrototypeShape::Rectangular ? "rect" : "rrc")
        << "\nassignment = " << cfg.assignment << '\n';
    for (std::size_t u = 0; u < cfg.explicit_sets.size(); ++u) {
        for (std::size_t m = 0; m < cfg.explicit_sets[u].size(); ++m) {
            out << "set." << u << '.' << m << " =";
            for (std::size_t i = 0; i < cfg.explicit_sets[u][m].size(); ++i) {
                out << (i == 0 ? " " : ", ") << cfg.explicit_sets[u][m][i];
            }
            out << '\n';
        }
    }
    out << "snr_db =";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        out << (i == 0 ? " " : ", ") << format_double(cfg.snr_db[i]);
    }
    out << "\ntrials = " << cfg.trials << "\nseed = " << cfg.seed << "\ncfo_max = " << format_double(cfg.cfo_max)
        << "\neps_range = " << format_double(cfg.eps_range.first) << ", " << format_double(cfg.eps_range.second)
        << "\ntheta_range_deg = " << format_double(cfg.theta_range_deg.first) << ", "
        << format_double(cfg.theta_range_deg.second)
        << "\noutage_threshold = " << format_double(cfg.outage_threshold) << "\nmodes =";
    for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
        out << (i == 0 ? " " : ", ") << mode_name(cfg.modes[i]);
    }
    out << "\ncrlb = " << (cfg.crlb ? "true" : "false")
        << "\nrms_delay_spread = " << format_double(cfg.rms_delay_spread) << "\nworkers = " << cfg.workers
        << "\nrecord_timing = " << (cfg.record_timing ? "true" : "false") << '\n';
    return out.str();
}

} // namespace gfdmsim
