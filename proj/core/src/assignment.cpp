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

#include "gfdmsim/assignment.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>

namespace gfdmsim {

int AssignmentPlan::total_intersections() const {
    int total = 0;
    for (const auto& per_user : intersections_) {
        for (const auto& s : per_user) {
            total += static_cast<int>(s.size());
        }
    }
    return total;
}

RMatrix AssignmentPlan::gamma(int user) const {
    const auto& cols = columns_.at(user);
    RMatrix g = RMatrix::Zero(subcarriers_ * subsymbols_, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t p = 0; p < cols.size(); ++p) {
        g(cols[p], static_cast<Eigen::Index>(p)) = 1.0;
    }
    return g;
}

AssignmentPlan build_assignment(const SystemConfig& cfg, const ModulationMatrix& mod, SubcarrierSets sets) {
    const int K = cfg.subcarriers;
    const int M = cfg.subsymbols;
    if (mod.subcarriers != K || mod.subsymbols != M || mod.cp_length != cfg.cp_length) {
        throw ConfigError("modulation matrix does not match the system configuration");
    }
    if (static_cast<int>(sets.size()) != cfg.users) {
        throw ConfigError("assignment lists " + std::to_string(sets.size()) + " users, expected " +
                          std::to_string(cfg.users));
    }

    std::set<int> data_union;
    for (int m = 0; m < M; ++m) {
        std::set<int> used;
        for (int u = 0; u < cfg.users; ++u) {
            if (static_cast<int>(sets[u].size()) != M) {
                throw ConfigError("user " + std::to_string(u) + " must list " + std::to_string(M) +
                                  " subsymbol sets");
            }
            auto& s = sets[u][m];
            std::sort(s.begin(), s.end());
            for (int k : s) {
                if (k < 0 || k >= K) {
                    throw ConfigError("subcarrier " + std::to_string(k) + " out of range [0, " +
                                      std::to_string(K - 1) + "]");
                }
                if (!used.insert(k).second) {
                    throw ConfigError("subcarrier " + std::to_string(k) + " assigned twice on subsymbol " +
                                      std::to_string(m));
                }
            }
        }
        if (static_cast<int>(used.size()) != cfg.data_subcarriers) {
            throw ConfigError("subsymbol " + std::to_string(m) + " allocates " + std::to_string(used.size()) +
                              " subcarriers, expected K_D = " + std::to_string(cfg.data_subcarriers));
        }
        if (m == 0) {
            data_union = used;
        } else if (used != data_union) {
            throw ConfigError("subsymbol " + std::to_string(m) + " uses a different data-subcarrier set");
        }
    }

    AssignmentPlan plan;
    plan.subcarriers_ = K;
    plan.subsymbols_ = M;
    plan.intersections_.resize(cfg.users);
    plan.columns_.resize(cfg.users);
    plan.intersection_mask_.resize(cfg.users);
    plan.psi_.resize(cfg.users);

    for (int u = 0; u < cfg.users; ++u) {
        int count = 0;
        plan.intersections_[u].resize(M);
        for (int m = 0; m < M; ++m) {
            const auto& s = sets[u][m];
            for (int k : s) {
                const bool mirrored = std::binary_search(s.begin(), s.end(), image_subcarrier(k, K));
                if (mirrored) {
                    plan.intersections_[u][m].push_back(k);
                }
                plan.columns_[u].push_back(m * K + k);
                plan.intersection_mask_[u].push_back(mirrored);
            }
            count += static_cast<int>(s.size());
        }
        if (u == 0) {
            plan.resources_per_user_ = count;
        } else if (count != plan.resources_per_user_) {
            throw ConfigError("users hold unequal resource counts (" + std::to_string(plan.resources_per_user_) +
                              " vs " + std::to_string(count) + ")");
        }
        if (count == 0) {
            throw ConfigError("user " + std::to_string(u) + " holds no resources");
        }
        auto& psi = plan.psi_[u];
        psi.resize(mod.A_cp.rows(), count);
        for (int p = 0; p < count; ++p) {
            psi.col(p) = mod.A_cp.col(plan.columns_[u][p]);
        }
    }
    plan.sets_ = std::move(sets);
    return plan;
}

std::vector<int> data_subcarrier_bins(int subcarriers, int data_subcarriers) {
    if (data_subcarriers < 1 || data_subcarriers > subcarriers) {
        throw ConfigError("K_D must lie in [1, K]");
    }
    const int reserved = subcarriers - data_subcarriers;
    std::vector<int> bins;
    if (reserved == 0) {
        bins.resize(subcarriers);
        std::iota(bins.begin(), bins.end(), 0);
        return bins;
    }
    std::vector<int> candidates(subcarriers - 1);
    std::iota(candidates.begin(), candidates.end(), 1);
    const int nyquist = subcarriers / 2;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [nyquist](int a, int b) { return std::abs(a - nyquist) < std::abs(b - nyquist); });
    std::set<int> guard(candidates.begin(), candidates.begin() + (reserved - 1));
    guard.insert(0);
    for (int k = 0; k < subcarriers; ++k) {
        if (!guard.contains(k)) {
            bins.push_back(k);
        }
    }
    return bins;
}

SubcarrierSets contiguous_block_sets(const SystemConfig& cfg) {
    const auto bins = data_subcarrier_bins(cfg.subcarriers, cfg.data_subcarriers);
    const int kd = cfg.data_subcarriers;
    if (kd % cfg.users != 0) {
        throw ConfigError("contiguous-block needs K_D divisible by U");
    }
    const int chunk = kd / cfg.users;
    const int step = std::max(1, kd / (2 * cfg.users));

    SubcarrierSets sets(cfg.users, std::vector<std::vector<int>>(cfg.subsymbols));
    for (int m = 0; m < cfg.subsymbols; ++m) {
        const int shift = ((m + 1) * step) % kd;
        for (int j = 0; j < kd; ++j) {
            sets[j / chunk][m].push_back(bins[(j + shift) % kd]);
        }
        for (auto& s : sets) {
            std::sort(s[m].begin(), s[m].end());
        }
    }
    return sets;
}

SubcarrierSets interleaved_sets(const SystemConfig& cfg) {
    const int K = cfg.subcarriers;
    const auto bins = data_subcarrier_bins(K, cfg.data_subcarriers);
    const std::set<int> data(bins.begin(), bins.end());

    std::vector<std::vector<int>> singles;
    std::vector<std::vector<int>> pairs;
    std::set<int> seen;
    for (int k : bins) {
        singles.push_back({k});
        if (seen.contains(k)) {
            continue;
        }
        std::vector<int> unit{k};
        const int mirror = image_subcarrier(k, K);
        if (mirror != k && data.contains(mirror)) {
            unit.push_back(mirror);
        }
        seen.insert(unit.begin(), unit.end());
        pairs.push_back(std::move(unit));
    }

    SubcarrierSets sets(cfg.users, std::vector<std::vector<int>>(cfg.subsymbols));
    std::vector<int> load(cfg.users, 0);
    // pair subsymbols first so the single-bin rounds can even out the counts
    std::vector<int> order;
    for (int m = 1; m < cfg.subsymbols; m += 2) {
        order.push_back(m);
    }
    for (int m = 0; m < cfg.subsymbols; m += 2) {
        order.push_back(m);
    }
    for (const int m : order) {
        const auto& units = (m % 2 == 0) ? singles : pairs;
        const int first = (m / 2) % cfg.users;
        for (std::size_t j = 0; j < units.size(); ++j) {
            int best = -1;
            for (int r = 0; r < cfg.users; ++r) {
                const int u = (first + static_cast<int>(j) + r) % cfg.users;
                if (best < 0 || load[u] < load[best]) {
                    best = u;
                }
            }
            auto& dst = sets[best][m];
            dst.insert(dst.end(), units[j].begin(), units[j].end());
            load[best] += static_cast<int>(units[j].size());
        }
        for (auto& s : sets) {
            std::sort(s[m].begin(), s[m].end());
        }
    }
    return sets;
}

std::vector<std::pair<int, int>> find_image_aliases(const AssignmentPlan& plan) {
    std::vector<std::pair<int, int>> aliases;
    const int K = plan.subcarriers();
    for (int u = 0; u < plan.users(); ++u) {
        for (int v = 0; v < plan.users(); ++v) {
            if (u == v) {
                continue;
            }
            bool covered = true;
            for (int m = 0; m < plan.subsymbols() && covered; ++m) {
                const auto& theirs = plan.set(v, m);
                for (int k : plan.set(u, m)) {
                    if (!std::binary_search(theirs.begin(), theirs.end(), image_subcarrier(k, K))) {
                        covered = false;
                        break;
                    }
                }
            }
            if (covered) {
                aliases.emplace_back(u, v);
            }
        }
    }
    return aliases;
}

CVector modulate_symbol(const AssignmentPlan& plan, int user, const CVector& data) {
    if (data.size() != plan.resources_per_user()) {
        throw InputError("data vector has " + std::to_string(data.size()) + " entries, expected N_u = " +
                         std::to_string(plan.resources_per_user()));
    }
    return plan.psi(user) * data;
}

} // namespace gfdmsim
