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

#ifndef GFDMSIM_ASSIGNMENT_HPP
#define GFDMSIM_ASSIGNMENT_HPP

#include <utility>
#include <vector>

#include "gfdmsim/waveform.hpp"

namespace gfdmsim {

/// Subcarrier sets indexed [user][subsymbol], zero-based subcarrier bins.
using SubcarrierSets = std::vector<std::vector<std::vector<int>>>;

/// Mirror bin of subcarrier k under conjugation: (K - k) mod K.
constexpr int image_subcarrier(int k, int subcarriers) {
    return (subcarriers - k) % subcarriers;
}

/// Which users own which (subsymbol, subcarrier) resource elements, plus the
/// per-user transmit matrices Psi_u = A_cp Gamma_u.
class AssignmentPlan {
public:
    AssignmentPlan() = default;

    [[nodiscard]] int users() const { return static_cast<int>(sets_.size()); }
    [[nodiscard]] int subcarriers() const { return subcarriers_; }
    [[nodiscard]] int subsymbols() const { return subsymbols_; }
    /// N_u, identical for every user.
    [[nodiscard]] int resources_per_user() const { return resources_per_user_; }

    /// Sorted subcarrier set K_{u,m}.
    [[nodiscard]] const std::vector<int>& set(int user, int subsymbol) const {
        return sets_.at(user).at(subsymbol);
    }
    [[nodiscard]] const SubcarrierSets& sets() const { return sets_; }

    /// I_{u,m}: members of K_{u,m} whose mirror bin is also in K_{u,m}.
    [[nodiscard]] const std::vector<int>& intersection(int user, int subsymbol) const {
        return intersections_.at(user).at(subsymbol);
    }
    /// Sum over u, m of |I_{u,m}|.
    [[nodiscard]] int total_intersections() const;

    /// Column indices (m*K + k) into A selected by Gamma_u, in d_{i,u} order.
    [[nodiscard]] const std::vector<int>& columns(int user) const { return columns_.at(user); }
    /// True when entry p of d_{i,u} sits on an intersection bin.
    [[nodiscard]] bool on_intersection(int user, int position) const {
        return intersection_mask_.at(user).at(position);
    }

    /// Gamma_u as a dense N x N_u 0/1 matrix.
    [[nodiscard]] RMatrix gamma(int user) const;
    /// Psi_u = A_cp Gamma_u, G x N_u.
    [[nodiscard]] const CMatrix& psi(int user) const { return psi_.at(user); }

    friend AssignmentPlan build_assignment(const SystemConfig& cfg, const ModulationMatrix& mod,
                                           SubcarrierSets sets);

private:
    int subcarriers_ = 0;
    int subsymbols_ = 0;
    int resources_per_user_ = 0;
    SubcarrierSets sets_;
    SubcarrierSets intersections_;
    std::vector<std::vector<int>> columns_;
    std::vector<std::vector<bool>> intersection_mask_;
    std::vector<CMatrix> psi_;
};

/// Validates the sets (disjoint per subsymbol, in range, same data-subcarrier
/// union of size K_D on every subsymbol, equal N_u) and materializes the plan.
/// Throws ConfigError on any violation.
AssignmentPlan build_assignment(const SystemConfig& cfg, const ModulationMatrix& mod,
                                SubcarrierSets sets);

/// Data subcarriers: every bin except DC and the K - K_D - 1 bins nearest to
/// the Nyquist bin K/2 (ties resolved towards the lower bin).
std::vector<int> data_subcarrier_bins(int subcarriers, int data_subcarriers);

/// Contiguous band per user that hops across subsymbols: on subsymbol m the
/// ascending data-bin list is rotated left by (m+1)*max(1, K_D/(2U)) and cut
/// into U consecutive chunks.
SubcarrierSets contiguous_block_sets(const SystemConfig& cfg);

/// Even subsymbols deal single bins, odd subsymbols deal mirror pairs {k, K-k}.
/// Odd subsymbols are dealt first. Each unit goes to the user holding the fewest
/// resources so far, ties broken round-robin from floor(m/2) mod U.
SubcarrierSets interleaved_sets(const SystemConfig& cfg);

/// Pairs (u, v), u != v, where the mirror of user v's resources covers every
/// resource of user u. For such a pair the blind CFO cost of user u also
/// vanishes at user v's CFO, so the noise subspace cannot tell them apart.
std::vector<std::pair<int, int>> find_image_aliases(const AssignmentPlan& plan);

/// s = Psi_u d, length G.
CVector modulate_symbol(const AssignmentPlan& plan, int user, const CVector& data);

} // namespace gfdmsim

#endif // GFDMSIM_ASSIGNMENT_HPP
