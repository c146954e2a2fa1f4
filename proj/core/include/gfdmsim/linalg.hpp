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

#ifndef GFDMSIM_LINALG_HPP
#define GFDMSIM_LINALG_HPP

#include "gfdmsim/types.hpp"

namespace gfdmsim {

struct PseudoInverse {
    CMatrix matrix;
    Eigen::Index rank = 0;
    double condition = 0.0; // sigma_max / sigma_min over all singular values
    [[nodiscard]] bool full_column_rank(Eigen::Index cols) const { return rank == cols; }
};

/// SVD pseudoinverse; singular values below rel_cutoff * sigma_max are dropped.
PseudoInverse pseudo_inverse(const CMatrix& a, double rel_cutoff = 1e-10);

struct HermitianEigen {
    RVector values;  // ascending
    CMatrix vectors; // column i pairs with values[i]
};

/// Eigen-decomposition of a Hermitian matrix (lower triangle is read).
/// Throws NumericalError if the solver does not converge.
HermitianEigen hermitian_eigen(const CMatrix& a);

/// Ascending eigenvalues only.
RVector hermitian_eigenvalues(const CMatrix& a);

} // namespace gfdmsim

#endif // GFDMSIM_LINALG_HPP
