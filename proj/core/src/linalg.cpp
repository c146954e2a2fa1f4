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

#include "gfdmsim/linalg.hpp"

#include <limits>

namespace gfdmsim {

PseudoInverse pseudo_inverse(const CMatrix& a, double rel_cutoff) {
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    PseudoInverse out;
    if (s.size() == 0 || s[0] == 0.0) {
        out.matrix = CMatrix::Zero(a.cols(), a.rows());
        out.condition = std::numeric_limits<double>::infinity();
        return out;
    }
    const double cutoff = rel_cutoff * s[0];
    RVector inv = RVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > cutoff) {
            inv[i] = 1.0 / s[i];
            ++out.rank;
        }
    }
    const double smallest = s[s.size() - 1];
    out.condition = smallest > 0.0 ? s[0] / smallest : std::numeric_limits<double>::infinity();
    out.matrix = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    return out;
}

HermitianEigen hermitian_eigen(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector hermitian_eigenvalues(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver did not converge");
    }
    return solver.eigenvalues();
}

} // namespace gfdmsim
