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

#ifndef GFDMSIM_SCALAR_SEARCH_HPP
#define GFDMSIM_SCALAR_SEARCH_HPP

#include <functional>

namespace gfdmsim {

struct ScalarMinimum {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
    int iterations = 0;
};

struct ScalarSearchOptions {
    double x_tolerance = 1e-7;
    int max_iterations = 50;
};

/// Golden-section search on [lo, hi] with parabolic-interpolation steps.
///
/// A parabolic step is taken only when the vertex falls strictly inside the
/// current bracket and moves less than half the step before last. If the
/// evaluated vertex fails to improve on the best point, the next step is a
/// golden-section step. Stops when the bracket half-width drops under the
/// tolerance or after max_iterations.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              const ScalarSearchOptions& options = {});

} // namespace gfdmsim

#endif // GFDMSIM_SCALAR_SEARCH_HPP
