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

#include "gfdmsim/scalar_search.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gfdmsim {

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              const ScalarSearchOptions& options) {
    if (!(hi > lo)) {
        throw std::invalid_argument("minimize_scalar needs lo < hi");
    }
    // (3 - sqrt(5)) / 2
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));

    ScalarMinimum out;
    double a = lo;
    double b = hi;
    double x = a + golden * (b - a);
    double w = x;
    double v = x;
    double fx = f(x);
    ++out.evaluations;
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;
    bool force_golden = false;

    for (; out.iterations < options.max_iterations; ++out.iterations) {
        const double mid = 0.5 * (a + b);
        const double tol = options.x_tolerance;
        if (std::abs(x - mid) <= 2.0 * tol - 0.5 * (b - a)) {
            break;
        }

        bool parabolic = false;
        if (!force_golden && std::abs(e) > tol) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) {
                p = -p;
            }
            q = std::abs(q);
            const double e_prev = e;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                e = d;
                d = p / q;
                const double u = x + d;
                // keep away from the bracket ends
                if (u - a < 2.0 * tol || b - u < 2.0 * tol) {
                    d = x < mid ? tol : -tol;
                }
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < mid) ? b - x : a - x;
            d = golden * e;
        }
        force_golden = false;

        const double u = std::abs(d) >= tol ? x + d : x + (d > 0.0 ? tol : -tol);
        const double fu = f(u);
        ++out.evaluations;

        if (fu <= fx) {
            if (u < x) {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (parabolic) {
                force_golden = true;
            }
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }

    out.x = x;
    out.fx = fx;
    return out;
}

} // namespace gfdmsim
