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

#include "gfdmsim/linalg.hpp"
#include "gfdmsim/scalar_search.hpp"

using namespace gfdmsim;
using Catch::Approx;

TEST_CASE("pseudoinverse of a full-column-rank matrix", "[linalg]") {
    Rng rng(1);
    const CMatrix a = test::random_cmatrix(9, 4, rng);
    const auto p = pseudo_inverse(a);
    CHECK(p.rank == 4);
    CHECK(p.full_column_rank(4));
    CHECK((p.matrix * a - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    // Moore-Penrose conditions
    CHECK((a * p.matrix * a - a).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p.matrix * a * p.matrix - p.matrix).cwiseAbs().maxCoeff() < 1e-12);
    const CMatrix ap = a * p.matrix;
    CHECK((ap - ap.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::isfinite(p.condition));
}

TEST_CASE("pseudoinverse reports rank loss", "[linalg]") {
    Rng rng(2);
    CMatrix a = test::random_cmatrix(6, 3, rng);
    a.col(2) = a.col(0) * cplx(2.0, -1.0) + a.col(1);
    const auto p = pseudo_inverse(a);
    CHECK(p.rank == 2);
    CHECK_FALSE(p.full_column_rank(3));
    CHECK(p.condition > 1e12);
    CHECK((a * p.matrix * a - a).cwiseAbs().maxCoeff() < 1e-12);

    const auto z = pseudo_inverse(CMatrix::Zero(3, 2));
    CHECK(z.rank == 0);
    CHECK(z.matrix.isZero(0.0));
}

TEST_CASE("hermitian eigen-decomposition", "[linalg]") {
    CMatrix d = CMatrix::Zero(4, 4);
    d.diagonal() << 3.0, 1.0, 4.0, 2.0;
    const auto e = hermitian_eigen(d);
    CHECK(e.values[0] == 1.0);
    CHECK(e.values[3] == 4.0);
    CHECK(std::abs(e.vectors(1, 0)) == Approx(1.0));

    Rng rng(3);
    const CMatrix x = test::random_cmatrix(6, 6, rng);
    const CMatrix h = x * x.adjoint();
    const auto eh = hermitian_eigen(h);
    for (Eigen::Index i = 1; i < 6; ++i) {
        CHECK(eh.values[i] >= eh.values[i - 1]);
    }
    CHECK((h * eh.vectors - eh.vectors * eh.values.cast<cplx>().asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((eh.vectors.adjoint() * eh.vectors - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hermitian_eigenvalues(h) - eh.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("2x2 eigenpairs match the closed form", "[linalg]") {
    // [[a, c], [conj(c), b]]: lambda = (a+b)/2 -+ sqrt(((a-b)/2)^2 + |c|^2)
    const double a = 2.0;
    const double b = -0.5;
    const cplx c{0.3, 1.1};
    CMatrix m(2, 2);
    m << a, c, std::conj(c), b;
    const double mid = (a + b) / 2.0;
    const double rad = std::sqrt((a - b) * (a - b) / 4.0 + std::norm(c));
    const auto e = hermitian_eigen(m);
    CHECK(e.values[0] == Approx(mid - rad).epsilon(1e-14));
    CHECK(e.values[1] == Approx(mid + rad).epsilon(1e-14));
    // eigenvector of lambda_min is proportional to (c, lambda_min - a)
    CVector want(2);
    want << c, mid - rad - a;
    want.normalize();
    CHECK(std::abs(std::abs(want.dot(e.vectors.col(0))) - 1.0) < 1e-13);
}

TEST_CASE("scalar minimisation", "[search]") {
    SECTION("quadratic converges within a few evaluations") {
        const auto r = minimize_scalar([](double x) { return (x - 0.123) * (x - 0.123) + 2.0; }, -1.0, 1.0);
        CHECK(r.x == Approx(0.123).margin(1e-6));
        CHECK(r.fx == Approx(2.0).margin(1e-12));
        CHECK(r.evaluations < 12);
    }
    SECTION("smooth non-quadratic") {
        const auto r = minimize_scalar([](double x) { return -std::cos(3.0 * (x - 0.01)) + 0.1 * x * x * x * x; },
                                       -0.4, 0.5);
        // exhaustive grid oracle
        double best = 0.0;
        double fbest = 1e300;
        for (int i = 0; i <= 900000; ++i) {
            const double x = -0.4 + i * 1e-6;
            const double fx = -std::cos(3.0 * (x - 0.01)) + 0.1 * x * x * x * x;
            if (fx < fbest) {
                fbest = fx;
                best = x;
            }
        }
        CHECK(r.x == Approx(best).margin(2e-6));
    }
    SECTION("non-smooth target falls back on golden steps") {
        const auto r = minimize_scalar([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0);
        CHECK(r.x == Approx(0.3).margin(1e-6));
        CHECK(r.iterations <= 50);
    }
    SECTION("monotone target ends at the bracket edge") {
        const auto r = minimize_scalar([](double x) { return x; }, 2.0, 3.0);
        CHECK(r.x == Approx(2.0).margin(1e-6));
    }
    SECTION("iteration cap is honoured") {
        ScalarSearchOptions opts;
        opts.max_iterations = 5;
        opts.x_tolerance = 1e-15;
        const auto r = minimize_scalar([](double x) { return std::sin(50.0 * x) + x; }, 0.0, 1.0, opts);
        CHECK(r.iterations == 5);
        CHECK(r.evaluations == 6);
    }
    SECTION("invalid bracket") {
        CHECK_THROWS(minimize_scalar([](double x) { return x; }, 1.0, 1.0));
    }
}
