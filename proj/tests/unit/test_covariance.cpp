// Copyright 2026 The giesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "giesim/covariance.hpp"
#include "giesim/errors.hpp"
#include "giesim/steady_state.hpp"
#include "oracles.hpp"

using namespace gie;
using doctest::Approx;

TEST_SUITE("covariance") {
  TEST_CASE("beam splitter entries") {
    const auto bs0 = beam_splitter(0.0);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double x = std::abs(bs0.s(i, j));
        CHECK((x == 0.0 || x == Approx(1 / std::sqrt(2.0))));
      }
    }
    const auto bs = beam_splitter(0.2705);
    const double f = std::pow(1 - 0.2705, 0.25);
    CHECK(f == Approx(0.9242).epsilon(1e-4));
    CHECK(1 / f == Approx(1.0820).epsilon(1e-4));
    double seen_small = 0, seen_large = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double x = std::abs(bs.s(i, j)) * std::sqrt(2.0);
        if (x == Approx(f)) ++seen_small;
        if (x == Approx(1 / f)) ++seen_large;
      }
    }
    CHECK(seen_small == 2);
    CHECK(seen_large == 2);
    CHECK_THROWS_AS(beam_splitter(1.0), Error);
    CHECK_THROWS_AS(beam_splitter(-0.1), Error);
  }

  TEST_CASE("beam splitter is symplectic") {
    const Eigen::Matrix4d j = symplectic_form();
    for (double eps : {0.0, 0.1, 0.2705, 0.5, 0.9, 0.999}) {
      const auto bs = beam_splitter(eps);
      CHECK((bs.s * j * bs.s.transpose() - j).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(bs.s.determinant() == Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("combine examples") {
    const auto i4 = combine(CovMat2::identity(), CovMat2::identity(), beam_splitter(0.0));
    CHECK((i4.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    const auto v = combine(CovMat2::scalar(2.0), CovMat2::scalar(1.0), beam_splitter(0.0));
    CHECK(v.a.qq == Approx(1.5));
    CHECK(v.a.pp == Approx(1.5));
    CHECK(v.b.qq == Approx(1.5));
    CHECK(v.a.qp == Approx(0.0));
    CHECK(std::abs(v.ab(0, 0)) == Approx(0.5));
    CHECK(std::abs(v.ab(1, 1)) == Approx(0.5));
    CHECK(v.ab(0, 1) == Approx(0.0));

    const DerivedParams d = derive(ExperimentParams::reference());
    const auto t = combine(steady_covariance(d, Mode::plus), steady_covariance(d, Mode::minus),
                           beam_splitter(d.epsilon));
    CHECK(t.ab.determinant() < 0.0);
    CHECK(t.ab.determinant() == Approx(-5.39e-4).epsilon(1e-2));
    CHECK((t.matrix() - t.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(combine({1.0, 2.0, 1.0}, CovMat2::identity(), beam_splitter(0.0)), Error);
  }

  TEST_CASE("symplectic invariance of the determinant") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
      const CovMat2 a = oracle::random_cov2(rng);
      const CovMat2 b = oracle::random_cov2(rng);
      const double eps = std::uniform_real_distribution<double>(0.0, 0.95)(rng);
      const double before = a.det() * b.det();
      const double after = combine(a, b, beam_splitter(eps)).matrix().determinant();
      CHECK(oracle::rel_err(after, before) < 1e-12);
    }
  }

  TEST_CASE("log negativity examples") {
    CovMat4 id;
    id.a = id.b = CovMat2::identity();
    CHECK(log_negativity(id).raw == Approx(0.0));

    for (const CovMat2& v : {CovMat2{3.0, 0.4, 1.2}, CovMat2{0.7, -0.2, 2.5}}) {
      const auto ln = log_negativity(combine(v, v, beam_splitter(0.0)));
      CHECK(ln.raw <= 1e-12);
      CHECK(ln.clamped == 0.0);
    }

    const double r = 0.5;
    CovMat4 tms;
    tms.a = tms.b = CovMat2::scalar(std::cosh(2 * r));
    tms.ab << std::sinh(2 * r), 0.0, 0.0, -std::sinh(2 * r);
    // vacuum is the identity, so the smallest partial-transpose eigenvalue is exp(-2r)
    const double want = 2 * r / std::numbers::ln2;
    CHECK(want == Approx(1.4427).epsilon(1e-4));
    CHECK(log_negativity(tms).raw == Approx(want).epsilon(1e-12));
    CHECK(oracle::log_negativity_pt(tms.matrix()) == Approx(want).epsilon(1e-10));
    CHECK(log_negativity(tms).entangled());
  }

  TEST_CASE("log negativity agrees with the partial-transpose oracle") {
    std::mt19937_64 rng(11);
    int entangled = 0;
    for (int k = 0; k < 1000; ++k) {
      const Eigen::Matrix4d m = oracle::random_gaussian_state(rng);
      const auto ln = log_negativity(CovMat4::from_matrix(m));
      const double ref = oracle::log_negativity_pt(m);
      CHECK(std::abs(ln.raw - ref) < 1e-9);
      CHECK(ln.entangled() == (oracle::min_symplectic_eigenvalue_pt(m) < 1.0));
      entangled += ln.entangled();
    }
    CHECK(entangled > 100);  // the draw covers both sides
    CHECK(entangled < 900);
  }

  TEST_CASE("unphysical input is rejected") {
    CovMat4 bad;
    bad.a = bad.b = CovMat2::identity();
    bad.ab << 5.0, 0.0, 0.0, 5.0;
    CHECK_THROWS_AS(log_negativity(bad), Error);
  }

  TEST_CASE("purity") {
    CHECK(purity(CovMat2::identity()) == 1.0);
    CHECK(purity(CovMat2::scalar(21.0)) == Approx(1.0 / 21.0));
    const DerivedParams d = derive(ExperimentParams::reference());
    const CovMat2 v = steady_covariance(d, Mode::plus);
    CHECK(purity(v) == Approx(1 / std::sqrt(v.qq * v.pp - v.qp * v.qp)));
    CHECK(purity(v) == Approx(0.989).epsilon(2e-3));
    try {
      purity({1.0, 1.0, 1.0});
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SingularCovariance);
    }
  }

  TEST_CASE("squeezing diagnostics") {
    auto s = squeezing_diagnostics({0.5, 0.0, 2.0});
    CHECK(s.angle == Approx(0.0));
    CHECK(s.eig_ratio == Approx(0.25));
    s = squeezing_diagnostics({2.0, 0.0, 0.5});
    CHECK(s.angle == Approx(std::numbers::pi / 2));
    CHECK(s.eig_ratio == Approx(0.25));
    s = squeezing_diagnostics({1.0, 0.5, 1.0});
    CHECK(std::abs(s.angle) == Approx(std::numbers::pi / 4));
    CHECK(s.eig_ratio == Approx(1.0 / 3.0));
    s = squeezing_diagnostics(CovMat2::scalar(3.0));
    CHECK(s.angle == 0.0);
    CHECK(s.eig_ratio == 1.0);

    // the reported axis really is the minimum-variance direction
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
      const CovMat2 v = oracle::random_cov2(rng);
      const auto sd = squeezing_diagnostics(v);
      CHECK(sd.angle > -std::numbers::pi / 2);
      CHECK(sd.angle <= std::numbers::pi / 2);
      const Eigen::Vector2d u(std::cos(sd.angle), std::sin(sd.angle));
      CHECK(u.dot(v.matrix() * u) == Approx(v.min_eigenvalue()).epsilon(1e-9));
      // invariances
      CHECK(squeezing_diagnostics(v.scaled(7.5)).angle == Approx(sd.angle).epsilon(1e-12));
      const double th = 0.3;
      Eigen::Matrix2d r;
      r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
      const auto rotated = CovMat2::from_matrix(r * v.matrix() * r.transpose());
      CHECK(squeezing_diagnostics(rotated).eig_ratio == Approx(sd.eig_ratio).epsilon(1e-12));
    }
  }
}
