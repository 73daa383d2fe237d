// Copyright 2026 The szlab Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <memory>
#include <random>

#include "szlab/geometry.hpp"
#include "szlab/kodaira.hpp"
#include "szlab/models.hpp"

using namespace szlab;

namespace {

// Wirtinger derivative d/dzeta_j of a scalar chart function, central FD
template <typename F>
cplx wirtinger(F&& f, const CVec& at, int j, double h, bool bar) {
  auto fx = [&](double t) {
    CVec z = at;
    z[j] += t;
    return cplx(f(z));
  };
  auto fy = [&](double t) {
    CVec z = at;
    z[j] += kI * t;
    return cplx(f(z));
  };
  const cplx dx = diff4(fx, h), dy = diff4(fy, h);
  return bar ? 0.5 * (dx + kI * dy) : 0.5 * (dx - kI * dy);
}

std::vector<std::unique_ptr<Model>> all_models() {
  std::vector<std::unique_ptr<Model>> v;
  v.push_back(std::make_unique<BargmannFock>(1));
  v.push_back(std::make_unique<BargmannFock>(2));
  v.push_back(std::make_unique<ProjectiveLine>());
  v.push_back(std::make_unique<ProjectiveLinePerturbed>(0.05));
  v.push_back(std::make_unique<Torus>(cplx(0.0, 1.0)));
  return v;
}

}  // namespace

TEST_CASE("preferred chart normalizes omega and g at the center") {
  std::mt19937_64 rng(11);
  for (const auto& model : all_models()) {
    for (int trial = 0; trial < 5; ++trial) {
      const CVec P0 = random_point(*model, rng);
      const PreferredChart pc = build_preferred_chart(*model, P0);
      double J[4][4];
      pc.jacobian_at_center(J);
      double om[4][4], g[4][4];
      model->omega_g(P0, om, g);
      const int n = 2 * model->m();
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double gout = 0.0, oout = 0.0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              gout += J[p][a] * g[p][q] * J[q][b];
              oout += J[p][a] * om[p][q] * J[q][b];
            }
          const double gwant = a == b ? 1.0 : 0.0;
          double owant = 0.0;
          if (a / 2 == b / 2 && a != b) owant = (a < b) ? 1.0 : -1.0;
          CHECK(std::abs(gout - gwant) < 1e-10);
          CHECK(std::abs(oout - owant) < 1e-10);
        }
    }
  }
}

TEST_CASE("chart construction is deterministic (bitwise)") {
  ProjectiveLinePerturbed model(0.05);
  const CVec P0 = cvec(cplx(0.37, -0.21));
  const PreferredChart a = build_preferred_chart(model, P0);
  const PreferredChart b = build_preferred_chart(model, P0);
  CHECK(std::memcmp(&a.T, &b.T, sizeof(a.T)) == 0);
  const HeisenbergChart h1 = heisenberg_chart(model, BundlePoint{P0, 0.4});
  const HeisenbergChart h2 = heisenberg_chart(model, BundlePoint{P0, 0.4});
  CHECK(std::memcmp(&h1.frame, &h2.frame, sizeof(h1.frame)) == 0);
}

TEST_CASE("Bargmann-Fock at the origin keeps the identity chart and frame") {
  BargmannFock bf(1);
  const PreferredChart pc = build_preferred_chart(bf, CVec{});
  CHECK(std::abs(pc.T[0][0] - 1.0) < 1e-14);
  const PreferredFrame fr = build_preferred_frame(bf, pc);
  CHECK(std::abs(fr.c0) < 1e-14);
  CHECK(std::abs(fr.c[0]) < 1e-14);
  CHECK(std::abs(fr.Q[0][0]) < 1e-14);
}

TEST_CASE("Heisenberg weight jets: a(0)=1, da=0, d2a and A_j jets") {
  std::mt19937_64 rng(7);
  for (const auto& model : all_models()) {
    const int m = model->m();
    for (int trial = 0; trial < 4; ++trial) {
      const CVec P0 = random_point(*model, rng);
      const HeisenbergChart hc = heisenberg_chart(*model, BundlePoint{P0, 0.0});
      auto a_of = [&](const CVec& zeta) { return std::exp(hc.log_a(zeta)); };

      CHECK(std::abs(a_of(CVec{}) - 1.0) < 1e-12);
      const double h = 1e-4;
      for (int j = 0; j < m; ++j) {
        CHECK(std::abs(wirtinger(a_of, CVec{}, j, h, false)) < 1e-6);
        CHECK(std::abs(hc.A(CVec{}, j)) < 1e-12);  // Eq. Aj
        for (int k = 0; k < m; ++k) {
          // d2a: mixed Hessian = delta, holomorphic Hessian = 0
          auto da_j = [&](const CVec& zeta) {
            return wirtinger(a_of, zeta, j, h, false);
          };
          auto dd = [&](int kk, bool bar) {
            auto fx = [&](double t) {
              CVec z{};
              z[kk] += t;
              return da_j(z);
            };
            auto fy = [&](double t) {
              CVec z{};
              z[kk] += kI * t;
              return da_j(z);
            };
            const cplx dx = diff4(fx, h), dy = diff4(fy, h);
            return bar ? 0.5 * (dx + kI * dy) : 0.5 * (dx - kI * dy);
          };
          const cplx mixed = dd(k, true);
          const cplx holo = dd(k, false);
          CHECK(std::abs(mixed - (j == k ? 1.0 : 0.0)) < 1e-6);
          CHECK(std::abs(holo) < 1e-6);
          // A_j = -(i/2) zbar_j + O(|z|^2): second-difference slope
          auto A_j = [&](const CVec& zeta) { return hc.A(zeta, j); };
          auto dA = [&](int kk, bool bar) {
            auto fx = [&](double t) {
              CVec z{};
              z[kk] += t;
              return A_j(z);
            };
            auto fy = [&](double t) {
              CVec z{};
              z[kk] += kI * t;
              return A_j(z);
            };
            const cplx dx = diff4(fx, h), dy = diff4(fy, h);
            return bar ? 0.5 * (dx + kI * dy) : 0.5 * (dx - kI * dy);
          };
          CHECK(std::abs(dA(k, true) - (j == k ? -0.5 * kI : cplx(0.0))) < 1e-6);
          CHECK(std::abs(dA(k, false)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("the four connection jet equations hold at 20 random points") {
  std::mt19937_64 rng(23);
  for (const auto& model : all_models()) {
    const int m = model->m();
    int done = 0;
    while (done < 20 / int(all_models().size()) + 4) {
      const CVec P0 = random_point(*model, rng);
      const HeisenbergChart hc = heisenberg_chart(*model, BundlePoint{P0, 0.0});
      auto loga = [&](const CVec& zeta) { return hc.log_a(zeta); };
      const double h = 1e-4;
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          auto dloga_j = [&](const CVec& zeta) {
            return wirtinger(loga, zeta, j, h, false);
          };
          auto A_j = [&](const CVec& zeta) { return hc.A(zeta, j); };
          auto second = [&](auto&& f, int kk, bool bar) {
            auto fx = [&](double t) {
              CVec z{};
              z[kk] += t;
              return f(z);
            };
            auto fy = [&](double t) {
              CVec z{};
              z[kk] += kI * t;
              return f(z);
            };
            const cplx dx = diff4(fx, h), dy = diff4(fy, h);
            return bar ? 0.5 * (dx + kI * dy) : 0.5 * (dx - kI * dy);
          };
          const cplx e1 = 0.5 * second(dloga_j, k, false) +
                          kI * second(A_j, k, false);
          const cplx e2 = 0.5 * second(dloga_j, k, true) +
                          kI * second(A_j, k, true) - (j == k ? 1.0 : 0.0);
          CHECK(std::abs(e1) < 1e-6);
          CHECK(std::abs(e2) < 1e-6);
        }
      ++done;
    }
  }
}

TEST_CASE("torus connection is exactly linear") {
  Torus model(cplx(0.0, 1.0));
  const HeisenbergChart hc =
      heisenberg_chart(model, BundlePoint{cvec(cplx(0.31, 0.44)), 0.0});
  for (const cplx zeta : {cplx(0.21, -0.13), cplx(-0.3, 0.05)}) {
    const cplx A = hc.A(cvec(zeta), 0);
    CHECK(std::abs(A + 0.5 * kI * std::conj(zeta)) < 1e-12);
  }
  // and the weight is exactly Gaussian in preferred coordinates
  CHECK(std::abs(hc.log_a(cvec(cplx(0.2, 0.1))) - std::norm(cplx(0.2, 0.1))) <
        1e-12);
}

TEST_CASE("frame gauge: weights agree to third order and norm is one") {
  ProjectiveLine model;
  const CVec P0 = cvec(cplx(0.4, 0.2));
  const HeisenbergChart hc = heisenberg_chart(model, BundlePoint{P0, 0.0});
  // ||e_pref||(P0) = 1 exactly
  CHECK(hc.log_a(CVec{}) == doctest::Approx(0.0).epsilon(1e-14));
  // log a - |zeta|^2 = O(|zeta|^3): third-difference ratio test
  auto rem = [&](double h) {
    double worst = 0.0;
    for (int dir = 0; dir < 4; ++dir) {
      const cplx e = std::exp(kI * (0.5 + kPi * dir / 2.0));
      const CVec zeta = cvec(h * e);
      worst = std::max(worst, std::abs(hc.log_a(zeta) - norm2(zeta, 1)));
    }
    return worst;
  };
  const double r1 = rem(0.08), r2 = rem(0.04);
  CHECK(r1 / r2 > 5.0);  // cubic remainder scales by ~8
}

TEST_CASE("two preferred charts at one point agree through the transition") {
  // rotated chart: T' = T e^{i phi}; the constructed frames then satisfy
  // a'(zeta) = a(e^{i phi} zeta) exactly
  ProjectiveLine model;
  const CVec P0 = cvec(cplx(0.25, -0.4));
  const HeisenbergChart h1 = heisenberg_chart(model, BundlePoint{P0, 0.0});
  HeisenbergChart h2 = h1;
  const cplx rot = std::exp(kI * 0.83);
  h2.chart.T[0][0] = h1.chart.T[0][0] * rot;
  h2.frame = build_preferred_frame(model, h2.chart);
  for (const cplx zeta : {cplx(0.2, 0.1), cplx(-0.15, 0.23)}) {
    CHECK(std::abs(h2.log_a(cvec(zeta)) - h1.log_a(cvec(rot * zeta))) < 1e-13);
  }
}

TEST_CASE("horizontal lift coefficients") {
  Torus model(cplx(0.0, 1.0));
  const HeisenbergChart hc =
      heisenberg_chart(model, BundlePoint{cvec(cplx(0.1, 0.2)), 0.0});
  const LiftCoeffs at0 = horizontal_lift_coeffs(hc, CVec{});
  CHECK(std::abs(at0.holo[0]) < 1e-13);
  CHECK(std::abs(at0.antiholo[0]) < 1e-13);
  const CVec zeta = cvec(cplx(0.05, 0.02));
  const LiftCoeffs lc = horizontal_lift_coeffs(hc, zeta);
  CHECK(std::abs(lc.holo[0] - (-hc.A(zeta, 0))) < 1e-13);
  CHECK(std::abs(lc.antiholo[0] - std::conj(lc.holo[0])) < 1e-13);
  CHECK_THROWS_AS(horizontal_lift_coeffs(hc, cvec(cplx(50.0, 0.0))),
                  szlab_error);
}

TEST_CASE("theta shift equivariance of the Heisenberg chart") {
  Torus model(cplx(0.0, 1.0));
  const CVec P0 = cvec(cplx(0.3, 0.6));
  const double phi = 0.77;
  const HeisenbergChart h1 = heisenberg_chart(model, BundlePoint{P0, 0.1});
  const HeisenbergChart h2 = heisenberg_chart(model, BundlePoint{P0, 0.1 + phi});
  const CVec zeta = cvec(cplx(0.12, -0.07));
  const BundlePoint a = h1.point(zeta, 0.3 + phi);
  const BundlePoint b = h2.point(zeta, 0.3);
  CHECK(std::abs(a.z[0] - b.z[0]) < 1e-15);
  CHECK(std::abs(a.theta - b.theta) < 1e-15);
}
