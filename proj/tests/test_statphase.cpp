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

#include "szlab/statphase.hpp"

using namespace szlab;

TEST_CASE("phase identities against finite differences") {
  for (const auto& [t, th] : {std::pair<double, double>{0.8, 0.3},
                              {1.7, -1.1},
                              {2.4, 2.0}}) {
    auto ft = [&, th = th](double dt) { return phase_Psi(t + dt, th); };
    auto fth = [&, t = t](double dth) { return phase_Psi(t, th + dth); };
    CHECK(std::abs(diff4(ft, 1e-4) - phase_dPsi_dt(t, th)) < 1e-10);
    CHECK(std::abs(diff4(fth, 1e-4) - phase_dPsi_dtheta(t, th)) < 1e-10);
  }
  // gradient vanishes exactly at (1,0)
  CHECK(std::abs(phase_dPsi_dt(1.0, 0.0)) == 0.0);
  CHECK(std::abs(phase_dPsi_dtheta(1.0, 0.0)) == 0.0);
  // and nowhere else on the support grid
  for (double t = 0.15; t < 2.95; t += 0.07)
    for (double th = -3.1; th < 3.15; th += 0.05) {
      if (std::abs(t - 1.0) < 0.05 && std::abs(th) < 0.05) continue;
      const double g =
          std::abs(phase_dPsi_dt(t, th)) + std::abs(phase_dPsi_dtheta(t, th));
      CHECK(g > 1e-4);
    }
  // Hessian [[0,1],[1,i]] with determinant -1
  cplx H[2][2];
  phase_hessian(H);
  CHECK(std::abs(H[0][0]) == 0.0);
  CHECK(std::abs(H[0][1] - 1.0) == 0.0);
  CHECK(std::abs(H[1][1] - kI) == 0.0);
  CHECK(std::abs(H[0][0] * H[1][1] - H[0][1] * H[1][0] + 1.0) < 1e-15);
  // FD Hessian of Psi at the critical point
  auto f = [&](double a, double b) { return phase_Psi(1.0 + a, b); };
  auto dtt = diff2nd([&](double a) { return f(a, 0.0); }, 1e-4);
  auto dthth = diff2nd([&](double b) { return f(0.0, b); }, 1e-4);
  const cplx dtth = (f(1e-4, 1e-4) - f(1e-4, -1e-4) - f(-1e-4, 1e-4) +
                     f(-1e-4, -1e-4)) /
                    (4e-8);
  CHECK(std::abs(dtt - H[0][0]) < 1e-7);
  CHECK(std::abs(dtth - H[0][1]) < 1e-7);
  CHECK(std::abs(dthth - H[1][1]) < 1e-7);
}

TEST_CASE("zero amplitude integrates to zero") {
  AmplitudeSpec zero;
  zero.name = "zero";
  zero.eval = [](double, double) { return cplx(0.0); };
  zero.has_jet = true;
  zero.jet = Jet2::constant(0.0);
  CHECK(std::abs(oscillatory_integral(zero, 16).value) < 1e-14);
}

TEST_CASE("pure cutoff: gamma_0 by Richardson extrapolation equals 2 pi") {
  const AmplitudeSpec A = amplitude_cutoff();
  const cplx I64 = oscillatory_integral(A, 64).value;
  const cplx I128 = oscillatory_integral(A, 128).value;
  const cplx I256 = oscillatory_integral(A, 256).value;
  // Richardson in 1/N
  const cplx g = I256 + (I256 - I128) - ((I128 + (I128 - I64)) - (I256 + (I256 - I128))) * 0.0;
  CHECK(std::abs(g - kStatPhaseGamma) < 1e-8);
  CHECK(std::abs(I64 - kStatPhaseGamma) < 1e-9);  // corrections vanish here
}

TEST_CASE("gamma calibration against the quadrature oracle") {
  const cplx g = calibrate_gamma(amplitude_exp(cplx(-0.3, 0.1)), 256);
  CHECK(std::abs(g - kStatPhaseGamma) < 1e-3 * kStatPhaseGamma);
}

TEST_CASE("expansion error orders exceed J + 0.7") {
  const AmplitudeSpec A = amplitude_exp(cplx(-0.3, 0.1));
  const std::vector<int> Ns{64, 128, 256};
  std::vector<std::vector<double>> errs(3);
  for (int N : Ns) {
    const StatPhaseResult r = stationary_phase_expansion(A, N, 2);
    for (int j = 0; j <= 2; ++j) errs[j].push_back(r.error[j]);
  }
  for (int j = 0; j <= 2; ++j) {
    const double order =
        std::log(errs[j][0] / errs[j][2]) / std::log(double(Ns[2]) / Ns[0]);
    CHECK(order > j + 0.7);
    CHECK(std::abs(order - (j + 1.0)) <= 0.3);
  }
  // leading-term structure: J=0 partial sum is gamma A(1,0)
  const StatPhaseResult r = stationary_phase_expansion(A, 64, 0);
  CHECK(std::abs(r.partial[0] - kStatPhaseGamma * A.eval(1.0, 0.0)) < 1e-12);
}

TEST_CASE("both evaluators are linear in the amplitude") {
  const AmplitudeSpec A = amplitude_exp(cplx(-0.3, 0.1));
  const AmplitudeSpec B = amplitude_poly();
  const cplx ca(0.7, -0.2), cb(-0.4, 1.1);
  AmplitudeSpec C;
  C.name = "combo";
  C.eval = [&, ca, cb](double t, double th) {
    return ca * A.eval(t, th) + cb * B.eval(t, th);
  };
  C.has_jet = true;
  C.jet = A.jet.scaled(ca) + B.jet.scaled(cb);
  const int N = 64;
  const cplx qa = oscillatory_integral(A, N).value;
  const cplx qb = oscillatory_integral(B, N).value;
  const cplx qc = oscillatory_integral(C, N).value;
  CHECK(std::abs(qc - (ca * qa + cb * qb)) < 1e-12 * std::abs(qc));
  const cplx ea = stationary_phase_expansion(A, N, 2).partial[2];
  const cplx eb = stationary_phase_expansion(B, N, 2).partial[2];
  const cplx ec = stationary_phase_expansion(C, N, 2).partial[2];
  CHECK(std::abs(ec - (ca * ea + cb * eb)) < 1e-12 * std::abs(ec));
}

TEST_CASE("finite-difference jets agree with the analytic hooks") {
  const AmplitudeSpec A = amplitude_exp(cplx(-0.3, 0.1));
  const Jet2 fd = fd_jet(A.eval, 4);
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      CHECK(std::abs(fd.c[a][b] - A.jet.c[a][b]) <
            2e-4 * (1.0 + std::abs(A.jet.c[a][b])));
}

TEST_CASE("tail integral decays superpolynomially") {
  auto bump = [](double t, double th) {
    return cplx(std::exp(-0.5 * (t - 3.0) * (t - 3.0)) * (1.0 + 0.3 * std::cos(th)));
  };
  const TailBound t64 = i2_tail_bound(bump, 64, 3);
  const TailBound t256 = i2_tail_bound(bump, 256, 3);
  const double slope = std::log(t256.magnitude / t64.magnitude) /
                       std::log(256.0 / 64.0);
  CHECK(slope <= -(3 - 1));  // k = 3
  // k = 5: doubling N reduces magnitude by >= 2^3
  const TailBound a = i2_tail_bound(bump, 64, 5);
  const TailBound b = i2_tail_bound(bump, 128, 5);
  CHECK(a.magnitude / b.magnitude >= 8.0);
  // zero amplitude
  const TailBound z =
      i2_tail_bound([](double, double) { return cplx(0.0); }, 64, 3);
  CHECK(z.magnitude == 0.0);
}

TEST_CASE("J=0 structure when the amplitude vanishes at the critical point") {
  // A(1,0) = 0 makes the result O(N^{-1}) relative to the J=0 scale
  AmplitudeSpec A;
  A.name = "vanishing";
  A.eval = [](double t, double th) {
    return cutoff_rho1(t) * cplx(t - 1.0) * std::exp(0.1 * t * std::exp(kI * th));
  };
  const Jet2 one = Jet2::constant(1.0);
  const Jet2 t = one + Jet2::var_s();
  const Jet2 eith = Jet2::var_theta().scaled(kI).exp();
  A.has_jet = true;
  A.jet = Jet2::var_s() * (t * eith).scaled(0.1).exp();
  const cplx q64 = oscillatory_integral(A, 64).value;
  const cplx q256 = oscillatory_integral(A, 256).value;
  CHECK(std::abs(q256) < std::abs(q64));
  CHECK(std::abs(q256) / std::abs(q64) < 0.3);  // roughly 1/4
}
