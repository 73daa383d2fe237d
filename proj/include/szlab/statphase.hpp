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

#ifndef SZLAB_STATPHASE_HPP
#define SZLAB_STATPHASE_HPP

#include <functional>
#include <string>
#include <vector>

#include "szlab/common.hpp"

namespace szlab {

// phase Psi(t, theta) = i t (1 - e^{i theta}) - theta
cplx phase_Psi(double t, double theta);
cplx phase_dPsi_dt(double t, double theta);
cplx phase_dPsi_dtheta(double t, double theta);
// Hessian at the critical point (1,0): [[0,1],[1,i]]
void phase_hessian(cplx H[2][2]);

// Truncated bivariate Taylor polynomial at (t,theta) = (1,0); coefficient
// [a][b] multiplies (t-1)^a theta^b.
struct Jet2 {
  static constexpr int D = 14;
  cplx c[D + 1][D + 1] = {};

  static Jet2 constant(cplx v);
  static Jet2 var_s();      // t - 1
  static Jet2 var_theta();  // theta
  Jet2 operator+(const Jet2& o) const;
  Jet2 operator-(const Jet2& o) const;
  Jet2 operator*(const Jet2& o) const;
  Jet2 scaled(cplx v) const;
  Jet2 exp() const;
  Jet2 d_ds() const;
  Jet2 d_dtheta() const;
  cplx at_origin() const { return c[0][0]; }
};

// amplitude on (t in (0,3)) x S^1 with a built-in cutoff vanishing near the
// t-boundary and identically one on [0.3, 2.55]
struct AmplitudeSpec {
  std::string name;
  std::function<cplx(double, double)> eval;  // cutoff included
  bool has_jet = false;
  Jet2 jet;  // jet at (1,0) of the cutoff-free amplitude (cutoff == 1 there)
};

double cutoff_rho1(double t);
double cutoff_rho2(double t);  // supported on t >= 2 (for the tail integral)

// bundled amplitudes (jet hooks included)
AmplitudeSpec amplitude_cutoff();                 // A == rho1(t)
AmplitudeSpec amplitude_exp(cplx w);              // rho1 e^{w t e^{i theta}}
AmplitudeSpec amplitude_poly();                   // polynomial x exponential
AmplitudeSpec amplitude_osc();                    // odd-harmonic flavor
// jet by nested central differences of eval (default path per design)
Jet2 fd_jet(const std::function<cplx(double, double)>& f, int max_order);

// I1 = N int_0^3 int_0^{2pi} e^{iN Psi} A dtheta dt by panel-doubling
// Gauss-Legendre in t x trapezoid in theta.
struct OscillatoryResult {
  cplx value;
  double est_error;
  int t_panels;
  int theta_nodes;
};
OscillatoryResult oscillatory_integral(const AmplitudeSpec& A, int N,
                                       double rel_tol = 1e-10);

// gamma * sum_{j<=J} N^{-j} L_j[A]|_{(1,0)};  gamma = 2*pi (calibrated).
inline constexpr double kStatPhaseGamma = 2.0 * kPi;

struct StatPhaseResult {
  int N;
  std::vector<cplx> partial;  // partial sums through order 0..J
  cplx quadrature;
  std::vector<double> error;  // |partial_J - quadrature|
};
StatPhaseResult stationary_phase_expansion(const AmplitudeSpec& A, int N, int J);

// single L_j term evaluation (exposed for tests)
cplx stationary_phase_term(const Jet2& A, int j);

// numerical gamma calibration against the quadrature oracle at one N
cplx calibrate_gamma(const AmplitudeSpec& A, int N, int J = 2);

// t >= 2 tail: returns |I2| together with the fitted constant C_k such that
// |I2| <= C_k N^{m+1-k} (m = 0 scale here; the caller supplies k).
struct TailBound {
  double magnitude;
  double Ck;
};
TailBound i2_tail_bound(const std::function<cplx(double, double)>& A, int N,
                        int k);

}  // namespace szlab

#endif  // SZLAB_STATPHASE_HPP
