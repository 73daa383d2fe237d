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

#include "szlab/statphase.hpp"

#include <cmath>

#include "szlab/quadrature.hpp"

namespace szlab {

cplx phase_Psi(double t, double theta) {
  return kI * t * (1.0 - std::exp(kI * theta)) - theta;
}
cplx phase_dPsi_dt(double, double theta) {
  return kI * (1.0 - std::exp(kI * theta));
}
cplx phase_dPsi_dtheta(double t, double theta) {
  return t * std::exp(kI * theta) - 1.0;
}
void phase_hessian(cplx H[2][2]) {
  H[0][0] = 0.0;
  H[0][1] = H[1][0] = 1.0;
  H[1][1] = kI;
}

// -------------------- jets --------------------

Jet2 Jet2::constant(cplx v) {
  Jet2 j;
  j.c[0][0] = v;
  return j;
}
Jet2 Jet2::var_s() {
  Jet2 j;
  j.c[1][0] = 1.0;
  return j;
}
Jet2 Jet2::var_theta() {
  Jet2 j;
  j.c[0][1] = 1.0;
  return j;
}
Jet2 Jet2::operator+(const Jet2& o) const {
  Jet2 r;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D - a; ++b) r.c[a][b] = c[a][b] + o.c[a][b];
  return r;
}
Jet2 Jet2::operator-(const Jet2& o) const {
  Jet2 r;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D - a; ++b) r.c[a][b] = c[a][b] - o.c[a][b];
  return r;
}
Jet2 Jet2::scaled(cplx v) const {
  Jet2 r;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D - a; ++b) r.c[a][b] = v * c[a][b];
  return r;
}
Jet2 Jet2::operator*(const Jet2& o) const {
  Jet2 r;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D - a; ++b) {
      if (c[a][b] == 0.0) continue;
      for (int p = 0; p + a <= D; ++p)
        for (int q = 0; q + b <= D - a - p; ++q)
          r.c[a + p][b + q] += c[a][b] * o.c[p][q];
    }
  return r;
}
Jet2 Jet2::exp() const {
  Jet2 nil = *this;
  const cplx c0 = nil.c[0][0];
  nil.c[0][0] = 0.0;
  Jet2 out = Jet2::constant(1.0);
  Jet2 term = Jet2::constant(1.0);
  for (int k = 1; k <= 2 * D + 2; ++k) {
    term = term * nil;
    term = term.scaled(1.0 / double(k));
    out = out + term;
    double mx = 0.0;
    for (int a = 0; a <= D; ++a)
      for (int b = 0; b <= D - a; ++b) mx = std::max(mx, std::abs(term.c[a][b]));
    if (mx < 1e-30) break;
  }
  return out.scaled(std::exp(c0));
}
Jet2 Jet2::d_ds() const {
  Jet2 r;
  for (int a = 1; a <= D; ++a)
    for (int b = 0; b <= D - a; ++b) r.c[a - 1][b] = double(a) * c[a][b];
  return r;
}
Jet2 Jet2::d_dtheta() const {
  Jet2 r;
  for (int a = 0; a <= D; ++a)
    for (int b = 1; b <= D - a; ++b) r.c[a][b - 1] = double(b) * c[a][b];
  return r;
}

namespace {

Jet2 L_Psi(const Jet2& A) {
  // 2 d^2/dt dtheta - i d^2/dt^2
  return A.d_ds().d_dtheta().scaled(2.0) - A.d_ds().d_ds().scaled(kI);
}

// third-order Taylor remainder of Psi at (1,0)
Jet2 psi_remainder3() {
  const Jet2 ith = Jet2::var_theta().scaled(kI);
  const Jet2 eith = ith.exp();
  const Jet2 one = Jet2::constant(1.0);
  Jet2 Psi = ((one + Jet2::var_s()) * (one - eith)).scaled(kI) - Jet2::var_theta();
  // subtract the quadratic part s*theta + i theta^2/2
  Psi.c[1][1] -= 1.0;
  Psi.c[0][2] -= 0.5 * kI;
  Psi.c[0][0] = 0.0;
  Psi.c[1][0] = 0.0;
  Psi.c[0][1] = 0.0;
  return Psi;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

cplx stationary_phase_term(const Jet2& A, int j) {
  // Hoermander 7.7.5 with <Psi''^{-1}D, D> = -L_Psi:
  //   L_j = sum_{nu - mu = j, 2nu >= 3mu} i^{-j} (-1)^nu 2^{-nu} / (mu! nu!)
  //           L_Psi^nu [ A R3^mu ] |_(1,0)
  static const Jet2 R3 = psi_remainder3();
  cplx tot = 0.0;
  for (int mu = 0; mu <= 3 * j; ++mu) {
    const int nu = j + mu;
    if (2 * nu < 3 * mu) continue;
    Jet2 term = A;
    for (int k = 0; k < mu; ++k) term = term * R3;
    for (int k = 0; k < nu; ++k) term = L_Psi(term);
    cplx val = term.at_origin() /
               (std::pow(2.0, nu) * factorial(mu) * factorial(nu));
    val *= std::pow(kI, -j) * ((nu % 2) ? -1.0 : 1.0);
    tot += val;
  }
  return tot;
}

// -------------------- cutoffs and amplitudes --------------------

namespace {

double smooth01(double x) {
  auto s = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  const double a = s(x), b = s(1.0 - x);
  return a / (a + b);
}

}  // namespace

double cutoff_rho1(double t) {
  return smooth01((t - 0.1) / 0.2) * smooth01((2.9 - t) / 0.35);
}

double cutoff_rho2(double t) { return smooth01((t - 2.0) / 0.5); }

AmplitudeSpec amplitude_cutoff() {
  AmplitudeSpec a;
  a.name = "cutoff";
  a.eval = [](double t, double) { return cplx(cutoff_rho1(t)); };
  a.has_jet = true;
  a.jet = Jet2::constant(1.0);
  return a;
}

AmplitudeSpec amplitude_exp(cplx w) {
  AmplitudeSpec a;
  a.name = "exp";
  a.eval = [w](double t, double th) {
    return cutoff_rho1(t) * std::exp(w * t * std::exp(kI * th));
  };
  const Jet2 one = Jet2::constant(1.0);
  const Jet2 t = one + Jet2::var_s();
  const Jet2 eith = Jet2::var_theta().scaled(kI).exp();
  a.has_jet = true;
  a.jet = (t * eith).scaled(w).exp();
  return a;
}

AmplitudeSpec amplitude_poly() {
  AmplitudeSpec a;
  a.name = "poly";
  a.eval = [](double t, double th) {
    return cutoff_rho1(t) *
           (t * t + t * std::cos(th) + 0.3 * std::sin(2.0 * th)) *
           std::exp(0.2 * t * std::exp(kI * th));
  };
  const Jet2 one = Jet2::constant(1.0);
  const Jet2 t = one + Jet2::var_s();
  const Jet2 eith = Jet2::var_theta().scaled(kI).exp();
  const Jet2 emith = Jet2::var_theta().scaled(-kI).exp();
  const Jet2 costh = (eith + emith).scaled(0.5);
  const Jet2 sin2th =
      (Jet2::var_theta().scaled(2.0 * kI).exp() -
       Jet2::var_theta().scaled(-2.0 * kI).exp()).scaled(-0.5 * kI);
  a.has_jet = true;
  a.jet = (t * t + t * costh + sin2th.scaled(0.3)) * (t * eith).scaled(0.2).exp();
  return a;
}

AmplitudeSpec amplitude_osc() {
  AmplitudeSpec a;
  a.name = "osc";
  a.eval = [](double t, double th) {
    return cutoff_rho1(t) * (1.0 + 0.5 * (t - 1.0) * std::sin(th) + 0.4 * std::cos(th)) *
           std::exp(-0.15 * t * std::exp(kI * th));
  };
  const Jet2 one = Jet2::constant(1.0);
  const Jet2 t = one + Jet2::var_s();
  const Jet2 eith = Jet2::var_theta().scaled(kI).exp();
  const Jet2 emith = Jet2::var_theta().scaled(-kI).exp();
  const Jet2 sinth = (eith - emith).scaled(-0.5 * kI);
  const Jet2 costh = (eith + emith).scaled(0.5);
  a.has_jet = true;
  a.jet = (one + (Jet2::var_s() * sinth).scaled(0.5) + costh.scaled(0.4)) *
          (t * eith).scaled(-0.15).exp();
  return a;
}

Jet2 fd_jet(const std::function<cplx(double, double)>& f, int max_order) {
  // nested central differences, order-adapted step; adequate to order ~4
  Jet2 jet;
  const int M = std::min(max_order, Jet2::D);
  for (int a = 0; a + 0 <= M; ++a)
    for (int b = 0; a + b <= M; ++b) {
      const int ord = a + b;
      const double h = 0.35 * std::pow(1e-14, 1.0 / (ord + 4));
      // tensor central-difference stencil for d^{a+b}/ds^a dth^b at (1,0)
      cplx acc = 0.0;
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) {
          const double wi = std::pow(-1.0, i) * std::exp(std::lgamma(a + 1.0) -
                             std::lgamma(i + 1.0) - std::lgamma(a - i + 1.0));
          const double wj = std::pow(-1.0, j) * std::exp(std::lgamma(b + 1.0) -
                             std::lgamma(j + 1.0) - std::lgamma(b - j + 1.0));
          acc += wi * wj * f(1.0 + (a / 2.0 - i) * h, (b / 2.0 - j) * h);
        }
      acc /= std::pow(h, ord);
      jet.c[a][b] = acc / (factorial(a) * factorial(b));
    }
  return jet;
}

// -------------------- quadrature of I1 --------------------

namespace {

cplx i1_quadrature(const std::function<cplx(double, double)>& A, int N,
                   int tpanels, int nth, double t0, double t1) {
  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  cplx total = 0.0;
  const double dth = 2.0 * kPi / nth;
  for (int p = 0; p < tpanels; ++p) {
    const double a = t0 + (t1 - t0) * p / tpanels;
    const double b = t0 + (t1 - t0) * (p + 1) / tpanels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < 8; ++i) {
      const double t = mid + half * gx[i];
      cplx row = 0.0;
      for (int k = 0; k < nth; ++k) {
        const double th = k * dth;
        const cplx iNPsi = double(N) * (kI * phase_Psi(t, th));
        row += std::exp(iNPsi) * A(t, th);
      }
      total += half * gw[i] * row * dth;
    }
  }
  return double(N) * total;
}

}  // namespace

OscillatoryResult oscillatory_integral(const AmplitudeSpec& A, int N,
                                       double rel_tol) {
  if (N < 8) throw szlab_error("oscillatory_integral: need N >= 8");
  int tp = std::max(32, N);
  int nth = std::max(256, 8 * N);
  cplx prev = i1_quadrature(A.eval, N, tp, nth, 0.0, 3.0);
  for (int it = 0; it < 6; ++it) {
    const cplx next = i1_quadrature(A.eval, N, 2 * tp, 2 * nth, 0.0, 3.0);
    const double err = std::abs(next - prev);
    if (err <= rel_tol * std::max(1e-30, std::abs(next))) {
      return {next, err, 2 * tp, 2 * nth};
    }
    prev = next;
    tp *= 2;
    nth *= 2;
    if (it == 5)
      throw szlab_error("oscillatory_integral: quadrature did not converge");
  }
  return {prev, 0.0, tp, nth};
}

StatPhaseResult stationary_phase_expansion(const AmplitudeSpec& A, int N,
                                           int J) {
  Jet2 jet;
  if (A.has_jet) {
    jet = A.jet;
  } else {
    if (2 * J + 2 > 6)
      throw szlab_error(
          "stationary_phase_expansion: FD jets support J <= 2 derivatives");
    jet = fd_jet(A.eval, 2 * J + 2);
  }
  StatPhaseResult out;
  out.N = N;
  cplx sum = 0.0;
  for (int j = 0; j <= J; ++j) {
    sum += std::pow(double(N), -j) * stationary_phase_term(jet, j);
    out.partial.push_back(kStatPhaseGamma * sum);
  }
  out.quadrature = oscillatory_integral(A, N).value;
  for (const cplx& p : out.partial)
    out.error.push_back(std::abs(p - out.quadrature));
  return out;
}

cplx calibrate_gamma(const AmplitudeSpec& A, int N, int J) {
  Jet2 jet = A.has_jet ? A.jet : fd_jet(A.eval, 2 * J + 2);
  cplx S = 0.0;
  for (int j = 0; j <= J; ++j)
    S += std::pow(double(N), -j) * stationary_phase_term(jet, j);
  const cplx I = oscillatory_integral(A, N).value;
  return I / S;
}

TailBound i2_tail_bound(const std::function<cplx(double, double)>& A, int N,
                        int k) {
  if (k < 1) throw szlab_error("i2_tail_bound: k >= 1 required");
  // direct quadrature of N int_{t>=2} e^{iN Psi} rho2 A over one period;
  // the true value decays superpolynomially, so drive the panels until the
  // refinement difference reaches the double-precision floor
  auto f = [&A](double t, double th) { return cutoff_rho2(t) * A(t, th); };
  int tp = std::max(64, N / 2);
  int nth = std::max(256, 8 * N);
  cplx prev = i1_quadrature(f, N, tp, nth, 2.0, 6.0);
  cplx next = prev;
  for (int it = 0; it < 4; ++it) {
    tp *= 2;
    nth *= 2;
    next = i1_quadrature(f, N, tp, nth, 2.0, 6.0);
    if (std::abs(next - prev) <= std::max(1e-14, 1e-10 * std::abs(next))) break;
    prev = next;
  }
  TailBound tb;
  tb.magnitude = std::abs(next);
  tb.Ck = tb.magnitude * std::pow(double(N), k - 1.0);  // m = 0 here
  return tb;
}

}  // namespace szlab
