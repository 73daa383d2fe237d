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

#include "szlab/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace szlab {

void PreferredChart::jacobian_at_center(double J[4][4]) const {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) J[a][b] = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const cplx t = T[a][b];
      J[2 * a][2 * b] = t.real();
      J[2 * a][2 * b + 1] = -t.imag();
      J[2 * a + 1][2 * b] = t.imag();
      J[2 * a + 1][2 * b + 1] = t.real();
    }
}

double HeisenbergChart::log_a(const CVec& zeta) const {
  const CVec z = chart.map(zeta);
  return model().log_a0(z) - 2.0 * frame.f(zeta, m()).real();
}

cplx HeisenbergChart::dlog_a(const CVec& zeta, int j) const {
  const CVec z = chart.map(zeta);
  const CVec d0 = model().dz_log_a0(z);
  cplx pull = 0.0;
  for (int k = 0; k < m(); ++k) pull += chart.T[k][j] * d0[k];
  const CVec df = frame.df(zeta, m());
  return pull - df[j];  // d/dzeta_j of f-bar vanishes
}

cplx HeisenbergChart::A(const CVec& zeta, int j) const {
  return -0.5 * kI * dlog_a(zeta, j);
}

PreferredChart build_preferred_chart(const Model& model, const CVec& P0) {
  const int m = model.m();
  const int n = 2 * m;
  double om[4][4], gm[4][4];
  model.omega_g(P0, om, gm);

  Eigen::MatrixXd G(n, n), Om(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      G(a, b) = gm[a][b];
      Om(a, b) = om[a][b];
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw szlab_error("build_preferred_chart: metric not positive definite");
  Eigen::MatrixXd S = es.operatorInverseSqrt();

  // ACS in the g-orthonormal frame: omega(v,w) = -g(v, Jw) => J' = -S Om S
  Eigen::MatrixXd Jp = -S * Om * S;

  // symplectic Gram-Schmidt: columns (u1, J'u1, u2, J'u2, ...)
  Eigen::MatrixXd R(n, n);
  std::vector<Eigen::VectorXd> cols;
  for (int pair = 0, cand = 0; pair < m; ++pair) {
    Eigen::VectorXd u;
    for (; cand < n; ++cand) {
      u = Eigen::VectorXd::Zero(n);
      u(cand) = 1.0;
      for (const auto& c : cols) u -= c.dot(u) * c;
      if (u.norm() > 0.3) break;
    }
    if (cand >= n)
      throw szlab_error("build_preferred_chart: degenerate structure data");
    u.normalize();
    Eigen::VectorXd v = Jp * u;
    for (const auto& c : cols) v -= c.dot(v) * c;
    v.normalize();
    cols.push_back(u);
    cols.push_back(v);
    ++cand;
  }
  for (int k = 0; k < n; ++k) R.col(k) = cols[size_t(k)];

  Eigen::MatrixXd T = S * R;

  // sanity: T^t G T = I and T^t Om T = Om0
  Eigen::MatrixXd Gchk = T.transpose() * G * T;
  Eigen::MatrixXd Ochk = T.transpose() * Om * T;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double gwant = (a == b) ? 1.0 : 0.0;
      double owant = 0.0;
      if (a / 2 == b / 2) owant = (a % 2 == 0 && b % 2 == 1) ? 1.0 : (a % 2 == 1 && b % 2 == 0 ? -1.0 : 0.0);
      if (std::abs(Gchk(a, b) - gwant) > 1e-10 ||
          std::abs(Ochk(a, b) - owant) > 1e-10)
        throw szlab_error(
            "build_preferred_chart: normalization failed (corrupt model data)");
    }

  PreferredChart pc;
  pc.model = &model;
  pc.center = P0;
  pc.m = m;
  pc.radius = 0.5 * model.injectivity_scale();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      // complex entry from the real 2x2 block; blocks commute with J_std
      pc.T[a][b] = cplx(T(2 * a, 2 * b), T(2 * a + 1, 2 * b));
    }
  return pc;
}

PreferredFrame build_preferred_frame(const Model& model,
                                     const PreferredChart& chart) {
  const int m = chart.m;
  PreferredFrame fr;
  const CVec z0 = chart.center;
  fr.c0 = 0.5 * model.log_a0(z0);

  const CVec d0 = model.dz_log_a0(z0);
  for (int j = 0; j < m; ++j) {
    cplx cj = 0.0;
    for (int k = 0; k < m; ++k) cj += chart.T[k][j] * d0[k];
    fr.c[j] = cj;
  }

  cplx zz[2][2], zzb[2][2];
  model.d2_log_a0(z0, zz, zzb);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      cplx q = 0.0;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          q += chart.T[k][a] * chart.T[l][b] * zz[k][l];
      fr.Q[a][b] = q;
    }
  return fr;
}

HeisenbergChart heisenberg_chart(const Model& model, const BundlePoint& x0) {
  HeisenbergChart hc;
  hc.chart = build_preferred_chart(model, x0.z);
  hc.frame = build_preferred_frame(model, hc.chart);
  hc.theta0 = x0.theta;
  return hc;
}

LiftCoeffs horizontal_lift_coeffs(const HeisenbergChart& hc, const CVec& zeta) {
  double r = 0.0;
  for (int j = 0; j < hc.m(); ++j) r += std::norm(zeta[j]);
  if (std::sqrt(r) > hc.chart.radius)
    throw szlab_error("horizontal_lift_coeffs: point outside chart radius");
  LiftCoeffs lc;
  for (int j = 0; j < hc.m(); ++j) {
    const cplx a = hc.A(zeta, j);
    lc.holo[j] = -a;
    lc.antiholo[j] = -std::conj(a);
  }
  return lc;
}

}  // namespace szlab
