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

#ifndef SZLAB_GEOMETRY_HPP
#define SZLAB_GEOMETRY_HPP

#include <array>

#include "szlab/common.hpp"
#include "szlab/models.hpp"

namespace szlab {

// Linear chart z(zeta) = z0 + T zeta with omega and g standard at the center.
// T is complex m x m (the models carry the standard J, so the normalizing
// map is complex-linear); jacobian_at_center is its real 2m x 2m form.
struct PreferredChart {
  const Model* model = nullptr;
  CVec center{};
  int m = 1;
  std::array<std::array<cplx, 2>, 2> T{};  // chart differential, complex form
  double radius = 0.0;

  CVec map(const CVec& zeta) const {
    CVec z = center;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) z[a] += T[a][b] * zeta[b];
    return z;
  }
  void jacobian_at_center(double J[4][4]) const;
};

// Frame correction e_pref = e^{f} e0 with f = c0 + c.zeta + (1/2) zeta^T Q zeta.
// The 2-jet is chosen so that log a_pref = |zeta|^2 + O(|zeta|^3) and the
// connection form vanishes at the center.
struct PreferredFrame {
  double c0 = 0.0;
  std::array<cplx, 2> c{};
  std::array<std::array<cplx, 2>, 2> Q{};

  cplx f(const CVec& zeta, int m) const {
    cplx v = c0;
    for (int a = 0; a < m; ++a) v += c[a] * zeta[a];
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) v += 0.5 * Q[a][b] * zeta[a] * zeta[b];
    return v;
  }
  CVec df(const CVec& zeta, int m) const {
    CVec d{};
    for (int a = 0; a < m; ++a) {
      d[a] = c[a];
      for (int b = 0; b < m; ++b) d[a] += Q[a][b] * zeta[b];
    }
    return d;
  }
};

// Heisenberg coordinate chart at a bundle point: preferred chart + preferred
// frame + fiber angle, rho(zeta, theta) = e^{i theta} a(zeta)^{-1/2} e*_pref.
struct HeisenbergChart {
  PreferredChart chart;
  PreferredFrame frame;
  double theta0 = 0.0;

  int m() const { return chart.m; }
  const Model& model() const { return *chart.model; }

  // bundle point of chart coordinates (zeta, theta)
  BundlePoint point(const CVec& zeta, double theta) const {
    BundlePoint x;
    x.z = chart.map(zeta);
    x.theta = theta0 + theta - frame.f(zeta, m()).imag();
    return x;
  }

  // a(zeta) = ||e*_pref||^2 in chart coordinates; equals e^{|zeta|^2+O(|z|^3)}
  double log_a(const CVec& zeta) const;
  // connection coefficients of alpha = dtheta + sum A_j dzeta_j + conj
  cplx A(const CVec& zeta, int j) const;
  // d log a / d zeta_j
  cplx dlog_a(const CVec& zeta, int j) const;
};

// ---- operations ----

// Deterministic preferred chart: symmetric inverse square root of g(P0)
// followed by a symplectic Gram-Schmidt rotation.
PreferredChart build_preferred_chart(const Model& model, const CVec& P0);

PreferredFrame build_preferred_frame(const Model& model,
                                     const PreferredChart& chart);

HeisenbergChart heisenberg_chart(const Model& model, const BundlePoint& x0);

// Vertical components (-A_j, -conj A_j) of the horizontal lifts of
// d/dzeta_j, d/dzetabar_j at a chart point.
struct LiftCoeffs {
  std::array<cplx, 2> holo;      // coefficient of d/dtheta in d^h/dz_j
  std::array<cplx, 2> antiholo;  // in d^h/dzbar_j
};
LiftCoeffs horizontal_lift_coeffs(const HeisenbergChart& hc, const CVec& zeta);

}  // namespace szlab

#endif  // SZLAB_GEOMETRY_HPP
