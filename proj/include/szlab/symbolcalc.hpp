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

#ifndef SZLAB_SYMBOLCALC_HPP
#define SZLAB_SYMBOLCALC_HPP

#include <cstdint>
#include <functional>

#include "szlab/geometry.hpp"
#include "szlab/models.hpp"

namespace szlab {

// Almost complex structure on a ball in C^2 given through its (0,1) frame
//   Zbar_j = d/dzbar_j + sum_k B_jk d/dz_k,  B symmetric, B(0) = 0.
// The bundled witness B11 = eps zbar_2, B22 = eps zbar_1, B12 = 0 has
// nonvanishing Nijenhuis tensor at the origin; `deform` scales B linearly
// to the integrable structure.
struct Ball4 {
  double eps = 0.5;
  double deform = 1.0;

  void Bmat(const CVec& z, cplx B[2][2]) const;
  // omega0-orthonormalized frame: returns complex components of Zbar_j on
  // (dx1, dy1, dx2, dy2)
  void zbar_frame(const CVec& z, cplx F[2][4]) const;
};

// point of T*X, X = ball x S^1: q = (x1,y1,x2,y2,theta), p = conjugate
struct TstarPoint {
  double q[5] = {0, 0, 0, 0, 0};
  double p[5] = {0, 0, 0, 0, 0};
};

// xi = r alpha over the base point x
TstarPoint sigma_point(const CVec& x, double r);

using SymbolFn = std::function<cplx(const TstarPoint&)>;

double p_theta(const TstarPoint& pt);

// zeta^(1)_j = <xi, Zbar_j^X> with the horizontal lift through
// alpha = dtheta + beta, A_j = -(i/2) zbar_j
cplx zeta1(const Ball4& J, int j, const TstarPoint& pt);

// Nijenhuis components: N(Z_j, Z_k) = -2 [Z_j, Z_k]^{(0,1)} = N^p_{jk} Zbar_p,
// via finite-difference Lie brackets of the frame fields.
void nijenhuis(const Ball4& J, const CVec& z, cplx N[2][2][2]);

// nu_p^{jk} = (i/12 p_theta)(Nbar^k_{pj} + Nbar^j_{pk}); the coefficient that
// cancels the measured first-order obstruction (half the printed value, see
// the repository notes on conventions)
cplx nu_coeff(const Ball4& J, const CVec& z, double ptheta, int p, int j, int k);

// zeta^(2)_p = zeta^(1)_p + (i/6 p_theta) sum Nbar^k_{pj} zbar_j zbar_k
cplx zeta2(const Ball4& J, int p, const TstarPoint& pt);

// canonical Poisson bracket by 4th-order central differences, h = 1e-3
cplx poisson_bracket(const SymbolFn& f, const SymbolFn& g, const TstarPoint& pt,
                     double h = 1e-3);

// q = sum_j |<xi, Z_j>|^2 (the box-operator symbol)
double q_symbol(const Ball4& J, const TstarPoint& pt);

// RMS residual of {zeta_1, zeta_2} against span{zeta_p, zbar_a zbar_b} over
// ndirs fiber directions at distance delta from Sigma
double ideal_residual(const Ball4& J, bool second_order, double delta,
                      const CVec& x0, int ndirs, uint64_t seed);

// ---- phase psi for the integrable models ----

// psi(x, y) = i (1 - lambda mubar a0(z,w)) in the model's global frame
cplx phase_psi(const Model& model, const BundlePoint& x, const BundlePoint& y);

// polarized preferred-frame weight a_pref(zeta, eta) of a Heisenberg chart;
// Taylor law: 1 + zeta.etabar + O(cubic)
cplx a_pref_ext(const HeisenbergChart& hc, const CVec& zeta, const CVec& eta);

// psi through the chart, for positivity and diagonal-jet checks
cplx phase_psi_chart(const HeisenbergChart& hc, const CVec& zeta, double theta,
                     const CVec& eta, double phi);

}  // namespace szlab

#endif  // SZLAB_SYMBOLCALC_HPP
