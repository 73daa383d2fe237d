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

#include "szlab/symbolcalc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace szlab {

void Ball4::Bmat(const CVec& z, cplx B[2][2]) const {
  const double e = eps * deform;
  B[0][0] = e * std::conj(z[1]);
  B[0][1] = 0.0;
  B[1][0] = 0.0;
  B[1][1] = e * std::conj(z[0]);
}

void Ball4::zbar_frame(const CVec& z, cplx F[2][4]) const {
  cplx B[2][2];
  Bmat(z, B);
  // pairing P_jk = 2i omega0(Zbar_j, Z_k) for the raw frame
  Eigen::Matrix2cd P;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      cplx val = -0.5 * kI * (j == k ? 1.0 : 0.0);
      cplx corr = 0.0;
      for (int l = 0; l < 2; ++l) corr += B[j][l] * std::conj(B[k][l]);
      val += 0.5 * kI * corr;
      P(j, k) = 2.0 * kI * val;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(P);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw szlab_error("Ball4: frame degenerate at this point");
  Eigen::Matrix2cd C = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                       es.eigenvectors().adjoint();
  // Zbar'_j = sum_k C_jk Zbar_k with components on the real frame through
  // d/dz_d = (d/dx_d - i d/dy_d)/2, d/dzbar_d = (d/dx_d + i d/dy_d)/2
  for (int j = 0; j < 2; ++j) {
    cplx cz[2] = {0.0, 0.0}, czb[2] = {0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      czb[k] += C(j, k);
      for (int l = 0; l < 2; ++l) cz[l] += C(j, k) * B[k][l];
    }
    for (int d = 0; d < 2; ++d) {
      F[j][2 * d] = 0.5 * (cz[d] + czb[d]);
      F[j][2 * d + 1] = 0.5 * kI * (czb[d] - cz[d]);
    }
  }
}

namespace {

// beta(d/dx_a) with A_j = -(i/2) zbar_j
void beta_components(const CVec& z, double out[4]) {
  for (int j = 0; j < 2; ++j) {
    const cplx A = -0.5 * kI * std::conj(z[j]);
    out[2 * j] = 2.0 * A.real();          // A + conj(A)
    out[2 * j + 1] = -2.0 * A.imag();     // i(A - conj A)
  }
}

CVec base_of(const TstarPoint& pt) {
  return cvec(cplx(pt.q[0], pt.q[1]), cplx(pt.q[2], pt.q[3]));
}

}  // namespace

TstarPoint sigma_point(const CVec& x, double r) {
  TstarPoint pt;
  pt.q[0] = x[0].real();
  pt.q[1] = x[0].imag();
  pt.q[2] = x[1].real();
  pt.q[3] = x[1].imag();
  double b[4];
  beta_components(x, b);
  for (int a = 0; a < 4; ++a) pt.p[a] = r * b[a];
  pt.p[4] = r;
  return pt;
}

double p_theta(const TstarPoint& pt) { return pt.p[4]; }

cplx zeta1(const Ball4& J, int j, const TstarPoint& pt) {
  const CVec x = base_of(pt);
  cplx F[2][4];
  J.zbar_frame(x, F);
  double b[4];
  beta_components(x, b);
  cplx vert = 0.0;
  cplx horiz = 0.0;
  for (int a = 0; a < 4; ++a) {
    horiz += pt.p[a] * F[j][a];
    vert -= F[j][a] * b[a];
  }
  return horiz + pt.p[4] * vert;
}

void nijenhuis(const Ball4& J, const CVec& z, cplx N[2][2][2]) {
  // Z_j = conj frame; [Z_j, Z_k] by central differences of the components
  const double h = 1e-5;
  auto Zfield = [&](int j, const CVec& x, cplx out[4]) {
    cplx F[2][4];
    J.zbar_frame(x, F);
    for (int a = 0; a < 4; ++a) out[a] = std::conj(F[j][a]);
  };
  auto bracket = [&](int j, int k, cplx out[4]) {
    cplx Vj[4], Vk[4];
    Zfield(j, z, Vj);
    Zfield(k, z, Vk);
    for (int a = 0; a < 4; ++a) out[a] = 0.0;
    for (int dirn = 0; dirn < 4; ++dirn) {
      CVec zp = z, zm = z;
      const cplx dz = (dirn % 2 == 0) ? cplx(h, 0.0) : cplx(0.0, h);
      const int slot = dirn / 2;
      zp[slot] += dz;
      zm[slot] -= dz;
      cplx Wp[4], Wm[4], Up[4], Um[4];
      Zfield(k, zp, Wp);
      Zfield(k, zm, Wm);
      Zfield(j, zp, Up);
      Zfield(j, zm, Um);
      for (int a = 0; a < 4; ++a) {
        out[a] += Vj[dirn] * (Wp[a] - Wm[a]) / (2.0 * h);
        out[a] -= Vk[dirn] * (Up[a] - Um[a]) / (2.0 * h);
      }
    }
  };
  // decompose in the frame (Z_1, Z_2, Zbar_1, Zbar_2)
  cplx F[2][4];
  J.zbar_frame(z, F);
  Eigen::Matrix4cd M;
  for (int a = 0; a < 4; ++a) {
    M(a, 0) = std::conj(F[0][a]);
    M(a, 1) = std::conj(F[1][a]);
    M(a, 2) = F[0][a];
    M(a, 3) = F[1][a];
  }
  Eigen::PartialPivLU<Eigen::Matrix4cd> lu(M);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      if (j == k) {
        N[0][j][k] = N[1][j][k] = 0.0;
        continue;
      }
      cplx br[4];
      bracket(j, k, br);
      Eigen::Vector4cd rhs;
      for (int a = 0; a < 4; ++a) rhs(a) = br[a];
      Eigen::Vector4cd coef = lu.solve(rhs);
      N[0][j][k] = -2.0 * coef(2);
      N[1][j][k] = -2.0 * coef(3);
    }
}

cplx nu_coeff(const Ball4& J, const CVec& z, double ptheta, int p, int j, int k) {
  cplx N[2][2][2];
  nijenhuis(J, z, N);
  return kI / (12.0 * ptheta) *
         (std::conj(N[k][p][j]) + std::conj(N[j][p][k]));
}

cplx zeta2(const Ball4& J, int p, const TstarPoint& pt) {
  const CVec x = base_of(pt);
  const double pth = pt.p[4];
  if (pth == 0.0) throw szlab_error("zeta2: p_theta = 0 (cone tip)");
  cplx N[2][2][2];
  nijenhuis(J, x, N);
  cplx corr = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      corr += std::conj(N[k][p][j]) * std::conj(zeta1(J, j, pt)) *
              std::conj(zeta1(J, k, pt));
  return zeta1(J, p, pt) + kI / (6.0 * pth) * corr;
}

cplx poisson_bracket(const SymbolFn& f, const SymbolFn& g, const TstarPoint& pt,
                     double h) {
  cplx total = 0.0;
  for (int a = 0; a < 5; ++a) {
    auto dq = [&](const SymbolFn& fn) {
      auto shifted = [&](double t) {
        TstarPoint s = pt;
        s.q[a] += t;
        return fn(s);
      };
      return diff4(shifted, h);
    };
    auto dp = [&](const SymbolFn& fn) {
      auto shifted = [&](double t) {
        TstarPoint s = pt;
        s.p[a] += t;
        return fn(s);
      };
      return diff4(shifted, h);
    };
    total += dp(f) * dq(g) - dq(f) * dp(g);
  }
  return total;
}

double q_symbol(const Ball4& J, const TstarPoint& pt) {
  // <xi, Z_j> = conj(zeta1_j) at real covectors
  double s = 0.0;
  for (int j = 0; j < 2; ++j) s += std::norm(zeta1(J, j, pt));
  return s;
}

double ideal_residual(const Ball4& J, bool second_order, double delta,
                      const CVec& x0, int ndirs, uint64_t seed) {
  if (!(delta > 0.0 && delta <= 0.1 + 1e-12))
    throw szlab_error("ideal_residual: delta in (0, 0.1] required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const TstarPoint base = sigma_point(x0, 1.0);

  auto zfun = [&](int j, const TstarPoint& pt) {
    return second_order ? zeta2(J, j, pt) : zeta1(J, j, pt);
  };

  Eigen::MatrixXcd A(ndirs, 5);
  Eigen::VectorXcd y(ndirs);
  for (int d = 0; d < ndirs; ++d) {
    double nu[5];
    double nn = 0.0;
    for (double& v : nu) {
      v = gauss(rng);
      nn += v * v;
    }
    nn = std::sqrt(nn);
    TstarPoint pt = base;
    for (int a = 0; a < 5; ++a) pt.p[a] += delta * nu[a] / nn;
    SymbolFn f0 = [&](const TstarPoint& q) { return zfun(0, q); };
    SymbolFn f1 = [&](const TstarPoint& q) { return zfun(1, q); };
    y(d) = poisson_bracket(f0, f1, pt);
    const cplx z0 = zfun(0, pt), z1 = zfun(1, pt);
    const cplx zb0 = std::conj(z0), zb1 = std::conj(z1);
    A(d, 0) = z0;
    A(d, 1) = z1;
    A(d, 2) = zb0 * zb0;
    A(d, 3) = zb0 * zb1;
    A(d, 4) = zb1 * zb1;
  }
  Eigen::VectorXcd coef =
      A.colPivHouseholderQr().solve(y);
  Eigen::VectorXcd r = y - A * coef;
  return std::sqrt(r.squaredNorm() / double(ndirs));
}

// -------------------- phase psi --------------------

cplx phase_psi(const Model& model, const BundlePoint& x, const BundlePoint& y) {
  const cplx la = model.log_a0_ext(x.z, y.z);
  if (!std::isfinite(la.real()) || !std::isfinite(la.imag()) ||
      la.real() < -30.0)
    throw szlab_error("phase_psi: pair too far from the diagonal for the "
                      "polarized extension");
  const cplx ex = std::exp(la - 0.5 * model.log_a0(x.z) -
                           0.5 * model.log_a0(y.z) + kI * (x.theta - y.theta));
  return kI * (1.0 - ex);
}

cplx a_pref_ext(const HeisenbergChart& hc, const CVec& zeta, const CVec& eta) {
  const int m = hc.m();
  const CVec z = hc.chart.map(zeta);
  const CVec w = hc.chart.map(eta);
  const cplx la = hc.model().log_a0_ext(z, w);
  // polarization of -2 Re f: -f(zeta) - conj(f(eta))
  return std::exp(la - hc.frame.f(zeta, m) - std::conj(hc.frame.f(eta, m)));
}

cplx phase_psi_chart(const HeisenbergChart& hc, const CVec& zeta, double theta,
                     const CVec& eta, double phi) {
  const cplx a = a_pref_ext(hc, zeta, eta);
  const double la_z = hc.log_a(zeta);
  const double la_w = hc.log_a(eta);
  const cplx ex =
      a * std::exp(cplx(-0.5 * la_z - 0.5 * la_w, theta - phi));
  return kI * (1.0 - ex);
}

}  // namespace szlab
