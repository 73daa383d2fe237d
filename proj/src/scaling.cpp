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

#include "szlab/scaling.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace szlab {

std::vector<ScalingNode> scaling_grid(int m, double umax, double step,
                                      bool theta_slice) {
  std::vector<CVec> pts;
  if (m == 1) {
    for (double a = -umax; a <= umax + 1e-12; a += step)
      for (double b = -umax; b <= umax + 1e-12; b += step) {
        if (a * a + b * b <= umax * umax + 1e-12) pts.push_back(cvec(cplx(a, b)));
      }
  } else {
    for (double a = -umax; a <= umax + 1e-12; a += step)
      for (double b = -umax; b <= umax + 1e-12; b += step)
        if (a * a + b * b <= umax * umax + 1e-12)
          pts.push_back(cvec(cplx(a, 0.0), cplx(0.0, b)));
  }
  std::vector<ScalingNode> grid;
  for (const auto& u : pts)
    for (const auto& v : pts) grid.push_back({u, v, 0.0, 0.0});
  if (theta_slice) {
    for (const auto& u : pts) grid.push_back({u, pts.front(), 0.7, 0.0});
  }
  return grid;
}

cplx rescaled_kernel(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                     const CVec& u, const CVec& v, double theta, double phi) {
  const int N = ev.level();
  const int m = hc.m();
  const double s = std::sqrt(double(N));
  CVec zu{}, zv{};
  for (int j = 0; j < m; ++j) {
    zu[j] = u[j] / s;
    zv[j] = v[j] / s;
  }
  if (std::sqrt(norm2(zu, m)) > hc.chart.radius ||
      std::sqrt(norm2(zv, m)) > hc.chart.radius)
    throw szlab_error("rescaled_kernel: dilated point outside chart");
  const BundlePoint x = hc.point(zu, theta / N);
  const BundlePoint y = hc.point(zv, phi / N);
  return std::pow(double(N), -m) * ev.eval(x, y);
}

double universality_residual(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                             const std::vector<ScalingNode>& grid) {
  const int m = hc.m();
  double sup = 0.0;
  for (const auto& nd : grid) {
    const cplx r = rescaled_kernel(ev, hc, nd.u, nd.v, nd.theta, nd.phi);
    const cplx h = heisenberg_model_kernel(nd.u, nd.theta, nd.v, nd.phi, m);
    sup = std::max(sup, std::abs(r - h));
  }
  return sup;
}

ExpansionFit fit_expansion_coefficients(const Model& model,
                                        const HeisenbergChart& hc,
                                        const CVec& u, const CVec& v,
                                        const std::vector<int>& Ns, int K) {
  if (int(Ns.size()) < K + 2)
    throw szlab_error("fit_expansion_coefficients: need at least K+2 levels");
  const int m = hc.m();
  Eigen::MatrixXd A(Ns.size(), K);
  Eigen::VectorXcd y(Ns.size());
  for (size_t i = 0; i < Ns.size(); ++i) {
    const int N = Ns[i];
    SzegoEvaluator ev(model, N);
    const cplx r = rescaled_kernel(ev, hc, u, v, 0.0, 0.0);
    const cplx h = heisenberg_model_kernel(u, 0.0, v, 0.0, m);
    y(long(i)) = r / h - 1.0;
    for (int k = 1; k <= K; ++k) A(long(i), k - 1) = std::pow(double(N), -0.5 * k);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-10 * sv(0))
    throw szlab_error("fit_expansion_coefficients: ill-conditioned design matrix");
  Eigen::VectorXd cr = svd.solve(Eigen::VectorXd(y.real()));
  Eigen::VectorXd ci = svd.solve(Eigen::VectorXd(y.imag()));
  Eigen::VectorXcd coef(K);
  for (int k = 0; k < K; ++k) coef(k) = cplx(cr(k), ci(k));
  ExpansionFit fit;
  for (int k = 0; k < K; ++k) fit.b.push_back(coef(k));
  Eigen::VectorXcd res = y - A.cast<cplx>() * coef;
  fit.residual = std::sqrt(res.squaredNorm() / double(Ns.size()));
  // coefficient-level uncertainty: residual through (A^T A)^{-1}
  const Eigen::MatrixXd V = svd.matrixV();
  for (int k = 0; k < K; ++k) {
    double d = 0.0;
    for (int s = 0; s < sv.size(); ++s)
      d += V(k, s) * V(k, s) / (sv(s) * sv(s));
    fit.sigma.push_back(fit.residual * std::sqrt(d * double(Ns.size())));
  }
  return fit;
}

ScalingReport run_scaling(const Model& model, const BundlePoint& x0,
                          const std::vector<int>& Ns, int K, double grid_max,
                          double grid_step) {
  ScalingReport rep;
  rep.model_id = model.id();
  rep.center = x0.z;
  rep.theta0 = x0.theta;
  rep.grid_step = grid_step;
  rep.grid_max = grid_max;
  rep.Ns = Ns;
  const HeisenbergChart hc = heisenberg_chart(model, x0);
  const auto grid = scaling_grid(model.m(), grid_max, grid_step);
  for (int N : Ns) {
    SzegoEvaluator ev(model, N);
    rep.residuals.push_back(universality_residual(ev, hc, grid));
  }
  for (size_t i = 0; i + 1 < rep.residuals.size(); ++i)
    rep.ratios.push_back(rep.residuals[i + 1] /
                         std::max(rep.residuals[i], 1e-300));
  if (rep.residuals.size() >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = int(Ns.size());
    for (int i = 0; i < n; ++i) {
      const double lx = std::log(double(Ns[i]));
      const double ly = std::log(std::max(rep.residuals[i], 1e-300));
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  const int Keff = std::min(K, int(Ns.size()) - 2);
  if (Keff >= 1) {
    CVec u = cvec(cplx(0.7, 0.3));
    CVec v = cvec(cplx(-0.2, 0.5));
    if (model.m() == 2) { u[1] = cplx(0.1, -0.2); v[1] = cplx(0.3, 0.1); }
    const ExpansionFit f = fit_expansion_coefficients(model, hc, u, v, Ns, Keff);
    rep.bhat = f.b;
    rep.bhat_residual = f.residual;
  }
  // paper-true check: residual(N) <= C N^{-1/2} with C fit at the first level
  const double C = rep.residuals.front() * std::sqrt(double(Ns.front()));
  rep.decay_bound_pass = true;
  for (size_t i = 0; i < Ns.size(); ++i)
    if (rep.residuals[i] > 1.05 * C / std::sqrt(double(Ns[i])) + rep.noise_floor)
      rep.decay_bound_pass = false;
  rep.ratio_band_pass = !rep.ratios.empty();
  for (double r : rep.ratios)
    if (!(r >= 0.3 && r <= 0.85)) rep.ratio_band_pass = false;
  return rep;
}

}  // namespace szlab
