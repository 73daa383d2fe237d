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

#include "szlab/kodaira.hpp"

#include <cmath>

namespace szlab {

KodairaLift kodaira_lift(const SzegoEvaluator& ev, const BundlePoint& x) {
  auto basis = ev.ensure_basis();
  KodairaLift lift;
  lift.level = ev.level();
  lift.components.resize(basis->dim);
  for (int j = 0; j < basis->dim; ++j) lift.components[j] = basis->lift(j, x);
  return lift;
}

double projective_angle(const KodairaLift& a, const KodairaLift& b) {
  cplx inner = 0.0;
  for (size_t j = 0; j < a.components.size(); ++j)
    inner += a.components[j] * std::conj(b.components[j]);
  const double c =
      std::abs(inner) / std::sqrt(a.norm2() * b.norm2());
  return std::acos(std::min(1.0, c));
}

double pullback_fs_form(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                        double h, double* imag_leak) {
  if (hc.m() != 1)
    throw szlab_error("pullback_fs_form: m=1 charts only");
  auto logPi = [&](const CVec& zx, const CVec& zy) {
    const BundlePoint x = hc.point(zx, 0.0);
    const BundlePoint y = hc.point(zy, 0.0);
    const cplx val = ev.eval(x, y);
    if (std::abs(val) < 1e-280)
      throw szlab_error("pullback_fs_form: kernel below positivity floor");
    return std::log(val);
  };
  // M_ab = d^2/dxi_a deta_b log Pi, 4th-order in each direction
  auto M = [&](int a, int b) {
    auto outer = [&](double xa) {
      auto inner = [&](double xb) {
        const CVec zx = cvec(a == 0 ? cplx(xa, 0.0) : cplx(0.0, xa));
        const CVec zy = cvec(b == 0 ? cplx(xb, 0.0) : cplx(0.0, xb));
        return logPi(zx, zy);
      };
      return diff4(inner, h);
    };
    return diff4(outer, h);
  };
  const cplx M01 = M(0, 1), M10 = M(1, 0);
  const cplx coeff = 0.5 * kI * (M01 - M10);
  if (imag_leak) *imag_leak = std::abs(coeff.imag());
  return coeff.real();
}

std::vector<CVec> tian_grid(const Model& model, int npts) {
  std::vector<CVec> pts;
  const std::string id = model.id();
  if (id.rfind("torus", 0) == 0) {
    const auto* t = dynamic_cast<const Torus*>(&model);
    int k = int(std::ceil(std::sqrt(double(npts))));
    for (int i = 0; i < k && int(pts.size()) < npts; ++i)
      for (int j = 0; j < k && int(pts.size()) < npts; ++j)
        pts.push_back(cvec((i + 0.37) / k + (j + 0.21) / k * t->tau()));
  } else {
    // graph-coordinate sweep of the projective line avoiding the poles
    int k = npts;
    for (int i = 0; i < k; ++i) {
      const double u = 0.08 + 0.72 * i / std::max(1, k - 1);
      const double phi = 2.0 * kPi * ((0.13 + 0.61 * i) - std::floor(0.13 + 0.61 * i));
      const double r = std::sqrt(u / (1.0 - u));
      pts.push_back(cvec(r * std::exp(kI * phi)));
    }
  }
  return pts;
}

TianReport tian_error(const Model& model, const std::vector<int>& Ns,
                      const std::vector<CVec>& grid_points) {
  TianReport rep;
  rep.model_id = model.id();
  rep.Ns = Ns;
  rep.grid = grid_points;
  for (int N : Ns) {
    SzegoEvaluator ev(model, N);
    double sup = 0.0;
    for (const CVec& P : grid_points) {
      BundlePoint x0;
      x0.z = P;
      const HeisenbergChart hc = heisenberg_chart(model, x0);
      const double c = pullback_fs_form(ev, hc, 1e-3);
      // omega at the chart center is the standard form: coefficient 1
      sup = std::max(sup, std::abs(c / N - 1.0));
    }
    rep.sup_error.push_back(sup);
  }
  if (Ns.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = int(Ns.size());
    for (int i = 0; i < n; ++i) {
      const double lx = std::log(double(Ns[i]));
      const double ly = std::log(std::max(rep.sup_error[i], 1e-300));
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    rep.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

std::vector<double> fN_profile(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                               const CVec& v, const std::vector<double>& ts) {
  const int m = hc.m();
  if (norm2(v, m) == 0.0) throw szlab_error("fN_profile: v must be nonzero");
  const double s = std::sqrt(double(ev.level()));
  const BundlePoint x0 = hc.point(CVec{}, 0.0);
  const double d0 = ev.diag(x0.z);
  std::vector<double> out;
  for (double t : ts) {
    CVec zeta{};
    for (int j = 0; j < m; ++j) zeta[j] = t * v[j] / s;
    const BundlePoint q = hc.point(zeta, 0.0);
    const double num = std::norm(ev.eval(x0, q));
    out.push_back(num / (d0 * ev.diag(q.z)));
  }
  return out;
}

CVec random_point(const Model& model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::string id = model.id();
  if (id.rfind("torus", 0) == 0) {
    const auto* t = dynamic_cast<const Torus*>(&model);
    return cvec(uni(rng) + uni(rng) * t->tau());
  }
  if (id.rfind("bf", 0) == 0) {
    CVec z{};
    for (int j = 0; j < model.m(); ++j)
      z[j] = cplx(2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0);
    return z;
  }
  // projective line: uniform in (u, phi) graph coordinates
  const double u = 0.98 * uni(rng);
  const double r = std::sqrt(u / (1.0 - u));
  return cvec(r * std::exp(kI * 2.0 * kPi * uni(rng)));
}

InjectivityReport injectivity_scan(const Model& model, int N, int npairs,
                                   uint64_t seed) {
  InjectivityReport rep;
  rep.N = N;
  rep.pairs = npairs;
  rep.min_angle = 1e300;
  SzegoEvaluator ev(model, N, /*force_basis=*/true);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int p = 0; p < npairs; ++p) {
    const CVec P = random_point(model, rng);
    CVec Q;
    if (p % 2 == 0) {
      Q = random_point(model, rng);  // far regime: r sqrt(N) -> infinity
      if (model.distance(P, Q) < 1e-6) { --p; continue; }
    } else {
      // near regime: r <= C/sqrt(N) through the Heisenberg chart at P
      BundlePoint xp; xp.z = P;
      const HeisenbergChart hc = heisenberg_chart(model, xp);
      const double rr = (0.3 + 2.7 * uni(rng)) / std::sqrt(double(N));
      const double ang = 2.0 * kPi * uni(rng);
      Q = hc.chart.map(cvec(rr * std::exp(kI * ang)));
    }
    BundlePoint xp, xq;
    xp.z = P;
    xq.z = Q;
    const double angle =
        projective_angle(kodaira_lift(ev, xp), kodaira_lift(ev, xq));
    rep.min_angle = std::min(rep.min_angle, angle);
    if (angle < rep.collision_floor) ++rep.collisions;
  }
  return rep;
}

}  // namespace szlab
