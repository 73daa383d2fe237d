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

#ifndef SZLAB_KODAIRA_HPP
#define SZLAB_KODAIRA_HPP

#include <optional>
#include <random>
#include <vector>

#include "szlab/geometry.hpp"
#include "szlab/models.hpp"

namespace szlab {

// lift of the Kodaira map: (S_1(x), ..., S_{d_N}(x))
struct KodairaLift {
  int level = 0;
  std::vector<cplx> components;
  double norm2() const {
    double s = 0.0;
    for (const cplx& c : components) s += std::norm(c);
    return s;
  }
};

KodairaLift kodaira_lift(const SzegoEvaluator& ev, const BundlePoint& x);

// projective angle between two lifts, in [0, pi/2]
double projective_angle(const KodairaLift& a, const KodairaLift& b);

// (i/2) d1 d2 log Pi_N restricted to the diagonal, expressed in the chart
// at P (m=1: the dzeta1 ^ dzeta2 coefficient).  4th-order mixed central
// differences with chart step h.
double pullback_fs_form(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                        double h = 1e-3, double* imag_leak = nullptr);

struct TianReport {
  std::string model_id;
  std::vector<int> Ns;
  std::vector<double> sup_error;           // C0 error of (1/N) pullback - omega
  std::optional<double> fitted_order;      // log-log slope when >= 2 levels
  std::vector<CVec> grid;
};

TianReport tian_error(const Model& model, const std::vector<int>& Ns,
                      const std::vector<CVec>& grid_points);

// f_N(t) = |Pi(x0, q_t)|^2 / (Pi(x0,x0) Pi(q_t,q_t)), q_t = chart point t v/sqrt(N)
std::vector<double> fN_profile(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                               const CVec& v, const std::vector<double>& ts);

struct InjectivityReport {
  int N = 0;
  int pairs = 0;
  int collisions = 0;
  double min_angle = 0.0;
  double collision_floor = 1e-9;
};

// random point pairs spanning both separation regimes (r sqrt(N) large and
// r <= C/sqrt(N)); reports projective collisions of the lifted Kodaira map
InjectivityReport injectivity_scan(const Model& model, int N, int npairs,
                                   uint64_t seed);

// deterministic sample of chart points for Tian sweeps
std::vector<CVec> tian_grid(const Model& model, int npts);

// random base point for a given model (uniform-ish over the chart)
CVec random_point(const Model& model, std::mt19937_64& rng);

}  // namespace szlab

#endif  // SZLAB_KODAIRA_HPP
