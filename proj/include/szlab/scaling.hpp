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

#ifndef SZLAB_SCALING_HPP
#define SZLAB_SCALING_HPP

#include <optional>
#include <string>
#include <vector>

#include "szlab/geometry.hpp"
#include "szlab/models.hpp"

namespace szlab {

// One evaluation node of the near-diagonal comparison grid.
struct ScalingNode {
  CVec u{};
  CVec v{};
  double theta = 0.0;
  double phi = 0.0;
};

// |u|,|v| <= umax with the given step, theta = phi = 0, plus one
// nonzero-theta slice exercising the e^{i(theta-phi)} factor.
std::vector<ScalingNode> scaling_grid(int m, double umax, double step,
                                      bool theta_slice = true);

// N^{-m} Pi_N at Heisenberg-dilated arguments through the chart.
cplx rescaled_kernel(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                     const CVec& u, const CVec& v, double theta, double phi);

// sup over the grid of |rescaled - Pi^H_1|
double universality_residual(const SzegoEvaluator& ev, const HeisenbergChart& hc,
                             const std::vector<ScalingNode>& grid);

struct ExpansionFit {
  std::vector<cplx> b;        // b[r-1] multiplies N^{-r/2}
  double residual = 0.0;      // rms of the fit
  std::vector<double> sigma;  // fit residual propagated to each coefficient
};

// Least-squares fit of rescaled/Pi^H - 1 against {N^{-1/2},...,N^{-K/2}}
// at a fixed (u,v).  Throws when the N list is too short or the design
// matrix is numerically rank-deficient.
ExpansionFit fit_expansion_coefficients(const Model& model,
                                        const HeisenbergChart& hc,
                                        const CVec& u, const CVec& v,
                                        const std::vector<int>& Ns, int K);

struct ScalingReport {
  std::string model_id;
  CVec center{};
  double theta0 = 0.0;
  double grid_step = 0.0;
  double grid_max = 0.0;
  std::vector<int> Ns;
  std::vector<double> residuals;
  std::vector<double> ratios;  // residual(N_{i+1})/residual(N_i)
  std::optional<double> fitted_exponent;  // set when >= 3 residuals
  std::vector<cplx> bhat;
  double bhat_residual = 0.0;
  bool decay_bound_pass = false;   // residual(N) <= C N^{-1/2}, C fit at N_0
  bool ratio_band_pass = false;    // ratios within [0.3, 0.85]
  double noise_floor = 1e-12;
};

ScalingReport run_scaling(const Model& model, const BundlePoint& x0,
                          const std::vector<int>& Ns, int K = 3,
                          double grid_max = 2.0, double grid_step = 0.5);

}  // namespace szlab

#endif  // SZLAB_SCALING_HPP
