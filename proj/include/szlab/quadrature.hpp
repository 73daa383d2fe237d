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

#ifndef SZLAB_QUADRATURE_HPP
#define SZLAB_QUADRATURE_HPP

#include <string>
#include <vector>

#include "szlab/common.hpp"

namespace szlab {

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Gauss-Legendre on [a,b].
void gauss_legendre_ab(int n, double a, double b, std::vector<double>& x,
                       std::vector<double>& w);

// Gauss-Hermite nodes/weights for weight e^{-x^2}; weights returned
// premultiplied by e^{+x_i^2} so that  int g(x) dx ~= sum w_i g(x_i)
// for g with Gaussian decay.
void gauss_hermite_bare(int n, std::vector<double>& x, std::vector<double>& w);

// Quadrature rule for integrals over the base manifold M against dV_M.
// Points are model-chart coordinates.
struct QuadRule {
  std::vector<CVec> pts;
  std::vector<double> wts;
  std::string spec;  // human-readable grid spec, keys the disk cache
};

}  // namespace szlab

#endif  // SZLAB_QUADRATURE_HPP
