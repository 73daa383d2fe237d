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

#ifndef SZLAB_COMMON_HPP
#define SZLAB_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace szlab {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Point on C^m, m <= 2. Unused slots stay zero.
using CVec = std::array<cplx, 2>;

inline CVec cvec(cplx z0) { return {z0, cplx{0.0, 0.0}}; }
inline CVec cvec(cplx z0, cplx z1) { return {z0, z1}; }

// Point of the unit circle bundle X: base coordinates in the model's chart
// plus the fiber angle relative to the model's base frame,
// x = e^{i theta} a0(z)^{-1/2} e0*(z).
struct BundlePoint {
  CVec z{};
  double theta = 0.0;
};

inline cplx dotc(const CVec& a, const CVec& b, int m) {
  cplx s = 0.0;
  for (int j = 0; j < m; ++j) s += a[j] * std::conj(b[j]);
  return s;
}

inline double norm2(const CVec& a, int m) { return dotc(a, a, m).real(); }

// 4th-order central first derivative of a scalar function of one real variable.
template <typename F>
auto diff4(F&& f, double h) -> decltype(f(0.0)) {
  return (f(-2 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2 * h)) / (12.0 * h);
}

// 2nd-order central first derivative.
template <typename F>
auto diff2(F&& f, double h) -> decltype(f(0.0)) {
  return (f(h) - f(-h)) / (2.0 * h);
}

// central second derivative
template <typename F>
auto diff2nd(F&& f, double h) -> decltype(f(0.0)) {
  return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
}

struct szlab_error : std::runtime_error {
  explicit szlab_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace szlab

#endif  // SZLAB_COMMON_HPP
