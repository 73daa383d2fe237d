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

#ifndef SZLAB_MODELS_HPP
#define SZLAB_MODELS_HPP

#include <memory>
#include <string>
#include <vector>

#include "szlab/common.hpp"
#include "szlab/quadrature.hpp"

namespace szlab {

// Orthonormal basis of the level-N section space, exposed through the
// equivariant lifts.  w_value(j, z) is the weighted representative
// a0(z)^{-N/2} f_j(z); the full lift at a bundle point is e^{iN theta} w_value.
class SectionBasis {
 public:
  virtual ~SectionBasis() = default;
  int level = 0;
  int dim = 0;
  double gram_residual = 0.0;
  virtual cplx w_value(int j, const CVec& z) const = 0;
  // plain complex derivative d/dz_dir of w_value (weight included)
  virtual cplx w_dz(int j, const CVec& z, int dir) const = 0;
  cplx lift(int j, const BundlePoint& x) const {
    return std::exp(kI * double(level) * x.theta) * w_value(j, x.z);
  }
};

// A concrete model geometry.  All bundled models carry the standard complex
// structure in their chart coordinates; the metric data is conformal for m=1.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::string id() const = 0;
  virtual int m() const = 0;
  virtual bool compact() const = 0;
  virtual double volume() const = 0;  // int_M dV_M, compact models
  virtual int degree() const = 0;     // c1(L)[M] for compact m=1 models

  // log a0 = log ||e0*||^2 for the model's base frame, with holomorphic
  // first and second derivatives.
  virtual double log_a0(const CVec& z) const = 0;
  virtual CVec dz_log_a0(const CVec& z) const = 0;
  virtual void d2_log_a0(const CVec& z, cplx zz[2][2], cplx zzb[2][2]) const = 0;

  // polarized extension: holomorphic in z, antiholomorphic in w,
  // log_a0_ext(z,z) = log_a0(z), hermitian-symmetric.
  virtual cplx log_a0_ext(const CVec& z, const CVec& w) const = 0;

  // omega and g as real 2m x 2m matrices in (x1,y1,x2,y2) ordering.
  virtual void omega_g(const CVec& z, double omega[4][4], double g[4][4]) const;

  // m=1 models: conformal weight W with omega = W dx^dy, g = W g0.
  virtual double conformal_weight(const CVec& z) const;

  virtual double injectivity_scale() const = 0;
  virtual double distance(const CVec& a, const CVec& b) const = 0;

  virtual QuadRule quadrature(int N) const = 0;
  // refined rule for convergence cross-checks
  virtual QuadRule quadrature(int N, double refine) const;

  virtual int dim_sections(int N) const = 0;
  virtual std::shared_ptr<SectionBasis> sections(int N) const = 0;

  virtual bool closed_kernel() const { return false; }
  // K_w(z,w) = sum_j w_j(z) conj(w_j(w)) in closed form, when available
  virtual cplx weighted_kernel(int N, const CVec& z, const CVec& w) const;
};

// -------------------- concrete models --------------------

// Bargmann-Fock space on C^m with weight e^{-|z|^2}; the non-compact model.
// Kernel in closed form; the truncated monomial basis is used for tests.
class BargmannFock : public Model {
 public:
  explicit BargmannFock(int m, int truncation = 32);
  std::string id() const override;
  int m() const override { return m_; }
  bool compact() const override { return false; }
  double volume() const override { return 0.0; }
  int degree() const override { return 0; }
  double log_a0(const CVec& z) const override;
  CVec dz_log_a0(const CVec& z) const override;
  void d2_log_a0(const CVec& z, cplx zz[2][2], cplx zzb[2][2]) const override;
  cplx log_a0_ext(const CVec& z, const CVec& w) const override;
  double conformal_weight(const CVec&) const override { return 1.0; }
  double injectivity_scale() const override { return 1e6; }
  double distance(const CVec& a, const CVec& b) const override;
  QuadRule quadrature(int N) const override;
  int dim_sections(int N) const override;
  std::shared_ptr<SectionBasis> sections(int N) const override;
  bool closed_kernel() const override { return true; }
  cplx weighted_kernel(int N, const CVec& z, const CVec& w) const override;
  int truncation() const { return trunc_; }

 private:
  int m_;
  int trunc_;  // monomial total-degree truncation of the basis
};

// CP^1 with the Fubini-Study metric normalized to area pi (degree 1).
class ProjectiveLine : public Model {
 public:
  ProjectiveLine() = default;
  std::string id() const override { return "projline"; }
  int m() const override { return 1; }
  bool compact() const override { return true; }
  double volume() const override { return kPi; }
  int degree() const override { return 1; }
  double log_a0(const CVec& z) const override;
  CVec dz_log_a0(const CVec& z) const override;
  void d2_log_a0(const CVec& z, cplx zz[2][2], cplx zzb[2][2]) const override;
  cplx log_a0_ext(const CVec& z, const CVec& w) const override;
  double conformal_weight(const CVec& z) const override;
  double injectivity_scale() const override { return 0.5 * kPi * 0.5; }
  double distance(const CVec& a, const CVec& b) const override;
  QuadRule quadrature(int N) const override;
  QuadRule quadrature(int N, double refine) const override;
  int dim_sections(int N) const override { return N + 1; }
  std::shared_ptr<SectionBasis> sections(int N) const override;
  bool closed_kernel() const override { return true; }
  cplx weighted_kernel(int N, const CVec& z, const CVec& w) const override;
};

// CP^1 with metric h_FS e^{-eps chi}.  chi is the first sphere harmonic
// chi(z) = 2 Re z / (1+|z|^2) (smooth on all of CP^1, closed form); the
// Kaehler form stays positive for eps < 1/2.  Monomial sections are
// orthonormalized by Cholesky of the quadrature Gram matrix.
class ProjectiveLinePerturbed : public Model {
 public:
  explicit ProjectiveLinePerturbed(double eps);
  std::string id() const override;
  int m() const override { return 1; }
  bool compact() const override { return true; }
  double volume() const override { return kPi; }
  int degree() const override { return 1; }
  double chi(const CVec& z) const;
  double log_a0(const CVec& z) const override;
  CVec dz_log_a0(const CVec& z) const override;
  void d2_log_a0(const CVec& z, cplx zz[2][2], cplx zzb[2][2]) const override;
  cplx log_a0_ext(const CVec& z, const CVec& w) const override;
  double conformal_weight(const CVec& z) const override;
  double injectivity_scale() const override { return 0.5 * kPi * 0.5; }
  double distance(const CVec& a, const CVec& b) const override;
  QuadRule quadrature(int N) const override;
  QuadRule quadrature(int N, double refine) const override;
  int dim_sections(int N) const override { return N + 1; }
  std::shared_ptr<SectionBasis> sections(int N) const override;
  double eps() const { return eps_; }

 private:
  double eps_;
};

// Flat torus C/(Z + tau Z), one complex dimension, degree-1 theta bundle,
// dV_M = (pi/Im tau) dx dy (total area pi).
class Torus : public Model {
 public:
  explicit Torus(cplx tau);
  std::string id() const override;
  int m() const override { return 1; }
  bool compact() const override { return true; }
  double volume() const override { return kPi; }
  int degree() const override { return 1; }
  double log_a0(const CVec& z) const override;
  CVec dz_log_a0(const CVec& z) const override;
  void d2_log_a0(const CVec& z, cplx zz[2][2], cplx zzb[2][2]) const override;
  cplx log_a0_ext(const CVec& z, const CVec& w) const override;
  double conformal_weight(const CVec&) const override;
  double injectivity_scale() const override;
  double distance(const CVec& a, const CVec& b) const override;
  QuadRule quadrature(int N) const override;
  QuadRule quadrature(int N, double refine) const override;
  int dim_sections(int N) const override { return N; }
  std::shared_ptr<SectionBasis> sections(int N) const override;
  cplx tau() const { return tau_; }

 private:
  cplx tau_;
};

// -------------------- kernels --------------------

// Level-N Szego kernel evaluator.  Uses the model's closed form when present,
// else sums the orthonormal basis.
class SzegoEvaluator {
 public:
  SzegoEvaluator(const Model& model, int N, bool force_basis = false);
  const Model& model() const { return *model_; }
  int level() const { return N_; }
  const std::shared_ptr<SectionBasis>& basis() const { return basis_; }
  std::shared_ptr<SectionBasis> ensure_basis() const;

  // Pi_N(x,y), hermitian and level-N equivariant in each slot
  cplx eval(const BundlePoint& x, const BundlePoint& y) const;
  // weighted kernel K_w(z,w): Pi with both fiber angles zero
  cplx weighted(const CVec& z, const CVec& w) const;
  double diag(const CVec& z) const;

 private:
  const Model* model_;
  int N_;
  bool closed_;
  mutable std::shared_ptr<SectionBasis> basis_;
};

// Reduced Heisenberg kernel of level one: the universal scaling limit.
cplx heisenberg_model_kernel(const CVec& u, double theta, const CVec& v,
                             double phi, int m);

// Level-N equivariant function given by its weighted representative.
struct EquivariantFn {
  int level = 0;
  std::function<cplx(const CVec&)> w;
};

// (1/2pi) int_X F1 conj(F2) dV_X, reduced over the fiber to int_M . dV_M.
// Throws on mismatched levels.
cplx inner_product(const EquivariantFn& F1, const EquivariantFn& F2,
                   const Model& model, const QuadRule& rule);

}  // namespace szlab

#endif  // SZLAB_MODELS_HPP
