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

#include "szlab/models.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "szlab/cache.hpp"

namespace szlab {

namespace {

double lbinom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

// -------------------- Model base --------------------

double Model::conformal_weight(const CVec&) const {
  throw szlab_error("conformal_weight: not a conformal m=1 model");
}

void Model::omega_g(const CVec& z, double omega[4][4], double g[4][4]) const {
  const int n = 2 * m();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) omega[a][b] = g[a][b] = 0.0;
  if (m() == 1) {
    const double W = conformal_weight(z);
    omega[0][1] = W;
    omega[1][0] = -W;
    g[0][0] = g[1][1] = W;
  } else {
    for (int j = 0; j < n / 2; ++j) {
      omega[2 * j][2 * j + 1] = 1.0;
      omega[2 * j + 1][2 * j] = -1.0;
      g[2 * j][2 * j] = g[2 * j + 1][2 * j + 1] = 1.0;
    }
  }
}

QuadRule Model::quadrature(int N, double refine) const {
  (void)refine;
  return quadrature(N);
}

cplx Model::weighted_kernel(int, const CVec&, const CVec&) const {
  throw szlab_error("weighted_kernel: no closed form for this model");
}

// -------------------- Bargmann-Fock --------------------

BargmannFock::BargmannFock(int m, int truncation) : m_(m), trunc_(truncation) {
  if (m < 1 || m > 2) throw szlab_error("BargmannFock: m must be 1 or 2");
}

std::string BargmannFock::id() const {
  return "bf" + std::to_string(m_);
}

double BargmannFock::log_a0(const CVec& z) const { return norm2(z, m_); }

CVec BargmannFock::dz_log_a0(const CVec& z) const {
  CVec d{};
  for (int j = 0; j < m_; ++j) d[j] = std::conj(z[j]);
  return d;
}

void BargmannFock::d2_log_a0(const CVec&, cplx zz[2][2], cplx zzb[2][2]) const {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      zz[a][b] = 0.0;
      zzb[a][b] = (a == b && a < m_) ? 1.0 : 0.0;
    }
}

cplx BargmannFock::log_a0_ext(const CVec& z, const CVec& w) const {
  return dotc(z, w, m_);
}

double BargmannFock::distance(const CVec& a, const CVec& b) const {
  double s = 0.0;
  for (int j = 0; j < m_; ++j) s += std::norm(a[j] - b[j]);
  return std::sqrt(s);
}

QuadRule BargmannFock::quadrature(int N) const {
  const int n = trunc_ + 8;
  std::vector<double> x, w;
  gauss_hermite_bare(n, x, w);
  const double s = std::sqrt(double(N));
  QuadRule rule;
  std::ostringstream os;
  os << "gh" << n << "xN" << N;
  rule.spec = os.str();
  if (m_ == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        rule.pts.push_back(cvec(cplx(x[i] / s, x[j] / s)));
        rule.wts.push_back(w[i] * w[j] / (s * s));
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            rule.pts.push_back(
                cvec(cplx(x[i] / s, x[j] / s), cplx(x[k] / s, x[l] / s)));
            rule.wts.push_back(w[i] * w[j] * w[k] * w[l] / (s * s * s * s));
          }
  }
  return rule;
}

int BargmannFock::dim_sections(int) const {
  return m_ == 1 ? trunc_ + 1 : (trunc_ + 1) * (trunc_ + 2) / 2;
}

namespace {

// truncated monomial basis of the Bargmann-Fock space
class BFBasis : public SectionBasis {
 public:
  BFBasis(int m, int N, int T) : m_(m) {
    level = N;
    for (int a = 0; a <= T; ++a) {
      if (m_ == 1) {
        idx_.push_back({a, 0});
      } else {
        for (int b = 0; b + a <= T; ++b) idx_.push_back({a, b});
      }
    }
    if (m_ == 2) {
      idx_.clear();
      for (int d = 0; d <= T; ++d)
        for (int a = d; a >= 0; --a) idx_.push_back({a, d - a});
    }
    dim = int(idx_.size());
    // ||z^a||^2 = pi^m a! / N^{|a|+m} per factor
    for (auto& ab : idx_) {
      double ln = 0.0;
      ln += std::lgamma(ab[0] + 1.0) - (ab[0] + 1.0) * std::log(double(N)) +
            std::log(kPi);
      if (m_ == 2)
        ln += std::lgamma(ab[1] + 1.0) - (ab[1] + 1.0) * std::log(double(N)) +
              std::log(kPi);
      lognorm_.push_back(0.5 * ln);
    }
  }

  cplx w_value(int j, const CVec& z) const override {
    const auto& ab = idx_[j];
    cplx p = 1.0;
    for (int k = 0; k < ab[0]; ++k) p *= z[0];
    for (int k = 0; k < ab[1]; ++k) p *= z[1];
    const double la = norm2(z, m_);
    return p * std::exp(-0.5 * level * la - lognorm_[j]);
  }

  cplx w_dz(int j, const CVec& z, int dir) const override {
    // d/dz_dir [ z^a e^{-N|z|^2/2} ] = (a_dir z^{a-e_dir} - (N/2) zbar_dir z^a) e^{..}
    const auto& ab = idx_[j];
    cplx other = 1.0;
    for (int d = 0; d < m_; ++d)
      if (d != dir)
        for (int k = 0; k < ab[d]; ++k) other *= z[d];
    const int e = ab[dir];
    cplx zpow = 1.0;  // z_dir^{e-1}
    for (int k = 0; k < e - 1; ++k) zpow *= z[dir];
    const cplx pm = (e >= 1 ? double(e) * zpow : cplx(0.0)) * other;
    const cplx p = (e >= 1 ? zpow * z[dir] : cplx(1.0)) * other;
    const double la = norm2(z, m_);
    const cplx wgt = std::exp(cplx(-0.5 * level * la - lognorm_[j]));
    return (pm - 0.5 * double(level) * std::conj(z[dir]) * p) * wgt;
  }

 private:
  int m_;
  std::vector<std::array<int, 2>> idx_;
  std::vector<double> lognorm_;
};

}  // namespace

std::shared_ptr<SectionBasis> BargmannFock::sections(int N) const {
  return std::make_shared<BFBasis>(m_, N, trunc_);
}

cplx BargmannFock::weighted_kernel(int N, const CVec& z, const CVec& w) const {
  const cplx ex = double(N) * (dotc(z, w, m_) - 0.5 * norm2(z, m_) -
                               0.5 * norm2(w, m_));
  return std::pow(double(N) / kPi, m_) * std::exp(ex);
}

// -------------------- exact projective line --------------------

double ProjectiveLine::log_a0(const CVec& z) const {
  return std::log1p(std::norm(z[0]));
}

CVec ProjectiveLine::dz_log_a0(const CVec& z) const {
  return cvec(std::conj(z[0]) / (1.0 + std::norm(z[0])));
}

void ProjectiveLine::d2_log_a0(const CVec& z, cplx zz[2][2], cplx zzb[2][2]) const {
  const double r2 = std::norm(z[0]);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) zz[a][b] = zzb[a][b] = 0.0;
  zz[0][0] = -std::conj(z[0]) * std::conj(z[0]) / ((1.0 + r2) * (1.0 + r2));
  zzb[0][0] = 1.0 / ((1.0 + r2) * (1.0 + r2));
}

cplx ProjectiveLine::log_a0_ext(const CVec& z, const CVec& w) const {
  return std::log(1.0 + z[0] * std::conj(w[0]));
}

double ProjectiveLine::conformal_weight(const CVec& z) const {
  const double r2 = std::norm(z[0]);
  return 1.0 / ((1.0 + r2) * (1.0 + r2));
}

double ProjectiveLine::distance(const CVec& a, const CVec& b) const {
  // round sphere of radius 1/2
  const double num = std::norm(a[0] - b[0]);
  const double den = (1.0 + std::norm(a[0])) * (1.0 + std::norm(b[0]));
  double c = 1.0 - 2.0 * num / den;
  c = std::min(1.0, std::max(-1.0, c));
  return 0.5 * std::acos(c);
}

QuadRule ProjectiveLine::quadrature(int N) const { return quadrature(N, 1.0); }

QuadRule ProjectiveLine::quadrature(int N, double refine) const {
  // graph coordinate u = |z|^2/(1+|z|^2): dV_FS = (1/2) du dphi
  const int nu = int((N + 40) * refine);
  const int nphi = int((2 * N + 16) * refine);
  std::vector<double> xu, wu;
  gauss_legendre_ab(nu, 0.0, 1.0, xu, wu);
  QuadRule rule;
  std::ostringstream os;
  os << "gl" << nu << "x" << nphi;
  rule.spec = os.str();
  rule.pts.reserve(size_t(nu) * nphi);
  rule.wts.reserve(size_t(nu) * nphi);
  for (int i = 0; i < nu; ++i) {
    const double r = std::sqrt(xu[i] / (1.0 - xu[i]));
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * kPi * j / nphi;
      rule.pts.push_back(cvec(r * std::exp(kI * phi)));
      rule.wts.push_back(0.5 * wu[i] * (2.0 * kPi / nphi));
    }
  }
  return rule;
}

namespace {

// closed-form orthonormal monomial basis on the exact projective line
class FSBasis : public SectionBasis {
 public:
  explicit FSBasis(int N) {
    level = N;
    dim = N + 1;
    for (int j = 0; j <= N; ++j)
      logc_.push_back(0.5 * (std::log((N + 1.0) / kPi) + lbinom(N, j)));
  }

  cplx w_value(int j, const CVec& z) const override {
    if (std::abs(z[0]) == 0.0)
      return j == 0 ? std::exp(cplx(logc_[0])) : cplx(0.0);
    const cplx lz = std::log(z[0]);
    return std::exp(logc_[j] + double(j) * lz -
                    0.5 * level * std::log1p(std::norm(z[0])));
  }

  cplx w_dz(int j, const CVec& z, int) const override {
    const double la = std::log1p(std::norm(z[0]));
    const cplx dla = std::conj(z[0]) / (1.0 + std::norm(z[0]));
    cplx t1 = 0.0;
    if (j >= 1) {
      if (std::abs(z[0]) == 0.0) {
        t1 = (j == 1) ? cplx(1.0) : cplx(0.0);
      } else {
        t1 = double(j) * std::exp(cplx(double(j - 1)) * std::log(z[0]));
      }
    }
    cplx zj = 0.0;
    if (std::abs(z[0]) == 0.0)
      zj = (j == 0) ? 1.0 : 0.0;
    else
      zj = std::exp(cplx(double(j)) * std::log(z[0]));
    return std::exp(cplx(logc_[j] - 0.5 * level * la)) *
           (t1 - 0.5 * double(level) * dla * zj);
  }

 private:
  std::vector<double> logc_;
};

}  // namespace

std::shared_ptr<SectionBasis> ProjectiveLine::sections(int N) const {
  return std::make_shared<FSBasis>(N);
}

cplx ProjectiveLine::weighted_kernel(int N, const CVec& z, const CVec& w) const {
  const cplx ex = double(N) * (std::log(1.0 + z[0] * std::conj(w[0])) -
                               0.5 * std::log1p(std::norm(z[0])) -
                               0.5 * std::log1p(std::norm(w[0])));
  return (N + 1.0) / kPi * std::exp(ex);
}

// -------------------- perturbed projective line --------------------

ProjectiveLinePerturbed::ProjectiveLinePerturbed(double eps) : eps_(eps) {
  if (eps <= 0.0 || eps >= 0.5)
    throw szlab_error("perturbed model: need 0 < eps < 1/2 for positivity");
}

std::string ProjectiveLinePerturbed::id() const {
  std::ostringstream os;
  os << "projline_pert_eps" << eps_;
  return os.str();
}

double ProjectiveLinePerturbed::chi(const CVec& z) const {
  return 2.0 * z[0].real() / (1.0 + std::norm(z[0]));
}

double ProjectiveLinePerturbed::log_a0(const CVec& z) const {
  return std::log1p(std::norm(z[0])) + eps_ * chi(z);
}

CVec ProjectiveLinePerturbed::dz_log_a0(const CVec& z) const {
  const cplx zb = std::conj(z[0]);
  const double d = 1.0 + std::norm(z[0]);
  // d/dz [ (z+zbar)/(1+z zbar) ] = (1 - zbar^2)/ (1+|z|^2)^2... chain:
  const cplx dchi = (1.0 - zb * zb) / (d * d);
  return cvec(zb / d + eps_ * dchi);
}

void ProjectiveLinePerturbed::d2_log_a0(const CVec& z, cplx zz[2][2],
                                        cplx zzb[2][2]) const {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) zz[a][b] = zzb[a][b] = 0.0;
  const cplx zv = z[0], zb = std::conj(z[0]);
  const double d = 1.0 + std::norm(z[0]);
  zz[0][0] = -zb * zb / (d * d) + eps_ * (-2.0 * zb) * (1.0 - zb * zb) / (d * d * d);
  // d/dzbar of (1 - zbar^2)/(1+|z|^2)^2
  const cplx dchib =
      (-2.0 * zb) / (d * d) + (1.0 - zb * zb) * (-2.0 * zv) / (d * d * d);
  zzb[0][0] = 1.0 / (d * d) + eps_ * dchib;
}

cplx ProjectiveLinePerturbed::log_a0_ext(const CVec& z, const CVec& w) const {
  const cplx wb = std::conj(w[0]);
  return std::log(1.0 + z[0] * wb) + eps_ * (z[0] + wb) / (1.0 + z[0] * wb);
}

double ProjectiveLinePerturbed::conformal_weight(const CVec& z) const {
  // omega = (i/2) ddbar log a0; chi is a Laplace eigenfunction:
  // (1/4)Lap_0 chi = -2 W_FS chi
  const double r2 = std::norm(z[0]);
  const double wfs = 1.0 / ((1.0 + r2) * (1.0 + r2));
  return wfs * (1.0 - 2.0 * eps_ * chi(z));
}

double ProjectiveLinePerturbed::distance(const CVec& a, const CVec& b) const {
  // FS distance; adequate for pair-regime classification at small eps
  ProjectiveLine fs;
  return fs.distance(a, b);
}

QuadRule ProjectiveLinePerturbed::quadrature(int N) const {
  return quadrature(N, 1.0);
}

QuadRule ProjectiveLinePerturbed::quadrature(int N, double refine) const {
  const int nu = int((N + 60) * refine);
  const int nphi = int((2 * N + 24) * refine);
  std::vector<double> xu, wu;
  gauss_legendre_ab(nu, 0.0, 1.0, xu, wu);
  QuadRule rule;
  std::ostringstream os;
  os << "gl" << nu << "x" << nphi;
  rule.spec = os.str();
  for (int i = 0; i < nu; ++i) {
    const double r = std::sqrt(xu[i] / (1.0 - xu[i]));
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * kPi * j / nphi;
      const CVec z = cvec(r * std::exp(kI * phi));
      const double ratio =
          conformal_weight(z) * (1.0 + std::norm(z[0])) * (1.0 + std::norm(z[0]));
      rule.pts.push_back(z);
      rule.wts.push_back(0.5 * wu[i] * (2.0 * kPi / nphi) * ratio);
    }
  }
  return rule;
}

namespace {

// weighted monomial vector b_j(z) = z^j a0^{-N/2}, computed through exponents
void weighted_monomials(int N, const CVec& z, double log_a, std::vector<cplx>& out) {
  out.assign(N + 1, cplx(0.0));
  if (std::abs(z[0]) == 0.0) {
    out[0] = std::exp(-0.5 * N * log_a);
    return;
  }
  const double lr = std::log(std::abs(z[0]));
  const double ph = std::arg(z[0]);
  for (int j = 0; j <= N; ++j)
    out[j] = std::exp(cplx(j * lr - 0.5 * N * log_a, j * ph));
}

class PerturbedBasis : public SectionBasis {
 public:
  PerturbedBasis(const ProjectiveLinePerturbed& model, int N) : model_(&model) {
    level = N;
    dim = N + 1;
    const std::string key =
        cache_key(model.id(), N, model.quadrature(N).spec);
    std::vector<double> flat;
    if (cache_load(key, flat) && int(flat.size()) == 2 * (N + 1) * (N + 1) + 1) {
      gram_residual = flat.back();
      Linv_.resize(N + 1, N + 1);
      for (int a = 0, k = 0; a <= N; ++a)
        for (int b = 0; b <= N; ++b, ++k)
          Linv_(a, b) = cplx(flat[2 * k], flat[2 * k + 1]);
      return;
    }
    build(N);
    flat.clear();
    for (int a = 0; a <= N; ++a)
      for (int b = 0; b <= N; ++b) {
        flat.push_back(Linv_(a, b).real());
        flat.push_back(Linv_(a, b).imag());
      }
    flat.push_back(gram_residual);
    cache_store(key, flat);
  }

  cplx w_value(int j, const CVec& z) const override {
    std::vector<cplx> b;
    weighted_monomials(level, z, model_->log_a0(z), b);
    cplx s = 0.0;
    for (int k = 0; k <= j; ++k) s += Linv_(j, k) * b[k];
    return s;
  }

  cplx w_dz(int j, const CVec& z, int) const override {
    const double la = model_->log_a0(z);
    const cplx dla = model_->dz_log_a0(z)[0];
    std::vector<cplx> b;
    weighted_monomials(level, z, la, b);
    // d/dz b_k = (k/z) b_k - (N/2) dla b_k, with the k/z term expanded safely
    std::vector<cplx> db(level + 1, cplx(0.0));
    if (std::abs(z[0]) == 0.0) {
      if (level >= 1) db[1] = std::exp(-0.5 * level * la);
    } else {
      for (int k = 0; k <= level; ++k) db[k] = double(k) / z[0] * b[k];
    }
    cplx s = 0.0;
    for (int k = 0; k <= j; ++k)
      s += Linv_(j, k) * (db[k] - 0.5 * double(level) * dla * b[k]);
    return s;
  }

 private:
  void build(int N) {
    const QuadRule rule = model_->quadrature(N);
    Eigen::MatrixXcd B(rule.pts.size(), N + 1);
    std::vector<cplx> b;
    for (size_t q = 0; q < rule.pts.size(); ++q) {
      weighted_monomials(N, rule.pts[q], model_->log_a0(rule.pts[q]), b);
      const double sw = std::sqrt(rule.wts[q]);
      for (int j = 0; j <= N; ++j) B(q, j) = sw * b[j];
    }
    Eigen::MatrixXcd G = B.adjoint() * B;
    Eigen::LLT<Eigen::MatrixXcd> llt(G);
    if (llt.info() != Eigen::Success)
      throw szlab_error("perturbed basis: Gram matrix not positive definite");
    Eigen::MatrixXcd L = llt.matrixL();
    Linv_ = L.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXcd::Identity(N + 1, N + 1));
    // residual against a refined rule; detects quadrature underresolution
    const QuadRule fine = model_->quadrature(N, 1.5);
    Eigen::MatrixXcd Bf(fine.pts.size(), N + 1);
    for (size_t q = 0; q < fine.pts.size(); ++q) {
      weighted_monomials(N, fine.pts[q], model_->log_a0(fine.pts[q]), b);
      const double sw = std::sqrt(fine.wts[q]);
      for (int j = 0; j <= N; ++j) Bf(q, j) = sw * b[j];
    }
    Eigen::MatrixXcd Gf = Bf.adjoint() * Bf;
    Eigen::MatrixXcd R = Linv_ * Gf * Linv_.adjoint() -
                         Eigen::MatrixXcd::Identity(N + 1, N + 1);
    gram_residual = R.cwiseAbs().maxCoeff();
    if (gram_residual > 1e-8)
      throw szlab_error("perturbed basis: Gram residual " +
                        std::to_string(gram_residual) + " above 1e-8");
  }

  const ProjectiveLinePerturbed* model_;
  Eigen::MatrixXcd Linv_;
};

}  // namespace

std::shared_ptr<SectionBasis> ProjectiveLinePerturbed::sections(int N) const {
  return std::make_shared<PerturbedBasis>(*this, N);
}

// -------------------- torus --------------------

Torus::Torus(cplx tau) : tau_(tau) {
  if (tau.imag() <= 0.0) throw szlab_error("torus: Im tau must be positive");
}

std::string Torus::id() const {
  std::ostringstream os;
  os << "torus_tau" << tau_.real() << "_" << tau_.imag();
  return os.str();
}

double Torus::log_a0(const CVec& z) const {
  const double y = z[0].imag();
  return 2.0 * kPi * y * y / tau_.imag();
}

CVec Torus::dz_log_a0(const CVec& z) const {
  // d/dz [2 pi y^2/tau2] = -2 i pi y / tau2
  return cvec(-2.0 * kI * kPi * z[0].imag() / tau_.imag());
}

void Torus::d2_log_a0(const CVec&, cplx zz[2][2], cplx zzb[2][2]) const {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) zz[a][b] = zzb[a][b] = 0.0;
  zz[0][0] = -kPi / tau_.imag();
  zzb[0][0] = kPi / tau_.imag();
}

cplx Torus::log_a0_ext(const CVec& z, const CVec& w) const {
  // y^2 = -(z - zbar)^2/4 polarized: -(z - conj(w))^2/4
  const cplx d = z[0] - std::conj(w[0]);
  return -kPi * d * d / (2.0 * tau_.imag());
}

double Torus::conformal_weight(const CVec&) const { return kPi / tau_.imag(); }

double Torus::injectivity_scale() const {
  const double s = std::sqrt(kPi / tau_.imag());
  const double shortest = std::min(1.0, std::abs(tau_));
  return 0.5 * s * shortest;
}

double Torus::distance(const CVec& a, const CVec& b) const {
  const double s = std::sqrt(kPi / tau_.imag());
  double best = 1e300;
  for (int mm = -2; mm <= 2; ++mm)
    for (int nn = -2; nn <= 2; ++nn)
      best = std::min(best,
                      std::abs(a[0] - b[0] + double(mm) + double(nn) * tau_));
  return s * best;
}

QuadRule Torus::quadrature(int N) const { return quadrature(N, 1.0); }

QuadRule Torus::quadrature(int N, double refine) const {
  // uniform grid on the (s,t) parametrization; trapezoid is spectral here
  int n = std::max(64, 4 * int(std::ceil(std::sqrt(double(N)))) * 4);
  n = int(n * refine);
  QuadRule rule;
  std::ostringstream os;
  os << "uni" << n << "x" << n;
  rule.spec = os.str();
  const double w = kPi / double(n) / double(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = (i + 0.5) / n, t = (j + 0.5) / n;
      rule.pts.push_back(cvec(s + t * tau_));
      rule.wts.push_back(w);
    }
  return rule;
}

namespace {

// Level-N theta basis through its weighted lifts.  Every series term carries
// the full exponent -pi tau2 N (nu + y/tau2)^2 + i(...), so terms never exceed
// one in modulus and the series truncates at Gaussian speed.
class ThetaBasis : public SectionBasis {
 public:
  ThetaBasis(cplx tau, int N) : tau_(tau) {
    level = N;
    dim = N;
    lognorm_ = 0.5 * std::log(kPi / std::sqrt(2.0 * N * tau.imag()));
    // window so that dropped terms are below 1e-16 of the peak
    const double t2 = tau.imag();
    win_ = 1 + int(std::ceil(std::sqrt(41.5 / (kPi * N * t2))));
  }

  cplx w_value(int j, const CVec& z) const override {
    return sum(j, z, false);
  }

  cplx w_dz(int j, const CVec& z, int) const override { return sum(j, z, true); }

 private:
  cplx sum(int j, const CVec& z, bool deriv) const {
    const double t2 = tau_.imag();
    const double y = z[0].imag();
    const int N = level;
    const double nu_peak = -y / t2;
    const int n0 = int(std::lround(nu_peak - double(j) / N));
    cplx s = 0.0;
    for (int n = n0 - win_; n <= n0 + win_; ++n) {
      const double nu = n + double(j) / N;
      const cplx ex = kI * kPi * double(N) * tau_ * nu * nu +
                      2.0 * kI * kPi * double(N) * nu * z[0] -
                      kPi * N * y * y / t2;
      cplx term = std::exp(ex);
      if (deriv) term *= kI * kPi * double(N) * (2.0 * nu + y / t2);
      s += term;
    }
    return s * std::exp(-lognorm_);
  }

  cplx tau_;
  double lognorm_;
  int win_;
};

}  // namespace

std::shared_ptr<SectionBasis> Torus::sections(int N) const {
  return std::make_shared<ThetaBasis>(tau_, N);
}

// -------------------- evaluator & helpers --------------------

SzegoEvaluator::SzegoEvaluator(const Model& model, int N, bool force_basis)
    : model_(&model), N_(N), closed_(model.closed_kernel() && !force_basis) {
  if (N < 1) throw szlab_error("SzegoEvaluator: N >= 1 required");
}

std::shared_ptr<SectionBasis> SzegoEvaluator::ensure_basis() const {
  if (!basis_) basis_ = model_->sections(N_);
  return basis_;
}

cplx SzegoEvaluator::weighted(const CVec& z, const CVec& w) const {
  if (closed_) return model_->weighted_kernel(N_, z, w);
  auto b = ensure_basis();
  cplx s = 0.0;
  for (int j = 0; j < b->dim; ++j)
    s += b->w_value(j, z) * std::conj(b->w_value(j, w));
  return s;
}

cplx SzegoEvaluator::eval(const BundlePoint& x, const BundlePoint& y) const {
  return std::exp(kI * double(N_) * (x.theta - y.theta)) * weighted(x.z, y.z);
}

double SzegoEvaluator::diag(const CVec& z) const {
  return weighted(z, z).real();
}

cplx heisenberg_model_kernel(const CVec& u, double theta, const CVec& v,
                             double phi, int m) {
  const cplx psi2 = dotc(u, v, m) - 0.5 * (norm2(u, m) + norm2(v, m));
  return std::pow(kPi, -m) * std::exp(kI * (theta - phi) + psi2);
}

cplx inner_product(const EquivariantFn& F1, const EquivariantFn& F2,
                   const Model&, const QuadRule& rule) {
  if (F1.level != F2.level)
    throw szlab_error("inner_product: mismatched equivariance levels");
  cplx s = 0.0;
  for (size_t q = 0; q < rule.pts.size(); ++q)
    s += rule.wts[q] * F1.w(rule.pts[q]) * std::conj(F2.w(rule.pts[q]));
  return s;
}

}  // namespace szlab
