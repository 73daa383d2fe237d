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

#ifndef SZLAB_TRANSVERSALITY_HPP
#define SZLAB_TRANSVERSALITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "szlab/geometry.hpp"
#include "szlab/models.hpp"

namespace szlab {

// normalized coherent state sigma_p = Pi_N(., p)/Pi_N(p,p)
struct PeakSection {
  const SzegoEvaluator* ev = nullptr;
  CVec p{};
  double diag = 0.0;  // Pi_N(p,p)

  cplx value(const CVec& q) const { return ev->weighted(q, p) / diag; }
};

PeakSection peak_section(const SzegoEvaluator& ev, const CVec& p);

// level-N section as a coefficient vector over the model basis
struct Section {
  const Model* model = nullptr;
  int N = 0;
  std::shared_ptr<SectionBasis> basis;
  std::vector<cplx> coef;

  cplx w(const CVec& z) const;
  cplx w_dz(const CVec& z) const;
  // horizontal (1,0) derivative of the lift: w_dz - (N/2) dlog_a0 w
  cplx w_horiz(const CVec& z) const;
};

// s_N = sum_i w_i sigma_{p_i}; |w_i| < 1 enforced
struct LatticeSection {
  std::vector<CVec> lattice;
  std::vector<cplx> weights;
  Section section;
};

LatticeSection lattice_section(const SzegoEvaluator& ev,
                               const std::vector<CVec>& lattice,
                               const std::vector<cplx>& weights);

// lattice with covering balls B(p_i, D/sqrt(N))
std::vector<CVec> build_lattice(const Model& model, int N, double D);

// max number of covering balls through any of `nsample` random points
int lattice_overlap_bound(const Model& model, const std::vector<CVec>& lattice,
                          int N, double D, int nsample, uint64_t seed);

// ---- peak decay ----

struct DecayRow {
  double dN;          // scaled distance
  double sigma;       // |sigma_p(q)|
  double needed_C_lo; // C making bound (i) tight
  double needed_C_hi; // C making bound (ii) tight
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  double fitted_C = 0.0;        // bounds (i)-(ii)
  double fitted_C_deriv = 0.0;  // bounds (iii)-(iv) scaled-derivative constant
  double dbar_sup = 0.0;
  double farfield_sup_13 = 0.0;   // sup |sigma| for d_N >= N^{1/3}
  double farfield_sup_16 = 0.0;   // informational: d_N >= N^{1/6}
};

// radii are scaled distances d_N <= N^{1/6}; throws beyond the regime
DecayProfile decay_profile(const SzegoEvaluator& ev, const CVec& p,
                           const std::vector<double>& radii, double eps);

// check bounds (i)-(ii) at every lattice center with one frozen C
bool decay_check(const SzegoEvaluator& ev, const std::vector<CVec>& lattice,
                 const std::vector<double>& radii, double eps, double C,
                 double* worst_margin = nullptr);

// Donaldson G-function sum over the lattice at q
double gsum(const SzegoEvaluator& ev, const std::vector<CVec>& lattice,
            const CVec& q);

// ---- zeros and eta ----

struct Zero {
  CVec z{};
  int index = 0;
};

struct ZeroList {
  std::vector<Zero> zeros;
  int signed_count = 0;
  bool reliable = true;  // false when a degenerate cell resisted refinement
};

// all zeros via winding-number cell scan + Newton polish (m = 1 models)
ZeroList zero_locate(const Section& s, int grid_density = 0);

// eta = min over zeros of |partial s|/sqrt(N), derivative through
// horizontal lifts with the invariant metric normalization.
struct EtaResult {
  double eta = 0.0;
  bool defined = false;  // false when no zeros were found
  ZeroList zeros;
};
EtaResult eta_transversality(const Section& s, int grid_density = 0);

struct TransversalityReport {
  double eta = 0.0;
  double dbar_sup = 0.0;
  int zero_count = 0;
  std::vector<double> best_eta_trace;
  uint64_t seed = 0;
  int iterations = 0;
};

struct SearchParams {
  uint64_t seed = 1;
  int iterations = 400;
  double step = 0.35;
};

// randomized greedy coordinate search with annealing restarts over |w_i| < 1
std::pair<LatticeSection, TransversalityReport> donaldson_search(
    const SzegoEvaluator& ev, const std::vector<CVec>& lattice,
    const SearchParams& params);

// ---- genus arithmetic ----

enum class GenusVariant { surface, codim, twisted };

struct ChernData {
  int m = 2;
  long long cL_m = 0;     // c1(L)^m [M]
  long long cM_cLm1 = 0;  // c1(M) c1(L)^{m-1} [M]
  // twisted case (rank m-1 bundle E), m = 2 pairings:
  long long cE_cL = 0;  // c1(E) c1(L) [M]
  long long cE_cE = 0;  // c1(E)^2 [M]
  long long cE_cM = 0;  // c1(E) c1(M) [M]
};

// exact integer genus by the stated closed formulas; throws on non-integer
long long genus_adjunction(const ChernData& c, int N, GenusVariant variant);

// independent oracle: expands the twisted Chern product term by term
long long genus_twisted_expanded(const ChernData& c, int N);

}  // namespace szlab

#endif  // SZLAB_TRANSVERSALITY_HPP
