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

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>

#include "szlab/cache.hpp"
#include "szlab/geometry.hpp"
#include "szlab/kodaira.hpp"
#include "szlab/models.hpp"
#include "szlab/report.hpp"
#include "szlab/scaling.hpp"
#include "szlab/statphase.hpp"
#include "szlab/symbolcalc.hpp"
#include "szlab/transversality.hpp"

namespace szlab {
namespace {

std::unique_ptr<Model> make_model(const std::string& name) {
  if (name == "torus") return std::make_unique<Torus>(cplx(0.0, 1.0));
  if (name == "projline") return std::make_unique<ProjectiveLine>();
  if (name == "projline-pert")
    return std::make_unique<ProjectiveLinePerturbed>(0.05);
  if (name == "bf1") return std::make_unique<BargmannFock>(1);
  if (name == "bf2") return std::make_unique<BargmannFock>(2);
  throw szlab_error("unknown model '" + name +
                    "' (torus, projline, projline-pert, bf1, bf2)");
}

struct Common {
  std::string model = "torus";
  std::string Nlist = "16";
  std::string out = "out";
  std::string cache;
  std::string config_file;
  uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--model", c.model, "model name");
  sub->add_option("--N", c.Nlist, "comma-separated level list");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--cache", c.cache, "cache directory (also SZLAB_CACHE_DIR)");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--config", c.config_file, "key=value configuration file");
}

void apply_config(Common& c) {
  if (!c.config_file.empty()) {
    for (const auto& [k, v] : read_kv_file(c.config_file)) {
      if (k == "model") c.model = v;
      else if (k == "N") c.Nlist = v;
      else if (k == "out") c.out = v;
      else if (k == "cache") c.cache = v;
      else if (k == "seed") c.seed = std::stoull(v);
    }
  }
  if (!c.cache.empty()) set_cache_dir(c.cache);
}

RunConfig base_config(const std::string& sub, const Common& c) {
  RunConfig rc;
  rc.subcommand = sub;
  rc.model = c.model;
  rc.Ns = parse_int_list(c.Nlist);
  rc.seed = c.seed;
  rc.out_dir = c.out;
  rc.cache_dir_used = cache_dir();
  return rc;
}

int emit(Report& rep, const std::string& path,
         std::chrono::steady_clock::time_point t0) {
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_json_file(path, rep.to_json());
  std::cout << (rep.all_pass ? "PASS " : "FAIL ") << path << "\n";
  return rep.all_pass ? 0 : 1;
}

int run_scaling_cmd(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  const auto Ns = parse_int_list(c.Nlist);
  BundlePoint x0;
  x0.z = c.model == "torus" ? cvec(cplx(0.31, 0.17)) : cvec(cplx(0.0, 0.0));
  ScalingReport sr = run_scaling(*model, x0, Ns);

  Report rep;
  rep.config = base_config("scaling", c);
  json checks = json::array();
  checks.push_back(check_entry("residual_decay_bound",
                               sr.residuals.back(), 1.0, sr.decay_bound_pass));
  rep.all_pass = sr.decay_bound_pass;
  json payload;
  payload["model"] = sr.model_id;
  payload["center"] = {sr.center[0].real(), sr.center[0].imag()};
  payload["grid"] = {{"max", sr.grid_max}, {"step", sr.grid_step}};
  payload["N"] = sr.Ns;
  payload["residuals"] = sr.residuals;
  payload["ratios"] = sr.ratios;
  if (sr.fitted_exponent) payload["fitted_exponent"] = *sr.fitted_exponent;
  json bh = json::array();
  for (const cplx& b : sr.bhat) bh.push_back({b.real(), b.imag()});
  payload["bhat"] = bh;
  payload["bhat_fit_residual"] = sr.bhat_residual;
  payload["ratio_band_[0.3,0.85]"] = sr.ratio_band_pass;
  payload["checks"] = checks;
  rep.payload = payload;

  // per-node residual table over the theta = 0 grid
  std::vector<std::vector<double>> rows;
  const HeisenbergChart hc = heisenberg_chart(*model, x0);
  const auto grid = scaling_grid(model->m(), sr.grid_max, sr.grid_step, false);
  for (int N : Ns) {
    SzegoEvaluator ev(*model, N);
    for (const auto& nd : grid) {
      const cplx r = rescaled_kernel(ev, hc, nd.u, nd.v, 0.0, 0.0);
      const cplx h = heisenberg_model_kernel(nd.u, 0.0, nd.v, 0.0, model->m());
      rows.push_back({double(N), nd.u[0].real(), nd.u[0].imag(),
                      nd.v[0].real(), nd.v[0].imag(), std::abs(r - h)});
    }
  }
  write_csv(c.out + "/scaling_" + sr.model_id + ".csv",
            "N,u_re,u_im,v_re,v_im,residual", rows);
  return emit(rep, c.out + "/scaling_" + sr.model_id + ".json", t0);
}

int run_tian_cmd(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  const auto Ns = parse_int_list(c.Nlist);
  const auto grid = tian_grid(*model, 8);
  const TianReport tr = tian_error(*model, Ns, grid);

  Report rep;
  rep.config = base_config("tian", c);
  json payload;
  payload["model"] = tr.model_id;
  payload["N"] = tr.Ns;
  payload["sup_error"] = tr.sup_error;
  if (tr.fitted_order) payload["fitted_order"] = *tr.fitted_order;
  bool pass = true;
  // theorem-true check: error <= C/N with C fit at the first level, with an
  // absolute floor so exact models (errors at FD noise) pass outright
  const double C = tr.sup_error.front() * Ns.front();
  for (size_t i = 0; i < Ns.size(); ++i)
    if (tr.sup_error[i] > 1.05 * C / Ns[i] + 1e-12 && tr.sup_error[i] > 1e-8)
      pass = false;
  payload["checks"] = json::array(
      {check_entry("tian_O(1/N)_bound", tr.sup_error.back(), C / Ns.back(), pass)});
  rep.all_pass = pass;
  rep.payload = payload;
  return emit(rep, c.out + "/tian_" + tr.model_id + ".json", t0);
}

int run_injectivity_cmd(const Common& c, int pairs) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  Report rep;
  rep.config = base_config("kodaira-injectivity", c);
  json payload = json::array();
  bool pass = true;
  for (int N : parse_int_list(c.Nlist)) {
    const InjectivityReport ir = injectivity_scan(*model, N, pairs, c.seed);
    pass = pass && ir.collisions == 0;
    payload.push_back({{"N", N},
                       {"pairs", ir.pairs},
                       {"collisions", ir.collisions},
                       {"min_projective_angle", ir.min_angle},
                       {"collision_floor", ir.collision_floor}});
  }
  rep.payload = json{{"model", model->id()}, {"scans", payload}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/injectivity_" + model->id() + ".json", t0);
}

int run_fn_cmd(const Common& c, const std::string& vspec) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  double vx = 1.0, vy = 0.5;
  if (!vspec.empty()) {
    const auto comma = vspec.find(',');
    vx = std::stod(vspec.substr(0, comma));
    if (comma != std::string::npos) vy = std::stod(vspec.substr(comma + 1));
  }
  const CVec v = cvec(cplx(vx, vy));
  BundlePoint x0;
  x0.z = c.model == "torus" ? cvec(cplx(0.31, 0.17)) : cvec(cplx(0.2, 0.1));
  const HeisenbergChart hc = heisenberg_chart(*model, x0);
  std::vector<double> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back(i / 10.0);

  Report rep;
  rep.config = base_config("fn-profile", c);
  bool pass = true;
  std::vector<std::vector<double>> rows;
  json payload = json::array();
  for (int N : parse_int_list(c.Nlist)) {
    SzegoEvaluator ev(*model, N);
    const auto f = fN_profile(ev, hc, v, ts);
    double maxf = 0.0, gauss_dev = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
      maxf = std::max(maxf, f[i]);
      gauss_dev = std::max(gauss_dev,
                           std::abs(f[i] - std::exp(-norm2(v, 1) * ts[i] * ts[i])));
      rows.push_back({double(N), ts[i], f[i]});
    }
    pass = pass && std::abs(f[0] - 1.0) < 1e-12 && maxf <= 1.0 + 1e-12;
    payload.push_back({{"N", N},
                       {"f0", f[0]},
                       {"max_f", maxf},
                       {"gauss_band_C", gauss_dev * std::sqrt(double(N))}});
  }
  write_csv(c.out + "/fn_" + model->id() + ".csv", "N,t,fN", rows);
  rep.payload = json{{"model", model->id()}, {"profiles", payload}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/fn_" + model->id() + ".json", t0);
}

int run_peak_decay_cmd(const Common& c, double eps, double D) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  const auto Ns = parse_int_list(c.Nlist);
  std::vector<double> radii;
  for (double d = 0.25; d <= 2.0 + 1e-9; d += 0.25) radii.push_back(d);

  Report rep;
  rep.config = base_config("peak-decay", c);
  json payload = json::array();
  bool pass = true;
  double frozenC = -1.0;
  for (int N : Ns) {
    SzegoEvaluator ev(*model, N);
    const auto lattice = build_lattice(*model, N, D);
    double fitC = 0.0;
    for (const CVec& p : lattice) {
      const DecayProfile prof = decay_profile(ev, p, radii, eps);
      fitC = std::max(fitC, prof.fitted_C);
    }
    if (frozenC < 0.0) frozenC = 1.2 * std::max(fitC, 1e-6);
    double margin = 0.0;
    const bool ok = decay_check(ev, lattice, radii, eps, frozenC, &margin);
    pass = pass && ok;
    payload.push_back({{"N", N},
                       {"lattice", int(lattice.size())},
                       {"fitted_C", fitC},
                       {"frozen_C", frozenC},
                       {"bounds_pass", ok},
                       {"worst_margin", margin}});
  }
  rep.payload = json{{"model", model->id()}, {"eps", eps}, {"runs", payload}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/peak_decay_" + model->id() + ".json", t0);
}

int run_transversality_cmd(const Common& c, int iters) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  Report rep;
  rep.config = base_config("transversality", c);
  json payload = json::array();
  bool pass = true;
  for (int N : parse_int_list(c.Nlist)) {
    SzegoEvaluator ev(*model, N, true);
    const auto lattice = build_lattice(*model, N, 2.0);
    SearchParams sp;
    sp.seed = c.seed;
    sp.iterations = iters;
    auto [ls, tr] = donaldson_search(ev, lattice, sp);
    pass = pass && tr.eta > 0.0 &&
           tr.zero_count == N * model->degree();
    payload.push_back({{"N", N},
                       {"eta", tr.eta},
                       {"zero_count", tr.zero_count},
                       {"dbar_sup", tr.dbar_sup},
                       {"iterations", tr.iterations},
                       {"seed", tr.seed},
                       {"trace_len", tr.best_eta_trace.size()}});
  }
  rep.payload = json{{"model", model->id()}, {"runs", payload}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/transversality_" + model->id() + ".json", t0);
}

int run_zeros_cmd(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto model = make_model(c.model);
  Report rep;
  rep.config = base_config("zeros", c);
  json payload = json::array();
  bool pass = true;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int N : parse_int_list(c.Nlist)) {
    SzegoEvaluator ev(*model, N, true);
    Section s;
    s.model = model.get();
    s.N = N;
    s.basis = ev.ensure_basis();
    s.coef.resize(s.basis->dim);
    for (auto& cc : s.coef) cc = cplx(uni(rng), uni(rng));
    const ZeroList zl = zero_locate(s);
    pass = pass && zl.reliable && zl.signed_count == N * model->degree();
    std::vector<std::vector<double>> rows;
    for (const auto& z : zl.zeros)
      rows.push_back({z.z[0].real(), z.z[0].imag(), double(z.index)});
    write_csv(c.out + "/zeros_" + model->id() + "_N" + std::to_string(N) + ".csv",
              "x,y,index", rows);
    payload.push_back({{"N", N},
                       {"signed_count", zl.signed_count},
                       {"expected", N * model->degree()},
                       {"reliable", zl.reliable}});
  }
  rep.payload = json{{"model", model->id()}, {"runs", payload}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/zeros_" + model->id() + ".json", t0);
}

int run_genus_cmd(const Common& c, int m, long long c1L2, long long c1McL,
                  int N, const std::string& variant) {
  ChernData cd;
  cd.m = m;
  cd.cL_m = c1L2;
  cd.cM_cLm1 = c1McL;
  GenusVariant v = GenusVariant::surface;
  if (variant == "codim") v = GenusVariant::codim;
  else if (variant == "twisted") v = GenusVariant::twisted;
  else if (variant != "surface") throw CLI::ValidationError("unknown variant");
  const long long g = genus_adjunction(cd, N, v);
  std::cout << g << "\n";
  (void)c;
  return 0;
}

int run_ideal_cmd(const Common& c, double eps, const std::string& deltas_str) {
  const auto t0 = std::chrono::steady_clock::now();
  Ball4 J;
  J.eps = eps;
  std::vector<double> deltas;
  {
    std::stringstream ss(deltas_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) deltas.push_back(std::stod(tok));
  }
  const CVec x0 = cvec(cplx(0.05, -0.03), cplx(0.08, 0.02));
  Report rep;
  rep.config = base_config("ideal-check", c);
  std::vector<std::vector<double>> rows;
  std::vector<double> r1, r2;
  for (double d : deltas) {
    r1.push_back(ideal_residual(J, false, d, x0, 40, c.seed));
    r2.push_back(ideal_residual(J, true, d, x0, 40, c.seed));
    rows.push_back({d, r1.back(), r2.back()});
  }
  auto slope = [&](const std::vector<double>& r) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = int(deltas.size());
    for (int i = 0; i < n; ++i) {
      const double lx = std::log(deltas[i]), ly = std::log(r[i]);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  const double s1 = slope(r1), s2 = slope(r2);
  const bool pass = s2 >= 1.9 && std::abs(s1 - 1.0) <= 0.2;
  write_csv(c.out + "/ideal_check.csv", "delta,residual_zeta1,residual_zeta2",
            rows);
  rep.payload = json{{"eps", eps},
                     {"slope_zeta1", s1},
                     {"slope_zeta2", s2},
                     {"checks",
                      json::array({check_entry("zeta2_slope", s2, 1.9, s2 >= 1.9),
                                   check_entry("zeta1_slope", s1, 0.2,
                                               std::abs(s1 - 1.0) <= 0.2)})}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/ideal_check.json", t0);
}

int run_statphase_cmd(const Common& c, int J) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.config = base_config("statphase", c);
  const auto Ns = parse_int_list(c.Nlist);
  std::vector<AmplitudeSpec> amps = {amplitude_exp(cplx(-0.3, 0.1)),
                                     amplitude_poly(), amplitude_osc()};
  bool pass = true;
  json payload = json::array();
  std::vector<std::vector<double>> rows;
  for (const auto& amp : amps) {
    std::vector<std::vector<double>> errs(J + 1);
    for (int N : Ns) {
      const StatPhaseResult r = stationary_phase_expansion(amp, N, J);
      for (int j = 0; j <= J; ++j) {
        errs[j].push_back(r.error[j]);
        rows.push_back({double(N), double(j), r.partial[j].real(),
                        r.partial[j].imag(), r.quadrature.real(),
                        r.quadrature.imag(), r.error[j]});
      }
    }
    json orders = json::array();
    for (int j = 0; j <= J; ++j) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const int n = int(Ns.size());
      for (int i = 0; i < n; ++i) {
        const double lx = std::log(double(Ns[i]));
        const double ly = std::log(std::max(errs[j][i], 1e-300));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      }
      const double order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
      orders.push_back(order);
      if (order < j + 0.7) pass = false;
    }
    payload.push_back({{"amplitude", amp.name}, {"orders", orders}});
  }
  write_csv(c.out + "/statphase.csv",
            "N,J,expansion_re,expansion_im,quadrature_re,quadrature_im,error",
            rows);
  rep.payload = json{{"gamma", kStatPhaseGamma}, {"amplitudes", payload}};
  rep.all_pass = pass;
  return emit(rep, c.out + "/statphase.json", t0);
}

int run_selftest(const Common& c) {
  // the [TRIVIAL]-tagged spot checks; fast by construction
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  // Heisenberg model kernel values
  ok = ok && std::abs(heisenberg_model_kernel(CVec{}, 0.0, CVec{}, 0.0, 1) -
                      cplx(1.0 / kPi)) < 1e-15;
  const CVec u = cvec(cplx(0.3, 0.2));
  ok = ok && std::abs(std::abs(heisenberg_model_kernel(u, 0.4, u, 0.4, 1)) -
                      1.0 / kPi) < 1e-15;
  // diagonal positivity + frame normalization
  for (const char* name : {"torus", "projline"}) {
    auto model = make_model(name);
    SzegoEvaluator ev(*model, 4);
    const CVec z = cvec(cplx(0.21, 0.13));
    ok = ok && ev.diag(z) > 0.0;
    const HeisenbergChart hc = heisenberg_chart(*model, BundlePoint{z, 0.0});
    ok = ok && std::abs(hc.log_a(CVec{})) < 1e-12;
  }
  // genus examples
  ChernData cd;
  cd.m = 2; cd.cL_m = 1; cd.cM_cLm1 = 3;
  ok = ok && genus_adjunction(cd, 3, GenusVariant::surface) == 1;
  ChernData c3;
  c3.m = 3; c3.cL_m = 1; c3.cM_cLm1 = 4;
  ok = ok && genus_adjunction(c3, 1, GenusVariant::codim) == 0;
  // zero amplitude
  AmplitudeSpec zero;
  zero.name = "zero";
  zero.eval = [](double, double) { return cplx(0.0); };
  zero.has_jet = true;
  zero.jet = Jet2::constant(0.0);
  ok = ok && std::abs(oscillatory_integral(zero, 32).value) < 1e-14;
  Report rep;
  rep.config = base_config("selftest", c);
  rep.payload = json{{"trivial_suite", ok}};
  rep.all_pass = ok;
  return emit(rep, c.out + "/selftest.json", t0);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"szlab: Szego kernel scaling laboratory"};
  app.require_subcommand(1);

  Common c;
  int pairs = 200, iters = 400, Jorder = 2;
  double eps_decay = 0.2, D = 2.0, eps_ideal = 0.5;
  int gm = 2, gN = 1;
  long long c1L2 = 1, c1McL = 3;
  std::string variant = "surface", vspec = "1.0,0.5",
              deltas = "0.1,0.0316227766016838,0.01,0.0031622776601683794,0.001";

  auto* s1 = app.add_subcommand("scaling", "near-diagonal universality sweep");
  add_common(s1, c);
  auto* s2 = app.add_subcommand("tian", "Kodaira pullback vs omega");
  add_common(s2, c);
  auto* s3 = app.add_subcommand("kodaira-injectivity", "projective collision scan");
  add_common(s3, c);
  s3->add_option("--pairs", pairs, "number of random pairs");
  auto* s4 = app.add_subcommand("fn-profile", "localization profile f_N");
  add_common(s4, c);
  s4->add_option("--v", vspec, "tangent vector 're,im'");
  auto* s5 = app.add_subcommand("peak-decay", "peak section decay bounds");
  add_common(s5, c);
  s5->add_option("--eps", eps_decay, "decay epsilon");
  s5->add_option("--D", D, "lattice density parameter");
  auto* s6 = app.add_subcommand("transversality", "quantitative transversality search");
  add_common(s6, c);
  s6->add_option("--iters", iters, "search iterations");
  auto* s7 = app.add_subcommand("zeros", "zero location of a random section");
  add_common(s7, c);
  auto* s8 = app.add_subcommand("genus", "adjunction-formula genus");
  s8->add_option("--m", gm);
  s8->add_option("--c1L2", c1L2, "c1(L)^m pairing");
  s8->add_option("--c1McL", c1McL, "c1(M).c1(L)^{m-1} pairing");
  s8->add_option("--N", gN);
  s8->add_option("--variant", variant, "surface|codim|twisted");
  auto* s9 = app.add_subcommand("ideal-check", "Lagrangean ideal residual sweep");
  add_common(s9, c);
  s9->add_option("--eps", eps_ideal, "non-integrable J strength");
  s9->add_option("--deltas", deltas, "comma-separated distances");
  auto* s10 = app.add_subcommand("statphase", "stationary phase vs quadrature");
  add_common(s10, c);
  s10->add_option("--J", Jorder, "expansion order");
  auto* s11 = app.add_subcommand("selftest", "run the trivial-value suite");
  add_common(s11, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  apply_config(c);
  std::filesystem::create_directories(c.out);

  try {
    if (s1->parsed()) return run_scaling_cmd(c);
    if (s2->parsed()) return run_tian_cmd(c);
    if (s3->parsed()) return run_injectivity_cmd(c, pairs);
    if (s4->parsed()) return run_fn_cmd(c, vspec);
    if (s5->parsed()) return run_peak_decay_cmd(c, eps_decay, D);
    if (s6->parsed()) return run_transversality_cmd(c, iters);
    if (s7->parsed()) return run_zeros_cmd(c);
    if (s8->parsed()) return run_genus_cmd(c, gm, c1L2, c1McL, gN, variant);
    if (s9->parsed()) return run_ideal_cmd(c, eps_ideal, deltas);
    if (s10->parsed()) return run_statphase_cmd(c, Jorder);
    if (s11->parsed()) return run_selftest(c);
  } catch (const std::exception& e) {
    std::cerr << "szlab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace
}  // namespace szlab

int main(int argc, char** argv) { return szlab::dispatch(argc, argv); }
