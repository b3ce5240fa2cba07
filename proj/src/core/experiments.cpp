#include "core/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "core/averaging.hpp"
#include "core/csv.hpp"
#include "core/kinetic.hpp"
#include "core/noise.hpp"
#include "core/rng.hpp"
#include "core/solver_mu.hpp"
#include "core/spectral.hpp"
#include "core/trace.hpp"

namespace dph {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct ExpResult {
  std::vector<SummaryRow> rows;
  bool pass = true;
};

// Smallest j >= 3 with T / 2^j inside the stability budget. Dyadic steps keep
// snapshot times exact across grids and make coarse/fine noise grids nest.
int dyadic_exponent(const ModelSpec& m, SchemeParams p) {
  p.dt = 0.0;
  const double s = stability_sum(m, p);
  const double dt_auto = p.cfl_fraction * 0.9 / s;
  int j = 3;
  while (j < 26 && p.T / double(1 << j) > dt_auto * (1.0 + 1e-12)) ++j;
  if (j == 26) fail_numeric("stability budget forces more than 2^26 steps");
  return j;
}

double rms_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / double(v.size()));
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = c == ',' ? ';' : ' ';
  return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t k = 0; k + 1 < v.size(); ++k)
    if (!(v[k + 1] < v[k])) return false;
  return true;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) fail_numeric("bisection bracket does not change sign");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// C^3 entropy step: Z ramps 0 -> 1 across [c - r, c + r], Z' is the quartic
// bump, so eta' = Z is a smoothed Kruzhkov entropy derivative.
SeparableTest monotone_entropy_test(double c, double r, double horizon) {
  SeparableTest t = make_separable_test(1.0, 1.0, horizon, c, r);
  const double mass = 256.0 / 315.0;
  auto prefix = [](double s) {
    s = std::clamp(s, -1.0, 1.0);
    const double s2 = s * s;
    const double poly =
        s * (1.0 + s2 * (-4.0 / 3.0 + s2 * (6.0 / 5.0 + s2 * (-4.0 / 7.0 + s2 / 9.0))));
    return poly + 128.0 / 315.0;
  };
  t.Z = [c, r, prefix, mass](double u) { return prefix((u - c) / r) / mass; };
  t.Zp = [c, r, mass](double u) { return bump_c4((u - c) / r) / (r * mass); };
  t.z_lo = c - r;
  t.z_hi = c + r;
  return t;
}

int frame_at_time(const std::vector<double>& times, double t) {
  for (size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-9) return int(k);
  fail_numeric("no stored frame at the requested time");
}

std::vector<double> eps_list_or(const RunConfig& cfg, const std::string& key,
                                std::vector<double> fallback) {
  if (cfg.raw.has(key)) return cfg.raw.get_list(key);
  return fallback;
}

std::vector<uint64_t> seeds_for(const RunConfig& cfg, int fallback_paths) {
  RunConfig tmp = cfg;
  tmp.paths = cfg.paths > 0 ? cfg.paths : fallback_paths;
  return tmp.seed_list();
}

// ---- experiment pipelines --------------------------------------------------

ExpResult exp_hypotheses(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const HypothesisReport rep = validate_hypotheses(m, int(cfg.num("hypotheses.samples", 64)));
  ExpResult r;
  r.pass = rep.all_pass();
  for (const auto& e : rep.entries) {
    SummaryRow row;
    row.put("kind", std::string("hypothesis"));
    row.put("name", csv_safe(e.name));
    row.put("pass", e.pass ? 1.0 : 0.0);
    row.put("detail", csv_safe(e.detail));
    r.rows.push_back(row);
  }
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("name", cfg.model);
  s.put("pass", r.pass ? 1.0 : 0.0);
  r.rows.push_back(s);
  return r;
}

ExpResult exp_spectrum(const RunConfig& cfg) {
  ExpResult r;
  auto det = [](double q) { return spectral::clamped_det_scaled(q, 1.0, 0.0, 1.0); };
  const double k1 = bisect_root(det, 4.0, 5.0);
  const double k2 = bisect_root(det, 7.0, 8.0);

  const spectral::Basis1D cb = spectral::make_clamped(1.0, 0.0, 1.0, 2);
  double resid = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i <= 400; ++i) {
      const double x = i / 400.0;
      resid = std::max(resid, std::abs(cb.d4(k, x) - cb.lambda[k] * cb.value(k, x)));
    }

  const auto op = spectral::make_tensor_op(spectral::make_neumann(cfg.eps, 1.0, 12),
                                           spectral::make_clamped(cfg.mu, cfg.eps, 1.0, 12));
  double worst_margin = 1e300;
  for (double s : {0.25, 0.5, 1.0})
    for (int i = 0; i < 10; ++i) {
      const double t = std::pow(10.0, -4.0 + 4.0 * i / 9.0);
      const auto sm = spectral::smoothing_check(op, s, t);
      worst_margin = std::min(worst_margin, sm.bound * (1.0 + 1e-12) - sm.sup);
      SummaryRow row;
      row.put("kind", std::string("smoothing"));
      row.put("s", s);
      row.put("t", t);
      row.put("sup", sm.sup);
      row.put("bound", sm.bound);
      r.rows.push_back(row);
    }

  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("k1", k1);
  s.put("k2", k2);
  s.put("ode_residual", resid);
  s.put("smoothing_margin", worst_margin);
  r.rows.push_back(s);
  r.pass = resid <= 1e-6 && worst_margin >= 0.0 && std::abs(det(k1)) < 1e-9 &&
           std::abs(det(k2)) < 1e-9;
  return r;
}

ExpResult exp_linear_oracle(const RunConfig& cfg) {
  ExpResult r;
  const ModelSpec m = make_model("constant-diffusion");
  const double b = m.b22(0.0);

  const double feps = cfg.num("oracle.eps", 0.02);
  const int n = int(cfg.num("oracle.n", 128));
  SchemeParams p;
  p.n1 = n;
  p.n2 = n;
  p.T = cfg.T;
  p.eps = feps;
  const int j = dyadic_exponent(m, p);
  p.dt = cfg.T / double(1 << j);
  p.store_stride = std::max(1, (1 << j) / 8);
  auto u0 = [](double x1, double x2) { return std::cos(kPi * x1) * std::sin(kPi * x2); };
  const auto res = run_second_approx(m, p, BoundaryData::constant(0.0), u0, nullptr);
  const double rate = kPi * kPi * (2.0 * feps + b);
  const Grid2D& g = res.path.grid;
  const Mat& uf = res.path.final_frame();
  double l2 = 0.0;
  for (int i = 0; i < g.n1; ++i)
    for (int jj = 0; jj < g.n2; ++jj) {
      const double d = uf(i, jj) - std::exp(-rate * cfg.T) * u0(g.x1(i), g.x2(jj));
      l2 += d * d;
    }
  l2 = std::sqrt(l2 * g.vol());

  const double heps = cfg.num("heat.eps", 0.02);
  const double hmu = cfg.num("heat.mu", 0.01);
  MuParams q;
  q.modes1 = int(cfg.num("heat.modes1", 2));
  q.modes2 = int(cfg.num("heat.modes2", 24));
  q.eps = heps;
  q.mu = hmu;
  q.T = cfg.T;
  q.dt = cfg.num("heat.dt", 1e-6);
  const int steps = int(std::llround(q.T / q.dt));
  q.store_stride = steps;
  const spectral::Basis1D probe = spectral::make_clamped(hmu, heps + b, 1.0, 8);
  const double lam1 = probe.lambda[0];
  auto pu0 = [&probe](double, double x2) { return probe.value(0, x2); };
  const MuRun run = run_first_approx(m, q, BoundaryData::constant(0.0), pu0, nullptr);
  const int last = run.frames() - 1;
  const Mat ug = run.state_quadgrid(last);
  Mat ex(ug.rows(), ug.cols());
  for (int i = 0; i < ex.rows(); ++i)
    for (int k = 0; k < ex.cols(); ++k)
      ex(i, k) = std::exp(-lam1 * cfg.T) * probe.value(0, run.op->q2.nodes[k]);
  const Mat d = ug - ex;
  const double hl2 = std::sqrt(std::max(0.0, run.op->inner_grid(d, d)));

  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("fv_l2_error", l2);
  s.put("fv_decay_rate", rate);
  s.put("heat_l2_error", hl2);
  s.put("heat_lambda1", lam1);
  s.put("heat_steps", double(steps));
  r.rows.push_back(s);
  r.pass = l2 <= 1e-4 && hl2 <= 1e-6;
  return r;
}

ExpResult exp_maxprinciple(const RunConfig& cfg) {
  const OvershootStudy st = overshoot_study(cfg);
  ExpResult r;
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("overshoot_coarse", st.coarse);
  s.put("overshoot_fine", st.fine);
  s.put("order", st.order);
  s.put("vacuous", st.vacuous ? 1.0 : 0.0);
  s.put("paths", double(st.paths));
  r.rows.push_back(s);
  r.pass = st.coarse <= 1e-3 && (st.vacuous || st.order >= 1.0);
  return r;
}

ExpResult exp_comparison(const RunConfig& cfg) {
  const int paths = cfg.paths > 0 ? cfg.paths : 100;
  const PairedStudy st = paired_ensemble_study(cfg, paths, true);
  ExpResult r;
  bool curve_ok = true;
  for (size_t k = 0; k < st.times.size(); ++k) {
    const bool ok = st.mean[k] <= st.initial + st.half_ci[k] + 1e-3;
    curve_ok = curve_ok && ok;
    SummaryRow row;
    row.put("kind", std::string("curve"));
    row.put("t", st.times[k]);
    row.put("mean", st.mean[k]);
    row.put("half_ci", st.half_ci[k]);
    r.rows.push_back(row);
  }
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("sup_violation", st.sup_violation);
  s.put("initial", st.initial);
  s.put("paths", double(st.paths));
  r.rows.push_back(s);
  r.pass = st.sup_violation <= 1e-3 && curve_ok;
  return r;
}

ExpResult exp_contraction(const RunConfig& cfg) {
  const int paths = cfg.paths > 0 ? cfg.paths : 200;
  const PairedStudy st = paired_ensemble_study(cfg, paths, false);
  ExpResult r;
  bool curve_ok = true;
  for (size_t k = 0; k < st.times.size(); ++k) {
    const bool ok = st.mean[k] <= 1.02 * st.initial + st.half_ci[k];
    curve_ok = curve_ok && ok;
    SummaryRow row;
    row.put("kind", std::string("curve"));
    row.put("t", st.times[k]);
    row.put("mean", st.mean[k]);
    row.put("half_ci", st.half_ci[k]);
    r.rows.push_back(row);
  }
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("initial", st.initial);
  s.put("paths", double(st.paths));
  r.rows.push_back(s);
  r.pass = curve_ok;
  return r;
}

ExpResult exp_picard(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const auto seeds = seeds_for(cfg, 3);
  ExpResult r;
  r.pass = true;
  for (uint64_t seed : seeds) {
    MuParams q;
    q.modes1 = q.modes2 = int(cfg.num("picard.modes", 12));
    q.eps = cfg.eps;
    q.mu = cfg.mu;
    q.T = cfg.T;
    q.dt = cfg.num("picard.dt", 1e-3);
    q.store_stride = 1;
    q.explicit_mode = false;
    q.calibrate_rho = true;
    q.window = cfg.num("picard.window", 0.05);
    q.picard_tol = 1e-10;
    const int steps = int(std::llround(q.T / q.dt));
    const NoisePath noise = NoisePath::generate(seed, m.K, cfg.T, steps);
    const MuRun run = run_first_approx(m, q, BoundaryData::constant(boundary_level()),
                                       initial_upper, m.K > 0 ? &noise : nullptr);
    const double resid = recursion_residual(run);
    SummaryRow row;
    row.put("kind", std::string("path"));
    row.put("seed", double(seed));
    row.put("contraction_factor", run.diag.contraction_factor);
    row.put("cstar", run.diag.cstar);
    row.put("rho", run.diag.rho);
    row.put("final_residual", run.diag.final_residual);
    row.put("recursion_residual", resid);
    row.put("iterations", double(run.diag.max_iterations));
    row.put("converged", run.diag.converged ? 1.0 : 0.0);
    r.rows.push_back(row);
    r.pass = r.pass && run.diag.converged && run.diag.contraction_factor < 1.0 &&
             run.diag.final_residual < 1e-8 && resid < 1e-8;
  }
  return r;
}

ExpResult exp_energy(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const uint64_t seed = cfg.seed_list()[0];
  const int fine_steps = int(cfg.num("energy.fine_steps", 500));
  const NoisePath noise = NoisePath::generate(seed, m.K, cfg.T, fine_steps);
  const BoundaryData bd = BoundaryData::constant(boundary_level());
  auto solve = [&](int steps, const std::function<double(double, double)>& u0) {
    MuParams q;
    q.modes1 = q.modes2 = int(cfg.num("energy.modes", 12));
    q.eps = cfg.eps;
    q.mu = cfg.mu;
    q.T = cfg.T;
    q.dt = cfg.T / double(steps);
    q.store_stride = 1;
    return run_first_approx(m, q, bd, u0, m.K > 0 ? &noise : nullptr);
  };
  const MuRun ac = solve(fine_steps / 2, initial_upper);
  const MuRun bc = solve(fine_steps / 2, initial_lower);
  const MuRun af = solve(fine_steps, initial_upper);
  const MuRun bf = solve(fine_steps, initial_lower);
  const EnergyReport ec = relative_energy_report(ac, bc);
  const EnergyReport ef = relative_energy_report(af, bf);
  const double dc = std::abs(ec.defect), df = std::abs(ef.defect);
  const double ratio = dc / std::max(df, 1e-300);
  const double inflation = std::abs(ec.defect_without_correction) / std::max(dc, 1e-300);
  ExpResult r;
  auto dump = [&](const std::string& tag, const EnergyReport& e, double dt) {
    SummaryRow row;
    row.put("kind", tag);
    row.put("dt", dt);
    row.put("initial", e.initial);
    row.put("final_half", e.final_half);
    row.put("dissipation", e.dissipation);
    row.put("diffusion_work", e.diffusion_work);
    row.put("flux_work", e.flux_work);
    row.put("martingale", e.martingale);
    row.put("correction", e.correction);
    row.put("defect", e.defect);
    row.put("defect_without_correction", e.defect_without_correction);
    r.rows.push_back(row);
  };
  dump("coarse", ec, cfg.T / double(fine_steps / 2));
  dump("fine", ef, cfg.T / double(fine_steps));
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("ratio", ratio);
  s.put("inflation", inflation);
  s.put("seed", double(seed));
  r.rows.push_back(s);
  r.pass = ratio >= 1.5 && ratio <= 3.0 && inflation >= 10.0;
  return r;
}

ExpResult exp_kinetic(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const auto evs = eps_list_or(cfg, "kinetic.eps", {0.1, 0.05, 0.025});
  const auto seeds = seeds_for(cfg, 8);
  // the mass balance needs the small-eps gradients resolved
  const int kn1 = cfg.raw.has("grid.n1") ? cfg.n1 : 48;
  const int kn2 = cfg.raw.has("grid.n2") ? cfg.n2 : 48;
  ExpResult r;
  double min_entry = 1e300;
  double worst_gap_ratio = 1e300;
  std::vector<double> masses;
  for (double ev : evs) {
    double mass_acc = 0.0;
    for (uint64_t seed : seeds) {
      const Grid2D g{kn1, kn2, 1.0, 1.0};
      MeasureAccumulator acc(m, ev, g, cfg.T, int(cfg.num("kinetic.bins", 64)),
                             int(cfg.num("kinetic.slabs", 16)));
      standard_fv_run(m, kn1, kn2, cfg.T, ev, seed, true, initial_upper, {acc.observer()});
      const KineticMeasure& km = acc.result();
      min_entry = std::min(min_entry, km.min_entry());
      const double bin_scale =
          std::max(km.total_n1(), 1e-300) / double(km.bins * km.slabs);
      worst_gap_ratio = std::min(worst_gap_ratio, km.min_gap() / bin_scale);
      mass_acc += km.total_m();
    }
    masses.push_back(mass_acc / double(seeds.size()));
    SummaryRow row;
    row.put("kind", std::string("level"));
    row.put("eps", ev);
    row.put("mean_mass", masses.back());
    r.rows.push_back(row);
  }
  const double lo = *std::min_element(masses.begin(), masses.end());
  const double hi = *std::max_element(masses.begin(), masses.end());
  const double variation = (hi - lo) / std::max(lo, 1e-300);
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("min_entry", min_entry);
  s.put("worst_gap_over_bin", worst_gap_ratio);
  s.put("mass_variation", variation);
  s.put("paths", double(seeds.size()));
  r.rows.push_back(s);
  r.pass = min_entry >= 0.0 && worst_gap_ratio >= -1.0 && variation < 0.5;
  return r;
}

ExpResult exp_residuals(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const auto seeds = seeds_for(cfg, 3);
  std::vector<SeparableTest> tests;
  for (double c : {0.2, 0.35, 0.5, 0.65, 0.8})
    tests.push_back(make_separable_test(1.0, 1.0, cfg.T, c, 0.15));
  tests.push_back(make_separable_test(1.0, 1.0, cfg.T, 0.5, 0.3));
  std::vector<SeparableTest> entropy_tests;
  for (double c : {0.35, 0.5, 0.65}) entropy_tests.push_back(monotone_entropy_test(c, 0.3, cfg.T));

  ExpResult r;
  bool slack_ok = true;
  std::vector<double> coarse_rms, fine_rms;
  for (uint64_t seed : seeds) {
    SchemeParams pc;
    pc.n1 = cfg.n1;
    pc.n2 = cfg.n2;
    pc.T = cfg.T;
    pc.eps = cfg.eps;
    SchemeParams pf = pc;
    pf.n1 = 2 * cfg.n1;
    pf.n2 = 2 * cfg.n2;
    const int jc = dyadic_exponent(m, pc);
    const int jf = dyadic_exponent(m, pf);
    const NoisePath noise = NoisePath::generate(seed, m.K, cfg.T, 1 << jf);
    const NoisePath* np = m.K > 0 ? &noise : nullptr;
    const BoundaryData bd = BoundaryData::constant(boundary_level());

    pc.dt = cfg.T / double(1 << jc);
    pc.store_stride = std::max(1, (1 << jc) / 8);
    const Grid2D gc{pc.n1, pc.n2, 1.0, 1.0};
    KineticAssembler full_c(m, cfg.eps, gc, cfg.T, tests, true);
    KineticAssembler slack_c(m, cfg.eps, gc, cfg.T, entropy_tests, false);
    run_second_approx(m, pc, bd, initial_upper, np, {full_c.observer(), slack_c.observer()});

    pf.dt = cfg.T / double(1 << jf);
    pf.store_stride = std::max(1, (1 << jf) / 8);
    const Grid2D gf{pf.n1, pf.n2, 1.0, 1.0};
    KineticAssembler full_f(m, cfg.eps, gf, cfg.T, tests, true);
    run_second_approx(m, pf, bd, initial_upper, np, {full_f.observer()});

    std::vector<double> tc = full_c.totals(), tf = full_f.totals();
    const double dc = rms_of(tc), df = rms_of(tf);
    coarse_rms.push_back(dc);
    fine_rms.push_back(df);
    double min_slack = 1e300;
    for (double sv : slack_c.totals()) min_slack = std::min(min_slack, sv);
    slack_ok = slack_ok && min_slack >= -10.0 * dc;
    SummaryRow row;
    row.put("kind", std::string("path"));
    row.put("seed", double(seed));
    row.put("defect_coarse", dc);
    row.put("defect_fine", df);
    row.put("order", std::log2(dc / std::max(df, 1e-300)));
    row.put("min_entropy_slack", min_slack);
    r.rows.push_back(row);
  }
  const double dc = rms_of(coarse_rms), df = rms_of(fine_rms);
  const double order = std::log2(dc / std::max(df, 1e-300));
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("defect_coarse", dc);
  s.put("defect_fine", df);
  s.put("order", order);
  s.put("slack_ok", slack_ok ? 1.0 : 0.0);
  r.rows.push_back(s);
  r.pass = order >= 0.5 && slack_ok;
  return r;
}

ExpResult exp_trace(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const int n1 = int(cfg.num("trace.n1", 128));
  const int n2 = int(cfg.num("trace.n2", 32));
  TraceProbe flat;
  flat.s_list = {0.32, 0.16, 0.08, 0.04, 0.02};
  flat.weight = [](double) { return 1.0; };
  TraceProbe bent = flat;
  bent.weight = [](double y) { return 1.0 + 0.3 * std::sin(kPi * y); };
  const Grid2D g{n1, n2, 1.0, 1.0};
  TraceSampler sf(g, flat);
  TraceSampler sb(g, bent);
  const uint64_t seed = cfg.seed_list()[0];
  const auto res = standard_fv_run(m, n1, n2, cfg.T, cfg.eps, seed, true, initial_upper,
                                   {sf.observer(), sb.observer()});

  ExpResult r;
  std::vector<double> df, db;
  for (int k = 0; k + 1 < sf.layers(); ++k) {
    df.push_back(sf.distance(k, k + 1));
    db.push_back(sb.distance(k, k + 1));
    SummaryRow row;
    row.put("kind", std::string("cauchy"));
    row.put("s", flat.s_list[k + 1]);
    row.put("d_flat", df.back());
    row.put("d_deformed", db.back());
    r.rows.push_back(row);
  }
  const Vec pf = sf.chi_profile(sf.layers() - 1);
  const Vec pb = sb.chi_profile(sb.layers() - 1);
  const Vec xg = sf.xi_grid();
  const double dxi = xg[1] - xg[0];
  double gap = 0.0;
  for (Eigen::Index q = 0; q < pf.size(); ++q) gap += std::abs(pf[q] - pb[q]) * dxi;
  const ChiFit fit_f = chi_fit(xg, pf);
  const ChiFit fit_b = chi_fit(xg, pb);
  const double tol = cfg.num("trace.deformation_tol", 0.05);
  const BoundaryData bd = BoundaryData::constant(boundary_level());
  const double gap_lo = dirichlet_trace_gap(m, res.path, bd, false);
  const double gap_hi = dirichlet_trace_gap(m, res.path, bd, true);

  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("deformation_gap", gap);
  s.put("chi_u_flat", fit_f.u_est);
  s.put("chi_u_deformed", fit_b.u_est);
  s.put("chi_l1_flat", fit_f.l1_dist);
  s.put("chi_l1_deformed", fit_b.l1_dist);
  s.put("dirichlet_gap_lo", gap_lo);
  s.put("dirichlet_gap_hi", gap_hi);
  r.rows.push_back(s);
  r.pass = strictly_decreasing(df) && strictly_decreasing(db) && gap <= tol;
  return r;
}

ExpResult exp_gaussgreen(const RunConfig& cfg) {
  auto f1 = [](double x, double y) { return x * x * y + 2.0 * y * y * y + 1.0; };
  auto f2 = [](double x, double y) { return x * y * y + x * x * x + 2.0; };
  auto divf = [](double x, double y) { return 4.0 * x * y; };
  auto gg = [](double x, double y) { return 1.0 + x + 2.0 * y + x * y * y; };
  auto gx = [](double, double y) { return 1.0 + y * y; };
  auto gy = [](double x, double y) { return 2.0 + 2.0 * x * y; };
  const int n = int(cfg.num("gaussgreen.n", 64));
  const GaussGreenParts parts = gauss_green_parts(f1, f2, divf, gg, gx, gy, 1.0, 1.0, n);
  ExpResult r;
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("volume_grad", parts.volume_grad);
  s.put("volume_div", parts.volume_div);
  s.put("trace", parts.trace);
  s.put("defect", parts.defect());
  r.rows.push_back(s);
  r.pass = std::abs(parts.defect()) <= 1e-6;
  return r;
}

ExpResult exp_averaging(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const int n = int(cfg.num("averaging.n", 32));
  const uint64_t seed = cfg.seed_list()[0];
  ExpResult r;

  CubeField f = CubeField::zeros(n);
  for (size_t i = 0; i < f.a.size(); ++i)
    f.a[i] = {rng::normal(seed, 11, i, 0), rng::normal(seed, 11, i, 1)};
  MultiplierParams mp;
  mp.beta = m.b22;
  const CubeSplit sp = decompose_cube(f, 0.35, mp);
  double rec = 0.0;
  for (size_t i = 0; i < f.a.size(); ++i)
    rec = std::max(rec, std::abs(f.a[i] - (sp.v1.a[i] + sp.v2.a[i] + sp.v3.a[i] + sp.v4.a[i])));

  // unit-modulus spectrum: the low-ball energy must scale like gamma^dim
  CubeField fhat = CubeField::zeros(n);
  for (size_t i = 0; i < fhat.a.size(); ++i) {
    const double th = 2.0 * kPi * rng::uniform01(rng::keyed(seed, 12, i, 0));
    fhat.a[i] = {std::cos(th), std::sin(th)};
  }
  const CubeField funit = fft3(fhat, true);
  std::vector<double> gammas = {2.0, 3.0, 4.0, 6.0}, lows;
  for (double gderiv : gammas) {
    MultiplierParams mg = mp;
    mg.gamma = gderiv;
    const CubeSplit su = decompose_cube(funit, 0.35, mg);
    lows.push_back(su.v1.norm2());
    SummaryRow row;
    row.put("kind", std::string("lowball"));
    row.put("gamma", gderiv);
    row.put("energy", lows.back());
    r.rows.push_back(row);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < gammas.size(); ++k) {
    const double x = std::log(gammas[k]), y = std::log(lows[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = double(gammas.size());
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);

  // cone band: shrinking delta must shed energy through strictly smaller zeta^2
  std::vector<double> d2 = {0.4, 0.3, 0.22, 0.16}, v2n;
  for (double dv : d2) {
    MultiplierParams mc = mp;
    mc.delta = dv;
    mc.beta = [](double) { return 0.05; };
    const CubeSplit sc = decompose_cube(f, 0.35, mc);
    v2n.push_back(std::sqrt(sc.v2.norm2()));
    SummaryRow row;
    row.put("kind", std::string("cone"));
    row.put("delta", dv);
    row.put("v2_norm", v2n.back());
    r.rows.push_back(row);
  }

  // spectrum pinned inside the transport cone and away from the low ball:
  // only the velocity cutoff acts, so the third part tracks it exactly
  CubeField chat = CubeField::zeros(n);
  int tag = 0;
  for (int k2 : {0, 4, n - 4})
    for (int s0 : {1, -1})
      for (auto km : {std::pair<int, int>{8, 0}, {10, 3}, {10, -3}, {12, 5}, {12, -5}}) {
        const int k0 = s0 * km.first;
        const int k1 = km.second;
        const double th = 2.0 * kPi * rng::uniform01(rng::keyed(seed, 13, tag++, 0));
        chat.at((k0 + n) % n, (k1 + n) % n, k2) = {std::cos(th), std::sin(th)};
      }
  const CubeField fcone = fft3(chat, true);
  std::vector<double> d3 = {0.12, 0.09, 0.07, 0.062}, v3n;
  double v2_on_cone = 0.0;
  for (double dv : d3) {
    MultiplierParams mc = mp;
    mc.delta = dv;
    mc.beta = [](double) { return 0.1225; };
    const CubeSplit sc = decompose_cube(fcone, 0.35, mc);
    v3n.push_back(std::sqrt(sc.v3.norm2()));
    v2_on_cone = std::max(v2_on_cone, std::sqrt(sc.v2.norm2()));
    SummaryRow row;
    row.put("kind", std::string("velocity"));
    row.put("delta", dv);
    row.put("v3_norm", v3n.back());
    r.rows.push_back(row);
  }

  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("reconstruction", rec);
  s.put("lowball_slope", slope);
  s.put("v2_on_cone", v2_on_cone);
  r.rows.push_back(s);
  r.pass = rec <= 1e-12 && std::abs(slope - 3.0) <= 0.2 && strictly_decreasing(v2n) &&
           strictly_decreasing(v3n) && v2_on_cone <= 1e-12;
  return r;
}

ExpResult exp_scan(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  ScanParams sp;
  sp.xi_samples = int(cfg.num("scan.xi", 4096));
  const ScanResult r1 = nondegeneracy_scan(m, sp);
  ScanParams sp2 = sp;
  sp2.xi_samples *= 2;
  const ScanResult r2 = nondegeneracy_scan(m, sp2);
  const double drift_a = std::abs(r2.alpha - r1.alpha) / std::max(std::abs(r1.alpha), 1e-12);
  const double drift_b = std::abs(r2.beta - r1.beta) / std::max(std::abs(r1.beta), 1e-12);

  const int sphere = int(cfg.num("scan.sphere", 512));
  const ThresholdCollapse cd = degeneracy_collapse(m, {1e-4}, sp.xi_samples, sphere);
  const ModelSpec md = make_model(cfg.raw.get_str("scan.degenerate_model", "degenerate-flat"));
  const ThresholdCollapse cf = degeneracy_collapse(md, {1e-4}, sp.xi_samples, sphere);

  ExpResult r;
  for (int si = 0; si < r1.omega.rows(); ++si)
    for (int di = 0; di < r1.omega.cols(); ++di) {
      SummaryRow row;
      row.put("kind", std::string("omega"));
      row.put("shell", double(sp.shells[size_t(si)]));
      row.put("delta", sp.deltas[size_t(di)]);
      row.put("omega", r1.omega(si, di));
      r.rows.push_back(row);
    }
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("alpha", r1.alpha);
  s.put("beta", r1.beta);
  s.put("fit_rms", r1.rms_residual);
  s.put("drift_alpha", drift_a);
  s.put("drift_beta", drift_b);
  s.put("collapse_level", cd.level[0]);
  s.put("collapse_level_degenerate", cf.level[0]);
  r.rows.push_back(s);
  r.pass = r1.fit_ok && r1.alpha > 0.0 && r1.alpha < 1.0 && r1.beta > 0.0 && drift_a <= 0.1 &&
           drift_b <= 0.1 && cd.level[0] <= cfg.num("scan.level_tol", 0.02) &&
           cf.level[0] >= 0.1;
  return r;
}

ExpResult exp_viscosity(const RunConfig& cfg) {
  const SweepTable te = convergence_study(cfg, "eps");
  const SweepTable tm = convergence_study(cfg, "mu");
  ExpResult r;
  for (size_t k = 0; k < te.diffs.size(); ++k) {
    SummaryRow row;
    row.put("kind", std::string("eps"));
    row.put("value", te.values[k]);
    row.put("next", te.values[k + 1]);
    row.put("distance", te.diffs[k]);
    r.rows.push_back(row);
  }
  for (size_t k = 0; k < tm.diffs.size(); ++k) {
    SummaryRow row;
    row.put("kind", std::string("mu"));
    row.put("value", tm.values[k]);
    row.put("distance", tm.diffs[k]);
    r.rows.push_back(row);
  }
  bool mu_ok = true;
  for (size_t k = 0; k + 1 < tm.diffs.size(); ++k)
    mu_ok = mu_ok && tm.diffs[k + 1] <= tm.diffs[k] * (1.0 + 1e-12);
  SummaryRow s;
  s.put("kind", std::string("summary"));
  s.put("eps_decreasing", te.decreasing ? 1.0 : 0.0);
  s.put("mu_decreasing", mu_ok ? 1.0 : 0.0);
  r.rows.push_back(s);
  r.pass = te.decreasing && mu_ok;
  return r;
}

using ExpFn = ExpResult (*)(const RunConfig&);

const std::vector<std::pair<std::string, ExpFn>>& experiment_table() {
  static const std::vector<std::pair<std::string, ExpFn>> table = {
      {"averaging", exp_averaging},   {"comparison", exp_comparison},
      {"contraction", exp_contraction}, {"energy", exp_energy},
      {"gaussgreen", exp_gaussgreen}, {"hypotheses", exp_hypotheses},
      {"kinetic", exp_kinetic},       {"linear-oracle", exp_linear_oracle},
      {"maxprinciple", exp_maxprinciple}, {"picard", exp_picard},
      {"residuals", exp_residuals},   {"scan", exp_scan},
      {"spectrum", exp_spectrum},     {"trace", exp_trace},
      {"viscosity", exp_viscosity},
  };
  return table;
}

void persist(const RunConfig& cfg, RunRecord& rec) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail_config("unwritable output path: " + cfg.out_dir);
  rec.dir = cfg.out_dir;

  std::set<std::string> keys;
  for (const auto& row : rec.rows)
    for (const auto& kv : row.cells) keys.insert(kv.first);
  std::vector<std::string> header = {"config_hash"};
  header.insert(header.end(), keys.begin(), keys.end());
  CsvWriter w(cfg.out_dir + "/summary.csv", header);
  for (const auto& row : rec.rows) {
    std::vector<std::string> cells = {rec.config_hash};
    for (const auto& key : keys) {
      auto it = row.cells.find(key);
      cells.push_back(it == row.cells.end() ? std::string() : it->second);
    }
    w.row(cells);
  }

  std::ofstream meta(cfg.out_dir + "/metadata.txt");
  if (!meta) fail_config("unwritable output path: " + cfg.out_dir);
  meta << "experiment = " << rec.experiment << "\n";
  meta << "config_hash = " << rec.config_hash << "\n";
  meta << "pass = " << (rec.pass ? 1 : 0) << "\n";
  meta << "rows = " << rec.rows.size() << "\n";
  meta << "version = 0.1.0\n";
  // wall clock is the only field allowed to differ between replays
  meta << "wall_seconds = " << CsvWriter::num(rec.wall_seconds) << "\n";
  meta << "\n" << cfg.raw.canonical();
}

}  // namespace

void SummaryRow::put(const std::string& key, double v) { cells[key] = CsvWriter::num(v); }

std::vector<uint64_t> RunConfig::seed_list() const {
  if (seeds.empty()) fail_config("seed list must not be empty");
  std::set<uint64_t> seen(seeds.begin(), seeds.end());
  if (seen.size() != seeds.size()) fail_config("seeds must be distinct");
  std::vector<uint64_t> out = seeds;
  if (paths > 0 && int(out.size()) > paths) out.resize(size_t(paths));
  uint64_t next = out.back();
  while (int(out.size()) < paths) {
    ++next;
    if (!seen.insert(next).second) continue;
    out.push_back(next);
  }
  return out;
}

RunConfig parse_run_config(const Config& c) {
  RunConfig r;
  r.raw = c;
  r.experiment = c.get_str("run.experiment", "");
  if (!r.experiment.empty()) {
    bool known = false;
    for (const auto& name : experiment_names()) known = known || name == r.experiment;
    if (!known) fail_config("unknown experiment: " + r.experiment);
  }
  r.model = c.get_str("run.model", "default-powerlaw");
  make_model(r.model);
  r.n1 = int(c.get_int("grid.n1", 32));
  r.n2 = int(c.get_int("grid.n2", 32));
  if (r.n1 < 2 || r.n2 < 2) fail_config("grid needs at least two cells per direction");
  r.T = c.get_num("run.T", 0.25);
  r.eps = c.get_num("run.eps", 0.1);
  r.mu = c.get_num("run.mu", 0.01);
  if (!(r.T > 0.0) || !(r.eps > 0.0) || !(r.mu > 0.0))
    fail_config("run horizon and viscosities must be positive");
  r.eps_list = c.has("sweep.eps") ? c.get_list("sweep.eps")
                                  : std::vector<double>{0.1, 0.05, 0.025, 0.0125, 0.00625};
  r.mu_list =
      c.has("sweep.mu") ? c.get_list("sweep.mu") : std::vector<double>{0.1, 0.01, 0.001};
  if (r.eps_list.empty() || r.mu_list.empty()) fail_config("sweep lists must not be empty");
  for (double v : r.eps_list)
    if (!(v > 0.0)) fail_config("sweep values must be positive");
  for (double v : r.mu_list)
    if (!(v > 0.0)) fail_config("sweep values must be positive");
  r.seeds.clear();
  if (c.has("run.seeds")) {
    for (double s : c.get_list("run.seeds")) {
      if (s < 0.0 || s != std::floor(s)) fail_config("seeds must be nonnegative integers");
      r.seeds.push_back(uint64_t(s));
    }
  } else {
    r.seeds = {1};
  }
  r.paths = int(c.get_int("run.paths", 0));
  if (r.paths < 0) fail_config("path count must be nonnegative");
  r.out_dir = c.get_str("run.out", "");
  r.seed_list();
  return r;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(Config::parse_file(path));
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& kv : experiment_table()) out.push_back(kv.first);
  return out;
}

double initial_upper(double x1, double x2) {
  return 0.25 + 0.7 * std::sin(kPi * x2) * (0.55 + 0.45 * std::cos(kPi * x1));
}

double initial_lower(double x1, double x2) {
  return 0.05 + 0.8 * (initial_upper(x1, x2) - 0.25);
}

double boundary_level() { return 0.25; }

EpsRunResult standard_fv_run(const ModelSpec& m, int n1, int n2, double T, double eps,
                             uint64_t seed, bool with_noise,
                             const std::function<double(double, double)>& u0,
                             const std::vector<StepObserver>& observers) {
  SchemeParams p;
  p.n1 = n1;
  p.n2 = n2;
  p.T = T;
  p.eps = eps;
  const int j = dyadic_exponent(m, p);
  const int steps = 1 << j;
  p.dt = T / double(steps);
  p.store_stride = std::max(1, steps / 8);
  const BoundaryData bd = BoundaryData::constant(boundary_level());
  if (with_noise && m.K > 0) {
    const NoisePath noise = NoisePath::generate(seed, m.K, T, steps);
    return run_second_approx(m, p, bd, u0, &noise, observers);
  }
  return run_second_approx(m, p, bd, u0, nullptr, observers);
}

PairedStudy paired_ensemble_study(const RunConfig& cfg, int paths, bool positive_part) {
  const ModelSpec m = make_model(cfg.model);
  RunConfig tmp = cfg;
  tmp.paths = paths;
  const auto seeds = tmp.seed_list();
  SchemeParams p;
  p.n1 = cfg.n1;
  p.n2 = cfg.n2;
  p.T = cfg.T;
  p.eps = cfg.eps;
  const int j = dyadic_exponent(m, p);
  const int steps = 1 << j;
  p.dt = cfg.T / double(steps);
  p.store_stride = 1;
  const int stride = std::max(1, steps / 8);
  const int nf = steps / stride + 1;
  const BoundaryData bd = BoundaryData::constant(boundary_level());

  PairedStudy out;
  out.paths = int(seeds.size());
  out.times.resize(size_t(nf));
  for (int k = 0; k < nf; ++k) out.times[size_t(k)] = k * stride * p.dt;
  Mat vals(int(seeds.size()), nf);
  double super = 0.0;
  for (size_t s = 0; s < seeds.size(); ++s) {
    const NoisePath noise = NoisePath::generate(seeds[s], m.K, cfg.T, steps);
    const NoisePath* np = m.K > 0 ? &noise : nullptr;
    const auto ru = run_second_approx(m, p, bd, initial_lower, np);
    const auto rv = run_second_approx(m, p, bd, initial_upper, np);
    const double vol = ru.path.grid.vol();
    for (int n = 0; n <= steps; ++n) {
      const Mat d = ru.path.frames[size_t(n)] - rv.path.frames[size_t(n)];
      super = std::max(super, d.maxCoeff());
      if (n % stride == 0) {
        double acc = 0.0;
        for (Eigen::Index q = 0; q < d.size(); ++q)
          acc += positive_part ? std::max(d.data()[q], 0.0) : std::abs(d.data()[q]);
        vals(int(s), n / stride) = acc * vol;
      }
    }
  }
  out.sup_violation = std::max(0.0, super);
  out.mean.resize(nf);
  out.half_ci.resize(nf);
  for (int k = 0; k < nf; ++k) {
    const double mean = vals.col(k).mean();
    double var = 0.0;
    for (int s = 0; s < vals.rows(); ++s) var += sq(vals(s, k) - mean);
    var = vals.rows() > 1 ? var / double(vals.rows() - 1) : 0.0;
    out.mean[k] = mean;
    out.half_ci[k] = 1.96 * std::sqrt(var / double(vals.rows()));
  }
  out.initial = vals(0, 0);
  return out;
}

OvershootStudy overshoot_study(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const auto seeds = seeds_for(cfg, 200);
  const int refine = std::min<int>(int(cfg.num("maxprinciple.refine_paths", 20)),
                                   int(seeds.size()));
  OvershootStudy st;
  st.paths = int(seeds.size());
  double coarse_sub = 0.0;
  for (size_t s = 0; s < seeds.size(); ++s) {
    const auto res =
        standard_fv_run(m, cfg.n1, cfg.n2, cfg.T, cfg.eps, seeds[s], true, initial_upper);
    const double ov = std::max(res.overshoot_high, res.overshoot_low);
    st.coarse = std::max(st.coarse, ov);
    if (int(s) < refine) coarse_sub = std::max(coarse_sub, ov);
  }
  for (int s = 0; s < refine; ++s) {
    const auto res = standard_fv_run(m, 2 * cfg.n1, 2 * cfg.n2, cfg.T, cfg.eps, seeds[size_t(s)],
                                     true, initial_upper);
    st.fine = std::max(st.fine, std::max(res.overshoot_high, res.overshoot_low));
  }
  if (st.coarse <= 1e-14 && st.fine <= 1e-14) {
    st.vacuous = true;
    st.order = 0.0;
  } else if (st.fine <= 1e-300) {
    st.order = 99.0;
  } else {
    st.order = std::log2(std::max(coarse_sub, 1e-300) / st.fine);
  }
  return st;
}

namespace {

SweepTable eps_sweep(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const auto& values = cfg.eps_list;
  if (values.size() < 3) fail_config("sweep needs at least three values");
  if (!strictly_decreasing(values)) fail_config("sweep values must strictly decrease");
  const bool with_noise = m.K > 0;
  const auto seeds = with_noise ? seeds_for(cfg, 4) : std::vector<uint64_t>{cfg.seed_list()[0]};

  std::vector<int> jj(values.size());
  int jmax = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    SchemeParams p;
    p.n1 = cfg.n1;
    p.n2 = cfg.n2;
    p.T = cfg.T;
    p.eps = values[i];
    jj[i] = dyadic_exponent(m, p);
    jmax = std::max(jmax, jj[i]);
  }
  const BoundaryData bd = BoundaryData::constant(boundary_level());
  Mat dacc = Mat::Zero(int(seeds.size()), int(values.size()) - 1);
  for (size_t s = 0; s < seeds.size(); ++s) {
    const NoisePath noise = NoisePath::generate(seeds[s], m.K, cfg.T, 1 << jmax);
    std::vector<FvPath> runs;
    for (size_t i = 0; i < values.size(); ++i) {
      SchemeParams p;
      p.n1 = cfg.n1;
      p.n2 = cfg.n2;
      p.T = cfg.T;
      p.eps = values[i];
      p.dt = cfg.T / double(1 << jj[i]);
      p.store_stride = std::max(1, (1 << jj[i]) / 8);
      runs.push_back(
          run_second_approx(m, p, bd, initial_upper, with_noise ? &noise : nullptr).path);
    }
    for (size_t k = 0; k + 1 < runs.size(); ++k)
      dacc(int(s), int(k)) = l1_space_time_distance(runs[k], runs[k + 1]);
  }
  SweepTable t;
  t.values = values;
  for (int k = 0; k + 1 < int(values.size()); ++k) t.diffs.push_back(dacc.col(k).mean());
  t.decreasing = strictly_decreasing(t.diffs);
  return t;
}

SweepTable mu_sweep(const RunConfig& cfg) {
  const ModelSpec m = make_model(cfg.model);
  const auto& values = cfg.mu_list;
  if (values.size() < 3) fail_config("sweep needs at least three values");
  if (!strictly_decreasing(values)) fail_config("sweep values must strictly decrease");

  const int nref = int(cfg.num("mu_sweep.fv_n", 64));
  SchemeParams p;
  p.n1 = nref;
  p.n2 = nref;
  p.T = cfg.T;
  p.eps = cfg.eps;
  const int j = dyadic_exponent(m, p);
  p.dt = cfg.T / double(1 << j);
  p.store_stride = std::max(1, (1 << j) / 8);
  const BoundaryData bd = BoundaryData::constant(boundary_level());
  const auto ref = run_second_approx(m, p, bd, initial_upper, nullptr);
  const int frames = int(ref.path.frames.size());

  SweepTable t;
  t.values = values;
  const int msteps = int(cfg.num("mu_sweep.steps", 2048));
  for (double mu : values) {
    MuParams q;
    q.modes1 = int(cfg.num("mu_sweep.modes1", 12));
    q.modes2 = int(cfg.num("mu_sweep.modes2", 12));
    q.eps = cfg.eps;
    q.mu = mu;
    q.T = cfg.T;
    q.dt = cfg.T / double(msteps);
    q.store_stride = std::max(1, msteps / 8);
    const MuRun run = run_first_approx(m, q, bd, initial_upper, nullptr);
    double acc = 0.0;
    for (int k = 0; k < frames; ++k) {
      const double w = (k == 0 || k == frames - 1) ? 0.5 : 1.0;
      const int mk = frame_at_time(run.times, ref.path.times[size_t(k)]);
      acc += w * l1_cell_distance(ref.path.grid, run.state_on(ref.path.grid, mk),
                                  ref.path.frames[size_t(k)]);
    }
    acc *= cfg.T / double(frames - 1);
    t.diffs.push_back(acc);
  }
  t.decreasing = strictly_decreasing(t.diffs);
  return t;
}

}  // namespace

SweepTable convergence_study(const RunConfig& cfg, const std::string& param) {
  if (param == "eps") return eps_sweep(cfg);
  if (param == "mu") return mu_sweep(cfg);
  fail_config("unknown sweep parameter: " + param);
}

RunRecord run_experiment(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.experiment.empty()) fail_config("config does not name an experiment");
  ExpFn fn = nullptr;
  for (const auto& kv : experiment_table())
    if (kv.first == cfg.experiment) fn = kv.second;
  if (!fn) fail_config("unknown experiment: " + cfg.experiment);

  RunRecord rec;
  rec.experiment = cfg.experiment;
  rec.config_hash = cfg.raw.hash();
  ExpResult res = fn(cfg);
  rec.rows = std::move(res.rows);
  rec.pass = res.pass;
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!cfg.out_dir.empty()) persist(cfg, rec);
  return rec;
}

bool replay_matches(const RunConfig& cfg, const std::string& reference_dir,
                    const std::string& scratch_dir, std::string* detail) {
  RunConfig c2 = cfg;
  c2.out_dir = scratch_dir;
  run_experiment(c2);
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_config("cannot open file for replay comparison: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string ref = slurp(reference_dir + "/summary.csv");
  const std::string got = slurp(scratch_dir + "/summary.csv");
  if (ref != got) {
    if (detail) *detail = "summary.csv differs between reference and replay";
    return false;
  }
  if (detail) detail->clear();
  return true;
}

}  // namespace dph
