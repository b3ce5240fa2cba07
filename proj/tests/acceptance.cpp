// Final acceptance gate. Runs every shipped pipeline with its default
// configuration and re-derives each advertised guarantee from the emitted
// rows, so a regression in either the solvers or the reporting fails here.
// One line per check; exit status 0 only when every line passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "core/experiments.hpp"
#include "core/spectral.hpp"
#include "oracle_values.hpp"

namespace {

using dph::RunRecord;
using dph::SummaryRow;

int g_failed = 0;

RunRecord run_named(const std::string& name, const std::string& extra = "") {
  dph::Config c = dph::Config::parse_text("[run]\nexperiment = " + name + "\n" + extra);
  return dph::run_experiment(dph::parse_run_config(c));
}

std::vector<const SummaryRow*> rows_of(const RunRecord& r, const std::string& kind) {
  std::vector<const SummaryRow*> out;
  for (const auto& row : r.rows) {
    auto it = row.cells.find("kind");
    if (it != row.cells.end() && it->second == kind) out.push_back(&row);
  }
  return out;
}

double cell(const SummaryRow& row, const std::string& key) {
  auto it = row.cells.find(key);
  if (it == row.cells.end()) {
    std::fprintf(stderr, "missing cell: %s\n", key.c_str());
    std::exit(2);
  }
  return std::strtod(it->second.c_str(), nullptr);
}

const SummaryRow& summary_of(const RunRecord& r) {
  const auto s = rows_of(r, "summary");
  if (s.size() != 1) {
    std::fprintf(stderr, "expected one summary row, got %zu\n", s.size());
    std::exit(2);
  }
  return *s[0];
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i + 1] < v[i])) return false;
  return v.size() >= 2;
}

// Collects sub-conditions of one check and renders a single report line.
class Check {
 public:
  Check(int index, std::string name) : index_(index), name_(std::move(name)) {
    t0_ = std::chrono::steady_clock::now();
  }

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok_ = false;
      fails_ += (fails_.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& key, double v) {
    std::ostringstream s;
    s << (notes_.empty() ? "" : " ") << key << "=" << v;
    notes_ += s.str();
  }

  ~Check() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::printf("[%s] %02d %-24s %s%s%s (%.1fs)\n", ok_ ? "PASS" : "FAIL", index_, name_.c_str(),
                notes_.c_str(), fails_.empty() ? "" : " !! ", fails_.c_str(), secs);
    std::fflush(stdout);
    if (!ok_) ++g_failed;
  }

 private:
  int index_;
  std::string name_;
  bool ok_ = true;
  std::string notes_, fails_;
  std::chrono::steady_clock::time_point t0_;
};

void check_spectrum_and_smoothing() {
  const RunRecord rec = run_named("spectrum");
  {
    Check c(1, "clamped-spectrum");
    const auto& s = summary_of(rec);
    const double k1 = cell(s, "k1"), k2 = cell(s, "k2");
    c.note("k1", k1);
    c.note("k2", k2);
    c.note("ode_residual", cell(s, "ode_residual"));
    c.expect(std::abs(k1 - oracle::kClampedK1) <= 1e-8, "k1 off the frozen root");
    c.expect(std::abs(k2 - oracle::kClampedK2) <= 1e-8, "k2 off the frozen root");
    c.expect(cell(s, "ode_residual") <= 1e-6, "eigenfunction ODE residual above 1e-6");
    // independent roots of the same determinant for the higher modes
    auto det = [](double q) { return dph::spectral::clamped_det_scaled(q, 1.0, 0.0, 1.0); };
    double lo = 10.9, hi = 11.1;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (det(lo) * det(mid) <= 0.0 ? hi : lo) = mid;
    }
    c.expect(std::abs(0.5 * (lo + hi) - oracle::kClampedK3) <= 1e-8, "k3 off the frozen root");
    const auto cb = dph::spectral::make_clamped(0.01, 0.1, 1.0, 2);
    c.expect(std::abs(cb.cm[0].q - oracle::kClampedDefaultQ1) <= 1e-8,
             "default-operator q1 off the frozen value");
    c.expect(std::abs(cb.cm[1].q - oracle::kClampedDefaultQ2) <= 1e-8,
             "default-operator q2 off the frozen value");
    c.expect(rec.pass, "pipeline verdict disagrees");
  }
  {
    Check c(2, "semigroup-smoothing");
    const auto rows = rows_of(rec, "smoothing");
    c.expect(rows.size() == 30, "expected 30 sampled (s, t) pairs");
    double margin = 1e300;
    for (const auto* row : rows) {
      const double sup = cell(*row, "sup"), bound = cell(*row, "bound");
      margin = std::min(margin, bound * (1.0 + 1e-12) - sup);
      c.expect(sup <= bound * (1.0 + 1e-12), "sup exceeds (s/e)^s t^-s");
    }
    c.note("worst_margin", margin);
  }
}

void check_linear_oracle() {
  const RunRecord rec = run_named("linear-oracle");
  Check c(3, "linear-oracle");
  const auto& s = summary_of(rec);
  c.note("fv_l2_error", cell(s, "fv_l2_error"));
  c.note("heat_l2_error", cell(s, "heat_l2_error"));
  c.expect(cell(s, "fv_l2_error") <= 1e-4, "finite-volume error above 1e-4");
  c.expect(cell(s, "heat_l2_error") <= 1e-6, "first-stage error above 1e-6");
  c.expect(std::abs(cell(s, "heat_lambda1") - oracle::kProbeLambda1) <= 1e-12,
           "decay rate off the frozen ground eigenvalue");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_max_principle() {
  const RunRecord rec = run_named("maxprinciple");
  Check c(4, "maximum-principle");
  const auto& s = summary_of(rec);
  const double coarse = cell(s, "overshoot_coarse");
  c.note("overshoot", coarse);
  c.note("paths", cell(s, "paths"));
  c.expect(cell(s, "paths") >= 200, "fewer than 200 paths");
  c.expect(coarse <= 1e-3, "range overshoot above 1e-3");
  if (cell(s, "vacuous") == 0.0) {
    c.note("order", cell(s, "order"));
    c.expect(cell(s, "order") >= 1.0, "overshoot does not vanish at first order");
  }
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_comparison() {
  const RunRecord rec = run_named("comparison");
  Check c(5, "comparison-principle");
  const auto& s = summary_of(rec);
  const double initial = cell(s, "initial");
  c.note("sup_violation", cell(s, "sup_violation"));
  c.note("paths", cell(s, "paths"));
  c.expect(cell(s, "paths") >= 100, "fewer than 100 paths");
  c.expect(cell(s, "sup_violation") <= 1e-3, "pathwise order violation above 1e-3");
  const auto curve = rows_of(rec, "curve");
  c.expect(curve.size() >= 9, "curve has fewer than 9 time points");
  for (const auto* row : curve)
    c.expect(cell(*row, "mean") <= initial + cell(*row, "half_ci") + 1e-3,
             "mean order defect grows beyond its CI band");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_contraction() {
  const RunRecord rec = run_named("contraction");
  Check c(6, "l1-contraction");
  const auto& s = summary_of(rec);
  const double initial = cell(s, "initial");
  c.note("initial", initial);
  c.note("paths", cell(s, "paths"));
  c.expect(cell(s, "paths") >= 200, "fewer than 200 paths");
  const auto curve = rows_of(rec, "curve");
  c.expect(curve.size() >= 9, "curve has fewer than 9 time points");
  double last = 0.0;
  for (const auto* row : curve) {
    c.expect(cell(*row, "mean") <= 1.02 * initial + cell(*row, "half_ci"),
             "mean distance exceeds 1.02 x initial + CI");
    last = cell(*row, "mean");
  }
  c.note("final_mean", last);
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_picard() {
  const RunRecord rec = run_named("picard");
  Check c(7, "fixed-point-iteration");
  const auto paths = rows_of(rec, "path");
  c.expect(paths.size() >= 3, "fewer than 3 seeds");
  double worst_factor = 0.0, worst_resid = 0.0;
  for (const auto* row : paths) {
    worst_factor = std::max(worst_factor, cell(*row, "contraction_factor"));
    worst_resid = std::max(worst_resid, cell(*row, "final_residual"));
    worst_resid = std::max(worst_resid, cell(*row, "recursion_residual"));
    c.expect(cell(*row, "converged") == 1.0, "a window failed to converge");
  }
  c.note("worst_factor", worst_factor);
  c.note("worst_residual", worst_resid);
  c.expect(worst_factor < 1.0, "successive-residual factor not below one");
  c.expect(worst_resid < 1e-8, "terminal residual above 1e-8");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_energy() {
  const RunRecord rec = run_named("energy");
  Check c(8, "energy-identity");
  const auto& s = summary_of(rec);
  const double ratio = cell(s, "ratio"), inflation = cell(s, "inflation");
  c.note("defect_ratio", ratio);
  c.note("ito_inflation", inflation);
  c.expect(ratio >= 1.5 && ratio <= 3.0, "defect does not halve under dt halving");
  c.expect(inflation >= 10.0, "omitting the Ito term inflates the defect < 10x");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_kinetic_measure() {
  const RunRecord rec = run_named("kinetic");
  Check c(9, "kinetic-measure");
  const auto& s = summary_of(rec);
  c.note("min_entry", cell(s, "min_entry"));
  c.note("mass_variation", cell(s, "mass_variation"));
  c.expect(cell(s, "min_entry") >= 0.0, "a histogram entry is negative");
  c.expect(cell(s, "worst_gap_over_bin") >= -1.0,
           "parabolic part exceeds the measure by more than one bin");
  c.expect(cell(s, "mass_variation") < 0.5, "mean mass varies by 50% or more across eps");
  const auto levels = rows_of(rec, "level");
  c.expect(levels.size() == 3, "expected three eps levels");
  for (const auto* row : levels) c.expect(cell(*row, "mean_mass") > 0.0, "mean mass not positive");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_residuals() {
  const RunRecord rec = run_named("residuals");
  Check c(10, "weak-form-residuals");
  const auto& s = summary_of(rec);
  c.note("order", cell(s, "order"));
  c.note("defect_fine", cell(s, "defect_fine"));
  c.expect(cell(s, "order") >= 0.5, "joint refinement order below 1/2");
  c.expect(cell(s, "slack_ok") == 1.0, "an entropy slack fell below -10x the defect");
  c.expect(rows_of(rec, "path").size() >= 3, "fewer than 3 seeds");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_trace() {
  const RunRecord rec = run_named("trace");
  Check c(11, "strong-boundary-trace");
  const auto cauchy = rows_of(rec, "cauchy");
  c.expect(cauchy.size() == 4, "expected four layer spacings");
  std::vector<double> flat, deformed;
  for (const auto* row : cauchy) {
    flat.push_back(cell(*row, "d_flat"));
    deformed.push_back(cell(*row, "d_deformed"));
  }
  c.expect(strictly_decreasing(flat), "flat-layer Cauchy distances not strictly decreasing");
  c.expect(strictly_decreasing(deformed),
           "deformed-layer Cauchy distances not strictly decreasing");
  const auto& s = summary_of(rec);
  c.note("deformation_gap", cell(s, "deformation_gap"));
  c.expect(cell(s, "deformation_gap") <= 0.05, "trace depends on the layer deformation");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_gauss_green() {
  const RunRecord rec = run_named("gaussgreen");
  Check c(12, "gauss-green-identity");
  const auto& s = summary_of(rec);
  c.note("defect", cell(s, "defect"));
  c.expect(std::abs(cell(s, "defect")) <= 1e-6, "divergence identity defect above 1e-6");
  c.expect(std::abs(cell(s, "volume_grad") - oracle::kGGVolGrad) <= 1e-6,
           "gradient pairing off the closed form");
  c.expect(std::abs(cell(s, "volume_div") - oracle::kGGVolDiv) <= 1e-6,
           "divergence pairing off the closed form");
  c.expect(std::abs(cell(s, "trace") - oracle::kGGTrace) <= 1e-6,
           "boundary term off the closed form");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_averaging() {
  const RunRecord rec = run_named("averaging");
  Check c(13, "multiplier-decomposition");
  const auto& s = summary_of(rec);
  c.note("reconstruction", cell(s, "reconstruction"));
  c.note("lowball_slope", cell(s, "lowball_slope"));
  c.expect(cell(s, "reconstruction") <= 1e-12, "parts do not reassemble the field");
  c.expect(std::abs(cell(s, "lowball_slope") - 3.0) <= 0.2,
           "low-ball energy does not scale like gamma^3");
  c.expect(std::abs(cell(s, "lowball_slope") - oracle::kLatticeSlope) <= 1e-6,
           "low-ball slope off the frozen lattice value");
  const double sums[] = {oracle::kLatticeSumG2, oracle::kLatticeSumG3, oracle::kLatticeSumG4,
                         oracle::kLatticeSumG6};
  const auto low = rows_of(rec, "lowball");
  c.expect(low.size() == 4, "expected four low-ball radii");
  for (size_t k = 0; k < low.size() && k < 4; ++k)
    c.expect(std::abs(cell(*low[k], "energy") - sums[k]) <= 1e-6 * sums[k],
             "low-ball energy off the frozen lattice sum");
  std::vector<double> v2, v3;
  for (const auto* row : rows_of(rec, "cone")) v2.push_back(cell(*row, "v2_norm"));
  for (const auto* row : rows_of(rec, "velocity")) v3.push_back(cell(*row, "v3_norm"));
  c.expect(v2.size() == 4 && strictly_decreasing(v2),
           "cone-part norm not strictly decreasing in delta");
  c.expect(v3.size() == 4 && strictly_decreasing(v3),
           "velocity-part norm not strictly decreasing in delta");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_scan() {
  const RunRecord rec = run_named("scan");
  Check c(14, "nondegeneracy-scan");
  const auto& s = summary_of(rec);
  const double alpha = cell(s, "alpha"), beta = cell(s, "beta");
  c.note("alpha", alpha);
  c.note("beta", beta);
  c.note("collapse_default", cell(s, "collapse_level"));
  c.note("collapse_degenerate", cell(s, "collapse_level_degenerate"));
  c.expect(alpha > 0.0 && alpha < 1.0, "fitted alpha outside (0, 1)");
  c.expect(beta > 0.0, "fitted beta not positive");
  c.expect(cell(s, "drift_alpha") <= 0.1, "alpha drifts over 10% under added viscosity");
  c.expect(cell(s, "drift_beta") <= 0.1, "beta drifts over 10% under added viscosity");
  c.expect(cell(s, "collapse_level") <= 0.02, "default symbol pair collapses somewhere");
  c.expect(cell(s, "collapse_level_degenerate") >= 0.1,
           "flat-diffusion counterexample fails to collapse");
  c.expect(rec.pass, "pipeline verdict disagrees");
}

void check_viscosity() {
  const RunRecord rec = run_named("viscosity");
  Check c(15, "vanishing-viscosity");
  std::vector<double> deps, dmu;
  for (const auto* row : rows_of(rec, "eps")) deps.push_back(cell(*row, "distance"));
  for (const auto* row : rows_of(rec, "mu")) dmu.push_back(cell(*row, "distance"));
  c.expect(deps.size() >= 3, "eps sweep has fewer than three spacings");
  c.expect(strictly_decreasing(deps), "successive eps distances not strictly decreasing");
  c.expect(dmu.size() >= 2, "mu sweep has fewer than two levels");
  for (size_t k = 0; k + 1 < dmu.size(); ++k)
    c.expect(dmu[k + 1] <= dmu[k], "distance to the limit grows as mu shrinks");
  if (!deps.empty()) c.note("eps_last_gap", deps.back());
  if (!dmu.empty()) c.note("mu_last_distance", dmu.back());
  c.expect(rec.pass, "pipeline verdict disagrees");
}

}  // namespace

int main() {
  check_spectrum_and_smoothing();
  check_linear_oracle();
  check_max_principle();
  check_comparison();
  check_contraction();
  check_picard();
  check_energy();
  check_kinetic_measure();
  check_residuals();
  check_trace();
  check_gauss_green();
  check_averaging();
  check_scan();
  check_viscosity();
  if (g_failed == 0) {
    std::printf("acceptance: all 15 checks passed\n");
    return 0;
  }
  std::printf("acceptance: %d check(s) FAILED\n", g_failed);
  return 1;
}
