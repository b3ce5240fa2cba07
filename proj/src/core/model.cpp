#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/csv.hpp"
#include "core/quad.hpp"

namespace dph {

PrefixTable::PrefixTable(ScalarFn f, double x0, double x1, int intervals) : f_(std::move(f)), x0_(x0) {
  h_ = (x1 - x0) / intervals;
  prefix_ = quad::simpson_prefix(f_, x0_, h_, intervals);
}

double PrefixTable::operator()(double u) const {
  if (prefix_.empty()) fail_numeric("prefix table evaluated before initialization");
  const int n = static_cast<int>(prefix_.size()) - 1;
  double s = (u - x0_) / h_;
  int i = static_cast<int>(std::floor(s));
  i = std::clamp(i, 0, n - 1);
  const double xl = x0_ + i * h_;
  const double loc = (u - xl) / 6.0 * (f_(xl) + 4.0 * f_(0.5 * (xl + u)) + f_(u));
  return prefix_[i] + loc;
}

PrimitiveValues eval_primitives(const ModelSpec& m, double u) {
  PrimitiveValues v{};
  v.A1 = m.A1(u);
  require_finite(v.A1, "A1", u);
  v.a1 = m.a1(u);
  require_finite(v.a1, "a1", u);
  v.A2 = m.A2(u);
  require_finite(v.A2, "A2", u);
  v.a2 = m.a2(u);
  require_finite(v.a2, "a2", u);
  v.B22 = m.B22(u);
  require_finite(v.B22, "B22", u);
  v.b22 = m.b22(u);
  require_finite(v.b22, "b22", u);
  v.sigma = m.sigma(u);
  require_finite(v.sigma, "sigma", u);
  v.Sigma = m.Sigma(u);
  require_finite(v.Sigma, "Sigma", u);
  v.b_scalar = m.b_scalar(u);
  require_finite(v.b_scalar, "b_scalar", u);
  v.db_scalar = m.db_scalar(u);
  require_finite(v.db_scalar, "db_scalar", u);
  v.g.resize(m.K);
  for (int k = 0; k < m.K; ++k) {
    v.g[k] = m.g(k, u);
    require_finite(v.g[k], ("g[" + std::to_string(k) + "]").c_str(), u);
  }
  v.G2 = m.G2(u);
  return v;
}

bool HypothesisReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

std::string HypothesisReport::render() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << (e.pass ? "pass" : "FAIL") << "  " << e.name;
    for (const auto& [k, v] : e.stats) out << "  " << k << "=" << CsvWriter::num(v);
    if (!e.detail.empty()) out << "  (" << e.detail << ")";
    out << "\n";
  }
  out << (all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return out.str();
}

namespace {

std::vector<double> sample_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

double fd1(const ScalarFn& f, double u, double h) { return (f(u + h) - f(u - h)) / (2.0 * h); }
double fd2(const ScalarFn& f, double u, double h) { return (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h); }

}  // namespace

HypothesisReport validate_hypotheses(const ModelSpec& m, int sample_count) {
  if (sample_count < 16) fail_config("validate_hypotheses: sample_count must be at least 16");
  HypothesisReport rep;
  const int n = sample_count;
  const auto grid = sample_grid(m.u_min, m.u_max, n);
  const auto wide = sample_grid(m.u_min - 0.5, m.u_max + 0.5, n);

  for (double u : wide) eval_primitives(m, u);  // finiteness sweep

  {
    HypothesisEntry e{"range-containment"};
    e.pass = m.u_min < m.u_max && -m.L0 < m.u_min && m.u_max < m.L0;
    e.stats = {{"u_min", m.u_min}, {"u_max", m.u_max}, {"L0", m.L0}};
    rep.entries.push_back(e);
  }

  {
    // Hoelder exponent of sigma from max increments at three scales.
    HypothesisEntry e{"sigma-hoelder-exponent"};
    double m2 = 0.0, m4 = 0.0;
    for (double u : grid) {
      m2 = std::max(m2, std::abs(m.sigma(u + 1e-2) - m.sigma(u)));
      m4 = std::max(m4, std::abs(m.sigma(u + 1e-4) - m.sigma(u)));
    }
    const double gamma =
        m2 < 1e-13 ? 1.0 : std::log(m2 / std::max(m4, 1e-300)) / std::log(100.0);
    e.pass = gamma > 0.5;
    e.stats = {{"gamma", gamma}, {"increment_1e-2", m2}, {"increment_1e-4", m4}};
    rep.entries.push_back(e);
  }

  {
    // two-sided diffusion comparison: (db)^2 <= b <= Lambda (db)^2
    HypothesisEntry e{"diffusion-comparison"};
    double lo = 1e300, hi = 0.0;
    int used = 0;
    for (double u : grid) {
      const double d2 = sq(m.db_scalar(u));
      const double b = m.b22(u);
      if (d2 < 1e-14 && b < 1e-14) continue;
      const double r = b / std::max(d2, 1e-300);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ++used;
    }
    const double Lambda = std::max(hi, 1.0 + 1e-9);
    e.pass = used > 0 && lo >= 1.0 - 1e-9 && std::isfinite(hi);
    e.stats = {{"ratio_min", lo}, {"ratio_max", hi}, {"Lambda", Lambda}, {"samples", static_cast<double>(used)}};
    rep.entries.push_back(e);
  }

  {
    // sigma within [db, Lambda^{1/2} db] and sigma^2 == b
    HypothesisEntry e{"dispersion-comparison"};
    double lo = 1e300, hi = 0.0, mis = 0.0;
    for (double u : grid) {
      const double d = std::abs(m.db_scalar(u));
      const double s = m.sigma(u);
      mis = std::max(mis, std::abs(s * s - m.b22(u)) / (1.0 + std::abs(m.b22(u))));
      if (d < 1e-12 && s < 1e-12) continue;
      const double r = s / std::max(d, 1e-300);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    e.pass = lo >= 1.0 - 1e-9 && std::isfinite(hi) && mis <= 1e-10;
    e.stats = {{"ratio_min", lo}, {"ratio_max", hi}, {"sigma_sq_mismatch", mis}};
    rep.entries.push_back(e);
  }

  double Dhat = 0.0;
  {
    // measured mode constants alpha_hat_k = |g_k(0)| + sup|g_k'| + sup|g_k''|
    HypothesisEntry e{"noise-mode-constants"};
    const auto dense = sample_grid(-m.L0, m.L0, 4 * n);
    double amax = 0.0;
    for (int k = 0; k < m.K; ++k) {
      ScalarFn gk = [&, k](double u) { return m.g(k, u); };
      double d1 = 0.0, d2 = 0.0;
      for (double u : dense) {
        d1 = std::max(d1, std::abs(fd1(gk, u, 1e-4)));
        d2 = std::max(d2, std::abs(fd2(gk, u, 1e-4)));
      }
      const double ah = std::abs(gk(0.0)) + d1 + d2;
      Dhat += 4.0 * ah * ah;
      amax = std::max(amax, ah);
    }
    e.pass = m.K == 0 || (std::isfinite(Dhat) && Dhat > 0.0);
    e.stats = {{"D_hat", Dhat}, {"alpha_hat_max", amax}, {"K", static_cast<double>(m.K)}};
    rep.entries.push_back(e);
  }

  {
    HypothesisEntry e{"noise-growth"};
    double r = 0.0;
    for (double u : wide) r = std::max(r, m.G2(u) / (std::max(Dhat, 1e-300) * (1.0 + u * u)));
    e.pass = m.K == 0 || r <= 1.0 + 1e-9;
    e.stats = {{"growth_ratio_max", r}};
    rep.entries.push_back(e);
  }

  {
    HypothesisEntry e{"noise-lipschitz"};
    double l2 = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i)
      for (size_t j = i + 1; j < grid.size(); ++j) {
        double s = 0.0;
        for (int k = 0; k < m.K; ++k) s += sq(m.g(k, grid[i]) - m.g(k, grid[j]));
        l2 = std::max(l2, s / sq(grid[i] - grid[j]));
      }
    e.pass = m.K == 0 || l2 <= Dhat * (1.0 + 1e-9);
    e.stats = {{"lipschitz_sq", l2}, {"D_hat", Dhat}};
    rep.entries.push_back(e);
  }

  {
    HypothesisEntry e{"noise-vanishes-at-range-ends"};
    double r = 0.0;
    for (int k = 0; k < m.K; ++k) r = std::max({r, std::abs(m.g(k, m.u_min)), std::abs(m.g(k, m.u_max))});
    e.pass = r <= 1e-12;
    e.stats = {{"end_value_max", r}};
    rep.entries.push_back(e);
  }

  {
    HypothesisEntry e{"flux-critical-at-range-ends"};
    const double r = std::max({std::abs(m.a1(m.u_min)), std::abs(m.a1(m.u_max)), std::abs(m.a2(m.u_min)),
                               std::abs(m.a2(m.u_max))});
    e.pass = r <= 1e-12;
    e.stats = {{"flux_derivative_max", r}};
    rep.entries.push_back(e);
  }

  {
    HypothesisEntry e{"diffusion-diagonal"};
    e.pass = true;  // single transverse direction: diagonal by construction
    e.detail = "d''=1, scalar diffusion block";
    rep.entries.push_back(e);
  }

  {
    // d Sigma / du == sigma, skipping probes next to kinks of sigma
    HypothesisEntry e{"sigma-primitive-derivative"};
    double lip = 0.0;
    for (double u : wide) lip = std::max(lip, std::abs(fd1(m.sigma, u, 1e-3)));
    double worst = 0.0;
    int checked = 0, skipped = 0;
    const double h = 1e-4;
    for (double u : wide) {
      if (std::abs(fd2(m.sigma, u, 2e-2)) > 10.0 * lip) {
        ++skipped;
        continue;
      }
      const double fd = (m.Sigma(u + h) - m.Sigma(u - h)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - m.sigma(u)));
      ++checked;
    }
    e.pass = checked > 0 && worst <= 1e-8;
    e.stats = {{"max_error", worst}, {"checked", static_cast<double>(checked)}, {"skipped", static_cast<double>(skipped)}};
    rep.entries.push_back(e);
  }

  {
    // |Sigma(u)-Sigma(v)| <= Lambda^{1/2} |b_scalar(u)-b_scalar(v)|
    HypothesisEntry e{"sigma-lipschitz-in-b"};
    double lam_half = 0.0;
    for (const auto& prev : rep.entries)
      if (prev.name == "diffusion-comparison") lam_half = std::sqrt(prev.stats.at("Lambda"));
    double r = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i)
      for (size_t j = i + 1; j < grid.size(); ++j) {
        const double den = std::abs(m.b_scalar(grid[i]) - m.b_scalar(grid[j]));
        if (den < 1e-14) continue;
        r = std::max(r, std::abs(m.Sigma(grid[i]) - m.Sigma(grid[j])) / den);
      }
    e.pass = r <= lam_half * (1.0 + 1e-6) + 1e-9;
    e.stats = {{"ratio_max", r}, {"lambda_sqrt", lam_half}};
    rep.entries.push_back(e);
  }

  return rep;
}

KruzhkovFields kruzhkov_fields(const ModelSpec& m, double u, double v) {
  const double s = u > v ? 1.0 : (u < v ? -1.0 : 0.0);
  const double sp = u > v ? 1.0 : 0.0;
  KruzhkovFields f{};
  f.F1 = s * (m.A1(u) - m.A1(v));
  f.F2 = s * (m.A2(u) - m.A2(v));
  f.Bfield = s * (m.B22(u) - m.B22(v));
  f.F1p = sp * (m.A1(u) - m.A1(v));
  f.F2p = sp * (m.A2(u) - m.A2(v));
  f.Bfieldp = sp * (m.B22(u) - m.B22(v));
  return f;
}

double kruzhkov_gk(const ModelSpec& m, int k, double u, double v) {
  const double s = u > v ? 1.0 : (u < v ? -1.0 : 0.0);
  return s * (m.g(k, u) - m.g(k, v));
}

namespace {

ModelSpec base_model() {
  ModelSpec m;
  m.u_min = 0.0;
  m.u_max = 1.0;
  m.L0 = 2.0;
  m.A2 = [](double) { return 0.0; };
  m.a2 = [](double) { return 0.0; };
  return m;
}

void finish(ModelSpec& m) {
  ScalarFn sig = m.sigma;
  m.Sigma = PrefixTable(sig, m.u_min - 1.0, m.u_max + 1.0, 1024);
}

}  // namespace

ModelSpec make_model(const std::string& name) {
  ModelSpec m = base_model();
  m.name = name;
  if (name == "default-powerlaw") {
    m.A1 = [](double u) { return 0.5 * sq(u) * sq(1.0 - u); };
    m.a1 = [](double u) { return u * (1.0 - u) * (1.0 - 2.0 * u); };
    m.B22 = [](double u) { return u * u * u / 3.0; };
    m.b22 = [](double u) { return u * u; };
    m.sigma = [](double u) { return std::abs(u); };
    m.b_scalar = [](double u) { return (u >= 0 ? 1.0 : -1.0) * 0.5 * u * u; };
    m.db_scalar = [](double u) { return std::abs(u); };
    m.K = 8;
    m.alpha.resize(m.K);
    for (int k = 0; k < m.K; ++k) m.alpha[k] = std::pow(2.0, -(k + 1));
    m.g = [alpha = m.alpha](int k, double u) { return alpha[k] * std::sin(M_PI * u); };
  } else if (name == "linear") {
    // linear transport symbol a(xi) = xi with uniformly positive diffusion
    m.A1 = [](double u) { return 0.5 * u * u; };
    m.a1 = [](double u) { return u; };
    m.B22 = [](double u) { return 0.2 * u; };
    m.b22 = [](double) { return 0.2; };
    m.sigma = [](double) { return std::sqrt(0.2); };
    m.b_scalar = [](double u) { return std::sqrt(0.2) * u; };
    m.db_scalar = [](double) { return std::sqrt(0.2); };
    m.K = 0;
    m.g = [](int, double) { return 0.0; };
  } else if (name == "constant-diffusion") {
    const double c = 0.05;
    m.A1 = [](double) { return 0.0; };
    m.a1 = [](double) { return 0.0; };
    m.B22 = [c](double u) { return c * u; };
    m.b22 = [c](double) { return c; };
    m.sigma = [c](double) { return std::sqrt(c); };
    m.b_scalar = [c](double u) { return std::sqrt(c) * u; };
    m.db_scalar = [c](double) { return std::sqrt(c); };
    m.K = 0;
    m.g = [](int, double) { return 0.0; };
  } else if (name == "degenerate-flat") {
    // diffusion vanishing on [0.3, 0.6], zero flux; fabricated counterexample
    auto b = [](double u) { return sq(std::max(0.3 - u, 0.0)) + sq(std::max(u - 0.6, 0.0)); };
    m.A1 = [](double) { return 0.0; };
    m.a1 = [](double) { return 0.0; };
    m.b22 = b;
    m.B22 = [b](double u) {
      auto cube = [](double s) { return s * s * s / 3.0; };
      double v = 0.0;
      v += cube(0.3) - cube(std::max(0.3 - u, 0.0));            // rising part below 0.3
      v += cube(std::max(u - 0.6, 0.0));                        // rising part above 0.6
      return v;
    };
    m.sigma = [b](double u) { return std::sqrt(b(u)); };
    m.b_scalar = [](double u) {
      auto halfsq = [](double s) { return 0.5 * s * s; };
      return halfsq(0.3) - halfsq(std::max(0.3 - u, 0.0)) + halfsq(std::max(u - 0.6, 0.0));
    };
    m.db_scalar = [b](double u) { return std::sqrt(b(u)); };
    m.K = 0;
    m.g = [](int, double) { return 0.0; };
  } else {
    fail_config("unknown model name: " + name);
  }
  finish(m);
  return m;
}

}  // namespace dph
