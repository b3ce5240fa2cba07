#include "core/solver_eps.hpp"

#include <algorithm>
#include <cmath>

namespace dph {
namespace {

double harmonic(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

// advective face flux for one direction
struct DirFlux {
  ScalarFn A, a;
  bool active = false;
  bool upwind = false;
  double base = 0.0;
  PrefixTable pos, neg;

  double speed(double ul, double ur) const {
    const double lo = std::min(ul, ur), span = std::abs(ur - ul);
    double s = 0.0;
    for (int q = 0; q < 5; ++q) s = std::max(s, std::abs(a(lo + span * q / 4.0)));
    return s;
  }
  double operator()(double ul, double ur) const {
    if (!active) return 0.0;
    if (upwind) return base + pos(ul) + neg(ur);
    return 0.5 * (A(ul) + A(ur)) - 0.5 * speed(ul, ur) * (ur - ul);
  }
};

DirFlux make_dir_flux(const ModelSpec& m, bool second, bool upwind) {
  DirFlux f;
  f.A = second ? m.A2 : m.A1;
  f.a = second ? m.a2 : m.a1;
  f.upwind = upwind;
  const double lo = m.u_min - 2.0, hi = m.u_max + 2.0;
  for (int i = 0; i <= 64; ++i) {
    const double u = lo + (hi - lo) * i / 64.0;
    if (std::abs(f.A(u)) > 0.0 || std::abs(f.a(u)) > 0.0) f.active = true;
  }
  if (f.active && upwind) {
    ScalarFn a = f.a;
    f.base = f.A(lo);
    f.pos = PrefixTable([a](double u) { return std::max(a(u), 0.0); }, lo, hi, 4096);
    f.neg = PrefixTable([a](double u) { return std::min(a(u), 0.0); }, lo, hi, 4096);
  }
  return f;
}

void thomas_solve(Vec& diag, Vec& lower, Vec& upper, Vec& rhs) {
  const int n = int(diag.size());
  for (int j = 1; j < n; ++j) {
    const double w = lower[j] / diag[j - 1];
    diag[j] -= w * upper[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int j = n - 2; j >= 0; --j) rhs[j] = (rhs[j] - upper[j] * rhs[j + 1]) / diag[j];
}

}  // namespace

double stability_sum(const ModelSpec& m, const SchemeParams& p) {
  if (p.n1 < 2 || p.n2 < 2) fail_config("grid needs at least two cells per direction");
  const double h1 = p.L1 / p.n1, h2 = p.L2 / p.n2;
  double a1m = 0.0, a2m = 0.0, bm = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const double u = m.u_min - 0.1 + (m.u_max - m.u_min + 0.2) * i / 512.0;
    a1m = std::max(a1m, std::abs(m.a1(u)));
    a2m = std::max(a2m, std::abs(m.a2(u)));
    bm = std::max(bm, m.b22(u));
  }
  double s = a1m / h1 + a2m / h2 + 2.0 * p.eps / (h1 * h1);
  if (!p.implicit_x2) s += 2.0 * (bm + p.eps) / (h2 * h2);
  return s;
}

EpsRunResult run_second_approx(const ModelSpec& m, const SchemeParams& p, const BoundaryData& bd,
                               const std::function<double(double, double)>& u0,
                               const NoisePath* noise,
                               const std::vector<StepObserver>& observers) {
  const Grid2D grid{p.n1, p.n2, p.L1, p.L2};
  const double h1 = grid.h1(), h2 = grid.h2(), vol = grid.vol();
  const double S = stability_sum(m, p);
  if (!(p.T > 0.0)) fail_config("second-stage solver needs a positive horizon");

  double dt = p.dt;
  int steps = 0, factor = 1;
  const bool with_noise = noise && noise->K > 0;
  if (with_noise && std::abs(noise->T - p.T) > 1e-9 * std::max(1.0, p.T))
    fail_config("noise horizon does not match the run horizon");
  if (dt > 0.0) {
    steps = int(std::llround(p.T / dt));
    if (steps < 1 || std::abs(steps * dt - p.T) > 1e-9 * std::max(1.0, p.T))
      fail_config("horizon must be a whole number of steps");
    if (with_noise) {
      factor = int(std::llround(dt / noise->dt_fine()));
      if (factor < 1 || steps * factor != noise->n_fine)
        fail_config("noise grid does not refine the solver grid");
    }
  } else {
    const double prop = p.cfl_fraction * 0.9 / S;
    if (with_noise) {
      factor = std::max(1, int(std::floor(prop / noise->dt_fine() + 1e-12)));
      while (noise->n_fine % factor != 0) --factor;
      steps = noise->n_fine / factor;
      dt = p.T / steps;
    } else {
      steps = std::max(1, int(std::ceil(p.T / prop - 1e-12)));
      dt = p.T / steps;
    }
  }
  if (dt * S > 0.9 + 1e-9) fail_config("time step violates the stability budget");

  const DirFlux f1 = make_dir_flux(m, false, p.flux == "upwind");
  const DirFlux f2 = make_dir_flux(m, true, p.flux == "upwind");
  if (p.flux != "rusanov" && p.flux != "upwind") fail_config("unknown flux splitting: " + p.flux);

  EpsRunResult res;
  res.dt = dt;
  res.steps = steps;
  res.cfl = dt * S;
  res.path.grid = grid;

  Mat u = sample_on_grid(grid, u0);
  Mat unext(p.n1, p.n2);
  Mat fx1(p.n1 + 1, p.n2), fx2(p.n1, p.n2 + 1);
  std::vector<double> dbeta(with_noise ? noise->K : 0);

  auto track_overshoot = [&](const Mat& w) {
    res.overshoot_high = std::max(res.overshoot_high, w.maxCoeff() - m.u_max);
    res.overshoot_low = std::max(res.overshoot_low, m.u_min - w.minCoeff());
  };
  track_overshoot(u);
  res.overshoot_high = std::max(res.overshoot_high, 0.0);
  res.overshoot_low = std::max(res.overshoot_low, 0.0);

  auto store = [&](int n, const Mat& w) {
    if (n % p.store_stride == 0 || n == steps) {
      res.path.times.push_back(n * dt);
      res.path.frames.push_back(w);
    }
  };
  store(0, u);

  Vec diag(p.n2), lower(p.n2), upper(p.n2), rhs(p.n2);

  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;

    // zero-total-flux sides: the wall faces carry nothing, advective or viscous
    for (int j = 0; j < p.n2; ++j) {
      fx1(0, j) = 0.0;
      fx1(p.n1, j) = 0.0;
      for (int i = 1; i < p.n1; ++i)
        fx1(i, j) = f1(u(i - 1, j), u(i, j)) - p.eps * (u(i, j) - u(i - 1, j)) / h1;
    }

    for (int i = 0; i < p.n1; ++i) {
      const double glo = 2.0 * bd.lo(t, grid.x1(i)) - u(i, 0);
      const double ghi = 2.0 * bd.hi(t, grid.x1(i)) - u(i, p.n2 - 1);
      fx2(i, 0) = f2(glo, u(i, 0));
      fx2(i, p.n2) = f2(u(i, p.n2 - 1), ghi);
      for (int j = 1; j < p.n2; ++j) fx2(i, j) = f2(u(i, j - 1), u(i, j));
      if (!p.implicit_x2) {
        fx2(i, 0) -= (p.eps + harmonic(m.b22(glo), m.b22(u(i, 0)))) * (u(i, 0) - glo) / h2;
        fx2(i, p.n2) -=
            (p.eps + harmonic(m.b22(u(i, p.n2 - 1)), m.b22(ghi))) * (ghi - u(i, p.n2 - 1)) / h2;
        for (int j = 1; j < p.n2; ++j)
          fx2(i, j) -=
              (p.eps + harmonic(m.b22(u(i, j - 1)), m.b22(u(i, j)))) * (u(i, j) - u(i, j - 1)) / h2;
      }
    }

    for (int i = 0; i < p.n1; ++i)
      for (int j = 0; j < p.n2; ++j)
        unext(i, j) = u(i, j) - dt / h1 * (fx1(i + 1, j) - fx1(i, j)) -
                      dt / h2 * (fx2(i, j + 1) - fx2(i, j));

    if (p.implicit_x2) {
      for (int i = 0; i < p.n1; ++i) {
        const double glo = 2.0 * bd.lo(t, grid.x1(i)) - u(i, 0);
        const double ghi = 2.0 * bd.hi(t, grid.x1(i)) - u(i, p.n2 - 1);
        const double clo = (p.eps + harmonic(m.b22(glo), m.b22(u(i, 0)))) / (h2 * h2);
        const double chi = (p.eps + harmonic(m.b22(u(i, p.n2 - 1)), m.b22(ghi))) / (h2 * h2);
        for (int j = 0; j < p.n2; ++j) {
          const double cl =
              j == 0 ? 0.0
                     : (p.eps + harmonic(m.b22(u(i, j - 1)), m.b22(u(i, j)))) / (h2 * h2);
          const double cr =
              j == p.n2 - 1 ? 0.0
                            : (p.eps + harmonic(m.b22(u(i, j)), m.b22(u(i, j + 1)))) / (h2 * h2);
          lower[j] = -dt * cl;
          upper[j] = -dt * cr;
          diag[j] = 1.0 + dt * (cl + cr);
          rhs[j] = unext(i, j);
        }
        // reflected data ghosts couple back to the first and last unknowns
        diag[0] += dt * 2.0 * clo;
        rhs[0] += dt * 2.0 * clo * bd.lo(t, grid.x1(i));
        diag[p.n2 - 1] += dt * 2.0 * chi;
        rhs[p.n2 - 1] += dt * 2.0 * chi * bd.hi(t, grid.x1(i));
        thomas_solve(diag, lower, upper, rhs);
        for (int j = 0; j < p.n2; ++j) unext(i, j) = rhs[j];
        // applied diffusive fluxes, for the budget ledger
        fx2(i, 0) -= 2.0 * clo * h2 * (unext(i, 0) - bd.lo(t, grid.x1(i)));
        fx2(i, p.n2) -= 2.0 * chi * h2 * (bd.hi(t, grid.x1(i)) - unext(i, p.n2 - 1));
        for (int j = 1; j < p.n2; ++j)
          fx2(i, j) -= (p.eps + harmonic(m.b22(u(i, j - 1)), m.b22(u(i, j)))) *
                       (unext(i, j) - unext(i, j - 1)) / h2;
      }
    }

    double noise_sum = 0.0;
    if (with_noise) {
      for (int k = 0; k < noise->K; ++k) dbeta[k] = noise->increment(k, n, factor);
      for (int i = 0; i < p.n1; ++i)
        for (int j = 0; j < p.n2; ++j) {
          double add = 0.0;
          for (int k = 0; k < noise->K; ++k) add += m.g(k, u(i, j)) * dbeta[k];
          unext(i, j) += add;
          noise_sum += add;
        }
    }

    double bflux = 0.0;
    for (int j = 0; j < p.n2; ++j) bflux += h2 * (fx1(p.n1, j) - fx1(0, j));
    for (int i = 0; i < p.n1; ++i) bflux += h1 * (fx2(i, p.n2) - fx2(i, 0));
    const double defect =
        std::abs((unext.sum() - u.sum()) * vol + dt * bflux - noise_sum * vol);
    res.mass_defect = std::max(res.mass_defect, defect);

    track_overshoot(unext);
    if (!observers.empty()) {
      StepView view{n, t, dt, grid, u, unext, dbeta.empty() ? nullptr : dbeta.data(),
                    with_noise ? noise->K : 0};
      for (const auto& ob : observers) ob(view);
    }
    u.swap(unext);
    store(n + 1, u);
  }
  require_finite(u(0, 0), "second-stage solver", p.T);
  return res;
}

}  // namespace dph
