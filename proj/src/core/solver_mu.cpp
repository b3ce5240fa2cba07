#include "core/solver_mu.hpp"

#include <cmath>

namespace dph {

using spectral::TensorOp;

namespace {

double hermite(double s) { return (2.0 * s - 3.0) * s * s + 1.0; }
double hermite_d2(double s) { return 12.0 * s - 6.0; }

Mat extension_at(const BoundaryData& bd, const Vec& x1, const Vec& x2, double L2, double t) {
  Mat f(x1.size(), x2.size());
  for (Eigen::Index i = 0; i < x1.size(); ++i) {
    const double lo = bd.lo(t, x1[i]);
    const double hi = bd.hi(t, x1[i]);
    for (Eigen::Index j = 0; j < x2.size(); ++j) {
      const double s = x2[j] / L2;
      f(i, j) = lo * hermite(s) + hi * hermite(1.0 - s);
    }
  }
  return f;
}

bool boundary_data_static(const BoundaryData& bd, double T, double L1) {
  for (double x : {0.13 * L1, 0.57 * L1, 0.91 * L1})
    for (double t : {0.31 * T, 0.78 * T})
      if (bd.lo(t, x) != bd.lo(0.0, x) || bd.hi(t, x) != bd.hi(0.0, x)) return false;
  return true;
}

// coefficients of -A f - df/dt; the extension is cubic in x'', so A f = -eps Laplace f
Mat lift_rhs_coef(const TensorOp& op, const BoundaryData& bd, double t, double T, double eps,
                  bool is_static) {
  const Vec& x1 = op.q1.nodes;
  const Vec& x2 = op.q2.nodes;
  const double L1 = op.b1.L, L2 = op.b2.L;
  const double hx = 1e-4 * L1;
  Mat rhs(x1.size(), x2.size());
  for (Eigen::Index i = 0; i < x1.size(); ++i) {
    const double lo = bd.lo(t, x1[i]);
    const double hi = bd.hi(t, x1[i]);
    const double lo_pp = (bd.lo(t, x1[i] + hx) - 2.0 * lo + bd.lo(t, x1[i] - hx)) / (hx * hx);
    const double hi_pp = (bd.hi(t, x1[i] + hx) - 2.0 * hi + bd.hi(t, x1[i] - hx)) / (hx * hx);
    for (Eigen::Index j = 0; j < x2.size(); ++j) {
      const double s = x2[j] / L2;
      const double d2x2 = (lo * hermite_d2(s) + hi * hermite_d2(1.0 - s)) / (L2 * L2);
      rhs(i, j) = eps * (lo_pp * hermite(s) + hi_pp * hermite(1.0 - s) + d2x2);
    }
  }
  if (!is_static) {
    const double ht = 1e-6 * std::max(1.0, T);
    if (t >= ht)
      rhs -= (extension_at(bd, x1, x2, L2, t + ht) - extension_at(bd, x1, x2, L2, t - ht)) /
             (2.0 * ht);
    else
      rhs -= (extension_at(bd, x1, x2, L2, t + ht) - extension_at(bd, x1, x2, L2, t)) / ht;
  }
  return op.to_coef(rhs);
}

// weak pairings of the nonlinearity against the basis for a full state grid
Mat nonlinear_rhs(const TensorOp& op, const ModelSpec& m, const Mat& u) {
  Mat a1g(u.rows(), u.cols()), a2g(u.rows(), u.cols()), bg(u.rows(), u.cols());
  bool any1 = false, any2 = false;
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      a1g(i, j) = m.A1(u(i, j));
      a2g(i, j) = m.A2(u(i, j));
      bg(i, j) = m.B22(u(i, j));
      any1 |= a1g(i, j) != 0.0;
      any2 |= a2g(i, j) != 0.0;
    }
  Mat out = op.coef_dx2x2_pair(bg);
  if (any1) out += op.coef_dx1_pair(a1g);
  if (any2) out += op.coef_dx2_pair(a2g);
  return out;
}

Mat noise_rhs(const TensorOp& op, const ModelSpec& m, const Mat& u, const NoisePath& np, int n,
              int factor) {
  Mat s = Mat::Zero(u.rows(), u.cols());
  for (int k = 0; k < np.K; ++k) {
    const double db = np.increment(k, n, factor);
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      for (Eigen::Index j = 0; j < u.cols(); ++j) s(i, j) += m.g(k, u(i, j)) * db;
  }
  return op.to_coef(s);
}

struct Ctx {
  const ModelSpec& m;
  const MuParams& p;
  const TensorOp& op;
  const BoundaryData& bd;
  const NoisePath* noise;
  int steps, factor;
  bool is_static;
  Mat decay, fgrid0, lift0;

  Mat fgrid(double t) const {
    if (is_static) return fgrid0;
    return extension_at(bd, op.q1.nodes, op.q2.nodes, op.b2.L, t);
  }
  Mat lift_rhs(double t) const {
    if (is_static) return lift0;
    return lift_rhs_coef(op, bd, t, p.T, p.eps, false);
  }
  Mat step(const Mat& y, const Mat& vgrid, double t, int n) const {
    Mat next = y + p.dt * (lift_rhs(t) + nonlinear_rhs(op, m, vgrid));
    if (noise && noise->K > 0) next += noise_rhs(op, m, vgrid, *noise, n, factor);
    next.array() *= decay.array();
    return next;
  }
};

Ctx make_ctx(const ModelSpec& m, const MuParams& p, const TensorOp& op, const BoundaryData& bd,
             const NoisePath* noise) {
  if (!(p.dt > 0.0) || !(p.T > 0.0)) fail_config("first-stage solver needs positive dt and T");
  const int steps = int(std::llround(p.T / p.dt));
  if (steps < 1 || std::abs(steps * p.dt - p.T) > 1e-9 * std::max(1.0, p.T))
    fail_config("horizon must be a whole number of steps");
  int factor = 1;
  if (noise && noise->K > 0) {
    factor = int(std::llround(p.dt / noise->dt_fine()));
    if (factor < 1 || std::abs(factor * noise->dt_fine() - p.dt) > 1e-12 ||
        steps * factor != noise->n_fine)
      fail_config("noise grid does not refine the solver grid");
  }
  Ctx c{m, p, op, bd, noise, steps, factor, boundary_data_static(bd, p.T, op.b1.L), Mat(), Mat(),
        Mat()};
  c.decay.resize(op.M1(), op.M2());
  for (int j = 0; j < op.M1(); ++j)
    for (int k = 0; k < op.M2(); ++k) c.decay(j, k) = std::exp(-p.dt * op.lam(j, k));
  c.fgrid0 = extension_at(bd, op.q1.nodes, op.q2.nodes, op.b2.L, 0.0);
  if (c.is_static) c.lift0 = lift_rhs_coef(op, bd, 0.0, p.T, p.eps, true);
  return c;
}

// energy-weighted distance between two window paths, damped by rho
double path_dist(const Ctx& c, const std::vector<Mat>& a, const std::vector<Mat>& b, double rho) {
  double cum = 0.0, best = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const Mat d = a[i] - b[i];
    if (i > 0) {
      const Mat dprev = a[i - 1] - b[i - 1];
      cum += c.p.dt * (c.p.eps * c.op.norm_grad_sq(dprev) + c.p.mu * c.op.norm_d2x2_sq(dprev));
    }
    const double n = d.norm() + std::sqrt(std::max(0.0, cum));
    best = std::max(best, std::exp(-rho * double(i) * c.p.dt) * n);
  }
  return best;
}

// one application of the window map: linear part fresh, nonlinearity frozen at v
std::vector<Mat> apply_window_map(const Ctx& c, int n0, const Mat& ya, const std::vector<Mat>& v) {
  std::vector<Mat> out(v.size());
  out[0] = ya;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double t = (n0 + double(i)) * c.p.dt;
    const Mat vgrid = c.op.to_grid(v[i]) + c.fgrid(t);
    out[i + 1] = c.step(out[i], vgrid, t, n0 + int(i));
  }
  return out;
}

std::vector<Mat> window_seed(const Ctx& c, int n0, int nw, const Mat& ya) {
  std::vector<Mat> v(nw + 1);
  v[0] = ya;
  for (int i = 0; i < nw; ++i) {
    const double t = (n0 + double(i)) * c.p.dt;
    Mat next = v[i] + c.p.dt * c.lift_rhs(t);
    next.array() *= c.decay.array();
    v[i + 1] = next;
  }
  return v;
}

double measure_window_gain(const Ctx& c, int nw, const Mat& ya) {
  const std::vector<Mat> base = window_seed(c, 0, nw, ya);
  const std::vector<Mat> kbase = apply_window_map(c, 0, ya, base);
  double worst = 0.0;
  for (int dir = 0; dir < 3; ++dir) {
    Mat bump = Mat::Zero(c.op.M1(), c.op.M2());
    bump(dir % c.op.M1(), dir % c.op.M2()) = 0.1;
    std::vector<Mat> pert = base;
    for (auto& f : pert) f += bump;
    const std::vector<Mat> kpert = apply_window_map(c, 0, ya, pert);
    double denom = 0.0, cum = 0.0;
    for (int i = 0; i <= nw; ++i) {
      if (i > 0)
        cum += c.p.dt * (c.p.eps * c.op.norm_grad_sq(bump) + c.p.mu * c.op.norm_d2x2_sq(bump));
      denom += c.p.dt * (bump.norm() + std::sqrt(cum));
    }
    std::vector<Mat> dk(kbase.size());
    for (size_t i = 0; i < dk.size(); ++i) dk[i] = kpert[i] - kbase[i];
    double cumk = 0.0;
    for (size_t i = 1; i < dk.size(); ++i)
      cumk += c.p.dt * (c.p.eps * c.op.norm_grad_sq(dk[i - 1]) + c.p.mu * c.op.norm_d2x2_sq(dk[i - 1]));
    const double num = dk.back().norm() + std::sqrt(std::max(0.0, cumk));
    if (denom > 0.0) worst = std::max(worst, num / denom);
  }
  return worst;
}

}  // namespace

Mat MuRun::extension_quadgrid(double t) const {
  return extension_at(bd, op->q1.nodes, op->q2.nodes, op->b2.L, t);
}

Mat MuRun::state_quadgrid(int frame) const {
  return op->to_grid(coef[frame]) + extension_quadgrid(times[frame]);
}

Mat MuRun::state_on(const Grid2D& g, int frame) const {
  Vec c1(g.n1), c2(g.n2);
  for (int i = 0; i < g.n1; ++i) c1[i] = g.x1(i);
  for (int j = 0; j < g.n2; ++j) c2[j] = g.x2(j);
  const Mat e1 = spectral::basis_values(op->b1, c1);
  const Mat e2 = spectral::basis_values(op->b2, c2);
  return e1 * coef[frame] * e2.transpose() + extension_at(bd, c1, c2, op->b2.L, times[frame]);
}

Vec MuRun::boundary_profile(int frame, bool right) const {
  Vec v = op->boundary_x1(coef[frame], right);
  const double t = times[frame];
  const double xe = right ? op->b1.L : 0.0;
  const double lo = bd.lo(t, xe), hi = bd.hi(t, xe);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double s = op->q2.nodes[j] / op->b2.L;
    v[j] += lo * hermite(s) + hi * hermite(1.0 - s);
  }
  return v;
}

MuRun run_first_approx(const ModelSpec& m, const MuParams& p, const BoundaryData& bd,
                       const std::function<double(double, double)>& u0, const NoisePath* noise) {
  MuRun run;
  run.p = p;
  run.model = m;
  run.bd = bd;
  run.op = std::make_shared<TensorOp>(spectral::make_tensor_op(
      spectral::make_neumann(p.eps, p.L1, p.modes1), spectral::make_clamped(p.mu, p.eps, p.L2, p.modes2)));
  const TensorOp& op = *run.op;
  Ctx c = make_ctx(m, p, op, bd, noise);
  if (noise && noise->K > 0) run.noise = *noise;

  Mat u0g(op.nq1(), op.nq2());
  for (int i = 0; i < op.nq1(); ++i)
    for (int j = 0; j < op.nq2(); ++j) u0g(i, j) = u0(op.q1.nodes[i], op.q2.nodes[j]);
  Mat y = op.to_coef(u0g - c.fgrid0);

  auto store = [&](int n, const Mat& f) {
    if (n % p.store_stride == 0 || n == c.steps) {
      run.times.push_back(n * p.dt);
      run.coef.push_back(f);
    }
  };
  store(0, y);

  if (p.explicit_mode) {
    for (int n = 0; n < c.steps; ++n) {
      const double t = n * p.dt;
      const Mat vgrid = op.to_grid(y) + c.fgrid(t);
      y = c.step(y, vgrid, t, n);
      store(n + 1, y);
    }
    return run;
  }

  PicardDiag& d = run.diag;
  const int wsteps = std::max(1, int(std::llround(p.window / p.dt)));
  d.rho = p.rho;
  if (p.calibrate_rho) {
    d.cstar = measure_window_gain(c, std::min(wsteps, c.steps), y);
    d.rho = 4.0 * d.cstar;
  }
  for (int n0 = 0; n0 < c.steps; n0 += wsteps) {
    const int nw = std::min(wsteps, c.steps - n0);
    std::vector<Mat> v = window_seed(c, n0, nw, y);
    std::vector<double> res;
    double prev = -1.0;
    bool ok = false;
    for (int it = 0; it < p.picard_max_iter; ++it) {
      std::vector<Mat> next = apply_window_map(c, n0, y, v);
      const double r = path_dist(c, next, v, d.rho);
      res.push_back(r);
      if (prev > 1e-12 && r > 0.0)
        d.contraction_factor = std::max(d.contraction_factor, r / prev);
      prev = r;
      v = std::move(next);
      d.max_iterations = std::max(d.max_iterations, it + 1);
      if (r < p.picard_tol) {
        ok = true;
        break;
      }
    }
    if (!ok) d.converged = false;
    d.final_residual = std::max(d.final_residual, res.empty() ? 0.0 : res.back());
    d.residual_trace = res;
    for (int i = 1; i <= nw; ++i) store(n0 + i, v[i]);
    y = v[nw];
  }
  return run;
}

double recursion_residual(const MuRun& run) {
  if (run.p.store_stride != 1) fail_config("recursion residual needs every step stored");
  const TensorOp& op = *run.op;
  const NoisePath* np = run.noise.K > 0 ? &run.noise : nullptr;
  Ctx c = make_ctx(run.model, run.p, op, run.bd, np);
  double worst = 0.0;
  for (int n = 0; n + 1 < run.frames(); ++n) {
    const double t = run.times[n];
    const Mat vgrid = op.to_grid(run.coef[n]) + c.fgrid(t);
    const Mat pred = c.step(run.coef[n], vgrid, t, n);
    worst = std::max(worst, (pred - run.coef[n + 1]).norm());
  }
  return worst;
}

std::vector<Mat> lift_coefficients(const TensorOp& op, const BoundaryData& bd, const MuParams& p,
                                   std::vector<double>* times_out) {
  ModelSpec dummy;
  Ctx c = make_ctx(dummy, p, op, bd, nullptr);
  Mat z = -op.to_coef(c.fgrid0);
  std::vector<Mat> out;
  if (times_out) times_out->clear();
  auto store = [&](int n, const Mat& f) {
    if (n % p.store_stride == 0 || n == c.steps) {
      out.push_back(f);
      if (times_out) times_out->push_back(n * p.dt);
    }
  };
  store(0, z);
  for (int n = 0; n < c.steps; ++n) {
    z += p.dt * c.lift_rhs(n * p.dt);
    z.array() *= c.decay.array();
    store(n + 1, z);
  }
  return out;
}

std::vector<Mat> boundary_flux_response(const TensorOp& op, const ModelSpec& m, const MuParams& p,
                                        const std::function<Vec(double, bool)>& side_profile,
                                        std::vector<double>* times_out) {
  const int steps = int(std::llround(p.T / p.dt));
  if (steps < 1 || std::abs(steps * p.dt - p.T) > 1e-9 * std::max(1.0, p.T))
    fail_config("horizon must be a whole number of steps");
  Mat decay(op.M1(), op.M2());
  for (int j = 0; j < op.M1(); ++j)
    for (int k = 0; k < op.M2(); ++k) decay(j, k) = std::exp(-p.dt * op.lam(j, k));
  Mat w = Mat::Zero(op.M1(), op.M2());
  std::vector<Mat> out;
  if (times_out) times_out->clear();
  auto store = [&](int n, const Mat& f) {
    if (n % p.store_stride == 0 || n == steps) {
      out.push_back(f);
      if (times_out) times_out->push_back(n * p.dt);
    }
  };
  store(0, w);
  for (int n = 0; n < steps; ++n) {
    const double t = n * p.dt;
    Vec al = side_profile(t, false), ar = side_profile(t, true);
    for (Eigen::Index j = 0; j < al.size(); ++j) {
      al[j] = m.A1(al[j]);
      ar[j] = m.A1(ar[j]);
    }
    const Mat f = op.e1_right * (op.P2 * ar).transpose() - op.e1_left * (op.P2 * al).transpose();
    w += p.dt * f;
    w.array() *= decay.array();
    store(n + 1, w);
  }
  return out;
}

EnergyReport relative_energy_report(const MuRun& a, const MuRun& b) {
  if (a.p.store_stride != 1 || b.p.store_stride != 1)
    fail_config("energy balance needs every step stored");
  if (a.frames() != b.frames()) fail_config("energy balance needs matching trajectories");
  if (a.noise.K != b.noise.K || (a.noise.K > 0 && a.noise.seed != b.noise.seed))
    fail_config("energy balance needs a shared driving path");
  const TensorOp& op = *a.op;
  const double dt = a.p.dt;
  const int factor = a.noise.K > 0 ? int(std::llround(dt / a.noise.dt_fine())) : 1;
  EnergyReport r;
  {
    const Mat z0 = a.coef.front() - b.coef.front();
    const Mat zT = a.coef.back() - b.coef.back();
    r.initial = 0.5 * z0.squaredNorm();
    r.final_half = 0.5 * zT.squaredNorm();
  }
  const int n1 = op.nq1(), n2 = op.nq2();
  Mat absorb(op.M1(), op.M2());
  for (int j = 0; j < op.M1(); ++j)
    for (int k = 0; k < op.M2(); ++k) absorb(j, k) = 1.0 - std::exp(-2.0 * dt * op.lam(j, k));
  for (int n = 0; n + 1 < a.frames(); ++n) {
    const Mat z = a.coef[n] - b.coef[n];
    const Mat ug = a.state_quadgrid(n), vg = b.state_quadgrid(n);
    Mat da1(n1, n2), da2(n1, n2), db(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        da1(i, j) = a.model.A1(ug(i, j)) - a.model.A1(vg(i, j));
        da2(i, j) = a.model.A2(ug(i, j)) - a.model.A2(vg(i, j));
        db(i, j) = a.model.B22(ug(i, j)) - a.model.B22(vg(i, j));
      }
    const Mat dflux = op.coef_dx1_pair(da1) + op.coef_dx2_pair(da2);
    const Mat ddiff = op.coef_dx2x2_pair(db);
    r.flux_work += dt * (z.array() * dflux.array()).sum();
    r.diffusion_work += dt * (z.array() * ddiff.array()).sum();
    Mat dm = Mat::Zero(op.M1(), op.M2());
    if (a.noise.K > 0) {
      Mat dg(n1, n2);
      Mat dgsum = Mat::Zero(n1, n2);
      for (int k = 0; k < a.noise.K; ++k) {
        const double inc = a.noise.increment(k, n, factor);
        for (int i = 0; i < n1; ++i)
          for (int j = 0; j < n2; ++j) {
            dg(i, j) = a.model.g(k, ug(i, j)) - a.model.g(k, vg(i, j));
            dgsum(i, j) += dg(i, j) * inc;
          }
      }
      dm = op.to_coef(dgsum);
      r.martingale += (z.array() * dm.array()).sum();
      r.correction += 0.5 * dm.squaredNorm();
    }
    // the semigroup absorbs energy from the post-increment state exactly
    const Mat w = z + dt * (dflux + ddiff) + dm;
    r.dissipation += 0.5 * (absorb.array() * w.array().square()).sum();
  }
  const double balance =
      r.final_half - r.initial + r.dissipation - r.flux_work - r.diffusion_work - r.martingale;
  r.defect = std::abs(balance - r.correction);
  r.defect_without_correction = std::abs(balance);
  return r;
}

}  // namespace dph
