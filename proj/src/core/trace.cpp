#include "core/trace.hpp"

#include <cmath>

#include "core/quad.hpp"

namespace dph {

TraceSampler::TraceSampler(const Grid2D& g, TraceProbe probe) : grid_(g), probe_(std::move(probe)) {
  if (probe_.s_list.empty()) fail_config("layer sampler needs at least one offset");
  if (!probe_.weight) probe_.weight = [](double) { return 1.0; };
  const double h1 = grid_.h1();
  for (double s : probe_.s_list) {
    for (int j = 0; j < grid_.n2; ++j) {
      const double off = s * probe_.weight(grid_.x2(j));
      if (off < 2.0 * h1)
        fail_config("layer offset under two cells; refine the grid or move the layer");
      if (off > 0.5 * grid_.L1) fail_config("layer offset beyond the half width");
    }
  }
  if (probe_.xi_samples < 3) fail_config("indicator profile needs at least three samples");
  pair_acc_ = Mat::Zero(layers(), layers());
  chi_acc_ = Mat::Zero(layers(), probe_.xi_samples);
}

Vec TraceSampler::xi_grid() const {
  Vec xi(probe_.xi_samples);
  for (int q = 0; q < probe_.xi_samples; ++q)
    xi[q] = probe_.xi_lo +
            (probe_.xi_hi - probe_.xi_lo) * (q + 0.5) / probe_.xi_samples;
  return xi;
}

Vec TraceSampler::sample_layer(const Mat& u, int layer) const {
  const double h1 = grid_.h1();
  Vec out(grid_.n2);
  for (int j = 0; j < grid_.n2; ++j) {
    double off = probe_.s_list[layer] * probe_.weight(grid_.x2(j));
    double x = probe_.right_side ? grid_.L1 - off : off;
    double pos = x / h1 - 0.5;
    int i0 = int(std::floor(pos));
    i0 = std::max(0, std::min(grid_.n1 - 2, i0));
    const double w = pos - i0;
    out[j] = (1.0 - w) * u(i0, j) + w * u(i0 + 1, j);
  }
  return out;
}

StepObserver TraceSampler::observer() {
  return [this](const StepView& v) {
    std::vector<Vec> prof(layers());
    for (int a = 0; a < layers(); ++a) prof[a] = sample_layer(v.u, a);
    const double h2 = grid_.h2();
    for (int a = 0; a < layers(); ++a)
      for (int b = a + 1; b < layers(); ++b) {
        const double d = (prof[a] - prof[b]).cwiseAbs().sum() * h2;
        pair_acc_(a, b) += d * v.dt;
        pair_acc_(b, a) += d * v.dt;
      }
    const Vec xi = xi_grid();
    for (int a = 0; a < layers(); ++a)
      for (int q = 0; q < probe_.xi_samples; ++q) {
        double s = 0.0;
        for (int j = 0; j < grid_.n2; ++j) {
          const double u = prof[a][j];
          s += (xi[q] > 0.0 && xi[q] < u) ? 1.0 : ((u < xi[q] && xi[q] < 0.0) ? -1.0 : 0.0);
        }
        chi_acc_(a, q) += s / grid_.n2 * v.dt;
      }
    time_acc_ += v.dt;
  };
}

double TraceSampler::distance(int a, int b) const {
  if (time_acc_ <= 0.0) fail_config("layer sampler saw no steps");
  return pair_acc_(a, b) / time_acc_;
}

Vec TraceSampler::chi_profile(int a) const {
  if (time_acc_ <= 0.0) fail_config("layer sampler saw no steps");
  return chi_acc_.row(a).transpose() / time_acc_;
}

double coarea_layer_sum(const Grid2D& g, double delta) {
  if (!(delta > 0.0) || delta > 0.5 * g.L2) fail_config("layer width must sit inside the domain");
  double total = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    const double lo = j * g.h2(), hi = lo + g.h2();
    // |grad zeta| = 1/delta on the two wall slabs of width delta
    double len = std::max(0.0, std::min(hi, delta) - lo);
    len += std::max(0.0, hi - std::max(lo, g.L2 - delta));
    total += g.n1 * g.h1() * len / delta;
  }
  return total;
}

GaussGreenParts gauss_green_parts(const std::function<double(double, double)>& f1,
                                  const std::function<double(double, double)>& f2,
                                  const std::function<double(double, double)>& divf,
                                  const std::function<double(double, double)>& g,
                                  const std::function<double(double, double)>& gx,
                                  const std::function<double(double, double)>& gy, double Lx,
                                  double Ly, int n) {
  if (n < 1) fail_config("divergence check needs at least one cell");
  const quad::Rule r = quad::gauss_legendre(4, 0.0, 1.0);
  GaussGreenParts parts;
  const double hx = Lx / n, hy = Ly / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (Eigen::Index a = 0; a < r.nodes.size(); ++a)
        for (Eigen::Index b = 0; b < r.nodes.size(); ++b) {
          const double x = (i + r.nodes[a]) * hx;
          const double y = (j + r.nodes[b]) * hy;
          const double w = r.weights[a] * r.weights[b] * hx * hy;
          parts.volume_grad += w * (f1(x, y) * gx(x, y) + f2(x, y) * gy(x, y));
          parts.volume_div += w * g(x, y) * divf(x, y);
        }
  for (int i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < r.nodes.size(); ++a) {
      const double wx = r.weights[a] * hx;
      const double x = (i + r.nodes[a]) * hx;
      parts.trace += wx * (g(x, Ly) * f2(x, Ly) - g(x, 0.0) * f2(x, 0.0));
      const double wy = r.weights[a] * hy;
      const double y = (i + r.nodes[a]) * hy;
      parts.trace += wy * (g(Lx, y) * f1(Lx, y) - g(0.0, y) * f1(0.0, y));
    }
  return parts;
}

namespace {
// layer profile of the scalar diffusion primitive at a given wall depth
Vec primitive_profile(const ModelSpec& m, const Mat& u, const Grid2D& g, double depth, bool top) {
  const double h2 = g.h2();
  const double x = top ? g.L2 - depth : depth;
  double pos = x / h2 - 0.5;
  int j0 = int(std::floor(pos));
  j0 = std::max(0, std::min(g.n2 - 2, j0));
  const double w = pos - j0;
  Vec out(g.n1);
  for (int i = 0; i < g.n1; ++i) {
    const double val = (1.0 - w) * u(i, j0) + w * u(i, j0 + 1);
    out[i] = m.b_scalar(val);
  }
  return out;
}
}  // namespace

double dirichlet_trace_gap(const ModelSpec& m, const FvPath& path, const BoundaryData& bd,
                           bool top) {
  const Grid2D& g = path.grid;
  if (g.n2 < 8) fail_config("wall extrapolation needs at least eight cells across");
  const double h2 = g.h2();
  double acc = 0.0, time = 0.0;
  for (size_t f = 0; f < path.frames.size(); ++f) {
    const double w =
        f + 1 < path.times.size() ? path.times[f + 1] - path.times[f] : 0.0;
    if (w <= 0.0) continue;
    const Vec near = primitive_profile(m, path.frames[f], g, 2.0 * h2, top);
    const Vec far = primitive_profile(m, path.frames[f], g, 4.0 * h2, top);
    double l2 = 0.0;
    for (int i = 0; i < g.n1; ++i) {
      const double target =
          m.b_scalar(top ? bd.hi(path.times[f], g.x1(i)) : bd.lo(path.times[f], g.x1(i)));
      l2 += sq(2.0 * near[i] - far[i] - target) * g.h1();
    }
    acc += l2 * w;
    time += w;
  }
  if (time <= 0.0) fail_config("wall extrapolation saw no frames");
  return std::sqrt(acc / time);
}

DirichletFormProbe::DirichletFormProbe(const ModelSpec& m, double eps, const Grid2D& g,
                                       double horizon, double delta, double z_center,
                                       double z_radius, double scale) {
  if (!(delta > 0.0) || delta > 0.5 * g.L2) fail_config("layer width must sit inside the domain");
  SeparableTest t = make_separable_test(g.L1, g.L2, horizon, z_center, z_radius);
  const double L2 = g.L2;
  t.Y = [delta, L2, scale](double y) {
    return scale * std::min(delta, std::min(y, L2 - y)) / delta;
  };
  t.Yp = [delta, L2, scale](double y) {
    if (y < delta) return scale / delta;
    if (y > L2 - delta) return -scale / delta;
    return 0.0;
  };
  t.Ypp = [](double) { return 0.0; };
  asm_ = std::make_shared<KineticAssembler>(m, eps, g, horizon, std::vector<SeparableTest>{t},
                                            true);
  // L2 norm of the non-layer factor over time, x', and velocity
  auto sqfn = [](const std::function<double(double)>& f, double a, double b) {
    return quad::simpson([&](double x) { return f(x) * f(x); }, a, b, 512);
  };
  norm_ = scale * std::sqrt(sqfn(t.T, 0.0, horizon) * sqfn(t.X, 0.0, g.L1) *
                            sqfn(t.Z, t.z_lo, t.z_hi));
}

double DirichletFormProbe::ratio() const {
  if (norm_ <= 0.0) fail_config("degenerate test norm");
  return std::max(0.0, -form_value()) / norm_;
}

std::vector<double> boundary_flux_series(const ModelSpec& m, const FvPath& path,
                                         const BoundaryData& bd, double delta) {
  const Grid2D& g = path.grid;
  if (!(delta > 0.0) || delta > 0.5 * g.L2) fail_config("layer width must sit inside the domain");
  std::vector<double> out;
  const double h2 = g.h2();
  for (size_t f = 0; f < path.frames.size(); ++f) {
    const Mat& u = path.frames[f];
    Mat bf(g.n1, g.n2);
    for (int i = 0; i < g.n1; ++i) {
      const double lo = bd.lo(path.times[f], g.x1(i));
      const double hi = bd.hi(path.times[f], g.x1(i));
      for (int j = 0; j < g.n2; ++j) {
        const double ub = g.x2(j) < 0.5 * g.L2 ? lo : hi;
        const auto kf = kruzhkov_fields(m, u(i, j), ub);
        bf(i, j) = kf.Bfield;
      }
    }
    double s = 0.0;
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        const double y = g.x2(j);
        double grad = 0.0;
        if (y < delta) grad = 1.0 / delta;
        if (y > g.L2 - delta) grad = -1.0 / delta;
        if (grad == 0.0) continue;
        const double lo = bd.lo(path.times[f], g.x1(i));
        const double hi = bd.hi(path.times[f], g.x1(i));
        const double ub = y < 0.5 * g.L2 ? lo : hi;
        const auto kf = kruzhkov_fields(m, u(i, j), ub);
        s += (grad2_at(bf, i, j, h2) - kf.F2) * grad * g.vol();
      }
    out.push_back(s);
  }
  return out;
}

}  // namespace dph
