#include "core/kinetic.hpp"

#include <cmath>

namespace dph {

double bump_c4(double s) {
  const double w = 1.0 - s * s;
  if (w <= 0.0) return 0.0;
  return w * w * w * w;
}

double bump_c4_d1(double s) {
  const double w = 1.0 - s * s;
  if (w <= 0.0) return 0.0;
  return -8.0 * s * w * w * w;
}

double bump_c4_d2(double s) {
  const double w = 1.0 - s * s;
  if (w <= 0.0) return 0.0;
  return (-8.0 * w + 48.0 * s * s) * w * w;
}

namespace {
std::function<double(double)> scaled(double c, double r, double (*f)(double), double pw) {
  return [=](double x) { return f((x - c) / r) * pw; };
}
}  // namespace

SeparableTest make_separable_test(double L1, double L2, double horizon, double z_center,
                                  double z_radius) {
  SeparableTest t;
  const double rt = 0.95 * horizon;
  t.T = scaled(0.0, rt, bump_c4, 1.0);
  t.Tp = scaled(0.0, rt, bump_c4_d1, 1.0 / rt);
  const double cx = 0.5 * L1, rx = 0.4 * L1;
  t.X = scaled(cx, rx, bump_c4, 1.0);
  t.Xp = scaled(cx, rx, bump_c4_d1, 1.0 / rx);
  t.Xpp = scaled(cx, rx, bump_c4_d2, 1.0 / (rx * rx));
  const double cy = 0.5 * L2, ry = 0.4 * L2;
  t.Y = scaled(cy, ry, bump_c4, 1.0);
  t.Yp = scaled(cy, ry, bump_c4_d1, 1.0 / ry);
  t.Ypp = scaled(cy, ry, bump_c4_d2, 1.0 / (ry * ry));
  t.Z = scaled(z_center, z_radius, bump_c4, 1.0);
  t.Zp = scaled(z_center, z_radius, bump_c4_d1, 1.0 / z_radius);
  t.z_lo = z_center - z_radius;
  t.z_hi = z_center + z_radius;
  return t;
}

double grad1_at(const Mat& u, int i, int j, double h1) {
  const int n1 = int(u.rows());
  if (i == 0) return (u(1, j) - u(0, j)) / h1;
  if (i == n1 - 1) return (u(n1 - 1, j) - u(n1 - 2, j)) / h1;
  return (u(i + 1, j) - u(i - 1, j)) / (2.0 * h1);
}

double grad2_at(const Mat& u, int i, int j, double h2) {
  const int n2 = int(u.cols());
  if (j == 0) return (u(i, 1) - u(i, 0)) / h2;
  if (j == n2 - 1) return (u(i, n2 - 1) - u(i, n2 - 2)) / h2;
  return (u(i, j + 1) - u(i, j - 1)) / (2.0 * h2);
}

KineticAssembler::KineticAssembler(const ModelSpec& m, double eps, const Grid2D& g, double horizon,
                                   std::vector<SeparableTest> tests, bool with_measure)
    : model_(m), eps_(eps), horizon_(horizon), grid_(g), with_measure_(with_measure) {
  if (tests.empty()) fail_config("residual assembly needs at least one test function");
  const double lo = std::min(0.0, m.u_min) - 1.0;
  const double hi = std::max(0.0, m.u_max) + 1.0;
  for (auto& fn : tests) {
    PerTest pt;
    pt.fn = fn;
    auto Z = fn.Z;
    auto a1 = m.a1, a2 = m.a2, b22 = m.b22;
    const double ee = eps;
    pt.iz = PrefixTable(Z, lo, hi, 8192);
    pt.ia1z = PrefixTable([Z, a1](double u) { return a1(u) * Z(u); }, lo, hi, 8192);
    pt.ia2z = PrefixTable([Z, a2](double u) { return a2(u) * Z(u); }, lo, hi, 8192);
    pt.ibez = PrefixTable([Z, b22, ee](double u) { return (b22(u) + ee) * Z(u); }, lo, hi, 8192);
    pt.z_at_zero = pt.iz(0.0);
    pt.a1z_at_zero = pt.ia1z(0.0);
    pt.a2z_at_zero = pt.ia2z(0.0);
    pt.bez_at_zero = pt.ibez(0.0);
    pt.x.resize(g.n1);
    pt.xp.resize(g.n1);
    pt.xpp.resize(g.n1);
    for (int i = 0; i < g.n1; ++i) {
      pt.x[i] = fn.X(g.x1(i));
      pt.xp[i] = fn.Xp(g.x1(i));
      pt.xpp[i] = fn.Xpp(g.x1(i));
    }
    pt.y.resize(g.n2);
    pt.yp.resize(g.n2);
    pt.ypp.resize(g.n2);
    for (int j = 0; j < g.n2; ++j) {
      pt.y[j] = fn.Y(g.x2(j));
      pt.yp[j] = fn.Yp(g.x2(j));
      pt.ypp[j] = fn.Ypp(g.x2(j));
    }
    tests_.push_back(std::move(pt));
  }
}

void KineticAssembler::ingest(const StepView& v) {
  const Mat& u = v.u;
  const double vol = grid_.vol();
  const double h1 = grid_.h1(), h2 = grid_.h2();
  for (auto& pt : tests_) {
    const double tf = pt.fn.T(v.t);
    const double tfp = pt.fn.Tp(v.t);
    double sum = 0.0;
    for (int i = 0; i < grid_.n1; ++i) {
      const double X = pt.x[i], Xp = pt.xp[i], Xpp = pt.xpp[i];
      if (X == 0.0 && Xp == 0.0 && Xpp == 0.0) continue;
      for (int j = 0; j < grid_.n2; ++j) {
        const double Y = pt.y[j], Yp = pt.yp[j], Ypp = pt.ypp[j];
        const double w = u(i, j);
        double cell = 0.0;
        cell += tfp * X * Y * (pt.iz(w) - pt.z_at_zero);
        cell += tf * Xp * Y * (pt.ia1z(w) - pt.a1z_at_zero);
        cell += tf * X * Yp * (pt.ia2z(w) - pt.a2z_at_zero);
        cell += tf * X * Ypp * (pt.ibez(w) - pt.bez_at_zero);
        cell += tf * Xpp * Y * eps_ * (pt.iz(w) - pt.z_at_zero);
        if (with_measure_) {
          const double g1 = grad1_at(u, i, j, h1);
          const double g2 = grad2_at(u, i, j, h2);
          const double dens = (model_.b22(w) + eps_) * g2 * g2 + eps_ * g1 * g1;
          cell -= tf * X * Y * pt.fn.Zp(w) * dens;
        }
        sum += cell * v.dt;
        if (v.K > 0) {
          // Ito term in bracket form: the step's own quadratic variation
          double gs = 0.0;
          for (int k = 0; k < v.K; ++k) gs += model_.g(k, w) * v.dbeta[k];
          sum += tf * X * Y * (pt.fn.Z(w) * gs + 0.5 * pt.fn.Zp(w) * gs * gs);
        }
        if (v.n == 0) sum += pt.fn.T(0.0) * X * Y * (pt.iz(w) - pt.z_at_zero);
      }
    }
    pt.acc += sum * vol;
  }
}

StepObserver KineticAssembler::observer() {
  return [this](const StepView& v) { ingest(v); };
}

std::vector<double> KineticAssembler::totals() const {
  std::vector<double> out;
  for (const auto& pt : tests_) out.push_back(pt.acc);
  return out;
}

MeasureAccumulator::MeasureAccumulator(const ModelSpec& m, double eps, const Grid2D& g,
                                       double horizon, int bins, int slabs)
    : model_(m), eps_(eps), grid_(g) {
  if (bins < 1 || slabs < 1) fail_config("histogram needs positive bin and slab counts");
  out_.xi_lo = m.u_min - 0.05;
  out_.xi_hi = m.u_max + 0.05;
  out_.bins = bins;
  out_.slabs = slabs;
  out_.horizon = horizon;
  out_.m_mass = Mat::Zero(slabs, bins);
  out_.n1_mass = Mat::Zero(slabs, bins);
}

StepObserver MeasureAccumulator::observer() {
  return [this](const StepView& v) {
    const double vol = grid_.vol();
    const double h1 = grid_.h1(), h2 = grid_.h2();
    int slab = int(v.t / out_.horizon * out_.slabs);
    slab = std::min(std::max(slab, 0), out_.slabs - 1);
    const double width = (out_.xi_hi - out_.xi_lo) / out_.bins;
    for (int i = 0; i < grid_.n1; ++i)
      for (int j = 0; j < grid_.n2; ++j) {
        const double w = v.u(i, j);
        int bin = int(std::floor((w - out_.xi_lo) / width));
        bin = std::min(std::max(bin, 0), out_.bins - 1);
        const double g1 = grad1_at(v.u, i, j, h1);
        const double g2 = grad2_at(v.u, i, j, h2);
        const double parab = model_.b22(w) * g2 * g2;
        const double full = parab + eps_ * (g2 * g2 + g1 * g1);
        out_.m_mass(slab, bin) += full * vol * v.dt;
        out_.n1_mass(slab, bin) += parab * vol * v.dt;
      }
  };
}

ChiFit chi_fit(const Vec& xi, const Vec& values) {
  if (xi.size() != values.size() || xi.size() < 3) fail_config("profile fit needs matched samples");
  const double h = xi[1] - xi[0];
  double u = 0.0;
  for (Eigen::Index q = 0; q < xi.size(); ++q) u += values[q] * h;
  double dist = 0.0;
  for (Eigen::Index q = 0; q < xi.size(); ++q) {
    const double x = xi[q];
    const double chi = (x > 0.0 && x < u) ? 1.0 : ((u < x && x < 0.0) ? -1.0 : 0.0);
    dist += std::abs(values[q] - chi) * h;
  }
  return {u, dist};
}

double kruzhkov_margin(const ModelSpec& m, const FvPath& u, const FvPath& v,
                       const SeparableTest& t) {
  if (u.times.size() != v.times.size() || u.times.size() < 2)
    fail_config("margin needs matching snapshot schedules");
  const Grid2D& g = u.grid;
  const double vol = g.vol(), h2 = g.h2();
  const int n1 = g.n1, n2 = g.n2;
  Vec X(n1), Xp(n1), Y(n2), Yp(n2);
  for (int i = 0; i < n1; ++i) {
    X[i] = t.X(g.x1(i));
    Xp[i] = t.Xp(g.x1(i));
  }
  for (int j = 0; j < n2; ++j) {
    Y[j] = t.Y(g.x2(j));
    Yp[j] = t.Yp(g.x2(j));
  }
  auto slice = [&](size_t f) {
    const Mat& a = u.frames[f];
    const Mat& b = v.frames[f];
    Mat bf(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) bf(i, j) = kruzhkov_fields(m, a(i, j), b(i, j)).Bfield;
    const double tf = t.T(u.times[f]);
    const double tfp = t.Tp(u.times[f]);
    double s = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const auto kf = kruzhkov_fields(m, a(i, j), b(i, j));
        const double diff = std::abs(a(i, j) - b(i, j));
        s += diff * tfp * X[i] * Y[j];
        s += tf * (kf.F1 * Xp[i] * Y[j] + kf.F2 * X[i] * Yp[j]);
        s -= tf * grad2_at(bf, i, j, h2) * X[i] * Yp[j];
      }
    return s * vol;
  };
  double acc = 0.0;
  for (size_t f = 0; f + 1 < u.times.size(); ++f) {
    const double w = u.times[f + 1] - u.times[f];
    acc += 0.5 * w * (slice(f) + slice(f + 1));
  }
  double init = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      init += std::abs(u.frames[0](i, j) - v.frames[0](i, j)) * X[i] * Y[j];
  acc += t.T(0.0) * init * vol;
  return acc;
}

}  // namespace dph
