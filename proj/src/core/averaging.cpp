#include "core/averaging.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <cmath>

namespace dph {

CubeField fft3(const CubeField& f, bool inverse) {
  CubeField out = CubeField::zeros(f.n);
  CubeField tmp = f;
  fftw_plan plan = fftw_plan_dft_3d(
      f.n, f.n, f.n, reinterpret_cast<fftw_complex*>(tmp.a.data()),
      reinterpret_cast<fftw_complex*>(out.a.data()), inverse ? FFTW_BACKWARD : FFTW_FORWARD,
      FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  if (inverse) {
    const double s = 1.0 / (double(f.n) * f.n * f.n);
    for (auto& z : out.a) z *= s;
  }
  return out;
}

CubeField translate(const CubeField& f, int s0, int s1, int s2) {
  CubeField out = CubeField::zeros(f.n);
  const int n = f.n;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        out.at(wrap(i0 + s0), wrap(i1 + s1), wrap(i2 + s2)) = f.at(i0, i1, i2);
  return out;
}

double smooth_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  auto q = [](double s) {
    const double p = std::max(s, 0.0);
    return p * p * p * p;
  };
  return q(2.0 - r) / (q(2.0 - r) + q(r - 1.0));
}

int freq_index(int i, int n) { return i < n / 2 ? i : i - n; }

CubeSplit decompose_cube(const CubeField& f, double xi, const MultiplierParams& mp) {
  if (!(mp.gamma > 0.0) || !(mp.delta > 0.0)) fail_config("cutoff scales must be positive");
  if (!mp.beta) fail_config("decomposition needs a degeneracy symbol");
  const int n = f.n;
  CubeField hat = fft3(f, false);
  CubeField h1 = CubeField::zeros(n), h2 = CubeField::zeros(n), hw = CubeField::zeros(n);
  for (int i0 = 0; i0 < n; ++i0) {
    const double k0 = freq_index(i0, n);
    for (int i1 = 0; i1 < n; ++i1) {
      const double k1 = freq_index(i1, n);
      for (int i2 = 0; i2 < n; ++i2) {
        const double k2 = freq_index(i2, n);
        const double mag = std::sqrt(k0 * k0 + k1 * k1 + k2 * k2);
        const double z1 = smooth_cutoff(mag / mp.gamma);
        const double tmag = std::sqrt(k0 * k0 + k1 * k1);
        const double cone = std::abs(mp.alpha0 * k0 + mp.alpha1 * k1);
        const double z2 = tmag > 0.0 ? smooth_cutoff(cone / (mp.delta * tmag)) : 1.0;
        const auto& v = hat.at(i0, i1, i2);
        h1.at(i0, i1, i2) = z1 * v;
        h2.at(i0, i1, i2) = (1.0 - z1) * z2 * v;
        hw.at(i0, i1, i2) = (1.0 - z1) * (1.0 - z2) * v;
      }
    }
  }
  CubeSplit out;
  out.v1 = fft3(h1, true);
  out.v2 = fft3(h2, true);
  CubeField w = fft3(hw, true);
  const double z3 = smooth_cutoff(mp.beta(xi) / mp.delta);
  out.v3 = CubeField::zeros(n);
  out.v4 = CubeField::zeros(n);
  for (size_t q = 0; q < w.a.size(); ++q) {
    out.v3.a[q] = z3 * w.a[q];
    out.v4.a[q] = (1.0 - z3) * w.a[q];
  }
  return out;
}

double low_ball_weight_sum(int n, double gamma) {
  double s = 0.0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const double k0 = freq_index(i0, n), k1 = freq_index(i1, n), k2 = freq_index(i2, n);
        const double z = smooth_cutoff(std::sqrt(k0 * k0 + k1 * k1 + k2 * k2) / gamma);
        s += z * z;
      }
  return s;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

struct XiTable {
  std::vector<double> a1, a2, b;
  double width = 1.0;
};

XiTable tabulate(const ModelSpec& m, int samples) {
  XiTable t;
  t.a1.resize(samples);
  t.a2.resize(samples);
  t.b.resize(samples);
  t.width = m.u_max - m.u_min;
  for (int i = 0; i < samples; ++i) {
    const double xi = m.u_min + t.width * (i + 0.5) / samples;
    t.a1[i] = m.a1(xi);
    t.a2[i] = m.a2(xi);
    t.b[i] = m.b22(xi);
  }
  return t;
}

}  // namespace

ScanResult nondegeneracy_scan(const ModelSpec& m, const ScanParams& p) {
  if (p.xi_samples < 16) fail_config("scan needs at least sixteen velocity samples");
  if (p.shells.empty() || p.deltas.empty()) fail_config("scan needs shells and thresholds");
  for (size_t di = 1; di < p.deltas.size(); ++di)
    if (p.deltas[di] <= p.deltas[di - 1]) fail_config("scan thresholds must increase");
  const XiTable tab = tabulate(m, p.xi_samples);
  ScanResult res;
  res.omega = Mat::Zero(int(p.shells.size()), int(p.deltas.size()));

  std::vector<double> tr0(p.xi_samples), df0(p.xi_samples);
  for (size_t si = 0; si < p.shells.size(); ++si) {
    const int J = p.shells[si];
    if (J < 1) fail_config("frequency shell is empty");
    std::vector<Eigen::Vector2i> lat;
    auto push = [&](Eigen::Vector2i v) {
      const double r = v.cast<double>().norm();
      if (r < J || r >= 2.0 * J) return;
      for (const auto& u : lat)
        if (u == v) return;
      lat.push_back(v);
    };
    for (int q = 0; q < p.directions; ++q) {
      const double ph = 2.0 * kPi * (q + 0.5) / p.directions;
      push({int(std::lround(1.45 * J * std::cos(ph))), int(std::lround(1.45 * J * std::sin(ph)))});
    }
    push({J, 0});
    push({0, J});
    push({-J, 0});
    push({J, J});
    push({J, -J});
    if (lat.empty()) fail_config("frequency shell is empty");

    for (const auto& nvec : lat) {
      const double n1 = p.ell * nvec[0], n2 = p.ell * nvec[1];
      for (int q = 0; q < p.xi_samples; ++q) {
        tr0[q] = tab.a1[q] * n1 + tab.a2[q] * n2;
        df0[q] = (tab.b[q] + p.eps) * n2 * n2;
      }
      std::vector<double> taus = {0.0};
      for (int j = 0; j < p.pins; ++j) {
        const int pin = int((j + 0.5) / p.pins * p.xi_samples);
        taus.push_back(-tr0[pin]);
      }
      for (double tau : taus) {
        for (size_t di = 0; di < p.deltas.size(); ++di) {
          int bad = 0;
          const double d2 = p.deltas[di] * p.deltas[di];
          for (int q = 0; q < p.xi_samples; ++q) {
            const double tr = tau + tr0[q];
            if (tr * tr + df0[q] * df0[q] <= d2) ++bad;
          }
          const double meas = tab.width * double(bad) / p.xi_samples;
          res.omega(int(si), int(di)) = std::max(res.omega(int(si), int(di)), meas);
        }
      }
    }
  }

  // least squares on log omega = c + alpha log delta - (alpha beta) log J
  std::vector<Vec> rows;
  std::vector<double> ys;
  for (size_t si = 0; si < p.shells.size(); ++si)
    for (size_t di = 0; di < p.deltas.size(); ++di) {
      const double w = res.omega(int(si), int(di));
      if (w <= 0.0) continue;
      Vec r(3);
      r << 1.0, std::log(p.deltas[di]), -std::log(double(p.shells[si]));
      rows.push_back(r);
      ys.push_back(std::log(w));
    }
  res.used = int(rows.size());
  if (res.used >= 6) {
    Mat A(res.used, 3);
    Vec y(res.used);
    for (int r = 0; r < res.used; ++r) {
      A.row(r) = rows[r].transpose();
      y[r] = ys[r];
    }
    Vec sol = (A.transpose() * A).ldlt().solve(A.transpose() * y);
    res.c0 = sol[0];
    res.alpha = sol[1];
    res.beta = res.alpha != 0.0 ? sol[2] / res.alpha : 0.0;
    res.rms_residual = std::sqrt((A * sol - y).squaredNorm() / res.used);
    res.fit_ok = true;
  }
  return res;
}

ThresholdCollapse degeneracy_collapse(const ModelSpec& m, const std::vector<double>& thetas,
                                      int xi_samples, int sphere_samples) {
  if (thetas.empty()) fail_config("collapse needs thresholds");
  const XiTable tab = tabulate(m, xi_samples);

  // unit-sphere candidates (tau, k1, k2): a Fibonacci cloud, rings through the
  // zero-time and flat-k2 circles, axes, and per-angle pinned time frequencies
  std::vector<Vec> dirs;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < sphere_samples; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / sphere_samples;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * k;
    Vec d(3);
    d << std::cos(phi) * r, std::sin(phi) * r, z;
    dirs.push_back(d);
  }
  const int ring = 128;
  for (int q = 0; q < ring; ++q) {
    const double ph = 2.0 * kPi * (q + 0.5) / ring;
    const double c = std::cos(ph), s = std::sin(ph);
    Vec a(3), b(3);
    a << 0.0, c, s;
    b << c, s, 0.0;
    dirs.push_back(a);
    dirs.push_back(b);
    for (int j = 0; j < 33; ++j) {
      const int pin = int((j + 0.5) / 33.0 * xi_samples);
      Vec d(3);
      d << -(tab.a1[pin] * c + tab.a2[pin] * s), c, s;
      dirs.push_back(d / d.norm());
    }
  }
  for (int c = 0; c < 3; ++c) {
    Vec e = Vec::Zero(3);
    e[c] = 1.0;
    dirs.push_back(e);
  }

  ThresholdCollapse out;
  for (double th : thetas) {
    double worst = 0.0;
    for (const Vec& d : dirs) {
      int bad = 0;
      for (int q = 0; q < xi_samples; ++q) {
        const double tr = d[0] + tab.a1[q] * d[1] + tab.a2[q] * d[2];
        const double df = tab.b[q] * d[2] * d[2];
        if (std::abs(tr) <= th && df <= th) ++bad;
      }
      worst = std::max(worst, double(bad) / xi_samples);
    }
    out.theta.push_back(th);
    out.level.push_back(worst);
  }
  return out;
}

}  // namespace dph
