#include "core/quad.hpp"

#include <cmath>

namespace dph::quad {

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) fail_config("gauss_legendre: node count must be positive");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.nodes[i] = 0.5 * (b - a) * (-x) + 0.5 * (a + b);
    r.nodes[n - 1 - i] = 0.5 * (b - a) * x + 0.5 * (a + b);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * (b - a) * w;
  }
  return r;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x0 = a + i * h;
    s += (h / 6.0) * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
  }
  return s;
}

std::vector<double> simpson_prefix(const std::function<double(double)>& f, double x0, double h, int intervals) {
  std::vector<double> out(intervals + 1);
  out[0] = 0.0;
  double left = f(x0);
  for (int i = 0; i < intervals; ++i) {
    const double xm = x0 + (i + 0.5) * h;
    const double xr = x0 + (i + 1.0) * h;
    const double fm = f(xm), fr = f(xr);
    out[i + 1] = out[i] + (h / 6.0) * (left + 4.0 * fm + fr);
    left = fr;
  }
  return out;
}

}  // namespace dph::quad
