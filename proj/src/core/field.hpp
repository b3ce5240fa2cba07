#pragma once
#include <cmath>
#include <functional>
#include <vector>

#include "core/common.hpp"

namespace dph {

// Cell-centered rectangular grid on [0,L1] x [0,L2]. Direction 1 carries the
// no-flux sides, direction 2 the data sides.
struct Grid2D {
  int n1 = 0;
  int n2 = 0;
  double L1 = 1.0;
  double L2 = 1.0;

  double h1() const { return L1 / n1; }
  double h2() const { return L2 / n2; }
  double vol() const { return h1() * h2(); }
  double x1(int i) const { return (i + 0.5) * h1(); }
  double x2(int j) const { return (j + 0.5) * h2(); }
  int cells() const { return n1 * n2; }
};

// boundary values on the data sides, as functions of (t, x1)
struct BoundaryData {
  std::function<double(double, double)> lo;
  std::function<double(double, double)> hi;

  static BoundaryData constant(double c) {
    return {[c](double, double) { return c; }, [c](double, double) { return c; }};
  }
};

inline Mat sample_on_grid(const Grid2D& g, const std::function<double(double, double)>& f) {
  Mat u(g.n1, g.n2);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) u(i, j) = f(g.x1(i), g.x2(j));
  return u;
}

// snapshots of a grid state along one trajectory
struct FvPath {
  Grid2D grid;
  std::vector<double> times;
  std::vector<Mat> frames;

  const Mat& final_frame() const { return frames.back(); }
};

inline double l1_cell_distance(const Grid2D& g, const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().sum() * g.vol();
}

// time-averaged L1 distance over shared snapshot times, trapezoid in t
inline double l1_space_time_distance(const FvPath& a, const FvPath& b) {
  if (a.times.size() != b.times.size() || a.times.size() < 2)
    fail_config("paths must share a snapshot schedule");
  for (size_t n = 0; n < a.times.size(); ++n)
    if (std::abs(a.times[n] - b.times[n]) > 1e-12) fail_config("snapshot times disagree");
  double acc = 0.0;
  for (size_t n = 0; n + 1 < a.times.size(); ++n) {
    const double w = a.times[n + 1] - a.times[n];
    acc += 0.5 * w *
           (l1_cell_distance(a.grid, a.frames[n], b.frames[n]) +
            l1_cell_distance(a.grid, a.frames[n + 1], b.frames[n + 1]));
  }
  return acc;
}

}  // namespace dph
