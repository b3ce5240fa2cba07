#pragma once
#include <complex>
#include <functional>
#include <vector>

#include "core/common.hpp"
#include "core/model.hpp"

namespace dph {

// complex scalar field on a periodic (t, x', x'') cube, row-major (it, i1, i2)
struct CubeField {
  int n = 0;
  std::vector<std::complex<double>> a;

  static CubeField zeros(int n) {
    CubeField f;
    f.n = n;
    f.a.assign(size_t(n) * n * n, {0.0, 0.0});
    return f;
  }
  std::complex<double>& at(int i0, int i1, int i2) {
    return a[(size_t(i0) * n + i1) * n + i2];
  }
  const std::complex<double>& at(int i0, int i1, int i2) const {
    return a[(size_t(i0) * n + i1) * n + i2];
  }
  double norm2() const {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return s;
  }
};

CubeField fft3(const CubeField& f, bool inverse);
CubeField translate(const CubeField& f, int s0, int s1, int s2);

// smooth step: 1 for r <= 1, 0 for r >= 2, quartic-rational blend between
double smooth_cutoff(double r);

// signed lattice index of slot i on an n-grid
int freq_index(int i, int n);

struct MultiplierParams {
  double gamma = 4.0;
  double delta = 0.1;
  double alpha0 = 1.0;   // transport-cone direction in (tau, kappa')
  double alpha1 = 0.0;
  std::function<double(double)> beta;  // velocity degeneracy symbol, e.g. b22
};

// frequency split: low ball, transport cone, degenerate velocities, remainder;
// the four parts sum back to the input exactly
struct CubeSplit {
  CubeField v1, v2, v3, v4;
};
CubeSplit decompose_cube(const CubeField& f, double xi, const MultiplierParams& mp);

// sum of squared low-ball multiplier weights over the lattice, the norm the
// first part attains on a unit-modulus spectrum
double low_ball_weight_sum(int n, double gamma);

// quantitative nondegeneracy: worst velocity-set fraction where the symbol
// modulus drops under delta, over structured candidates per frequency shell
struct ScanParams {
  std::vector<int> shells = {4, 8, 16, 32};
  std::vector<double> deltas = {0.02, 0.04, 0.08, 0.16};
  int xi_samples = 4096;
  double ell = 2.0 * 3.14159265358979323846;
  double eps = 0.0;  // viscosity added to the diffusion symbol
  int directions = 64;
  int pins = 96;  // frequency-shift candidates per direction
};

struct ScanResult {
  Mat omega;  // shells x deltas
  double alpha = 0.0, beta = 0.0, c0 = 0.0;
  double rms_residual = 0.0;
  int used = 0;  // nonzero entries that entered the fit
  bool fit_ok = false;
};
ScanResult nondegeneracy_scan(const ModelSpec& m, const ScanParams& p);

// unit-frequency threshold collapse: worst velocity-set fraction where both
// the transport and diffusion symbols drop under theta, over sphere samples
struct ThresholdCollapse {
  std::vector<double> theta;
  std::vector<double> level;
};
ThresholdCollapse degeneracy_collapse(const ModelSpec& m, const std::vector<double>& thetas,
                                      int xi_samples, int sphere_samples);

}  // namespace dph
