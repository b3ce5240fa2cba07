#pragma once
#include <functional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/model.hpp"
#include "core/noise.hpp"

namespace dph {

// Second-stage solver: explicit finite volumes for
//   du + div A(u) dt = D2_{x''} B(u) dt + eps Laplace u dt + Phi(u) dW
// with zero-total-flux sides in x' (the wall faces carry no flux) and data
// sides in x'' (reflected ghost). Fluxes are Rusanov or Engquist-Osher plus
// harmonic-mean face diffusion; time stepping is Euler-Maruyama.
struct SchemeParams {
  int n1 = 32;
  int n2 = 32;
  double L1 = 1.0;
  double L2 = 1.0;
  double T = 0.25;
  double dt = 0.0;            // 0: derive from the stability sum
  double cfl_fraction = 0.45; // fraction of the 0.9 stability budget when deriving dt
  double eps = 0.1;
  std::string flux = "rusanov";  // or "upwind"
  bool implicit_x2 = false;      // solve the x'' diffusion by backward Euler
  int store_stride = 8;
};

struct StepView {
  int n;
  double t, dt;
  const Grid2D& grid;
  const Mat& u;      // state entering the step
  const Mat& unext;  // state leaving the step
  const double* dbeta;
  int K;
};
using StepObserver = std::function<void(const StepView&)>;

struct EpsRunResult {
  FvPath path;
  double dt = 0.0;
  int steps = 0;
  double cfl = 0.0;            // dt times the stability sum, kept <= 0.9
  double overshoot_high = 0.0; // max (u - u_max)_+ seen
  double overshoot_low = 0.0;  // max (u_min - u)_+ seen
  double mass_defect = 0.0;    // worst per-step budget telescoping error
};

double stability_sum(const ModelSpec& m, const SchemeParams& p);

EpsRunResult run_second_approx(const ModelSpec& m, const SchemeParams& p, const BoundaryData& bd,
                               const std::function<double(double, double)>& u0,
                               const NoisePath* noise,
                               const std::vector<StepObserver>& observers = {});

}  // namespace dph
