#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "core/field.hpp"
#include "core/model.hpp"
#include "core/noise.hpp"
#include "core/spectral.hpp"

namespace dph {

// First-stage solver: exponential Euler on the mild form of
//   du + div A(u) dt = D2_{x''} B(u) dt + Phi(u) dW - (eps Laplace - mu Dx''^4) u dt
// over a Neumann (x') x clamped (x'') tensor basis. The state is kept as
// coefficients of u - f, where f is the cubic extension of the boundary data.
struct MuParams {
  int modes1 = 12;
  int modes2 = 12;
  double L1 = 1.0;
  double L2 = 1.0;
  double eps = 0.1;
  double mu = 0.01;
  double T = 0.25;
  double dt = 1e-3;
  int store_stride = 1;

  // fixed-point iteration controls; explicit_mode evaluates the nonlinearity
  // at the running state instead of iterating each window to a fixed point
  bool explicit_mode = true;
  double window = 0.05;
  double picard_tol = 1e-10;
  int picard_max_iter = 200;
  double rho = 0.0;            // exponential weight in the iteration metric
  bool calibrate_rho = false;  // measure the window gain first and set rho from it
};

struct PicardDiag {
  double cstar = 0.0;
  double rho = 0.0;
  double contraction_factor = 0.0;  // worst successive residual ratio seen
  double final_residual = 0.0;      // largest terminal residual over windows
  int max_iterations = 0;
  bool converged = true;
  std::vector<double> residual_trace;  // residuals of the last window
};

struct MuRun {
  std::shared_ptr<spectral::TensorOp> op;
  MuParams p;
  ModelSpec model;
  BoundaryData bd;
  std::vector<double> times;
  std::vector<Mat> coef;  // shifted coefficients at stored steps
  NoisePath noise;        // empty K=0 when the run was noise-free
  PicardDiag diag;

  int frames() const { return int(coef.size()); }
  Mat extension_quadgrid(double t) const;            // f on the quadrature grid
  Mat state_quadgrid(int frame) const;               // u = to_grid(coef) + f
  Mat state_on(const Grid2D& g, int frame) const;    // cell-center evaluation
  Vec boundary_profile(int frame, bool right) const; // u at an x' endpoint on the x'' grid
};

MuRun run_first_approx(const ModelSpec& m, const MuParams& p, const BoundaryData& bd,
                       const std::function<double(double, double)>& u0, const NoisePath* noise);

// Largest step defect when the stored trajectory is re-inserted into the mild
// recursion; at a fixed point this sits at the iteration tolerance.
double recursion_residual(const MuRun& run);

// Boundary-lift relaxation alone: z' = -A z - P(A f + df/dt), z(0) = -P(f(0)),
// so that f + z(t) relaxes onto the stationary harmonic-type extension.
std::vector<Mat> lift_coefficients(const spectral::TensorOp& op, const BoundaryData& bd,
                                   const MuParams& p, std::vector<double>* times_out);

// Response to the side-flux functional alone for frozen endpoint profiles
// v(t, x'') at the two x' ends (each sampled on the factor-2 quadrature grid).
std::vector<Mat> boundary_flux_response(const spectral::TensorOp& op, const ModelSpec& m,
                                        const MuParams& p,
                                        const std::function<Vec(double, bool)>& side_profile,
                                        std::vector<double>* times_out);

// Pathwise relative-energy balance between two runs driven by the same noise.
struct EnergyReport {
  double initial = 0;      // |z(0)|^2 / 2
  double final_half = 0;   // |z(T)|^2 / 2
  double dissipation = 0;  // energy absorbed by the semigroup per step
  double diffusion_work = 0;
  double flux_work = 0;
  double martingale = 0;
  double correction = 0;  // quadratic variation of the noise difference
  double defect = 0;
  double defect_without_correction = 0;
};
EnergyReport relative_energy_report(const MuRun& a, const MuRun& b);

}  // namespace dph
