#pragma once
#include <functional>
#include <memory>
#include <vector>

#include "core/field.hpp"
#include "core/kinetic.hpp"
#include "core/model.hpp"
#include "core/solver_eps.hpp"

namespace dph {

// Layers at inward offsets s*w(x'') from one x' side; accumulates time-averaged
// pairwise L1 distances between layers and velocity-indicator profiles per layer.
struct TraceProbe {
  std::vector<double> s_list;
  std::function<double(double)> weight;  // inward offset shape, default constant 1
  bool right_side = false;
  int xi_samples = 64;
  double xi_lo = -0.1, xi_hi = 1.1;
};

class TraceSampler {
 public:
  TraceSampler(const Grid2D& g, TraceProbe probe);
  StepObserver observer();
  int layers() const { return int(probe_.s_list.size()); }
  double distance(int a, int b) const;  // time-averaged L1 distance between layers
  Vec chi_profile(int a) const;         // time- and x''-averaged indicator profile
  Vec xi_grid() const;

 private:
  Vec sample_layer(const Mat& u, int layer) const;

  Grid2D grid_;
  TraceProbe probe_;
  double time_acc_ = 0.0;
  Mat pair_acc_;  // layers x layers accumulated L1 distances
  Mat chi_acc_;   // layers x xi_samples
};

// exact cell-by-cell integral of |grad| of the data-side layer weight
// min(delta, dist(x'', walls))/delta; equals the side measure for small delta
double coarea_layer_sum(const Grid2D& g, double delta);

// divergence identity on [0,Lx] x [0,Ly] with per-cell Gauss quadrature
struct GaussGreenParts {
  double volume_grad = 0.0;  // int F . grad g
  double volume_div = 0.0;   // int g div F
  double trace = 0.0;        // boundary int g F . nu
  double defect() const { return volume_grad + volume_div - trace; }
};
GaussGreenParts gauss_green_parts(const std::function<double(double, double)>& f1,
                                  const std::function<double(double, double)>& f2,
                                  const std::function<double(double, double)>& divf,
                                  const std::function<double(double, double)>& g,
                                  const std::function<double(double, double)>& gx,
                                  const std::function<double(double, double)>& gy, double Lx,
                                  double Ly, int n);

// wall-extrapolated diffusion-primitive gap on the data sides:
// profiles of the scalar primitive at depths 2h'' and 4h'' are Richardson
// combined and compared with the boundary value in time-averaged L2
double dirichlet_trace_gap(const ModelSpec& m, const FvPath& path, const BoundaryData& bd,
                           bool top);

// weak-form value against a test concentrated on the data-side layer; the
// positive part of its negation scaled by the test norm bounds the boundary
// defect constant
class DirichletFormProbe {
 public:
  DirichletFormProbe(const ModelSpec& m, double eps, const Grid2D& g, double horizon, double delta,
                     double z_center, double z_radius, double scale = 1.0);
  StepObserver observer() { return asm_->observer(); }
  double form_value() const { return asm_->totals()[0]; }
  double test_norm() const { return norm_; }
  double ratio() const;

 private:
  std::shared_ptr<KineticAssembler> asm_;
  double norm_ = 0.0;
};

// time series of the boundary-layer pairing of the two-solution diffusion flux
// against the layer gradient, with the boundary data as the second argument
std::vector<double> boundary_flux_series(const ModelSpec& m, const FvPath& path,
                                         const BoundaryData& bd, double delta);

}  // namespace dph
