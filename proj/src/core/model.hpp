#pragma once
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace dph {

using ScalarFn = std::function<double(double)>;

// Cached prefix integral of an integrand on a uniform grid; evaluation adds a
// local 3-point Simpson correction from the nearest node below.
class PrefixTable {
 public:
  PrefixTable() = default;
  PrefixTable(ScalarFn f, double x0, double x1, int intervals);
  double operator()(double u) const;
  double x0() const { return x0_; }
  double x1() const { return x0_ + h_ * (static_cast<double>(prefix_.size()) - 1.0); }

 private:
  ScalarFn f_;
  double x0_ = 0.0, h_ = 1.0;
  std::vector<double> prefix_;
};

// Scalar conservation-law data on a 2-d strip: flux A = (A1, A2), degenerate
// diffusion acting in the second direction with primitive B22 and b = B22',
// multiplicative noise u -> g_k(u) on K modes.
struct ModelSpec {
  std::string name;
  double u_min = 0.0, u_max = 1.0;
  double L0 = 2.0;  // containment bound for the state range
  ScalarFn A1, a1;
  ScalarFn A2, a2;
  ScalarFn B22, b22;
  ScalarFn sigma;                  // sqrt(b22)
  ScalarFn b_scalar, db_scalar;    // scalar diffusion primitive's companion pair
  int K = 0;
  std::vector<double> alpha;                  // stored mode weights
  std::function<double(int, double)> g;       // g_k(u)
  PrefixTable Sigma;                          // int_0^u sigma

  double G2(double u) const {
    double s = 0.0;
    for (int k = 0; k < K; ++k) s += sq(g(k, u));
    return s;
  }
};

// Point evaluation with finiteness guards; errors name the offending function.
struct PrimitiveValues {
  double A1, a1, A2, a2, B22, b22, sigma, Sigma, b_scalar, db_scalar, G2;
  std::vector<double> g;
};
PrimitiveValues eval_primitives(const ModelSpec& m, double u);

struct HypothesisEntry {
  std::string name;
  bool pass = false;
  std::map<std::string, double> stats;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisEntry> entries;
  bool all_pass() const;
  std::string render() const;  // deterministic text form
};

// Measures the structural hypotheses on deterministic sample grids.
// sample_count >= 16 controls the u-grid resolution.
HypothesisReport validate_hypotheses(const ModelSpec& m, int sample_count);

// Kruzhkov entropy fields.
struct KruzhkovFields {
  double F1, F2;      // sgn(u-v)(A(u)-A(v))
  double Bfield;      // sgn(u-v)(B22(u)-B22(v))
  double F1p, F2p;    // positive-part variants
  double Bfieldp;
};
KruzhkovFields kruzhkov_fields(const ModelSpec& m, double u, double v);
double kruzhkov_gk(const ModelSpec& m, int k, double u, double v);
inline double triangle_gauge(double u, double v, double w) {
  return std::abs(u - v) + std::abs(u - w) - std::abs(w - v);
}

/// Named models: default-powerlaw, linear, constant-diffusion, degenerate-flat.
ModelSpec make_model(const std::string& name);

}  // namespace dph
