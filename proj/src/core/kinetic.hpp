#pragma once
#include <algorithm>
#include <vector>

#include "core/field.hpp"
#include "core/model.hpp"
#include "core/solver_eps.hpp"

namespace dph {

// C^3 bump ((1-s^2)_+)^4 and derivatives
double bump_c4(double s);
double bump_c4_d1(double s);
double bump_c4_d2(double s);

// separable space-time-velocity test function T(t) X(x') Y(x'') Z(xi)
struct SeparableTest {
  std::function<double(double)> T, Tp;
  std::function<double(double)> X, Xp, Xpp;
  std::function<double(double)> Y, Yp, Ypp;
  std::function<double(double)> Z, Zp;
  double z_lo = 0.0, z_hi = 0.0;  // support of Z
};

// interior-supported bump test: T(0) = 1, T vanishes before the horizon,
// X and Y vanish near the sides, Z is a bump at (z_center, z_radius)
SeparableTest make_separable_test(double L1, double L2, double horizon, double z_center,
                                  double z_radius);

// one-sided differences at the walls, central inside
double grad1_at(const Mat& u, int i, int j, double h1);
double grad2_at(const Mat& u, int i, int j, double h2);

// Accumulates the weak-form defect of the velocity-indicator formulation along
// a finite-volume run, one total per test function. The dissipation pairing
// deposits (b(u)+eps)|d''u|^2 + eps|d'u|^2 against Z'(u); dropping it turns the
// total into the entropy-inequality slack for eta' = Z.
class KineticAssembler {
 public:
  KineticAssembler(const ModelSpec& m, double eps, const Grid2D& g, double horizon,
                   std::vector<SeparableTest> tests, bool with_measure = true);
  StepObserver observer();
  std::vector<double> totals() const;

 private:
  struct PerTest {
    SeparableTest fn;
    PrefixTable iz, ia1z, ia2z, ibez;
    double z_at_zero = 0.0, a1z_at_zero = 0.0, a2z_at_zero = 0.0, bez_at_zero = 0.0;
    Vec x, xp, xpp, y, yp, ypp;
    double acc = 0.0;
  };
  void ingest(const StepView& v);

  ModelSpec model_;
  double eps_, horizon_;
  Grid2D grid_;
  bool with_measure_;
  std::vector<PerTest> tests_;
};

// velocity histogram of the dissipation measure and its parabolic lower part
struct KineticMeasure {
  double xi_lo = 0.0, xi_hi = 0.0;
  int bins = 0, slabs = 0;
  double horizon = 0.0;
  Mat m_mass, n1_mass;  // slabs x bins

  double total_m() const { return m_mass.sum(); }
  double total_n1() const { return n1_mass.sum(); }
  double min_entry() const { return std::min(m_mass.minCoeff(), n1_mass.minCoeff()); }
  double min_gap() const { return (m_mass - n1_mass).minCoeff(); }
};

class MeasureAccumulator {
 public:
  MeasureAccumulator(const ModelSpec& m, double eps, const Grid2D& g, double horizon,
                     int bins = 64, int slabs = 16);
  StepObserver observer();
  const KineticMeasure& result() const { return out_; }

 private:
  ModelSpec model_;
  double eps_;
  Grid2D grid_;
  KineticMeasure out_;
};

// closest indicator-difference profile to a sampled velocity profile
struct ChiFit {
  double u_est = 0.0;
  double l1_dist = 0.0;
};
ChiFit chi_fit(const Vec& xi, const Vec& values);

// pathwise two-solution inequality margin; positive means the bound holds
double kruzhkov_margin(const ModelSpec& m, const FvPath& u, const FvPath& v,
                       const SeparableTest& t);

}  // namespace dph
