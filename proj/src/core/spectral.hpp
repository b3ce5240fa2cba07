#pragma once
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/quad.hpp"

namespace dph::spectral {

enum class Kind { kNeumann, kDirichlet, kClamped };

// Orthonormal eigensystem of a 1-d factor operator on [0, L]:
//   kNeumann / kDirichlet:  -eps f'' = lam f   (cosine / sine families)
//   kClamped:               mu f'''' - eps f'' = lam f, f = f' = 0 at both ends
struct Basis1D {
  Kind kind = Kind::kNeumann;
  double L = 1.0, eps = 0.0, mu = 0.0;
  int modes = 0;
  Vec lambda;

  struct ClampedMode {
    double q, p, a, b, c, d;  // f = a e^{-px} + b e^{p(x-L)} + c cos(qx) + d sin(qx)
  };
  std::vector<ClampedMode> cm;

  double value(int j, double x) const;
  double d1(int j, double x) const;
  double d2(int j, double x) const;
  double d4(int j, double x) const;
};

Basis1D make_neumann(double eps, double L, int modes);
Basis1D make_dirichlet(double eps, double L, int modes);
Basis1D make_clamped(double mu, double eps, double L, int modes);

// Scaled clamped determinant whose roots are the eigen-wavenumbers.
double clamped_det_scaled(double q, double mu, double eps, double L);

// Tensor operator A = T1 (x') + T2 (x'') on [0,L1] x [0,L2] with Gauss-Legendre
// collocation grids oversampled 4x relative to the highest retained mode.
struct TensorOp {
  Basis1D b1, b2;
  quad::Rule q1, q2;
  Mat V1, D1a;            // factor-1 values / first derivatives on grid 1 (nq1 x M1)
  Mat V2, D2b, D2a, D2d4; // factor-2 values / d1 / d2 / d4 on grid 2 (nq2 x M2)
  Mat P1, P2;             // projections (M x nq), weights folded in
  Mat P1d1, P2d1, P2d2;   // derivative-weighted projections <., d phi> (M x nq)
  Mat G1d1, G2d1, G2d2;   // Gram matrices of d/dx' (factor 1), d/dx'' and d2/dx''2 (factor 2)
  Vec lam1, lam2;
  Vec e1_left, e1_right;  // factor-1 values at x'=0 and x'=L1

  int M1() const { return b1.modes; }
  int M2() const { return b2.modes; }
  int nq1() const { return static_cast<int>(q1.nodes.size()); }
  int nq2() const { return static_cast<int>(q2.nodes.size()); }
  double lam(int j, int k) const { return lam1[j] + lam2[k]; }

  Mat to_coef(const Mat& grid) const { return P1 * grid * P2.transpose(); }
  Mat to_grid(const Mat& coef) const { return V1 * coef * V2.transpose(); }
  Mat dx1_grid(const Mat& coef) const { return D1a * coef * V2.transpose(); }
  Mat dx2_grid(const Mat& coef) const { return V1 * coef * D2b.transpose(); }
  Mat dx2x2_grid(const Mat& coef) const { return V1 * coef * D2a.transpose(); }

  // weak pairings: coefficient matrices of <G, d phi_j psi_k> and friends,
  // used where integration by parts removes boundary terms
  Mat coef_dx1_pair(const Mat& grid) const { return P1d1 * grid * P2.transpose(); }
  Mat coef_dx2_pair(const Mat& grid) const { return P1 * grid * P2d1.transpose(); }
  Mat coef_dx2x2_pair(const Mat& grid) const { return P1 * grid * P2d2.transpose(); }

  // integral of the pointwise product of two quad-grid samples
  double inner_grid(const Mat& a, const Mat& b) const {
    return q1.weights.dot(((a.array() * b.array()).matrix() * q2.weights));
  }

  // factor-2 profiles at the x' endpoints (for boundary functionals)
  Vec boundary_x1(const Mat& coef, bool right) const {
    return V2 * (coef.transpose() * (right ? e1_right : e1_left));
  }

  void semigroup_inplace(Mat& coef, double t) const;

  double norm_l2(const Mat& coef) const { return std::sqrt(coef.squaredNorm()); }
  double norm_grad_sq(const Mat& coef) const;   // |d/dx' u|^2 + |d/dx'' u|^2
  double norm_d2x2_sq(const Mat& coef) const;   // |d^2/dx''^2 u|^2
  double intermediate_norm(const Mat& coef, double alpha) const;
};

TensorOp make_tensor_op(const Basis1D& f1, const Basis1D& f2);

// mode values at arbitrary points (pts.size() x modes)
Mat basis_values(const Basis1D& b, const Vec& pts);

// sup over the operator's spectrum of lam^s e^{-t lam} and the closed-form bound (s/e)^s t^{-s}.
struct SmoothingSample {
  double sup, bound;
};
SmoothingSample smoothing_check(const TensorOp& op, double s, double t);

// (direction, index, eigenvalue, boundary-kind) rows.
void eigensystem_csv(const TensorOp& op, const std::string& path);

}  // namespace dph::spectral
