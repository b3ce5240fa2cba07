#include "core/spectral.hpp"

#include <cmath>

#include "core/csv.hpp"

namespace dph::spectral {

namespace {

double nrm_cos(double L, int j) { return j == 0 ? std::sqrt(1.0 / L) : std::sqrt(2.0 / L); }

}  // namespace

double Basis1D::value(int j, double x) const {
  switch (kind) {
    case Kind::kNeumann:
      return nrm_cos(L, j) * std::cos(j * M_PI * x / L);
    case Kind::kDirichlet:
      return std::sqrt(2.0 / L) * std::sin((j + 1) * M_PI * x / L);
    case Kind::kClamped: {
      const auto& m = cm[j];
      return m.a * std::exp(-m.p * x) + m.b * std::exp(m.p * (x - L)) + m.c * std::cos(m.q * x) +
             m.d * std::sin(m.q * x);
    }
  }
  return 0.0;
}

double Basis1D::d1(int j, double x) const {
  switch (kind) {
    case Kind::kNeumann: {
      const double w = j * M_PI / L;
      return -nrm_cos(L, j) * w * std::sin(w * x);
    }
    case Kind::kDirichlet: {
      const double w = (j + 1) * M_PI / L;
      return std::sqrt(2.0 / L) * w * std::cos(w * x);
    }
    case Kind::kClamped: {
      const auto& m = cm[j];
      return -m.p * m.a * std::exp(-m.p * x) + m.p * m.b * std::exp(m.p * (x - L)) -
             m.q * m.c * std::sin(m.q * x) + m.q * m.d * std::cos(m.q * x);
    }
  }
  return 0.0;
}

double Basis1D::d2(int j, double x) const {
  switch (kind) {
    case Kind::kNeumann: {
      const double w = j * M_PI / L;
      return -nrm_cos(L, j) * w * w * std::cos(w * x);
    }
    case Kind::kDirichlet: {
      const double w = (j + 1) * M_PI / L;
      return -std::sqrt(2.0 / L) * w * w * std::sin(w * x);
    }
    case Kind::kClamped: {
      const auto& m = cm[j];
      const double p2 = m.p * m.p, q2 = m.q * m.q;
      return p2 * m.a * std::exp(-m.p * x) + p2 * m.b * std::exp(m.p * (x - L)) - q2 * m.c * std::cos(m.q * x) -
             q2 * m.d * std::sin(m.q * x);
    }
  }
  return 0.0;
}

double Basis1D::d4(int j, double x) const {
  switch (kind) {
    case Kind::kNeumann: {
      const double w = j * M_PI / L;
      return nrm_cos(L, j) * w * w * w * w * std::cos(w * x);
    }
    case Kind::kDirichlet: {
      const double w = (j + 1) * M_PI / L;
      return std::sqrt(2.0 / L) * w * w * w * w * std::sin(w * x);
    }
    case Kind::kClamped: {
      const auto& m = cm[j];
      const double p4 = sq(m.p * m.p), q4 = sq(m.q * m.q);
      return p4 * m.a * std::exp(-m.p * x) + p4 * m.b * std::exp(m.p * (x - L)) + q4 * m.c * std::cos(m.q * x) +
             q4 * m.d * std::sin(m.q * x);
    }
  }
  return 0.0;
}

Basis1D make_neumann(double eps, double L, int modes) {
  if (modes < 1 || L <= 0.0) fail_config("make_neumann: bad mode count or length");
  Basis1D b;
  b.kind = Kind::kNeumann;
  b.L = L;
  b.eps = eps;
  b.modes = modes;
  b.lambda.resize(modes);
  for (int j = 0; j < modes; ++j) b.lambda[j] = eps * sq(j * M_PI / L);
  return b;
}

Basis1D make_dirichlet(double eps, double L, int modes) {
  if (modes < 1 || L <= 0.0) fail_config("make_dirichlet: bad mode count or length");
  Basis1D b;
  b.kind = Kind::kDirichlet;
  b.L = L;
  b.eps = eps;
  b.modes = modes;
  b.lambda.resize(modes);
  for (int j = 0; j < modes; ++j) b.lambda[j] = eps * sq((j + 1) * M_PI / L);
  return b;
}

double clamped_det_scaled(double q, double mu, double eps, double L) {
  const double p = std::sqrt(q * q + eps / mu);
  const double E = std::exp(-p * L);
  const double ch = 0.5 * (1.0 + E * E), sh = 0.5 * (1.0 - E * E);
  return 4.0 * p * E - 4.0 * p * ch * std::cos(q * L) + (2.0 * (p * p - q * q) / q) * sh * std::sin(q * L);
}

Basis1D make_clamped(double mu, double eps, double L, int modes) {
  if (modes < 1 || L <= 0.0 || mu <= 0.0 || eps < 0.0) fail_config("make_clamped: bad parameters");
  Basis1D b;
  b.kind = Kind::kClamped;
  b.L = L;
  b.eps = eps;
  b.mu = mu;
  b.modes = modes;
  b.lambda.resize(modes);
  b.cm.resize(modes);

  // scan for sign changes, then bisect to machine precision
  double q = 1e-3, f_prev = clamped_det_scaled(q, mu, eps, L);
  const double step = M_PI / (40.0 * L);
  int found = 0;
  int guard = 0;
  while (found < modes) {
    if (++guard > 2000000) fail_numeric("make_clamped: eigenvalue scan failed to locate all modes");
    double q2 = q + step, f_next = clamped_det_scaled(q2, mu, eps, L);
    if ((f_prev < 0.0) != (f_next < 0.0)) {
      double lo = q, hi = q2;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((clamped_det_scaled(mid, mu, eps, L) < 0.0) == (f_prev < 0.0))
          lo = mid;
        else
          hi = mid;
      }
      const double qr = 0.5 * (lo + hi);
      const double p = std::sqrt(qr * qr + eps / mu);
      const double E = std::exp(-p * L);
      const double cq = std::cos(qr * L), sqq = std::sin(qr * L);
      double ca = 1.0 - E * cq - (p / qr) * E * sqq;
      double cb = -(E - cq + (p / qr) * sqq);
      double cc = -ca - cb * E;
      double cd = (p * ca - p * cb * E) / qr;
      Basis1D tmp = b;
      tmp.cm[found] = {qr, p, ca, cb, cc, cd};
      // normalize and fix sign by f''(0) > 0
      const auto rule = quad::gauss_legendre(64 + 8 * found, 0.0, L);
      double nrm2 = 0.0;
      for (int i = 0; i < rule.nodes.size(); ++i) nrm2 += rule.weights[i] * sq(tmp.value(found, rule.nodes[i]));
      const double s = (ca * p * p + cb * p * p * E - cc * qr * qr) > 0.0 ? 1.0 : -1.0;
      const double inv = s / std::sqrt(nrm2);
      b.cm[found] = {qr, p, ca * inv, cb * inv, cc * inv, cd * inv};
      b.lambda[found] = mu * sq(qr * qr) + eps * qr * qr;
      ++found;
    }
    q = q2;
    f_prev = f_next;
  }
  return b;
}

namespace {

void fill_matrices(const Basis1D& b, const quad::Rule& r, Mat& V, Mat& D1, Mat& D2, Mat& D4, Mat& P) {
  const int nq = static_cast<int>(r.nodes.size());
  V.resize(nq, b.modes);
  D1.resize(nq, b.modes);
  D2.resize(nq, b.modes);
  D4.resize(nq, b.modes);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < b.modes; ++j) {
      V(i, j) = b.value(j, r.nodes[i]);
      D1(i, j) = b.d1(j, r.nodes[i]);
      D2(i, j) = b.d2(j, r.nodes[i]);
      D4(i, j) = b.d4(j, r.nodes[i]);
    }
  P = V.transpose() * r.weights.asDiagonal();
}

}  // namespace

TensorOp make_tensor_op(const Basis1D& f1, const Basis1D& f2) {
  TensorOp op;
  op.b1 = f1;
  op.b2 = f2;
  op.q1 = quad::gauss_legendre(4 * f1.modes + 8, 0.0, f1.L);
  op.q2 = quad::gauss_legendre(4 * f2.modes + 8, 0.0, f2.L);
  Mat d2_1, d4_1;
  fill_matrices(f1, op.q1, op.V1, op.D1a, d2_1, d4_1, op.P1);
  fill_matrices(f2, op.q2, op.V2, op.D2b, op.D2a, op.D2d4, op.P2);
  op.P1d1 = op.D1a.transpose() * op.q1.weights.asDiagonal();
  op.P2d1 = op.D2b.transpose() * op.q2.weights.asDiagonal();
  op.P2d2 = op.D2a.transpose() * op.q2.weights.asDiagonal();
  op.G1d1 = op.D1a.transpose() * op.q1.weights.asDiagonal() * op.D1a;
  op.G2d1 = op.D2b.transpose() * op.q2.weights.asDiagonal() * op.D2b;
  op.G2d2 = op.D2a.transpose() * op.q2.weights.asDiagonal() * op.D2a;
  op.lam1 = f1.lambda;
  op.lam2 = f2.lambda;
  op.e1_left.resize(f1.modes);
  op.e1_right.resize(f1.modes);
  for (int j = 0; j < f1.modes; ++j) {
    op.e1_left[j] = f1.value(j, 0.0);
    op.e1_right[j] = f1.value(j, f1.L);
  }
  return op;
}

Mat basis_values(const Basis1D& b, const Vec& pts) {
  Mat out(pts.size(), b.modes);
  for (Eigen::Index i = 0; i < pts.size(); ++i)
    for (int j = 0; j < b.modes; ++j) out(i, j) = b.value(j, pts[i]);
  return out;
}

void TensorOp::semigroup_inplace(Mat& coef, double t) const {
  if (t < 0.0) fail_config("semigroup requires t >= 0");
  if (t == 0.0) return;
  for (int j = 0; j < coef.rows(); ++j)
    for (int k = 0; k < coef.cols(); ++k) coef(j, k) *= std::exp(-t * (lam1[j] + lam2[k]));
}

double TensorOp::norm_grad_sq(const Mat& coef) const {
  return (coef.transpose() * G1d1 * coef).trace() + (coef * G2d1 * coef.transpose()).trace();
}

double TensorOp::norm_d2x2_sq(const Mat& coef) const { return (coef * G2d2 * coef.transpose()).trace(); }

double TensorOp::intermediate_norm(const Mat& coef, double alpha) const {
  double s = 0.0;
  for (int j = 0; j < coef.rows(); ++j)
    for (int k = 0; k < coef.cols(); ++k) s += std::pow(1.0 + lam(j, k), 2.0 * alpha) * sq(coef(j, k));
  return std::sqrt(s);
}

SmoothingSample smoothing_check(const TensorOp& op, double s, double t) {
  if (t <= 0.0 || s <= 0.0) fail_config("smoothing_check requires positive s and t");
  double sup = 0.0;
  for (int j = 0; j < op.M1(); ++j)
    for (int k = 0; k < op.M2(); ++k) {
      const double l = op.lam(j, k);
      if (l > 0.0) sup = std::max(sup, std::pow(l, s) * std::exp(-t * l));
    }
  return {sup, std::pow(s / std::exp(1.0), s) * std::pow(t, -s)};
}

void eigensystem_csv(const TensorOp& op, const std::string& path) {
  auto kind_name = [](Kind k) {
    switch (k) {
      case Kind::kNeumann:
        return "neumann";
      case Kind::kDirichlet:
        return "dirichlet";
      case Kind::kClamped:
        return "clamped";
    }
    return "";
  };
  CsvWriter csv(path, {"direction", "index", "eigenvalue", "boundary_kind"});
  for (int j = 0; j < op.M1(); ++j)
    csv.row({"1", std::to_string(j), CsvWriter::num(op.lam1[j]), kind_name(op.b1.kind)});
  for (int k = 0; k < op.M2(); ++k)
    csv.row({"2", std::to_string(k), CsvWriter::num(op.lam2[k]), kind_name(op.b2.kind)});
}

}  // namespace dph::spectral
