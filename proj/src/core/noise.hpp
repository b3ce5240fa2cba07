#pragma once
#include <string>

#include "core/common.hpp"
#include "core/model.hpp"

namespace dph {

// Cylindrical Wiener increments on K modes over a uniform fine grid of [0, T].
// Runs with coarser steps consume block sums, so refinements share one path.
struct NoisePath {
  uint64_t seed = 0;
  int K = 0;
  int n_fine = 0;
  double T = 0.0;
  Mat inc;  // K x n_fine

  double dt_fine() const { return T / n_fine; }

  static NoisePath generate(uint64_t seed, int K, double T, int n_fine);

  // sum of fine increments for coarse step i when each coarse step spans
  // `factor` fine steps
  double increment(int k, int i, int factor) const;

  void save(const std::string& path) const;
  static NoisePath load(const std::string& path);
};

// Diffusion operator applied to a state grid: (Phi(u) e_k)(x) = g_k(u(x)).
Mat phi_apply(const ModelSpec& m, const Mat& state, int k);

// Discrete stochastic convolution sum_i e^{-lam (T - t_i)} F(i) dbeta_i for a
// diagonal semigroup; matches the solver's left-endpoint convention.
Vec stochastic_convolution(const Vec& lam, const NoisePath& path, int k, int factor,
                           const std::function<Vec(int)>& integrand);

}  // namespace dph
