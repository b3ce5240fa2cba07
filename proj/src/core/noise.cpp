#include "core/noise.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "core/rng.hpp"

namespace dph {

NoisePath NoisePath::generate(uint64_t seed, int K, double T, int n_fine) {
  if (K < 0) fail_config("noise path cannot have a negative mode count");
  if (n_fine <= 0) fail_config("noise path needs a positive step count");
  if (!(T > 0.0)) fail_config("noise path needs a positive horizon");
  NoisePath p;
  p.seed = seed;
  p.K = K;
  p.n_fine = n_fine;
  p.T = T;
  p.inc.resize(K, n_fine);
  const double s = std::sqrt(T / n_fine);
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < n_fine; ++i)
      p.inc(k, i) = s * rng::normal(seed, uint64_t(k), uint64_t(i), 0);
  return p;
}

double NoisePath::increment(int k, int i, int factor) const {
  if (k < 0 || k >= K) fail_config("noise mode index out of range");
  if (factor <= 0 || n_fine % factor != 0) fail_config("coarse step must divide the fine grid");
  const int i0 = i * factor;
  if (i0 < 0 || i0 + factor > n_fine) fail_config("noise step index out of range");
  double s = 0.0;
  for (int j = 0; j < factor; ++j) s += inc(k, i0 + j);
  return s;
}

namespace {
constexpr char kMagic[4] = {'D', 'P', 'H', 'N'};
}

void NoisePath::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail_config("cannot open noise file for writing: " + path);
  std::fwrite(kMagic, 1, 4, f);
  uint64_t s = seed, n = uint64_t(n_fine);
  uint32_t k = uint32_t(K);
  double t = T;
  std::fwrite(&s, 8, 1, f);
  std::fwrite(&k, 4, 1, f);
  std::fwrite(&n, 8, 1, f);
  std::fwrite(&t, 8, 1, f);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < n_fine; ++b) {
      double v = inc(a, b);
      std::fwrite(&v, 8, 1, f);
    }
  std::fclose(f);
}

NoisePath NoisePath::load(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) fail_config("cannot open noise file: " + path);
  char magic[4];
  if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    std::fclose(f);
    fail_config("not a noise file: " + path);
  }
  NoisePath p;
  uint64_t s = 0, n = 0;
  uint32_t k = 0;
  double t = 0;
  bool ok = std::fread(&s, 8, 1, f) == 1 && std::fread(&k, 4, 1, f) == 1 &&
            std::fread(&n, 8, 1, f) == 1 && std::fread(&t, 8, 1, f) == 1;
  if (!ok || k == 0 || n == 0) {
    std::fclose(f);
    fail_config("truncated noise file: " + path);
  }
  p.seed = s;
  p.K = int(k);
  p.n_fine = int(n);
  p.T = t;
  p.inc.resize(p.K, p.n_fine);
  for (int a = 0; a < p.K; ++a)
    for (int b = 0; b < p.n_fine; ++b) {
      double v;
      if (std::fread(&v, 8, 1, f) != 1) {
        std::fclose(f);
        fail_config("truncated noise file: " + path);
      }
      p.inc(a, b) = v;
    }
  std::fclose(f);
  return p;
}

Mat phi_apply(const ModelSpec& m, const Mat& state, int k) {
  if (k < 0 || k >= m.K) fail_config("noise mode index out of range");
  Mat out(state.rows(), state.cols());
  for (Eigen::Index i = 0; i < state.rows(); ++i)
    for (Eigen::Index j = 0; j < state.cols(); ++j) out(i, j) = m.g(k, state(i, j));
  return out;
}

Vec stochastic_convolution(const Vec& lam, const NoisePath& path, int k, int factor,
                           const std::function<Vec(int)>& integrand) {
  const int n = path.n_fine / factor;
  const double dt = path.dt_fine() * factor;
  const double T = path.T;
  Vec acc = Vec::Zero(lam.size());
  for (int i = 0; i < n; ++i) {
    const double w = path.increment(k, i, factor);
    const Vec f = integrand(i);
    if (f.size() != lam.size()) fail_config("integrand size mismatch in stochastic convolution");
    const double t = i * dt;
    acc.array() += (-(T - t) * lam.array()).exp() * f.array() * w;
  }
  return acc;
}

}  // namespace dph
