#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "core/noise.hpp"

using namespace dph;

TEST_CASE("paths are reproducible functions of the seed") {
  const NoisePath a = NoisePath::generate(11, 4, 0.25, 64);
  const NoisePath b = NoisePath::generate(11, 4, 0.25, 64);
  const NoisePath c = NoisePath::generate(12, 4, 0.25, 64);
  CHECK((a.inc - b.inc).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.inc - c.inc).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.dt_fine() == doctest::Approx(0.25 / 64));
}

TEST_CASE("increments carry the brownian variance") {
  const int K = 2, n = 8192;
  const double T = 1.0;
  const NoisePath p = NoisePath::generate(7, K, T, n);
  for (int k = 0; k < K; ++k) {
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      s1 += p.inc(k, i);
      s2 += p.inc(k, i) * p.inc(k, i);
    }
    CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(double(n)) * std::sqrt(T / n));
    CHECK(s2 / n == doctest::Approx(T / n).epsilon(0.06));
  }
}

TEST_CASE("coarse increments are exact block sums, so refinements share the path") {
  const NoisePath p = NoisePath::generate(3, 3, 0.5, 32);
  for (int k = 0; k < 3; ++k) {
    // factor 4: coarse step i spans fine steps 4i..4i+3
    for (int i = 0; i < 8; ++i) {
      double manual = 0.0;
      for (int j = 0; j < 4; ++j) manual += p.inc(k, 4 * i + j);
      CHECK(p.increment(k, i, 4) == doctest::Approx(manual).epsilon(1e-15));
    }
    // two half-steps add to a whole step
    for (int i = 0; i < 16; ++i)
      CHECK(p.increment(k, i, 2) ==
            doctest::Approx(p.increment(k, 2 * i, 1) + p.increment(k, 2 * i + 1, 1))
                .epsilon(1e-15));
  }
}

TEST_CASE("invalid path requests are config errors") {
  CHECK_THROWS_AS((void)NoisePath::generate(1, -1, 0.25, 16), Error);
  CHECK_THROWS_AS((void)NoisePath::generate(1, 2, 0.0, 16), Error);
  CHECK_THROWS_AS((void)NoisePath::generate(1, 2, 0.25, 0), Error);
  const NoisePath p = NoisePath::generate(1, 2, 0.25, 16);
  CHECK_THROWS_AS((void)p.increment(2, 0, 1), Error);   // mode out of range
  CHECK_THROWS_AS((void)p.increment(0, 0, 3), Error);   // factor does not divide
  CHECK_THROWS_AS((void)p.increment(0, 16, 1), Error);  // step out of range
}

TEST_CASE("a zero-mode path is valid and means noise-off") {
  const NoisePath p = NoisePath::generate(9, 0, 0.25, 16);
  CHECK(p.K == 0);
  CHECK(p.inc.rows() == 0);
}

TEST_CASE("save and load round-trip the exact increments") {
  const std::string path = "test_noise_io.bin";
  const NoisePath p = NoisePath::generate(21, 3, 0.125, 32);
  p.save(path);
  const NoisePath q = NoisePath::load(path);
  CHECK(q.seed == p.seed);
  CHECK(q.K == p.K);
  CHECK(q.n_fine == p.n_fine);
  CHECK(q.T == p.T);
  CHECK((q.inc - p.inc).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)NoisePath::load("no-such-file.bin"), Error);
}

TEST_CASE("phi_apply evaluates the mode coefficient entrywise") {
  const ModelSpec m = make_model("default-powerlaw");
  Mat state(2, 2);
  state << 0.1, 0.4, 0.7, 1.0;
  const Mat out = phi_apply(m, state, 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(out(i, j) == doctest::Approx(m.g(1, state(i, j))));
  CHECK_THROWS_AS((void)phi_apply(m, state, m.K), Error);
}

TEST_CASE("stochastic convolution matches its direct sum on a tiny case") {
  const NoisePath p = NoisePath::generate(5, 1, 1.0, 8);
  Vec lam(2);
  lam << 0.0, 2.0;
  auto integrand = [](int i) {
    Vec f(2);
    f << 1.0, double(i);
    return f;
  };
  const Vec got = stochastic_convolution(lam, p, 0, 2, integrand);
  // lam = 0 row: plain sum of F * dbeta over the 4 coarse steps
  double direct0 = 0.0, direct1 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double w = p.increment(0, i, 2);
    direct0 += 1.0 * w;
    direct1 += std::exp(-2.0 * (1.0 - i * 0.25)) * double(i) * w;
  }
  CHECK(got[0] == doctest::Approx(direct0).epsilon(1e-14));
  CHECK(got[1] == doctest::Approx(direct1).epsilon(1e-14));
}
