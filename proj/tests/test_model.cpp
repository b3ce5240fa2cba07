#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/model.hpp"

using namespace dph;

TEST_CASE("boundary-compatible models satisfy every structural hypothesis") {
  for (const char* name : {"default-powerlaw", "constant-diffusion", "degenerate-flat"}) {
    const ModelSpec m = make_model(name);
    const HypothesisReport rep = validate_hypotheses(m, 64);
    INFO(name, ": ", rep.render());
    CHECK(rep.all_pass());
  }
}

TEST_CASE("the linear diagnostics model fails exactly the endpoint-flux hypothesis") {
  const HypothesisReport rep = validate_hypotheses(make_model("linear"), 64);
  INFO(rep.render());
  for (const auto& e : rep.entries) {
    if (e.name == "flux-critical-at-range-ends")
      CHECK_FALSE(e.pass);  // a1(1) = 1: transport does not die at the range top
    else
      CHECK(e.pass);
  }
}

TEST_CASE("unknown model names are config errors") {
  CHECK_THROWS_AS((void)make_model("no-such-model"), Error);
  try {
    (void)make_model("no-such-model");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
}

TEST_CASE("primitive pairs are consistent derivatives of their primitives") {
  const ModelSpec m = make_model("default-powerlaw");
  const double h = 1e-6;
  for (int i = 1; i < 40; ++i) {
    const double u = -0.2 + 1.4 * i / 40.0;
    CHECK(m.a1(u) == doctest::Approx((m.A1(u + h) - m.A1(u - h)) / (2 * h)).epsilon(1e-5));
    CHECK(m.b22(u) == doctest::Approx((m.B22(u + h) - m.B22(u - h)) / (2 * h)).epsilon(1e-5));
    CHECK(m.b22(u) == doctest::Approx(m.sigma(u) * m.sigma(u)).epsilon(1e-12));
    // the scalar companion shares the square relation b = (db)^2
    CHECK(m.b22(u) == doctest::Approx(m.db_scalar(u) * m.db_scalar(u)).epsilon(1e-12));
  }
}

TEST_CASE("the prefix table reproduces the running integral of sigma") {
  const ModelSpec m = make_model("default-powerlaw");
  // sigma = |u|, so the primitive from u_min-1 is (u|u| + 1)/2
  for (double u : {-0.9, -0.3, 0.0, 0.4, 1.0, 1.7}) {
    const double exact = 0.5 * (u * std::abs(u) + 1.0);
    CHECK(m.Sigma(u) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("eval_primitives rejects non-finite values with the numeric code") {
  ModelSpec m = make_model("linear");
  m.A1 = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  try {
    (void)eval_primitives(m, 0.5);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNumeric);
  }
}

TEST_CASE("mode sum G2 matches the stored weights") {
  const ModelSpec m = make_model("default-powerlaw");
  REQUIRE(m.K == 8);
  const double u = 0.37;
  double s = 0.0;
  for (int k = 0; k < m.K; ++k) s += m.g(k, u) * m.g(k, u);
  CHECK(m.G2(u) == doctest::Approx(s).epsilon(1e-15));
  // dyadic weights: the sum is dominated by, and bounded by, the first mode
  CHECK(m.G2(0.5) <= 2.0 * m.g(0, 0.5) * m.g(0, 0.5));
  // noise vanishes at the range endpoints so the range stays invariant
  CHECK(m.G2(0.0) == doctest::Approx(0.0).epsilon(1e-30));
  CHECK(m.G2(1.0) == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("kruzhkov fields are symmetric, monotone-compatible, and split") {
  const ModelSpec m = make_model("default-powerlaw");
  for (double u : {0.1, 0.45, 0.8})
    for (double v : {0.2, 0.45, 0.95}) {
      const auto f = kruzhkov_fields(m, u, v);
      const auto g = kruzhkov_fields(m, v, u);
      CHECK(f.F1 == doctest::Approx(g.F1).epsilon(1e-14));
      CHECK(f.Bfield == doctest::Approx(g.Bfield).epsilon(1e-14));
      // B22 is nondecreasing on [0,1], so the entropy diffusion field is >= 0
      CHECK(f.Bfield >= -1e-14);
      // positive parts reconstruct the modulus versions: |x| = x_+ + (-x)_+
      CHECK(f.F1p + g.F1p == doctest::Approx(f.F1).epsilon(1e-12));
      CHECK(f.Bfieldp + g.Bfieldp == doctest::Approx(f.Bfield).epsilon(1e-12));
    }
  // the noise coefficient difference controls the Kruzhkov gk field
  const double gk = kruzhkov_gk(m, 0, 0.3, 0.7);
  CHECK(std::abs(gk) <= std::abs(m.g(0, 0.3) - m.g(0, 0.7)) + 1e-14);
}

TEST_CASE("triangle gauge is a nonnegative betweenness defect") {
  CHECK(triangle_gauge(0.5, 0.2, 0.8) == doctest::Approx(0.0));   // w.. v brackets u
  CHECK(triangle_gauge(0.5, 0.6, 0.4) == doctest::Approx(0.0));   // u between w and v
  CHECK(triangle_gauge(0.9, 0.2, 0.3) == doctest::Approx(1.2));   // u outside
  for (double u : {0.0, 0.3, 0.9})
    for (double v : {0.1, 0.5})
      for (double w : {0.2, 0.8}) CHECK(triangle_gauge(u, v, w) >= -1e-15);
}

TEST_CASE("degenerate-flat model really is flat on the middle band") {
  const ModelSpec m = make_model("degenerate-flat");
  CHECK(m.b22(0.45) == 0.0);
  CHECK(m.b22(0.3) == 0.0);
  CHECK(m.b22(0.6) == 0.0);
  CHECK(m.b22(0.1) > 0.0);
  CHECK(m.b22(0.9) > 0.0);
  CHECK(m.A1(0.5) == 0.0);
  // flat band means B22 is constant there
  CHECK(m.B22(0.6) == doctest::Approx(m.B22(0.3)).epsilon(1e-14));
}
