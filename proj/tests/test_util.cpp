#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/config.hpp"
#include "core/csv.hpp"
#include "core/quad.hpp"
#include "core/rng.hpp"

using namespace dph;

TEST_CASE("config parses sections, comments, and typed lookups") {
  const Config c = Config::parse_text(
      "# leading comment\n"
      "[run]\n"
      "experiment = spectrum\n"
      "T = 0.25  # trailing comment\n"
      "paths=17\n"
      "\n"
      "[grid]\n"
      "n1 = 32\n"
      "flag = true\n"
      "levels = 0.1, 0.05,0.025\n");
  CHECK(c.has("run.experiment"));
  CHECK(c.get_str("run.experiment") == "spectrum");
  CHECK(c.get_num("run.T") == doctest::Approx(0.25));
  CHECK(c.get_int("run.paths") == 17);
  CHECK(c.get_int("grid.n1") == 32);
  CHECK(c.get_bool("grid.flag", false));
  CHECK(c.get_bool("grid.absent", true));
  const auto levels = c.get_list("grid.levels");
  REQUIRE(levels.size() == 3);
  CHECK(levels[1] == doctest::Approx(0.05));
  CHECK(c.get_str("run.missing", "fallback") == "fallback");
  CHECK(c.get_num("run.missing", 7.0) == 7.0);
}

TEST_CASE("config lookup failures carry the config error code") {
  const Config c = Config::parse_text("[a]\nx = not-a-number\n");
  CHECK_THROWS_AS((void)c.get_str("a.y"), Error);
  try {
    (void)c.get_num("a.x");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
}

TEST_CASE("canonical form is order-independent and drives the hash") {
  const Config a = Config::parse_text("[b]\ny = 2\n[a]\nx = 1\n");
  const Config b = Config::parse_text("[a]\nx = 1\n[b]\ny = 2\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  Config c = a;
  c.set("b.y", "3");
  CHECK(c.hash() != a.hash());
  CHECK(a.hash().size() == 16);  // 64-bit hex
}

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("csv writer emits a header and 17-digit round-trip numbers") {
  const std::string path = "test_util_io.csv";
  {
    CsvWriter w(path, {"alpha", "beta"});
    w.row({CsvWriter::num(1.0 / 3.0), CsvWriter::num(-2.5e-17)});
    CHECK_THROWS_AS(w.row({"only-one"}), Error);
  }
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "alpha,beta");
  REQUIRE(std::getline(in, line));
  const auto comma = line.find(',');
  REQUIRE(comma != std::string::npos);
  CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == 1.0 / 3.0);
  CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == -2.5e-17);
  std::remove(path.c_str());
}

TEST_CASE("counter rng is a pure function of its key") {
  CHECK(rng::normal(7, 1, 2, 3) == rng::normal(7, 1, 2, 3));
  CHECK(rng::normal(7, 1, 2, 3) != rng::normal(8, 1, 2, 3));
  CHECK(rng::normal(7, 1, 2, 3) != rng::normal(7, 1, 2, 4));
  const double u = rng::uniform01(rng::keyed(7, 1, 2, 3));
  CHECK(u > 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("normal draws have unit variance and no mean bias") {
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng::normal(42, 0, 0, i);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
  const auto r = quad::gauss_legendre(5, -1.0, 2.0);
  REQUIRE(r.nodes.size() == 5);
  for (int deg = 0; deg <= 9; ++deg) {
    double got = 0.0;
    for (int i = 0; i < 5; ++i) got += r.weights[i] * std::pow(r.nodes[i], deg);
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    CHECK(got == doctest::Approx(exact).epsilon(1e-13));
  }
  double wsum = 0.0;
  for (int i = 0; i < 5; ++i) wsum += r.weights[i];
  CHECK(wsum == doctest::Approx(3.0));
}

TEST_CASE("simpson and its prefix table agree with closed forms") {
  auto f = [](double x) { return std::sin(3.0 * x) + x * x; };
  const double exact = (1.0 - std::cos(3.0)) / 3.0 + 1.0 / 3.0;
  CHECK(quad::simpson(f, 0.0, 1.0, 64) == doctest::Approx(exact).epsilon(1e-10));

  const int m = 40;
  const auto pre = quad::simpson_prefix(f, 0.0, 1.0 / m, m);
  REQUIRE(pre.size() == size_t(m + 1));
  CHECK(pre[0] == 0.0);
  CHECK(pre[m] == doctest::Approx(exact).epsilon(1e-8));
  CHECK(pre[m / 2] == doctest::Approx(quad::simpson(f, 0.0, 0.5, 64)).epsilon(1e-8));
}
