#include <doctest.h>

#include <cmath>

#include "isildpc/exit_surface.hpp"
#include "isildpc/jfunction.hpp"
#include "isildpc/rng.hpp"
#include "oracles.hpp"

using namespace isildpc;

TEST_CASE("gauss-hermite nodes integrate polynomials exactly") {
  auto gh = gauss_hermite(64);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < 64; ++i) {
    m0 += gh.weights[i];
    m2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
    m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
  }
  const double sqrt_pi = std::sqrt(M_PI);
  CHECK(m0 == doctest::Approx(sqrt_pi).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-12));
}

TEST_CASE("j function endpoints and monotonicity") {
  CHECK(j_fun(0.0) == 0.0);
  CHECK(j_fun(100.0) > 0.9999);
  double prev = -1.0;
  for (double s = 0.0; s <= 12.0; s += 0.05) {
    double v = j_fun(s);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("j round trips") {
  CHECK(j_inv(j_fun(1.7)) == doctest::Approx(1.7).epsilon(1e-5));
  for (double mi = 0.0; mi <= 1.0 - 1e-6; mi += 0.001) {
    double err = std::fabs(j_fun(j_inv(mi)) - mi);
    CHECK(err < 1e-6);
  }
  // documented cap at mi = 1
  CHECK(j_inv(1.0) <= kJSigmaCap);
  CHECK(j_inv(1.0) > 9.0);
  // table-backed forward agrees with quadrature
  for (double s = 0.0; s < 24.0; s += 0.0317)
    CHECK(std::fabs(j_fun_table(s) - j_fun(s)) < 1e-8);
}

TEST_CASE("j matches a direct monte-carlo estimate") {
  Rng rng(7);
  const double sigma = 2.0;
  double acc = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    double l = 0.5 * sigma * sigma + sigma * rng.gaussian();
    acc += std::log1p(std::exp(-l)) / std::log(2.0);
  }
  CHECK(j_fun(sigma) == doctest::Approx(1.0 - acc / n).epsilon(0.01));
}

TEST_CASE("synthetic surface lookup is monotone and clamped") {
  ExitSurface s = oracle::synthetic_surface(-4.0, 4.0, 0.5);
  CHECK(s.covers_axis(0.0));
  CHECK_FALSE(s.covers_axis(7.0));
  CHECK_THROWS(s.lookup(0.5, 9.0));
  double prev = -1.0;
  for (double ia = 0.0; ia <= 1.0; ia += 0.01) {
    double v = s.lookup(ia, 1.25);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  prev = -1.0;
  for (double e = -4.0; e <= 4.0; e += 0.01) {
    double v = s.lookup(0.6, e);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // rate conversion: a rate-1/2 query sits 3.01 dB below the axis
  CHECK(s.axis_value(2.0, 0.5) == doctest::Approx(2.0 - 3.0102999566).epsilon(1e-9));
}

TEST_CASE("surface csv round trip") {
  ExitSurface s = oracle::synthetic_surface(-2.0, 2.0, 1.0);
  const std::string path = "surface_test_tmp.csv";
  save_surface(s, path);
  ExitSurface loaded = load_surface(path);
  REQUIRE(loaded.ebno_grid().size() == s.ebno_grid().size());
  REQUIRE(loaded.ia_grid().size() == s.ia_grid().size());
  for (std::size_t e = 0; e < s.ebno_grid().size(); ++e)
    for (std::size_t i = 0; i < s.ia_grid().size(); ++i)
      CHECK(loaded.at(static_cast<int>(e), static_cast<int>(i)) ==
            s.at(static_cast<int>(e), static_cast<int>(i)));
  CHECK(loaded.channel_id() == "synthetic");
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}
