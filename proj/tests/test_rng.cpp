#include <doctest.h>

#include <cmath>
#include <vector>

#include "icd/rng.hpp"

using icd::Rng;

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments beta_moments(double alpha, double beta, int draws, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.beta(alpha, beta);
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  return {mean, sum_sq / draws - mean * mean};
}

}  // namespace

TEST_CASE("uniform stays in [0,1) and is seed-deterministic") {
  Rng a(42), b(42), c(43);
  bool diverged = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(x == b.uniform());
    if (x != c.uniform()) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("uniform_int covers the range without bias artifacts") {
  Rng rng(7);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) ++counts[rng.uniform_int(10)];
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(11);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("Beta(1,1) is uniform") {
  const Moments m = beta_moments(1.0, 1.0, 100000, 1);
  CHECK(m.mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(m.mean - 0.5) < 0.005);
}

TEST_CASE("Beta(4,1) mean matches a/(a+b)") {
  const Moments m = beta_moments(4.0, 1.0, 100000, 2);
  CHECK(std::abs(m.mean - 0.8) < 0.005);
}

TEST_CASE("Beta(2.5,4) matches closed-form mean and variance") {
  const Moments m = beta_moments(2.5, 4.0, 100000, 3);
  const double a = 2.5, b = 4.0;
  const double mean = a / (a + b);
  const double var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
  CHECK(std::abs(m.mean - mean) < 0.005);
  CHECK(std::abs(m.variance - var) < 0.1 * var);
}

TEST_CASE("Beta with shape < 1 works through the boost path") {
  const Moments m = beta_moments(0.5, 0.5, 100000, 4);
  CHECK(std::abs(m.mean - 0.5) < 0.01);
  // Var of Beta(0.5,0.5) = 0.125.
  CHECK(std::abs(m.variance - 0.125) < 0.0125);
}

TEST_CASE("non-positive shapes are rejected") {
  Rng rng(5);
  CHECK_THROWS_AS(rng.beta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.beta(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.gamma(0.0), std::invalid_argument);
}

TEST_CASE("substreams are deterministic and distinct") {
  CHECK(Rng::substream(9, 0) == Rng::substream(9, 0));
  CHECK(Rng::substream(9, 0) != Rng::substream(9, 1));
  CHECK(Rng::substream(9, 0) != Rng::substream(10, 0));
}
