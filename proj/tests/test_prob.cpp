#include "doctest.h"

#include <cmath>
#include <numeric>

#include "itolab/errors.hpp"
#include "itolab/prob.hpp"
#include "itolab/rng.hpp"

using namespace itolab;
using lq::LqElement;
using prob::FiniteProbabilitySpace;
using prob::RandomLqVariable;

namespace {

LqElement vec2(double a, double b) {
  Eigen::VectorXcd v(2);
  v << a, b;
  return LqElement::commutative(lq::FiniteMeasureSpace::counting(2), v);
}

}  // namespace

TEST_CASE("product spaces") {
  const FiniteProbabilitySpace coin({0.0, 1.0}, {0.5, 0.5});
  const auto two = prob::product_space({coin, coin});
  REQUIRE(two.atom_count() == 4);
  for (std::uint64_t a = 0; a < 4; ++a) CHECK(two.prob(a) == 0.25);

  const FiniteProbabilitySpace point;
  const auto same = prob::product_space({coin, point});
  REQUIRE(same.atom_count() == 2);
  CHECK(same.prob(0) == 0.5);

  SUBCASE("three 3-atom factors marginalize back to their inputs") {
    const std::vector<std::vector<double>> ps = {{0.2, 0.3, 0.5}, {0.6, 0.3, 0.1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    std::vector<FiniteProbabilitySpace> spaces;
    for (const auto& p : ps) spaces.emplace_back(std::vector<double>{0.0, 1.0, 2.0}, p);
    const auto prod = prob::product_space(spaces);
    REQUIRE(prod.atom_count() == 27);
    std::vector<std::vector<double>> marg(3, std::vector<double>(3, 0.0));
    std::vector<std::uint32_t> digits(3);
    double total = 0.0;
    for (std::uint64_t a = 0; a < 27; ++a) {
      prod.decode(a, digits);
      for (int k = 0; k < 3; ++k) marg[k][digits[k]] += prod.prob(a);
      total += prod.prob(a);
    }
    CHECK(std::abs(total - 1.0) <= 1e-15);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i) CHECK(std::abs(marg[k][i] - ps[k][i]) <= 1e-15);
  }
}

TEST_CASE("rademacher spaces are symmetric") {
  const auto one = prob::rademacher_space(1);
  REQUIRE(one.atom_count() == 2);
  CHECK(one.prob(0) == 0.5);
  const auto three = prob::rademacher_space(3);
  REQUIRE(three.atom_count() == 8);
  std::vector<double> mean(3, 0.0);
  for (std::uint64_t a = 0; a < 8; ++a) {
    CHECK(three.prob(a) == 0.125);
    const auto l = three.label(a);
    for (int k = 0; k < 3; ++k) mean[k] += three.prob(a) * l[k];
  }
  for (double m : mean) CHECK(m == 0.0);
  CHECK_THROWS_AS(prob::rademacher_space(25), InvalidInput);
}

TEST_CASE("exact moments") {
  const LqElement x = vec2(3.0, -4.0);
  for (double p : {1.0, 2.0, 5.0}) {
    CHECK(prob::exact_moment({RandomLqVariable::constant(x)}, p, 2.0) == doctest::Approx(5.0));
    CHECK(prob::exact_moment({RandomLqVariable::discrete({0.5, 0.5}, {x, -1.0 * x})}, p, 2.0) == doctest::Approx(5.0));
  }
  SUBCASE("two signs on orthogonal unit coordinates, p = q") {
    for (double p : {1.5, 3.0}) {
      // every sign pattern gives ||(+-1, +-1)||_p^p = 2
      const double oracle = std::pow(0.25 * 2.0 * 4, 1.0 / p);
      const std::vector<RandomLqVariable> items = {RandomLqVariable::discrete({0.5, 0.5}, {vec2(1, 0), vec2(-1, 0)}),
                                                   RandomLqVariable::discrete({0.5, 0.5}, {vec2(0, 1), vec2(0, -1)})};
      CHECK(prob::exact_moment(items, p, p) == doctest::Approx(oracle).epsilon(1e-14));
      CHECK(prob::rademacher_moment({vec2(1, 0), vec2(0, 1)}, p, p) == doctest::Approx(oracle).epsilon(1e-14));
    }
  }
  SUBCASE("two-atom scalar, p = q = 2") {
    const auto v = RandomLqVariable::discrete({0.3, 0.7}, {LqElement::scalar(2.0), LqElement::scalar(-1.0)});
    CHECK(prob::exact_moment({v}, 2.0, 2.0) == doctest::Approx(std::sqrt(0.3 * 4 + 0.7)).epsilon(1e-15));
  }
  SUBCASE("budget") {
    std::vector<LqElement> xs(20, LqElement::scalar(1.0));
    std::vector<RandomLqVariable> items;
    for (const auto& x : xs) items.push_back(RandomLqVariable::discrete({0.5, 0.5}, {x, -1.0 * x}));
    CHECK_THROWS_AS(prob::exact_moment(items, 2.0, 2.0, 1000), ResourceError);
    CHECK(prob::exact_moment(items, 2.0, 2.0) == doctest::Approx(std::sqrt(20.0)));
  }
}

TEST_CASE("truncated Poisson") {
  const auto zero = prob::truncated_poisson(0.0, 1e-12);
  REQUIRE(zero.probs.size() == 1);
  CHECK(zero.probs[0] == 1.0);
  const auto one = prob::truncated_poisson(1.0, 1e-12);
  CHECK(one.retained_mass >= 1.0 - 1e-12);
  // Mean of Poisson(0.5) by direct series: sum k e^{-l} l^k / k!.
  double oracle = 0.0;
  double term = std::exp(-0.5);
  for (int k = 1; k < 60; ++k) {
    term *= 0.5 / k;
    oracle += k * term;
  }
  CHECK(std::abs(prob::truncated_poisson(0.5, 1e-14).mean() - oracle) <= 1e-10);
}

TEST_CASE("centered Poisson moments") {
  for (double lam : {1e-4, 0.01, 0.3, 0.77, 1.0}) CHECK(std::abs(prob::centered_poisson_moment(2.0, lam) - lam) <= 1e-10);
  for (double p : {1.0, 2.0, 3.5}) CHECK(prob::centered_poisson_moment(p, 0.0) == 0.0);
  // Fourth cumulant expansion of exp(lambda(e^t - 1 - t)): E(N-l)^4 = l + 3 l^2.
  CHECK(std::abs(prob::centered_poisson_moment(4.0, 1.0) - 4.0) <= 1e-9);
  CHECK(std::abs(prob::centered_poisson_moment(4.0, 0.3) - (0.3 + 3 * 0.09)) <= 1e-10);
  // Third central moment is lambda; |.|^3 differs, so check the signed moment by direct series.
  double signed3 = 0.0;
  double pk = std::exp(-0.4);
  for (int k = 0; k < 80; ++k) {
    if (k > 0) pk *= 0.4 / k;
    signed3 += std::pow(k - 0.4, 3) * pk;
  }
  CHECK(signed3 == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("counter RNG") {
  CounterRng a(42, 3);
  CounterRng b(42, 3);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
  CounterRng c(42, 4);
  CounterRng d(42, 3);
  CHECK(c.next_u64() != d.next_u64());

  const std::size_t n = 100000;
  const FiniteProbabilitySpace coin({0.0, 1.0}, {0.5, 0.5});
  const auto draws = prob::sample(coin, 7, n);
  double mean = 0.0;
  for (auto a : draws) mean += static_cast<double>(a);
  mean /= n;
  CHECK(std::abs(mean - 0.5) <= 3.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("sampled Poisson second moment against the series") {
  const std::size_t n = 100000;
  const auto dist = prob::truncated_poisson(0.3, 1e-15);
  const auto ks = prob::sample(dist, 9, n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = (ks[i] - 0.3) * (ks[i] - 0.3);
  const auto est = prob::mean_estimate(y);
  CHECK(std::abs(est.value - prob::centered_poisson_moment(2.0, 0.3)) <= 3.0 * est.std_error);
}

TEST_CASE("Monte Carlo moments agree with enumeration") {
  std::vector<RandomLqVariable> items;
  for (int i = 0; i < 6; ++i)
    items.push_back(RandomLqVariable::discrete({0.2, 0.8}, {vec2(4.0, i), vec2(-1.0, -0.25 * i)}));
  const double exact = prob::exact_moment(items, 3.0, 2.0);
  const auto est = prob::mc_moment(items, 3.0, 2.0, 40000, 5);
  CHECK(std::abs(est.value - exact) <= 4.0 * est.std_error);
  const auto again = prob::mc_moment(items, 3.0, 2.0, 40000, 5);
  CHECK(again.value == est.value);
}

TEST_CASE("property: moments grow in p and satisfy the triangle inequality") {
  CounterRng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RandomLqVariable> items;
    for (int i = 0; i < 4; ++i) {
      const double a = rng.normal();
      const double b = rng.normal();
      items.push_back(RandomLqVariable::discrete({0.5, 0.5}, {vec2(a, b), vec2(-a, rng.normal())}));
    }
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      const double m = prob::exact_moment(items, p, 2.0);
      CHECK(m >= prev * (1 - 1e-12));
      prev = m;
    }
    double sum = 0.0;
    for (const auto& it : items) sum += prob::exact_moment({it}, 3.0, 2.0);
    CHECK(prob::exact_moment(items, 3.0, 2.0) <= sum * (1 + 1e-12));
  }
}
