#include "doctest.h"

#include <cmath>

#include "itolab/errors.hpp"
#include "itolab/poisson.hpp"
#include "itolab/prob.hpp"

using namespace itolab;
using poisson::GridPartition;

namespace {

// E|N - l|^p by direct summation of the Poisson series.
double series_moment(double p, double l) {
  double pk = std::exp(-l);
  double total = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) pk *= l / k;
    total += std::pow(std::abs(k - l), p) * pk;
  }
  return total;
}

}  // namespace

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(GridPartition::make({0.0, 1.0, 1.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(GridPartition::make({0.5, 1.0}, {1.0}), InvalidInput);
  CHECK_THROWS_AS(GridPartition::make({0.0, 1.0}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(GridPartition({0.0, 1.0}, {"A", "A"}, {1.0, 1.0}), InvalidInput);
  const auto g = GridPartition::make({0.0, 0.5, 2.0}, {0.4, 1.0});
  CHECK(g.cell_count() == 4);
  CHECK(g.cell(1, 0) == 2);
  CHECK(g.intensity(1, 1) == 1.5);
  CHECK(g.max_intensity() == 1.5);
  CHECK(g.interval_containing(0.5) == 0);
  CHECK(g.interval_containing(0.6) == 1);
  CHECK(g.interval_containing(3.0) == 2);
  CHECK(g.set_indices({"A1", "A0", "A1"}) == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(g.set_indices({"B"}), InvalidInput);
}

TEST_CASE("refinement") {
  const auto fine = GridPartition::make({0.0, 0.5, 1.0}, {1.0, 2.0});
  CHECK(poisson::refine(fine) == fine);

  const auto five = poisson::refine(GridPartition::make({0.0, 5.0}, {1.0}));
  REQUIRE(five.interval_count() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(five.intensity(i, 0) - 1.0) <= 1e-15);

  // ceil(2.5 * 0.8) = 2 pieces of intensity 1.
  const auto two = poisson::refine(GridPartition::make({0.0, 2.5}, {0.8}));
  REQUIRE(two.interval_count() == 2);
  CHECK(std::abs(two.intensity(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(two.intensity(1, 0) - 1.0) <= 1e-15);

  SUBCASE("property: refined intensities are at most one and pieces are minimal") {
    const std::vector<double> lengths = {0.3, 1.7, 2.0, 0.01, 4.4};
    std::vector<double> times{0.0};
    for (double l : lengths) times.push_back(times.back() + l);
    const auto g = GridPartition::make(times, {0.9, 0.35});
    const auto r = poisson::refine(g);
    CHECK(r.max_intensity() <= 1.0 + 1e-12);
    const auto parent = poisson::interval_parents(r, g);
    std::vector<int> pieces(lengths.size(), 0);
    for (auto c : parent) ++pieces[c];
    for (std::size_t i = 0; i < lengths.size(); ++i)
      CHECK(pieces[i] == static_cast<int>(std::max(1.0, std::ceil(lengths[i] * 0.9 - 1e-12))));
  }
}

TEST_CASE("breakpoints and parents") {
  const auto g = GridPartition::make({0.0, 1.0, 2.0}, {0.5});
  CHECK(poisson::with_breakpoint(g, 1.0) == g);
  CHECK(poisson::with_breakpoint(g, 5.0) == g);
  const auto h = poisson::with_breakpoint(g, 1.25);
  CHECK(h.time_points() == std::vector<double>{0.0, 1.0, 1.25, 2.0});
  CHECK(poisson::interval_parents(h, g) == std::vector<std::size_t>{0, 1, 1});
  CHECK_THROWS_AS(poisson::interval_parents(g, h), InvalidInput);
}

TEST_CASE("realizations") {
  const auto g = GridPartition::make({0.0, 0.25, 1.0}, {0.4, 1.0});
  const auto a = poisson::realize(g, 42);
  const auto b = poisson::realize(g, 42);
  CHECK(a.counts == b.counts);
  CHECK(a.point_times == b.point_times);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    CHECK(a.counts[c] >= 0);
    CHECK(a.compensated[c] == a.counts[c] - g.intensity(c));
    CHECK(a.point_times[c].size() == static_cast<std::size_t>(a.counts[c]));
    const std::size_t i = g.interval_of(c);
    for (double t : a.point_times[c]) CHECK((t > g.start(i) && t <= g.end(i)));
    CHECK(a.compensated_until(g, c, g.end(i)) == a.compensated[c]);
    CHECK(a.compensated_until(g, c, g.start(i)) == 0.0);
  }

  SUBCASE("compensated mean and count variance over 1e5 draws") {
    const std::size_t n = 100000;
    std::vector<double> sum(g.cell_count(), 0.0);
    std::vector<double> sq(g.cell_count(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      const auto r = poisson::realize(g, 7, s);
      for (std::size_t c = 0; c < g.cell_count(); ++c) {
        sum[c] += r.compensated[c];
        sq[c] += r.compensated[c] * r.compensated[c];
      }
    }
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const double lam = g.intensity(c);
      const double mean = sum[c] / n;
      CHECK(std::abs(mean) <= 3.0 * std::sqrt(lam / n));
      // The variance estimate has standard error sqrt((E(N-l)^4 - l^2) / n) = sqrt((l + 2 l^2) / n).
      const double var = sq[c] / n;
      CHECK(std::abs(var - prob::centered_poisson_moment(2.0, lam)) <= 3.0 * std::sqrt((lam + 2 * lam * lam) / n) + 3.0 * lam / n);
    }
  }

  SUBCASE("clipped compensation counts the points before t") {
    const auto r = poisson::realize(GridPartition::make({0.0, 1.0}, {1.0}), 3);
    const double t = 0.6;
    int before = 0;
    for (double s : r.point_times[0]) before += s <= t ? 1 : 0;
    CHECK(r.compensated_until(GridPartition::make({0.0, 1.0}, {1.0}), 0, t) == doctest::Approx(before - 0.6).epsilon(1e-15));
  }
}

TEST_CASE("log-spaced grids") {
  const auto l = poisson::log_spaced(1e-4, 1.0, 60);
  REQUIRE(l.size() == 60);
  CHECK(l.front() == 1e-4);
  CHECK(l.back() == 1.0);
  for (std::size_t k = 1; k + 1 < l.size(); ++k) CHECK(l[k] / l[k - 1] == doctest::Approx(l[k + 1] / l[k]).epsilon(1e-12));
}

TEST_CASE("centered moment ratios") {
  // p = 2: the variance equals lambda.
  for (double lam : poisson::log_spaced(1e-4, 1.0, 60)) {
    const auto env = poisson::moment_envelope(2.0, {lam}, 1e-15);
    CHECK(std::abs(env.lower - 1.0) <= 1e-9);
  }
  // p = 4: r = 1 + 3 lambda, close to 1 at 1e-4.
  CHECK(std::abs(poisson::moment_envelope(4.0, {1e-4}, 1e-15).upper - series_moment(4.0, 1e-4) / 1e-4) <= 1e-9);
  CHECK(std::abs(poisson::moment_envelope(4.0, {1e-4}, 1e-15).upper - 1.0) <= 4e-4);
  // p = 1, lambda = 1: the mean absolute deviation of Poisson(1) is 2/e.
  const auto one = poisson::moment_envelope(1.0, {1.0}, 1e-15);
  CHECK(std::abs(one.upper - 2.0 / std::exp(1.0)) <= 1e-12);
  CHECK_THROWS_AS(poisson::moment_envelope(2.0, {1.5}, 1e-15), InvalidInput);
  CHECK_THROWS_AS(poisson::moment_envelope(2.0, {0.0}, 1e-15), InvalidInput);
}

TEST_CASE("pointwise lower bound") {
  for (double p : {2.0, 2.5, 3.0, 4.0, 6.0})
    for (double lam : {1e-4, 0.01, 0.2, 0.5, 0.9, 1.0}) {
      const double f = std::pow(lam, p - 1) - lam * lam + lam - 1 + std::pow(1 - lam, p);
      const double hand = lam * (1 + std::exp(-lam) * f);
      CHECK(poisson::centered_moment_lower_bound(p, lam) == doctest::Approx(hand).epsilon(1e-15));
      CHECK(hand <= series_moment(p, lam) + 1e-12);
    }
  // At p = 2 the bound is exact.
  CHECK(std::abs(poisson::centered_moment_lower_bound(2.0, 0.37) - 0.37) <= 1e-15);
}

TEST_CASE("verifier rows") {
  const auto lams = poisson::log_spaced(1e-4, 1.0, 60);
  const auto rows = poisson::verify_centered_moments({1.0, 1.5, 2.0, 2.5, 3.0, 4.0}, lams);
  CHECK_FALSE(any_failed(rows));
  std::size_t hard = 0;
  for (const auto& r : rows) hard += r.status == Status::pass ? 1 : 0;
  CHECK(hard == 6 * (60 + 1));
  CHECK_THROWS_AS(poisson::verify_centered_moments({2.0}, {0.0}), InvalidInput);
  CHECK_THROWS_AS(poisson::verify_centered_moments({0.5}, {0.5}), InvalidInput);
}

TEST_CASE("property: ratios are finite and positive down to 1e-6") {
  for (double p : {1.0, 1.3, 2.0, 3.7, 5.0}) {
    const auto env = poisson::moment_envelope(p, poisson::log_spaced(1e-6, 1.0, 40), 1e-15);
    CHECK(env.lower > 0.0);
    CHECK(std::isfinite(env.upper));
  }
}
