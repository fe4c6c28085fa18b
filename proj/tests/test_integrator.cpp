#include "doctest.h"

#include <cmath>

#include "itolab/errors.hpp"
#include "itolab/integrator.hpp"

using namespace itolab;
using integ::Coefficient;
using integ::Factor;
using integ::ProcessNorm;
using integ::SimpleAdaptedProcess;
using lq::LqElement;
using lq::Matrix;
using poisson::GridPartition;

namespace {

LqElement mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return LqElement::matrix(m);
}

double max_diff(const LqElement& a, const LqElement& b) { return (a.data() - b.data()).cwiseAbs().maxCoeff(); }
double max_abs(const LqElement& a) { return a.data().cwiseAbs().maxCoeff(); }

Coefficient counts_of(std::vector<std::size_t> cells, double weight, double constant = 0.0) {
  return Coefficient{constant, {Factor{std::move(cells), Factor::Kind::count, weight}}};
}

// Two intervals of one set; the second term's coefficient is the first cell's count.
SimpleAdaptedProcess two_stage(double lam0, double lam1) {
  SimpleAdaptedProcess F(GridPartition::make({0.0, lam0, lam0 + lam1}, {1.0}));
  F.add_term(0, 0, Coefficient::deterministic(1.0), LqElement::scalar(1.0));
  F.add_term(1, 0, counts_of({0}, 1.0), LqElement::scalar(1.0));
  return F;
}

}  // namespace

TEST_CASE("process construction enforces adaptedness") {
  SimpleAdaptedProcess F(GridPartition::make({0.0, 1.0, 2.0}, {0.5, 0.5}), mat2(0, 0, 0, 0));
  CHECK_THROWS_AS(F.add_term(0, 0, counts_of({0}, 1.0), mat2(1, 0, 0, 1)), InvalidInput);
  CHECK_THROWS_AS(F.add_term(1, 0, counts_of({3}, 1.0), mat2(1, 0, 0, 1)), InvalidInput);
  CHECK_THROWS_AS(F.add_term(2, 0, Coefficient::deterministic(1.0), mat2(1, 0, 0, 1)), InvalidInput);
  CHECK_THROWS_AS(F.add_term(0, 0, Coefficient::deterministic(1.0), LqElement::scalar(1.0)), InvalidInput);
  F.add_term(1, 1, counts_of({0, 1}, 2.0), mat2(1, 0, 0, 1));
  CHECK_FALSE(F.is_deterministic());
  CHECK(F.read_cells() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("pathwise integrals") {
  const auto grid = GridPartition::make({0.0, 0.5, 1.0}, {0.8, 1.0});
  const auto field = poisson::realize(grid, 11);
  const std::vector<std::size_t> all = grid.all_sets();

  SUBCASE("zero process") {
    SimpleAdaptedProcess F(grid, mat2(0, 0, 0, 0));
    CHECK(max_abs(integ::integrate(F, field, 1.0, all)) == 0.0);
    F.add_term(0, 0, Coefficient::deterministic(1.0), mat2(0, 0, 0, 0));
    CHECK(max_abs(integ::integrate(F, field, 1.0, all)) == 0.0);
  }
  SUBCASE("one deterministic cell is x times the compensated count") {
    const LqElement x = mat2(1.0, -2.0, 0.5, 3.0);
    SimpleAdaptedProcess F(grid, mat2(0, 0, 0, 0));
    F.add_term(0, 1, Coefficient::deterministic(1.0), x);
    const LqElement got = integ::integrate(F, field, 1.0, all);
    CHECK(max_diff(got, field.compensated[grid.cell(0, 1)] * x) <= 1e-15);
    CHECK(max_abs(integ::integrate(F, field, 1.0, {0})) == 0.0);
  }
  SUBCASE("truncation inside an interval matches the hand-clipped sum") {
    SimpleAdaptedProcess F(grid, LqElement::scalar(0.0));
    F.add_term(0, 0, Coefficient::deterministic(2.0), LqElement::scalar(1.0));
    F.add_term(1, 1, counts_of({grid.cell(0, 0)}, 1.0, 0.5), LqElement::scalar(-3.0));
    for (double t : {0.3, 0.5, 0.75, 1.0}) {
      double oracle = 0.0;
      for (const auto& term : F.terms()) {
        const std::size_t i = grid.interval_of(term.cell);
        const double a = grid.start(i);
        const double b = std::min(grid.end(i), t);
        if (b <= a) continue;
        int n = 0;
        for (double s : field.point_times[term.cell]) n += s <= t ? 1 : 0;
        const double comp = n - (b - a) * grid.measures()[grid.set_of(term.cell)];
        const double coef = term.coefficient.evaluate(field.counts, grid).real();
        oracle += coef * comp * term.value.data()(0, 0).real();
      }
      INFO("t=" << t);
      CHECK(std::abs(integ::integrate(F, field, t, all).data()(0, 0).real() - oracle) <= 1e-14);
    }
  }
  SUBCASE("linearity") {
    SimpleAdaptedProcess F(grid, mat2(0, 0, 0, 0));
    F.add_term(0, 0, Coefficient::deterministic(1.0), mat2(1, 2, 3, 4));
    F.add_term(1, 0, counts_of({1}, 1.0), mat2(0, 1, 1, 0));
    const LqElement once = integ::integrate(F, field, 1.0, all);
    CHECK(max_diff(integ::integrate(F.scaled(-2.5), field, 1.0, all), -2.5 * once) <= 1e-14);
  }
}

TEST_CASE("exact moments") {
  const std::vector<std::size_t> all{0};
  const integ::ExactOptions tight{1e-15};
  SUBCASE("one deterministic cell") {
    const LqElement x = mat2(1.0, 2.0, 0.0, -1.0);
    for (double lam : {0.1, 0.6, 1.0}) {
      SimpleAdaptedProcess F(GridPartition::make({0.0, lam}, {1.0}), mat2(0, 0, 0, 0));
      F.add_term(0, 0, Coefficient::deterministic(1.0), x);
      // E(N - l)^2 = l and E(N - l)^4 = l + 3 l^2.
      const auto m2 = integ::exact_moment(F, lam, all, 2.0, 3.0, tight);
      CHECK(std::abs(m2.value - lq::norm_q(x, 3.0) * std::sqrt(lam)) <= 1e-9);
      const auto m4 = integ::exact_moment(F, lam, all, 4.0, 3.0, tight);
      CHECK(std::abs(m4.value - lq::norm_q(x, 3.0) * std::pow(lam + 3 * lam * lam, 0.25)) <= 1e-9);
      const auto d4 = integ::exact_decoupled_moment(F, lam, all, 4.0, 3.0, tight);
      CHECK(std::abs(d4.value - m4.value) <= m4.truncation_tolerance + d4.truncation_tolerance + 1e-14);
    }
  }
  SUBCASE("adapted two-stage process against hand enumeration") {
    // int = Ntilde_0 + N_0 Ntilde_1, so E|int|^2 = l0 + E[N_0^2] l1 = l0 + (l0 + l0^2) l1.
    const double l0 = 0.5;
    const double l1 = 0.7;
    const auto F = two_stage(l0, l1);
    const auto m = integ::exact_moment(F, l0 + l1, all, 2.0, 2.0, tight);
    CHECK(std::abs(m.value - std::sqrt(l0 + (l0 + l0 * l0) * l1)) <= 1e-9);
    // The decoupled integral Ntilde_0^c + N_0 Ntilde_1^c has the same second moment.
    const auto d = integ::exact_decoupled_moment(F, l0 + l1, all, 2.0, 2.0, tight);
    CHECK(std::abs(d.value - m.value) <= 1e-9);
    CHECK(std::abs(integ::exact_mean(F, l0 + l1, all, tight).data()(0, 0)) <= 1e-10);
  }
  SUBCASE("zero process") {
    SimpleAdaptedProcess F(GridPartition::make({0.0, 1.0}, {1.0}));
    F.add_term(0, 0, Coefficient::deterministic(0.0), LqElement::scalar(1.0));
    CHECK(integ::exact_moment(F, 1.0, all, 3.0, 2.0).value == 0.0);
    CHECK(integ::exact_running_max_moment(F, 1.0, all, 3.0, 2.0).value == 0.0);
  }
}

TEST_CASE("running maximum") {
  const std::vector<std::size_t> all{0};
  SUBCASE("one cell: the supremum is the terminal value") {
    SimpleAdaptedProcess F(GridPartition::make({0.0, 0.8}, {1.0}));
    F.add_term(0, 0, Coefficient::deterministic(1.0), LqElement::scalar(2.0));
    const auto rm = integ::exact_running_max_moment(F, 0.8, all, 3.0, 2.0);
    const auto term = integ::exact_moment(F, 0.8, all, 3.0, 2.0);
    CHECK(std::abs(rm.value - term.value) <= 1e-12);
    const auto est = integ::running_max_moment(F, 0.8, all, 3.0, 2.0, 2000, 5);
    CHECK(est.running_max.value == est.terminal.value);
  }
  SUBCASE("Doob domination from one Monte Carlo run") {
    const auto F = two_stage(0.6, 0.9);
    for (double p : {1.5, 2.0, 3.0}) {
      const auto est = integ::running_max_moment(F, 1.5, all, p, 2.0, 20000, 3);
      const double pc = p / (p - 1.0);
      CHECK(est.running_max.value <= pc * est.terminal.value + 3.0 * (est.running_max.std_error + pc * est.terminal.std_error));
      CHECK(est.running_max.value >= est.terminal.value);
    }
    const auto exact = integ::exact_running_max_moment(F, 1.5, all, 2.0, 2.0);
    CHECK(exact.value <= 2.0 * integ::exact_moment(F, 1.5, all, 2.0, 2.0).value);
  }
  SUBCASE("zero process") {
    SimpleAdaptedProcess F(GridPartition::make({0.0, 1.0}, {1.0}));
    F.add_term(0, 0, Coefficient::deterministic(1.0), LqElement::scalar(0.0));
    CHECK(integ::running_max_moment(F, 1.0, all, 2.0, 2.0, 100, 1).running_max.value == 0.0);
  }
}

TEST_CASE("Monte Carlo moments agree with enumeration") {
  const auto F = two_stage(0.4, 0.8);
  const auto exact = integ::exact_moment(F, 1.2, {0}, 3.0, 2.0);
  const auto mc = integ::mc_moment(F, 1.2, {0}, 3.0, 2.0, 40000, 8);
  CHECK(std::abs(mc.value - exact.value) <= 4.0 * mc.std_error + exact.truncation_tolerance);
  const auto again = integ::mc_moment(F, 1.2, {0}, 3.0, 2.0, 40000, 8);
  CHECK(again.value == mc.value);
}

TEST_CASE("process norms") {
  const std::vector<std::size_t> all{0};
  const LqElement x = mat2(2.0, 0.0, 1.0, -1.0);
  const double lam = 0.35;
  SimpleAdaptedProcess F(GridPartition::make({0.0, lam}, {1.0}), mat2(0, 0, 0, 0));
  F.add_term(0, 0, Coefficient::deterministic(1.0), x);
  const double p = 3.0;
  const double q = 1.5;
  const double nx = lq::norm_q(x, q);
  SUBCASE("single deterministic cell") {
    CHECK(integ::process_norm(F, lam, all, p, q, ProcessNorm::D_qq) == doctest::Approx(nx * std::pow(lam, 1 / q)).epsilon(1e-12));
    CHECK(integ::process_norm(F, lam, all, p, q, ProcessNorm::D_pq) == doctest::Approx(nx * std::pow(lam, 1 / p)).epsilon(1e-12));
    // The column square function of one term is |x| sqrt(lambda); for a 2x2 x its norm
    // is the q-norm of x scaled by sqrt(lambda).
    CHECK(integ::process_norm(F, lam, all, p, q, ProcessNorm::S_c) == doctest::Approx(nx * std::sqrt(lam)).epsilon(1e-12));
    CHECK(integ::process_norm(F, lam, all, p, q, ProcessNorm::S_r) == doctest::Approx(nx * std::sqrt(lam)).epsilon(1e-12));
  }
  SUBCASE("zero and homogeneity") {
    const auto Z = F.scaled(0.0);
    for (auto w : {ProcessNorm::S_c, ProcessNorm::S_r, ProcessNorm::D_qq, ProcessNorm::D_pq, ProcessNorm::I_regime}) {
      CHECK(integ::process_norm(Z, lam, all, p, q, w) == 0.0);
      const double base = integ::process_norm(F, lam, all, p, q, w);
      CHECK(integ::process_norm(F.scaled(-4.0), lam, all, p, q, w) == doctest::Approx(4.0 * base).epsilon(1e-12));
    }
  }
  CHECK(integ::process_norm_from_string(integ::to_string(ProcessNorm::D_pq)) == ProcessNorm::D_pq);
  CHECK_THROWS_AS(integ::process_norm_from_string("bogus"), InvalidInput);
}

TEST_CASE("grid refinement leaves integrals and norms unchanged") {
  const auto F = two_stage(0.9, 0.9);
  const auto fine = poisson::refine(poisson::with_breakpoint(GridPartition::make({0.0, 0.9, 1.8}, {1.0}), 1.3));
  const auto G = F.refined(fine);
  const std::vector<std::size_t> all{0};
  const double a = integ::exact_moment(F, 1.8, all, 2.0, 2.0).value;
  const double b = integ::exact_moment(G, 1.8, all, 2.0, 2.0).value;
  CHECK(std::abs(a - b) <= 1e-10 * a);
  for (auto w : {ProcessNorm::S, ProcessNorm::D_qq, ProcessNorm::D_pq}) {
    const double u = integ::process_norm(F, 1.8, all, 3.0, 2.0, w, seq::Mode::commutative);
    const double v = integ::process_norm(G, 1.8, all, 3.0, 2.0, w, seq::Mode::commutative);
    CHECK(std::abs(u - v) <= 1e-10 * u);
  }
}

TEST_CASE("martingale property") {
  const auto grid = GridPartition::make({0.0, 0.5, 1.0, 1.5}, {0.7, 0.6});
  SimpleAdaptedProcess F(grid, mat2(0, 0, 0, 0));
  F.add_term(0, 1, Coefficient::deterministic(1.0), mat2(1, 1, 0, 1));
  F.add_term(1, 0, Coefficient{0.5, {Factor{{grid.cell(0, 0), grid.cell(0, 1)}, Factor::Kind::occupied, 2.0}}}, mat2(0, 1, 1, 0));
  F.add_term(2, 1, Coefficient{0.0, {Factor{{grid.cell(1, 0)}, Factor::Kind::compensated, -1.0}}}, mat2(3, 0, 0, 1));
  for (double s : {0.5, 0.8, 1.5}) CHECK(max_abs(integ::exact_mean(F, s, grid.all_sets(), {1e-15})) <= 1e-10);
}

TEST_CASE("grid conditional expectation") {
  const auto grid = GridPartition::make({0.0, 1.0, 2.0}, {0.5, 1.0});
  integ::CellCoefficients y;
  y.outer = {0.25, 0.75};
  for (int k = 0; k < 8; ++k) y.values.push_back(LqElement::scalar(k - 3.0));
  SUBCASE("cellwise constant input is unchanged") {
    const auto back = integ::grid_condition(integ::as_fine(y, grid), grid);
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(back.values[k].data()(0, 0) - y.values[k].data()(0, 0)) <= 1e-15);
  }
  SUBCASE("indicator of half a cell averages to one half") {
    integ::FineProcess G;
    G.outer = {1.0};
    G.shape = LqElement::scalar(0.0);
    G.pieces.push_back({1.0, 1.5, 1, 1.0, {LqElement::scalar(1.0)}});
    const auto c = integ::grid_condition(G, grid);
    for (std::size_t k = 0; k < grid.cell_count(); ++k)
      CHECK(c.values[k].data()(0, 0) == (k == grid.cell(1, 1) ? lq::cplx(0.5) : lq::cplx(0.0)));
    // Half the set for the whole interval gives the same average.
    G.pieces[0] = {1.0, 2.0, 1, 0.5, {LqElement::scalar(1.0)}};
    CHECK(integ::grid_condition(G, grid).values[grid.cell(1, 1)].data()(0, 0) == lq::cplx(0.5));
  }
  SUBCASE("mass outside the grid is dropped") {
    integ::FineProcess G;
    G.outer = {1.0};
    G.shape = LqElement::scalar(0.0);
    G.pieces.push_back({0.0, 2.0, integ::kOutsideGrid, 3.0, {LqElement::scalar(5.0)}});
    G.pieces.push_back({2.0, 3.0, 0, 0.5, {LqElement::scalar(5.0)}});
    for (const auto& v : integ::grid_condition(G, grid).values) CHECK(max_abs(v) == 0.0);
  }
  SUBCASE("property: projection and contraction of every norm") {
    integ::FineProcess G;
    G.outer = {0.4, 0.6};
    G.shape = mat2(0, 0, 0, 0);
    G.pieces.push_back({0.0, 0.3, 0, 0.5, {mat2(1, 0, 0, 2), mat2(0, 1, 0, 0)}});
    G.pieces.push_back({0.3, 1.0, 0, 0.5, {mat2(-1, 1, 0, 0), mat2(2, 0, 1, 0)}});
    G.pieces.push_back({0.5, 2.0, 1, 0.4, {mat2(0, 0, 3, 1), mat2(1, 1, 1, 1)}});
    G.pieces.push_back({1.0, 2.0, 1, 0.6, {mat2(1, -2, 0, 0), mat2(0, 0, 0, -1)}});
    const auto once = integ::grid_condition(G, grid);
    const auto twice = integ::grid_condition(integ::as_fine(once, grid), grid);
    for (std::size_t k = 0; k < once.values.size(); ++k) CHECK(max_diff(once.values[k], twice.values[k]) <= 1e-14);
    const auto fine = integ::field_of(G);
    const auto coarse = integ::field_of(once, grid);
    for (double p : {1.5, 3.0})
      for (double q : {1.5, 4.0})
        for (seq::Leaf l : {seq::Leaf::S_c, seq::Leaf::S_r, seq::Leaf::D_qq, seq::Leaf::D_pq})
          CHECK(seq::leaf_norm(coarse, l, p, q) <= seq::leaf_norm(fine, l, p, q) * (1 + 1e-12));
  }
}

TEST_CASE("decoupling construction") {
  SUBCASE("single step arithmetic") {
    const auto path = integ::decoupling_construction({LqElement::scalar(1.0)}, {2.0}, {0.0});
    REQUIRE(path.d.size() == 2);
    CHECK(path.d[0].data()(0, 0) == lq::cplx(1.0));
    CHECK(path.d[1].data()(0, 0) == lq::cplx(1.0));
    CHECK(path.sum_error == 0.0);
    CHECK(path.alternating_error == 0.0);
  }
  SUBCASE("equal martingales and copies give vanishing even terms") {
    const auto path = integ::decoupling_construction({mat2(1, 2, 3, 4), mat2(0, 1, 0, 1), mat2(5, 0, 0, 5)},
                                                     {0.3, -1.2, 2.0}, {0.3, -1.2, 2.0});
    for (std::size_t i = 1; i < path.d.size(); i += 2) CHECK(max_abs(path.d[i]) == 0.0);
  }
  CHECK_THROWS_AS(integ::decoupling_construction({LqElement::scalar(1.0)}, {1.0, 2.0}, {0.0}), InvalidInput);
  SUBCASE("adapted three-stage instance under enumeration") {
    const auto grid = GridPartition::make({0.0, 0.4, 0.9, 1.5}, {1.0});
    SimpleAdaptedProcess F(grid, mat2(0, 0, 0, 0));
    F.add_term(0, 0, Coefficient::deterministic(1.0), mat2(1, 0.5, 0, 1));
    F.add_term(1, 0, counts_of({0}, 0.7, 0.2), mat2(0, 1, -1, 0));
    F.add_term(2, 0, Coefficient{1.0, {Factor{{0, 1}, Factor::Kind::compensated, -1.3}}}, mat2(2, 0, 0, -1));
    const auto ids = integ::verify_decoupling_identities(F, 1.5, {0});
    CHECK(ids.paths > 100);
    CHECK(ids.max_sum_error <= 1e-14);
    CHECK(ids.max_alternating_error <= 1e-14);
  }
}
