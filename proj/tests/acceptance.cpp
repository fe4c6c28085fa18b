// Acceptance suite: twelve criteria, one [PASS]/[FAIL] line each, nonzero exit
// on any failure. A criterion fails when its assertions fail or when it runs
// past its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "itolab/errors.hpp"
#include "itolab/integrator.hpp"
#include "itolab/lab.hpp"
#include "itolab/poisson.hpp"
#include "itolab/prob.hpp"
#include "itolab/randmat.hpp"
#include "itolab/rng.hpp"
#include "itolab/seqnorms.hpp"

using namespace itolab;
using integ::Coefficient;
using integ::Factor;
using integ::SimpleAdaptedProcess;
using lq::LqElement;
using lq::Matrix;
using poisson::GridPartition;
using prob::RandomLqVariable;
using seq::LqSequence;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures with a short reason for the first one.
struct Tally {
  int checked = 0;
  int failed = 0;
  std::string first;
  double worst = 0.0;  // criterion-specific worst margin or error

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first = what;
  }
  void rows(const std::vector<CheckReport>& reports, const std::string& where) {
    for (const auto& r : reports)
      if (r.status == Status::fail) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s: %s %s lhs=%.6g c*rhs=%.6g", where.c_str(), r.check_id.c_str(),
                      r.case_id.c_str(), r.lhs, r.constant * r.rhs);
        expect(false, buf);
      } else if (r.status == Status::pass) {
        expect(true, where);
      }
  }
  Outcome outcome(const std::string& summary) const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d assertions, %d failed", checked, failed);
    Outcome o{failed == 0 && checked > 0, summary.empty() ? buf : std::string(buf) + ", " + summary};
    if (failed > 0) o.detail += "; first: " + first;
    return o;
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

LqElement random_matrix(CounterRng& rng, int d, bool complex_entries) {
  Matrix m(d, d);
  for (Eigen::Index k = 0; k < m.size(); ++k)
    m.data()[k] = lq::cplx(rng.normal(), complex_entries ? rng.normal() : 0.0);
  return LqElement::matrix(m);
}

LqElement random_vector(CounterRng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) v(k) = rng.normal();
  return LqElement::commutative(lq::FiniteMeasureSpace::counting(n), v);
}

// Element of one of three shapes: scalar, 2x2 or 3x3 matrix.
LqElement random_element(CounterRng& rng, int shape) {
  if (shape == 0) return LqElement::scalar(lq::cplx(rng.normal(), 0.5 * rng.normal()));
  return random_matrix(rng, shape + 1, rng.uniform() < 0.5);
}

// Mean-zero variable on the given atom probabilities; the last atom balances the mean.
RandomLqVariable mean_zero_on(const std::vector<double>& probs, const std::function<LqElement()>& draw) {
  const int atoms = static_cast<int>(probs.size());
  std::vector<LqElement> values;
  LqElement mean = LqElement::zeros_like(draw());
  for (int a = 0; a + 1 < atoms; ++a) {
    values.push_back(draw());
    mean += probs[a] * values.back();
  }
  values.push_back((-1.0 / probs.back()) * mean);
  return RandomLqVariable::discrete(probs, values);
}

std::vector<double> random_probs(CounterRng& rng, int atoms) {
  std::vector<double> probs(atoms);
  double total = 0.0;
  for (auto& p : probs) total += (p = 0.2 + rng.uniform());
  for (auto& p : probs) p /= total;
  return probs;
}

RandomLqVariable mean_zero(CounterRng& rng, int atoms, const std::function<LqElement()>& draw) {
  return mean_zero_on(random_probs(rng, atoms), draw);
}

const double kRegimes[6][2] = {{3.0, 2.5}, {2.5, 3.0}, {1.5, 3.0}, {3.0, 1.5}, {1.8, 1.5}, {1.5, 1.8}};

// 1. Second and fourth centered moments against the cumulant expansion of the
// generating function: every cumulant of Poisson(l) is l, so E(N-l)^2 = l and
// E(N-l)^4 = k4 + 3 k2^2 = l + 3 l^2.
Outcome poisson_identity() {
  Tally t;
  for (double lam : poisson::log_spaced(1e-4, 1.0, 60)) {
    const double err = std::abs(prob::centered_poisson_moment(2.0, lam) - lam);
    t.worst = std::max(t.worst, err);
    t.expect(err <= 1e-10, "p=2 at lambda=" + fmt("%.6g", lam));
  }
  const double four = prob::centered_poisson_moment(4.0, 1.0);
  t.expect(std::abs(four - (1.0 + 3.0)) <= 1e-9, "p=4 at lambda=1 gave " + fmt("%.17g", four));
  return t.outcome("max |E(N-l)^2 - l| = " + fmt("%.2e", t.worst) + ", E(N-1)^4 = " + fmt("%.15g", four));
}

// 2. Pointwise lower bound on the 60-point grid and envelope stability under
// grid doubling (the doubled grid contains the original points).
Outcome poisson_lower_bound() {
  Tally t;
  const auto grid = poisson::log_spaced(1e-4, 1.0, 60);
  const auto doubled = poisson::log_spaced(1e-4, 1.0, 119);
  const std::vector<double> ps = {2.0, 2.5, 3.0, 4.0};
  t.rows(poisson::verify_centered_moments(ps, grid), "grid");
  double drift = 0.0;
  for (double p : ps) {
    const auto a = poisson::moment_envelope(p, grid, 1e-15);
    const auto b = poisson::moment_envelope(p, doubled, 1e-15);
    t.expect(a.lower > 0.0 && std::isfinite(a.upper), "envelope not positive and finite at p=" + fmt("%g", p));
    const double d = std::max(std::abs(b.lower / a.lower - 1.0), std::abs(b.upper / a.upper - 1.0));
    drift = std::max(drift, d);
    t.expect(d <= 0.01, "envelope moved by more than 1% at p=" + fmt("%g", p));
  }
  return t.outcome("max envelope drift " + fmt("%.2e", drift));
}

// 3. Khintchine at p = 2 with q in {2, 3, 4}: lower side at constant 1 with
// 1e-12 relative slack and upper side at the table constant.
Outcome khintchine() {
  Tally t;
  CounterRng rng(301);
  const ConstantTable table;
  lab::LabOptions o;
  o.float_slack = 1e-12;
  for (int k = 0; k < 50; ++k) {
    const double q = 2.0 + k % 3;
    const int n = 1 + static_cast<int>(rng.uniform() * 10);
    const int shape = k % 3;
    std::vector<LqElement> xs;
    for (int i = 0; i < n; ++i) xs.push_back(random_element(rng, shape));
    const auto rows = lab::check_khintchine(xs, 2.0, q, o);
    t.rows(rows, "instance " + std::to_string(k));
    for (const auto& r : rows)
      if (r.check_id == "khintchine_upper")
        t.expect(r.constant == table.khintchine(2.0, q).value, "upper constant differs from the table");
  }
  return t.outcome("");
}

// 4. Symmetrization at constants 1/2 and 2 under enumeration.
Outcome symmetrization() {
  Tally t;
  CounterRng rng(401);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 4;
    const int kind = k % 3;
    std::vector<RandomLqVariable> items;
    for (int i = 0; i < n; ++i) {
      const int atoms = 2 + static_cast<int>(rng.uniform() * 2);
      items.push_back(mean_zero(rng, atoms, [&] {
        if (kind == 0) return LqElement::scalar(rng.normal());
        if (kind == 1) return random_vector(rng, 3);
        return random_matrix(rng, 2, true);
      }));
    }
    const double p = 1.0 + 3.0 * rng.uniform();
    const double q = 1.0 + 3.0 * rng.uniform();
    t.rows(lab::check_symmetrization(LqSequence(items), p, q), "instance " + std::to_string(k));
  }
  return t.outcome("");
}

// 5. Explicit-constant square-function/diagonal estimate for p, q >= 2.
Outcome explicit_pq() {
  Tally t;
  CounterRng rng(501);
  const double grid[] = {2.0, 2.5, 4.0};
  for (int k = 0; k < 30; ++k) {
    const double p = grid[k % 3];
    const double q = grid[(k / 3) % 3];
    const int n = 2 + k % 3;
    std::vector<RandomLqVariable> items;
    for (int i = 0; i < n; ++i) items.push_back(mean_zero(rng, 2 + i % 2, [&] { return random_matrix(rng, 2, k % 2 == 0); }));
    const auto rows = lab::check_2pqqp(LqSequence(items), p, q, seq::Mode::noncommutative);
    t.rows(rows, "instance " + std::to_string(k));
    for (const auto& r : rows) t.expect(r.status == Status::pass, "row " + r.check_id + " is not a hard assertion");
  }
  return t.outcome("");
}

// 6. Scalar Rosenthal lower side at constant 1/2.
Outcome rosenthal_scalar() {
  Tally t;
  CounterRng rng(601);
  for (int k = 0; k < 50; ++k) {
    const double p = 2.0 + k % 3;
    const int n = 1 + k % 6;
    std::vector<RandomLqVariable> items;
    for (int i = 0; i < n; ++i)
      items.push_back(mean_zero(rng, 2 + static_cast<int>(rng.uniform() * 2), [&] { return LqElement::scalar(3.0 * rng.normal()); }));
    const auto rows = lab::check_rosenthal_scalar(LqSequence(items), p);
    for (const auto& r : rows)
      if (r.check_id == "rosenthal_scalar_lower") {
        t.expect(r.status == Status::pass, "instance " + std::to_string(k) + " lower side failed");
        t.worst = std::max(t.worst, r.ratio() / r.constant);
      }
  }
  return t.outcome("max lhs/(c rhs) " + fmt("%.4f", t.worst));
}

// 7. Optimizer against the brute-force oracle on every regime tree that contains
// a sum. The items keep each sum's free dimension at most 4, mostly at most 3.
Outcome optimizer_vs_brute_force() {
  Tally t;
  struct Tree {
    seq::RegimeSpec spec;
    std::size_t widest = 0;
  };
  std::vector<Tree> trees;
  for (const auto& pq : kRegimes)
    for (auto mode : {seq::Mode::commutative, seq::Mode::noncommutative}) {
      const auto spec = seq::regime_select(pq[0], pq[1], mode);
      if (!spec.tree.contains_sum()) continue;
      std::size_t widest = 0;
      std::function<void(const seq::Node&)> walk = [&](const seq::Node& n) {
        if (n.type == seq::Node::Type::sum) widest = std::max(widest, n.children.size());
        for (const auto& c : n.children) walk(c);
      };
      walk(spec.tree);
      trees.push_back({spec, widest});
    }
  CounterRng rng(701);
  double gap = 0.0;
  for (int k = 0; k < 25; ++k) {
    const Tree& tr = trees[k % trees.size()];
    // Free real parameters = (children - 1) * real entries of the field.
    std::vector<RandomLqVariable> items;
    const int budget_entries = static_cast<int>(4 / (tr.widest - 1));
    const int variant = (k / static_cast<int>(trees.size())) % 3;
    if (budget_entries >= 2 && variant == 1) {
      items.push_back(RandomLqVariable::discrete({0.35, 0.65}, {LqElement::scalar(rng.normal()), LqElement::scalar(rng.normal())}));
    } else if (budget_entries >= 3 && variant == 2) {
      for (int i = 0; i < 3; ++i) items.push_back(RandomLqVariable::constant(LqElement::scalar(rng.normal())));
    } else if (budget_entries >= 2) {
      items.push_back(RandomLqVariable::constant(LqElement::scalar(rng.normal())));
      items.push_back(RandomLqVariable::constant(LqElement::scalar(rng.normal())));
    } else {
      items.push_back(RandomLqVariable::constant(LqElement::scalar(rng.normal())));
    }
    const LqSequence s(items);
    const double opt = seq::composite_norm(s, tr.spec).value;
    const double brute = seq::brute_force_sum_norm(s.field(), tr.spec.tree, tr.spec.p, tr.spec.q);
    const double rel = std::abs(opt - brute) / brute;
    gap = std::max(gap, rel);
    t.expect(rel <= 1e-3, "instance " + std::to_string(k) + " " + tr.spec.tree.to_string() + " gap " + fmt("%.3e", rel));
  }
  return t.outcome(std::to_string(trees.size()) + " trees, max relative gap " + fmt("%.2e", gap));
}

// 8. Duality pairing against the product of the composite norms.
Outcome duality() {
  Tally t;
  CounterRng rng(801);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto& pq = kRegimes[k % 6];
    const auto mode = (k / 6) % 2 == 0 ? seq::Mode::noncommutative : seq::Mode::commutative;
    // Paired items share their probability space.
    const int n = 1 + static_cast<int>(rng.uniform() * 2);
    std::vector<std::vector<double>> spaces;
    for (int i = 0; i < n; ++i) spaces.push_back(random_probs(rng, 2 + i % 2));
    auto draw = [&] {
      std::vector<RandomLqVariable> items;
      for (int i = 0; i < n; ++i)
        items.push_back(mean_zero_on(spaces[i], [&] {
          return mode == seq::Mode::noncommutative ? random_matrix(rng, 2, false) : random_vector(rng, 2);
        }));
      return LqSequence(items);
    };
    const LqSequence f = draw();
    const LqSequence g = draw();
    const auto rows = lab::check_duality(f, g, pq[0], pq[1], mode);
    t.rows(rows, "pair " + std::to_string(k));
    for (const auto& r : rows) worst = std::max(worst, r.ratio());
  }
  return t.outcome("max |<f,g>| / (||f|| ||g||) " + fmt("%.6f", worst));
}

// Random grid with every cell intensity in (0, 1].
GridPartition small_grid(CounterRng& rng, int intervals, int sets) {
  std::vector<double> times{0.0};
  std::vector<double> measures;
  for (int j = 0; j < sets; ++j) measures.push_back(0.3 + 0.7 * rng.uniform());
  for (int i = 0; i < intervals; ++i) times.push_back(times.back() + 0.05 + 0.9 * rng.uniform());
  return GridPartition::make(times, measures);
}

// 9. Coupled against decoupled moments for deterministic F, and the pathwise
// identities of the decoupling construction for adapted F on the same grids.
Outcome decoupling() {
  Tally t;
  CounterRng rng(901);
  double worst_gap = 0.0;
  double worst_identity = 0.0;
  for (int k = 0; k < 20; ++k) {
    // At most three cells keeps the coupled and decoupled enumerations small.
    const int intervals = 1 + (k % 3 == 1 ? 1 : 0);
    const int sets = 1 + (k % 3 == 2 ? 1 : 0);
    const GridPartition grid = small_grid(rng, intervals, sets);
    const bool matrix = k % 2 == 0;
    const LqElement shape = matrix ? LqElement::matrix(Matrix::Zero(2, 2)) : LqElement::scalar(0.0);
    SimpleAdaptedProcess F(grid, shape);
    for (std::size_t c = 0; c < grid.cell_count(); ++c)
      F.add_term(grid.interval_of(c), grid.set_of(c), Coefficient::deterministic(1.0),
                 matrix ? random_matrix(rng, 2, k % 4 == 0) : LqElement::scalar(rng.normal()));
    const double t_end = grid.horizon();
    for (double p : {2.0, 3.0, 4.0})
      for (double q : {2.0, 3.0}) {
        const auto a = integ::exact_moment(F, t_end, grid.all_sets(), p, q);
        const auto b = integ::exact_decoupled_moment(F, t_end, grid.all_sets(), p, q);
        const double gap = std::abs(a.value - b.value);
        const double tol = 2.0 * std::max(a.truncation_tolerance, b.truncation_tolerance);
        worst_gap = std::max(worst_gap, gap);
        t.expect(gap <= tol, "grid " + std::to_string(k) + " moments differ by " + fmt("%.3e", gap));
      }
    // Adapted two-interval process on the same sets for the identities.
    const GridPartition g2 = small_grid(rng, 2, 1);
    SimpleAdaptedProcess G(g2, shape);
    for (std::size_t j = 0; j < g2.set_count(); ++j) {
      G.add_term(0, j, Coefficient::deterministic(1.0), matrix ? random_matrix(rng, 2, false) : LqElement::scalar(rng.normal()));
      G.add_term(1, j,
                 Coefficient{rng.normal(), {Factor{{g2.cell(0, j)}, k % 3 == 0 ? Factor::Kind::occupied : Factor::Kind::compensated, rng.normal()}}},
                 matrix ? random_matrix(rng, 2, false) : LqElement::scalar(rng.normal()));
    }
    const auto ids = integ::verify_decoupling_identities(G, g2.horizon(), g2.all_sets(), {1e-6});
    const double e = std::max(ids.max_sum_error, ids.max_alternating_error);
    worst_identity = std::max(worst_identity, e);
    t.expect(ids.paths > 0 && e <= 1e-14, "grid " + std::to_string(k) + " identity error " + fmt("%.3e", e));
  }
  return t.outcome("max moment gap " + fmt("%.2e", worst_gap) + ", max identity error " + fmt("%.2e", worst_identity));
}

// 10. Ratio band and scale invariance of moment / I_{p,q} norm in each regime.
Outcome ito_isomorphism() {
  Tally t;
  double widest = 0.0;
  for (int r = 0; r < 6; ++r) {
    const double p = kRegimes[r][0];
    const double q = kRegimes[r][1];
    CounterRng rng(1000 + r);
    std::vector<lab::ProcessCase> family;
    const LqElement shape = LqElement::matrix(Matrix::Zero(2, 2));
    // Single cells over an intensity sweep and a scale sweep.
    for (double lam : {0.01, 0.1, 1.0})
      for (double c : {0.1, 1.0, 10.0}) {
        SimpleAdaptedProcess F(GridPartition::make({0.0, lam}, {1.0}), shape);
        F.add_term(0, 0, Coefficient::deterministic(c), random_matrix(rng, 2, false));
        family.push_back({F, lam, {0}, fmt("single lambda=%g", lam) + fmt(" c=%g", c)});
      }
    // Multi-cell processes, deterministic and adapted.
    for (double lam : {0.05, 0.5}) {
      const GridPartition g = GridPartition::make({0.0, lam, 2 * lam}, {1.0, 0.5});
      SimpleAdaptedProcess F(g, shape);
      SimpleAdaptedProcess A(g, shape);
      for (std::size_t c = 0; c < g.cell_count(); ++c) {
        F.add_term(g.interval_of(c), g.set_of(c), Coefficient::deterministic(1.0), random_matrix(rng, 2, false));
        const Coefficient coef = g.interval_of(c) == 0 ? Coefficient::deterministic(1.0)
                                                       : Coefficient{0.5, {Factor{{g.cell(0, 0)}, Factor::Kind::count, 1.0}}};
        A.add_term(g.interval_of(c), g.set_of(c), coef, random_matrix(rng, 2, false));
      }
      family.push_back({F, 2 * lam, g.all_sets(), fmt("multi lambda=%g", lam)});
      family.push_back({A, 2 * lam, g.all_sets(), fmt("adapted lambda=%g", lam)});
    }
    lab::LabOptions o;
    o.label = fmt("p=%g", p) + fmt(",q=%g", q);
    const auto rows = lab::check_ito_isomorphism(family, p, q, seq::Mode::noncommutative, 16.0, 10.0, 1e-12, o);
    t.rows(rows, "regime " + std::to_string(r + 1));
    for (const auto& row : rows)
      if (row.check_id == "ito_band") widest = std::max(widest, row.lhs / row.rhs);
  }
  return t.outcome("widest band " + fmt("%.3f", widest));
}

// 11. Matrix Rosenthal bounds in both directions and the entrywise bound;
// the three-term comparison is report-only.
Outcome random_matrices() {
  Tally t;
  int exact = 0;
  int sampled = 0;
  int reports = 0;
  const std::vector<randmat::EntryLaw> laws = {randmat::EntryLaw::rademacher(), randmat::EntryLaw::gaussian(),
                                               randmat::EntryLaw::two_atom(2.0, 0.2)};
  randmat::RandmatOptions o;
  o.samples = 10000;
  o.sigmas = 3.0;
  for (const auto& law : laws)
    for (int d : {2, 4, 8}) {
      for (int n : {4, 8})
        for (double p : {2.0, 4.0}) {
          const auto e = randmat::MatrixEnsemble::full(d, d, n, law);
          const auto rows = randmat::bound_matrix_rosenthal(e, p, o);
          t.rows(rows, law.to_string() + fmt(" d=%g", d) + fmt(" n=%g", n) + fmt(" p=%g", p));
          (rows.front().seed == 0 ? exact : sampled) += 1;
        }
      for (double p : {2.0, 4.0}) {
        const auto e = randmat::MatrixEnsemble::entries(randmat::RealMatrix::Ones(d, d), law);
        t.rows(randmat::bound_entrywise(e, p, o), "entrywise " + law.to_string() + fmt(" d=%g", d));
        for (const auto& r : randmat::bound_latala(e, p, o)) reports += r.status == Status::report_only ? 1 : 0;
      }
    }
  return t.outcome(std::to_string(exact) + " exact, " + std::to_string(sampled) + " sampled, " + std::to_string(reports) +
                   " report-only comparison rows");
}

// 12. Doob domination from shared Monte Carlo paths.
Outcome doob() {
  Tally t;
  CounterRng rng(1201);
  for (int k = 0; k < 10; ++k) {
    const GridPartition g = small_grid(rng, 3, 1 + k % 2);
    const bool matrix = k % 2 == 1;
    SimpleAdaptedProcess F(g, matrix ? LqElement::matrix(Matrix::Zero(2, 2)) : LqElement::scalar(0.0));
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const std::size_t i = g.interval_of(c);
      Coefficient coef = Coefficient::deterministic(1.0);
      if (i > 0) coef = Coefficient{rng.normal(), {Factor{{g.cell(i - 1, g.set_of(c))}, Factor::Kind::compensated, rng.normal()}}};
      F.add_term(i, g.set_of(c), coef, matrix ? random_matrix(rng, 2, false) : LqElement::scalar(rng.normal()));
    }
    lab::LabOptions o;
    o.mc_samples = 10000;
    o.seed = 50 + k;
    const double p = 1.5 + 0.5 * (k % 5);
    t.rows(lab::check_doob(F, g.horizon(), g.all_sets(), p, 2.0 + k % 2, o), "instance " + std::to_string(k));
  }
  return t.outcome("");
}

struct Criterion {
  const char* id;
  const char* name;
  double limit_s;
  Outcome (*run)();
};

}  // namespace

// Optional arguments restrict the run to the named criteria, e.g. AC07.
int main(int argc, char** argv) {
  const Criterion criteria[] = {
      {"AC01", "Poisson second and fourth moment identities", 1.0, poisson_identity},
      {"AC02", "Poisson pointwise lower bound and envelope stability", 5.0, poisson_lower_bound},
      {"AC03", "Khintchine at constant 1 and table K", 30.0, khintchine},
      {"AC04", "symmetrization constants 1/2 and 2", 30.0, symmetrization},
      {"AC05", "explicit constants for p, q >= 2", 60.0, explicit_pq},
      {"AC06", "scalar Rosenthal lower constant 1/2", 10.0, rosenthal_scalar},
      {"AC07", "optimizer against brute force", 60.0, optimizer_vs_brute_force},
      {"AC08", "duality of composite norms", 60.0, duality},
      {"AC09", "decoupling for deterministic F and pathwise identities", 60.0, decoupling},
      {"AC10", "Ito isomorphism band and scale invariance", 300.0, ito_isomorphism},
      {"AC11", "matrix Rosenthal and entrywise bounds", 300.0, random_matrices},
      {"AC12", "Doob domination", 60.0, doob},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (argc > 1 && std::find(argv + 1, argv + argc, std::string(c.id)) == argv + argc) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s limit", c.limit_s);
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
