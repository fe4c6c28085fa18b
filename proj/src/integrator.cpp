#include "itolab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "itolab/errors.hpp"
#include "itolab/parallel.hpp"

namespace itolab::integ {

using lq::cplx;
using lq::LqElement;
using lq::Matrix;

namespace {

double group_intensity(const std::vector<std::size_t>& cells, const GridPartition& grid) {
  double lam = 0.0;
  for (std::size_t c : cells) lam += grid.intensity(c);
  return lam;
}

}  // namespace

cplx Coefficient::evaluate(const std::vector<int>& counts, const GridPartition& grid) const {
  cplx v = constant;
  for (const auto& f : factors) {
    int n = 0;
    for (std::size_t c : f.cells) n += counts[c];
    double g = 0.0;
    switch (f.kind) {
      case Factor::Kind::count: g = n; break;
      case Factor::Kind::compensated: g = n - group_intensity(f.cells, grid); break;
      case Factor::Kind::occupied: g = n >= 1 ? 1.0 : 0.0; break;
    }
    v += f.weight * g;
  }
  return v;
}

SimpleAdaptedProcess::SimpleAdaptedProcess(GridPartition grid, LqElement shape)
    : grid_(std::move(grid)), shape_(LqElement::zeros_like(shape)) {}

void SimpleAdaptedProcess::add_term(std::size_t interval, std::size_t set, Coefficient coefficient, LqElement value) {
  require(interval < grid_.interval_count() && set < grid_.set_count(), "term cell lies outside the grid");
  require(value.same_shape(shape_), "term values must share the kind and shape of the process");
  require(value.is_finite() && std::isfinite(coefficient.constant.real()) && std::isfinite(coefficient.constant.imag()),
          "term data must be finite");
  for (auto& f : coefficient.factors) {
    require(!f.cells.empty(), "a factor reads at least one cell");
    require(std::isfinite(f.weight), "factor weights must be finite");
    for (std::size_t c : f.cells) {
      require(c < grid_.cell_count(), "factor cell lies outside the grid");
      require(grid_.interval_of(c) < interval, "coefficients may only read cells of earlier intervals");
    }
    std::sort(f.cells.begin(), f.cells.end());
    f.cells.erase(std::unique(f.cells.begin(), f.cells.end()), f.cells.end());
  }
  terms_.push_back(Term{grid_.cell(interval, set), std::move(coefficient), std::move(value)});
}

bool SimpleAdaptedProcess::is_deterministic() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coefficient.is_deterministic(); });
}

std::vector<std::size_t> SimpleAdaptedProcess::read_cells() const {
  std::vector<std::size_t> out;
  for (const auto& t : terms_)
    for (const auto& f : t.coefficient.factors) out.insert(out.end(), f.cells.begin(), f.cells.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SimpleAdaptedProcess SimpleAdaptedProcess::scaled(cplx c) const {
  SimpleAdaptedProcess out = *this;
  for (auto& t : out.terms_) t.value *= c;
  return out;
}

SimpleAdaptedProcess SimpleAdaptedProcess::refined(const GridPartition& fine) const {
  const auto parent = poisson::interval_parents(fine, grid_);
  std::vector<std::vector<std::size_t>> children(grid_.interval_count());
  for (std::size_t i = 0; i < parent.size(); ++i) children[parent[i]].push_back(i);
  auto map_cells = [&](const std::vector<std::size_t>& cells) {
    std::vector<std::size_t> out;
    for (std::size_t c : cells)
      for (std::size_t i : children[grid_.interval_of(c)]) out.push_back(fine.cell(i, grid_.set_of(c)));
    return out;
  };
  SimpleAdaptedProcess out(fine, shape_);
  for (const auto& t : terms_) {
    Coefficient coef = t.coefficient;
    for (auto& f : coef.factors) f.cells = map_cells(f.cells);
    for (std::size_t i : children[grid_.interval_of(t.cell)]) out.add_term(i, grid_.set_of(t.cell), coef, t.value);
  }
  return out;
}

SimpleAdaptedProcess SimpleAdaptedProcess::with_breakpoint(double t) const {
  const GridPartition fine = poisson::with_breakpoint(grid_, t);
  if (fine == grid_) return *this;
  return refined(fine);
}

SimpleAdaptedProcess SimpleAdaptedProcess::restricted(double t, const std::vector<std::size_t>& sets) const {
  require(t > 0.0 && std::isfinite(t), "integration time must be positive and finite");
  for (std::size_t j : sets) require(j < grid_.set_count(), "set index outside the grid");
  const SimpleAdaptedProcess fine = with_breakpoint(t);
  SimpleAdaptedProcess out(fine.grid_, shape_);
  for (const auto& term : fine.terms_) {
    const std::size_t i = fine.grid_.interval_of(term.cell);
    const std::size_t j = fine.grid_.set_of(term.cell);
    if (fine.grid_.end(i) <= t && std::find(sets.begin(), sets.end(), j) != sets.end()) out.terms_.push_back(term);
  }
  return out;
}

namespace {

void check_realization(const GridPartition& grid, const PoissonFieldRealization& field) {
  require(field.counts.size() == grid.cell_count() && field.point_times.size() == grid.cell_count(),
          "realization does not match the process grid");
}

LqElement integral_path(const SimpleAdaptedProcess& F, const PoissonFieldRealization& field,
                        const PoissonFieldRealization& integrator, double t, const std::vector<std::size_t>& sets) {
  require(t > 0.0, "integration time must be positive");
  check_realization(F.grid(), field);
  check_realization(F.grid(), integrator);
  for (std::size_t j : sets) require(j < F.grid().set_count(), "set index outside the grid");
  LqElement out = F.shape();
  for (const auto& term : F.terms()) {
    if (std::find(sets.begin(), sets.end(), F.grid().set_of(term.cell)) == sets.end()) continue;
    const double dn = integrator.compensated_until(F.grid(), term.cell, t);
    if (dn == 0.0) continue;
    out += (term.coefficient.evaluate(field.counts, F.grid()) * dn) * term.value;
  }
  return out;
}

// Independent truncated Poisson variables for the enumeration of a restricted
// process. Variables of the field are blocks of cells on which every factor
// group agrees; the block total is written to its first cell, so group totals
// are exact. Support cells get singleton variables when the integrator is
// enumerated, in the field or in the copy.
struct Layout {
  std::vector<prob::TruncatedPoisson> dists;
  std::vector<std::size_t> target_cell;
  std::vector<bool> in_copy;
  prob::FiniteProbabilitySpace space;
  double total_tail = 0.0;

  void fill(std::span<const std::uint32_t> digits, std::vector<int>& counts, std::vector<int>& copy) const {
    for (std::size_t v = 0; v < dists.size(); ++v) (in_copy[v] ? copy : counts)[target_cell[v]] = static_cast<int>(digits[v]);
  }
};

std::vector<std::size_t> support_cells(const SimpleAdaptedProcess& R) {
  std::vector<std::size_t> out;
  for (const auto& t : R.terms()) out.push_back(t.cell);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Layout make_layout(const SimpleAdaptedProcess& R, bool support_in_field, bool support_in_copy, const ExactOptions& opt) {
  const GridPartition& grid = R.grid();
  std::vector<std::vector<std::size_t>> groups;
  for (const auto& t : R.terms())
    for (const auto& f : t.coefficient.factors)
      if (std::find(groups.begin(), groups.end(), f.cells) == groups.end()) groups.push_back(f.cells);
  std::map<std::size_t, std::vector<long>> signature;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t c : groups[g]) signature[c].push_back(static_cast<long>(g));
  const auto support = support_cells(R);
  if (support_in_field)
    for (std::size_t c : support) signature[c].push_back(-1 - static_cast<long>(c));
  std::map<std::vector<long>, std::vector<std::size_t>> blocks;
  for (const auto& [c, sig] : signature) blocks[sig].push_back(c);
  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [sig, cells] : blocks) ordered.push_back(cells);
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

  Layout L;
  std::vector<prob::Marginal> marginals;
  auto add = [&](double lam, std::size_t cell, bool copy) {
    prob::TruncatedPoisson d = prob::truncated_poisson(lam, opt.eps);
    prob::Marginal m;
    for (std::size_t k = 0; k < d.probs.size(); ++k) m.labels.push_back(static_cast<double>(k));
    m.probs = d.probs;
    marginals.push_back(std::move(m));
    L.total_tail += d.tail_bound;
    L.dists.push_back(std::move(d));
    L.target_cell.push_back(cell);
    L.in_copy.push_back(copy);
  };
  for (const auto& cells : ordered) add(group_intensity(cells, grid), cells.front(), false);
  if (support_in_copy)
    for (std::size_t c : support) add(grid.intensity(c), c, true);
  if (marginals.empty()) marginals.push_back(prob::Marginal{{0.0}, {1.0}});
  L.space = prob::FiniteProbabilitySpace::from_factors(std::move(marginals));
  const std::uint64_t atoms = L.space.atom_count();
  if (atoms > opt.budget)
    throw ResourceError("exact enumeration needs " + std::to_string(atoms) + " atoms, above the budget of " +
                        std::to_string(opt.budget));
  return L;
}

// E h(counts, copy) over the layout, in fixed chunk order.
double layout_expectation(const Layout& L, std::size_t cells,
                          const std::function<double(const std::vector<int>&, const std::vector<int>&)>& h) {
  const auto total = chunked_reduce(L.space.atom_count(), 1, [&](std::uint64_t begin, std::uint64_t end, double* acc) {
    std::vector<int> counts(cells, 0);
    std::vector<int> copy(cells, 0);
    L.space.for_each_atom(begin, end, [&](std::span<const std::uint32_t> digits, double pr) {
      if (L.dists.empty()) {
        acc[0] += pr * h(counts, copy);
        return;
      }
      L.fill(digits, counts, copy);
      acc[0] += pr * h(counts, copy);
    });
  });
  return total[0];
}

Matrix path_value(const SimpleAdaptedProcess& R, const std::vector<int>& counts, const std::vector<int>& integrator) {
  Matrix out = Matrix::Zero(R.shape().rows(), R.shape().cols());
  for (const auto& term : R.terms()) {
    const double dn = integrator[term.cell] - R.grid().intensity(term.cell);
    out += (term.coefficient.evaluate(counts, R.grid()) * dn) * term.value.data();
  }
  return out;
}

ExactMoment finish(double pth, double p, const Layout& L) {
  ExactMoment m;
  m.value = std::pow(pth, 1.0 / p);
  m.atoms = L.space.atom_count();
  m.truncation_tolerance = 10.0 * L.total_tail * std::max(m.value, 1.0);
  return m;
}

void check_pq(double p, double q) {
  require(p >= 1.0 && std::isfinite(p) && q >= 1.0, "moments need p >= 1 finite and q >= 1");
}

}  // namespace

LqElement integrate(const SimpleAdaptedProcess& F, const PoissonFieldRealization& field, double t,
                    const std::vector<std::size_t>& sets) {
  return integral_path(F, field, field, t, sets);
}

LqElement decoupled_integrate(const SimpleAdaptedProcess& F, const PoissonFieldRealization& field,
                              const PoissonFieldRealization& copy, double t, const std::vector<std::size_t>& sets) {
  return integral_path(F, field, copy, t, sets);
}

ExactMoment exact_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p,
                         double q, const ExactOptions& options) {
  check_pq(p, q);
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  const Layout L = make_layout(R, true, false, options);
  const double pth = layout_expectation(L, R.grid().cell_count(), [&](const std::vector<int>& n, const std::vector<int>&) {
    return std::pow(lq::norm_q(path_value(R, n, n), R.shape(), q), p);
  });
  return finish(pth, p, L);
}

ExactMoment exact_decoupled_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                                   double p, double q, const ExactOptions& options) {
  check_pq(p, q);
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  const Layout L = make_layout(R, false, true, options);
  const double pth = layout_expectation(L, R.grid().cell_count(), [&](const std::vector<int>& n, const std::vector<int>& c) {
    return std::pow(lq::norm_q(path_value(R, n, c), R.shape(), q), p);
  });
  return finish(pth, p, L);
}

ExactMoment exact_running_max_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                                     double p, double q, const ExactOptions& options) {
  check_pq(p, q);
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  const Layout L = make_layout(R, true, false, options);
  std::vector<Term> order = R.terms();
  std::stable_sort(order.begin(), order.end(), [&](const Term& a, const Term& b) {
    return R.grid().interval_of(a.cell) < R.grid().interval_of(b.cell);
  });
  const double pth = layout_expectation(L, R.grid().cell_count(), [&](const std::vector<int>& n, const std::vector<int>&) {
    Matrix run = Matrix::Zero(R.shape().rows(), R.shape().cols());
    double best = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Term& term = order[k];
      run += (term.coefficient.evaluate(n, R.grid()) * (n[term.cell] - R.grid().intensity(term.cell))) * term.value.data();
      const bool interval_done = k + 1 == order.size() ||
                                 R.grid().interval_of(order[k + 1].cell) != R.grid().interval_of(term.cell);
      if (interval_done) best = std::max(best, lq::norm_q(run, R.shape(), q));
    }
    return std::pow(best, p);
  });
  return finish(pth, p, L);
}

LqElement exact_mean(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                     const ExactOptions& options) {
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  const Layout L = make_layout(R, true, false, options);
  const auto entries = static_cast<std::size_t>(R.shape().data().size());
  const auto total = chunked_reduce(L.space.atom_count(), 2 * entries, [&](std::uint64_t begin, std::uint64_t end, double* acc) {
    std::vector<int> counts(R.grid().cell_count(), 0);
    std::vector<int> copy(R.grid().cell_count(), 0);
    L.space.for_each_atom(begin, end, [&](std::span<const std::uint32_t> digits, double pr) {
      if (!L.dists.empty()) L.fill(digits, counts, copy);
      const Matrix v = path_value(R, counts, counts);
      for (std::size_t e = 0; e < entries; ++e) {
        acc[2 * e] += pr * v.reshaped()(static_cast<Eigen::Index>(e)).real();
        acc[2 * e + 1] += pr * v.reshaped()(static_cast<Eigen::Index>(e)).imag();
      }
    });
  });
  LqElement out = R.shape();
  for (std::size_t e = 0; e < entries; ++e) out.mutable_data().reshaped()(static_cast<Eigen::Index>(e)) = cplx(total[2 * e], total[2 * e + 1]);
  return out;
}

RunningMaxEstimate running_max_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                                      double p, double q, std::size_t n_samples, std::uint64_t seed) {
  check_pq(p, q);
  require(n_samples >= 1, "sample size must be at least 1");
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  std::vector<Term> order = R.terms();
  std::stable_sort(order.begin(), order.end(), [&](const Term& a, const Term& b) {
    return R.grid().interval_of(a.cell) < R.grid().interval_of(b.cell);
  });
  std::vector<double> sup_draws(n_samples);
  std::vector<double> end_draws(n_samples);
  parallel_for(n_samples, [&](std::size_t k) {
    const PoissonFieldRealization field = poisson::realize(R.grid(), seed, k);
    Matrix run = Matrix::Zero(R.shape().rows(), R.shape().cols());
    double best = 0.0;
    for (std::size_t m = 0; m < order.size(); ++m) {
      const Term& term = order[m];
      run += (term.coefficient.evaluate(field.counts, R.grid()) * field.compensated[term.cell]) * term.value.data();
      const bool interval_done = m + 1 == order.size() ||
                                 R.grid().interval_of(order[m + 1].cell) != R.grid().interval_of(term.cell);
      if (interval_done) best = std::max(best, lq::norm_q(run, R.shape(), q));
    }
    sup_draws[k] = std::pow(best, p);
    end_draws[k] = std::pow(lq::norm_q(run, R.shape(), q), p);
  });
  return RunningMaxEstimate{prob::root_estimate(sup_draws, p), prob::root_estimate(end_draws, p)};
}

prob::Estimate mc_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p,
                         double q, std::size_t n_samples, std::uint64_t seed, bool decoupled) {
  check_pq(p, q);
  require(n_samples >= 1, "sample size must be at least 1");
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  std::vector<double> draws(n_samples);
  parallel_for(n_samples, [&](std::size_t k) {
    const PoissonFieldRealization field = poisson::realize(R.grid(), seed, 2 * k);
    if (decoupled) {
      const PoissonFieldRealization copy = poisson::realize(R.grid(), seed, 2 * k + 1);
      draws[k] = std::pow(lq::norm_q(path_value(R, field.counts, copy.counts), R.shape(), q), p);
    } else {
      draws[k] = std::pow(lq::norm_q(path_value(R, field.counts, field.counts), R.shape(), q), p);
    }
  });
  return prob::root_estimate(draws, p);
}

std::string to_string(ProcessNorm which) {
  switch (which) {
    case ProcessNorm::S_c: return "S_c";
    case ProcessNorm::S_r: return "S_r";
    case ProcessNorm::S: return "S";
    case ProcessNorm::D_qq: return "D_qq";
    case ProcessNorm::D_pq: return "D_pq";
    case ProcessNorm::I_regime: return "I_regime";
  }
  return "?";
}

ProcessNorm process_norm_from_string(const std::string& s) {
  for (auto w : {ProcessNorm::S_c, ProcessNorm::S_r, ProcessNorm::S, ProcessNorm::D_qq, ProcessNorm::D_pq,
                 ProcessNorm::I_regime})
    if (to_string(w) == s) return w;
  throw InvalidInput("unknown process norm '" + s + "'");
}

seq::MixedField process_field(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                              const ExactOptions& options) {
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  const Layout L = make_layout(R, false, false, options);
  const auto support = support_cells(R);
  const std::size_t A = L.space.atom_count();
  std::vector<double> outer(A);
  std::vector<std::vector<Matrix>> vals(support.empty() ? 1 : support.size(), std::vector<Matrix>(A));
  std::vector<int> counts(R.grid().cell_count(), 0);
  std::vector<int> copy(R.grid().cell_count(), 0);
  std::uint64_t a = 0;
  L.space.for_each_atom(0, A, [&](std::span<const std::uint32_t> digits, double pr) {
    if (!L.dists.empty()) L.fill(digits, counts, copy);
    outer[a] = pr;
    for (std::size_t c = 0; c < support.size(); ++c) {
      Matrix v = Matrix::Zero(R.shape().rows(), R.shape().cols());
      for (const auto& term : R.terms())
        if (term.cell == support[c]) v += term.coefficient.evaluate(counts, R.grid()) * term.value.data();
      vals[c][a] = std::move(v);
    }
    if (support.empty()) vals[0][a] = Matrix::Zero(R.shape().rows(), R.shape().cols());
    ++a;
  });
  // Merge cells whose values agree on every outer atom.
  std::vector<double> weights;
  std::vector<std::size_t> rep;
  for (std::size_t c = 0; c < vals.size(); ++c) {
    const double w = support.empty() ? 1.0 : R.grid().intensity(support[c]);
    bool merged = false;
    for (std::size_t k = 0; k < rep.size() && !merged; ++k) {
      if (vals[rep[k]] == vals[c]) {
        weights[k] += w;
        merged = true;
      }
    }
    if (!merged) {
      rep.push_back(c);
      weights.push_back(w);
    }
  }
  seq::MixedField f(outer, weights, R.shape());
  for (std::size_t a2 = 0; a2 < A; ++a2)
    for (std::size_t k = 0; k < rep.size(); ++k) f.at(a2, k).mutable_data() = vals[rep[k]][a2];
  return f;
}

double process_norm(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p, double q,
                    ProcessNorm which, seq::Mode mode, const seq::OptimizerOptions& optimizer,
                    const ExactOptions& options) {
  const seq::MixedField f = process_field(F, t, sets, options);
  switch (which) {
    case ProcessNorm::S_c: return seq::leaf_norm(f, seq::Leaf::S_c, p, q);
    case ProcessNorm::S_r: return seq::leaf_norm(f, seq::Leaf::S_r, p, q);
    case ProcessNorm::S: return seq::leaf_norm(f, seq::Leaf::S, p, q);
    case ProcessNorm::D_qq: return seq::leaf_norm(f, seq::Leaf::D_qq, p, q);
    case ProcessNorm::D_pq: return seq::leaf_norm(f, seq::Leaf::D_pq, p, q);
    case ProcessNorm::I_regime: return seq::composite_norm(f, seq::regime_select(p, q, mode), optimizer).value;
  }
  return 0.0;
}

CellCoefficients grid_condition(const FineProcess& G, const GridPartition& grid) {
  const std::size_t A = G.outer.size();
  require(A >= 1, "a fine process needs at least one outer atom");
  CellCoefficients y;
  y.outer = G.outer;
  y.values.assign(A * grid.cell_count(), LqElement::zeros_like(G.shape));
  for (const auto& piece : G.pieces) {
    require(piece.values.size() == A, "one piece value per outer atom");
    require(piece.t0 >= 0.0 && piece.t1 >= piece.t0, "pieces need 0 <= t0 <= t1");
    if (piece.set == kOutsideGrid) continue;
    require(piece.set < grid.set_count(), "piece set outside the grid");
    require(piece.measure >= 0.0 && piece.measure <= grid.measures()[piece.set] * (1.0 + 1e-12),
            "piece measure exceeds its grid set");
    for (std::size_t i = 0; i < grid.interval_count(); ++i) {
      const double overlap = std::min(piece.t1, grid.end(i)) - std::max(piece.t0, grid.start(i));
      if (overlap <= 0.0) continue;
      const std::size_t c = grid.cell(i, piece.set);
      for (std::size_t a = 0; a < A; ++a)
        y.values[a * grid.cell_count() + c] += (overlap * piece.measure / grid.intensity(c)) * piece.values[a];
    }
  }
  return y;
}

FineProcess as_fine(const CellCoefficients& y, const GridPartition& grid) {
  const std::size_t A = y.outer.size();
  require(y.values.size() == A * grid.cell_count(), "coefficients do not match the grid");
  FineProcess G;
  G.outer = y.outer;
  G.shape = LqElement::zeros_like(y.values.front());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    FinePiece piece;
    const std::size_t i = grid.interval_of(c);
    piece.t0 = grid.start(i);
    piece.t1 = grid.end(i);
    piece.set = grid.set_of(c);
    piece.measure = grid.measures()[piece.set];
    for (std::size_t a = 0; a < A; ++a) piece.values.push_back(y.values[a * grid.cell_count() + c]);
    G.pieces.push_back(std::move(piece));
  }
  return G;
}

seq::MixedField field_of(const FineProcess& G) {
  require(!G.pieces.empty(), "a fine process needs at least one piece");
  std::vector<double> weights;
  for (const auto& piece : G.pieces) weights.push_back((piece.t1 - piece.t0) * piece.measure);
  seq::MixedField f(G.outer, weights, G.shape);
  for (std::size_t c = 0; c < G.pieces.size(); ++c)
    for (std::size_t a = 0; a < G.outer.size(); ++a) f.at(a, c) = G.pieces[c].values[a];
  return f;
}

seq::MixedField field_of(const CellCoefficients& y, const GridPartition& grid) {
  std::vector<double> weights;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) weights.push_back(grid.intensity(c));
  seq::MixedField f(y.outer, weights, y.values.front());
  for (std::size_t a = 0; a < y.outer.size(); ++a)
    for (std::size_t c = 0; c < grid.cell_count(); ++c) f.at(a, c) = y.values[a * grid.cell_count() + c];
  return f;
}

DecouplingPath decoupling_construction(const std::vector<LqElement>& G, const std::vector<double>& M,
                                       const std::vector<double>& M_copy) {
  require(!G.empty() && G.size() == M.size() && M.size() == M_copy.size(), "construction needs equal nonempty lengths");
  DecouplingPath path;
  LqElement direct = LqElement::zeros_like(G.front());
  LqElement direct_copy = direct;
  LqElement sum = direct;
  LqElement alternating = direct;
  for (std::size_t i = 0; i < G.size(); ++i) {
    require(G[i].same_shape(G.front()), "all G_i must share a shape");
    LqElement odd = (0.5 * (M[i] + M_copy[i])) * G[i];
    LqElement even = (0.5 * (M[i] - M_copy[i])) * G[i];
    sum += odd;
    sum += even;
    alternating += odd;
    alternating -= even;
    direct += M[i] * G[i];
    direct_copy += M_copy[i] * G[i];
    path.d.push_back(std::move(odd));
    path.d.push_back(std::move(even));
  }
  auto err = [](const LqElement& a, const LqElement& b) {
    const double scale = std::max(1.0, b.data().cwiseAbs().maxCoeff());
    return (a.data() - b.data()).cwiseAbs().maxCoeff() / scale;
  };
  path.sum_error = err(sum, direct);
  path.alternating_error = err(alternating, direct_copy);
  return path;
}

DecouplingIdentities verify_decoupling_identities(const SimpleAdaptedProcess& F, double t,
                                                  const std::vector<std::size_t>& sets, const ExactOptions& options) {
  const SimpleAdaptedProcess R = F.restricted(t, sets);
  require(!R.terms().empty(), "the restricted process has no terms");
  const Layout L = make_layout(R, true, true, options);
  DecouplingIdentities out;
  std::vector<int> counts(R.grid().cell_count(), 0);
  std::vector<int> copy(R.grid().cell_count(), 0);
  L.space.for_each_atom(0, L.space.atom_count(), [&](std::span<const std::uint32_t> digits, double) {
    L.fill(digits, counts, copy);
    std::vector<LqElement> G;
    std::vector<double> M;
    std::vector<double> Mc;
    for (const auto& term : R.terms()) {
      G.push_back(term.coefficient.evaluate(counts, R.grid()) * term.value);
      M.push_back(counts[term.cell] - R.grid().intensity(term.cell));
      Mc.push_back(copy[term.cell] - R.grid().intensity(term.cell));
    }
    const DecouplingPath path = decoupling_construction(G, M, Mc);
    out.max_sum_error = std::max(out.max_sum_error, path.sum_error);
    out.max_alternating_error = std::max(out.max_alternating_error, path.alternating_error);
    ++out.paths;
  });
  return out;
}

}  // namespace itolab::integ
