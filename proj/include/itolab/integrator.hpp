#ifndef ITOLAB_INTEGRATOR_HPP
#define ITOLAB_INTEGRATOR_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "itolab/lq.hpp"
#include "itolab/poisson.hpp"
#include "itolab/prob.hpp"
#include "itolab/seqnorms.hpp"

namespace itolab::integ {

using poisson::GridPartition;
using poisson::PoissonFieldRealization;

// weight * g(total count over a group of cells), g one of
//   count: N,  compensated: N - lambda,  occupied: 1{N >= 1}.
struct Factor {
  enum class Kind { count, compensated, occupied };
  std::vector<std::size_t> cells;  // flat cell indices
  Kind kind = Kind::count;
  double weight = 1.0;
};

// constant + sum of factors: a functional of the counts in earlier cells.
struct Coefficient {
  lq::cplx constant = 1.0;
  std::vector<Factor> factors;

  static Coefficient deterministic(lq::cplx c) { return Coefficient{c, {}}; }
  bool is_deterministic() const { return factors.empty(); }
  // counts and intensities are indexed by flat cell.
  lq::cplx evaluate(const std::vector<int>& counts, const GridPartition& grid) const;
};

struct Term {
  std::size_t cell = 0;
  Coefficient coefficient;
  lq::LqElement value;
};

// F = sum over terms of coefficient * chi_cell (x) value. Coefficients of a
// term in interval i read only cells of intervals < i.
class SimpleAdaptedProcess {
 public:
  explicit SimpleAdaptedProcess(GridPartition grid, lq::LqElement shape = lq::LqElement::scalar(0.0));

  void add_term(std::size_t interval, std::size_t set, Coefficient coefficient, lq::LqElement value);

  const GridPartition& grid() const { return grid_; }
  const std::vector<Term>& terms() const { return terms_; }
  const lq::LqElement& shape() const { return shape_; }
  bool is_deterministic() const;
  // Cells read by some coefficient, sorted.
  std::vector<std::size_t> read_cells() const;

  SimpleAdaptedProcess scaled(lq::cplx c) const;
  // Same process on a grid containing every breakpoint of this one.
  SimpleAdaptedProcess refined(const GridPartition& fine) const;
  SimpleAdaptedProcess with_breakpoint(double t) const;
  // Terms whose cell ends by t and whose set is in `sets`, on a grid with t as a breakpoint.
  SimpleAdaptedProcess restricted(double t, const std::vector<std::size_t>& sets) const;

 private:
  GridPartition grid_;
  lq::LqElement shape_;
  std::vector<Term> terms_;
};

// sum F_{ijk} Ntilde((t_i ^ t, t_{i+1} ^ t] x A_j) x_{ijk} over sets in `sets`.
lq::LqElement integrate(const SimpleAdaptedProcess& F, const PoissonFieldRealization& field, double t,
                        const std::vector<std::size_t>& sets);
// Coefficients read `field`; the integrator is the independent copy `copy`.
lq::LqElement decoupled_integrate(const SimpleAdaptedProcess& F, const PoissonFieldRealization& field,
                                  const PoissonFieldRealization& copy, double t, const std::vector<std::size_t>& sets);

struct ExactOptions {
  double eps = 1e-10;  // truncation level of each Poisson factor
  std::uint64_t budget = prob::kDefaultAtomBudget;
};

struct ExactMoment {
  double value = 0.0;
  // First-order bound on the error from truncating the Poisson factors.
  double truncation_tolerance = 0.0;
  std::uint64_t atoms = 0;
};

// (E ||int F dNtilde||_q^p)^{1/p} by enumerating truncated Poisson counts.
ExactMoment exact_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p,
                         double q, const ExactOptions& options = {});
ExactMoment exact_decoupled_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                                   double p, double q, const ExactOptions& options = {});
// (E sup_{s <= t} ||int_(0,s] F dNtilde||_q^p)^{1/p}, sup over grid breakpoints.
ExactMoment exact_running_max_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                                     double p, double q, const ExactOptions& options = {});
lq::LqElement exact_mean(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                         const ExactOptions& options = {});

struct RunningMaxEstimate {
  prob::Estimate running_max;  // (E sup_s ||.||^p)^{1/p}
  prob::Estimate terminal;     // (E ||.||^p)^{1/p} at t, from the same paths
};

RunningMaxEstimate running_max_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                                      double p, double q, std::size_t n_samples, std::uint64_t seed);

// Monte Carlo (E ||int F dNtilde||_q^p)^{1/p}, coupled or decoupled.
prob::Estimate mc_moment(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p,
                         double q, std::size_t n_samples, std::uint64_t seed, bool decoupled = false);

enum class ProcessNorm { S_c, S_r, S, D_qq, D_pq, I_regime };
std::string to_string(ProcessNorm which);
ProcessNorm process_norm_from_string(const std::string& s);

// Mixed field of F on (0, t] x B: outer atoms enumerate the counts read by the
// coefficients (grouped into blocks of cells that every factor treats alike),
// cells are the support cells of F weighted by intensity, and cells carrying
// identical values on every outer atom are merged.
seq::MixedField process_field(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets,
                              const ExactOptions& options = {});

double process_norm(const SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p, double q,
                    ProcessNorm which, seq::Mode mode = seq::Mode::noncommutative,
                    const seq::OptimizerOptions& optimizer = {}, const ExactOptions& options = {});

// A process on outer atoms x time x space given by pieces [t0, t1] x E with
// E a subset of grid set `set` of measure `measure`; set = npos for mass
// outside every grid set.
struct FinePiece {
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t set = 0;
  double measure = 0.0;
  std::vector<lq::LqElement> values;  // one per outer atom
};
inline constexpr std::size_t kOutsideGrid = std::numeric_limits<std::size_t>::max();

struct FineProcess {
  std::vector<double> outer;  // outer atom probabilities
  std::vector<FinePiece> pieces;
  lq::LqElement shape;
};

// Cellwise averages y = mu(cell)^{-1} int_cell G for every outer atom.
struct CellCoefficients {
  std::vector<double> outer;
  std::vector<lq::LqElement> values;  // outer-major, outer.size() * grid.cell_count()
};

CellCoefficients grid_condition(const FineProcess& G, const GridPartition& grid);
FineProcess as_fine(const CellCoefficients& y, const GridPartition& grid);
seq::MixedField field_of(const FineProcess& G);
seq::MixedField field_of(const CellCoefficients& y, const GridPartition& grid);

// d_{2i-1} = G_i (M_i + M_i^c) / 2, d_{2i} = G_i (M_i - M_i^c) / 2 along one path.
struct DecouplingPath {
  std::vector<lq::LqElement> d;
  double sum_error = 0.0;          // max |sum d - sum G M| relative to max(1, |sum G M|)
  double alternating_error = 0.0;  // the same for sum (-1)^{i+1} d against sum G M^c
};
DecouplingPath decoupling_construction(const std::vector<lq::LqElement>& G, const std::vector<double>& M,
                                       const std::vector<double>& M_copy);

struct DecouplingIdentities {
  std::uint64_t paths = 0;
  double max_sum_error = 0.0;
  double max_alternating_error = 0.0;
};
// Runs the construction on every atom of the joint exact space of the field
// and its copy, with G_i, M_i, M_i^c the coefficient value and the two
// compensated counts of each term.
DecouplingIdentities verify_decoupling_identities(const SimpleAdaptedProcess& F, double t,
                                                  const std::vector<std::size_t>& sets,
                                                  const ExactOptions& options = {});

}  // namespace itolab::integ

#endif
