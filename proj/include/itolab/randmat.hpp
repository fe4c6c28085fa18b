#ifndef ITOLAB_RANDMAT_HPP
#define ITOLAB_RANDMAT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "itolab/constants.hpp"
#include "itolab/report.hpp"
#include "itolab/rng.hpp"

namespace itolab::randmat {

using RealMatrix = Eigen::MatrixXd;

// Mean-zero real law of a single entry.
struct EntryLaw {
  enum class Kind { rademacher, gaussian, two_atom, student_t, table };
  Kind kind = Kind::rademacher;
  double a = 1.0;     // two_atom: the atom a taken with probability prob
  double prob = 0.5;  // two_atom: the other atom is -a prob / (1 - prob)
  double dof = 3.0;   // student_t degrees of freedom, > 2
  std::vector<double> values;  // table
  std::vector<double> probs;   // table

  static EntryLaw rademacher();
  static EntryLaw gaussian();
  static EntryLaw two_atom(double a, double prob);
  static EntryLaw student_t(double dof);
  static EntryLaw table(std::vector<double> values, std::vector<double> probs);

  bool is_discrete() const;
  // Atoms and probabilities of a discrete law.
  void atoms(std::vector<double>& values_out, std::vector<double>& probs_out) const;
  // E|g|^r; infinite when the moment does not exist.
  double abs_moment(double r) const;
  double draw(CounterRng& rng) const;
  std::string to_string() const;
};

// Summand k is S_k o G_k (entrywise), G_k with independent entries of `law`;
// only entries where S_k is nonzero are random. All summands are independent.
struct MatrixEnsemble {
  int d1 = 1;
  int d2 = 1;
  EntryLaw law;
  std::vector<RealMatrix> scales;
  std::string label;

  // n summands with every entry random and unit scale.
  static MatrixEnsemble full(int d1, int d2, int n, EntryLaw law);
  // n summands with diagonal scale min(d1, d2) x ones.
  static MatrixEnsemble diagonal(int d, int n, EntryLaw law);
  // One summand a_ij e_ij per nonzero entry of a: independent entries x_ij = a_ij g_ij.
  static MatrixEnsemble entries(const RealMatrix& a, EntryLaw law);

  std::size_t summand_count() const { return scales.size(); }
  std::size_t random_entry_count() const;
  MatrixEnsemble scaled(double c) const;
  void validate() const;
};

struct RandmatOptions {
  ConstantTable constants;
  std::uint64_t exact_atoms = std::uint64_t{1} << 22;  // enumerate when the joint law has at most this many atoms
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double sigmas = 3.0;
  double float_slack = 1e-12;
  std::string label;
};

// ||(sum_k E xi_k* xi_k)^{1/2}|| and the row counterpart, from the diagonal
// closed form E xi*xi = diag_j(sum_i S_ij^2 E g^2).
struct SquareTerms {
  double column = 0.0;
  double row = 0.0;
};
SquareTerms square_terms(const MatrixEnsemble& e);
// The same via the operator norm of the column (row) embedding of the
// deterministic pieces sqrt(E g^2) S_kij e_ij.
SquareTerms square_terms_embedded(const MatrixEnsemble& e);

struct EnsembleMoments {
  double sum = 0.0;  // (E ||sum xi||^p)^{1/p}
  double sum_se = 0.0;
  double max = 0.0;  // (E max_k ||xi_k||^p)^{1/p}
  double max_se = 0.0;
  bool exact = true;
  std::uint64_t atoms_or_samples = 0;
};
EnsembleMoments ensemble_moments(const MatrixEnsemble& e, double p, const RandmatOptions& options = {});

double operator_norm(const RealMatrix& x);

// Upper bound 2(1+sqrt2) C_{p,d} max{col, row, 2 C_{p/2,d} (E max||xi||^p)^{1/p}}
// and the reverse: max term <= 2^{1+1/p} LHS, col and row <= 2 LHS.
std::vector<CheckReport> bound_matrix_rosenthal(const MatrixEnsemble& e, double p, const RandmatOptions& options = {});
// The entrywise form for an ensemble built by MatrixEnsemble::entries: column
// and row maxima of sum E x_ij^2 and (E max |x_ij|^p)^{1/p}.
std::vector<CheckReport> bound_entrywise(const MatrixEnsemble& e, double p, const RandmatOptions& options = {});
// Three-term expectation bound and its p-th moment form, report-only unless
// the universal constant is configured; inapplicable without a fourth moment.
std::vector<CheckReport> bound_latala(const MatrixEnsemble& e, double p, const RandmatOptions& options = {});
// Rademacher sum of a_ij e_ij against (max(log d, 1))^{1/4} max(col, row),
// d = max(d1, d2); report-only.
std::vector<CheckReport> seginer_ensemble(const RealMatrix& a, double p, const RandmatOptions& options = {});

}  // namespace itolab::randmat

#endif
