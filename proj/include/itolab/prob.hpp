#ifndef ITOLAB_PROB_HPP
#define ITOLAB_PROB_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "itolab/lq.hpp"
#include "itolab/rng.hpp"

namespace itolab::prob {

inline constexpr std::uint64_t kDefaultAtomBudget = 10'000'000;

// One independent coordinate: outcome labels with their probabilities.
struct Marginal {
  std::vector<double> labels;
  std::vector<double> probs;
};

// A finite probability space given as a product of independent factors. Atoms
// are tuples of factor outcomes in mixed radix order, last factor fastest. A
// space with a single factor is an arbitrary finite distribution.
class FiniteProbabilitySpace {
 public:
  FiniteProbabilitySpace();  // one atom with label 0 and probability 1
  FiniteProbabilitySpace(std::vector<double> labels, std::vector<double> probs);
  static FiniteProbabilitySpace uniform(std::size_t n);
  static FiniteProbabilitySpace from_factors(std::vector<Marginal> factors);

  std::size_t factor_count() const { return factors_.size(); }
  const Marginal& factor(std::size_t k) const { return factors_[k]; }
  const std::vector<Marginal>& factors() const { return factors_; }
  std::size_t radix(std::size_t k) const { return factors_[k].probs.size(); }

  // Product of factor sizes, saturating at UINT64_MAX.
  std::uint64_t atom_count() const;
  void decode(std::uint64_t atom, std::span<std::uint32_t> digits) const;
  double prob(std::uint64_t atom) const;
  std::vector<double> label(std::uint64_t atom) const;

  // Walks atoms [begin, end) in order: fn(digits, prob).
  void for_each_atom(std::uint64_t begin, std::uint64_t end,
                     const std::function<void(std::span<const std::uint32_t>, double)>& fn) const;

 private:
  std::vector<Marginal> factors_;
};

FiniteProbabilitySpace product_space(const std::vector<FiniteProbabilitySpace>& spaces,
                                     std::uint64_t budget = kDefaultAtomBudget);

// n independent fair signs; n <= 24.
FiniteProbabilitySpace rademacher_space(int n);

// Inverse-CDF draws of atom indices.
std::vector<std::uint64_t> sample(const FiniteProbabilitySpace& space, std::uint64_t seed, std::size_t n,
                                  std::uint64_t stream = 0);
std::uint32_t sample_index(const std::vector<double>& cumulative, CounterRng& rng);
std::vector<double> cumulative(const std::vector<double>& probs);

// A random L^q element: one value per atom of its space.
class RandomLqVariable {
 public:
  RandomLqVariable(FiniteProbabilitySpace space, std::vector<lq::LqElement> values);
  static RandomLqVariable constant(lq::LqElement value);
  // Independent outcomes values[k] with probabilities probs[k].
  static RandomLqVariable discrete(std::vector<double> probs, std::vector<lq::LqElement> values);

  const FiniteProbabilitySpace& space() const { return space_; }
  const std::vector<lq::LqElement>& values() const { return values_; }
  const lq::LqElement& value(std::uint64_t atom) const { return values_[atom]; }
  std::size_t atom_count() const { return values_.size(); }
  double prob(std::uint64_t atom) const { return probs_[atom]; }
  const std::vector<double>& probs() const { return probs_; }

  lq::LqElement mean() const;
  RandomLqVariable scaled(lq::cplx c) const;

 private:
  FiniteProbabilitySpace space_;
  std::vector<lq::LqElement> values_;
  std::vector<double> probs_;
};

// (E ||sum_i X_i||_q^p)^{1/p} for independent summands, by enumerating the
// product of their spaces. Throws ResourceError above the budget.
double exact_moment(const std::vector<RandomLqVariable>& summands, double p, double q,
                    std::uint64_t budget = kDefaultAtomBudget);

// Generic exact expectation of f over the product of the summand spaces;
// f receives the atom index of each summand.
double exact_expectation(const std::vector<RandomLqVariable>& summands,
                         const std::function<double(std::span<const std::uint32_t>)>& f,
                         std::uint64_t budget = kDefaultAtomBudget);

// (E ||sum_i r_i x_i||_q^p)^{1/p} over all 2^n sign patterns (n <= 24).
double rademacher_moment(const std::vector<lq::LqElement>& xs, double p, double q);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// Sample mean of draws and its standard error.
Estimate mean_estimate(const std::vector<double>& draws);
// (E Y)^{1/p} from draws of Y = ||.||^p, with a delta-method standard error.
Estimate root_estimate(const std::vector<double>& draws, double p);

Estimate mc_moment(const std::vector<RandomLqVariable>& summands, double p, double q, std::size_t n,
                   std::uint64_t seed);

// Poisson(lambda) restricted to {0..K} and renormalized.
struct TruncatedPoisson {
  double lambda = 0.0;
  int cutoff = 0;
  double tail_bound = 0.0;  // upper bound on the discarded mass
  double retained_mass = 1.0;
  bool renormalized = false;
  std::vector<double> probs;  // normalized, size cutoff + 1

  double mean() const;
};

TruncatedPoisson truncated_poisson(double lambda, double eps);
double poisson_pmf(int k, double lambda);
std::vector<int> sample(const TruncatedPoisson& dist, std::uint64_t seed, std::size_t n, std::uint64_t stream = 0);
// Exact inversion draw from Poisson(lambda), no truncation.
int poisson_draw(double lambda, CounterRng& rng);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int cutoff = 0;
};

// Partial sum over k <= K of |k - lambda|^p P(N = k) and a bound on the rest
// (|k - lambda|^p <= k^p beyond lambda, then a ratio test).
SeriesValue centered_poisson_moment_at_cutoff(double p, double lambda, int cutoff);
SeriesValue centered_poisson_moment_series(double p, double lambda, double eps);
double centered_poisson_moment(double p, double lambda, double eps = 1e-15);

}  // namespace itolab::prob

#endif
