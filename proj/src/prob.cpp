#include "itolab/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "itolab/errors.hpp"
#include "itolab/parallel.hpp"

namespace itolab::prob {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

void validate_distribution(const std::vector<double>& labels, const std::vector<double>& probs) {
  require(!probs.empty(), "a distribution needs at least one outcome");
  require(labels.size() == probs.size(), "labels and probabilities differ in length");
  double total = 0.0;
  for (double p : probs) {
    require(std::isfinite(p) && p >= 0.0, "probabilities must be finite and nonnegative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12, "probabilities must sum to 1 within 1e-12");
}

std::uint64_t saturating_product(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

}  // namespace

FiniteProbabilitySpace::FiniteProbabilitySpace() : factors_{Marginal{{0.0}, {1.0}}} {}

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<double> labels, std::vector<double> probs) {
  validate_distribution(labels, probs);
  factors_.push_back(Marginal{std::move(labels), std::move(probs)});
}

FiniteProbabilitySpace FiniteProbabilitySpace::uniform(std::size_t n) {
  require(n >= 1, "uniform space needs at least one atom");
  std::vector<double> labels(n);
  std::iota(labels.begin(), labels.end(), 0.0);
  return FiniteProbabilitySpace(std::move(labels), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteProbabilitySpace FiniteProbabilitySpace::from_factors(std::vector<Marginal> factors) {
  require(!factors.empty(), "a product needs at least one factor");
  for (const auto& f : factors) validate_distribution(f.labels, f.probs);
  FiniteProbabilitySpace space;
  space.factors_ = std::move(factors);
  return space;
}

std::uint64_t FiniteProbabilitySpace::atom_count() const {
  std::uint64_t n = 1;
  for (const auto& f : factors_) n = saturating_product(n, f.probs.size());
  return n;
}

void FiniteProbabilitySpace::decode(std::uint64_t atom, std::span<std::uint32_t> digits) const {
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const std::uint64_t r = factors_[k].probs.size();
    digits[k] = static_cast<std::uint32_t>(atom % r);
    atom /= r;
  }
}

double FiniteProbabilitySpace::prob(std::uint64_t atom) const {
  double p = 1.0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const std::uint64_t r = factors_[k].probs.size();
    p *= factors_[k].probs[atom % r];
    atom /= r;
  }
  return p;
}

std::vector<double> FiniteProbabilitySpace::label(std::uint64_t atom) const {
  std::vector<double> out(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const std::uint64_t r = factors_[k].probs.size();
    out[k] = factors_[k].labels[atom % r];
    atom /= r;
  }
  return out;
}

void FiniteProbabilitySpace::for_each_atom(std::uint64_t begin, std::uint64_t end,
                                           const std::function<void(std::span<const std::uint32_t>, double)>& fn) const {
  if (begin >= end) return;
  std::vector<std::uint32_t> digits(factors_.size());
  decode(begin, digits);
  for (std::uint64_t a = begin; a < end; ++a) {
    double p = 1.0;
    for (std::size_t k = 0; k < factors_.size(); ++k) p *= factors_[k].probs[digits[k]];
    fn(digits, p);
    for (std::size_t k = factors_.size(); k-- > 0;) {
      if (++digits[k] < factors_[k].probs.size()) break;
      digits[k] = 0;
    }
  }
}

FiniteProbabilitySpace product_space(const std::vector<FiniteProbabilitySpace>& spaces, std::uint64_t budget) {
  require(!spaces.empty(), "product of an empty list");
  std::vector<Marginal> factors;
  std::uint64_t atoms = 1;
  for (const auto& s : spaces) {
    atoms = saturating_product(atoms, s.atom_count());
    factors.insert(factors.end(), s.factors().begin(), s.factors().end());
  }
  if (atoms > budget)
    throw ResourceError("product space has " + (atoms == kSaturated ? std::string("more than 2^64") : std::to_string(atoms)) +
                        " atoms, above the budget of " + std::to_string(budget) + "; use the Monte Carlo path");
  return FiniteProbabilitySpace::from_factors(std::move(factors));
}

FiniteProbabilitySpace rademacher_space(int n) {
  require(n >= 1 && n <= 24, "rademacher_space supports 1 <= n <= 24");
  return FiniteProbabilitySpace::from_factors(std::vector<Marginal>(static_cast<std::size_t>(n), Marginal{{1.0, -1.0}, {0.5, 0.5}}));
}

std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> c(probs.size());
  std::partial_sum(probs.begin(), probs.end(), c.begin());
  return c;
}

std::uint32_t sample_index(const std::vector<double>& cum, CounterRng& rng) {
  const double u = rng.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<std::uint32_t>(it - cum.begin());
}

std::vector<std::uint64_t> sample(const FiniteProbabilitySpace& space, std::uint64_t seed, std::size_t n,
                                  std::uint64_t stream) {
  require(n >= 1, "sample size must be at least 1");
  std::vector<std::vector<double>> cums;
  for (const auto& f : space.factors()) cums.push_back(cumulative(f.probs));
  CounterRng rng(seed, stream);
  std::vector<std::uint64_t> out(n);
  for (auto& atom : out) {
    std::uint64_t a = 0;
    for (std::size_t k = 0; k < cums.size(); ++k) a = a * cums[k].size() + sample_index(cums[k], rng);
    atom = a;
  }
  return out;
}

RandomLqVariable::RandomLqVariable(FiniteProbabilitySpace space, std::vector<lq::LqElement> values)
    : space_(std::move(space)), values_(std::move(values)) {
  require(space_.atom_count() == values_.size(), "one value per atom is required");
  for (const auto& v : values_) {
    require(v.same_shape(values_.front()), "values must share kind and shape");
    require(v.is_finite(), "values must be finite");
  }
  probs_.resize(values_.size());
  for (std::size_t a = 0; a < values_.size(); ++a) probs_[a] = space_.prob(a);
}

RandomLqVariable RandomLqVariable::constant(lq::LqElement value) {
  return RandomLqVariable(FiniteProbabilitySpace(), {std::move(value)});
}

RandomLqVariable RandomLqVariable::discrete(std::vector<double> probs, std::vector<lq::LqElement> values) {
  std::vector<double> labels(probs.size());
  std::iota(labels.begin(), labels.end(), 0.0);
  return RandomLqVariable(FiniteProbabilitySpace(std::move(labels), std::move(probs)), std::move(values));
}

lq::LqElement RandomLqVariable::mean() const {
  lq::LqElement m = lq::LqElement::zeros_like(values_.front());
  for (std::size_t a = 0; a < values_.size(); ++a) m.mutable_data() += probs_[a] * values_[a].data();
  return m;
}

RandomLqVariable RandomLqVariable::scaled(lq::cplx c) const {
  RandomLqVariable out = *this;
  for (auto& v : out.values_) v *= c;
  return out;
}

namespace {

std::uint64_t joint_atoms(const std::vector<RandomLqVariable>& summands, std::uint64_t budget) {
  require(!summands.empty(), "need at least one summand");
  std::uint64_t atoms = 1;
  for (const auto& s : summands) atoms = saturating_product(atoms, s.atom_count());
  if (atoms > budget)
    throw ResourceError("exact enumeration needs " + (atoms == kSaturated ? std::string("more than 2^64") : std::to_string(atoms)) +
                        " atoms, above the budget of " + std::to_string(budget) + "; use the Monte Carlo path");
  return atoms;
}

void decode_joint(const std::vector<RandomLqVariable>& summands, std::uint64_t atom, std::vector<std::uint32_t>& digits) {
  for (std::size_t i = summands.size(); i-- > 0;) {
    const std::uint64_t r = summands[i].atom_count();
    digits[i] = static_cast<std::uint32_t>(atom % r);
    atom /= r;
  }
}

}  // namespace

double exact_expectation(const std::vector<RandomLqVariable>& summands,
                         const std::function<double(std::span<const std::uint32_t>)>& f, std::uint64_t budget) {
  const std::uint64_t atoms = joint_atoms(summands, budget);
  const auto total = chunked_reduce(atoms, 1, [&](std::uint64_t begin, std::uint64_t end, double* acc) {
    std::vector<std::uint32_t> digits(summands.size());
    decode_joint(summands, begin, digits);
    for (std::uint64_t a = begin; a < end; ++a) {
      double p = 1.0;
      for (std::size_t i = 0; i < summands.size(); ++i) p *= summands[i].prob(digits[i]);
      if (p > 0.0) acc[0] += p * f(digits);
      for (std::size_t i = summands.size(); i-- > 0;) {
        if (++digits[i] < summands[i].atom_count()) break;
        digits[i] = 0;
      }
    }
  });
  return total[0];
}

double exact_moment(const std::vector<RandomLqVariable>& summands, double p, double q, std::uint64_t budget) {
  require(p > 0.0, "moment exponent must be positive");
  const std::uint64_t atoms = joint_atoms(summands, budget);
  const lq::LqElement& shape = summands.front().value(0);
  for (const auto& s : summands) require(s.value(0).same_shape(shape), "summands must share kind and shape");
  const auto total = chunked_reduce(atoms, 1, [&](std::uint64_t begin, std::uint64_t end, double* acc) {
    std::vector<std::uint32_t> digits(summands.size());
    decode_joint(summands, begin, digits);
    lq::Matrix sum = lq::Matrix::Zero(shape.rows(), shape.cols());
    for (std::size_t i = 0; i < summands.size(); ++i) sum += summands[i].value(digits[i]).data();
    for (std::uint64_t a = begin; a < end; ++a) {
      double pr = 1.0;
      for (std::size_t i = 0; i < summands.size(); ++i) pr *= summands[i].prob(digits[i]);
      if (pr > 0.0) acc[0] += pr * std::pow(lq::norm_q(sum, shape, q), p);
      for (std::size_t i = summands.size(); i-- > 0;) {
        const std::uint32_t old = digits[i];
        const bool carry = ++digits[i] >= summands[i].atom_count();
        if (carry) digits[i] = 0;
        sum += summands[i].value(digits[i]).data() - summands[i].value(old).data();
        if (!carry) break;
      }
    }
  });
  return std::pow(total[0], 1.0 / p);
}

double rademacher_moment(const std::vector<lq::LqElement>& xs, double p, double q) {
  const std::size_t n = xs.size();
  require(n >= 1 && n <= 24, "rademacher_moment supports 1 <= n <= 24");
  require(p > 0.0, "moment exponent must be positive");
  for (const auto& x : xs) require(x.same_shape(xs.front()), "elements must share kind and shape");
  const lq::LqElement& shape = xs.front();
  // The norm is even in the sign vector, so the first sign stays +1.
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  const double weight = 1.0 / static_cast<double>(patterns);
  const auto total = chunked_reduce(
      patterns, 1,
      [&](std::uint64_t begin, std::uint64_t end, double* acc) {
        std::vector<int> sign(n, 1);
        const std::uint64_t gray = begin ^ (begin >> 1);
        for (std::size_t b = 0; b + 1 < n; ++b) sign[b + 1] = (gray >> b) & 1U ? -1 : 1;
        lq::Matrix sum = lq::Matrix::Zero(shape.rows(), shape.cols());
        for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(sign[i]) * xs[i].data();
        for (std::uint64_t k = begin; k < end; ++k) {
          acc[0] += std::pow(lq::norm_q(sum, shape, q), p);
          const std::uint64_t next = k + 1;
          if (next >= end) break;
          const int bit = __builtin_ctzll(next);
          const std::size_t i = static_cast<std::size_t>(bit) + 1;
          sum -= (2.0 * sign[i]) * xs[i].data();
          sign[i] = -sign[i];
        }
      },
      1024);
  return std::pow(total[0] * weight, 1.0 / p);
}

Estimate mean_estimate(const std::vector<double>& draws) {
  Estimate e;
  e.samples = draws.size();
  if (draws.empty()) return e;
  const double n = static_cast<double>(draws.size());
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  e.value = mean;
  e.std_error = draws.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return e;
}

Estimate root_estimate(const std::vector<double>& draws, double p) {
  const Estimate m = mean_estimate(draws);
  Estimate e;
  e.samples = m.samples;
  e.value = std::pow(m.value, 1.0 / p);
  e.std_error = m.value > 0.0 ? std::pow(m.value, 1.0 / p - 1.0) * m.std_error / p : 0.0;
  return e;
}

Estimate mc_moment(const std::vector<RandomLqVariable>& summands, double p, double q, std::size_t n,
                   std::uint64_t seed) {
  require(!summands.empty(), "need at least one summand");
  require(n >= 1, "sample size must be at least 1");
  const lq::LqElement& shape = summands.front().value(0);
  std::vector<std::vector<double>> cums;
  for (const auto& s : summands) cums.push_back(cumulative(s.probs()));
  std::vector<double> draws(n);
  parallel_for(n, [&](std::size_t k) {
    CounterRng rng(seed, k);
    lq::Matrix sum = lq::Matrix::Zero(shape.rows(), shape.cols());
    for (std::size_t i = 0; i < summands.size(); ++i) sum += summands[i].value(sample_index(cums[i], rng)).data();
    draws[k] = std::pow(lq::norm_q(sum, shape, q), p);
  });
  return root_estimate(draws, p);
}

double poisson_pmf(int k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

double TruncatedPoisson::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
  return m;
}

TruncatedPoisson truncated_poisson(double lambda, double eps) {
  require(std::isfinite(lambda) && lambda >= 0.0, "Poisson intensity must be finite and nonnegative");
  require(eps > 0.0 && eps < 1.0, "truncation level must lie in (0, 1)");
  TruncatedPoisson t;
  t.lambda = lambda;
  if (lambda == 0.0) {
    t.probs = {1.0};
    return t;
  }
  // Tabulate far enough that the geometric remainder is negligible against eps.
  const double negligible = std::min(eps, 1e-18) * 1e-3;
  std::vector<double> pmf;
  double remainder = 0.0;
  for (int k = 0;; ++k) {
    pmf.push_back(poisson_pmf(k, lambda));
    if (k + 2 > lambda) {
      const double ratio = lambda / (k + 2.0);
      remainder = poisson_pmf(k + 1, lambda) / (1.0 - ratio);
      if (remainder < negligible) break;
    }
  }
  std::vector<double> suffix(pmf.size());  // suffix[k] bounds P(N > k)
  double acc = remainder;
  for (std::size_t k = pmf.size(); k-- > 0;) {
    suffix[k] = acc;
    acc += pmf[k];
  }
  std::size_t cutoff = 0;
  while (suffix[cutoff] > eps) ++cutoff;
  t.cutoff = static_cast<int>(cutoff);
  t.tail_bound = suffix[cutoff];
  t.retained_mass = 0.0;
  for (std::size_t k = 0; k <= cutoff; ++k) t.retained_mass += pmf[k];
  t.probs.assign(pmf.begin(), pmf.begin() + static_cast<std::ptrdiff_t>(cutoff) + 1);
  for (double& p : t.probs) p /= t.retained_mass;
  t.renormalized = true;
  return t;
}

std::vector<int> sample(const TruncatedPoisson& dist, std::uint64_t seed, std::size_t n, std::uint64_t stream) {
  require(n >= 1, "sample size must be at least 1");
  const auto cum = cumulative(dist.probs);
  CounterRng rng(seed, stream);
  std::vector<int> out(n);
  for (auto& k : out) k = static_cast<int>(sample_index(cum, rng));
  return out;
}

int poisson_draw(double lambda, CounterRng& rng) {
  require(lambda >= 0.0 && lambda <= 700.0, "poisson_draw supports 0 <= lambda <= 700");
  const double u = rng.uniform();
  int k = 0;
  double pk = std::exp(-lambda);
  double c = pk;
  while (u >= c) {
    ++k;
    pk *= lambda / k;
    c += pk;
    if (pk == 0.0 && k > lambda) break;
  }
  return k;
}

SeriesValue centered_poisson_moment_at_cutoff(double p, double lambda, int cutoff) {
  require(p > 0.0, "moment exponent must be positive");
  require(std::isfinite(lambda) && lambda >= 0.0, "Poisson intensity must be finite and nonnegative");
  require(cutoff >= 0, "cutoff must be nonnegative");
  SeriesValue s;
  s.cutoff = cutoff;
  if (lambda == 0.0) return s;
  for (int k = 0; k <= cutoff; ++k) {
    const double pk = poisson_pmf(k, lambda);
    if (pk > 0.0) s.value += std::pow(std::abs(k - lambda), p) * pk;
  }
  const double next = cutoff + 1.0;
  if (next <= lambda) {
    s.tail_bound = std::numeric_limits<double>::infinity();
    return s;
  }
  const double rho = std::pow((next + 1.0) / next, p) * lambda / (next + 1.0);
  if (rho >= 1.0) {
    s.tail_bound = std::numeric_limits<double>::infinity();
    return s;
  }
  s.tail_bound = std::pow(next, p) * poisson_pmf(cutoff + 1, lambda) / (1.0 - rho);
  return s;
}

SeriesValue centered_poisson_moment_series(double p, double lambda, double eps) {
  require(eps > 0.0, "tail tolerance must be positive");
  if (lambda == 0.0) return centered_poisson_moment_at_cutoff(p, lambda, 0);
  int cutoff = static_cast<int>(std::ceil(lambda));
  for (;; ++cutoff) {
    SeriesValue s = centered_poisson_moment_at_cutoff(p, lambda, cutoff);
    if (s.tail_bound <= eps) return s;
    require(cutoff < 100000, "Poisson moment series did not reach the tail tolerance");
  }
}

double centered_poisson_moment(double p, double lambda, double eps) {
  return centered_poisson_moment_series(p, lambda, eps).value;
}

}  // namespace itolab::prob
