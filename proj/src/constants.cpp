#include "itolab/constants.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/errors.hpp"

namespace itolab {

namespace {

void check_exponent(double x, double lo, const char* what) {
  require(std::isfinite(x) && x >= lo, std::string(what) + " out of range");
}

bool is_even_integer(double q) {
  const double n = std::round(q / 2.0);
  return n >= 1.0 && q == 2.0 * n && n <= 85.0;
}

}  // namespace

Constant ConstantTable::khintchine_qq(double q) const {
  check_exponent(q, 2.0, "Khintchine exponent q");
  if (is_even_integer(q)) {
    const double n = q / 2.0;
    // log((2n)!) - n log 2 - log(n!)
    const double log_moment = std::lgamma(q + 1.0) - n * std::log(2.0) - std::lgamma(n + 1.0);
    return {std::exp(log_moment / q), Provenance::paper_explicit, "K_qq^q = (2n)!/(2^n n!)"};
  }
  return {std::sqrt(q), Provenance::paper_explicit, "K_qq < sqrt(q)"};
}

Constant ConstantTable::kahane(double p, double q) const {
  check_exponent(p, 1.0, "Kahane exponent p");
  check_exponent(q, 1.0, "Kahane exponent q");
  if (p <= q) return {1.0, Provenance::paper_explicit, "kappa = 1 for p <= q (Holder)"};
  require(q > 1.0, "the Kahane bound needs q > 1 when p > q");
  return {std::sqrt((p - 1.0) / (q - 1.0)), Provenance::paper_explicit, "kappa_pq <= sqrt((p-1)/(q-1))"};
}

Constant ConstantTable::khintchine(double p, double q) const {
  check_exponent(p, 1.0, "Khintchine exponent p");
  check_exponent(q, 1.0, "Khintchine exponent q");
  if (q >= 2.0) {
    const Constant k = khintchine_qq(q);
    if (p <= q) return {k.value, Provenance::paper_explicit, "K_pq <= " + k.source};
    return {kahane(p, q).value * k.value, Provenance::paper_explicit, "K_pq <= kappa_pq K_qq"};
  }
  if (p <= 2.0) return {1.0, Provenance::paper_explicit, "q <= 2, p <= 2: constant 1"};
  return {std::sqrt(p - 1.0), Provenance::paper_explicit, "q <= 2: kappa_p2 = sqrt(p-1)"};
}

Constant ConstantTable::c_pq(double p, double q) const {
  const Constant k = khintchine(p, q);
  return {2.0 * k.value, k.provenance, "C_pq = 2 K_pq"};
}

Constant ConstantTable::operator_khintchine(double p, double d) const {
  check_exponent(p, 1.0, "operator Khintchine exponent p");
  require(std::isfinite(d) && d >= 1.0, "matrix dimension must be at least 1");
  const double s = std::max(std::log(d), 2.0);
  const double e = std::exp(1.0);
  if (p >= s) return {e * std::sqrt(2.0) * std::sqrt(p - 1.0), Provenance::paper_explicit, "C_pd <= e sqrt(2) sqrt(p-1)"};
  return {e * std::sqrt(s), Provenance::paper_explicit, "C_pd <= e sqrt(max(log d, 2))"};
}

Constant ConstantTable::positive_rosenthal(double r) const {
  check_exponent(r, 1.0, "positive Rosenthal exponent");
  if (r <= 2.0) return {2.0, Provenance::configured, "x^r <= 1 + x^{r-1} gives x <= 2"};
  return {std::pow(2.0, r - 2.0) + 1.0, Provenance::configured, "x^r <= 2^{r-2}(1 + x^{r-1}) gives x <= 2^{r-2} + 1"};
}

}  // namespace itolab
