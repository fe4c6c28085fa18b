#ifndef ITOLAB_CONSTANTS_HPP
#define ITOLAB_CONSTANTS_HPP

#include <optional>
#include <string>

#include "itolab/report.hpp"

namespace itolab {

struct Constant {
  double value = 1.0;
  Provenance provenance = Provenance::paper_explicit;
  std::string source;  // short formula, for report notes
};

// Explicit constants of the inequalities checked by the lab. Entries that the
// theory leaves implicit are optional and configured by the caller.
class ConstantTable {
 public:
  // Khintchine constant in L^q for p = q >= 2: ((2n)!/(2^n n!))^{1/(2n)} for
  // q = 2n, else the bound sqrt(q).
  Constant khintchine_qq(double q) const;
  // Upper Khintchine constant in L^p(L^q):
  //   q >= 2: K_qq for p <= q, kahane(p, q) K_qq for p > q;
  //   1 <= q < 2 (against the sum-norm side): 1 for p <= 2, sqrt(p - 1) above.
  Constant khintchine(double p, double q) const;
  // C_{p,q} = 2 K_{p,q}.
  Constant c_pq(double p, double q) const;
  // Kahane constant for Rademacher sums: sqrt((p-1)/(q-1)) for q < p, 1 for p <= q.
  Constant kahane(double p, double q) const;
  // Operator-norm Khintchine constant for d1 x d2 matrices, d = min(d1, d2):
  // with s = max(log d, 2), e sqrt(2) sqrt(p-1) when p >= s, e sqrt(s) when p < s.
  Constant operator_khintchine(double p, double d) const;
  // (E (sum f_i)^r)^{1/r} <= R max{(sum E f_i^r)^{1/r}, sum E f_i} for
  // independent f_i >= 0: R = 2 for r <= 2, 2^{r-2} + 1 <= 2^{r-1} above.
  Constant positive_rosenthal(double r) const;

  // Unspecified absolute factors; unset means report-only.
  std::optional<double> hoffmann_jorgensen;  // multiplies p / log(2p)
  std::optional<double> rosenthal_scalar;    // multiplies p / log p
  std::optional<double> latala;              // universal C of the expectation bound
  std::optional<double> umd;                 // decoupling constant C_{p,X}
};

}  // namespace itolab

#endif
