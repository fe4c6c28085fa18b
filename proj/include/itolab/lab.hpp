#ifndef ITOLAB_LAB_HPP
#define ITOLAB_LAB_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "itolab/constants.hpp"
#include "itolab/integrator.hpp"
#include "itolab/lq.hpp"
#include "itolab/prob.hpp"
#include "itolab/report.hpp"
#include "itolab/seqnorms.hpp"

namespace itolab::lab {

struct LabOptions {
  ConstantTable constants;
  seq::OptimizerOptions optimizer;
  integ::ExactOptions exact;
  std::uint64_t budget = prob::kDefaultAtomBudget;  // sequence enumeration
  std::size_t mc_samples = 10000;                    // fallback above the budget
  bool sampled = false;                              // sample moments even within the budget
  std::uint64_t seed = 1;
  double float_slack = 1e-12;  // relative tolerance of exact-mode assertions
  double sigmas = 3.0;         // CI widening of sampled assertions
  std::string label;           // case id of the reports
};

// A moment that is exact (std_error 0) or a Monte Carlo estimate.
struct Measured {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

// (E ||sum_i X_i||_q^p)^{1/p}: enumeration within the budget, else sampling.
Measured sum_moment(const std::vector<prob::RandomLqVariable>& items, double p, double q, const LabOptions& options);
// (E (sum_i ||X_i||_q^q)^{p/q})^{1/p} by enumeration.
double diagonal_moment(const std::vector<prob::RandomLqVariable>& items, double p, double q,
                       std::uint64_t budget = prob::kDefaultAtomBudget);
// (E max_i ||X_i||_q^p)^{1/p} by enumeration; q = inf gives the operator norm.
double max_moment(const std::vector<prob::RandomLqVariable>& items, double p, double q,
                  std::uint64_t budget = prob::kDefaultAtomBudget);

// Items r_i X_i with independent signs r_i.
std::vector<prob::RandomLqVariable> randomized(const std::vector<prob::RandomLqVariable>& items);
// Throws InvalidInput unless every item has mean zero up to roundoff.
void require_mean_zero(const std::vector<prob::RandomLqVariable>& items);

// Rademacher sums sum r_i x_i, n <= 24:
//   q >= 2: max(col, row) <= (E||.||^2)^{1/2} and (E||.||^p)^{1/p} <= K_pq max(col, row);
//   q < 2:  (E||.||^p)^{1/p} <= K_pq inf(col(y) + row(z)), lower side report-only.
std::vector<CheckReport> check_khintchine(const std::vector<lq::LqElement>& xs, double p, double q,
                                          const LabOptions& options = {});
// (1/2) A <= B <= 2 A for A = (E||sum xi||^p)^{1/p}, B = (E E_r||sum r xi||^p)^{1/p}.
std::vector<CheckReport> check_symmetrization(const seq::LqSequence& seq, double p, double q,
                                              const LabOptions& options = {});
// (E||sum r x||^p)^{1/p} <= kappa (E||sum r x||^r)^{1/r} with norms in L^norm_q;
// asserted for 1 < r < p, report-only otherwise.
std::vector<CheckReport> check_kahane(const std::vector<lq::LqElement>& xs, double p, double r, double norm_q = 2.0,
                                      const LabOptions& options = {});
// Scalar items, p >= 2: max{(sum E|xi|^p)^{1/p}, (sum E|xi|^2)^{1/2}} <= 2 (E|sum xi|^p)^{1/p};
// the upper side against c p / log p is asserted only when c is configured.
std::vector<CheckReport> check_rosenthal_scalar(const seq::LqSequence& seq, double p, const LabOptions& options = {});
// Nonnegative scalar items: ratio of (E|sum f|^p)^{1/p} to max{(sum E f^p)^{1/p}, sum E f}.
std::vector<CheckReport> check_rosenthal_positive(const std::vector<prob::RandomLqVariable>& fs, double p,
                                                  const LabOptions& options = {});
// Ratio of (E||sum xi||^p)^{1/p} to p/log(2p) (E||sum xi|| + (E max ||xi||^p)^{1/p}) per
// member, and max/min ratio over the family below `band`.
std::vector<CheckReport> check_hoffmann_jorgensen(const std::vector<seq::LqSequence>& family, double p, double q,
                                                  double band = 4.0, const LabOptions& options = {});
// Moment against the s_{p,q} composite norm: hard sub-inequalities where the
// constants are explicit, the ratio as a report, and ratio invariance under xi -> 10 xi.
std::vector<CheckReport> check_rosenthal_spq(const seq::LqSequence& seq, double p, double q, seq::Mode mode,
                                             const LabOptions& options = {});
// 2 <= p, q: both sides of the explicit-constant square-function/diagonal estimate.
std::vector<CheckReport> check_2pqqp(const seq::LqSequence& seq, double p, double q, seq::Mode mode,
                                     const LabOptions& options = {});
// Coupled against decoupled moment of int F dNtilde; equality for deterministic
// F, ratio against the configured UMD constant otherwise, and the pathwise
// identities of the decoupling construction.
std::vector<CheckReport> check_decoupling(const integ::SimpleAdaptedProcess& F, double t,
                                          const std::vector<std::size_t>& sets, double p, double q,
                                          const LabOptions& options = {});

struct ProcessCase {
  integ::SimpleAdaptedProcess F;
  double t = 0.0;
  std::vector<std::size_t> sets;
  std::string label;
};

// R(F) = moment / I_{p,q} norm over a family: per-member ratios (report-only),
// max R / min R <= band, and R(cF) = R(F) to `scale_tol`.
std::vector<CheckReport> check_ito_isomorphism(const std::vector<ProcessCase>& family, double p, double q,
                                               seq::Mode mode, double band = 16.0, double scale = 10.0,
                                               double scale_tol = 1e-12, const LabOptions& options = {});

// (E sup_s ||int_(0,s] F||^p)^{1/p} <= p' (E ||int_(0,t] F||^p)^{1/p} for p > 1,
// sampled from shared paths with CI widening.
std::vector<CheckReport> check_doob(const integ::SimpleAdaptedProcess& F, double t,
                                    const std::vector<std::size_t>& sets, double p, double q,
                                    const LabOptions& options = {});

// |<f, g>| <= (1 + rel_tol) ||f||_{s_{p,q}} ||g||_{s_{p',q'}}.
std::vector<CheckReport> check_duality(const seq::LqSequence& f, const seq::LqSequence& g, double p, double q,
                                       seq::Mode mode, double rel_tol = 1e-3, const LabOptions& options = {});

// Type min(q,2) and cotype max(q,2) ratios of Rademacher sums in L^q,
// report-only per family member, with max/min over the family below `band`.
std::vector<CheckReport> check_type_cotype(const std::vector<std::vector<lq::LqElement>>& family, double q,
                                           double band = 4.0, const LabOptions& options = {});

// min and max of the ratios of the given reports (0/0 members skipped) as one
// hard row: pass when max / min <= band.
CheckReport envelope_check(const std::string& check_id, const std::string& case_id,
                           const std::vector<CheckReport>& members, double band);

}  // namespace itolab::lab

#endif
