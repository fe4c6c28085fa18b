#include "itolab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "itolab/errors.hpp"

namespace itolab::lab {

using lq::LqElement;
using prob::RandomLqVariable;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// lhs <= c * rhs with exact-mode slack plus CI widening for sampled sides.
CheckReport assert_le(const std::string& id, const LabOptions& o, double p, double q, double lhs, double lhs_se,
                      double c, double rhs, double rhs_se, Provenance prov, std::string note = {}) {
  const double tol = o.float_slack * std::max(std::abs(lhs), std::abs(c * rhs)) + o.sigmas * (lhs_se + c * rhs_se);
  const bool sampled = lhs_se > 0.0 || rhs_se > 0.0;
  if (sampled) note += note.empty() ? "sampled, CI-widened" : "; sampled, CI-widened";
  CheckReport r = bound_check(id, o.label, p, q, lhs, c, rhs, prov, tol, std::move(note));
  if (sampled) r.seed = o.seed;
  return r;
}

// |lhs - rhs| <= tol, recorded as lhs <= 1 * rhs with the two-sided status.
CheckReport assert_equal(const std::string& id, const LabOptions& o, double p, double q, double lhs, double rhs,
                         double tol, Provenance prov, std::string note) {
  CheckReport r = bound_check(id, o.label, p, q, lhs, 1.0, rhs, prov, tol, std::move(note));
  r.status = std::abs(lhs - rhs) <= tol ? Status::pass : Status::fail;
  return r;
}

CheckReport report(const std::string& id, const LabOptions& o, double p, double q, double lhs, double rhs,
                   double constant, Provenance prov, std::string note = {}) {
  return ratio_report(id, o.label, p, q, lhs, rhs, constant, prov, std::move(note));
}

std::uint64_t joint_atoms(const std::vector<RandomLqVariable>& items) {
  std::uint64_t n = 1;
  for (const auto& it : items) {
    const std::uint64_t k = it.atom_count();
    if (k != 0 && n > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    n *= k;
  }
  return n;
}

double norm_of(const LqElement& x, double q) {
  if (std::isinf(q)) return lq::operator_norm(x.data());
  return lq::norm_q(x, q);
}

// Per item and atom ||value||_q.
std::vector<std::vector<double>> item_norms(const std::vector<RandomLqVariable>& items, double q) {
  std::vector<std::vector<double>> n(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    for (const auto& v : items[i].values()) n[i].push_back(norm_of(v, q));
  return n;
}

// (E f)^{1/p}, f a function of the atom index of each item; sampled above the budget.
Measured expect_root(const std::vector<RandomLqVariable>& items,
                     const std::function<double(std::span<const std::uint32_t>)>& f, double p, std::uint64_t budget,
                     std::size_t samples, std::uint64_t seed) {
  if (joint_atoms(items) <= budget) return {std::pow(prob::exact_expectation(items, f, budget), 1.0 / p), 0.0, true};
  std::vector<std::vector<std::uint64_t>> draws(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) draws[i] = prob::sample(items[i].space(), seed, samples, i);
  std::vector<double> y(samples);
  std::vector<std::uint32_t> idx(items.size());
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < items.size(); ++i) idx[i] = static_cast<std::uint32_t>(draws[i][s]);
    y[s] = f(idx);
  }
  const prob::Estimate e = prob::root_estimate(y, p);
  return {e.value, e.std_error, false};
}

seq::LqSequence constant_sequence(const std::vector<LqElement>& xs) {
  std::vector<RandomLqVariable> items;
  for (const auto& x : xs) items.push_back(RandomLqVariable::constant(x));
  return seq::LqSequence(std::move(items));
}

// max(col, row); the commutative square function for commutative data.
double square_max(const seq::LqSequence& s, double q) {
  return std::max(seq::norm_S(s, q, lq::Side::column), seq::norm_S(s, q, lq::Side::row));
}

// inf over x = y + z of col(y) + row(z); for commutative data this is S(x).
double square_sum_norm(const seq::LqSequence& s, double q, const seq::OptimizerOptions& opt) {
  if (s.shape().is_commutative()) return seq::norm_S(s, q, lq::Side::column);
  const seq::Node tree = seq::Node::join({seq::Node::make_leaf(seq::Leaf::S_c), seq::Node::make_leaf(seq::Leaf::S_r)});
  return seq::composite_norm(s.field(), tree, 2.0, q, opt).value;
}

Measured process_moment(const integ::SimpleAdaptedProcess& F, double t, const std::vector<std::size_t>& sets, double p,
                        double q, bool decoupled, const LabOptions& o, double* truncation = nullptr) {
  try {
    if (o.sampled) throw ResourceError("sampled mode");
    const integ::ExactMoment m = decoupled ? integ::exact_decoupled_moment(F, t, sets, p, q, o.exact)
                                           : integ::exact_moment(F, t, sets, p, q, o.exact);
    if (truncation) *truncation = m.truncation_tolerance;
    return {m.value, 0.0, true};
  } catch (const ResourceError&) {
    const prob::Estimate e = integ::mc_moment(F, t, sets, p, q, o.mc_samples, o.seed, decoupled);
    if (truncation) *truncation = 0.0;
    return {e.value, e.std_error, false};
  }
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

Measured sum_moment(const std::vector<RandomLqVariable>& items, double p, double q, const LabOptions& options) {
  require(!items.empty(), "a sum needs at least one item");
  if (!options.sampled && joint_atoms(items) <= options.budget) return {prob::exact_moment(items, p, q, options.budget), 0.0, true};
  const prob::Estimate e = prob::mc_moment(items, p, q, options.mc_samples, options.seed);
  return {e.value, e.std_error, false};
}

double diagonal_moment(const std::vector<RandomLqVariable>& items, double p, double q, std::uint64_t budget) {
  const auto n = item_norms(items, q);
  return std::pow(prob::exact_expectation(
                      items,
                      [&](std::span<const std::uint32_t> idx) {
                        double top = 0.0;
                        for (std::size_t i = 0; i < idx.size(); ++i) top = std::max(top, n[i][idx[i]]);
                        if (top == 0.0) return 0.0;
                        double acc = 0.0;
                        for (std::size_t i = 0; i < idx.size(); ++i) acc += std::pow(n[i][idx[i]] / top, q);
                        return std::pow(top, p) * std::pow(acc, p / q);
                      },
                      budget),
                  1.0 / p);
}

double max_moment(const std::vector<RandomLqVariable>& items, double p, double q, std::uint64_t budget) {
  const auto n = item_norms(items, q);
  return std::pow(prob::exact_expectation(
                      items,
                      [&](std::span<const std::uint32_t> idx) {
                        double top = 0.0;
                        for (std::size_t i = 0; i < idx.size(); ++i) top = std::max(top, n[i][idx[i]]);
                        return std::pow(top, p);
                      },
                      budget),
                  1.0 / p);
}

std::vector<RandomLqVariable> randomized(const std::vector<RandomLqVariable>& items) {
  std::vector<RandomLqVariable> out;
  for (const auto& it : items) {
    std::vector<double> probs;
    std::vector<LqElement> values;
    for (std::size_t a = 0; a < it.atom_count(); ++a) {
      probs.push_back(0.5 * it.prob(a));
      values.push_back(it.value(a));
      probs.push_back(0.5 * it.prob(a));
      values.push_back(-1.0 * it.value(a));
    }
    out.push_back(RandomLqVariable::discrete(std::move(probs), std::move(values)));
  }
  return out;
}

void require_mean_zero(const std::vector<RandomLqVariable>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    double scale = 0.0;
    for (const auto& v : items[i].values()) scale = std::max(scale, v.data().cwiseAbs().maxCoeff());
    const double m = items[i].mean().data().cwiseAbs().maxCoeff();
    require(m <= 1e-12 * std::max(scale, 1e-300), "item " + std::to_string(i) + " is not mean-zero");
  }
}

std::vector<CheckReport> check_khintchine(const std::vector<LqElement>& xs, double p, double q,
                                          const LabOptions& o) {
  require(!xs.empty() && xs.size() <= 24, "Khintchine checks enumerate 1..24 signs");
  require(p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q), "Khintchine exponents must be finite and >= 1");
  const seq::LqSequence s = constant_sequence(xs);
  const double m_p = prob::rademacher_moment(xs, p, q);
  const double m_2 = p == 2.0 ? m_p : prob::rademacher_moment(xs, 2.0, q);
  std::vector<CheckReport> out;
  const Constant K = o.constants.khintchine(p, q);
  if (q >= 2.0) {
    const double sq = square_max(s, q);
    out.push_back(assert_le("khintchine_lower", o, 2.0, q, sq, 0.0, 1.0, m_2, 0.0, Provenance::paper_explicit,
                            "max(col,row) <= (E||sum r x||^2)^{1/2}"));
    out.push_back(assert_le("khintchine_upper", o, p, q, m_p, 0.0, K.value, sq, 0.0, K.provenance, K.source));
  } else {
    const double inf = square_sum_norm(s, q, o.optimizer);
    out.push_back(assert_le("khintchine_upper_sum", o, 2.0, q, m_2, 0.0, 1.0, inf, 0.0, Provenance::paper_explicit,
                            "(E||sum r x||^2)^{1/2} <= inf(col(y)+row(z))"));
    if (p != 2.0)
      out.push_back(assert_le("khintchine_upper", o, p, q, m_p, 0.0, K.value, inf, 0.0, K.provenance, K.source));
    out.push_back(report("khintchine_lower_ratio", o, q, q, inf, prob::rademacher_moment(xs, q, q), 1.0,
                         Provenance::measured_envelope, "inf(col+row) / (E||sum r x||^q)^{1/q}, constant implicit"));
  }
  return out;
}

std::vector<CheckReport> check_symmetrization(const seq::LqSequence& s, double p, double q, const LabOptions& o) {
  require(s.size() > 0, "symmetrization needs at least one item");
  require_mean_zero(s.items());
  const Measured a = sum_moment(s.items(), p, q, o);
  const Measured b = sum_moment(randomized(s.items()), p, q, o);
  return {assert_le("symmetrization_lower", o, p, q, a.value, a.std_error, 2.0, b.value, b.std_error,
                    Provenance::paper_explicit, "(1/2)(E||sum xi||^p)^{1/p} <= (E E_r||sum r xi||^p)^{1/p}"),
          assert_le("symmetrization_upper", o, p, q, b.value, b.std_error, 2.0, a.value, a.std_error,
                    Provenance::paper_explicit, "(E E_r||sum r xi||^p)^{1/p} <= 2 (E||sum xi||^p)^{1/p}")};
}

std::vector<CheckReport> check_kahane(const std::vector<LqElement>& xs, double p, double r, double norm_q,
                                      const LabOptions& o) {
  require(!xs.empty() && xs.size() <= 24, "Kahane checks enumerate 1..24 signs");
  const double a = prob::rademacher_moment(xs, p, norm_q);
  const double b = prob::rademacher_moment(xs, r, norm_q);
  if (r > 1.0 && r < p) {
    const Constant k = o.constants.kahane(p, r);
    return {assert_le("kahane", o, p, r, a, 0.0, k.value, b, 0.0, k.provenance, k.source)};
  }
  return {report("kahane", o, p, r, a, b, 1.0, Provenance::paper_explicit, "outside 1 < r < p; report only")};
}

std::vector<CheckReport> check_rosenthal_scalar(const seq::LqSequence& s, double p, const LabOptions& o) {
  require(p >= 2.0 && std::isfinite(p), "the scalar Rosenthal check needs 2 <= p < infinity");
  require(s.size() > 0 && s.shape().rows() * s.shape().cols() == 1, "the scalar Rosenthal check needs scalar items");
  require_mean_zero(s.items());
  const Measured m = sum_moment(s.items(), p, 2.0, o);
  const double a = seq::norm_D(s, p, 2.0);
  const double b = seq::norm_D(s, 2.0, 2.0);
  const double rhs = std::max(a, b);
  std::vector<CheckReport> out;
  out.push_back(assert_le("rosenthal_scalar_lower", o, p, kNaN, rhs, 0.0, 2.0, m.value, m.std_error,
                          Provenance::paper_explicit, "max{(sum E|xi|^p)^{1/p}, (sum E|xi|^2)^{1/2}} <= 2 LHS"));
  const double shape = p / std::log(p);
  if (o.constants.rosenthal_scalar) {
    out.push_back(assert_le("rosenthal_scalar_upper", o, p, kNaN, m.value, m.std_error, *o.constants.rosenthal_scalar * shape,
                            rhs, 0.0, Provenance::configured, "c p / log p, c configured"));
  } else {
    out.push_back(report("rosenthal_scalar_upper", o, p, kNaN, m.value, shape * rhs, 1.0, Provenance::measured_envelope,
                         "LHS / (p/log p max{...}); c unspecified"));
  }
  return out;
}

std::vector<CheckReport> check_rosenthal_positive(const std::vector<RandomLqVariable>& fs, double p, const LabOptions& o) {
  require(!fs.empty(), "positive Rosenthal needs at least one variable");
  require(p >= 1.0 && std::isfinite(p), "positive Rosenthal needs 1 <= p < infinity");
  double a = 0.0;
  double b = 0.0;
  for (const auto& f : fs) {
    require(f.value(0).rows() * f.value(0).cols() == 1, "positive Rosenthal needs scalar variables");
    for (std::size_t k = 0; k < f.atom_count(); ++k) {
      const lq::cplx v = f.value(k).data()(0, 0);
      require(v.imag() == 0.0 && v.real() >= 0.0, "positive Rosenthal needs nonnegative variables");
      a += f.prob(k) * std::pow(v.real(), p);
      b += f.prob(k) * v.real();
    }
  }
  const double rhs = std::max(std::pow(a, 1.0 / p), b);
  const Measured m = sum_moment(fs, p, 2.0, o);
  const Constant R = o.constants.positive_rosenthal(p);
  return {report("rosenthal_positive", o, p, kNaN, m.value, rhs, R.value, Provenance::measured_envelope,
                 "ratio to max{(sum E f^p)^{1/p}, sum E f}; constant implicit"),
          assert_le("rosenthal_positive_bound", o, p, kNaN, m.value, m.std_error, R.value, rhs, 0.0, R.provenance,
                    R.source)};
}

std::vector<CheckReport> check_hoffmann_jorgensen(const std::vector<seq::LqSequence>& family, double p, double q,
                                                  double band, const LabOptions& o) {
  require(!family.empty(), "Hoffmann-Jorgensen needs a nonempty family");
  require(p >= 1.0 && std::isfinite(p), "Hoffmann-Jorgensen needs 1 <= p < infinity");
  std::vector<CheckReport> out;
  std::vector<CheckReport> members;
  const double shape = p / std::log(2.0 * p);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& items = family[k].items();
    require_mean_zero(items);
    const Measured lhs = sum_moment(items, p, q, o);
    const Measured first = sum_moment(items, 1.0, q, o);
    const double mx = max_moment(items, p, q, o.budget);
    const double rhs = shape * (first.value + mx);
    LabOptions member = o;
    member.label = o.label + "#" + std::to_string(k);
    CheckReport r;
    if (o.constants.hoffmann_jorgensen) {
      r = assert_le("hoffmann_jorgensen", member, p, q, lhs.value, lhs.std_error, *o.constants.hoffmann_jorgensen, rhs,
                    shape * first.std_error, Provenance::configured, "factor configured");
    } else {
      r = report("hoffmann_jorgensen", member, p, q, lhs.value, rhs, 1.0, Provenance::measured_envelope,
                 lhs.value == 0.0 && rhs == 0.0 ? "0/0, degenerate member" : "factor unspecified");
    }
    members.push_back(r);
    out.push_back(r);
  }
  out.push_back(envelope_check("hoffmann_jorgensen_stability", o.label, members, band));
  return out;
}

std::vector<CheckReport> check_rosenthal_spq(const seq::LqSequence& s, double p, double q, seq::Mode mode,
                                             const LabOptions& o) {
  require(s.size() > 0, "the Rosenthal check needs at least one item");
  require_mean_zero(s.items());
  const seq::RegimeSpec spec = seq::regime_select(p, q, mode);
  std::vector<CheckReport> out;
  const Measured m = sum_moment(s.items(), p, q, o);
  const double norm = seq::composite_norm(s, spec, o.optimizer).value;
  const std::string regime = "case " + std::to_string(spec.case_id) + ": " + spec.tree.to_string();
  out.push_back(report("rosenthal_spq_ratio", o, p, q, m.value, norm, 1.0, Provenance::measured_envelope, regime));

  const ConstantTable& T = o.constants;
  if (p >= 2.0 && q >= 2.0) {
    const double cpq = T.c_pq(p, q).value;
    const double chalf = T.c_pq(p / 2.0, q / 2.0).value;
    double inner = std::max(1.0, chalf);
    std::string note = "C_pq(1+sqrt2) max(1, C_{p/2,q/2})";
    if (q <= p) {
      inner = std::max(1.0, chalf * std::pow(T.positive_rosenthal(p / q).value, 1.0 / q));
      note = "C_pq(1+sqrt2) max(1, C_{p/2,q/2} R_{p/q}^{1/q}), R configured";
    }
    out.push_back(assert_le("rosenthal_spq_upper", o, p, q, m.value, m.std_error, cpq * (1.0 + std::sqrt(2.0)) * inner,
                            norm, 0.0, q <= p ? Provenance::configured : Provenance::paper_explicit, note));
    const double sq = square_max(s, q);
    out.push_back(assert_le("rosenthal_spq_lower_square", o, p, q, sq, 0.0, 2.0, m.value, m.std_error,
                            Provenance::paper_explicit, "max(S_c, S_r) <= 2 LHS"));
    const Measured b = expect_root(
        s.items(),
        [n = item_norms(s.items(), q), q, p](std::span<const std::uint32_t> idx) {
          double acc = 0.0;
          for (std::size_t i = 0; i < idx.size(); ++i) acc += std::pow(n[i][idx[i]], q);
          return std::pow(acc, p / q);
        },
        p, o.budget, o.mc_samples, o.seed);
    const Constant kappa = T.kahane(q, p);
    out.push_back(assert_le("rosenthal_spq_lower_diagonal", o, p, q, b.value, b.std_error, 2.0 * kappa.value, m.value,
                            m.std_error, Provenance::paper_explicit, "(E(sum||xi||^q)^{p/q})^{1/p} <= 2 kappa_qp LHS"));
  }
  if (p < 2.0 && q < 2.0 && p >= 1.0 && q >= 1.0) {
    const double inf = square_sum_norm(s, q, o.optimizer);
    out.push_back(assert_le("rosenthal_spq_upper_square", o, p, q, m.value, m.std_error, 4.0, inf, 0.0,
                            Provenance::paper_explicit, "LHS <= 4 inf(S_c(eta) + S_r(theta))"));
  }
  const seq::LqSequence big = s.scaled(10.0);
  const Measured m10 = sum_moment(big.items(), p, q, o);
  const double norm10 = seq::composite_norm(big, spec, o.optimizer).value;
  const double r1 = norm > 0.0 ? m.value / norm : 0.0;
  const double r10 = norm10 > 0.0 ? m10.value / norm10 : 0.0;
  out.push_back(assert_equal("rosenthal_spq_scale", o, p, q, r10, r1, 1e-12 * std::max(r1, 1e-300),
                             Provenance::paper_explicit, "ratio at 10 xi against ratio at xi"));
  return out;
}

std::vector<CheckReport> check_2pqqp(const seq::LqSequence& s, double p, double q, seq::Mode mode, const LabOptions& o) {
  require(p >= 2.0 && q >= 2.0 && std::isfinite(p) && std::isfinite(q), "this estimate needs 2 <= p, q < infinity");
  require(s.size() > 0, "the estimate needs at least one item");
  require_mean_zero(s.items());
  (void)mode;
  const ConstantTable& T = o.constants;
  const Measured m = sum_moment(s.items(), p, q, o);
  const double sq = square_max(s, q);
  const double b = diagonal_moment(s.items(), p, q, o.budget);
  const Constant cpq = T.c_pq(p, q);
  const Constant chalf = T.c_pq(p / 2.0, q / 2.0);
  const double rhs = std::max(sq, chalf.value * b);
  const Constant kappa = T.kahane(q, p);
  return {assert_le("2pqqp_upper", o, p, q, m.value, m.std_error, cpq.value * (1.0 + std::sqrt(2.0)), rhs, 0.0,
                    Provenance::paper_explicit,
                    fmt("C_pq(1+sqrt2) max{S_c, S_r, C_{p/2,q/2} b}, C_pq=%.6g, C_{p/2,q/2}=%.6g", cpq.value, chalf.value)),
          assert_le("2pqqp_lower_square", o, p, q, sq, 0.0, 2.0, m.value, m.std_error, Provenance::paper_explicit,
                    "max(S_c, S_r) <= 2 LHS"),
          assert_le("2pqqp_lower_diagonal", o, p, q, b, 0.0, 2.0 * kappa.value, m.value, m.std_error,
                    Provenance::paper_explicit, fmt("b <= 2 kappa_qp LHS, kappa_qp=%.6g", kappa.value))};
}

std::vector<CheckReport> check_decoupling(const integ::SimpleAdaptedProcess& F, double t,
                                          const std::vector<std::size_t>& sets, double p, double q, const LabOptions& o) {
  std::vector<CheckReport> out;
  double ta = 0.0;
  double tb = 0.0;
  const Measured a = process_moment(F, t, sets, p, q, false, o, &ta);
  const Measured b = process_moment(F, t, sets, p, q, true, o, &tb);
  if (F.is_deterministic()) {
    const double tol = 2.0 * std::max(ta, tb) + o.float_slack * std::max(a.value, b.value) +
                       o.sigmas * (a.std_error + b.std_error);
    out.push_back(assert_equal("decoupling_deterministic", o, p, q, a.value, b.value, tol, Provenance::paper_explicit,
                               a.exact ? "identical laws; tolerance 2x truncation" : "identical laws; sampled"));
  } else if (o.constants.umd) {
    out.push_back(assert_le("decoupling", o, p, q, a.value, a.std_error, *o.constants.umd, b.value, b.std_error,
                            Provenance::configured, "UMD constant configured"));
  } else {
    out.push_back(report("decoupling", o, p, q, a.value, b.value, 1.0, Provenance::measured_envelope,
                         "coupled / decoupled; UMD constant not configured"));
  }
  try {
    const integ::DecouplingIdentities id = integ::verify_decoupling_identities(F, t, sets, o.exact);
    const std::string paths = std::to_string(id.paths) + " paths";
    out.push_back(assert_le("decoupling_identity_sum", o, p, q, id.max_sum_error, 0.0, 1.0, 0.0, 0.0,
                            Provenance::paper_explicit, "sum d = sum G M; " + paths));
    out.back().tolerance = 1e-14;
    out.back().status = id.max_sum_error <= 1e-14 ? Status::pass : Status::fail;
    out.push_back(assert_le("decoupling_identity_alternating", o, p, q, id.max_alternating_error, 0.0, 1.0, 0.0, 0.0,
                            Provenance::paper_explicit, "sum (-1)^{i+1} d = sum G M^c; " + paths));
    out.back().tolerance = 1e-14;
    out.back().status = id.max_alternating_error <= 1e-14 ? Status::pass : Status::fail;
  } catch (const ResourceError&) {
    // Identities are checked only on enumerable spaces.
  }
  return out;
}

std::vector<CheckReport> check_ito_isomorphism(const std::vector<ProcessCase>& family, double p, double q,
                                               seq::Mode mode, double band, double scale, double scale_tol,
                                               const LabOptions& o) {
  require(!family.empty(), "the isomorphism check needs a nonempty family");
  std::vector<CheckReport> out;
  double lo_max = 0.0;  // max over members of R - widening
  double hi_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  double r_min = std::numeric_limits<double>::infinity();
  const std::string regime = seq::regime_select(p, q, mode).tree.to_string();
  for (const auto& c : family) {
    LabOptions member = o;
    member.label = o.label.empty() ? c.label : o.label + "/" + c.label;
    const Measured m = process_moment(c.F, c.t, c.sets, p, q, false, o);
    double norm = 0.0;
    try {
      norm = integ::process_norm(c.F, c.t, c.sets, p, q, integ::ProcessNorm::I_regime, mode, o.optimizer, o.exact);
    } catch (const OptimizerError& e) {
      throw OptimizerError("process norm of '" + member.label + "': " + e.what(), e.best_value());
    }
    out.push_back(report("ito_ratio", member, p, q, m.value, norm, 1.0, Provenance::measured_envelope, regime));
    if (norm > 0.0) {
      const double R = m.value / norm;
      const double w = o.sigmas * m.std_error / norm;
      lo_max = std::max(lo_max, R - w);
      hi_min = std::min(hi_min, R + w);
      r_max = std::max(r_max, R);
      r_min = std::min(r_min, R);
      const integ::SimpleAdaptedProcess Fc = c.F.scaled(scale);
      const Measured mc = process_moment(Fc, c.t, c.sets, p, q, false, o);
      const double nc =
          integ::process_norm(Fc, c.t, c.sets, p, q, integ::ProcessNorm::I_regime, mode, o.optimizer, o.exact);
      out.push_back(assert_equal("ito_scale", member, p, q, mc.value / nc, R, scale_tol * R, Provenance::paper_explicit,
                                 fmt("R(cF) against R(F), c=%.6g", scale)));
    }
  }
  CheckReport env;
  env.check_id = "ito_band";
  env.case_id = o.label;
  env.p = p;
  env.q = q;
  env.provenance = Provenance::configured;
  env.constant = band;
  if (r_max == 0.0) {
    env.status = Status::pass;
    env.note = "all members 0/0";
  } else {
    env.lhs = r_max;
    env.rhs = r_min;
    env.tolerance = band * (hi_min - r_min) + (r_max - lo_max);
    env.status = lo_max <= band * hi_min ? Status::pass : Status::fail;
    env.note = "max R <= band * min R over the family, CI-widened when sampled";
  }
  out.push_back(env);
  return out;
}

std::vector<CheckReport> check_doob(const integ::SimpleAdaptedProcess& F, double t,
                                    const std::vector<std::size_t>& sets, double p, double q, const LabOptions& o) {
  require(p > 1.0, "the maximal inequality needs p > 1");
  const integ::RunningMaxEstimate e = integ::running_max_moment(F, t, sets, p, q, o.mc_samples, o.seed);
  const double pc = seq::conjugate(p);
  CheckReport r = assert_le("doob", o, p, q, e.running_max.value, e.running_max.std_error, pc, e.terminal.value,
                            e.terminal.std_error, Provenance::paper_explicit, fmt("constant p'=%.6g", pc));
  r.seed = o.seed;
  return {r};
}

std::vector<CheckReport> check_duality(const seq::LqSequence& f, const seq::LqSequence& g, double p, double q,
                                       seq::Mode mode, double rel_tol, const LabOptions& o) {
  const seq::DualityResult d = seq::duality_gap(f, g, p, q, mode, o.optimizer);
  CheckReport r = bound_check("duality", o.label, p, q, std::abs(d.pairing), 1.0 + rel_tol, d.bound,
                              Provenance::paper_explicit, 0.0, "|<f,g>| <= (1+tol) ||f||_s ||g||_s'");
  return {r};
}

std::vector<CheckReport> check_type_cotype(const std::vector<std::vector<LqElement>>& family, double q, double band,
                                           const LabOptions& o) {
  require(!family.empty(), "type/cotype needs a nonempty family");
  const double s = std::min(q, 2.0);
  const double t = std::max(q, 2.0);
  std::vector<CheckReport> types;
  std::vector<CheckReport> cotypes;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& xs = family[k];
    require(!xs.empty() && xs.size() <= 24, "type/cotype enumerate 1..24 signs");
    double ls = 0.0;
    double lt = 0.0;
    for (const auto& x : xs) {
      ls += std::pow(lq::norm_q(x, q), s);
      lt += std::pow(lq::norm_q(x, q), t);
    }
    LabOptions member = o;
    member.label = o.label + "#" + std::to_string(k);
    types.push_back(report("type", member, s, q, prob::rademacher_moment(xs, s, q), std::pow(ls, 1.0 / s), 1.0,
                           Provenance::measured_envelope, "type min(q,2) ratio"));
    cotypes.push_back(report("cotype", member, t, q, std::pow(lt, 1.0 / t), prob::rademacher_moment(xs, t, q), 1.0,
                             Provenance::measured_envelope, "cotype max(q,2) ratio"));
  }
  std::vector<CheckReport> out = types;
  out.insert(out.end(), cotypes.begin(), cotypes.end());
  out.push_back(envelope_check("type_stability", o.label, types, band));
  out.push_back(envelope_check("cotype_stability", o.label, cotypes, band));
  return out;
}

CheckReport envelope_check(const std::string& check_id, const std::string& case_id,
                           const std::vector<CheckReport>& members, double band) {
  CheckReport r;
  r.check_id = check_id;
  r.case_id = case_id;
  r.constant = band;
  r.provenance = Provenance::configured;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& m : members) {
    if (m.rhs == 0.0) continue;
    lo = std::min(lo, m.ratio());
    hi = std::max(hi, m.ratio());
    r.p = m.p;
    r.q = m.q;
  }
  if (hi == 0.0) {
    r.status = Status::pass;
    r.note = "no member with a nonzero ratio";
    return r;
  }
  r.lhs = hi;
  r.rhs = lo;
  r.status = hi <= band * lo ? Status::pass : Status::fail;
  r.note = "max ratio <= band * min ratio";
  return r;
}

}  // namespace itolab::lab
