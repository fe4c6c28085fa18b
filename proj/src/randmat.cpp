#include "itolab/randmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "itolab/errors.hpp"
#include "itolab/lq.hpp"
#include "itolab/parallel.hpp"
#include "itolab/prob.hpp"

namespace itolab::randmat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSampleStream = 0x72616e646d6174;  // "randmat"

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CheckReport assert_le(const std::string& id, const RandmatOptions& o, double p, double lhs, double lhs_se, double c,
                      double rhs, double rhs_se, Provenance prov, std::string note) {
  const double tol = o.float_slack * std::max(lhs, c * rhs) + o.sigmas * (lhs_se + c * rhs_se);
  const bool sampled = lhs_se > 0.0 || rhs_se > 0.0;
  if (sampled) note += "; sampled, CI-widened";
  CheckReport r = bound_check(id, o.label, p, std::numeric_limits<double>::infinity(), lhs, c, rhs, prov, tol,
                              std::move(note));
  if (sampled) r.seed = o.seed;
  return r;
}

struct RandomEntry {
  std::size_t summand;
  Eigen::Index row;
  Eigen::Index col;
  double scale;
};

std::vector<RandomEntry> random_entries(const MatrixEnsemble& e) {
  std::vector<RandomEntry> out;
  for (std::size_t k = 0; k < e.scales.size(); ++k)
    for (Eigen::Index j = 0; j < e.scales[k].cols(); ++j)
      for (Eigen::Index i = 0; i < e.scales[k].rows(); ++i)
        if (e.scales[k](i, j) != 0.0) out.push_back({k, i, j, e.scales[k](i, j)});
  return out;
}

// r^m saturating.
std::uint64_t power_count(std::uint64_t r, std::size_t m) {
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (n > std::numeric_limits<std::uint64_t>::max() / r) return std::numeric_limits<std::uint64_t>::max();
    n *= r;
  }
  return n;
}

prob::FiniteProbabilitySpace entry_space(const EntryLaw& law, std::size_t m) {
  prob::Marginal one;
  law.atoms(one.labels, one.probs);
  return prob::FiniteProbabilitySpace::from_factors(std::vector<prob::Marginal>(std::max<std::size_t>(m, 1), one));
}

// (E max_k Y_k^p)^{1/p} from the exact law of each Y_k = ||xi_k||.
double exact_max_moment(const MatrixEnsemble& e, const std::vector<RandomEntry>& entries, double p) {
  std::vector<double> labels;
  std::vector<double> probs;
  e.law.atoms(labels, probs);
  std::vector<std::vector<std::pair<double, double>>> laws(e.scales.size());
  for (std::size_t k = 0; k < e.scales.size(); ++k) {
    std::vector<RandomEntry> mine;
    for (const auto& en : entries)
      if (en.summand == k) mine.push_back(en);
    if (mine.empty()) {
      laws[k].push_back({0.0, 1.0});
      continue;
    }
    const prob::FiniteProbabilitySpace space = entry_space(e.law, mine.size());
    RealMatrix x = RealMatrix::Zero(e.d1, e.d2);
    space.for_each_atom(0, space.atom_count(), [&](std::span<const std::uint32_t> digits, double pr) {
      for (std::size_t v = 0; v < mine.size(); ++v) x(mine[v].row, mine[v].col) = mine[v].scale * labels[digits[v]];
      laws[k].push_back({operator_norm(x), pr});
    });
    std::sort(laws[k].begin(), laws[k].end());
  }
  std::vector<double> support;
  for (const auto& l : laws)
    for (const auto& [v, pr] : l) support.push_back(v);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<std::size_t> pos(laws.size(), 0);
  std::vector<double> cdf(laws.size(), 0.0);
  double prev = 0.0;
  double acc = 0.0;
  const double top = support.empty() ? 0.0 : support.back();
  if (top == 0.0) return 0.0;
  for (double v : support) {
    double joint = 1.0;
    for (std::size_t k = 0; k < laws.size(); ++k) {
      while (pos[k] < laws[k].size() && laws[k][pos[k]].first <= v) cdf[k] += laws[k][pos[k]++].second;
      joint *= std::min(cdf[k], 1.0);
    }
    acc += std::pow(v / top, p) * std::max(joint - prev, 0.0);
    prev = joint;
  }
  return top * std::pow(acc, 1.0 / p);
}

double exact_sum_moment(const MatrixEnsemble& e, const std::vector<RandomEntry>& entries, double p) {
  std::vector<double> labels;
  std::vector<double> probs;
  e.law.atoms(labels, probs);
  const prob::FiniteProbabilitySpace space = entry_space(e.law, entries.size());
  const auto total = chunked_reduce(space.atom_count(), 1, [&](std::uint64_t begin, std::uint64_t end, double* acc) {
    RealMatrix x(e.d1, e.d2);
    space.for_each_atom(begin, end, [&](std::span<const std::uint32_t> digits, double pr) {
      x.setZero();
      for (std::size_t v = 0; v < entries.size(); ++v) x(entries[v].row, entries[v].col) += entries[v].scale * labels[digits[v]];
      acc[0] += pr * std::pow(operator_norm(x), p);
    });
  });
  return std::pow(total[0], 1.0 / p);
}

}  // namespace

EntryLaw EntryLaw::rademacher() { return EntryLaw{}; }

EntryLaw EntryLaw::gaussian() {
  EntryLaw l;
  l.kind = Kind::gaussian;
  return l;
}

EntryLaw EntryLaw::two_atom(double a, double prob) {
  require(std::isfinite(a) && a != 0.0, "two-atom law needs a finite nonzero atom");
  require(prob > 0.0 && prob < 1.0, "two-atom probability must lie in (0, 1)");
  EntryLaw l;
  l.kind = Kind::two_atom;
  l.a = a;
  l.prob = prob;
  return l;
}

EntryLaw EntryLaw::student_t(double dof) {
  require(std::isfinite(dof) && dof > 2.0, "Student t entries need more than 2 degrees of freedom");
  EntryLaw l;
  l.kind = Kind::student_t;
  l.dof = dof;
  return l;
}

EntryLaw EntryLaw::table(std::vector<double> values, std::vector<double> probs) {
  require(!values.empty() && values.size() == probs.size(), "entry table needs one probability per value");
  double total = 0.0;
  double mean = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    require(std::isfinite(values[k]) && probs[k] >= 0.0, "entry table values must be finite, probabilities nonnegative");
    total += probs[k];
    mean += probs[k] * values[k];
    scale = std::max(scale, std::abs(values[k]));
  }
  require(std::abs(total - 1.0) <= 1e-12, "entry table probabilities must sum to 1");
  require(std::abs(mean) <= 1e-12 * std::max(scale, 1e-300), "entry law must be mean-zero");
  EntryLaw l;
  l.kind = Kind::table;
  l.values = std::move(values);
  l.probs = std::move(probs);
  return l;
}

bool EntryLaw::is_discrete() const { return kind == Kind::rademacher || kind == Kind::two_atom || kind == Kind::table; }

void EntryLaw::atoms(std::vector<double>& v, std::vector<double>& pr) const {
  switch (kind) {
    case Kind::rademacher: v = {-1.0, 1.0}; pr = {0.5, 0.5}; return;
    case Kind::two_atom: v = {a, -a * prob / (1.0 - prob)}; pr = {prob, 1.0 - prob}; return;
    case Kind::table: v = values; pr = probs; return;
    default: throw InvalidInput("law " + to_string() + " has no finite atoms");
  }
}

double EntryLaw::abs_moment(double r) const {
  require(r > 0.0 && std::isfinite(r), "moment order must be positive and finite");
  switch (kind) {
    case Kind::gaussian:
      return std::exp(0.5 * r * std::log(2.0) + std::lgamma(0.5 * (r + 1.0))) / std::sqrt(std::numbers::pi);
    case Kind::student_t:
      if (r >= dof) return kInf;
      return std::exp(0.5 * r * std::log(dof) + std::lgamma(0.5 * (r + 1.0)) + std::lgamma(0.5 * (dof - r)) -
                      std::lgamma(0.5 * dof)) /
             std::sqrt(std::numbers::pi);
    default: {
      std::vector<double> v;
      std::vector<double> pr;
      atoms(v, pr);
      double m = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) m += pr[k] * std::pow(std::abs(v[k]), r);
      return m;
    }
  }
}

double EntryLaw::draw(CounterRng& rng) const {
  switch (kind) {
    case Kind::rademacher: return rng.uniform() < 0.5 ? -1.0 : 1.0;
    case Kind::gaussian: return rng.normal();
    case Kind::two_atom: return rng.uniform() < prob ? a : -a * prob / (1.0 - prob);
    case Kind::student_t: return boost::math::quantile(boost::math::students_t(dof), rng.uniform_open());
    case Kind::table: return values[prob::sample_index(prob::cumulative(probs), rng)];
  }
  return 0.0;
}

std::string EntryLaw::to_string() const {
  switch (kind) {
    case Kind::rademacher: return "rademacher";
    case Kind::gaussian: return "gaussian";
    case Kind::two_atom: return fmt("two_atom(a=%.6g,prob=%.6g)", a, prob);
    case Kind::student_t: return fmt("student_t(dof=%.6g)", dof);
    case Kind::table: return "table(" + std::to_string(values.size()) + " atoms)";
  }
  return "?";
}

MatrixEnsemble MatrixEnsemble::full(int d1, int d2, int n, EntryLaw law) {
  require(d1 >= 1 && d2 >= 1 && n >= 1, "ensemble dimensions and summand count must be positive");
  MatrixEnsemble e;
  e.d1 = d1;
  e.d2 = d2;
  e.law = std::move(law);
  e.scales.assign(static_cast<std::size_t>(n), RealMatrix::Ones(d1, d2));
  e.label = "full";
  return e;
}

MatrixEnsemble MatrixEnsemble::diagonal(int d, int n, EntryLaw law) {
  require(d >= 1 && n >= 1, "ensemble dimensions and summand count must be positive");
  MatrixEnsemble e;
  e.d1 = d;
  e.d2 = d;
  e.law = std::move(law);
  e.scales.assign(static_cast<std::size_t>(n), RealMatrix::Identity(d, d));
  e.label = "diagonal";
  return e;
}

MatrixEnsemble MatrixEnsemble::entries(const RealMatrix& a, EntryLaw law) {
  require(a.size() > 0 && a.allFinite(), "entry scale table must be finite and nonempty");
  MatrixEnsemble e;
  e.d1 = static_cast<int>(a.rows());
  e.d2 = static_cast<int>(a.cols());
  e.law = std::move(law);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0) {
        RealMatrix s = RealMatrix::Zero(a.rows(), a.cols());
        s(i, j) = a(i, j);
        e.scales.push_back(std::move(s));
      }
  if (e.scales.empty()) e.scales.push_back(RealMatrix::Zero(a.rows(), a.cols()));
  e.label = "entries";
  return e;
}

std::size_t MatrixEnsemble::random_entry_count() const { return random_entries(*this).size(); }

MatrixEnsemble MatrixEnsemble::scaled(double c) const {
  MatrixEnsemble e = *this;
  for (auto& s : e.scales) s *= c;
  return e;
}

void MatrixEnsemble::validate() const {
  require(d1 >= 1 && d2 >= 1 && !scales.empty(), "ensemble needs positive dimensions and at least one summand");
  for (const auto& s : scales)
    require(s.rows() == d1 && s.cols() == d2 && s.allFinite(), "every summand scale must be a finite d1 x d2 matrix");
}

double operator_norm(const RealMatrix& x) {
  if (x.rows() == 1 || x.cols() == 1) return x.norm();
  const RealMatrix g = x.cols() <= x.rows() ? RealMatrix(x.transpose() * x) : RealMatrix(x * x.transpose());
  const Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

SquareTerms square_terms(const MatrixEnsemble& e) {
  e.validate();
  const double var = e.law.abs_moment(2.0);
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(e.d2);  // E xi*xi diagonal
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(e.d1);  // E xi xi* diagonal
  for (const auto& s : e.scales) {
    colsum += var * s.cwiseAbs2().colwise().sum().transpose();
    rowsum += var * s.cwiseAbs2().rowwise().sum();
  }
  return {std::sqrt(colsum.maxCoeff()), std::sqrt(rowsum.maxCoeff())};
}

SquareTerms square_terms_embedded(const MatrixEnsemble& e) {
  e.validate();
  const double sd = std::sqrt(e.law.abs_moment(2.0));
  std::vector<lq::LqElement> pieces;
  for (const auto& en : random_entries(e)) {
    lq::Matrix m = lq::Matrix::Zero(e.d1, e.d2);
    m(en.row, en.col) = sd * en.scale;
    pieces.push_back(lq::LqElement::matrix(m));
  }
  if (pieces.empty()) return {0.0, 0.0};
  return {lq::operator_norm(lq::embed(pieces, lq::Layout::col).data()),
          lq::operator_norm(lq::embed(pieces, lq::Layout::row).data())};
}

EnsembleMoments ensemble_moments(const MatrixEnsemble& e, double p, const RandmatOptions& o) {
  e.validate();
  require(p >= 1.0 && std::isfinite(p), "moment order must be finite and at least 1");
  require(std::isfinite(e.law.abs_moment(p)), "entries must have a finite p-th moment");
  const auto entries = random_entries(e);
  EnsembleMoments m;
  bool max_exact = false;
  if (e.law.is_discrete()) {
    std::vector<double> v;
    std::vector<double> pr;
    e.law.atoms(v, pr);
    const std::uint64_t r = v.size();
    std::size_t widest = 0;
    for (std::size_t k = 0; k < e.scales.size(); ++k) {
      std::size_t c = 0;
      for (const auto& en : entries) c += en.summand == k;
      widest = std::max(widest, c);
    }
    if (power_count(r, widest) <= o.exact_atoms) {
      m.max = exact_max_moment(e, entries, p);
      max_exact = true;
    }
    const std::uint64_t joint = power_count(r, entries.size());
    if (joint <= o.exact_atoms) {
      m.sum = exact_sum_moment(e, entries, p);
      m.atoms_or_samples = joint;
      if (max_exact) return m;
    }
  }
  // Sampling: sample s draws every entry from stream s.
  const std::size_t n = o.samples;
  std::vector<double> sums(n);
  std::vector<double> maxes(n);
  const std::uint64_t key = derive_key(o.seed, kSampleStream);
  const std::size_t block = 256;
  parallel_for((n + block - 1) / block, [&](std::size_t b) {
    RealMatrix total(e.d1, e.d2);
    std::vector<RealMatrix> parts(e.scales.size(), RealMatrix::Zero(e.d1, e.d2));
    for (std::size_t s = b * block; s < std::min(n, (b + 1) * block); ++s) {
      CounterRng rng(key, s);
      for (auto& x : parts) x.setZero();
      for (const auto& en : entries) parts[en.summand](en.row, en.col) = en.scale * e.law.draw(rng);
      total.setZero();
      double top = 0.0;
      for (const auto& x : parts) {
        total += x;
        top = std::max(top, operator_norm(x));
      }
      sums[s] = std::pow(operator_norm(total), p);
      maxes[s] = std::pow(top, p);
    }
  });
  if (m.atoms_or_samples == 0) {
    const prob::Estimate es = prob::root_estimate(sums, p);
    m.sum = es.value;
    m.sum_se = es.std_error;
    m.exact = false;
    m.atoms_or_samples = n;
  }
  if (!max_exact) {
    const prob::Estimate em = prob::root_estimate(maxes, p);
    m.max = em.value;
    m.max_se = em.std_error;
    m.exact = false;
  }
  return m;
}

std::vector<CheckReport> bound_matrix_rosenthal(const MatrixEnsemble& e, double p, const RandmatOptions& o) {
  require(p >= 2.0 && std::isfinite(p), "the matrix moment bound needs 2 <= p < infinity");
  const EnsembleMoments m = ensemble_moments(e, p, o);
  const SquareTerms sq = square_terms(e);
  const double d = std::min(e.d1, e.d2);
  const Constant cpd = o.constants.operator_khintchine(p, d);
  const Constant chalf = o.constants.operator_khintchine(p / 2.0, d);
  const double max_term = 2.0 * chalf.value * m.max;
  const double rhs = std::max({sq.column, sq.row, max_term});
  const double rhs_se = rhs == max_term ? 2.0 * chalf.value * m.max_se : 0.0;
  const double c = 2.0 * (1.0 + std::sqrt(2.0)) * cpd.value;
  const std::string tag = e.law.to_string() + ", " + (m.exact ? "exact" : std::to_string(m.atoms_or_samples) + " samples");
  const double rev = std::pow(2.0, 1.0 + 1.0 / p);
  return {
      assert_le("matrix_rosenthal_upper", o, p, m.sum, m.sum_se, c, rhs, rhs_se, Provenance::paper_explicit,
                fmt("2(1+sqrt2) C_pd max{col,row,2 C_{p/2,d} maxterm}, C_pd=%.6g, C_{p/2,d}=%.6g", cpd.value, chalf.value) +
                    "; " + tag),
      assert_le("matrix_rosenthal_reverse_max", o, p, m.max, m.max_se, rev, m.sum, m.sum_se, Provenance::paper_explicit,
                "(E max||xi||^p)^{1/p} <= 2^{1+1/p} LHS; " + tag),
      assert_le("matrix_rosenthal_reverse_col", o, p, sq.column, 0.0, 2.0, m.sum, m.sum_se, Provenance::paper_explicit,
                "||(sum E xi*xi)^{1/2}|| <= 2 LHS; " + tag),
      assert_le("matrix_rosenthal_reverse_row", o, p, sq.row, 0.0, 2.0, m.sum, m.sum_se, Provenance::paper_explicit,
                "||(sum E xi xi*)^{1/2}|| <= 2 LHS; " + tag),
  };
}

namespace {

// Entry scales a_ij of an ensemble whose summands each hold one distinct entry.
RealMatrix entry_table(const MatrixEnsemble& e) {
  e.validate();
  RealMatrix a = RealMatrix::Zero(e.d1, e.d2);
  for (const auto& s : e.scales) {
    Eigen::Index count = 0;
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      for (Eigen::Index i = 0; i < s.rows(); ++i)
        if (s(i, j) != 0.0) {
          require(a(i, j) == 0.0, "entrywise bounds need one summand per entry");
          a(i, j) = s(i, j);
          ++count;
        }
    require(count <= 1, "entrywise bounds need summands with a single entry");
  }
  return a;
}

}  // namespace

std::vector<CheckReport> bound_entrywise(const MatrixEnsemble& e, double p, const RandmatOptions& o) {
  require(p >= 2.0 && std::isfinite(p), "the entrywise bound needs 2 <= p < infinity");
  const RealMatrix a = entry_table(e);
  const double var = e.law.abs_moment(2.0);
  const RealMatrix second = var * a.cwiseAbs2();
  const double col = std::sqrt(second.colwise().sum().maxCoeff());
  const double row = std::sqrt(second.rowwise().sum().maxCoeff());
  const EnsembleMoments m = ensemble_moments(e, p, o);
  const double d = std::min(e.d1, e.d2);
  const Constant cpd = o.constants.operator_khintchine(p, d);
  const Constant chalf = o.constants.operator_khintchine(p / 2.0, d);
  const double max_term = 2.0 * chalf.value * m.max;
  const double rhs = std::max({col, row, max_term});
  const double rhs_se = rhs == max_term ? 2.0 * chalf.value * m.max_se : 0.0;
  const std::string tag = e.law.to_string() + ", " + (m.exact ? "exact" : std::to_string(m.atoms_or_samples) + " samples");
  return {assert_le("entrywise_upper", o, p, m.sum, m.sum_se, 2.0 * (1.0 + std::sqrt(2.0)) * cpd.value, rhs, rhs_se,
                    Provenance::paper_explicit,
                    fmt("col=%.6g, row=%.6g, entry max=%.6g", col, row, m.max) + "; " + tag)};
}

std::vector<CheckReport> bound_latala(const MatrixEnsemble& e, double p, const RandmatOptions& o) {
  require(p >= 1.0 && std::isfinite(p), "moment order must be finite and at least 1");
  const RealMatrix a = entry_table(e);
  const double var = e.law.abs_moment(2.0);
  const double m4 = e.law.abs_moment(4.0);
  const RealMatrix second = var * a.cwiseAbs2();
  const double col = std::sqrt(second.colwise().sum().maxCoeff());
  const double row = std::sqrt(second.rowwise().sum().maxCoeff());
  std::vector<CheckReport> out;
  if (!std::isfinite(m4)) {
    for (const char* id : {"latala_expectation", "latala_moment"}) {
      CheckReport r;
      r.check_id = id;
      r.case_id = o.label;
      r.p = std::string(id) == "latala_moment" ? p : 1.0;
      r.q = kInf;
      r.lhs = std::numeric_limits<double>::quiet_NaN();
      r.rhs = kInf;
      r.provenance = Provenance::configured;
      r.status = Status::report_only;
      r.note = "inapplicable: entries without a fourth moment (" + e.law.to_string() + ")";
      out.push_back(r);
    }
    return out;
  }
  const double fourth = std::pow(m4 * a.array().pow(4.0).sum(), 0.25);
  const double three = row + col + fourth;
  const EnsembleMoments m1 = ensemble_moments(e, 1.0, o);
  const EnsembleMoments mp = ensemble_moments(e, p, o);
  const double with_max = three + mp.max;
  const double shape = p > 1.0 ? p / std::log(p) : 1.0;
  if (o.constants.latala) {
    const double C = *o.constants.latala;
    out.push_back(assert_le("latala_expectation", o, 1.0, m1.sum, m1.sum_se, C, three, 0.0, Provenance::configured,
                            "E||x|| <= C (row + col + fourth), C configured"));
    out.push_back(assert_le("latala_moment", o, p, mp.sum, mp.sum_se, C * shape, with_max, mp.max_se,
                            Provenance::configured, "C p/log p (row + col + fourth + entry max), C configured"));
  } else {
    out.push_back(ratio_report("latala_expectation", o.label, 1.0, kInf, m1.sum, three, 1.0,
                               Provenance::measured_envelope,
                               fmt("row=%.6g, col=%.6g, fourth=%.6g; C unspecified", row, col, fourth)));
    out.push_back(ratio_report("latala_moment", o.label, p, kInf, mp.sum, shape * with_max, 1.0,
                               Provenance::measured_envelope, "ratio to p/log p (four terms); C unspecified"));
  }
  const double d = std::min(e.d1, e.d2);
  const double cor_rhs = 2.0 * (1.0 + std::sqrt(2.0)) * o.constants.operator_khintchine(p, d).value *
                         std::max({col, row, 2.0 * o.constants.operator_khintchine(p / 2.0, d).value * mp.max});
  out.push_back(ratio_report("latala_vs_entrywise", o.label, p, kInf, shape * with_max, cor_rhs, 1.0,
                             Provenance::measured_envelope,
                             "p/log p four-term sum against the explicit entrywise bound; both up to constants"));
  return out;
}

std::vector<CheckReport> seginer_ensemble(const RealMatrix& a, double p, const RandmatOptions& o) {
  require(p >= 1.0 && std::isfinite(p), "moment order must be finite and at least 1");
  const MatrixEnsemble e = MatrixEnsemble::entries(a, EntryLaw::rademacher());
  const double dmax = std::max(a.rows(), a.cols());
  const double factor = std::pow(std::max(std::log(dmax), 1.0), 0.25);
  const double col = std::sqrt(a.cwiseAbs2().colwise().sum().maxCoeff());
  const double row = std::sqrt(a.cwiseAbs2().rowwise().sum().maxCoeff());
  const EnsembleMoments m = ensemble_moments(e, p, o);
  std::string note = fmt("(max(log d,1))^{1/4}=%.6g, d=%.0f", factor, dmax);
  if (p > 2.0 * std::log(dmax) && dmax > 1.0) note += "; p above 2 log d, outside the stated range";
  note += m.exact ? "; exact" : "; sampled";
  CheckReport r = ratio_report("seginer", o.label, p, kInf, m.sum, factor * std::max(col, row), 1.0,
                               Provenance::measured_envelope, note);
  if (!m.exact) r.seed = o.seed;
  return {r};
}

}  // namespace itolab::randmat
