#include "itolab/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "itolab/errors.hpp"
#include "itolab/prob.hpp"
#include "itolab/rng.hpp"

namespace itolab::poisson {

GridPartition::GridPartition(std::vector<double> time_points, std::vector<std::string> set_labels,
                             std::vector<double> measures)
    : times_(std::move(time_points)), labels_(std::move(set_labels)), measures_(std::move(measures)) {
  require(times_.size() >= 2, "a grid needs at least one time interval");
  require(times_.front() == 0.0, "time points must start at 0");
  for (std::size_t i = 0; i + 1 < times_.size(); ++i)
    require(std::isfinite(times_[i + 1]) && times_[i + 1] > times_[i], "time points must be finite and strictly increasing");
  require(!measures_.empty(), "a grid needs at least one set");
  require(labels_.size() == measures_.size(), "one label per set");
  for (double nu : measures_) require(std::isfinite(nu) && nu > 0.0, "set measures must be finite and positive");
  for (std::size_t a = 0; a < labels_.size(); ++a)
    for (std::size_t b = a + 1; b < labels_.size(); ++b) require(labels_[a] != labels_[b], "set labels must be distinct");
}

GridPartition GridPartition::make(std::vector<double> time_points, std::vector<double> measures) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < measures.size(); ++j) labels.push_back("A" + std::to_string(j));
  return GridPartition(std::move(time_points), std::move(labels), std::move(measures));
}

double GridPartition::max_intensity() const {
  double m = 0.0;
  for (std::size_t c = 0; c < cell_count(); ++c) m = std::max(m, intensity(c));
  return m;
}

std::vector<std::size_t> GridPartition::set_indices(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> out;
  for (const auto& l : labels) {
    const auto it = std::find(labels_.begin(), labels_.end(), l);
    require(it != labels_.end(), "set '" + l + "' is not a grid set");
    out.push_back(static_cast<std::size_t>(it - labels_.begin()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> GridPartition::all_sets() const {
  std::vector<std::size_t> out(set_count());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = j;
  return out;
}

std::size_t GridPartition::interval_containing(double t) const {
  for (std::size_t i = 0; i < interval_count(); ++i)
    if (t <= times_[i + 1]) return i;
  return interval_count();
}

GridPartition refine(const GridPartition& grid) {
  double top_nu = 0.0;
  for (double nu : grid.measures()) top_nu = std::max(top_nu, nu);
  std::vector<double> times{0.0};
  for (std::size_t i = 0; i < grid.interval_count(); ++i) {
    const double a = grid.start(i);
    const double b = grid.end(i);
    const double lam = (b - a) * top_nu;
    // The slack keeps intensities that are integers up to roundoff from an extra split.
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(lam * (1.0 - 1e-12))));
    for (std::size_t k = 1; k < pieces; ++k) times.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
    times.push_back(b);
  }
  return GridPartition(std::move(times), grid.set_labels(), grid.measures());
}

GridPartition with_breakpoint(const GridPartition& grid, double t) {
  const auto& tp = grid.time_points();
  if (!(t > 0.0 && t < grid.horizon()) || std::find(tp.begin(), tp.end(), t) != tp.end()) return grid;
  std::vector<double> times = tp;
  times.insert(std::upper_bound(times.begin(), times.end(), t), t);
  return GridPartition(std::move(times), grid.set_labels(), grid.measures());
}

std::vector<std::size_t> interval_parents(const GridPartition& fine, const GridPartition& coarse) {
  require(fine.set_labels() == coarse.set_labels() && fine.measures() == coarse.measures(), "grids must share their sets");
  require(fine.horizon() == coarse.horizon(), "grids must share their horizon");
  std::vector<std::size_t> parent(fine.interval_count());
  std::size_t c = 0;
  for (std::size_t i = 0; i < fine.interval_count(); ++i) {
    while (fine.start(i) >= coarse.end(c)) ++c;
    require(fine.end(i) <= coarse.end(c), "the fine grid must contain every coarse breakpoint");
    parent[i] = c;
  }
  return parent;
}

double PoissonFieldRealization::compensated_until(const GridPartition& grid, std::size_t cell, double t) const {
  const std::size_t i = grid.interval_of(cell);
  if (t >= grid.end(i)) return compensated[cell];
  if (t <= grid.start(i)) return 0.0;
  const auto& pts = point_times[cell];
  const auto n = static_cast<double>(std::upper_bound(pts.begin(), pts.end(), t) - pts.begin());
  return n - (t - grid.start(i)) * grid.measures()[grid.set_of(cell)];
}

PoissonFieldRealization realize(const GridPartition& grid, std::uint64_t seed, std::uint64_t stream) {
  PoissonFieldRealization r;
  const std::size_t n = grid.cell_count();
  r.counts.resize(n);
  r.compensated.resize(n);
  r.point_times.resize(n);
  const std::uint64_t key = derive_key(seed, stream);
  for (std::size_t c = 0; c < n; ++c) {
    CounterRng rng(key, c);
    const double lam = grid.intensity(c);
    const int k = prob::poisson_draw(lam, rng);
    r.counts[c] = k;
    r.compensated[c] = static_cast<double>(k) - lam;
    const std::size_t i = grid.interval_of(c);
    auto& pts = r.point_times[c];
    for (int m = 0; m < k; ++m) pts.push_back(grid.start(i) + (grid.end(i) - grid.start(i)) * rng.uniform_open());
    std::sort(pts.begin(), pts.end());
  }
  return r;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  require(lo > 0.0 && hi >= lo && n >= 1, "log_spaced needs 0 < lo <= hi and n >= 1");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double centered_moment_lower_bound(double p, double lambda) {
  const double f = std::pow(lambda, p - 1.0) - lambda * lambda + lambda - 1.0 + std::pow(1.0 - lambda, p);
  return lambda * (1.0 + std::exp(-lambda) * f);
}

namespace {

void check_lambda(double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0 && lambda <= 1.0, "intensities must lie in (0, 1]");
}

double ratio_at(double p, double lambda, double eps) {
  return prob::centered_poisson_moment(p, lambda, eps * lambda) / lambda;
}

std::string lambda_case(double p, double lambda) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "p=%.6g,lambda=%.6g", p, lambda);
  return buf;
}

}  // namespace

MomentEnvelope moment_envelope(double p, const std::vector<double>& lambdas, double eps) {
  require(p >= 1.0 && std::isfinite(p), "moment exponent must be finite and at least 1");
  require(!lambdas.empty(), "envelope needs at least one intensity");
  MomentEnvelope env;
  env.p = p;
  env.lower = std::numeric_limits<double>::infinity();
  env.upper = 0.0;
  for (double lam : lambdas) {
    check_lambda(lam);
    const double r = ratio_at(p, lam, eps);
    env.lower = std::min(env.lower, r);
    env.upper = std::max(env.upper, r);
  }
  return env;
}

std::vector<CheckReport> verify_centered_moments(const std::vector<double>& p_list, const std::vector<double>& lambdas,
                                              double eps) {
  std::vector<CheckReport> out;
  for (double lam : lambdas) check_lambda(lam);
  for (double p : p_list) {
    require(p >= 1.0 && std::isfinite(p), "moment exponent must be finite and at least 1");
    for (double lam : lambdas) {
      const double moment = prob::centered_poisson_moment(p, lam, eps * lam);
      const double bound = centered_moment_lower_bound(p, lam);
      if (p >= 2.0) {
        out.push_back(bound_check("poisson_lower", lambda_case(p, lam), p, std::nan(""), bound, 1.0, moment,
                                  Provenance::paper_explicit, 1e-9));
      } else {
        out.push_back(bound_check("poisson_lower_reverse", lambda_case(p, lam), p, std::nan(""), moment, 1.0, bound,
                                  Provenance::measured_envelope, 1e-9,
                                  "reverse of the p >= 2 bound, observed for 1 <= p < 2"));
      }
    }
    const MomentEnvelope env = moment_envelope(p, lambdas, eps);
    char pc[32];
    std::snprintf(pc, sizeof pc, "p=%.6g", p);
    out.push_back(ratio_report("poisson_envelope_lower", pc, p, std::nan(""), env.lower, 1.0, 1.0,
                               Provenance::measured_envelope, "min over the grid of E|N-lambda|^p / lambda"));
    out.push_back(ratio_report("poisson_envelope_upper", pc, p, std::nan(""), env.upper, 1.0, 1.0,
                               Provenance::measured_envelope, "max over the grid of E|N-lambda|^p / lambda"));
    CheckReport finite;
    finite.check_id = "poisson_envelope_finite";
    finite.case_id = pc;
    finite.p = p;
    finite.lhs = env.lower;
    finite.rhs = env.upper;
    finite.constant = 1.0;
    finite.provenance = Provenance::measured_envelope;
    finite.status = env.lower > 0.0 && std::isfinite(env.upper) ? Status::pass : Status::fail;
    finite.note = "lhs = min r, rhs = max r; pass when 0 < min and max is finite";
    out.push_back(finite);
  }
  return out;
}

}  // namespace itolab::poisson
