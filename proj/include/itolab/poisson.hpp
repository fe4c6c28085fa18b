#ifndef ITOLAB_POISSON_HPP
#define ITOLAB_POISSON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "itolab/report.hpp"

namespace itolab::poisson {

// Time points 0 = t_0 < ... < t_l and disjoint sets A_0..A_{m-1} with measures
// nu_j > 0. Cell (i, j) = (t_i, t_{i+1}] x A_j has intensity (t_{i+1} - t_i) nu_j
// and flat index i * m + j.
class GridPartition {
 public:
  GridPartition(std::vector<double> time_points, std::vector<std::string> set_labels, std::vector<double> measures);
  // Unit sets "A0".."A{m-1}" of the given measures.
  static GridPartition make(std::vector<double> time_points, std::vector<double> measures);

  std::size_t interval_count() const { return times_.size() - 1; }
  std::size_t set_count() const { return measures_.size(); }
  std::size_t cell_count() const { return interval_count() * set_count(); }
  std::size_t cell(std::size_t i, std::size_t j) const { return i * set_count() + j; }
  std::size_t interval_of(std::size_t cell) const { return cell / set_count(); }
  std::size_t set_of(std::size_t cell) const { return cell % set_count(); }

  const std::vector<double>& time_points() const { return times_; }
  const std::vector<std::string>& set_labels() const { return labels_; }
  const std::vector<double>& measures() const { return measures_; }
  double start(std::size_t i) const { return times_[i]; }
  double end(std::size_t i) const { return times_[i + 1]; }
  double horizon() const { return times_.back(); }
  double intensity(std::size_t i, std::size_t j) const { return (times_[i + 1] - times_[i]) * measures_[j]; }
  double intensity(std::size_t cell) const { return intensity(interval_of(cell), set_of(cell)); }
  double max_intensity() const;

  // Indices of the named sets; every label must belong to the grid.
  std::vector<std::size_t> set_indices(const std::vector<std::string>& labels) const;
  std::vector<std::size_t> all_sets() const;
  // Index of the interval containing time t in (t_i, t_{i+1}]; interval_count() beyond the horizon.
  std::size_t interval_containing(double t) const;

  bool operator==(const GridPartition& other) const = default;

 private:
  std::vector<double> times_;
  std::vector<std::string> labels_;
  std::vector<double> measures_;
};

// Splits interval i into ceil(max_j lambda_ij) equal pieces so every cell has
// intensity at most 1; intervals already fine are kept.
GridPartition refine(const GridPartition& grid);
// Grid with t added as a breakpoint (unchanged when t is already one or lies
// outside (0, horizon)).
GridPartition with_breakpoint(const GridPartition& grid, double t);
// parent[i'] = coarse interval containing fine interval i'. The fine grid must
// contain every coarse breakpoint and share the sets.
std::vector<std::size_t> interval_parents(const GridPartition& fine, const GridPartition& coarse);

// One draw of the random measure restricted to the grid cells.
struct PoissonFieldRealization {
  std::vector<int> counts;                      // N per cell
  std::vector<double> compensated;              // N - lambda per cell
  std::vector<std::vector<double>> point_times; // sorted jump times per cell

  // N((t_i ^ t, t_{i+1} ^ t] x A_j) - lambda of the clipped cell.
  double compensated_until(const GridPartition& grid, std::size_t cell, double t) const;
};

// Independent Poisson(lambda_ij) counts per cell, each from its own stream of
// (seed, stream); points are uniform within their interval.
PoissonFieldRealization realize(const GridPartition& grid, std::uint64_t seed, std::uint64_t stream = 0);

std::vector<double> log_spaced(double lo, double hi, std::size_t n);

// lambda (1 + e^{-lambda} f_p(lambda)),
// f_p(lambda) = lambda^{p-1} - lambda^2 + lambda - 1 + (1 - lambda)^p.
double centered_moment_lower_bound(double p, double lambda);

// Envelope of r(lambda) = E|N - lambda|^p / lambda over a grid.
struct MomentEnvelope {
  double p = 0.0;
  double lower = 0.0;  // min r
  double upper = 0.0;  // max r
};
MomentEnvelope moment_envelope(double p, const std::vector<double>& lambdas, double eps);

// For each p and grid point: the pointwise lower bound (p >= 2) or its reverse
// (1 <= p < 2) as hard checks at tolerance 1e-9, plus the measured envelope of
// r as report-only rows and a hard check that it is positive and finite.
std::vector<CheckReport> verify_centered_moments(const std::vector<double>& p_list, const std::vector<double>& lambdas,
                                              double eps = 1e-15);

}  // namespace itolab::poisson

#endif
