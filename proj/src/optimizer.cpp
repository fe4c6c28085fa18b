#include <algorithm>
#include <cmath>
#include <limits>

#include "itolab/errors.hpp"
#include "itolab/parallel.hpp"
#include "itolab/rng.hpp"
#include "itolab/seqnorms.hpp"

namespace itolab::seq {

namespace {

using lq::cplx;
using Vec = Eigen::VectorXd;

std::size_t packed_size(const MixedField& f, bool real_only) {
  std::size_t n = 0;
  for (const auto& v : f.values) n += static_cast<std::size_t>(v.data().size());
  return real_only ? n : 2 * n;
}

void pack(const MixedField& f, bool real_only, double* out) {
  for (const auto& v : f.values) {
    const auto flat = v.data().reshaped();
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
      *out++ = flat(i).real();
      if (!real_only) *out++ = flat(i).imag();
    }
  }
}

void unpack(const double* in, bool real_only, MixedField& f) {
  for (auto& v : f.values) {
    auto flat = v.mutable_data().reshaped();
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
      const double re = *in++;
      const double im = real_only ? 0.0 : *in++;
      flat(i) = cplx(re, im);
    }
  }
}

// Merges nested intersections and nested sums.
Node flatten(const Node& n) {
  if (n.type == Node::Type::leaf) return n;
  std::vector<Node> kids;
  for (const auto& c : n.children) {
    Node fc = flatten(c);
    if (fc.type == n.type) kids.insert(kids.end(), fc.children.begin(), fc.children.end());
    else kids.push_back(std::move(fc));
  }
  return n.type == Node::Type::sum ? Node::join(std::move(kids)) : Node::meet(std::move(kids));
}

// Value and subgradient of a sum child: a leaf or an intersection of leaves.
double child_value_grad(const Node& n, const MixedField& f, double p, double q, MixedField& grad) {
  if (n.type == Node::Type::leaf) return leaf_norm_grad(f, n.leaf, p, q, grad);
  require(n.type == Node::Type::intersection, "a sum may not directly contain a sum");
  double best = -1.0;
  const Node* arg = nullptr;
  for (const auto& c : n.children) {
    require(c.type == Node::Type::leaf, "sums below a sum are not supported");
    const double v = leaf_norm(f, c.leaf, p, q);
    if (v > best) {
      best = v;
      arg = &c;
    }
  }
  return leaf_norm_grad(f, arg->leaf, p, q, grad);
}

double child_value(const Node& n, const MixedField& f, double p, double q) {
  if (n.type == Node::Type::leaf) return leaf_norm(f, n.leaf, p, q);
  double best = 0.0;
  for (const auto& c : n.children) best = std::max(best, child_value(c, f, p, q));
  return best;
}

// Objective over splits x = (x_1..x_{k-1}); the last part is z - sum x_j.
class SplitObjective {
 public:
  SplitObjective(const Node& sum_node, const MixedField& z, double p, double q)
      : node_(sum_node), z_(z), p_(p), q_(q), real_only_(z.is_real()), n_(packed_size(z, real_only_)) {
    zvec_.resize(static_cast<Eigen::Index>(n_));
    pack(z_, real_only_, zvec_.data());
  }

  std::size_t parts() const { return node_.children.size(); }
  std::size_t block() const { return n_; }
  std::size_t dimension() const { return (parts() - 1) * n_; }
  bool real_only() const { return real_only_; }
  const Vec& target() const { return zvec_; }

  std::vector<MixedField> split(const Vec& x) const {
    std::vector<MixedField> out(parts(), z_);
    Vec last = zvec_;
    for (std::size_t j = 0; j + 1 < parts(); ++j) {
      const auto seg = x.segment(static_cast<Eigen::Index>(j * n_), static_cast<Eigen::Index>(n_));
      unpack(seg.data(), real_only_, out[j]);
      last -= seg;
    }
    unpack(last.data(), real_only_, out.back());
    return out;
  }

  double value(const Vec& x) const {
    const auto ps = split(x);
    double h = 0.0;
    for (std::size_t j = 0; j < parts(); ++j) h += child_value(node_.children[j], ps[j], p_, q_);
    return h;
  }

  double value_grad(const Vec& x, Vec& g) const {
    const auto ps = split(x);
    double h = 0.0;
    std::vector<Vec> gs(parts(), Vec(static_cast<Eigen::Index>(n_)));
    MixedField grad;
    for (std::size_t j = 0; j < parts(); ++j) {
      h += child_value_grad(node_.children[j], ps[j], p_, q_, grad);
      pack(grad, real_only_, gs[j].data());
    }
    g.resize(static_cast<Eigen::Index>(dimension()));
    for (std::size_t j = 0; j + 1 < parts(); ++j)
      g.segment(static_cast<Eigen::Index>(j * n_), static_cast<Eigen::Index>(n_)) = gs[j] - gs.back();
    return h;
  }

 private:
  const Node& node_;
  MixedField z_;
  double p_;
  double q_;
  bool real_only_;
  std::size_t n_;
  Vec zvec_;
};

struct RunResult {
  double best = std::numeric_limits<double>::infinity();
  Vec x;
  int iterations = 0;
  bool converged = false;
};

// Polyak steps toward a level target below the best value; the gap halves
// whenever the target is not approached within `patience` steps.
RunResult polyak_run(const SplitObjective& obj, Vec x, const OptimizerOptions& opt) {
  constexpr int patience = 30;
  RunResult r;
  Vec g;
  double h = obj.value_grad(x, g);
  r.best = h;
  r.x = x;
  double ref = h;
  double delta = 0.1 * h;
  int stalls = 0;
  if (h == 0.0) {
    r.converged = true;
    return r;
  }
  for (int it = 0; it < opt.max_iterations; ++it) {
    r.iterations = it + 1;
    const double gg = g.squaredNorm();
    if (gg == 0.0) {
      r.converged = true;
      break;
    }
    x -= ((h - (r.best - delta)) / gg) * g;
    h = obj.value_grad(x, g);
    if (h < r.best) {
      r.best = h;
      r.x = x;
    }
    if (r.best <= ref - 0.5 * delta) {
      ref = r.best;
      stalls = 0;
    } else if (++stalls >= patience) {
      delta *= 0.5;
      x = r.x;
      h = obj.value_grad(x, g);
      ref = r.best;
      stalls = 0;
    }
    if (delta <= opt.tol * r.best) {
      r.converged = true;
      break;
    }
  }
  return r;
}

Vec start_point(const SplitObjective& obj, int restart, std::uint64_t seed) {
  const std::size_t k = obj.parts();
  const auto n = static_cast<Eigen::Index>(obj.block());
  Vec x = Vec::Zero(static_cast<Eigen::Index>(obj.dimension()));
  if (static_cast<std::size_t>(restart) < k) {
    if (static_cast<std::size_t>(restart) + 1 < k) x.segment(restart * n, n) = obj.target();
    return x;
  }
  CounterRng rng(seed, static_cast<std::uint64_t>(restart));
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& wi : w) total += (wi = rng.uniform_open());
  const double spread = obj.target().cwiseAbs().maxCoeff();
  for (std::size_t j = 0; j + 1 < k; ++j) {
    auto seg = x.segment(static_cast<Eigen::Index>(j) * n, n);
    seg = (w[j] / total) * obj.target();
    for (Eigen::Index i = 0; i < n; ++i) seg[i] += 0.1 * spread * rng.normal();
  }
  return x;
}

// First entry of largest modulus.
cplx pivot_entry(const MixedField& f) {
  cplx best = 0.0;
  for (const auto& v : f.values)
    for (Eigen::Index k = 0; k < v.data().size(); ++k)
      if (std::abs(v.data().reshaped()(k)) > std::abs(best)) best = v.data().reshaped()(k);
  return best;
}

// Entries rounded to multiples of 2^-36; entries of a pivot-normalized field lie in the unit disc.
MixedField quantized(const MixedField& f) {
  constexpr double grid = 68719476736.0;  // 2^36
  MixedField out = f;
  for (auto& v : out.values)
    for (auto& e : v.mutable_data().reshaped())
      e = cplx(std::nearbyint(e.real() * grid) / grid, std::nearbyint(e.imag() * grid) / grid);
  return out;
}

std::vector<std::string> child_labels(const Node& sum_node) {
  std::vector<std::string> out;
  for (const auto& c : sum_node.children) out.push_back(c.to_string());
  return out;
}

CompositeResult optimize_sum(const MixedField& field, const Node& sum_node, double p, double q,
                             const OptimizerOptions& opt) {
  CompositeResult res;
  res.certificate.labels = child_labels(sum_node);
  const cplx pivot = pivot_entry(field);
  if (pivot == 0.0) {
    res.certificate.parts.assign(sum_node.children.size(), field.zeros_like());
    return res;
  }
  // The search runs on the pivot-normalized target rounded to a fixed grid, so
  // field and c * field search bitwise-identical problems; the chosen split is
  // then costed against the exact target.
  const double scale = std::abs(pivot);
  const MixedField z = field.scaled(1.0 / pivot);
  const MixedField key = quantized(z);
  const SplitObjective search(sum_node, key, p, q);
  const SplitObjective obj(sum_node, z, p, q);
  const int restarts = std::max(opt.restarts, 1);
  std::vector<RunResult> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r] = polyak_run(search, start_point(search, static_cast<int>(r), opt.seed), opt);
  });
  const RunResult* best = &runs.front();
  bool any_converged = false;
  for (const auto& r : runs) {
    res.iterations += r.iterations;
    any_converged = any_converged || r.converged;
    if (r.best < best->best) best = &r;
  }
  if (!any_converged) throw OptimizerError("decomposition search did not converge", best->best * scale);
  res.converged = true;
  res.value = obj.value(best->x) * scale;
  res.certificate.parts = obj.split(best->x);
  for (auto& part : res.certificate.parts) part = part.scaled(pivot);
  // Giving the whole field to one child is a feasible split, so the value
  // never exceeds the smallest child norm.
  for (std::size_t j = 0; j < sum_node.children.size(); ++j) {
    const double whole = child_value(sum_node.children[j], field, p, q);
    if (whole < res.value) {
      res.value = whole;
      res.certificate.parts.assign(sum_node.children.size(), field.zeros_like());
      res.certificate.parts[j] = field;
    }
  }
  return res;
}

CompositeResult evaluate(const MixedField& field, const Node& n, double p, double q, const OptimizerOptions& opt) {
  if (n.type == Node::Type::leaf) {
    CompositeResult r;
    r.value = leaf_norm(field, n.leaf, p, q);
    return r;
  }
  if (n.type == Node::Type::sum) return optimize_sum(field, n, p, q, opt);
  CompositeResult out;
  bool have_certificate = false;
  for (const auto& c : n.children) {
    CompositeResult r = evaluate(field, c, p, q, opt);
    out.value = std::max(out.value, r.value);
    out.iterations += r.iterations;
    out.converged = out.converged && r.converged;
    if (!have_certificate && !r.certificate.parts.empty()) {
      out.certificate = std::move(r.certificate);
      have_certificate = true;
    }
  }
  return out;
}

// Nested golden-section search: the partial minimum of a convex function is
// convex, so each coordinate is minimized exactly up to bracket width.
class NestedGolden {
 public:
  NestedGolden(const SplitObjective& obj, double radius, int iterations)
      : obj_(obj), radius_(radius), iterations_(iterations), x_(Vec::Zero(static_cast<Eigen::Index>(obj.dimension()))) {}

  double run(Vec& arg) {
    best_ = std::numeric_limits<double>::infinity();
    level(0);
    arg = arg_;
    return best_;
  }

 private:
  double level(Eigen::Index d) {
    if (d == x_.size()) {
      const double v = obj_.value(x_);
      if (v < best_) {
        best_ = v;
        arg_ = x_;
      }
      return v;
    }
    constexpr double phi = 0.6180339887498949;
    double a = -radius_;
    double b = radius_;
    double c = b - phi * (b - a);
    double e = a + phi * (b - a);
    auto at = [&](double t) {
      x_[d] = t;
      return level(d + 1);
    };
    double fc = at(c);
    double fe = at(e);
    for (int it = 0; it < iterations_; ++it) {
      if (fc <= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - phi * (b - a);
        fc = at(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + phi * (b - a);
        fe = at(e);
      }
    }
    return std::min(fc, fe);
  }

  const SplitObjective& obj_;
  double radius_;
  int iterations_;
  Vec x_;
  Vec arg_;
  double best_ = 0.0;
};

// Zooming grid search from `center`; the box doubles while the best point
// sits on its edge, then shrinks around the best point.
double grid_search(const SplitObjective& obj, int res, Vec center, double half, double best) {
  const auto dim = static_cast<Eigen::Index>(obj.dimension());
  const double spread = std::max(obj.target().cwiseAbs().maxCoeff(), 1e-300);
  Vec arg = center;
  std::size_t total = 1;
  for (Eigen::Index d = 0; d < dim; ++d) total *= static_cast<std::size_t>(res);
  Vec x(dim);
  auto sweep = [&](bool& on_edge) {
    const double cell = 2.0 * half / (res - 1);
    on_edge = false;
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rem = k;
      bool edge = false;
      for (Eigen::Index d = 0; d < dim; ++d) {
        const auto i = static_cast<int>(rem % static_cast<std::size_t>(res));
        rem /= static_cast<std::size_t>(res);
        x[d] = center[d] - half + i * cell;
        edge = edge || i == 0 || i == res - 1;
      }
      const double v = obj.value(x);
      if (v < best) {
        best = v;
        arg = x;
        on_edge = edge;
      }
    }
  };
  bool edge = false;
  for (int grow = 0; grow < 12; ++grow) {
    sweep(edge);
    if (!edge) break;
    center = arg;
    half *= 2.0;
  }
  for (int level = 0; level < 200; ++level) {
    center = arg;
    const double cell = 2.0 * half / (res - 1);
    if (cell < 1e-11 * spread) break;
    half = 3.0 * cell;
    sweep(edge);
  }
  return best;
}

double split_search(const SplitObjective& obj, int res) {
  const auto dim = static_cast<Eigen::Index>(obj.dimension());
  require(dim <= 4, "brute force supports at most 4 free real parameters");
  require(res >= 3, "grid resolution must be at least 3");
  const double spread = obj.target().cwiseAbs().maxCoeff();
  // About 3e5 evaluations for the nested search at any dimension.
  const int iterations = std::min(70, static_cast<int>(std::pow(3e5, 1.0 / static_cast<double>(dim))) - 2);
  Vec arg;
  const double coarse = NestedGolden(obj, 8.0 * spread, iterations).run(arg);
  return grid_search(obj, dim >= 4 ? std::min(res, 7) : res, arg, 0.05 * spread, coarse);
}

double brute_force(const MixedField& field, const Node& n, double p, double q, int res) {
  if (n.type == Node::Type::leaf) return leaf_norm(field, n.leaf, p, q);
  if (n.type == Node::Type::intersection) {
    double best = 0.0;
    for (const auto& c : n.children) best = std::max(best, brute_force(field, c, p, q, res));
    return best;
  }
  const cplx pivot = pivot_entry(field);
  if (pivot == 0.0) return 0.0;
  const SplitObjective obj(n, field.scaled(1.0 / pivot), p, q);
  return split_search(obj, res) * std::abs(pivot);
}

}  // namespace

CompositeResult composite_norm(const MixedField& field, const Node& tree, double p, double q,
                               const OptimizerOptions& options) {
  return evaluate(field, flatten(tree), p, q, options);
}

CompositeResult composite_norm(const MixedField& field, const RegimeSpec& spec, const OptimizerOptions& options) {
  return composite_norm(field, spec.tree, spec.p, spec.q, options);
}

CompositeResult composite_norm(const LqSequence& seq, const RegimeSpec& spec, const OptimizerOptions& options) {
  return composite_norm(seq.field(), spec, options);
}

double decomposition_cost(const std::vector<MixedField>& parts, const Node& sum_node, double p, double q) {
  const Node flat = flatten(sum_node);
  require(flat.type == Node::Type::sum && flat.children.size() == parts.size(), "one part per child of the sum");
  double total = 0.0;
  for (std::size_t j = 0; j < parts.size(); ++j) total += child_value(flat.children[j], parts[j], p, q);
  return total;
}

double brute_force_sum_norm(const MixedField& field, const Node& tree, double p, double q, int grid_resolution) {
  return brute_force(field, flatten(tree), p, q, grid_resolution);
}

}  // namespace itolab::seq
