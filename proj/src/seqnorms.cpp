#include "itolab/seqnorms.hpp"

#include <algorithm>
#include <cmath>

#include "itolab/errors.hpp"

namespace itolab::seq {

using lq::cplx;
using lq::LqElement;
using lq::Matrix;

MixedField::MixedField(std::vector<double> outer_probs, std::vector<double> cell_weights, LqElement zero)
    : outer(std::move(outer_probs)), weights(std::move(cell_weights)) {
  require(!outer.empty() && !weights.empty(), "a field needs at least one outer atom and one cell");
  values.assign(outer.size() * weights.size(), LqElement::zeros_like(zero));
}

MixedField MixedField::zeros_like() const {
  MixedField z = *this;
  for (auto& v : z.values) v.mutable_data().setZero();
  return z;
}

MixedField MixedField::scaled(cplx c) const {
  MixedField z = *this;
  for (auto& v : z.values) v *= c;
  return z;
}

MixedField& MixedField::operator+=(const MixedField& other) {
  require(same_layout(other), "fields differ in layout");
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += other.values[k];
  return *this;
}

MixedField& MixedField::operator-=(const MixedField& other) {
  require(same_layout(other), "fields differ in layout");
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= other.values[k];
  return *this;
}

bool MixedField::same_layout(const MixedField& other) const {
  return outer.size() == other.outer.size() && weights.size() == other.weights.size() &&
         values.front().same_shape(other.values.front());
}

bool MixedField::is_real() const {
  return std::all_of(values.begin(), values.end(), [](const LqElement& v) { return v.is_real(); });
}

double MixedField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, v.data().cwiseAbs().maxCoeff());
  return m;
}

LqSequence::LqSequence(std::vector<prob::RandomLqVariable> items) : items_(std::move(items)) {
  require(!items_.empty(), "a sequence needs at least one item");
  for (const auto& it : items_) require(it.value(0).same_shape(items_.front().value(0)), "items must share kind and shape");
}

MixedField LqSequence::field() const {
  std::vector<double> weights;
  for (const auto& it : items_) weights.insert(weights.end(), it.probs().begin(), it.probs().end());
  MixedField f({1.0}, std::move(weights), shape());
  std::size_t c = 0;
  for (const auto& it : items_)
    for (std::size_t a = 0; a < it.atom_count(); ++a) f.at(0, c++) = it.value(a);
  return f;
}

LqSequence LqSequence::with_values(const MixedField& f) const {
  std::vector<prob::RandomLqVariable> items;
  std::size_t c = 0;
  for (const auto& it : items_) {
    std::vector<LqElement> vals;
    for (std::size_t a = 0; a < it.atom_count(); ++a) vals.push_back(f.at(0, c++));
    items.emplace_back(it.space(), std::move(vals));
  }
  require(c == f.cell_count(), "field layout does not match the sequence");
  return LqSequence(std::move(items));
}

LqSequence LqSequence::scaled(cplx c) const {
  std::vector<prob::RandomLqVariable> items;
  for (const auto& it : items_) items.push_back(it.scaled(c));
  return LqSequence(std::move(items));
}

std::string to_string(Leaf leaf) {
  switch (leaf) {
    case Leaf::S_c: return "S_c";
    case Leaf::S_r: return "S_r";
    case Leaf::S: return "S";
    case Leaf::D_qq: return "D_qq";
    case Leaf::D_pq: return "D_pq";
  }
  return "?";
}

namespace {

void check_exponents(double p, double q) {
  require(std::isfinite(p) && std::isfinite(q) && p >= 1.0 && q >= 1.0, "leaf norms need finite p, q >= 1");
}

// ||x||_q and G with Re tr(G* dx) = d||x||_q.
double schatten_grad(const LqElement& x, double q, Matrix& g) {
  g.setZero(x.rows(), x.cols());
  if (x.is_matrix()) {
    Eigen::JacobiSVD<Matrix> svd(x.data(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const lq::RealVector s = svd.singularValues();
    const double n = lq::lp_of_values(s, q);
    if (n == 0.0) return 0.0;
    lq::RealVector w(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) w[i] = s[i] > 0.0 ? std::pow(s[i] / n, q - 1.0) : 0.0;
    g = svd.matrixU() * w.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
    return n;
  }
  const double n = lq::norm_q(x, q);
  if (n == 0.0) return 0.0;
  const auto& wt = x.space()->weights();
  for (Eigen::Index s = 0; s < x.rows(); ++s) {
    const cplx v = x.data()(s, 0);
    const double a = std::abs(v);
    if (a > 0.0) g(s, 0) = wt[static_cast<std::size_t>(s)] * std::pow(a / n, q - 2.0) * v / n;
  }
  return n;
}

bool square_function_leaf(Leaf leaf) { return leaf == Leaf::S_c || leaf == Leaf::S_r || leaf == Leaf::S; }

void check_leaf_kind(const MixedField& f, Leaf leaf) {
  const LqElement& s = f.shape();
  if (leaf == Leaf::S) {
    require(s.is_commutative() || (s.rows() == 1 && s.cols() == 1),
            "the commutative square function needs commutative or scalar data");
  }
  if (leaf == Leaf::S_c || leaf == Leaf::S_r) {
    require(s.is_matrix(), "column and row square functions need matrix data; use S for commutative data");
  }
}

// sum_c W_c |v|^2 (column), |v*|^2 (row) or pointwise |v|^2 at outer atom a.
LqElement square_sum(const MixedField& f, std::size_t a, Leaf leaf) {
  const LqElement& s = f.shape();
  if (s.is_commutative() || leaf == Leaf::S) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(s.rows() * s.cols());
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
      const Matrix& v = f.at(a, c).data();
      acc += f.weights[c] * v.reshaped().cwiseAbs2().cast<cplx>();
    }
    if (s.is_commutative()) return LqElement::commutative(s.space(), acc);
    return LqElement::matrix(acc);
  }
  const Eigen::Index d = leaf == Leaf::S_c ? s.cols() : s.rows();
  Matrix acc = Matrix::Zero(d, d);
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    const Matrix& v = f.at(a, c).data();
    if (leaf == Leaf::S_c) acc.noalias() += f.weights[c] * (v.adjoint() * v);
    else acc.noalias() += f.weights[c] * (v * v.adjoint());
  }
  return LqElement::matrix(acc);
}

double combine_outer(const std::vector<double>& outer, const std::vector<double>& m, double p) {
  double top = 0.0;
  for (double x : m) top = std::max(top, x);
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a)
    if (m[a] > 0.0) acc += outer[a] * std::pow(m[a] / top, p);
  return top * std::pow(acc, 1.0 / p);
}

}  // namespace

double leaf_norm(const MixedField& f, Leaf leaf, double p, double q) {
  check_exponents(p, q);
  check_leaf_kind(f, leaf);
  std::vector<double> m(f.outer_count(), 0.0);
  if (square_function_leaf(leaf)) {
    for (std::size_t a = 0; a < f.outer_count(); ++a) m[a] = lq::psd_root_norm(square_sum(f, a, leaf), q);
    return combine_outer(f.outer, m, p);
  }
  if (leaf == Leaf::D_qq) {
    for (std::size_t a = 0; a < f.outer_count(); ++a) {
      lq::RealVector n(static_cast<Eigen::Index>(f.cell_count()));
      double top = 0.0;
      for (std::size_t c = 0; c < f.cell_count(); ++c) top = std::max(top, n[static_cast<Eigen::Index>(c)] = lq::norm_q(f.at(a, c), q));
      if (top == 0.0) continue;
      double acc = 0.0;
      for (std::size_t c = 0; c < f.cell_count(); ++c) {
        const double r = n[static_cast<Eigen::Index>(c)] / top;
        if (r > 0.0) acc += f.weights[c] * std::pow(r, q);
      }
      m[a] = top * std::pow(acc, 1.0 / q);
    }
    return combine_outer(f.outer, m, p);
  }
  // D_pq: a single L^p sum over (a, c).
  std::vector<double> n;
  std::vector<double> w;
  for (std::size_t a = 0; a < f.outer_count(); ++a)
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
      n.push_back(lq::norm_q(f.at(a, c), q));
      w.push_back(f.outer[a] * f.weights[c]);
    }
  return combine_outer(w, n, p);
}

double leaf_norm_grad(const MixedField& f, Leaf leaf, double p, double q, MixedField& grad) {
  check_exponents(p, q);
  check_leaf_kind(f, leaf);
  grad = f.zeros_like();
  const std::size_t A = f.outer_count();
  const std::size_t C = f.cell_count();
  if (square_function_leaf(leaf)) {
    std::vector<LqElement> sq;
    std::vector<double> m(A, 0.0);
    for (std::size_t a = 0; a < A; ++a) {
      sq.push_back(square_sum(f, a, leaf));
      m[a] = lq::psd_root_norm(sq.back(), q);
    }
    const double N = combine_outer(f.outer, m, p);
    if (N == 0.0) return 0.0;
    for (std::size_t a = 0; a < A; ++a) {
      if (m[a] == 0.0) continue;
      const double coef = f.outer[a] * std::pow(m[a] / N, p - 1.0);
      const LqElement scaled = (1.0 / (m[a] * m[a])) * sq[a];
      if (f.shape().is_commutative() || leaf == Leaf::S) {
        const Eigen::VectorXcd pw = lq::psd_power(scaled, q / 2.0 - 1.0).data().col(0);
        for (std::size_t c = 0; c < C; ++c) {
          Matrix& g = grad.at(a, c).mutable_data();
          const Matrix& v = f.at(a, c).data();
          for (Eigen::Index s = 0; s < v.size(); ++s) {
            const double sigma = f.shape().is_commutative() ? f.shape().space()->weight(static_cast<std::size_t>(s)) : 1.0;
            g.reshaped()(s) = coef * f.weights[c] * sigma * pw[s] * v.reshaped()(s) / m[a];
          }
        }
      } else {
        const Matrix pw = lq::psd_power(scaled.data(), q / 2.0 - 1.0);
        for (std::size_t c = 0; c < C; ++c) {
          const Matrix& v = f.at(a, c).data();
          grad.at(a, c).mutable_data() =
              (coef * f.weights[c] / m[a]) * (leaf == Leaf::S_c ? Matrix(v * pw) : Matrix(pw * v));
        }
      }
    }
    return N;
  }
  std::vector<Matrix> g(A * C);
  std::vector<double> n(A * C, 0.0);
  for (std::size_t k = 0; k < A * C; ++k) n[k] = schatten_grad(f.values[k], q, g[k]);
  if (leaf == Leaf::D_pq) {
    std::vector<double> w(A * C);
    for (std::size_t a = 0; a < A; ++a)
      for (std::size_t c = 0; c < C; ++c) w[a * C + c] = f.outer[a] * f.weights[c];
    const double N = combine_outer(w, n, p);
    if (N == 0.0) return 0.0;
    for (std::size_t k = 0; k < A * C; ++k)
      if (n[k] > 0.0) grad.values[k].mutable_data() = (w[k] * std::pow(n[k] / N, p - 1.0)) * g[k];
    return N;
  }
  std::vector<double> m(A, 0.0);
  for (std::size_t a = 0; a < A; ++a) {
    std::vector<double> row(n.begin() + static_cast<std::ptrdiff_t>(a * C), n.begin() + static_cast<std::ptrdiff_t>((a + 1) * C));
    m[a] = combine_outer(f.weights, row, q);
  }
  const double N = combine_outer(f.outer, m, p);
  if (N == 0.0) return 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    if (m[a] == 0.0) continue;
    const double coef = f.outer[a] * std::pow(m[a] / N, p - 1.0);
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t k = a * C + c;
      if (n[k] > 0.0) grad.values[k].mutable_data() = (coef * f.weights[c] * std::pow(n[k] / m[a], q - 1.0)) * g[k];
    }
  }
  return N;
}

double norm_S(const LqSequence& seq, double q, lq::Side side) {
  if (seq.shape().is_commutative()) return leaf_norm(seq.field(), Leaf::S, 2.0, q);
  return leaf_norm(seq.field(), side == lq::Side::column ? Leaf::S_c : Leaf::S_r, 2.0, q);
}

double norm_S_commutative(const LqSequence& seq, double q) { return leaf_norm(seq.field(), Leaf::S, 2.0, q); }

double norm_D(const LqSequence& seq, double p, double q) { return leaf_norm(seq.field(), Leaf::D_pq, p, q); }

Node Node::make_leaf(Leaf l) {
  Node n;
  n.type = Type::leaf;
  n.leaf = l;
  return n;
}

Node Node::meet(std::vector<Node> children) {
  require(!children.empty(), "intersection needs children");
  if (children.size() == 1) return children.front();
  Node n;
  n.type = Type::intersection;
  n.children = std::move(children);
  return n;
}

Node Node::join(std::vector<Node> children) {
  require(!children.empty(), "sum needs children");
  if (children.size() == 1) return children.front();
  Node n;
  n.type = Type::sum;
  n.children = std::move(children);
  return n;
}

std::string Node::to_string() const {
  if (type == Type::leaf) return seq::to_string(leaf);
  std::string out = "(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += type == Type::sum ? " + " : " & ";
    out += children[i].to_string();
  }
  return out + ")";
}

bool Node::contains_sum() const {
  if (type == Type::sum) return true;
  return std::any_of(children.begin(), children.end(), [](const Node& c) { return c.contains_sum(); });
}

int regime_case(double p, double q) {
  require(std::isfinite(p) && std::isfinite(q) && p > 1.0 && q > 1.0, "regimes need 1 < p, q < infinity");
  if (2.0 <= q && q <= p) return 1;
  if (2.0 <= p && p <= q) return 2;
  if (p < 2.0 && 2.0 <= q) return 3;
  if (q < 2.0 && 2.0 <= p) return 4;
  if (q <= p && p <= 2.0) return 5;
  return 6;
}

RegimeSpec regime_select(double p, double q, Mode mode) {
  RegimeSpec spec;
  spec.case_id = regime_case(p, q);
  spec.p = p;
  spec.q = q;
  spec.mode = mode;
  const Node Dqq = Node::make_leaf(Leaf::D_qq);
  const Node Dpq = Node::make_leaf(Leaf::D_pq);
  // Square-function leaves: S alone, or the column and row pair.
  auto squares = [&] {
    if (mode == Mode::commutative) return std::vector<Node>{Node::make_leaf(Leaf::S)};
    return std::vector<Node>{Node::make_leaf(Leaf::S_c), Node::make_leaf(Leaf::S_r)};
  };
  auto with = [](std::vector<Node> a, std::vector<Node> b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  switch (spec.case_id) {
    case 1: spec.tree = Node::meet(with(squares(), {Dqq, Dpq})); break;
    case 2: spec.tree = Node::meet(with(squares(), {Node::join({Dqq, Dpq})})); break;
    case 3: spec.tree = Node::join({Node::meet(with(squares(), {Dqq})), Dpq}); break;
    case 4: spec.tree = Node::meet({Node::join(with(squares(), {Dqq})), Dpq}); break;
    case 5: spec.tree = Node::join(with(squares(), {Node::meet({Dqq, Dpq})})); break;
    default: spec.tree = Node::join(with(squares(), {Dqq, Dpq})); break;
  }
  return spec;
}

double conjugate(double p) {
  require(p > 1.0 && std::isfinite(p), "conjugate exponent needs 1 < p < infinity");
  return p / (p - 1.0);
}

double Decomposition::residual(const MixedField& target) const {
  if (parts.empty()) return 0.0;
  MixedField sum = parts.front();
  for (std::size_t j = 1; j < parts.size(); ++j) sum += parts[j];
  sum -= target;
  const double scale = std::max(target.max_abs(), 1e-300);
  return sum.max_abs() / scale;
}

DualityResult duality_gap(const LqSequence& f, const LqSequence& g, double p, double q, Mode mode,
                          const OptimizerOptions& options) {
  require(f.size() == g.size(), "paired sequences differ in length");
  DualityResult r;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& fi = f.items()[i];
    const auto& gi = g.items()[i];
    require(fi.atom_count() == gi.atom_count(), "paired items must live on the same space");
    for (std::size_t a = 0; a < fi.atom_count(); ++a) {
      require(std::abs(fi.prob(a) - gi.prob(a)) <= 1e-15, "paired items must live on the same space");
      r.pairing += fi.prob(a) * lq::pair(fi.value(a), gi.value(a));
    }
  }
  r.norm_f = composite_norm(f, regime_select(p, q, mode), options).value;
  r.norm_g = composite_norm(g, regime_select(conjugate(p), conjugate(q), mode), options).value;
  r.bound = r.norm_f * r.norm_g;
  r.ratio = r.bound > 0.0 ? std::abs(r.pairing) / r.bound : 0.0;
  return r;
}

}  // namespace itolab::seq
