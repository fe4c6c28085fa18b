#include "itolab/lq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "itolab/errors.hpp"

namespace itolab::lq {

FiniteMeasureSpace::FiniteMeasureSpace(std::vector<std::string> atom_ids, std::vector<double> weights)
    : atom_ids_(std::move(atom_ids)), weights_(std::move(weights)) {
  require(!weights_.empty(), "measure space needs at least one atom");
  require(atom_ids_.size() == weights_.size(), "atom ids and weights differ in length");
  for (double w : weights_) require(std::isfinite(w) && w > 0.0, "atom weights must be positive and finite");
  std::unordered_set<std::string> seen(atom_ids_.begin(), atom_ids_.end());
  require(seen.size() == atom_ids_.size(), "atom ids must be distinct");
}

std::shared_ptr<const FiniteMeasureSpace> FiniteMeasureSpace::make(std::vector<double> weights) {
  std::vector<std::string> ids(weights.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = std::to_string(i);
  return std::make_shared<const FiniteMeasureSpace>(std::move(ids), std::move(weights));
}

std::shared_ptr<const FiniteMeasureSpace> FiniteMeasureSpace::counting(std::size_t n) {
  return make(std::vector<double>(n, 1.0));
}

bool FiniteMeasureSpace::operator==(const FiniteMeasureSpace& other) const {
  return atom_ids_ == other.atom_ids_ && weights_ == other.weights_;
}

namespace {

bool same_space(const MeasureSpacePtr& a, const MeasureSpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

void check_compatible(const LqElement& a, const LqElement& b) {
  require(a.same_shape(b), "elements differ in kind, shape or measure space");
}

}  // namespace

LqElement::LqElement() : kind_(Kind::matrix), data_(Matrix::Zero(1, 1)) {}

LqElement::LqElement(Kind kind, Matrix data, MeasureSpacePtr space)
    : kind_(kind), data_(std::move(data)), space_(std::move(space)) {}

LqElement LqElement::commutative(MeasureSpacePtr space, Eigen::VectorXcd values) {
  require(space != nullptr, "commutative element needs a measure space");
  require(static_cast<std::size_t>(values.size()) == space->size(), "values length must equal the atom count");
  Matrix data = values;
  return LqElement(Kind::commutative, std::move(data), std::move(space));
}

LqElement LqElement::matrix(Matrix entries) {
  require(entries.rows() >= 1 && entries.cols() >= 1, "matrix dimensions must be at least 1");
  return LqElement(Kind::matrix, std::move(entries), nullptr);
}

LqElement LqElement::scalar(cplx value) { return matrix(Matrix::Constant(1, 1, value)); }

LqElement LqElement::zeros_like(const LqElement& shape) {
  return LqElement(shape.kind_, Matrix::Zero(shape.rows(), shape.cols()), shape.space_);
}

LqElement LqElement::identity(Eigen::Index d) { return matrix(Matrix::Identity(d, d)); }

bool LqElement::same_shape(const LqElement& other) const {
  if (kind_ != other.kind_ || rows() != other.rows() || cols() != other.cols()) return false;
  return kind_ == Kind::matrix || same_space(space_, other.space_);
}

bool LqElement::is_finite() const { return data_.allFinite(); }

bool LqElement::is_real(double tol) const { return data_.imag().cwiseAbs().maxCoeff() <= tol; }

bool LqElement::is_zero() const { return data_.isZero(0.0); }

LqElement LqElement::adjoint() const {
  if (kind_ == Kind::commutative) return LqElement(kind_, data_.conjugate(), space_);
  return LqElement(kind_, data_.adjoint(), space_);
}

LqElement& LqElement::operator+=(const LqElement& other) {
  check_compatible(*this, other);
  data_ += other.data_;
  return *this;
}

LqElement& LqElement::operator-=(const LqElement& other) {
  check_compatible(*this, other);
  data_ -= other.data_;
  return *this;
}

LqElement& LqElement::operator*=(cplx c) {
  data_ *= c;
  return *this;
}

LqElement operator+(LqElement a, const LqElement& b) { return a += b; }
LqElement operator-(LqElement a, const LqElement& b) { return a -= b; }
LqElement operator*(cplx c, LqElement a) { return a *= c; }
LqElement operator*(LqElement a, cplx c) { return a *= c; }

RealVector singular_values(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

double lp_of_values(const RealVector& s, double q) {
  if (s.size() == 0) return 0.0;
  const double top = s.cwiseAbs().maxCoeff();
  if (top == 0.0 || std::isinf(q)) return top;
  if (std::isinf(top)) return top;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double r = std::abs(s[i]) / top;
    if (r > 0.0) acc += std::pow(r, q);
  }
  return top * std::pow(acc, 1.0 / q);
}

double operator_norm(const Matrix& x) {
  const Matrix gram = x.rows() < x.cols() ? Matrix(x * x.adjoint()) : Matrix(x.adjoint() * x);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

double norm_q(const LqElement& x, double q) {
  require(q >= 1.0, "norm exponent must be at least 1");
  require(x.is_finite(), "element has non-finite entries");
  return norm_q(x.data(), x, q);
}

double norm_q(const Matrix& data, const LqElement& shape, double q) {
  if (shape.is_matrix()) {
    if (std::isinf(q)) return operator_norm(data);
    return lp_of_values(singular_values(data), q);
  }
  const auto& w = shape.space()->weights();
  double top = 0.0;
  for (Eigen::Index s = 0; s < data.rows(); ++s) top = std::max(top, std::abs(data(s, 0)));
  if (top == 0.0 || std::isinf(q)) return top;
  double acc = 0.0;
  for (Eigen::Index s = 0; s < data.rows(); ++s) {
    const double r = std::abs(data(s, 0)) / top;
    if (r > 0.0) acc += w[static_cast<std::size_t>(s)] * std::pow(r, q);
  }
  return top * std::pow(acc, 1.0 / q);
}

double StepFunction::at(double t) const {
  if (t < 0.0 || breakpoints.size() < 2 || t >= breakpoints.back()) return 0.0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

std::vector<double> StepFunction::sample(const std::vector<double>& t_grid) const {
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(at(t));
  return out;
}

double StepFunction::integral_power(double q) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > 0.0) acc += (breakpoints[k + 1] - breakpoints[k]) * std::pow(values[k], q);
  }
  return acc;
}

StepFunction decreasing_rearrangement(const LqElement& x) {
  require(x.is_finite(), "element has non-finite entries");
  std::vector<std::pair<double, double>> steps;  // (value, width)
  if (x.is_matrix()) {
    const RealVector s = singular_values(x.data());
    for (Eigen::Index k = 0; k < s.size(); ++k) steps.emplace_back(s[k], 1.0);
  } else {
    const auto& w = x.space()->weights();
    for (Eigen::Index s = 0; s < x.rows(); ++s) steps.emplace_back(std::abs(x.data()(s, 0)), w[static_cast<std::size_t>(s)]);
    std::stable_sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  }
  StepFunction f;
  f.breakpoints.push_back(0.0);
  for (const auto& [value, width] : steps) {
    if (!f.values.empty() && f.values.back() == value) {
      f.breakpoints.back() += width;
    } else {
      f.values.push_back(value);
      f.breakpoints.push_back(f.breakpoints.back() + width);
    }
  }
  return f;
}

std::vector<double> decreasing_rearrangement(const LqElement& x, const std::vector<double>& t_grid) {
  return decreasing_rearrangement(x).sample(t_grid);
}

LqElement modulus_square(const LqElement& x, Side side) {
  if (x.is_commutative()) {
    Eigen::VectorXcd v = x.data().col(0).cwiseAbs2().cast<cplx>();
    return LqElement::commutative(x.space(), std::move(v));
  }
  const Matrix& m = x.data();
  return LqElement::matrix(side == Side::column ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint()));
}

LqElement embed(const std::vector<LqElement>& xs, Layout layout) {
  require(!xs.empty(), "embed needs at least one element");
  for (const auto& x : xs) {
    require(x.is_matrix(), "embed is defined for matrix elements");
    require(x.same_shape(xs.front()), "embed needs elements of one shape");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  const Eigen::Index r = xs.front().rows();
  const Eigen::Index c = xs.front().cols();
  Matrix out = Matrix::Zero(n * r, n * c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix& block = xs[static_cast<std::size_t>(i)].data();
    switch (layout) {
      case Layout::diag: out.block(i * r, i * c, r, c) = block; break;
      case Layout::col: out.block(i * r, 0, r, c) = block; break;
      case Layout::row: out.block(0, i * c, r, c) = block; break;
    }
  }
  return LqElement::matrix(std::move(out));
}

LqElement product(const LqElement& x, const LqElement& y) {
  require(x.kind() == y.kind(), "product of different kinds");
  if (x.is_commutative()) {
    require(x.same_shape(y), "product needs a common measure space");
    return LqElement::commutative(x.space(), x.data().col(0).cwiseProduct(y.data().col(0)));
  }
  require(x.cols() == y.rows(), "product shape mismatch");
  return LqElement::matrix(x.data() * y.data());
}

cplx pair(const LqElement& x, const LqElement& y) {
  require(x.kind() == y.kind(), "pairing of different kinds");
  if (x.is_commutative()) {
    require(x.same_shape(y), "pairing needs a common measure space");
    const auto& w = x.space()->weights();
    cplx acc = 0.0;
    for (Eigen::Index s = 0; s < x.rows(); ++s) acc += w[static_cast<std::size_t>(s)] * x.data()(s, 0) * y.data()(s, 0);
    return acc;
  }
  require(x.cols() == y.rows() && x.rows() == y.cols(), "pairing shape mismatch: need d1 x d2 against d2 x d1");
  return (x.data().transpose().cwiseProduct(y.data())).sum();
}

RealVector psd_eigenvalues(const Matrix& a) {
  require(a.rows() == a.cols(), "expected a square matrix");
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  RealVector ev = eig.eigenvalues();
  const double floor = std::max(ev.maxCoeff(), 0.0) * static_cast<double>(a.rows()) * 8.0 *
                       std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] <= floor) ev[i] = 0.0;
  return ev;
}

Matrix psd_power(const Matrix& a, double r) {
  require(a.rows() == a.cols(), "expected a square matrix");
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  RealVector ev = eig.eigenvalues();
  const double floor = std::max(ev.maxCoeff(), 0.0) * static_cast<double>(a.rows()) * 8.0 *
                       std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = ev[i] <= floor ? 0.0 : std::pow(ev[i], r);
  const Matrix& v = eig.eigenvectors();
  return v * ev.cast<cplx>().asDiagonal() * v.adjoint();
}

LqElement psd_power(const LqElement& a, double r) {
  if (a.is_matrix()) return LqElement::matrix(psd_power(a.data(), r));
  Eigen::VectorXcd v(a.rows());
  for (Eigen::Index s = 0; s < a.rows(); ++s) {
    const double x = a.data()(s, 0).real();
    v[s] = x > 0.0 ? std::pow(x, r) : 0.0;
  }
  return LqElement::commutative(a.space(), std::move(v));
}

double psd_root_norm(const LqElement& a, double q) {
  require(q >= 1.0, "norm exponent must be at least 1");
  if (a.is_matrix()) {
    RealVector ev = psd_eigenvalues(a.data());
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(ev[i]);
    return lp_of_values(ev, q);
  }
  Eigen::VectorXcd root(a.rows());
  for (Eigen::Index s = 0; s < a.rows(); ++s) root[s] = std::sqrt(std::max(a.data()(s, 0).real(), 0.0));
  return norm_q(LqElement::commutative(a.space(), std::move(root)), q);
}

}  // namespace itolab::lq
