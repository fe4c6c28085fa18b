#ifndef ITOLAB_LQ_HPP
#define ITOLAB_LQ_HPP

#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace itolab::lq {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class FiniteMeasureSpace {
 public:
  FiniteMeasureSpace(std::vector<std::string> atom_ids, std::vector<double> weights);

  // Atoms "0".."n-1" with the given weights (all 1 when omitted).
  static std::shared_ptr<const FiniteMeasureSpace> make(std::vector<double> weights);
  static std::shared_ptr<const FiniteMeasureSpace> counting(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  const std::vector<std::string>& atom_ids() const { return atom_ids_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t s) const { return weights_[s]; }

  bool operator==(const FiniteMeasureSpace& other) const;

 private:
  std::vector<std::string> atom_ids_;
  std::vector<double> weights_;
};

using MeasureSpacePtr = std::shared_ptr<const FiniteMeasureSpace>;

enum class Kind { commutative, matrix };
enum class Side { column, row };
enum class Layout { diag, col, row };

// An element of L^q: a complex function on a finite measure space, or a complex
// d1 x d2 matrix with the standard trace. Commutative values are stored as an
// n x 1 column so both kinds share the arithmetic below.
class LqElement {
 public:
  LqElement();  // the 1x1 zero matrix

  static LqElement commutative(MeasureSpacePtr space, Eigen::VectorXcd values);
  static LqElement matrix(Matrix entries);
  static LqElement scalar(cplx value);
  static LqElement zeros_like(const LqElement& shape);
  static LqElement identity(Eigen::Index d);

  Kind kind() const { return kind_; }
  bool is_matrix() const { return kind_ == Kind::matrix; }
  bool is_commutative() const { return kind_ == Kind::commutative; }
  const Matrix& data() const { return data_; }
  Matrix& mutable_data() { return data_; }
  const MeasureSpacePtr& space() const { return space_; }
  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  std::size_t real_dimension() const { return 2 * static_cast<std::size_t>(data_.size()); }

  bool same_shape(const LqElement& other) const;
  bool is_finite() const;
  bool is_real(double tol = 0.0) const;
  bool is_zero() const;

  LqElement adjoint() const;
  LqElement& operator+=(const LqElement& other);
  LqElement& operator-=(const LqElement& other);
  LqElement& operator*=(cplx c);

 private:
  LqElement(Kind kind, Matrix data, MeasureSpacePtr space);

  Kind kind_;
  Matrix data_;
  MeasureSpacePtr space_;
};

LqElement operator+(LqElement a, const LqElement& b);
LqElement operator-(LqElement a, const LqElement& b);
LqElement operator*(cplx c, LqElement a);
LqElement operator*(LqElement a, cplx c);

// Singular values in nonincreasing order.
RealVector singular_values(const Matrix& x);

// (sum_i s_i^q)^{1/q} for nonnegative s, evaluated relative to max s so large q
// does not overflow; q = inf gives max s.
double lp_of_values(const RealVector& s, double q);

double norm_q(const LqElement& x, double q);
// Norm of raw data read with the kind and measure space of `shape`.
double norm_q(const Matrix& data, const LqElement& shape, double q);
double operator_norm(const Matrix& x);

// Piecewise constant, nonincreasing function on [0, breakpoints.back()):
// values[k] on [breakpoints[k], breakpoints[k+1]); zero beyond the last breakpoint.
struct StepFunction {
  std::vector<double> breakpoints;  // starts at 0, strictly increasing
  std::vector<double> values;       // size breakpoints.size() - 1

  double at(double t) const;
  std::vector<double> sample(const std::vector<double>& t_grid) const;
  // integral of value^q over [0, inf)
  double integral_power(double q) const;
};

StepFunction decreasing_rearrangement(const LqElement& x);
std::vector<double> decreasing_rearrangement(const LqElement& x, const std::vector<double>& t_grid);

LqElement modulus_square(const LqElement& x, Side side);

// Matrix kind only. Zeros fill every block not named by the layout.
LqElement embed(const std::vector<LqElement>& xs, Layout layout);

LqElement product(const LqElement& x, const LqElement& y);
cplx pair(const LqElement& x, const LqElement& y);

// Hermitian functional calculus on a positive semidefinite matrix (or a
// nonnegative commutative element). Eigenvalues below a relative roundoff
// floor count as zero, so negative powers act as pseudo-inverse powers.
Matrix psd_power(const Matrix& a, double r);
LqElement psd_power(const LqElement& a, double r);
// ||a^{1/2}||_q computed from the eigenvalues of a.
double psd_root_norm(const LqElement& a, double q);
RealVector psd_eigenvalues(const Matrix& a);

}  // namespace itolab::lq

#endif
