#ifndef ITOLAB_SEQNORMS_HPP
#define ITOLAB_SEQNORMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "itolab/lq.hpp"
#include "itolab/prob.hpp"

namespace itolab::seq {

enum class Mode { commutative, noncommutative };

// Array of L^q elements v(a, c) over outer atoms a (probabilities P_a) and
// cells c (weights W_c). Every sequence and process norm is a mixed norm of
// such an array:
//   sequences: one outer atom, one cell per (item, atom) weighted by its probability;
//   processes: outer atoms of the coefficient space, one cell per grid cell
//              weighted by its intensity.
struct MixedField {
  std::vector<double> outer;            // size A
  std::vector<double> weights;          // size C
  std::vector<lq::LqElement> values;    // A * C, outer-major

  MixedField() = default;
  MixedField(std::vector<double> outer, std::vector<double> weights, lq::LqElement zero);

  std::size_t outer_count() const { return outer.size(); }
  std::size_t cell_count() const { return weights.size(); }
  lq::LqElement& at(std::size_t a, std::size_t c) { return values[a * weights.size() + c]; }
  const lq::LqElement& at(std::size_t a, std::size_t c) const { return values[a * weights.size() + c]; }
  const lq::LqElement& shape() const { return values.front(); }

  MixedField zeros_like() const;
  MixedField scaled(lq::cplx c) const;
  MixedField& operator+=(const MixedField& other);
  MixedField& operator-=(const MixedField& other);
  bool same_layout(const MixedField& other) const;
  bool is_real() const;
  double max_abs() const;
};

class LqSequence {
 public:
  LqSequence() = default;
  explicit LqSequence(std::vector<prob::RandomLqVariable> items);

  const std::vector<prob::RandomLqVariable>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  const lq::LqElement& shape() const { return items_.front().value(0); }

  MixedField field() const;
  // Same items, values replaced from a field with the layout of field().
  LqSequence with_values(const MixedField& field) const;
  LqSequence scaled(lq::cplx c) const;

 private:
  std::vector<prob::RandomLqVariable> items_;
};

enum class Leaf { S_c, S_r, S, D_qq, D_pq };
std::string to_string(Leaf leaf);

// Leaf norms of a field at exponents (p, q):
//   S_c  = (sum_a P_a || (sum_c W_c v*v)^{1/2} ||_q^p)^{1/p}
//   S_r  = the same with v v*
//   S    = commutative square function (pointwise |v|^2)
//   D_qq = (sum_a P_a (sum_c W_c ||v||_q^q)^{p/q})^{1/p}
//   D_pq = (sum_a P_a sum_c W_c ||v||_q^p)^{1/p}
// With a single outer atom these are the sequence norms S_{q,c}, S_{q,r}, S_q,
// D_{q,q}, D_{p,q}; with outer atoms they are the process norms.
double leaf_norm(const MixedField& f, Leaf leaf, double p, double q);
// Value and a subgradient with respect to the real and imaginary parts of
// every entry (returned as complex entries in a field of the same layout).
double leaf_norm_grad(const MixedField& f, Leaf leaf, double p, double q, MixedField& grad);

double norm_S(const LqSequence& seq, double q, lq::Side side);
double norm_S_commutative(const LqSequence& seq, double q);
double norm_D(const LqSequence& seq, double p, double q);

struct Node {
  enum class Type { leaf, intersection, sum };
  Type type = Type::leaf;
  Leaf leaf = Leaf::D_pq;
  std::vector<Node> children;

  static Node make_leaf(Leaf l);
  static Node meet(std::vector<Node> children);  // intersection: max
  static Node join(std::vector<Node> children);  // sum: infimal convolution
  std::string to_string() const;
  bool contains_sum() const;
};

struct RegimeSpec {
  int case_id = 0;  // 1..6, 0 for a hand-built tree
  double p = 2.0;
  double q = 2.0;
  Mode mode = Mode::noncommutative;
  Node tree;
};

// Case of the six-regime classification; boundary points go to the first
// applicable case in the order
//   1: 2<=q<=p  2: 2<=p<=q  3: 1<p<2<=q  4: 1<q<2<=p  5: 1<q<=p<=2  6: 1<p<=q<=2.
int regime_case(double p, double q);
RegimeSpec regime_select(double p, double q, Mode mode);

struct OptimizerOptions {
  double tol = 1e-7;          // stop once the target gap is below tol * value
  int restarts = 8;
  int max_iterations = 5000;  // per restart
  std::uint64_t seed = 0x5eed;
};

struct Decomposition {
  std::vector<MixedField> parts;  // sums to the target
  std::vector<std::string> labels;
  double residual(const MixedField& target) const;  // relative reconstruction error
};

struct CompositeResult {
  double value = 0.0;
  Decomposition certificate;  // parts of the outermost sum, empty when the tree has none
  bool converged = true;
  int iterations = 0;
};

// Intersections evaluate as the max of their children; sums minimize the sum
// of child norms over decompositions of the field. The value is the cost of
// the returned decomposition, hence an upper bound on the infimum.
CompositeResult composite_norm(const MixedField& field, const Node& tree, double p, double q,
                               const OptimizerOptions& options = {});
CompositeResult composite_norm(const MixedField& field, const RegimeSpec& spec, const OptimizerOptions& options = {});
CompositeResult composite_norm(const LqSequence& seq, const RegimeSpec& spec, const OptimizerOptions& options = {});

// Cost of a given split of the field among the children of a sum node.
double decomposition_cost(const std::vector<MixedField>& parts, const Node& sum_node, double p, double q);

// Zooming grid search over splits for a sum at the root (free dimension <= 4).
double brute_force_sum_norm(const MixedField& field, const Node& tree, double p, double q, int grid_resolution = 13);

double conjugate(double p);

struct DualityResult {
  lq::cplx pairing;
  double norm_f = 0.0;
  double norm_g = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

// <f, g> = sum_i E tr(f_i g_i) against ||f||_{s_{p,q}} ||g||_{s_{p',q'}}.
DualityResult duality_gap(const LqSequence& f, const LqSequence& g, double p, double q, Mode mode,
                          const OptimizerOptions& options = {});

}  // namespace itolab::seq

#endif
