#ifndef METALLIC_EXPR_HPP
#define METALLIC_EXPR_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "metallic/jet.hpp"

namespace metallic {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, sqrt, exp, log, sin, cos, sinh, cosh, tanh };

struct ExprNode;

/// Immutable scalar expression over the coordinates of a chart.
///
/// Nodes are shared, so an `Expr` is cheap to copy and a tree built by the
/// arithmetic operators below is really a DAG. Those operators fold trivial
/// constants (`0*x`, `x+0`, `1*x`, constant subtrees); `parse` never does, so
/// that parsed text round-trips through `to_string` structurally.
class Expr {
 public:
  Expr();
  Expr(double value);  // NOLINT(google-explicit-constructor): Eigen needs Scalar(0)

  static Expr variable(std::size_t index, std::string name);
  /// Raw node constructors without folding.
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr unary(Op op, Expr operand);

  Op op() const;
  double constant_value() const;
  std::size_t variable_index() const;
  const std::string& variable_name() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& operand() const { return lhs(); }

  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(double v) const { return is_constant() && constant_value() == v; }

  const ExprNode* node() const { return node_.get(); }

 private:
  friend struct ExprNode;
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  /// Placeholder child of leaf nodes; never escapes a node.
  static Expr empty() { return Expr(std::shared_ptr<const ExprNode>()); }
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  Op op = Op::constant;
  double constant = 0.0;
  std::size_t index = 0;
  std::string name;
  Expr lhs = Expr::empty();
  Expr rhs = Expr::empty();
};

Expr parse(std::string_view text, std::span<const std::string> coords);
std::string to_string(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);
/// Number of distinct nodes reachable from `e`.
std::size_t node_count(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }
inline Expr& operator/=(Expr& a, const Expr& b) { return a = a / b; }
Expr pow(const Expr& base, const Expr& exponent);
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);

/// Exact partial derivative with respect to variable `index`.
Expr differentiate(const Expr& e, std::size_t index);
/// Replaces variable i by `values[i]`.
Expr substitute(const Expr& e, std::span<const Expr> values);
/// Renumbers variables: variable i becomes variable `index_map[i]` named `names[index_map[i]]`.
Expr remap_variables(const Expr& e, std::span<const std::size_t> index_map,
                     std::span<const std::string> names);

/// Evaluates expressions at a fixed point, sharing work between common
/// subexpressions of everything evaluated through the same instance.
class JetEvaluator {
 public:
  explicit JetEvaluator(const Eigen::VectorXd& point);
  const Jet2<double>& operator()(const Expr& e);
  Eigen::Index dim() const { return point_.size(); }

 private:
  Eigen::VectorXd point_;
  std::unordered_map<const ExprNode*, Jet2<double>> cache_;
};

class ValueEvaluator {
 public:
  explicit ValueEvaluator(const Eigen::VectorXd& point) : point_(point) {}
  double operator()(const Expr& e);

 private:
  Eigen::VectorXd point_;
  std::unordered_map<const ExprNode*, double> cache_;
};

Jet2<double> eval_jet2(const Expr& e, const Eigen::VectorXd& point);
double eval(const Expr& e, const Eigen::VectorXd& point);

}  // namespace metallic

namespace Eigen {
template <>
struct NumTraits<metallic::Expr> : GenericNumTraits<double> {
  using Real = metallic::Expr;
  using NonInteger = metallic::Expr;
  using Nested = metallic::Expr;
  using Literal = metallic::Expr;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
};
}  // namespace Eigen

namespace metallic {
using ExprVector = Eigen::Matrix<Expr, Eigen::Dynamic, 1>;
using ExprMatrix = Eigen::Matrix<Expr, Eigen::Dynamic, Eigen::Dynamic>;

ExprMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows, std::span<const std::string> coords);
Expr determinant(const ExprMatrix& m);
/// Adjugate over determinant; intended for the small matrices of a chart.
ExprMatrix inverse(const ExprMatrix& m);
Eigen::MatrixXd eval(const ExprMatrix& m, const Eigen::VectorXd& point);
}  // namespace metallic

#endif  // METALLIC_EXPR_HPP
