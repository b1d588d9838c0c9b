#ifndef METALLIC_TENSOR_HPP
#define METALLIC_TENSOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metallic/expr.hpp"

namespace metallic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A single coordinate chart with a Riemannian metric given by expressions.
/// Only the upper triangle of the metric is kept.
class ChartedManifold {
 public:
  ChartedManifold() = default;
  ChartedManifold(std::vector<std::string> coords, std::vector<Interval> box, const ExprMatrix& metric);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<Interval>& box() const { return box_; }

  const Expr& metric(Eigen::Index i, Eigen::Index j) const;
  ExprMatrix metric() const;
  Matrix metric_at(const Vector& p) const;

 private:
  std::vector<std::string> coords_;
  std::vector<Interval> box_;
  std::vector<Expr> upper_;  // row-major upper triangle
};

/// (1,1) tensor field; components(i, j) = K^i_j.
struct TensorField11 {
  ExprMatrix components;

  static TensorField11 identity(Eigen::Index dim);
  Eigen::Index dim() const { return components.rows(); }
  Matrix at(const Vector& p) const { return eval(components, p); }
};

struct VectorField {
  ExprVector components;

  static VectorField coordinate(Eigen::Index dim, Eigen::Index i);
  Eigen::Index dim() const { return components.size(); }
  Vector at(const Vector& p) const { return eval(components, p); }
};

/// Components eta_i of a one-form.
struct OneForm {
  ExprVector components;

  Eigen::Index dim() const { return components.size(); }
  Vector at(const Vector& p) const { return eval(components, p); }
};

/// Value and first partials of a matrix-valued field; partial[i] = d/dx^i.
struct MatrixFieldJet {
  Matrix value;
  std::vector<Matrix> partial;

  /// sum_i X^i partial[i]
  Matrix directional(const Vector& x) const;
};

/// Value and Jacobian of a vector-valued field; jacobian(k, i) = d_i X^k.
struct VectorFieldJet {
  Vector value;
  Matrix jacobian;
};

MatrixFieldJet field_jet(const ExprMatrix& m, JetEvaluator& ev);
VectorFieldJet field_jet(const ExprVector& v, JetEvaluator& ev);
MatrixFieldJet field_jet(const TensorField11& k, const Vector& p);
VectorFieldJet field_jet(const VectorField& x, const Vector& p);
VectorFieldJet field_jet(const OneForm& eta, const Vector& p);

/// Christoffel symbols: gamma[k](i, j) = Gamma^k_ij.
using Christoffel = std::vector<Matrix>;

/// Levi-Civita data of a chart at one point.
struct PointFrame {
  Vector point;
  Matrix metric;
  Matrix metric_inverse;
  std::vector<Matrix> metric_partial;       // [m](i, j) = d_m g_ij
  Christoffel gamma;                        // [k](i, j) = Gamma^k_ij
  std::vector<Christoffel> gamma_partial;   // [m][k](i, j) = d_m Gamma^k_ij

  static PointFrame at(const ChartedManifold& m, const Vector& p);
  static PointFrame at(const ChartedManifold& m, JetEvaluator& ev, const Vector& p);

  Eigen::Index dim() const { return point.size(); }
  double inner(const Vector& x, const Vector& y) const { return x.dot(metric * y); }
  double norm(const Vector& x) const;
  /// Gamma^k_ij x^i y^j
  Vector contract(const Vector& x, const Vector& y) const;
};

Christoffel christoffel(const ChartedManifold& m, const Vector& p);

/// nabla_X Y for a field Y known through its jet.
Vector covariant_derivative(const PointFrame& f, const VectorFieldJet& y, const Vector& x);
/// (nabla_X K) Y
Vector covariant_derivative_11(const PointFrame& f, const MatrixFieldJet& k, const Vector& x, const Vector& y);
Vector covariant_derivative_11(const ChartedManifold& m, const TensorField11& k, const Vector& x, const Vector& y,
                               const Vector& p);
/// Components (nabla_X K)^a_b as a matrix.
Matrix covariant_derivative_11(const PointFrame& f, const MatrixFieldJet& k, const Vector& x);
/// (nabla_X eta) Y for a one-form known through its jet.
double covariant_derivative_form(const PointFrame& f, const VectorFieldJet& eta, const Vector& x, const Vector& y);
/// (nabla_X g) as a matrix; vanishes for the Levi-Civita connection.
Matrix covariant_derivative_metric(const PointFrame& f, const Vector& x);

/// [X, Y] at the point the jets were taken.
Vector lie_bracket(const VectorFieldJet& x, const VectorFieldJet& y);
Vector lie_bracket(const VectorField& x, const VectorField& y, const Vector& p);

/// Jet of the field K X.
VectorFieldJet apply(const MatrixFieldJet& k, const VectorFieldJet& x);

/// N_K(X, Y) = K^2[X,Y] + [KX,KY] - K[KX,Y] - K[X,KY].
Vector nijenhuis(const MatrixFieldJet& k, const VectorFieldJet& x, const VectorFieldJet& y);
Vector nijenhuis(const TensorField11& k, const VectorField& x, const VectorField& y, const Vector& p);

/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
Vector riemann(const PointFrame& f, const Vector& x, const Vector& y, const Vector& z);
Vector riemann(const ChartedManifold& m, const Vector& x, const Vector& y, const Vector& z, const Vector& p);
double sectional_curvature(const PointFrame& f, const Vector& x, const Vector& y);

/// Deterministic low-discrepancy points in a box: a Halton sequence with a
/// Cranley-Patterson shift drawn from `seed`.
std::vector<Vector> sample_points(const std::vector<Interval>& box, std::size_t count, std::uint64_t seed);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_eigenvalue(const Matrix& m);

}  // namespace metallic

#endif  // METALLIC_TENSOR_HPP
