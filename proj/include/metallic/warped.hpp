#ifndef METALLIC_WARPED_HPP
#define METALLIC_WARPED_HPP

#include <optional>
#include <string>

#include "metallic/structures.hpp"

namespace metallic {

/// R x_f N with metric dt^2 + f(t)^2 g_N.
struct WarpedProduct {
  ChartedManifold fiber;
  std::optional<MetallicStructure> fiber_structure;
  /// Warping function, an expression in the single variable `t_name` (index 0).
  Expr f;
  std::string t_name = "t";
  Interval base{-1.0, 1.0};

  /// Coordinates of the product chart: t first, then the fiber coordinates.
  std::vector<std::string> coords() const;
  /// Fiber expressions rewritten over the product chart.
  Expr lift(const Expr& fiber_expr) const;
  /// f rewritten over the product chart.
  Expr warping() const;
  /// Drops the t coordinate of a product point.
  Vector fiber_point(const Vector& p) const;
};

/// Block metric diag(1, f^2 g_N). Throws NonPositiveWarping if f <= 0 somewhere on the base interval.
ChartedManifold warped_metric(const WarpedProduct& wp);

struct InducedQuadraticStructure {
  ChartedManifold manifold;
  QuadraticPhiStructure structure;
};

/// phi = J on the fiber, 0 on d_t; xi = d_t, eta = dt; a = p, b = q.
InducedQuadraticStructure induce_phi(const WarpedProduct& wp);

VerificationReport verify_az_formulas(const WarpedProduct& wp, Samples samples, double tol);

/// (nabla_X phi) Y = beta (g(X, phi Y) xi + eta(Y) phi X), nabla_X xi = -beta (X - eta(X) xi),
/// d eta = 0 and g(nabla xi, xi) = 0, for a beta given as an expression on the chart of `m`.
VerificationReport verify_kenmotsu(const ChartedManifold& m, const QuadraticPhiStructure& s, const Expr& beta,
                                   Samples samples, double tol);

/// With a parallel fiber structure the product is (-f'/f, phi)-Kenmotsu.
/// Throws FiberNotLocallyMetallic when the fiber structure is not parallel.
VerificationReport theorem_qc_check(const WarpedProduct& wp, Samples samples, double tol,
                                    const std::optional<Expr>& expected_beta = std::nullopt);

/// Max |N_phi(d_i, d_j)|. When `beta` is given, the Kenmotsu condition on nabla phi is
/// evaluated first and a note records whether it holds.
VerificationReport nijenhuis_phi_check(const ChartedManifold& m, const QuadraticPhiStructure& s, Samples samples,
                                       double tol, const std::optional<Expr>& beta = std::nullopt);

}  // namespace metallic

#endif  // METALLIC_WARPED_HPP
