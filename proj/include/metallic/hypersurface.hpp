#ifndef METALLIC_HYPERSURFACE_HPP
#define METALLIC_HYPERSURFACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "metallic/structures.hpp"

namespace metallic {

/// Frame data of a hypersurface at one parameter point.
struct InducedHypersurfaceData {
  Matrix metric;          // g_ij
  Matrix tangent;         // columns dx/du_i in ambient coordinates
  Vector normal;          // unit normal, ambient coordinates
  Matrix shape;           // A^j_i
  Matrix phi;             // phi^j_i
  Vector eta;             // eta_i
  Vector xi;              // xi^j
  double normal_component = 0.0;   // g~(J nu, nu)
  double tangential_norm2 = 0.0;   // |tan(J nu)|^2
};

/// An embedded hypersurface u -> x(u) of a metallic Riemannian manifold.
///
/// All pointwise fields (induced metric, normal, shape operator and the
/// induced phi, eta, xi) are built as expressions over the parameter chart,
/// so their derivatives come from jets like any other field.
class Hypersurface {
 public:
  Hypersurface(ChartedManifold ambient, MetallicStructure structure, std::vector<std::string> params,
               std::vector<Interval> box, ExprVector embedding, int orientation = 1);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(params_.size()); }
  const ChartedManifold& ambient() const { return ambient_; }
  const MetallicStructure& structure() const { return structure_; }
  /// Parameter chart carrying the induced metric.
  const ChartedManifold& induced() const { return induced_; }
  int orientation() const { return orientation_; }
  const ExprVector& embedding() const { return embedding_; }

  /// Ambient point x(u).
  Vector position(const Vector& u) const;
  Matrix induced_metric(const Vector& u) const;
  Vector unit_normal(const Vector& u) const;
  Matrix shape_operator(const Vector& u) const;

  /// Same fields without the frame condition; used to assess feasibility.
  InducedHypersurfaceData frame_data(const Vector& u) const;
  /// Throws QNotOne unless q = 1 and FrameConditionViolated unless
  /// |g~(J nu, nu) - p| <= tol and ||tan(J nu)|^2 - q| <= tol.
  InducedHypersurfaceData induce_structure(const Vector& u, double tol) const;
  /// Whether the frame condition holds at u (q must already be 1).
  bool frame_holds(const Vector& u, double tol) const;

  const TensorField11& shape_field() const { return shape_; }
  const TensorField11& phi_field() const { return phi_; }
  const OneForm& eta_field() const { return eta_; }
  const VectorField& xi_field() const { return xi_; }
  const ExprMatrix& tangent_field() const { return tangent_; }
  const ExprVector& normal_field() const { return normal_; }
  /// J along the hypersurface, in ambient coordinates.
  const ExprMatrix& ambient_structure() const { return ambient_J_; }
  /// g~ along the hypersurface.
  const ExprMatrix& ambient_metric() const { return ambient_g_; }

 private:
  void require_q_one() const;

  ChartedManifold ambient_;
  MetallicStructure structure_;
  std::vector<std::string> params_;
  ExprVector embedding_;
  int orientation_;
  ExprMatrix ambient_g_;
  ExprMatrix ambient_J_;
  ExprMatrix tangent_;
  ExprVector normal_;
  ChartedManifold induced_;
  TensorField11 shape_;
  TensorField11 phi_;
  OneForm eta_;
  VectorField xi_;
  Expr normal_component_;
};

/// Gauss residual, self-adjointness of A, normal orthonormality; principal curvature range as values.
VerificationReport verify_shape_operator(const Hypersurface& h, Samples samples, double tol);
/// A^2 = pA + qI for the ambient (p, q).
VerificationReport verify_metallic_shaped(const Hypersurface& h, Samples samples, double tol);
/// Frame condition g(J nu, nu) = p with |tan J nu|^2 = q, then eta(xi) = 1, eta o phi = 0,
/// phi xi = 0, eta = g(., xi) and J xi = nu.
VerificationReport verify_induced_structure(const Hypersurface& h, Samples samples, double tol);
/// Relations for nabla phi, nabla xi, A xi and nabla eta; the ambient structure must be parallel.
VerificationReport verify_structure_equations(const Hypersurface& h, Samples samples, double tol);

struct KillingSample {
  double criterion = 0.0;  // |phi A + A phi - 2pA|
  double equation = 0.0;   // |g(nabla_Y xi, Z) + g(nabla_Z xi, Y)|
  double identity = 0.0;   // |K + g (phi A + A phi - 2pA)|
};
/// Columns of `nabla_xi` are nabla_{e_i} xi.
KillingSample killing_sample(const Matrix& g, const Matrix& shape, const Matrix& phi, const Matrix& nabla_xi,
                             double p);
VerificationReport killing_check(const Hypersurface& h, Samples samples, double tol);

/// beta defaults to the least-squares fit of A = beta phi over the samples.
/// Throws NotKenmotsu when the nabla phi condition fails for that beta.
VerificationReport kenmotsu_hypersurface_check(const Hypersurface& h, Samples samples, double tol,
                                               std::optional<double> beta = std::nullopt);
/// R(X,Y)xi = p((nabla_X A)Y - (nabla_Y A)X) - phi((nabla_X A)Y - (nabla_Y A)X) where the frame exists.
VerificationReport curvature_xi_check(const Hypersurface& h, Samples samples, double tol);

}  // namespace metallic

#endif  // METALLIC_HYPERSURFACE_HPP
