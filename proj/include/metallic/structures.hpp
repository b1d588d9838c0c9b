#ifndef METALLIC_STRUCTURES_HPP
#define METALLIC_STRUCTURES_HPP

#include <optional>
#include <span>

#include "metallic/report.hpp"
#include "metallic/tensor.hpp"

namespace metallic {

/// Positive root of x^2 - p x - q.
double metallic_number(int p, int q);
/// The other root, (p - sqrt(p^2 + 4q)) / 2.
double metallic_conjugate(int p, int q);

/// J with J^2 = pJ + qI for positive integers p, q.
struct MetallicStructure {
  int p = 1;
  int q = 1;
  TensorField11 J;

  MetallicStructure(int p, int q, TensorField11 J);
  double sigma() const { return metallic_number(p, q); }
  double sigma_bar() const { return metallic_conjugate(p, q); }
};

/// F with F^2 = I.
struct AlmostProductStructure {
  TensorField11 F;
};

enum class Sign { plus, minus };

/// F = +-(2J - pI) / (2 sigma - p).
AlmostProductStructure product_from_metallic(const MetallicStructure& s, Sign sign);
/// J = +-((2 sigma - p) / 2) F + (p / 2) I.
MetallicStructure metallic_from_product(const AlmostProductStructure& f, int p, int q, Sign sign);

/// (phi, eta, xi) with phi^2 = a phi + b (I - eta (x) xi) and phi xi = 0.
struct QuadraticPhiStructure {
  double a = 0.0;
  double b = 1.0;
  TensorField11 phi;
  OneForm eta;
  VectorField xi;

  QuadraticPhiStructure(double a, double b, TensorField11 phi, OneForm eta, VectorField xi);
  Eigen::Index dim() const { return phi.dim(); }
  double discriminant() const { return a * a + 4.0 * b; }
};

struct AssociatedMetricConstants {
  double c_alpha = 1.0;
  double c_beta = 1.0;
  double c_gamma = 0.0;
  double c_delta = 1.0;

  /// Throws InvalidParameters unless c_beta b = a c_gamma / 2 + c_alpha and c_alpha + c_delta != 0.
  void validate(double a, double b) const;
};

struct SpectralProjectors {
  Matrix plus;
  Matrix minus;
  Matrix zero;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
};

/// Eigen-projectors of phi by Lagrange interpolation at lambda_+, lambda_-, 0.
SpectralProjectors spectral_projectors(const QuadraticPhiStructure& s, const Vector& p);

/// g = [a h + b h(phi.,phi.) + (c/2)(h(phi.,.) + h(.,phi.)) + d eta(x)eta] / (a + d)
/// with h = h~(phi^2 ., phi^2 .) + eta (x) eta.
Matrix associated_metric(const Matrix& h_tilde, const QuadraticPhiStructure& s, const AssociatedMetricConstants& c,
                         const Vector& p);

using Samples = std::span<const Vector>;

VerificationReport verify_metallic(const ChartedManifold& m, const MetallicStructure& s, Samples samples, double tol);
VerificationReport verify_locally_metallic(const ChartedManifold& m, const MetallicStructure& s, Samples samples,
                                           double tol);
VerificationReport verify_integrable(const ChartedManifold& m, const MetallicStructure& s, Samples samples, double tol);
VerificationReport verify_product_roundtrip(const MetallicStructure& s, Samples samples, double tol);
VerificationReport verify_quadratic_phi(const ChartedManifold& m, const QuadraticPhiStructure& s, Samples samples,
                                        double tol, bool with_metric = true);
VerificationReport verify_spectral(const QuadraticPhiStructure& s, Samples samples, double tol);
/// h_tilde defaults to the metric of `m`.
VerificationReport verify_associated_metric(const ChartedManifold& m, const QuadraticPhiStructure& s,
                                            const AssociatedMetricConstants& c, Samples samples, double tol,
                                            const std::optional<ExprMatrix>& h_tilde = std::nullopt);

/// Metric positive definite, nabla g = 0, antisymmetry of R and the first Bianchi identity.
VerificationReport verify_levi_civita(const ChartedManifold& m, Samples samples, double tol);

/// Max over coordinate pairs of |N_K(d_i, d_j)| at p.
double nijenhuis_residual(const TensorField11& k, const Vector& p);

}  // namespace metallic

#endif  // METALLIC_STRUCTURES_HPP
