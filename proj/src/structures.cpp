#include "metallic/structures.hpp"

#include <cmath>

#include "metallic/errors.hpp"

namespace metallic {

namespace {

void require_positive(int p, int q) {
  if (p < 1 || q < 1)
    throw InvalidParameters("metallic parameters must be positive integers (p=" + std::to_string(p) +
                            ", q=" + std::to_string(q) + ")");
}

TensorField11 affine(const TensorField11& k, double scale, double shift) {
  const auto n = k.dim();
  TensorField11 out{ExprMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out.components(i, j) = Expr(scale) * k.components(i, j) + Expr(i == j ? shift : 0.0);
  return out;
}

Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

}  // namespace

double metallic_number(int p, int q) {
  require_positive(p, q);
  return (p + std::sqrt(static_cast<double>(p) * p + 4.0 * q)) / 2.0;
}

double metallic_conjugate(int p, int q) {
  require_positive(p, q);
  return (p - std::sqrt(static_cast<double>(p) * p + 4.0 * q)) / 2.0;
}

MetallicStructure::MetallicStructure(int p_, int q_, TensorField11 J_) : p(p_), q(q_), J(std::move(J_)) {
  require_positive(p, q);
  if (J.components.rows() != J.components.cols()) throw InvalidParameters("J must be square");
}

AlmostProductStructure product_from_metallic(const MetallicStructure& s, Sign sign) {
  const double width = 2.0 * s.sigma() - s.p;  // sqrt(p^2 + 4q)
  const double sgn = sign == Sign::plus ? 1.0 : -1.0;
  return {affine(s.J, sgn * 2.0 / width, -sgn * s.p / width)};
}

MetallicStructure metallic_from_product(const AlmostProductStructure& f, int p, int q, Sign sign) {
  const double width = 2.0 * metallic_number(p, q) - p;
  const double sgn = sign == Sign::plus ? 1.0 : -1.0;
  return MetallicStructure(p, q, affine(f.F, sgn * width / 2.0, p / 2.0));
}

QuadraticPhiStructure::QuadraticPhiStructure(double a_, double b_, TensorField11 phi_, OneForm eta_, VectorField xi_)
    : a(a_), b(b_), phi(std::move(phi_)), eta(std::move(eta_)), xi(std::move(xi_)) {
  if (b == 0.0) throw InvalidParameters("b must be non-zero");
  if (discriminant() == 0.0) throw InvalidParameters("a^2 + 4b must be non-zero");
  const auto n = phi.dim();
  if (phi.components.cols() != n || eta.dim() != n || xi.dim() != n)
    throw InvalidParameters("phi, eta and xi dimensions disagree");
}

void AssociatedMetricConstants::validate(double a, double b) const {
  const double lhs = c_beta * b;
  const double rhs = a * c_gamma / 2.0 + c_alpha;
  if (std::abs(lhs - rhs) > 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}))
    throw InvalidParameters("associated metric constants violate c_beta*b = a*c_gamma/2 + c_alpha (" +
                            format_double(lhs) + " != " + format_double(rhs) + ")");
  if (c_alpha + c_delta == 0.0) throw InvalidParameters("associated metric constants need c_alpha + c_delta != 0");
}

SpectralProjectors spectral_projectors(const QuadraticPhiStructure& s, const Vector& p) {
  const double disc = s.discriminant();
  if (disc < 0.0) throw ComplexSpectrum("a^2 + 4b < 0: phi has no real eigen-splitting");
  const double root = std::sqrt(disc);
  SpectralProjectors out;
  out.lambda_plus = (s.a + root) / 2.0;
  out.lambda_minus = (s.a - root) / 2.0;
  const Matrix phi = s.phi.at(p);
  const auto n = phi.rows();
  const Matrix id = Matrix::Identity(n, n);
  const double lp = out.lambda_plus;
  const double lm = out.lambda_minus;
  out.plus = phi * (phi - lm * id) / (lp * (lp - lm));
  out.minus = phi * (phi - lp * id) / (lm * (lm - lp));
  out.zero = s.xi.at(p) * s.eta.at(p).transpose();
  return out;
}

Matrix associated_metric(const Matrix& h_tilde, const QuadraticPhiStructure& s, const AssociatedMetricConstants& c,
                         const Vector& p) {
  c.validate(s.a, s.b);
  const Matrix phi = s.phi.at(p);
  const Vector eta = s.eta.at(p);
  const Matrix phi2 = phi * phi;
  const Matrix ee = eta * eta.transpose();
  const Matrix h = phi2.transpose() * h_tilde * phi2 + ee;
  const Matrix g = c.c_alpha * h + c.c_beta * phi.transpose() * h * phi +
                   (c.c_gamma / 2.0) * (phi.transpose() * h + h * phi) + c.c_delta * ee;
  return g / (c.c_alpha + c.c_delta);
}

// ---------------------------------------------------------------------------

namespace {

std::string sigma_note(int p, int q) {
  const double alt = (p + std::sqrt(static_cast<double>(p) * p + 4.0 * p * q)) / 2.0;
  const double sigma = metallic_number(p, q);
  if (alt == sigma) return {};
  return "sigma_{p,q} = (p + sqrt(p^2 + 4q))/2 = " + format_double(sigma) +
         "; the variant (p + sqrt(p^2 + 4pq))/2 = " + format_double(alt) + " is not a root of x^2 = px + q";
}

double spectrum_distance(const Matrix& j, double sigma, double sigma_bar) {
  Eigen::EigenSolver<Matrix> es(j, false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> l = es.eigenvalues()(i);
    worst = std::max(worst, std::min(std::abs(l - sigma), std::abs(l - sigma_bar)));
  }
  return worst;
}

}  // namespace

VerificationReport verify_metallic(const ChartedManifold& m, const MetallicStructure& s, Samples samples, double tol) {
  ResidualAccumulator m1("metallic.polynomial", "J^2 - pJ - qI = 0", tol);
  ResidualAccumulator m2("metallic.compatible", "g(JX,Y) = g(X,JY)", tol);
  ResidualAccumulator m3("metallic.metric_identity", "g(JX,JY) = p g(JX,Y) + q g(X,Y)", tol);
  ResidualAccumulator spectrum("metallic.spectrum", "eigenvalues of J lie in {sigma, sigma_bar}", std::max(tol, 1e-8));
  const double p = s.p, q = s.q;
  for (const auto& x : samples) {
    const Matrix J = s.J.at(x);
    const Matrix g = m.metric_at(x);
    const Matrix id = Matrix::Identity(J.rows(), J.cols());
    m1.add(x, max_abs(J * J - p * J - q * id));
    m2.add(x, max_abs(J.transpose() * g - g * J));
    m3.add(x, max_abs(J.transpose() * g * J - p * J.transpose() * g - q * g));
    spectrum.add(x, spectrum_distance(J, s.sigma(), s.sigma_bar()));
  }
  spectrum.value("sigma", s.sigma());
  spectrum.value("sigma_bar", s.sigma_bar());
  VerificationReport r;
  r.add(m1.finish());
  r.add(m2.finish());
  r.add(m3.finish());
  r.add(spectrum.finish());
  if (auto note = sigma_note(s.p, s.q); !note.empty()) r.notes.push_back(note);
  return r;
}

double nijenhuis_residual(const TensorField11& k, const Vector& p) {
  const auto n = k.dim();
  JetEvaluator ev(p);
  const MatrixFieldJet kj = field_jet(k.components, ev);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const VectorFieldJet x{unit(n, i), Matrix::Zero(n, n)};
      const VectorFieldJet y{unit(n, j), Matrix::Zero(n, n)};
      worst = std::max(worst, max_abs(nijenhuis(kj, x, y)));
    }
  }
  return worst;
}

VerificationReport verify_integrable(const ChartedManifold& /*m*/, const MetallicStructure& s, Samples samples,
                                     double tol) {
  ResidualAccumulator acc("integrable.nijenhuis", "N_J(d_i, d_j) = 0", tol);
  for (const auto& x : samples) acc.add(x, nijenhuis_residual(s.J, x));
  VerificationReport r;
  r.add(acc.finish());
  return r;
}

VerificationReport verify_locally_metallic(const ChartedManifold& m, const MetallicStructure& s, Samples samples,
                                           double tol) {
  ResidualAccumulator parallel("locally_metallic.parallel", "(nabla_X J) Y = 0", tol);
  ResidualAccumulator integrable("locally_metallic.integrable",
                                 "N_J = 0 whenever nabla J = 0 (locally metallic implies integrable)", tol);
  const auto n = m.dim();
  for (const auto& x : samples) {
    JetEvaluator ev(x);
    const PointFrame f = PointFrame::at(m, ev, x);
    const MatrixFieldJet J = field_jet(s.J.components, ev);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, max_abs(covariant_derivative_11(f, J, unit(n, i))));
    parallel.add(x, worst);
    integrable.add(x, nijenhuis_residual(s.J, x));
  }
  CheckResult par = parallel.finish();
  CheckResult integ = integrable.finish();
  // The implication only fails when J is parallel but not integrable.
  integ.pass = !(par.pass && integ.max_residual > tol);
  if (!par.pass) integ.notes.push_back("J is not parallel; integrability is not implied");
  VerificationReport r;
  r.add(std::move(par));
  r.add(std::move(integ));
  return r;
}

VerificationReport verify_product_roundtrip(const MetallicStructure& s, Samples samples, double tol) {
  const AlmostProductStructure fp = product_from_metallic(s, Sign::plus);
  const AlmostProductStructure fm = product_from_metallic(s, Sign::minus);
  const MetallicStructure back = metallic_from_product(fp, s.p, s.q, Sign::plus);
  const MetallicStructure back_minus = metallic_from_product(fm, s.p, s.q, Sign::minus);
  ResidualAccumulator involution("product.involution", "F_+^2 = I and F_-^2 = I", tol);
  ResidualAccumulator sign("product.sign_symmetry", "F_- = -F_+", tol);
  ResidualAccumulator roundtrip("product.roundtrip", "J_+(F_+(J)) = J and J_-(F_-(J)) = J", tol);
  for (const auto& x : samples) {
    const Matrix Fp = fp.F.at(x);
    const Matrix Fm = fm.F.at(x);
    const Matrix id = Matrix::Identity(Fp.rows(), Fp.cols());
    involution.add(x, std::max(max_abs(Fp * Fp - id), max_abs(Fm * Fm - id)));
    sign.add(x, max_abs(Fm + Fp));
    const Matrix J = s.J.at(x);
    roundtrip.add(x, std::max(max_abs(back.J.at(x) - J), max_abs(back_minus.J.at(x) - J)));
  }
  VerificationReport r;
  r.add(involution.finish());
  r.add(sign.finish());
  r.add(roundtrip.finish());
  return r;
}

VerificationReport verify_quadratic_phi(const ChartedManifold& m, const QuadraticPhiStructure& s, Samples samples,
                                        double tol, bool with_metric) {
  ResidualAccumulator dk1("quadratic.polynomial", "phi^2 = a phi + b (I - eta (x) xi)", tol);
  ResidualAccumulator phi_xi("quadratic.phi_xi", "phi xi = 0", tol);
  ResidualAccumulator eta_xi("quadratic.eta_xi", "eta(xi) = 1", tol);
  ResidualAccumulator eta_phi("quadratic.eta_phi", "eta o phi = 0", tol);
  ResidualAccumulator rank("quadratic.rank", "rank phi = dim - 1 (singular values, 1e-8 relative cut)", 0.0);
  ResidualAccumulator cr("quadratic.compatible", "g(phi X, Y) = g(X, phi Y)", tol);
  ResidualAccumulator mr("quadratic.metric_identity",
                         "g(phi X, phi Y) = a g(phi X, Y) + b (g(X,Y) - eta(X) eta(Y))", tol);
  const auto n = s.dim();
  for (const auto& x : samples) {
    const Matrix phi = s.phi.at(x);
    const Vector eta = s.eta.at(x);
    const Vector xi = s.xi.at(x);
    const Matrix id = Matrix::Identity(n, n);
    dk1.add(x, max_abs(phi * phi - s.a * phi - s.b * (id - xi * eta.transpose())));
    phi_xi.add(x, max_abs(Vector(phi * xi)));
    eta_xi.add(x, std::abs(eta.dot(xi) - 1.0));
    eta_phi.add(x, max_abs(Vector(phi.transpose() * eta)));

    Eigen::JacobiSVD<Matrix> svd(phi);
    const Vector sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Eigen::Index numeric_rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (top > 0.0 && sv(i) > 1e-8 * top) ++numeric_rank;
    rank.add(x, std::abs(static_cast<double>(numeric_rank - (n - 1))));

    if (with_metric) {
      const Matrix g = m.metric_at(x);
      cr.add(x, max_abs(phi.transpose() * g - g * phi));
      mr.add(x, max_abs(phi.transpose() * g * phi - s.a * phi.transpose() * g -
                        s.b * (g - eta * eta.transpose())));
    }
  }
  VerificationReport r;
  r.add(dk1.finish());
  r.add(phi_xi.finish());
  r.add(eta_xi.finish());
  r.add(eta_phi.finish());
  r.add(rank.finish());
  if (with_metric) {
    r.add(cr.finish());
    r.add(mr.finish());
  }
  return r;
}

VerificationReport verify_spectral(const QuadraticPhiStructure& s, Samples samples, double tol) {
  ResidualAccumulator idem("spectral.idempotent", "P^2 = P for P_+, P_-, P_0", tol);
  ResidualAccumulator orth("spectral.orthogonal", "P_a P_b = 0 for a != b", tol);
  ResidualAccumulator complete("spectral.complete", "P_+ + P_- + P_0 = I", tol);
  ResidualAccumulator eigen("spectral.eigen", "phi P_+ = l+ P_+, phi P_- = l- P_-, phi P_0 = 0", tol);
  ResidualAccumulator traces("spectral.traces", "projector traces are integers, constant over the samples", tol);
  std::optional<Eigen::Vector3d> first;
  for (const auto& x : samples) {
    const SpectralProjectors P = spectral_projectors(s, x);
    const Matrix phi = s.phi.at(x);
    const Matrix id = Matrix::Identity(phi.rows(), phi.cols());
    const Matrix* all[] = {&P.plus, &P.minus, &P.zero};
    double wi = 0.0, wo = 0.0;
    for (int a = 0; a < 3; ++a) {
      wi = std::max(wi, max_abs(Matrix(*all[a] * *all[a] - *all[a])));
      for (int b = 0; b < 3; ++b)
        if (a != b) wo = std::max(wo, max_abs(Matrix(*all[a] * *all[b])));
    }
    idem.add(x, wi);
    orth.add(x, wo);
    complete.add(x, max_abs(Matrix(P.plus + P.minus + P.zero - id)));
    eigen.add(x, std::max({max_abs(Matrix(phi * P.plus - P.lambda_plus * P.plus)),
                           max_abs(Matrix(phi * P.minus - P.lambda_minus * P.minus)),
                           max_abs(Matrix(phi * P.zero))}));
    const Eigen::Vector3d t(P.plus.trace(), P.minus.trace(), P.zero.trace());
    if (!first) first = t;
    const Eigen::Vector3d rounded = t.array().round();
    traces.add(x, std::max((t - rounded).cwiseAbs().maxCoeff(), (t - *first).cwiseAbs().maxCoeff()));
    eigen.value("lambda_plus", P.lambda_plus);
    eigen.value("lambda_minus", P.lambda_minus);
  }
  if (first) {
    traces.value("trace_plus", (*first)(0));
    traces.value("trace_minus", (*first)(1));
    traces.value("trace_zero", (*first)(2));
  }
  VerificationReport r;
  r.add(idem.finish());
  r.add(orth.finish());
  r.add(complete.finish());
  r.add(eigen.finish());
  r.add(traces.finish());
  return r;
}

VerificationReport verify_associated_metric(const ChartedManifold& m, const QuadraticPhiStructure& s,
                                            const AssociatedMetricConstants& c, Samples samples, double tol,
                                            const std::optional<ExprMatrix>& h_tilde) {
  c.validate(s.a, s.b);
  ResidualAccumulator sym("associated.symmetric", "g = g^T", tol);
  ResidualAccumulator pd("associated.positive_definite",
                         "smallest eigenvalue of g above 1e-10 max(1, largest); residual is the shortfall", 0.0);
  ResidualAccumulator dual("associated.xi_dual", "g(X, xi) = eta(X)", tol);
  ResidualAccumulator unit_xi("associated.unit_xi", "g(xi, xi) = 1", tol);
  ResidualAccumulator cr("associated.compatible", "g(phi X, Y) = g(X, phi Y)", tol);
  ResidualAccumulator mr("associated.metric_identity",
                         "g(phi X, phi Y) = a g(phi X, Y) + b (g(X,Y) - eta(X) eta(Y))", tol);
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) {
    const Matrix ht = h_tilde ? eval(*h_tilde, x) : m.metric_at(x);
    const Matrix g = associated_metric(ht, s, c, x);
    const Matrix phi = s.phi.at(x);
    const Vector eta = s.eta.at(x);
    const Vector xi = s.xi.at(x);
    sym.add(x, max_abs(Matrix(g - g.transpose())));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double threshold = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());
    min_eig = std::min(min_eig, lo);
    pd.add(x, lo > threshold ? 0.0 : threshold - lo);
    dual.add(x, max_abs(Vector(g * xi - eta)));
    unit_xi.add(x, std::abs(xi.dot(g * xi) - 1.0));
    cr.add(x, max_abs(Matrix(phi.transpose() * g - g * phi)));
    mr.add(x, max_abs(Matrix(phi.transpose() * g * phi - s.a * phi.transpose() * g -
                             s.b * (g - eta * eta.transpose()))));
  }
  pd.value("min_eigenvalue", min_eig);
  VerificationReport r;
  r.add(sym.finish());
  r.add(pd.finish());
  r.add(dual.finish());
  r.add(unit_xi.finish());
  r.add(cr.finish());
  r.add(mr.finish());
  return r;
}

VerificationReport verify_levi_civita(const ChartedManifold& m, Samples samples, double tol) {
  ResidualAccumulator pd("levi_civita.positive_definite",
                         "smallest metric eigenvalue above 1e-10; residual is the shortfall", 0.0);
  ResidualAccumulator parallel("levi_civita.metric_parallel", "nabla g = 0", tol);
  ResidualAccumulator antisym("levi_civita.antisymmetry", "R(X,Y)Z = -R(Y,X)Z", tol);
  ResidualAccumulator bianchi("levi_civita.bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", tol);
  const auto n = m.dim();
  for (const auto& x : samples) {
    const PointFrame f = PointFrame::at(m, x);
    const double lo = min_eigenvalue(f.metric);
    pd.add(x, lo > 1e-10 ? 0.0 : 1e-10 - lo);
    double rp = 0.0, ra = 0.0, rb = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      rp = std::max(rp, max_abs(covariant_derivative_metric(f, unit(n, i))));
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
          const Vector X = unit(n, i), Y = unit(n, j), Z = unit(n, k);
          ra = std::max(ra, max_abs(riemann(f, X, Y, Z) + riemann(f, Y, X, Z)));
          rb = std::max(rb, max_abs(riemann(f, X, Y, Z) + riemann(f, Y, Z, X) + riemann(f, Z, X, Y)));
        }
    }
    parallel.add(x, rp);
    antisym.add(x, ra);
    bianchi.add(x, rb);
  }
  VerificationReport r;
  r.add(pd.finish());
  r.add(parallel.finish());
  r.add(antisym.finish());
  r.add(bianchi.finish());
  return r;
}

}  // namespace metallic
