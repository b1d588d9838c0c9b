#include "metallic/hypersurface.hpp"

#include <cmath>
#include <limits>

#include "metallic/errors.hpp"

namespace metallic {

namespace {

Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

Expr inner(const ExprMatrix& g, const ExprVector& x, const ExprVector& y) {
  Expr sum(0.0);
  for (Eigen::Index a = 0; a < g.rows(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b) sum += g(a, b) * x(a) * y(b);
  return sum;
}

ExprVector column(const ExprMatrix& m, Eigen::Index j) {
  ExprVector out(m.rows());
  for (Eigen::Index a = 0; a < m.rows(); ++a) out(a) = m(a, j);
  return out;
}

ExprVector apply(const ExprMatrix& m, const ExprVector& v) {
  ExprVector out(m.rows());
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    Expr sum(0.0);
    for (Eigen::Index b = 0; b < m.cols(); ++b) sum += m(a, b) * v(b);
    out(a) = sum;
  }
  return out;
}

/// Raises the index of the covector `w` with the inverse induced metric.
ExprVector raise(const ExprMatrix& ginv, const ExprVector& w) { return apply(ginv, w); }

Vector center(const std::vector<Interval>& box) {
  Vector c(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i) c(static_cast<Eigen::Index>(i)) = 0.5 * (box[i].lo + box[i].hi);
  return c;
}

/// Symbolic ambient Christoffel symbols gamma[a](b, c) in ambient coordinates.
std::vector<ExprMatrix> symbolic_christoffel(const ChartedManifold& m) {
  const auto N = m.dim();
  const ExprMatrix g = m.metric();
  const ExprMatrix ginv = inverse(g);
  std::vector<ExprMatrix> gamma(static_cast<std::size_t>(N), ExprMatrix(N, N));
  for (Eigen::Index a = 0; a < N; ++a) {
    for (Eigen::Index b = 0; b < N; ++b) {
      for (Eigen::Index c = b; c < N; ++c) {
        Expr sum(0.0);
        for (Eigen::Index d = 0; d < N; ++d) {
          if (ginv(a, d).is_constant(0.0)) continue;
          const Expr first = differentiate(g(d, c), static_cast<std::size_t>(b)) +
                             differentiate(g(d, b), static_cast<std::size_t>(c)) -
                             differentiate(g(b, c), static_cast<std::size_t>(d));
          sum += ginv(a, d) * first;
        }
        gamma[static_cast<std::size_t>(a)](b, c) = gamma[static_cast<std::size_t>(a)](c, b) = Expr(0.5) * sum;
      }
    }
  }
  return gamma;
}

}  // namespace

Hypersurface::Hypersurface(ChartedManifold ambient, MetallicStructure structure, std::vector<std::string> params,
                           std::vector<Interval> box, ExprVector embedding, int orientation)
    : ambient_(std::move(ambient)),
      structure_(std::move(structure)),
      params_(std::move(params)),
      embedding_(std::move(embedding)),
      orientation_(orientation),
      shape_{ExprMatrix()},
      phi_{ExprMatrix()},
      eta_{ExprVector()},
      xi_{ExprVector()} {
  const auto n = dim();
  const auto N = ambient_.dim();
  if (n < 1 || N != n + 1) throw InvalidParameters("a hypersurface needs exactly one parameter fewer than the ambient");
  if (embedding_.size() != N) throw InvalidParameters("embedding needs one expression per ambient coordinate");
  if (static_cast<Eigen::Index>(box.size()) != n) throw InvalidParameters("parameter box does not match parameters");
  if (orientation_ != 1 && orientation_ != -1) throw InvalidParameters("orientation must be +1 or -1");
  if (structure_.J.dim() != N) throw InvalidParameters("ambient structure does not match the ambient dimension");

  std::vector<Expr> x(static_cast<std::size_t>(N));
  for (Eigen::Index a = 0; a < N; ++a) x[static_cast<std::size_t>(a)] = embedding_(a);
  auto along = [&](const Expr& e) { return substitute(e, x); };

  ambient_g_.resize(N, N);
  ambient_J_.resize(N, N);
  for (Eigen::Index a = 0; a < N; ++a) {
    for (Eigen::Index b = 0; b < N; ++b) {
      ambient_g_(a, b) = along(ambient_.metric(a, b));
      ambient_J_(a, b) = along(structure_.J.components(a, b));
    }
  }
  const ExprMatrix ambient_ginv = inverse(ambient_g_);

  tangent_.resize(N, n);
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index i = 0; i < n; ++i) tangent_(a, i) = differentiate(embedding_(a), static_cast<std::size_t>(i));

  ExprMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) g(i, j) = g(j, i) = inner(ambient_g_, column(tangent_, i), column(tangent_, j));
  induced_ = ChartedManifold(params_, std::move(box), g);
  const ExprMatrix ginv = inverse(g);

  // Normal covector from signed maximal minors of the tangent matrix.
  ExprVector covector(N);
  for (Eigen::Index a = 0; a < N; ++a) {
    ExprMatrix minor(n, n);
    for (Eigen::Index r = 0, rr = 0; r < N; ++r) {
      if (r == a) continue;
      for (Eigen::Index i = 0; i < n; ++i) minor(rr, i) = tangent_(r, i);
      ++rr;
    }
    const Expr d = determinant(minor);
    covector(a) = a % 2 == 0 ? d : -d;
  }
  const ExprVector raised = apply(ambient_ginv, covector);
  Expr norm2(0.0);
  for (Eigen::Index a = 0; a < N; ++a) norm2 += covector(a) * raised(a);
  const Expr inv_norm = Expr(1.0) / sqrt(norm2);

  const Vector c = center(induced_.box());
  ExprVector nu(N);
  for (Eigen::Index a = 0; a < N; ++a) nu(a) = raised(a) * inv_norm;
  Vector at_center;
  try {
    at_center = eval(nu, c);
  } catch (const DomainError&) {
    throw DegenerateImmersion("tangent vectors are dependent at the centre of the parameter box");
  }
  double sign = 1.0;
  for (Eigen::Index a = N - 1; a >= 0; --a) {
    if (std::abs(at_center(a)) > 1e-12) {
      sign = at_center(a) > 0 ? 1.0 : -1.0;
      break;
    }
  }
  sign *= orientation_;
  normal_.resize(N);
  for (Eigen::Index a = 0; a < N; ++a) normal_(a) = sign == 1.0 ? nu(a) : -nu(a);

  // Weingarten: A^j_i = -g^{jk} g~(nabla~_i nu, T_k).
  const auto gamma = symbolic_christoffel(ambient_);
  std::vector<ExprMatrix> gamma_along;
  for (const auto& gm : gamma) {
    ExprMatrix s(N, N);
    for (Eigen::Index b = 0; b < N; ++b)
      for (Eigen::Index cc = 0; cc < N; ++cc) s(b, cc) = along(gm(b, cc));
    gamma_along.push_back(std::move(s));
  }
  ExprMatrix w(n, n);  // w(k, i) = g~(nabla~_i nu, T_k)
  for (Eigen::Index i = 0; i < n; ++i) {
    ExprVector dnu(N);
    for (Eigen::Index a = 0; a < N; ++a) {
      Expr v = differentiate(normal_(a), static_cast<std::size_t>(i));
      for (Eigen::Index b = 0; b < N; ++b)
        for (Eigen::Index cc = 0; cc < N; ++cc) {
          const Expr& gabc = gamma_along[static_cast<std::size_t>(a)](b, cc);
          if (!gabc.is_constant(0.0)) v += gabc * tangent_(b, i) * normal_(cc);
        }
      dnu(a) = v;
    }
    for (Eigen::Index k = 0; k < n; ++k) w(k, i) = inner(ambient_g_, dnu, column(tangent_, k));
  }
  shape_.components.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      Expr sum(0.0);
      for (Eigen::Index k = 0; k < n; ++k) sum += ginv(j, k) * w(k, i);
      shape_.components(j, i) = -sum;
    }

  // Induced structure: eta_i = g~(J T_i, nu), phi^j_i = g^{jk} g~(J T_i, T_k), xi = tan(J nu) / q.
  const ExprVector Jnu = apply(ambient_J_, normal_);
  normal_component_ = inner(ambient_g_, Jnu, normal_);
  eta_.components.resize(n);
  phi_.components.resize(n, n);
  ExprVector w_xi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ExprVector JT = apply(ambient_J_, column(tangent_, i));
    eta_.components(i) = inner(ambient_g_, JT, normal_);
    ExprVector wi(n);
    for (Eigen::Index k = 0; k < n; ++k) wi(k) = inner(ambient_g_, JT, column(tangent_, k));
    const ExprVector col = raise(ginv, wi);
    for (Eigen::Index j = 0; j < n; ++j) phi_.components(j, i) = col(j);
    w_xi(i) = inner(ambient_g_, Jnu, column(tangent_, i));
  }
  xi_.components = raise(ginv, w_xi);
  for (Eigen::Index j = 0; j < n; ++j) xi_.components(j) = xi_.components(j) / Expr(static_cast<double>(structure_.q));
}

Vector Hypersurface::position(const Vector& u) const { return eval(embedding_, u); }

Matrix Hypersurface::induced_metric(const Vector& u) const {
  const Matrix g = induced_.metric_at(u);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * std::max(1.0, hi)))
    throw DegenerateImmersion("embedding Jacobian is rank deficient (smallest induced eigenvalue " +
                              format_double(lo) + ")");
  return g;
}

Vector Hypersurface::unit_normal(const Vector& u) const {
  induced_metric(u);
  return eval(normal_, u);
}

Matrix Hypersurface::shape_operator(const Vector& u) const {
  induced_metric(u);
  return shape_.at(u);
}

InducedHypersurfaceData Hypersurface::frame_data(const Vector& u) const {
  InducedHypersurfaceData d;
  d.metric = induced_metric(u);
  ValueEvaluator ev(u);
  auto value = [&](const auto& m) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = ev(m(i, j));
    return out;
  };
  d.tangent = value(tangent_);
  d.normal = value(normal_);
  d.shape = value(shape_.components);
  d.phi = value(phi_.components);
  d.eta = value(eta_.components);
  d.xi = value(xi_.components);
  const Matrix G = value(ambient_g_);
  const Vector Jnu = value(ambient_J_) * d.normal;
  d.normal_component = ev(normal_component_);
  d.tangential_norm2 = Jnu.dot(G * Jnu) - d.normal_component * d.normal_component;
  return d;
}

void Hypersurface::require_q_one() const {
  if (structure_.q != 1)
    throw QNotOne("an induced quadratic metric phi-structure forces q = 1; the ambient structure has q = " +
                  std::to_string(structure_.q));
}

bool Hypersurface::frame_holds(const Vector& u, double tol) const {
  const InducedHypersurfaceData d = frame_data(u);
  return std::abs(d.normal_component - structure_.p) <= tol &&
         std::abs(d.tangential_norm2 - structure_.q) <= tol;
}

InducedHypersurfaceData Hypersurface::induce_structure(const Vector& u, double tol) const {
  require_q_one();
  InducedHypersurfaceData d = frame_data(u);
  if (std::abs(d.normal_component - structure_.p) > tol || std::abs(d.tangential_norm2 - structure_.q) > tol) {
    std::string where = " at u = (";
    for (Eigen::Index i = 0; i < u.size(); ++i) where += (i ? ", " : "") + format_double(u(i));
    where += ")";
    throw FrameConditionViolated(d.normal_component, std::sqrt(std::max(0.0, d.tangential_norm2)), where);
  }
  return d;
}

// ---------------------------------------------------------------------------

VerificationReport verify_shape_operator(const Hypersurface& h, Samples samples, double tol) {
  ResidualAccumulator gauss("shape_operator.gauss", "nabla~_X Y = nabla_X Y + g(AX, Y) nu", tol);
  ResidualAccumulator self_adjoint("shape_operator.self_adjoint", "g(AX, Y) = g(X, AY)", tol);
  ResidualAccumulator normal("shape_operator.normal", "g~(nu, nu) = 1 and g~(nu, dx/du_i) = 0", tol);
  const auto n = h.dim();
  const auto N = n + 1;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& u : samples) {
    h.induced_metric(u);
    JetEvaluator ev(u);
    const PointFrame intrinsic = PointFrame::at(h.induced(), ev, u);
    const PointFrame ambient = PointFrame::at(h.ambient(), h.position(u));
    const Matrix T = field_jet(h.tangent_field(), ev).value;
    const Vector nu = field_jet(h.normal_field(), ev).value;
    const Matrix A = field_jet(h.shape_field().components, ev).value;
    const Matrix& g = intrinsic.metric;
    double rg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        Vector lhs(N);
        for (Eigen::Index a = 0; a < N; ++a) lhs(a) = ev(h.embedding()(a)).hessian(i, j);
        lhs += ambient.contract(T.col(i), T.col(j));
        const Vector tangential = T * intrinsic.contract(unit(n, i), unit(n, j));
        const double second = A.col(i).dot(g.col(j));
        rg = std::max(rg, max_abs(lhs - tangential - second * nu));
      }
    }
    gauss.add(u, rg);
    self_adjoint.add(u, max_abs(A.transpose() * g - g * A));
    double rn = std::abs(ambient.inner(nu, nu) - 1.0);
    for (Eigen::Index i = 0; i < n; ++i) rn = std::max(rn, std::abs(ambient.inner(nu, T.col(i))));
    normal.add(u, rn);
    Eigen::EigenSolver<Matrix> es(A, false);
    for (Eigen::Index k = 0; k < n; ++k) {
      lo = std::min(lo, es.eigenvalues()(k).real());
      hi = std::max(hi, es.eigenvalues()(k).real());
    }
  }
  if (!samples.empty()) {
    gauss.value("principal_curvature_min", lo);
    gauss.value("principal_curvature_max", hi);
  }
  VerificationReport r;
  r.add(gauss.finish());
  r.add(self_adjoint.finish());
  r.add(normal.finish());
  return r;
}

VerificationReport verify_metallic_shaped(const Hypersurface& h, Samples samples, double tol) {
  const int p = h.structure().p, q = h.structure().q;
  ResidualAccumulator acc("metallic_shaped.polynomial", "A^2 = pA + qI with the ambient (p, q)", tol);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& u : samples) {
    const Matrix A = h.shape_operator(u);
    const Matrix id = Matrix::Identity(A.rows(), A.cols());
    acc.add(u, max_abs(A * A - p * A - q * id));
    Eigen::EigenSolver<Matrix> es(A, false);
    for (Eigen::Index k = 0; k < A.rows(); ++k) {
      lo = std::min(lo, es.eigenvalues()(k).real());
      hi = std::max(hi, es.eigenvalues()(k).real());
    }
  }
  if (!samples.empty()) {
    acc.value("eigenvalue_min", lo);
    acc.value("eigenvalue_max", hi);
  }
  acc.value("sigma", metallic_number(p, q));
  VerificationReport r;
  r.add(acc.finish());
  return r;
}

VerificationReport verify_induced_structure(const Hypersurface& h, Samples samples, double tol) {
  if (h.structure().q != 1) h.induce_structure(samples.empty() ? Vector() : samples.front(), tol);
  const double p = h.structure().p, q = h.structure().q;
  ResidualAccumulator normal("frame.normal_component", "g~(J nu, nu) = p", tol);
  ResidualAccumulator tangential("frame.tangential", "|tan(J nu)|^2 = q", tol);
  ResidualAccumulator eq5("frame.quadratic", "phi^2 X = p phi X + q (X - eta(X) xi)", tol);
  ResidualAccumulator eta_xi("frame.eta_xi", "eta(xi) = 1", tol);
  ResidualAccumulator eta_phi("frame.eta_phi", "eta o phi = 0", tol);
  ResidualAccumulator phi_xi("frame.phi_xi", "phi xi = 0", tol);
  ResidualAccumulator dual("frame.eta_dual", "eta(X) = g(X, xi)", tol);
  ResidualAccumulator j_xi("frame.J_xi", "J xi = nu", tol);
  std::size_t infeasible = 0;
  for (const auto& u : samples) {
    const InducedHypersurfaceData d = h.frame_data(u);
    const double rn = std::abs(d.normal_component - p);
    const double rt = std::abs(d.tangential_norm2 - q);
    normal.add(u, rn);
    tangential.add(u, rt);
    if (rn > tol || rt > tol) {
      ++infeasible;
      continue;
    }
    const auto n = d.metric.rows();
    const Matrix id = Matrix::Identity(n, n);
    eq5.add(u, max_abs(d.phi * d.phi - p * d.phi - q * (id - d.xi * d.eta.transpose())));
    eta_xi.add(u, std::abs(d.eta.dot(d.xi) - 1.0));
    eta_phi.add(u, max_abs(d.phi.transpose() * d.eta));
    phi_xi.add(u, max_abs(d.phi * d.xi));
    dual.add(u, max_abs(d.eta - d.metric * d.xi));
    const Matrix J = eval(h.ambient_structure(), u);
    j_xi.add(u, max_abs(J * (d.tangent * d.xi) - d.normal));
  }
  if (infeasible > 0) {
    const std::string note = "frame condition fails at " + std::to_string(infeasible) + " of " +
                             std::to_string(samples.size()) + " samples; structure identities use the rest";
    normal.note(note);
  }
  VerificationReport r;
  for (auto* acc : {&normal, &tangential, &eq5, &eta_xi, &eta_phi, &phi_xi, &dual, &j_xi}) r.add(acc->finish());
  return r;
}

namespace {

/// Induced data plus the covariant derivatives the structure equations need.
struct StructureSample {
  InducedHypersurfaceData d;
  PointFrame frame;
  std::vector<Matrix> nabla_phi;    // [i] = nabla_{e_i} phi
  std::vector<Matrix> nabla_shape;  // [i] = nabla_{e_i} A
  Matrix nabla_xi;                  // column i = nabla_{e_i} xi
  Matrix nabla_eta;                 // (i, j) = (nabla_{e_i} eta) e_j
};

StructureSample structure_sample(const Hypersurface& h, const Vector& u, double tol) {
  StructureSample s{h.induce_structure(u, tol), {}, {}, {}, {}, {}};
  const auto n = h.dim();
  JetEvaluator ev(u);
  s.frame = PointFrame::at(h.induced(), ev, u);
  const MatrixFieldJet phi = field_jet(h.phi_field().components, ev);
  const MatrixFieldJet A = field_jet(h.shape_field().components, ev);
  const VectorFieldJet xi = field_jet(h.xi_field().components, ev);
  const VectorFieldJet eta = field_jet(h.eta_field().components, ev);
  s.nabla_xi.resize(n, n);
  s.nabla_eta.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector e = unit(n, i);
    s.nabla_phi.push_back(covariant_derivative_11(s.frame, phi, e));
    s.nabla_shape.push_back(covariant_derivative_11(s.frame, A, e));
    s.nabla_xi.col(i) = covariant_derivative(s.frame, xi, e);
    for (Eigen::Index j = 0; j < n; ++j) s.nabla_eta(i, j) = covariant_derivative_form(s.frame, eta, e, unit(n, j));
  }
  return s;
}

double ambient_parallel_residual(const Hypersurface& h, const Vector& u) {
  const Vector x = h.position(u);
  JetEvaluator ev(x);
  const PointFrame f = PointFrame::at(h.ambient(), ev, x);
  const MatrixFieldJet J = field_jet(h.structure().J.components, ev);
  double worst = 0.0;
  for (Eigen::Index a = 0; a < f.dim(); ++a)
    worst = std::max(worst, max_abs(covariant_derivative_11(f, J, unit(f.dim(), a))));
  return worst;
}

}  // namespace

VerificationReport verify_structure_equations(const Hypersurface& h, Samples samples, double tol) {
  const double p = h.structure().p;
  ResidualAccumulator parallel("structure.ambient_parallel", "nabla~ J = 0 along the hypersurface", tol);
  ResidualAccumulator eq8("structure.nabla_phi", "(nabla_X phi) Y = eta(Y) AX + g(AX, Y) xi", tol);
  ResidualAccumulator eq9a("structure.nabla_xi", "nabla_X xi = pAX - phi AX", tol);
  ResidualAccumulator a_xi("structure.A_xi", "A xi = 0", tol);
  ResidualAccumulator eq9("structure.nabla_eta", "(nabla_X eta) Y = p g(AX, Y) - g(AX, phi Y)", tol);
  const auto n = h.dim();
  for (const auto& u : samples) {
    parallel.add(u, ambient_parallel_residual(h, u));
    const StructureSample s = structure_sample(h, u, tol);
    const Matrix& g = s.d.metric;
    const Matrix& A = s.d.shape;
    const Matrix& phi = s.d.phi;
    double r8 = 0.0, r9 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector AX = A.col(i);
      for (Eigen::Index j = 0; j < n; ++j) {
        const Vector rhs = s.d.eta(j) * AX + AX.dot(g.col(j)) * s.d.xi;
        r8 = std::max(r8, max_abs(s.nabla_phi[static_cast<std::size_t>(i)].col(j) - rhs));
        const double rhs9 = p * AX.dot(g.col(j)) - AX.dot(g * phi.col(j));
        r9 = std::max(r9, std::abs(s.nabla_eta(i, j) - rhs9));
      }
    }
    eq8.add(u, r8);
    eq9a.add(u, max_abs(s.nabla_xi - (p * A - phi * A)));
    a_xi.add(u, max_abs(A * s.d.xi));
    eq9.add(u, r9);
  }
  VerificationReport r;
  for (auto* acc : {&parallel, &eq8, &eq9a, &a_xi, &eq9}) r.add(acc->finish());
  return r;
}

KillingSample killing_sample(const Matrix& g, const Matrix& shape, const Matrix& phi, const Matrix& nabla_xi,
                             double p) {
  const Matrix C = phi * shape + shape * phi - 2.0 * p * shape;
  const Matrix M = nabla_xi.transpose() * g;  // M(i, j) = g(nabla_i xi, e_j)
  const Matrix K = M + M.transpose();
  return {max_abs(C), max_abs(K), max_abs(K + g * C)};
}

VerificationReport killing_check(const Hypersurface& h, Samples samples, double tol) {
  const double p = h.structure().p;
  ResidualAccumulator identity("killing.identity",
                               "g(nabla_Y xi, Z) + g(nabla_Z xi, Y) = -g((phi A + A phi - 2pA) Y, Z)", tol);
  ResidualAccumulator verdicts("killing.verdicts",
                               "xi Killing <=> phi A + A phi = 2pA; residual counts samples where the verdicts differ",
                               0.0);
  double criterion_max = 0.0, equation_max = 0.0;
  std::size_t killing = 0;
  for (const auto& u : samples) {
    const StructureSample s = structure_sample(h, u, tol);
    const KillingSample k = killing_sample(s.d.metric, s.d.shape, s.d.phi, s.nabla_xi, p);
    identity.add(u, k.identity);
    const bool by_criterion = k.criterion <= tol;
    const bool by_equation = k.equation <= tol;
    verdicts.add(u, by_criterion == by_equation ? 0.0 : 1.0);
    if (by_equation) ++killing;
    criterion_max = std::max(criterion_max, k.criterion);
    equation_max = std::max(equation_max, k.equation);
  }
  verdicts.value("criterion_max", criterion_max);
  verdicts.value("equation_max", equation_max);
  verdicts.value("killing_samples", static_cast<double>(killing));
  verdicts.note(killing == samples.size() ? "xi is Killing at every sample"
                                          : "xi is not Killing at " + std::to_string(samples.size() - killing) +
                                                " of " + std::to_string(samples.size()) + " samples");
  VerificationReport r;
  r.add(identity.finish());
  r.add(verdicts.finish());
  return r;
}

VerificationReport kenmotsu_hypersurface_check(const Hypersurface& h, Samples samples, double tol,
                                               std::optional<double> beta) {
  const double p = h.structure().p;
  std::vector<StructureSample> data;
  data.reserve(samples.size());
  for (const auto& u : samples) data.push_back(structure_sample(h, u, tol));

  std::string beta_note;
  if (!beta) {
    double num = 0.0, den = 0.0;
    for (const auto& s : data) {
      num += (s.d.shape.array() * s.d.phi.array()).sum();
      den += s.d.phi.squaredNorm();
    }
    beta = den > 0.0 ? num / den : 0.0;
    beta_note = den > 0.0 ? "beta fitted by least squares to A = beta phi"
                          : "phi vanishes identically; beta taken as 0";
  }
  const double b = *beta;
  const auto n = h.dim();

  ResidualAccumulator k1("kenmotsu_hypersurface.nabla_phi", "(nabla_X phi) Y = beta (g(X, phi Y) xi + eta(Y) phi X)", tol);
  ResidualAccumulator commute("kenmotsu_hypersurface.commute", "phi A = A phi", tol);
  ResidualAccumulator mert("kenmotsu_hypersurface.A_beta_phi", "A = beta phi", tol);
  ResidualAccumulator square("kenmotsu_hypersurface.A_squared", "A^2 = beta p A + beta^2 (I - eta (x) xi)", tol);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& s = data[k];
    const Vector& u = samples[k];
    double r1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Vector rhs = (s.d.metric * s.d.phi)(i, j) * s.d.xi + s.d.eta(j) * s.d.phi.col(i);
        r1 = std::max(r1, max_abs(s.nabla_phi[static_cast<std::size_t>(i)].col(j) - b * rhs));
      }
    k1.add(u, r1);
    const Matrix& A = s.d.shape;
    const Matrix id = Matrix::Identity(n, n);
    commute.add(u, max_abs(s.d.phi * A - A * s.d.phi));
    mert.add(u, max_abs(A - b * s.d.phi));
    square.add(u, max_abs(A * A - b * p * A - b * b * (id - s.d.xi * s.d.eta.transpose())));
  }
  if (k1.max() > tol)
    throw NotKenmotsu("Kenmotsu condition fails for beta = " + format_double(b) + ": max residual " + format_double(k1.max()));
  k1.value("beta", b);
  if (!beta_note.empty()) k1.note(beta_note);

  VerificationReport r;
  r.add(k1.finish());
  r.add(commute.finish());
  r.add(mert.finish());
  r.add(square.finish());
  if (std::abs(b) <= tol) {
    ResidualAccumulator geodesic("kenmotsu_hypersurface.totally_geodesic",
                                 "beta = 0 (cosymplectic) forces A = 0", tol);
    for (std::size_t k = 0; k < data.size(); ++k) geodesic.add(samples[k], max_abs(data[k].d.shape));
    geodesic.note("cosymplectic case: the totally geodesic corollary applies");
    r.add(geodesic.finish());
  }
  return r;
}

VerificationReport curvature_xi_check(const Hypersurface& h, Samples samples, double tol) {
  if (h.structure().q != 1 && !samples.empty()) h.induce_structure(samples.front(), tol);
  const double p = h.structure().p;
  ResidualAccumulator identity("curvature_xi.identity",
                               "R(X,Y) xi = p((nabla_X A)Y - (nabla_Y A)X) - phi((nabla_X A)Y - (nabla_Y A)X)", tol);
  ResidualAccumulator corollary("curvature_xi.parallel_corollary", "nabla A = 0 implies R(X,Y) xi = 0", tol);
  const auto n = h.dim();
  std::size_t infeasible = 0;
  double worst_normal = 0.0;
  for (const auto& u : samples) {
    if (!h.frame_holds(u, tol)) {
      ++infeasible;
      worst_normal = std::max(worst_normal, std::abs(h.frame_data(u).normal_component - p));
      continue;
    }
    const StructureSample s = structure_sample(h, u, tol);
    double ri = 0.0, rr = 0.0, nabla_a = 0.0;
    for (const auto& D : s.nabla_shape) nabla_a = std::max(nabla_a, max_abs(D));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Vector R = riemann(s.frame, unit(n, i), unit(n, j), s.d.xi);
        const Vector C = s.nabla_shape[static_cast<std::size_t>(i)].col(j) -
                         s.nabla_shape[static_cast<std::size_t>(j)].col(i);
        ri = std::max(ri, max_abs(R - (p * C - s.d.phi * C)));
        rr = std::max(rr, max_abs(R));
      }
    }
    identity.add(u, ri);
    if (nabla_a <= tol) corollary.add(u, rr);
  }
  identity.value("frame_feasible_samples", static_cast<double>(samples.size() - infeasible));
  if (infeasible > 0)
    identity.note("frame condition fails at " + std::to_string(infeasible) + " of " + std::to_string(samples.size()) +
                  " samples (max |g~(J nu, nu) - p| = " + format_double(worst_normal) + "); those samples are skipped");
  if (infeasible == samples.size() && !samples.empty())
    identity.note("no sample admits the induced frame, so the identity holds vacuously");
  VerificationReport r;
  r.add(identity.finish());
  if (corollary.count() > 0) {
    r.add(corollary.finish());
  } else {
    r.notes.push_back("second fundamental form is not parallel at any frame sample; corollary not exercised");
  }
  return r;
}

}  // namespace metallic
