#include "metallic/warped.hpp"

#include <cmath>
#include <numeric>

#include "metallic/errors.hpp"

namespace metallic {

std::vector<std::string> WarpedProduct::coords() const {
  std::vector<std::string> out{t_name};
  out.insert(out.end(), fiber.coords().begin(), fiber.coords().end());
  return out;
}

Expr WarpedProduct::lift(const Expr& fiber_expr) const {
  std::vector<std::size_t> shift(static_cast<std::size_t>(fiber.dim()));
  std::iota(shift.begin(), shift.end(), std::size_t{1});
  const auto names = coords();
  return remap_variables(fiber_expr, shift, names);
}

Expr WarpedProduct::warping() const {
  const std::size_t zero[] = {0};
  const auto names = coords();
  return remap_variables(f, zero, names);
}

Vector WarpedProduct::fiber_point(const Vector& p) const { return p.tail(p.size() - 1); }

ChartedManifold warped_metric(const WarpedProduct& wp) {
  constexpr int kGrid = 256;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = wp.base.lo + (wp.base.hi - wp.base.lo) * i / kGrid;
    double value = 0.0;
    try {
      value = eval(wp.f, Vector::Constant(1, t));
    } catch (const DomainError& e) {
      throw NonPositiveWarping("warping function undefined at t = " + format_double(t) + ": " + e.what());
    }
    if (!(value > 0.0))
      throw NonPositiveWarping("warping function f(" + format_double(t) + ") = " + format_double(value) +
                               " is not positive");
  }
  const auto n = wp.fiber.dim() + 1;
  const Expr f = wp.warping();
  const Expr f2 = f * f;
  ExprMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Expr(i == 0 && j == 0 ? 1.0 : 0.0);
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 1; j < n; ++j) g(i, j) = f2 * wp.lift(wp.fiber.metric(i - 1, j - 1));
  std::vector<Interval> box{wp.base};
  box.insert(box.end(), wp.fiber.box().begin(), wp.fiber.box().end());
  return ChartedManifold(wp.coords(), std::move(box), g);
}

InducedQuadraticStructure induce_phi(const WarpedProduct& wp) {
  if (!wp.fiber_structure) throw MissingFiberStructure("the fiber carries no metallic structure");
  const auto& J = *wp.fiber_structure;
  const auto n = wp.fiber.dim() + 1;
  if (J.J.dim() != wp.fiber.dim()) throw InvalidParameters("fiber structure does not match the fiber dimension");
  TensorField11 phi{ExprMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      phi.components(i, j) = (i == 0 || j == 0) ? Expr(0.0) : wp.lift(J.J.components(i - 1, j - 1));
  VectorField xi = VectorField::coordinate(n, 0);
  OneForm eta{xi.components};
  return {warped_metric(wp), QuadraticPhiStructure(J.p, J.q, std::move(phi), std::move(eta), std::move(xi))};
}

namespace {

Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

/// Kenmotsu right-hand side without beta: g(X, phi Y) xi + eta(Y) phi X for X = e_i, Y = e_j.
Vector k1_shape(const Matrix& g, const Matrix& phi, const Vector& eta, const Vector& xi, Eigen::Index i,
                Eigen::Index j) {
  return (g * phi)(i, j) * xi + eta(j) * phi.col(i);
}

VerificationReport kenmotsu_report(const std::string& prefix, const ChartedManifold& m,
                                   const QuadraticPhiStructure& s, const Expr& beta, Samples samples, double tol) {
  ResidualAccumulator k1(prefix + ".nabla_phi", "(nabla_X phi) Y = beta (g(X, phi Y) xi + eta(Y) phi X)", tol);
  ResidualAccumulator k2(prefix + ".nabla_xi", "nabla_X xi = -beta (X - eta(X) xi)", tol);
  ResidualAccumulator deta(prefix + ".d_eta", "d eta = 0", tol);
  ResidualAccumulator xi_normal(prefix + ".xi_normal", "g(nabla_X xi, xi) = 0", tol);
  const auto n = m.dim();
  for (const auto& x : samples) {
    JetEvaluator ev(x);
    const PointFrame f = PointFrame::at(m, ev, x);
    const MatrixFieldJet phi = field_jet(s.phi.components, ev);
    const VectorFieldJet xi = field_jet(s.xi.components, ev);
    const VectorFieldJet eta = field_jet(s.eta.components, ev);
    const double b = ev(beta).value();
    double r1 = 0.0, r2 = 0.0, r4 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Matrix D = covariant_derivative_11(f, phi, unit(n, i));
      for (Eigen::Index j = 0; j < n; ++j)
        r1 = std::max(r1, max_abs(D.col(j) - b * k1_shape(f.metric, phi.value, eta.value, xi.value, i, j)));
      const Vector nabla_xi = covariant_derivative(f, xi, unit(n, i));
      r2 = std::max(r2, max_abs(nabla_xi + b * (unit(n, i) - eta.value(i) * xi.value)));
      r4 = std::max(r4, std::abs(f.inner(nabla_xi, xi.value)));
    }
    k1.add(x, r1);
    k2.add(x, r2);
    deta.add(x, max_abs(eta.jacobian - eta.jacobian.transpose()));
    xi_normal.add(x, r4);
  }
  VerificationReport r;
  r.add(k1.finish());
  r.add(k2.finish());
  r.add(deta.finish());
  r.add(xi_normal.finish());
  return r;
}

}  // namespace

VerificationReport verify_az_formulas(const WarpedProduct& wp, Samples samples, double tol) {
  const ChartedManifold m = warped_metric(wp);
  const Expr f = wp.warping();
  const Expr df = differentiate(f, 0);
  ResidualAccumulator tt("az.dt_dt", "nabla_dt dt = 0", tol);
  ResidualAccumulator tx("az.dt_x", "nabla_dt X = nabla_X dt = (f'/f) X", tol);
  ResidualAccumulator xy("az.x_y", "nabla_X Y = N-nabla_X Y - (<X,Y>/f) f' dt", tol);
  const auto n = m.dim();
  const Vector dt = unit(n, 0);
  for (const auto& x : samples) {
    JetEvaluator ev(x);
    const PointFrame frame = PointFrame::at(m, ev, x);
    const PointFrame fiber = PointFrame::at(wp.fiber, wp.fiber_point(x));
    const double fv = ev(f).value();
    const double dfv = ev(df).value();
    tt.add(x, max_abs(frame.contract(dt, dt)));
    double rtx = 0.0, rxy = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
      const Vector X = unit(n, i);
      rtx = std::max(rtx, max_abs(frame.contract(dt, X) - (dfv / fv) * X));
      rtx = std::max(rtx, max_abs(frame.contract(X, dt) - (dfv / fv) * X));
      for (Eigen::Index j = 1; j < n; ++j) {
        const Vector Y = unit(n, j);
        Vector expected = Vector::Zero(n);
        expected.tail(n - 1) = fiber.contract(unit(n - 1, i - 1), unit(n - 1, j - 1));
        expected(0) = -frame.inner(X, Y) / fv * dfv;
        rxy = std::max(rxy, max_abs(frame.contract(X, Y) - expected));
      }
    }
    tx.add(x, rtx);
    xy.add(x, rxy);
  }
  VerificationReport r;
  r.add(tt.finish());
  r.add(tx.finish());
  r.add(xy.finish());
  return r;
}

VerificationReport verify_kenmotsu(const ChartedManifold& m, const QuadraticPhiStructure& s, const Expr& beta,
                                   Samples samples, double tol) {
  return kenmotsu_report("kenmotsu", m, s, beta, samples, tol);
}

VerificationReport theorem_qc_check(const WarpedProduct& wp, Samples samples, double tol,
                                    const std::optional<Expr>& expected_beta) {
  if (!wp.fiber_structure) throw MissingFiberStructure("the fiber carries no metallic structure");
  std::vector<Vector> fiber_samples;
  fiber_samples.reserve(samples.size());
  for (const auto& x : samples) fiber_samples.push_back(wp.fiber_point(x));
  VerificationReport fiber = verify_locally_metallic(wp.fiber, *wp.fiber_structure, fiber_samples, tol);
  const CheckResult& parallel = fiber.at("locally_metallic.parallel");
  if (!parallel.pass)
    throw FiberNotLocallyMetallic("fiber structure is not parallel: max |(nabla J)| = " +
                                  format_double(parallel.max_residual));

  const InducedQuadraticStructure induced = induce_phi(wp);
  const ChartedManifold& m = induced.manifold;
  const QuadraticPhiStructure& s = induced.structure;
  const Expr f = wp.warping();
  const Expr df = differentiate(f, 0);
  const Expr beta = -df / f;

  VerificationReport r;
  for (auto& c : fiber.checks) {
    c.name = "qc.fiber." + c.name.substr(c.name.find('.') + 1);
    r.add(std::move(c));
  }
  r.append(kenmotsu_report("qc", m, s, beta, samples, tol));

  ResidualAccumulator w5("qc.w5", "(nabla_X phi) Y = -(f'/f) (<X, phi Y> xi + eta(Y) phi X)", tol);
  ResidualAccumulator est("qc.beta", "beta read off the Christoffel symbols (-Gamma^x_tx) equals -f'/f", tol);
  std::optional<ResidualAccumulator> expected;
  if (expected_beta)
    expected.emplace("qc.expected_beta", "estimated beta equals the expected closed form " + to_string(*expected_beta),
                     tol);
  const auto n = m.dim();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& x : samples) {
    JetEvaluator ev(x);
    const PointFrame frame = PointFrame::at(m, ev, x);
    const MatrixFieldJet phi = field_jet(s.phi.components, ev);
    const Vector xi = s.xi.at(x);
    const Vector eta = s.eta.at(x);
    const double ratio = ev(df).value() / ev(f).value();
    double rw = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Matrix D = covariant_derivative_11(frame, phi, unit(n, i));
      for (Eigen::Index j = 0; j < n; ++j)
        rw = std::max(rw, max_abs(D.col(j) + ratio * k1_shape(frame.metric, phi.value, eta, xi, i, j)));
    }
    w5.add(x, rw);

    double b = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) b -= frame.gamma[static_cast<std::size_t>(k)](0, k);
    b /= static_cast<double>(n - 1);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    est.add(x, std::abs(b - ev(beta).value()));
    if (expected) expected->add(x, std::abs(b - eval(*expected_beta, x)));
  }
  est.value("beta_min", lo);
  est.value("beta_max", hi);
  r.add(w5.finish());
  r.add(est.finish());
  if (expected) r.add(expected->finish());
  return r;
}

VerificationReport nijenhuis_phi_check(const ChartedManifold& m, const QuadraticPhiStructure& s, Samples samples,
                                       double tol, const std::optional<Expr>& beta) {
  ResidualAccumulator acc("nijenhuis_phi.residual", "N_phi(d_i, d_j) = 0", tol);
  for (const auto& x : samples) acc.add(x, nijenhuis_residual(s.phi, x));
  if (beta) {
    const VerificationReport k = kenmotsu_report("kenmotsu", m, s, *beta, samples, tol);
    if (k.at("kenmotsu.nabla_phi").pass)
      acc.note("the Kenmotsu condition holds for beta = " + to_string(*beta) + ", so N_phi = 0 is predicted");
    else
      acc.note("the Kenmotsu condition fails for beta = " + to_string(*beta) + "; vanishing of N_phi is not predicted");
  }
  VerificationReport r;
  r.add(acc.finish());
  return r;
}

}  // namespace metallic
