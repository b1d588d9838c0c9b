#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "metallic/errors.hpp"
#include "metallic/warped.hpp"

using namespace metallic;

namespace {

const double kSigma = (1 + std::sqrt(5.0)) / 2;
const double kSigmaBar = (1 - std::sqrt(5.0)) / 2;

WarpedProduct flat_product(const std::string& f) {
  WarpedProduct wp = *fixtures::load("warped_exp").warped;
  wp.f = parse(f, std::vector<std::string>{wp.t_name});
  return wp;
}

std::vector<Vector> points(const ChartedManifold& m, std::size_t n = 100) { return sample_points(m.box(), n, 42); }

}  // namespace

TEST_CASE("warped metrics") {
  const Vector p = (Vector(3) << 0.4, -0.2, 0.7).finished();
  CHECK(max_abs(warped_metric(flat_product("1")).metric_at(p) - Matrix::Identity(3, 3)) == 0.0);

  const Matrix g = warped_metric(flat_product("exp(t)")).metric_at(p);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(1, 1) == doctest::Approx(std::exp(0.8)));
  CHECK(g(2, 2) == doctest::Approx(std::exp(0.8)));
  CHECK(g(0, 1) == 0.0);

  const auto cosh = *fixtures::load("warped_cosh_sphere").warped;
  const double r = 2 / (1 + std::sqrt(5.0));
  const Matrix gs = warped_metric(cosh).metric_at(p);
  CHECK(gs(1, 1) == doctest::Approx(std::cosh(0.4) * std::cosh(0.4) * r * r));
  CHECK(gs(2, 2) == doctest::Approx(std::cosh(0.4) * std::cosh(0.4) * r * r * std::sin(-0.2) * std::sin(-0.2)));

  CHECK_THROWS_AS(warped_metric(flat_product("t")), NonPositiveWarping);
  CHECK_THROWS_AS(warped_metric(flat_product("-exp(t)")), NonPositiveWarping);
}

TEST_CASE("connection formulas of warped products") {
  for (const std::string f : {"1", "exp(t)", "cosh(t)", "2 + sin(t)"}) {
    CAPTURE(f);
    const auto wp = flat_product(f);
    const auto m = warped_metric(wp);
    const auto r = verify_az_formulas(wp, points(m), 1e-10);
    CHECK(r.passed());
  }
  const auto cosh = *fixtures::load("warped_cosh_sphere").warped;
  CHECK(verify_az_formulas(cosh, points(warped_metric(cosh)), 1e-10).passed());
}

TEST_CASE("induced phi on the exponential product") {
  const auto wp = flat_product("exp(t)");
  const auto s = induce_phi(wp);
  const auto pts = points(s.manifold, 20);
  CHECK(verify_quadratic_phi(s.manifold, s.structure, pts, 1e-12).passed());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.structure.phi.at(pts[0]));
  const Vector ev = es.eigenvalues();
  CHECK(ev(0) == doctest::Approx(kSigmaBar));
  CHECK(ev(1) == doctest::Approx(0.0));
  CHECK(ev(2) == doctest::Approx(kSigma));

  WarpedProduct bare = wp;
  bare.fiber_structure.reset();
  CHECK_THROWS_AS(induce_phi(bare), MissingFiberStructure);
  CHECK_THROWS_AS(theorem_qc_check(bare, pts, 1e-9), MissingFiberStructure);
}

TEST_CASE("Kenmotsu conditions on the catalog products") {
  const std::vector<std::string> t{"t", "x1", "x2"};
  {
    const auto s = induce_phi(flat_product("1"));
    CHECK(verify_kenmotsu(s.manifold, s.structure, Expr(0.0), points(s.manifold), 1e-9).passed());
  }
  {
    const auto s = induce_phi(flat_product("exp(t)"));
    CHECK(verify_kenmotsu(s.manifold, s.structure, Expr(-1.0), points(s.manifold), 1e-9).passed());
    CHECK_FALSE(verify_kenmotsu(s.manifold, s.structure, Expr(1.0), points(s.manifold), 1e-9).passed());
  }
  {
    const auto wp = *fixtures::load("warped_cosh_sphere").warped;
    const auto s = induce_phi(wp);
    const Expr beta = -tanh(Expr::variable(0, "t"));
    CHECK(verify_kenmotsu(s.manifold, s.structure, beta, points(s.manifold), 1e-9).passed());
  }
}

TEST_CASE("covariant derivative of phi matches the warped formula at t = 0") {
  const auto wp = flat_product("exp(t)");
  const auto s = induce_phi(wp);
  const Vector p = (Vector(3) << 0.0, 0.3, -0.4).finished();
  const Vector x = Vector::Unit(3, 1);
  const Vector lhs = covariant_derivative_11(s.manifold, s.structure.phi, x, x, p);
  // -(f'/f) (<X, phi Y> xi + eta(Y) phi X) with f'/f = 1, eta(d_x1) = 0.
  const Matrix g = s.manifold.metric_at(p);
  const Matrix phi = s.structure.phi.at(p);
  const Vector rhs = -(x.dot(g * phi * x)) * Vector::Unit(3, 0);
  CHECK(max_abs(lhs - rhs) <= 1e-12);
  CHECK(std::abs(rhs(0) + kSigma) <= 1e-12);
}

TEST_CASE("parallel fibers give Kenmotsu products") {
  {
    const auto wp = *fixtures::load("warped_exp").warped;
    const Expr expected(-1.0);
    const auto r = theorem_qc_check(wp, points(warped_metric(wp)), 1e-9, expected);
    CHECK(r.passed());
    CHECK(r.at("qc.beta").values.at("beta_min") == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(r.at("qc.beta").values.at("beta_max") == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(r.at("qc.expected_beta").max_residual <= 1e-9);
  }
  {
    const auto wp = flat_product("1");
    const auto r = theorem_qc_check(wp, points(warped_metric(wp)), 1e-9, Expr(0.0));
    CHECK(r.passed());
  }
  {
    const auto wp = *fixtures::load("warped_cosh_sphere").warped;
    const Expr expected = -tanh(Expr::variable(0, "t"));
    const auto r = theorem_qc_check(wp, points(warped_metric(wp)), 1e-8, expected);
    CHECK(r.passed());
    CHECK(r.at("qc.expected_beta").max_residual <= 1e-8);
  }
}

TEST_CASE("a non-parallel fiber is rejected and breaks N_phi = 0") {
  const auto cfg = parse_config(fixtures::kBrokenFiber);
  const auto& wp = *cfg.warped;
  const auto pts = points(warped_metric(wp));
  CHECK_THROWS_AS(theorem_qc_check(wp, pts, 1e-9), FiberNotLocallyMetallic);

  const auto s = induce_phi(wp);
  const auto r = nijenhuis_phi_check(s.manifold, s.structure, pts, 1e-8, Expr(-1.0));
  CHECK_FALSE(r.passed());
  CHECK(r.at("nijenhuis_phi.residual").max_residual > 1e-3);
}

TEST_CASE("N_phi vanishes on the Kenmotsu catalog products") {
  for (const std::string name : {"warped_exp", "warped_cosh_sphere", "cosymplectic_product"}) {
    CAPTURE(name);
    const auto wp = *fixtures::load(name).warped;
    const auto s = induce_phi(wp);
    const auto r = nijenhuis_phi_check(s.manifold, s.structure, points(s.manifold), 1e-8);
    CHECK(r.passed());
    CHECK(r.at("nijenhuis_phi.residual").max_residual <= 1e-8);
  }
}

TEST_CASE("N_phi is antisymmetric") {
  const auto s = induce_phi(*fixtures::load("warped_cosh_sphere").warped);
  const Vector p = points(s.manifold, 1)[0];
  const auto x = VectorField::coordinate(3, 1);
  const auto y = VectorField::coordinate(3, 2);
  CHECK(max_abs(nijenhuis(s.structure.phi, x, x, p)) <= 1e-14);
  CHECK(max_abs(nijenhuis(s.structure.phi, x, y, p) + nijenhuis(s.structure.phi, y, x, p)) <= 1e-12);
}
