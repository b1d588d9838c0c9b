#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "metallic/errors.hpp"
#include "metallic/report.hpp"
#include "metallic/tensor.hpp"

using namespace metallic;

namespace {

ChartedManifold chart(std::vector<std::string> coords, std::vector<Interval> box,
                      const std::vector<std::vector<std::string>>& metric) {
  const ExprMatrix g = parse_matrix(metric, coords);
  return ChartedManifold(std::move(coords), std::move(box), g);
}

ChartedManifold euclidean3() {
  return chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
}

ChartedManifold polar() { return chart({"r", "th"}, {{0.5, 3}, {-3, 3}}, {{"1", "0"}, {"0", "r^2"}}); }

ChartedManifold sphere(double r) {
  const std::string r2 = std::to_string(r * r);
  return chart({"th", "ph"}, {{0.3, 2.8}, {-3, 3}}, {{r2, "0"}, {"0", r2 + "*sin(th)^2"}});
}

// A deliberately generic metric for the identity checks.
ChartedManifold lumpy() {
  return chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}},
               {{"2 + sin(x*y)", "0.3*z", "0.1*x^2"}, {"0.3*z", "3 + y^2", "0.2*cos(z)"},
                {"0.1*x^2", "0.2*cos(z)", "2.5 + exp(0.3*x)"}});
}

VectorField field(const std::vector<std::string>& comps, const std::vector<std::string>& coords) {
  VectorField v;
  v.components.resize(static_cast<Eigen::Index>(comps.size()));
  for (std::size_t i = 0; i < comps.size(); ++i) v.components(static_cast<Eigen::Index>(i)) = parse(comps[i], coords);
  return v;
}

Vector vec(std::initializer_list<double> v) {
  Vector p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

}  // namespace

TEST_CASE("Euclidean Christoffel symbols vanish") {
  const auto gamma = christoffel(euclidean3(), vec({0.3, -0.2, 0.9}));
  for (const auto& g : gamma) CHECK(max_abs(g) == 0.0);
}

TEST_CASE("polar Christoffel symbols") {
  const auto gamma = christoffel(polar(), vec({2.0, 0.4}));
  CHECK(gamma[0](1, 1) == doctest::Approx(-2.0));
  CHECK(gamma[1](0, 1) == doctest::Approx(0.5));
  CHECK(gamma[1](1, 0) == doctest::Approx(0.5));
  CHECK(gamma[0](0, 0) == 0.0);
}

TEST_CASE("warped exponential Christoffel symbols at t = 0") {
  const auto m = chart({"t", "x"}, {{-1, 1}, {-1, 1}}, {{"1", "0"}, {"0", "exp(2*t)"}});
  const auto gamma = christoffel(m, vec({0.0, 0.3}));
  CHECK(gamma[0](1, 1) == doctest::Approx(-1.0));
  CHECK(gamma[1](0, 1) == doctest::Approx(1.0));
}

TEST_CASE("Christoffel symbols agree with finite differences of the metric") {
  const auto m = lumpy();
  const Vector p = vec({0.2, -0.4, 0.6});
  const double h = 1e-4;
  std::vector<Matrix> dg;
  for (int k = 0; k < 3; ++k) {
    Vector e = Vector::Zero(3);
    e(k) = h;
    dg.push_back((m.metric_at(p + e) - m.metric_at(p - e)) / (2 * h));
  }
  const Matrix ginv = m.metric_at(p).inverse();
  const auto gamma = christoffel(m, p);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double expected = 0;
        for (int l = 0; l < 3; ++l) expected += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        CHECK(gamma[k](i, j) == doctest::Approx(expected).epsilon(1e-7));
        CHECK(gamma[k](i, j) == gamma[k](j, i));
      }
}

TEST_CASE("point frame invariants") {
  const auto m = lumpy();
  for (const Vector& p : sample_points(m.box(), 20, 3)) {
    const auto f = PointFrame::at(m, p);
    CHECK(max_abs(f.metric * f.metric_inverse - Matrix::Identity(3, 3)) <= 1e-12);
    for (int a = 0; a < 3; ++a) CHECK(max_abs(covariant_derivative_metric(f, Vector::Unit(3, a))) <= 1e-11);
  }
}

TEST_CASE("singular metrics are reported") {
  const auto m = chart({"x", "y"}, {{-1, 1}, {-1, 1}}, {{"x^2", "0"}, {"0", "1"}});
  CHECK_THROWS_AS(christoffel(m, vec({0.0, 0.5})), SingularMetric);
}

TEST_CASE("covariant derivative of identity and of constant fields") {
  const auto m = lumpy();
  const Vector p = vec({0.1, 0.2, 0.3});
  const Vector x = vec({1, -2, 0.5}), y = vec({0.3, 0.7, -1});
  CHECK(max_abs(covariant_derivative_11(m, TensorField11::identity(3), x, y, p)) <= 1e-14);

  TensorField11 k;
  k.components = parse_matrix({{"1", "2", "0"}, {"0", "3", "1"}, {"4", "0", "5"}}, euclidean3().coords());
  CHECK(max_abs(covariant_derivative_11(euclidean3(), k, x, y, p)) == 0.0);
}

TEST_CASE("covariant derivative is linear in both arguments") {
  const auto m = lumpy();
  TensorField11 k;
  k.components = parse_matrix({{"x", "y*z", "1"}, {"0", "exp(x)", "z"}, {"y", "0", "x*y"}}, m.coords());
  const Vector p = vec({0.1, 0.2, 0.3});
  const Vector x1 = vec({1, 0, 2}), x2 = vec({0, -1, 1}), y = vec({0.5, 0.5, -1});
  const Vector lhs = covariant_derivative_11(m, k, 2 * x1 + 3 * x2, y, p);
  const Vector rhs = 2 * covariant_derivative_11(m, k, x1, y, p) + 3 * covariant_derivative_11(m, k, x2, y, p);
  CHECK(max_abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("Lie brackets") {
  const std::vector<std::string> xy{"x1", "x2"};
  const Vector p = vec({0.4, -0.7});
  CHECK(max_abs(lie_bracket(VectorField::coordinate(2, 0), VectorField::coordinate(2, 1), p)) == 0.0);

  const Vector b = lie_bracket(field({"x2", "0"}, xy), VectorField::coordinate(2, 1), p);
  CHECK(b(0) == doctest::Approx(-1.0));
  CHECK(b(1) == 0.0);

  const auto poly = field({"x1^2*x2 - 3*x2", "x1*x2^3 + 1"}, xy);
  CHECK(max_abs(lie_bracket(poly, poly, p)) == 0.0);
}

TEST_CASE("Lie bracket agrees with finite differences") {
  const std::vector<std::string> c{"x", "y", "z"};
  const auto x = field({"sin(y)", "x*z", "1"}, c);
  const auto y = field({"z^2", "exp(x)", "x*y"}, c);
  const Vector p = vec({0.3, 0.1, -0.5});
  const double h = 1e-5;
  Vector expected = Vector::Zero(3);
  for (int i = 0; i < 3; ++i) {
    Vector e = Vector::Zero(3);
    e(i) = h;
    const Vector dy = (y.at(p + e) - y.at(p - e)) / (2 * h);
    const Vector dx = (x.at(p + e) - x.at(p - e)) / (2 * h);
    expected += x.at(p)(i) * dy - y.at(p)(i) * dx;
  }
  CHECK(max_abs(lie_bracket(x, y, p) - expected) <= 1e-8);
}

TEST_CASE("Nijenhuis torsion") {
  const auto m = euclidean3();
  TensorField11 constant;
  constant.components = parse_matrix({{"2", "1", "0"}, {"9", "2", "0"}, {"0", "0", "5"}}, m.coords());
  for (const Vector& p : sample_points(m.box(), 20, 11))
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(max_abs(nijenhuis(constant, VectorField::coordinate(3, i), VectorField::coordinate(3, j), p)) == 0.0);

  TensorField11 k;
  k.components = parse_matrix({{"x", "y*z", "1"}, {"0", "exp(x)", "z"}, {"y", "0", "x*y"}}, m.coords());
  const auto x = field({"1 + y", "z", "x^2"}, m.coords());
  const auto y = field({"cos(z)", "1", "x*y"}, m.coords());
  const Vector p = vec({0.3, -0.6, 0.8});

  CHECK(max_abs(nijenhuis(k, x, x, p)) <= 1e-14);
  const Vector nxy = nijenhuis(k, x, y, p);
  CHECK(max_abs(nxy + nijenhuis(k, y, x, p)) <= 1e-13);
  CHECK(max_abs(nxy) > 1e-3);

  // Tensoriality: N(hX, Y) = h(p) N(X, Y).
  const Expr h = parse("1 + x^2 + sin(y*z)", m.coords());
  VectorField hx = x;
  for (Eigen::Index i = 0; i < 3; ++i) hx.components(i) = h * x.components(i);
  const Vector scaled = nijenhuis(k, hx, y, p);
  CHECK(max_abs(scaled - eval(h, p) * nxy) <= 1e-10 * std::max(1.0, max_abs(scaled)));
}

TEST_CASE("Riemann tensor of flat and round charts") {
  const Vector x = vec({1, 0.5, -1}), y = vec({0, 2, 1}), z = vec({0.3, 0.3, 0.3});
  CHECK(max_abs(riemann(euclidean3(), x, y, z, vec({0.1, 0.2, 0.3}))) == 0.0);

  const auto m = polar();
  for (const Vector& p : sample_points(m.box(), 10, 5))
    CHECK(max_abs(riemann(m, vec({1, 2}), vec({-1, 0.5}), vec({0.2, 3}), p)) <= 1e-12);

  const auto s = sphere(2.0);
  for (const Vector& p : sample_points(s.box(), 20, 42)) {
    const auto f = PointFrame::at(s, p);
    CHECK(sectional_curvature(f, vec({1, 0.3}), vec({-0.2, 1})) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(max_abs(riemann(f, vec({1, 0.3}), vec({1, 0.3}), vec({0.5, 2}))) <= 1e-14);
  }
}

TEST_CASE("Riemann antisymmetry and first Bianchi identity on a generic metric") {
  const auto m = lumpy();
  const Vector x = vec({1, 0.5, -1}), y = vec({0, 2, 1}), z = vec({0.3, -0.7, 1.1});
  for (const Vector& p : sample_points(m.box(), 10, 9)) {
    const auto f = PointFrame::at(m, p);
    const Vector rxy = riemann(f, x, y, z);
    CHECK(max_abs(rxy + riemann(f, y, x, z)) <= 1e-12);
    CHECK(max_abs(rxy + riemann(f, y, z, x) + riemann(f, z, x, y)) <= 1e-9);
    CHECK(max_abs(rxy) > 1e-3);
  }
}

TEST_CASE("Riemann tensor matches finite differences of the Christoffel symbols") {
  const auto m = lumpy();
  const Vector p = vec({-0.3, 0.4, 0.1});
  const double h = 1e-5;
  std::vector<Christoffel> dgamma;
  for (int a = 0; a < 3; ++a) {
    Vector e = Vector::Zero(3);
    e(a) = h;
    const auto gp = christoffel(m, p + e), gm = christoffel(m, p - e);
    Christoffel d(3);
    for (int k = 0; k < 3; ++k) d[k] = (gp[k] - gm[k]) / (2 * h);
    dgamma.push_back(d);
  }
  const auto g = christoffel(m, p);
  const auto f = PointFrame::at(m, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        // R(d_i, d_j) d_l = (d_i G^k_jl - d_j G^k_il + G^k_im G^m_jl - G^k_jm G^m_il) d_k
        Vector expected(3);
        for (int k = 0; k < 3; ++k) {
          double r = dgamma[i][k](j, l) - dgamma[j][k](i, l);
          for (int mm = 0; mm < 3; ++mm) r += g[k](i, mm) * g[mm](j, l) - g[k](j, mm) * g[mm](i, l);
          expected(k) = r;
        }
        CHECK(max_abs(riemann(f, Vector::Unit(3, i), Vector::Unit(3, j), Vector::Unit(3, l)) - expected) <= 1e-7);
      }
}

TEST_CASE("sampling is deterministic and stays in the box") {
  const std::vector<Interval> box{{-1, 2}, {0.5, 0.75}, {10, 20}};
  const auto a = sample_points(box, 100, 42);
  const auto b = sample_points(box, 100, 42);
  const auto c = sample_points(box, 100, 43);
  REQUIRE(a.size() == 100);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    differs = differs || a[i] != c[i];
    for (int k = 0; k < 3; ++k) {
      CHECK(a[i](k) >= box[k].lo);
      CHECK(a[i](k) <= box[k].hi);
    }
  }
  CHECK(differs);
}
