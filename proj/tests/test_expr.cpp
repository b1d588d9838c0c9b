#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "metallic/errors.hpp"
#include "metallic/expr.hpp"

using namespace metallic;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kT{"t"};

Eigen::VectorXd at(std::initializer_list<double> v) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

// Fourth-order central differences.
double fd1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}
double fd2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expr c = parse("cosh(t)", kT);
  CHECK(c.op() == Op::cosh);
  CHECK(c.operand().op() == Op::variable);
  CHECK(c.operand().variable_name() == "t");

  const std::vector<std::string> x12{"x1", "x2"};
  const Expr e = parse("x1^2 + x2", x12);
  REQUIRE(e.op() == Op::add);
  CHECK(e.lhs().op() == Op::pow);
  CHECK(e.lhs().lhs().variable_index() == 0);
  CHECK(e.lhs().rhs().is_constant(2.0));
  CHECK(e.rhs().variable_index() == 1);
}

TEST_CASE("operator precedence and associativity") {
  CHECK(eval(parse("2^3^2", kT), at({0})) == doctest::Approx(512.0));
  CHECK(eval(parse("8 - 3 - 2", kT), at({0})) == doctest::Approx(3.0));
  CHECK(eval(parse("16 / 4 / 2", kT), at({0})) == doctest::Approx(2.0));
  CHECK(eval(parse("-2^2", kT), at({0})) == doctest::Approx(-4.0));
  CHECK(eval(parse("2 * 3 + 4 * 5", kT), at({0})) == doctest::Approx(26.0));
  CHECK(eval(parse("1.5e1 + .5", kT), at({0})) == doctest::Approx(15.5));
}

TEST_CASE("syntax errors carry the byte offset") {
  try {
    parse("1 + + 2", kT);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("", kT), SyntaxError);
  CHECK_THROWS_AS(parse("x +* 2", kXY), SyntaxError);
  CHECK_THROWS_AS(parse("sin(x", kXY), SyntaxError);
  CHECK_THROWS_AS(parse("2 x", kXY), SyntaxError);
  CHECK_THROWS_AS(parse("foo(x)", kXY), SyntaxError);
}

TEST_CASE("unknown variables are named") {
  try {
    parse("x + z", kXY);
    FAIL("expected UnknownVariable");
  } catch (const UnknownVariable& e) {
    CHECK(e.name() == "z");
  }
}

TEST_CASE("domain errors are raised at evaluation time") {
  const Expr lg = parse("log(x)", kXY);
  CHECK_THROWS_AS(eval(lg, at({-1, 0})), DomainError);
  CHECK_THROWS_AS(eval(lg, at({0, 0})), DomainError);
  CHECK_THROWS_AS(eval(parse("1 / y", kXY), at({1, 0})), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(x)", kXY), at({-1, 0})), DomainError);
  CHECK_THROWS_AS(eval_jet2(parse("sqrt(x)", kXY), at({-1, 0})), DomainError);
  CHECK(eval(lg, at({1, 0})) == 0.0);
}

TEST_CASE("jets of elementary functions") {
  const std::vector<std::string> x1{"x1"};
  const auto sq = eval_jet2(parse("x1^2", x1), at({3}));
  CHECK(sq.value() == 9.0);
  CHECK(sq.gradient(0) == 6.0);
  CHECK(sq.hessian(0, 0) == 2.0);

  const auto ex = eval_jet2(parse("exp(t)", kT), at({0}));
  CHECK(ex.value() == 1.0);
  CHECK(ex.gradient(0) == 1.0);
  CHECK(ex.hessian(0, 0) == 1.0);
}

TEST_CASE("cosh jet against the closed form and finite differences") {
  const double t = 0.7;
  const auto j = eval_jet2(parse("cosh(t)", kT), at({t}));
  CHECK(close_rel(j.value(), std::cosh(t), 1e-14));
  CHECK(close_rel(j.gradient(0), std::sinh(t), 1e-14));
  CHECK(close_rel(j.hessian(0, 0), std::cosh(t), 1e-14));

  auto f = [](double x) { return std::cosh(x); };
  CHECK(close_rel(j.gradient(0), fd1(f, t, 1e-3), 1e-10));
  CHECK(close_rel(j.hessian(0, 0), fd2(f, t, 1e-3), 1e-7));
}

TEST_CASE("jets of every unary function agree with finite differences") {
  const std::vector<std::pair<std::string, std::function<double(double)>>> cases{
      {"sqrt(t)", [](double x) { return std::sqrt(x); }},   {"exp(t)", [](double x) { return std::exp(x); }},
      {"log(t)", [](double x) { return std::log(x); }},     {"sin(t)", [](double x) { return std::sin(x); }},
      {"cos(t)", [](double x) { return std::cos(x); }},     {"sinh(t)", [](double x) { return std::sinh(x); }},
      {"cosh(t)", [](double x) { return std::cosh(x); }},   {"tanh(t)", [](double x) { return std::tanh(x); }},
      {"t^3", [](double x) { return x * x * x; }},          {"t^0.5", [](double x) { return std::sqrt(x); }},
      {"2^t", [](double x) { return std::pow(2.0, x); }},   {"t^t", [](double x) { return std::pow(x, x); }},
      {"1/t", [](double x) { return 1.0 / x; }},            {"-t*t", [](double x) { return -x * x; }},
  };
  for (const auto& [text, f] : cases) {
    CAPTURE(text);
    for (double t : {0.3, 0.9, 1.7}) {
      const auto j = eval_jet2(parse(text, kT), at({t}));
      CHECK(close_rel(j.value(), f(t), 1e-14));
      CHECK(close_rel(j.gradient(0), fd1(f, t, 1e-3), 1e-8));
      CHECK(close_rel(j.hessian(0, 0), fd2(f, t, 1e-3), 1e-5));
    }
  }
}

TEST_CASE("polynomial jets match exact monomial derivatives") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-9, 9), deg(0, 4), nvars(1, 4);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  const std::vector<std::string> names{"a", "b", "c", "d"};

  for (int trial = 0; trial < 40; ++trial) {
    const int n = nvars(rng);
    const std::vector<std::string> vars(names.begin(), names.begin() + n);
    std::vector<std::pair<int, std::vector<int>>> terms;
    std::string text = "0";
    for (int k = 0; k < 6; ++k) {
      std::vector<int> powers(n);
      int total = 0;
      for (int i = 0; i < n; ++i) {
        powers[i] = std::min(deg(rng), 4 - total);
        total += powers[i];
      }
      const int c = coef(rng);
      terms.emplace_back(c, powers);
      text += " + (" + std::to_string(c) + ")";
      for (int i = 0; i < n; ++i) text += "*" + vars[i] + "^" + std::to_string(powers[i]);
    }
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = coord(rng);

    double value = 0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [c, pw] : terms) {
      auto mono = [&](const std::vector<int>& e) {
        double r = c;
        for (int i = 0; i < n; ++i) {
          if (e[i] < 0) return 0.0;
          r *= std::pow(p(i), e[i]);
        }
        return r;
      };
      value += mono(pw);
      for (int i = 0; i < n; ++i) {
        auto e = pw;
        e[i] -= 1;
        grad(i) += pw[i] * mono(e);
        for (int j = 0; j < n; ++j) {
          auto e2 = e;
          e2[j] -= 1;
          const double factor = i == j ? pw[i] * (pw[i] - 1) : pw[i] * pw[j];
          hess(i, j) += factor * mono(e2);
        }
      }
    }
    const auto jet = eval_jet2(parse(text, vars), p);
    CAPTURE(text);
    CHECK(close_rel(jet.value(), value, 1e-13));
    for (int i = 0; i < n; ++i) {
      CHECK(close_rel(jet.gradient(i), grad(i), 1e-13));
      for (int j = 0; j < n; ++j) CHECK(close_rel(jet.hessian(i, j), hess(i, j), 1e-13));
    }
  }
}

TEST_CASE("chain rule: jet of a composition equals composition of jets") {
  const std::vector<std::string> s{"s"};
  const std::vector<std::string> outer_texts{"sin(s)*s^2", "exp(-s^2)", "log(1 + s^2)", "tanh(s)/(2 + s)"};
  const std::vector<std::string> inner_texts{"x*y + exp(x)", "cos(x) - y^3", "sqrt(1 + x^2 + y^2)"};
  for (const auto& ot : outer_texts) {
    for (const auto& it : inner_texts) {
      CAPTURE(ot);
      CAPTURE(it);
      const Expr outer = parse(ot, s);
      const Expr inner = parse(it, kXY);
      const std::vector<Expr> repl{inner};
      const Expr composed = substitute(outer, repl);
      const Eigen::VectorXd p = at({0.4, -0.8});
      const auto ji = eval_jet2(inner, p);
      const auto jo = eval_jet2(outer, at({ji.value()}));
      const auto expected = ji.compose(jo.value(), jo.gradient(0), jo.hessian(0, 0));
      const auto got = eval_jet2(composed, p);
      CHECK(close_rel(got.value(), expected.value(), 1e-13));
      for (int i = 0; i < 2; ++i) {
        CHECK(close_rel(got.gradient(i), expected.gradient(i), 1e-13));
        for (int j = 0; j < 2; ++j) CHECK(close_rel(got.hessian(i, j), expected.hessian(i, j), 1e-13));
      }
    }
  }
}

TEST_CASE("parse and print round trip") {
  const std::vector<std::string> v{"x", "y", "z", "t"};
  const std::vector<std::string> corpus{
      "x",
      "1",
      "0.5",
      "1e-12",
      "2.5e+30",
      "-x",
      "--x",
      "x + y",
      "x - y",
      "x * y",
      "x / y",
      "x ^ y",
      "x + y + z",
      "x - y - z",
      "x - (y - z)",
      "x / y / z",
      "x / (y / z)",
      "x ^ y ^ z",
      "(x ^ y) ^ z",
      "-x ^ 2",
      "(-x) ^ 2",
      "x * (y + z)",
      "(x + y) * z",
      "x + y * z",
      "x * y + z",
      "-(x + y)",
      "x * -y",
      "x - -y",
      "sqrt(x)",
      "exp(x)",
      "log(x)",
      "sin(x)",
      "cos(x)",
      "sinh(x)",
      "cosh(x)",
      "tanh(x)",
      "sin(x) ^ 2 + cos(x) ^ 2",
      "exp(-t ^ 2 / 2)",
      "log(1 + x ^ 2)",
      "sqrt(x ^ 2 + y ^ 2 + z ^ 2)",
      "(1 + sqrt(5)) / 2",
      "(1 - sqrt(5)) / 2",
      "2 / (1 + sqrt(5))",
      "cosh(t) ^ 2 * sin(x) ^ 2",
      "sinh(t) / cosh(t)",
      "x * y * z * t",
      "((x))",
      "x ^ -1",
      "x ^ (y + 1)",
      "exp(exp(exp(x)))",
      "sin(cos(0) + x)",
      "0 * x + 0",
      "1 * x",
      "x - x",
      "t * (x - y) / (z + 4)",
      "3.14159 * x ^ 2",
      "-(-(-x))",
      "sqrt((sqrt(5) - 1) / (2 * sqrt(5)))",
  };
  std::size_t checked = 0;
  for (const auto& text : corpus) {
    CAPTURE(text);
    const Expr e = parse(text, v);
    const std::string printed = to_string(e);
    const Expr again = parse(printed, v);
    CHECK(structurally_equal(e, again));
    CHECK(to_string(again) == printed);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("builder operators fold constants, the parser does not") {
  const Expr x = Expr::variable(0, "x");
  CHECK(structurally_equal(x * Expr(1.0), x));
  CHECK((x * Expr(0.0)).is_constant(0.0));
  CHECK(structurally_equal(x + Expr(0.0), x));
  CHECK((Expr(2.0) * Expr(3.0)).is_constant(6.0));
  const std::vector<std::string> names{"x"};
  CHECK_FALSE(parse("1 * x", names).op() == Op::variable);
}

TEST_CASE("symbolic derivatives agree with jets") {
  const Expr e = parse("sin(x*y) + exp(x)/(1 + y^2) + sqrt(x^2 + 1)*cosh(y)", kXY);
  const Eigen::VectorXd p = at({0.3, -1.1});
  const auto j = eval_jet2(e, p);
  for (std::size_t i = 0; i < 2; ++i) {
    const Expr d = differentiate(e, i);
    const auto jd = eval_jet2(d, p);
    CHECK(close_rel(jd.value(), j.gradient(static_cast<Eigen::Index>(i)), 1e-13));
    for (Eigen::Index k = 0; k < 2; ++k)
      CHECK(close_rel(jd.gradient(k), j.hessian(static_cast<Eigen::Index>(i), k), 1e-12));
  }
}

TEST_CASE("remap_variables moves variables to a larger chart") {
  const std::vector<std::string> big{"t", "x", "y"};
  const std::vector<std::size_t> map{1, 2};
  const Expr e = remap_variables(parse("x * y^2", kXY), map, big);
  CHECK(to_string(e) == to_string(parse("x * y^2", big)));
  CHECK(eval(e, at({5, 2, 3})) == doctest::Approx(18.0));
}

TEST_CASE("symbolic determinant and inverse") {
  const ExprMatrix m = parse_matrix({{"1 + x^2", "x*y", "0"}, {"x*y", "2 + y^2", "y"}, {"0", "y", "3"}}, kXY);
  const Eigen::VectorXd p = at({0.7, -0.4});
  const Eigen::MatrixXd num = eval(m, p);
  CHECK(eval(determinant(m), p) == doctest::Approx(num.determinant()).epsilon(1e-13));
  CHECK((eval(inverse(m), p) * num - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("evaluator caches shared subexpressions consistently") {
  const Expr shared = parse("exp(x) * sin(y)", kXY);
  const Expr a = shared * shared;
  const Expr b = shared + Expr(1.0);
  const Eigen::VectorXd p = at({0.2, 0.5});
  JetEvaluator ev(p);
  const double s = eval(shared, p);
  CHECK(ev(a).value() == doctest::Approx(s * s));
  CHECK(ev(b).value() == doctest::Approx(s + 1));
  CHECK(node_count(a) < 2 * node_count(shared));
}
