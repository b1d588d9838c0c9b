#include "metallic/expr.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "metallic/errors.hpp"

namespace metallic {

namespace {

std::shared_ptr<const ExprNode> make_constant_node(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->constant = v;
  return n;
}

const std::shared_ptr<const ExprNode>& zero_node() {
  static const auto node = make_constant_node(0.0);
  return node;
}

const std::shared_ptr<const ExprNode>& one_node() {
  static const auto node = make_constant_node(1.0);
  return node;
}

bool is_unary(Op op) {
  switch (op) {
    case Op::neg:
    case Op::sqrt:
    case Op::exp:
    case Op::log:
    case Op::sin:
    case Op::cos:
    case Op::sinh:
    case Op::cosh:
    case Op::tanh:
      return true;
    default:
      return false;
  }
}

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr FunctionName kFunctions[] = {
    {"sqrt", Op::sqrt}, {"exp", Op::exp},   {"log", Op::log},   {"sin", Op::sin},
    {"cos", Op::cos},   {"sinh", Op::sinh}, {"cosh", Op::cosh}, {"tanh", Op::tanh},
};

std::string_view function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return {};
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) {
  if (value == 0.0 && !std::signbit(value))
    node_ = zero_node();
  else if (value == 1.0)
    node_ = one_node();
  else
    node_ = make_constant_node(value);
}

Expr Expr::variable(std::size_t index, std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::variable;
  n->index = index;
  n->name = std::move(name);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::unary(Op op, Expr operand) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(operand);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Op Expr::op() const { return node_->op; }
double Expr::constant_value() const { return node_->constant; }
std::size_t Expr::variable_index() const { return node_->index; }
const std::string& Expr::variable_name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  Expr parse() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "empty expression");
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(Op::add, lhs, parse_product());
      else if (accept('-'))
        lhs = Expr::binary(Op::sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(Op::mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = Expr::binary(Op::div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Op::neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Op::pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw SyntaxError(start, "malformed number");
    return Expr(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      for (const auto& f : kFunctions) {
        if (f.name == name) {
          ++pos_;
          Expr arg = parse_sum();
          if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
          return Expr::unary(f.op, arg);
        }
      }
      throw SyntaxError(start, "unknown function '" + std::string(name) + "'");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return Expr::variable(i, coords_[i]);
    throw UnknownVariable(std::string(name));
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> coords) { return Parser(text, coords).parse(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return 1;
    case Op::mul:
    case Op::div:
      return 2;
    case Op::neg:
      return 3;
    case Op::pow:
      return 4;
    case Op::constant:
      return e.constant_value() < 0 || std::signbit(e.constant_value()) ? 0 : 5;
    default:
      return 5;
  }
}

void print(const Expr& e, int min_prec, std::string& out) {
  const int prec = precedence(e);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (e.op()) {
    case Op::constant: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, e.constant_value());
      out.append(buf, res.ptr);
      break;
    }
    case Op::variable:
      out += e.variable_name();
      break;
    case Op::add:
    case Op::sub:
      print(e.lhs(), 1, out);
      out += e.op() == Op::add ? " + " : " - ";
      print(e.rhs(), 2, out);
      break;
    case Op::mul:
    case Op::div:
      print(e.lhs(), 2, out);
      out += e.op() == Op::mul ? " * " : " / ";
      print(e.rhs(), 3, out);
      break;
    case Op::neg:
      out += '-';
      print(e.operand(), 3, out);
      break;
    case Op::pow:
      print(e.lhs(), 5, out);
      out += '^';
      print(e.rhs(), 3, out);
      break;
    default:
      out += function_name(e.op());
      out += '(';
      print(e.operand(), 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::constant:
      return a.constant_value() == b.constant_value();
    case Op::variable:
      return a.variable_index() == b.variable_index();
    default:
      if (is_unary(a.op())) return structurally_equal(a.operand(), b.operand());
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
  }
}

std::size_t node_count(const Expr& e) {
  std::unordered_set<const ExprNode*> seen;
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* x = stack.back();
    stack.pop_back();
    if (!seen.insert(x->node()).second) continue;
    if (x->op() == Op::constant || x->op() == Op::variable) continue;
    stack.push_back(&x->lhs());
    if (!is_unary(x->op())) stack.push_back(&x->rhs());
  }
  return seen.size();
}

// ---------------------------------------------------------------------------
// Folding constructors

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (b.op() == Op::neg) return a - b.operand();
  return Expr::binary(Op::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  if (b.op() == Op::neg) return a + b.operand();
  return Expr::binary(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return Expr::binary(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
    return Expr(a.constant_value() / b.constant_value());
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Op::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(a.constant_value() == 0.0 ? 0.0 : -a.constant_value());
  if (a.op() == Op::neg) return a.operand();
  return Expr::unary(Op::neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant(0.0)) return Expr(1.0);
  if (exponent.is_constant(1.0)) return base;
  if (base.is_constant() && exponent.is_constant()) {
    const double v = std::pow(base.constant_value(), exponent.constant_value());
    if (std::isfinite(v)) return Expr(v);
  }
  return Expr::binary(Op::pow, base, exponent);
}

namespace {
Expr fold_call(Op op, const Expr& e, double (*f)(double)) {
  if (e.is_constant()) {
    const double v = f(e.constant_value());
    if (std::isfinite(v)) return Expr(v);
  }
  return Expr::unary(op, e);
}
}  // namespace

Expr sqrt(const Expr& e) { return fold_call(Op::sqrt, e, [](double x) { return std::sqrt(x); }); }
Expr exp(const Expr& e) { return fold_call(Op::exp, e, [](double x) { return std::exp(x); }); }
Expr log(const Expr& e) {
  return fold_call(Op::log, e, [](double x) { return x > 0 ? std::log(x) : std::nan(""); });
}
Expr sin(const Expr& e) { return fold_call(Op::sin, e, [](double x) { return std::sin(x); }); }
Expr cos(const Expr& e) { return fold_call(Op::cos, e, [](double x) { return std::cos(x); }); }
Expr sinh(const Expr& e) { return fold_call(Op::sinh, e, [](double x) { return std::sinh(x); }); }
Expr cosh(const Expr& e) { return fold_call(Op::cosh, e, [](double x) { return std::cosh(x); }); }
Expr tanh(const Expr& e) { return fold_call(Op::tanh, e, [](double x) { return std::tanh(x); }); }

// ---------------------------------------------------------------------------
// Transformations

namespace {

/// Post-order rewrite with memoisation on node identity.
class Rewriter {
 public:
  using Leaf = std::function<Expr(const Expr&)>;
  explicit Rewriter(Leaf leaf) : leaf_(std::move(leaf)) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    Expr r;
    if (e.op() == Op::constant || e.op() == Op::variable) {
      r = leaf_(e);
    } else if (is_unary(e.op())) {
      r = rebuild_unary(e.op(), (*this)(e.operand()));
    } else {
      r = rebuild_binary(e.op(), (*this)(e.lhs()), (*this)(e.rhs()));
    }
    memo_.emplace(e.node(), r);
    return r;
  }

  static Expr rebuild_unary(Op op, const Expr& a) {
    switch (op) {
      case Op::neg: return -a;
      case Op::sqrt: return sqrt(a);
      case Op::exp: return exp(a);
      case Op::log: return log(a);
      case Op::sin: return sin(a);
      case Op::cos: return cos(a);
      case Op::sinh: return sinh(a);
      case Op::cosh: return cosh(a);
      case Op::tanh: return tanh(a);
      default: return Expr::unary(op, a);
    }
  }

  static Expr rebuild_binary(Op op, const Expr& a, const Expr& b) {
    switch (op) {
      case Op::add: return a + b;
      case Op::sub: return a - b;
      case Op::mul: return a * b;
      case Op::div: return a / b;
      case Op::pow: return pow(a, b);
      default: return Expr::binary(op, a, b);
    }
  }

 private:
  Leaf leaf_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

class Differentiator {
 public:
  explicit Differentiator(std::size_t index) : index_(index) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    Expr d = derive(e);
    memo_.emplace(e.node(), d);
    return d;
  }

 private:
  Expr derive(const Expr& e) {
    switch (e.op()) {
      case Op::constant:
        return Expr(0.0);
      case Op::variable:
        return Expr(e.variable_index() == index_ ? 1.0 : 0.0);
      case Op::add:
        return (*this)(e.lhs()) + (*this)(e.rhs());
      case Op::sub:
        return (*this)(e.lhs()) - (*this)(e.rhs());
      case Op::mul:
        return (*this)(e.lhs()) * e.rhs() + e.lhs() * (*this)(e.rhs());
      case Op::div: {
        const Expr du = (*this)(e.lhs());
        const Expr dv = (*this)(e.rhs());
        if (dv.is_constant(0.0)) return du / e.rhs();
        return (du * e.rhs() - e.lhs() * dv) / (e.rhs() * e.rhs());
      }
      case Op::pow: {
        const Expr& u = e.lhs();
        const Expr& v = e.rhs();
        const Expr du = (*this)(u);
        const Expr dv = (*this)(v);
        if (dv.is_constant(0.0)) {
          if (v.is_constant()) return Expr(v.constant_value()) * pow(u, Expr(v.constant_value() - 1.0)) * du;
          return v * pow(u, v - Expr(1.0)) * du;
        }
        return e * (dv * log(u) + v * du / u);
      }
      case Op::neg:
        return -(*this)(e.operand());
      case Op::sqrt:
        return (*this)(e.operand()) / (Expr(2.0) * e);
      case Op::exp:
        return e * (*this)(e.operand());
      case Op::log:
        return (*this)(e.operand()) / e.operand();
      case Op::sin:
        return cos(e.operand()) * (*this)(e.operand());
      case Op::cos:
        return -(sin(e.operand()) * (*this)(e.operand()));
      case Op::sinh:
        return cosh(e.operand()) * (*this)(e.operand());
      case Op::cosh:
        return sinh(e.operand()) * (*this)(e.operand());
      case Op::tanh:
        return (Expr(1.0) - e * e) * (*this)(e.operand());
    }
    return Expr(0.0);
  }

  std::size_t index_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, std::size_t index) { return Differentiator(index)(e); }

Expr substitute(const Expr& e, std::span<const Expr> values) {
  Rewriter r([values](const Expr& leaf) -> Expr {
    if (leaf.op() == Op::variable) {
      if (leaf.variable_index() >= values.size()) throw UnknownVariable(leaf.variable_name());
      return values[leaf.variable_index()];
    }
    return leaf;
  });
  return r(e);
}

Expr remap_variables(const Expr& e, std::span<const std::size_t> index_map, std::span<const std::string> names) {
  Rewriter r([&](const Expr& leaf) -> Expr {
    if (leaf.op() == Op::variable) {
      if (leaf.variable_index() >= index_map.size()) throw UnknownVariable(leaf.variable_name());
      const std::size_t target = index_map[leaf.variable_index()];
      return Expr::variable(target, names[target]);
    }
    return leaf;
  });
  return r(e);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using J2 = Jet2<double>;

double checked_divisor(double v) {
  if (v == 0.0) throw DomainError("division by zero");
  return v;
}

J2 jet_pow(const J2& u, const J2& v) {
  if (v.is_locally_constant()) {
    const double c = v.value();
    const double x = u.value();
    const bool integral = std::floor(c) == c;
    if (x < 0.0 && !integral) throw DomainError("non-integer power of a negative number");
    if (x == 0.0 && c < 2.0 && c != 0.0 && c != 1.0) throw DomainError("power not differentiable at zero");
    auto term = [&](double coeff, double e) { return coeff == 0.0 ? 0.0 : coeff * std::pow(x, e); };
    return u.compose(std::pow(x, c), term(c, c - 1.0), term(c * (c - 1.0), c - 2.0));
  }
  if (u.value() <= 0.0) throw DomainError("variable power of a non-positive base");
  const double lx = std::log(u.value());
  const J2 log_u = u.compose(lx, 1.0 / u.value(), -1.0 / (u.value() * u.value()));
  const J2 m = v * log_u;
  const double em = std::exp(m.value());
  return m.compose(em, em, em);
}

J2 jet_call(Op op, const J2& u) {
  const double x = u.value();
  switch (op) {
    case Op::neg:
      return -u;
    case Op::sqrt: {
      if (x < 0.0) throw DomainError("sqrt of negative number");
      if (x == 0.0) throw DomainError("sqrt not differentiable at zero");
      const double s = std::sqrt(x);
      return u.compose(s, 0.5 / s, -0.25 / (s * x));
    }
    case Op::exp: {
      const double e = std::exp(x);
      return u.compose(e, e, e);
    }
    case Op::log:
      if (x <= 0.0) throw DomainError("log of non-positive number");
      return u.compose(std::log(x), 1.0 / x, -1.0 / (x * x));
    case Op::sin:
      return u.compose(std::sin(x), std::cos(x), -std::sin(x));
    case Op::cos:
      return u.compose(std::cos(x), -std::sin(x), -std::cos(x));
    case Op::sinh:
      return u.compose(std::sinh(x), std::cosh(x), std::sinh(x));
    case Op::cosh:
      return u.compose(std::cosh(x), std::sinh(x), std::cosh(x));
    case Op::tanh: {
      const double t = std::tanh(x);
      const double s = 1.0 - t * t;
      return u.compose(t, s, -2.0 * t * s);
    }
    default:
      break;
  }
  return u;
}

double value_call(Op op, double x) {
  switch (op) {
    case Op::neg: return -x;
    case Op::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative number");
      return std::sqrt(x);
    case Op::exp: return std::exp(x);
    case Op::log:
      if (x <= 0.0) throw DomainError("log of non-positive number");
      return std::log(x);
    case Op::sin: return std::sin(x);
    case Op::cos: return std::cos(x);
    case Op::sinh: return std::sinh(x);
    case Op::cosh: return std::cosh(x);
    case Op::tanh: return std::tanh(x);
    default: return x;
  }
}

}  // namespace

JetEvaluator::JetEvaluator(const Eigen::VectorXd& point) : point_(point) {
  if (point.size() > kMaxJetDim) throw InvalidParameters("chart dimension exceeds jet capacity");
}

const Jet2<double>& JetEvaluator::operator()(const Expr& e) {
  if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second;
  const Eigen::Index n = point_.size();
  J2 r;
  switch (e.op()) {
    case Op::constant:
      r = J2::constant(e.constant_value(), n);
      break;
    case Op::variable:
      if (static_cast<Eigen::Index>(e.variable_index()) >= n) throw UnknownVariable(e.variable_name());
      r = J2::variable(point_(static_cast<Eigen::Index>(e.variable_index())), n,
                       static_cast<Eigen::Index>(e.variable_index()));
      break;
    case Op::add:
      r = (*this)(e.lhs()) + (*this)(e.rhs());
      break;
    case Op::sub:
      r = (*this)(e.lhs()) - (*this)(e.rhs());
      break;
    case Op::mul:
      r = (*this)(e.lhs()) * (*this)(e.rhs());
      break;
    case Op::div: {
      const J2& v = (*this)(e.rhs());
      checked_divisor(v.value());
      r = (*this)(e.lhs()) * v.reciprocal();
      break;
    }
    case Op::pow:
      r = jet_pow((*this)(e.lhs()), (*this)(e.rhs()));
      break;
    default:
      r = jet_call(e.op(), (*this)(e.operand()));
      break;
  }
  return cache_.emplace(e.node(), std::move(r)).first->second;
}

double ValueEvaluator::operator()(const Expr& e) {
  if (e.op() == Op::constant) return e.constant_value();
  if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second;
  double r = 0.0;
  switch (e.op()) {
    case Op::variable:
      if (static_cast<Eigen::Index>(e.variable_index()) >= point_.size()) throw UnknownVariable(e.variable_name());
      r = point_(static_cast<Eigen::Index>(e.variable_index()));
      break;
    case Op::add: r = (*this)(e.lhs()) + (*this)(e.rhs()); break;
    case Op::sub: r = (*this)(e.lhs()) - (*this)(e.rhs()); break;
    case Op::mul: r = (*this)(e.lhs()) * (*this)(e.rhs()); break;
    case Op::div: {
      const double den = checked_divisor((*this)(e.rhs()));
      r = (*this)(e.lhs()) / den;
      break;
    }
    case Op::pow: {
      const double x = (*this)(e.lhs());
      const double c = (*this)(e.rhs());
      if (x < 0.0 && std::floor(c) != c) throw DomainError("non-integer power of a negative number");
      r = std::pow(x, c);
      break;
    }
    default:
      r = value_call(e.op(), (*this)(e.operand()));
      break;
  }
  cache_.emplace(e.node(), r);
  return r;
}

Jet2<double> eval_jet2(const Expr& e, const Eigen::VectorXd& point) { return JetEvaluator(point)(e); }

double eval(const Expr& e, const Eigen::VectorXd& point) { return ValueEvaluator(point)(e); }

// ---------------------------------------------------------------------------
// Matrices of expressions

ExprMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows, std::span<const std::string> coords) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = n == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  ExprMatrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != m) throw InvalidParameters("ragged matrix");
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = parse(rows[i][j], coords);
  }
  return out;
}

namespace {
Expr determinant_of(const ExprMatrix& m, std::vector<Eigen::Index>& cols, Eigen::Index row) {
  const Eigen::Index n = m.rows();
  if (row == n) return Expr(1.0);
  Expr sum(0.0);
  int sign = 1;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Eigen::Index c = cols[k];
    if (!m(row, c).is_constant(0.0)) {
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
      const Expr term = m(row, c) * determinant_of(m, cols, row + 1);
      cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), c);
      sum = sign > 0 ? sum + term : sum - term;
    }
    sign = -sign;
  }
  return sum;
}
}  // namespace

Expr determinant(const ExprMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidParameters("determinant of a non-square matrix");
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) cols[static_cast<std::size_t>(j)] = j;
  return determinant_of(m, cols, 0);
}

ExprMatrix inverse(const ExprMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw InvalidParameters("inverse of a non-square matrix");
  const Expr det = determinant(m);
  ExprMatrix inv(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // cofactor C_ji
      ExprMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const Expr cof = determinant(minor);
      inv(i, j) = ((i + j) % 2 == 0 ? cof : -cof) / det;
    }
  }
  return inv;
}

Eigen::MatrixXd eval(const ExprMatrix& m, const Eigen::VectorXd& point) {
  ValueEvaluator ev(point);
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = ev(m(i, j));
  return out;
}

}  // namespace metallic
