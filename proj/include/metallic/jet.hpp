#ifndef METALLIC_JET_HPP
#define METALLIC_JET_HPP

#include <cassert>
#include <cmath>

#include <Eigen/Dense>

namespace metallic {

/// Largest chart dimension a jet can carry. Storage is inline, so jet
/// arithmetic never touches the heap.
inline constexpr int kMaxJetDim = 8;

/// Second-order jet of a scalar function at a point: value, gradient and
/// Hessian. The Hessian is stored once per unordered index pair (packed upper
/// triangle, row major), so it is symmetric by construction.
template <typename Scalar>
class Jet2 {
 public:
  using Gradient = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxJetDim, 1>;
  using Packed =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxJetDim*(kMaxJetDim + 1) / 2, 1>;
  using Hessian = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Jet2() = default;

  static Jet2 constant(Scalar value, Eigen::Index dim) {
    assert(dim >= 0 && dim <= kMaxJetDim);
    Jet2 j;
    j.value_ = value;
    j.gradient_ = Gradient::Zero(dim);
    j.packed_ = Packed::Zero(packed_size(dim));
    return j;
  }

  /// The coordinate function x_index evaluated at `value`.
  static Jet2 variable(Scalar value, Eigen::Index dim, Eigen::Index index) {
    Jet2 j = constant(value, dim);
    j.gradient_(index) = Scalar(1);
    return j;
  }

  static constexpr Eigen::Index packed_size(Eigen::Index dim) { return dim * (dim + 1) / 2; }

  Eigen::Index dim() const { return gradient_.size(); }
  Scalar value() const { return value_; }
  const Gradient& gradient() const { return gradient_; }
  Scalar gradient(Eigen::Index i) const { return gradient_(i); }

  Scalar hessian(Eigen::Index i, Eigen::Index j) const { return packed_(packed_index(i, j)); }
  Hessian hessian() const {
    const Eigen::Index n = dim();
    Hessian h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) h(i, j) = h(j, i) = packed_(packed_index(i, j));
    return h;
  }
  const Packed& packed_hessian() const { return packed_; }

  /// True when both derivative orders vanish identically.
  bool is_locally_constant() const {
    return (gradient_.array() == Scalar(0)).all() && (packed_.array() == Scalar(0)).all();
  }

  /// f(u) given f, f', f'' at u.value().
  Jet2 compose(Scalar f0, Scalar f1, Scalar f2) const {
    Jet2 r;
    r.value_ = f0;
    r.gradient_ = f1 * gradient_;
    r.packed_ = f1 * packed_;
    if (f2 != Scalar(0)) r.add_outer(f2, gradient_, gradient_);
    return r;
  }

  Jet2 operator-() const {
    Jet2 r;
    r.value_ = -value_;
    r.gradient_ = -gradient_;
    r.packed_ = -packed_;
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    value_ += o.value_;
    gradient_ += o.gradient_;
    packed_ += o.packed_;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    value_ -= o.value_;
    gradient_ -= o.gradient_;
    packed_ -= o.packed_;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    Packed p = o.value_ * packed_ + value_ * o.packed_;
    const Gradient g = o.value_ * gradient_ + value_ * o.gradient_;
    std::swap(packed_, p);
    add_outer(Scalar(1), gradient_, o.gradient_);
    add_outer(Scalar(1), o.gradient_, gradient_);
    gradient_ = g;
    value_ *= o.value_;
    return *this;
  }
  Jet2& operator*=(Scalar s) {
    value_ *= s;
    gradient_ *= s;
    packed_ *= s;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator*(Jet2 a, Scalar s) { return a *= s; }
  friend Jet2 operator*(Scalar s, Jet2 a) { return a *= s; }

  /// 1/u. The caller guarantees u.value() != 0.
  Jet2 reciprocal() const {
    const Scalar inv = Scalar(1) / value_;
    return compose(inv, -inv * inv, Scalar(2) * inv * inv * inv);
  }

 private:
  Eigen::Index packed_index(Eigen::Index i, Eigen::Index j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * dim() - i - 1) / 2 + j;
  }

  void add_outer(Scalar s, const Gradient& a, const Gradient& b) {
    const Eigen::Index n = dim();
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j, ++k) packed_(k) += s * a(i) * b(j);
  }

  Scalar value_{};
  Gradient gradient_;
  Packed packed_;
};

}  // namespace metallic

#endif  // METALLIC_JET_HPP
