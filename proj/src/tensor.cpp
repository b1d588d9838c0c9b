#include "metallic/tensor.hpp"

#include <cmath>
#include <random>

#include "metallic/errors.hpp"

namespace metallic {

ChartedManifold::ChartedManifold(std::vector<std::string> coords, std::vector<Interval> box, const ExprMatrix& metric)
    : coords_(std::move(coords)), box_(std::move(box)) {
  const auto n = dim();
  if (n == 0) throw InvalidParameters("chart needs at least one coordinate");
  if (n > kMaxJetDim) throw InvalidParameters("chart dimension exceeds " + std::to_string(kMaxJetDim));
  if (static_cast<Eigen::Index>(box_.size()) != n) throw InvalidParameters("sample box does not match chart dimension");
  if (metric.rows() != n || metric.cols() != n) throw InvalidParameters("metric does not match chart dimension");
  for (const auto& iv : box_)
    if (!(iv.lo <= iv.hi)) throw InvalidParameters("sample interval with lo > hi");
  upper_.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) upper_.push_back(metric(i, j));
}

const Expr& ChartedManifold::metric(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  const auto n = dim();
  return upper_[static_cast<std::size_t>(i * (2 * n - i - 1) / 2 + j)];
}

ExprMatrix ChartedManifold::metric() const {
  const auto n = dim();
  ExprMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = metric(i, j);
  return g;
}

Matrix ChartedManifold::metric_at(const Vector& p) const {
  ValueEvaluator ev(p);
  const auto n = dim();
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) g(i, j) = g(j, i) = ev(metric(i, j));
  return g;
}

TensorField11 TensorField11::identity(Eigen::Index dim) {
  TensorField11 k{ExprMatrix(dim, dim)};
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) k.components(i, j) = Expr(i == j ? 1.0 : 0.0);
  return k;
}

VectorField VectorField::coordinate(Eigen::Index dim, Eigen::Index i) {
  VectorField x{ExprVector(dim)};
  for (Eigen::Index k = 0; k < dim; ++k) x.components(k) = Expr(k == i ? 1.0 : 0.0);
  return x;
}

Matrix MatrixFieldJet::directional(const Vector& x) const {
  Matrix out = Matrix::Zero(value.rows(), value.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) out += x(i) * partial[static_cast<std::size_t>(i)];
  return out;
}

MatrixFieldJet field_jet(const ExprMatrix& m, JetEvaluator& ev) {
  const auto n = ev.dim();
  MatrixFieldJet out{Matrix(m.rows(), m.cols()), std::vector<Matrix>(static_cast<std::size_t>(n), Matrix(m.rows(), m.cols()))};
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      const auto& j = ev(m(a, b));
      out.value(a, b) = j.value();
      for (Eigen::Index i = 0; i < n; ++i) out.partial[static_cast<std::size_t>(i)](a, b) = j.gradient(i);
    }
  }
  return out;
}

VectorFieldJet field_jet(const ExprVector& v, JetEvaluator& ev) {
  const auto n = ev.dim();
  VectorFieldJet out{Vector(v.size()), Matrix(v.size(), n)};
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const auto& j = ev(v(k));
    out.value(k) = j.value();
    out.jacobian.row(k) = j.gradient().transpose();
  }
  return out;
}

MatrixFieldJet field_jet(const TensorField11& k, const Vector& p) {
  JetEvaluator ev(p);
  return field_jet(k.components, ev);
}

VectorFieldJet field_jet(const VectorField& x, const Vector& p) {
  JetEvaluator ev(p);
  return field_jet(x.components, ev);
}

VectorFieldJet field_jet(const OneForm& eta, const Vector& p) {
  JetEvaluator ev(p);
  return field_jet(eta.components, ev);
}

// ---------------------------------------------------------------------------

PointFrame PointFrame::at(const ChartedManifold& m, const Vector& p) {
  JetEvaluator ev(p);
  return at(m, ev, p);
}

PointFrame PointFrame::at(const ChartedManifold& m, JetEvaluator& ev, const Vector& p) {
  const auto n = m.dim();
  if (p.size() != n) throw InvalidParameters("point dimension does not match chart");
  const auto un = static_cast<std::size_t>(n);
  PointFrame f;
  f.point = p;
  f.metric.resize(n, n);
  f.metric_partial.assign(un, Matrix(n, n));
  std::vector<std::vector<Matrix>> second(un, std::vector<Matrix>(un, Matrix(n, n)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& jet = ev(m.metric(i, j));
      f.metric(i, j) = f.metric(j, i) = jet.value();
      for (Eigen::Index a = 0; a < n; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        f.metric_partial[ua](i, j) = f.metric_partial[ua](j, i) = jet.gradient(a);
        for (Eigen::Index b = 0; b < n; ++b)
          second[ua][static_cast<std::size_t>(b)](i, j) = second[ua][static_cast<std::size_t>(b)](j, i) =
              jet.hessian(a, b);
      }
    }
  }
  Eigen::FullPivLU<Matrix> lu(f.metric);
  if (!lu.isInvertible() || !std::isfinite(f.metric.sum()))
    throw SingularMetric("metric is singular at the requested point");
  f.metric_inverse = lu.inverse();
  f.metric_inverse = 0.5 * (f.metric_inverse + f.metric_inverse.transpose()).eval();

  // First-kind symbols and their partials: first[l](i, j) = Gamma_lij.
  std::vector<Matrix> first(un, Matrix(n, n));
  std::vector<std::vector<Matrix>> first_partial(un, std::vector<Matrix>(un, Matrix(n, n)));
  for (std::size_t l = 0; l < un; ++l) {
    const auto el = static_cast<Eigen::Index>(l);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        first[l](i, j) = first[l](j, i) =
            0.5 * (f.metric_partial[ui](j, el) + f.metric_partial[uj](i, el) - f.metric_partial[l](i, j));
        for (std::size_t mm = 0; mm < un; ++mm) {
          first_partial[mm][l](i, j) = first_partial[mm][l](j, i) =
              0.5 * (second[mm][ui](j, el) + second[mm][uj](i, el) - second[mm][l](i, j));
        }
      }
    }
  }

  f.gamma.assign(un, Matrix::Zero(n, n));
  for (std::size_t k = 0; k < un; ++k)
    for (std::size_t l = 0; l < un; ++l)
      f.gamma[k] += f.metric_inverse(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * first[l];

  f.gamma_partial.assign(un, Christoffel(un, Matrix::Zero(n, n)));
  for (std::size_t mm = 0; mm < un; ++mm) {
    const Matrix dinv = -f.metric_inverse * f.metric_partial[mm] * f.metric_inverse;
    for (std::size_t k = 0; k < un; ++k) {
      for (std::size_t l = 0; l < un; ++l) {
        const auto ek = static_cast<Eigen::Index>(k);
        const auto el = static_cast<Eigen::Index>(l);
        f.gamma_partial[mm][k] += dinv(ek, el) * first[l] + f.metric_inverse(ek, el) * first_partial[mm][l];
      }
    }
  }
  return f;
}

double PointFrame::norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

Vector PointFrame::contract(const Vector& x, const Vector& y) const {
  Vector out(dim());
  for (Eigen::Index k = 0; k < dim(); ++k) out(k) = x.dot(gamma[static_cast<std::size_t>(k)] * y);
  return out;
}

Christoffel christoffel(const ChartedManifold& m, const Vector& p) { return PointFrame::at(m, p).gamma; }

namespace {

/// conn(a, c) = Gamma^a_{i c}
Matrix connection_matrix(const Christoffel& gamma, Eigen::Index i) {
  const auto n = static_cast<Eigen::Index>(gamma.size());
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) out.row(a) = gamma[static_cast<std::size_t>(a)].row(i);
  return out;
}

Matrix directional_connection(const Christoffel& gamma, const Vector& x) {
  const auto n = static_cast<Eigen::Index>(gamma.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (x(i) != 0.0) out += x(i) * connection_matrix(gamma, i);
  return out;
}

}  // namespace

Vector covariant_derivative(const PointFrame& f, const VectorFieldJet& y, const Vector& x) {
  return y.jacobian * x + directional_connection(f.gamma, x) * y.value;
}

Matrix covariant_derivative_11(const PointFrame& f, const MatrixFieldJet& k, const Vector& x) {
  const Matrix conn = directional_connection(f.gamma, x);
  return k.directional(x) + conn * k.value - k.value * conn;
}

Vector covariant_derivative_11(const PointFrame& f, const MatrixFieldJet& k, const Vector& x, const Vector& y) {
  return covariant_derivative_11(f, k, x) * y;
}

Vector covariant_derivative_11(const ChartedManifold& m, const TensorField11& k, const Vector& x, const Vector& y,
                               const Vector& p) {
  JetEvaluator ev(p);
  const PointFrame f = PointFrame::at(m, ev, p);
  return covariant_derivative_11(f, field_jet(k.components, ev), x, y);
}

double covariant_derivative_form(const PointFrame& f, const VectorFieldJet& eta, const Vector& x, const Vector& y) {
  const Matrix conn = directional_connection(f.gamma, x);
  return y.dot(eta.jacobian * x - conn.transpose() * eta.value);
}

Matrix covariant_derivative_metric(const PointFrame& f, const Vector& x) {
  Matrix dg = Matrix::Zero(f.dim(), f.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) dg += x(i) * f.metric_partial[static_cast<std::size_t>(i)];
  const Matrix conn = directional_connection(f.gamma, x);
  return dg - conn.transpose() * f.metric - f.metric * conn;
}

Vector lie_bracket(const VectorFieldJet& x, const VectorFieldJet& y) {
  return y.jacobian * x.value - x.jacobian * y.value;
}

Vector lie_bracket(const VectorField& x, const VectorField& y, const Vector& p) {
  JetEvaluator ev(p);
  return lie_bracket(field_jet(x.components, ev), field_jet(y.components, ev));
}

VectorFieldJet apply(const MatrixFieldJet& k, const VectorFieldJet& x) {
  VectorFieldJet out{k.value * x.value, k.value * x.jacobian};
  for (std::size_t i = 0; i < k.partial.size(); ++i)
    out.jacobian.col(static_cast<Eigen::Index>(i)) += k.partial[i] * x.value;
  return out;
}

Vector nijenhuis(const MatrixFieldJet& k, const VectorFieldJet& x, const VectorFieldJet& y) {
  const VectorFieldJet kx = apply(k, x);
  const VectorFieldJet ky = apply(k, y);
  const Matrix& K = k.value;
  return K * (K * lie_bracket(x, y)) + lie_bracket(kx, ky) - K * lie_bracket(kx, y) - K * lie_bracket(x, ky);
}

Vector nijenhuis(const TensorField11& k, const VectorField& x, const VectorField& y, const Vector& p) {
  JetEvaluator ev(p);
  return nijenhuis(field_jet(k.components, ev), field_jet(x.components, ev), field_jet(y.components, ev));
}

Vector riemann(const PointFrame& f, const Vector& x, const Vector& y, const Vector& z) {
  const auto n = f.dim();
  Vector out = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    const Matrix gi = connection_matrix(f.gamma, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (y(j) == 0.0 || i == j) continue;
      const Matrix gj = connection_matrix(f.gamma, j);
      const Matrix di_gj = connection_matrix(f.gamma_partial[static_cast<std::size_t>(i)], j);
      const Matrix dj_gi = connection_matrix(f.gamma_partial[static_cast<std::size_t>(j)], i);
      out += x(i) * y(j) * ((di_gj - dj_gi + gi * gj - gj * gi) * z);
    }
  }
  return out;
}

Vector riemann(const ChartedManifold& m, const Vector& x, const Vector& y, const Vector& z, const Vector& p) {
  return riemann(PointFrame::at(m, p), x, y, z);
}

double sectional_curvature(const PointFrame& f, const Vector& x, const Vector& y) {
  const double area = f.inner(x, x) * f.inner(y, y) - std::pow(f.inner(x, y), 2);
  return f.inner(riemann(f, x, y, y), x) / area;
}

std::vector<Vector> sample_points(const std::vector<Interval>& box, std::size_t count, std::uint64_t seed) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const std::size_t dim = box.size();
  if (dim > std::size(kPrimes)) throw InvalidParameters("sampling dimension too large");
  std::mt19937_64 rng(seed);
  std::vector<double> shift(dim);
  for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;

  std::vector<Vector> points;
  points.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    Vector p(static_cast<Eigen::Index>(dim));
    for (std::size_t d = 0; d < dim; ++d) {
      const int base = kPrimes[d];
      double f = 1.0, r = 0.0;
      for (std::size_t k = i; k > 0; k /= static_cast<std::size_t>(base)) {
        f /= base;
        r += f * static_cast<double>(k % static_cast<std::size_t>(base));
      }
      double u = r + shift[d];
      if (u >= 1.0) u -= 1.0;
      p(static_cast<Eigen::Index>(d)) = box[d].lo + u * (box[d].hi - box[d].lo);
    }
    points.push_back(std::move(p));
  }
  return points;
}

double min_eigenvalue(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace metallic
