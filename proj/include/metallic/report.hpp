#ifndef METALLIC_REPORT_HPP
#define METALLIC_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "metallic/tensor.hpp"

namespace metallic {

/// Residual statistics of one identity over the sampled points.
struct CheckResult {
  std::string name;
  std::string description;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  Vector worst_point;
  double tolerance = 0.0;
  bool pass = true;
  std::vector<std::string> notes;
  /// Extra named values (eigenvalues, estimated constants, ...), reported as is.
  std::map<std::string, double> values;
};

struct VerificationReport {
  std::string name;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool passed() const;
  const CheckResult* find(const std::string& check) const;
  const CheckResult& at(const std::string& check) const;
  void append(VerificationReport other);
  void add(CheckResult c) { checks.push_back(std::move(c)); }
};

/// Accumulates residuals point by point. Non-finite residuals count as
/// infinitely large.
class ResidualAccumulator {
 public:
  ResidualAccumulator(std::string name, std::string description, double tolerance);

  void add(const Vector& point, double residual);
  void note(std::string text) { notes_.push_back(std::move(text)); }
  void value(const std::string& key, double v) { values_[key] = v; }
  /// Forces failure regardless of the residuals.
  void fail(std::string why);
  double max() const { return max_; }
  std::size_t count() const { return count_; }

  CheckResult finish() const;

 private:
  std::string name_;
  std::string description_;
  double tolerance_;
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double max_ = 0.0;
  Vector worst_;
  bool forced_fail_ = false;
  std::vector<std::string> notes_;
  std::map<std::string, double> values_;
};

std::string to_json(const VerificationReport& r);
std::string to_text(const VerificationReport& r);

/// Largest absolute entry; 0 for empty input.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Formats a double with enough digits to round-trip.
std::string format_double(double v);

}  // namespace metallic

#endif  // METALLIC_REPORT_HPP
