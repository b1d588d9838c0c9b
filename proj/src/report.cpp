#include "metallic/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "metallic/errors.hpp"

namespace metallic {

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* VerificationReport::find(const std::string& check) const {
  for (const auto& c : checks)
    if (c.name == check) return &c;
  return nullptr;
}

const CheckResult& VerificationReport::at(const std::string& check) const {
  if (const auto* c = find(check)) return *c;
  throw Error("report has no check named '" + check + "'");
}

void VerificationReport::append(VerificationReport other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
  for (auto& n : other.notes) notes.push_back(std::move(n));
}

ResidualAccumulator::ResidualAccumulator(std::string name, std::string description, double tolerance)
    : name_(std::move(name)), description_(std::move(description)), tolerance_(tolerance) {}

void ResidualAccumulator::add(const Vector& point, double residual) {
  if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
  ++count_;
  sum_ += residual;
  if (count_ == 1 || residual > max_) {
    max_ = residual;
    worst_ = point;
  }
}

void ResidualAccumulator::fail(std::string why) {
  forced_fail_ = true;
  notes_.push_back(std::move(why));
}

CheckResult ResidualAccumulator::finish() const {
  CheckResult r;
  r.name = name_;
  r.description = description_;
  r.samples = count_;
  r.max_residual = max_;
  r.mean_residual = count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_);
  r.worst_point = worst_;
  r.tolerance = tolerance_;
  r.pass = !forced_fail_ && max_ <= tolerance_;
  r.notes = notes_;
  r.values = values_;
  return r;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string to_json(const VerificationReport& r) {
  json doc;
  doc["name"] = r.name;
  doc["pass"] = r.passed();
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j;
    j["name"] = c.name;
    j["description"] = c.description;
    j["pass"] = c.pass;
    j["samples"] = c.samples;
    j["max_residual"] = number(c.max_residual);
    j["mean_residual"] = number(c.mean_residual);
    j["tolerance"] = c.tolerance;
    json worst = json::array();
    for (Eigen::Index i = 0; i < c.worst_point.size(); ++i) worst.push_back(number(c.worst_point(i)));
    j["worst_point"] = worst;
    if (!c.values.empty()) {
      json values = json::object();
      for (const auto& [k, v] : c.values) values[k] = number(v);
      j["values"] = values;
    }
    j["notes"] = c.notes;
    checks.push_back(std::move(j));
  }
  doc["checks"] = checks;
  doc["notes"] = r.notes;
  return doc.dump(2) + "\n";
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream out;
  out << "report: " << r.name << "\n";
  for (const auto& c : r.checks) {
    out << (c.pass ? "  PASS " : "  FAIL ") << c.name << "  max=" << format_double(c.max_residual)
        << " mean=" << format_double(c.mean_residual) << " tol=" << format_double(c.tolerance)
        << " n=" << c.samples << "\n";
    if (!c.description.empty()) out << "       " << c.description << "\n";
    if (c.samples > 0 && c.worst_point.size() > 0 && c.max_residual > 0.0) {
      out << "       worst at (";
      for (Eigen::Index i = 0; i < c.worst_point.size(); ++i)
        out << (i ? ", " : "") << format_double(c.worst_point(i));
      out << ")\n";
    }
    for (const auto& [k, v] : c.values) out << "       " << k << " = " << format_double(v) << "\n";
    for (const auto& n : c.notes) out << "       note: " << n << "\n";
  }
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  out << (r.passed() ? "overall: PASS" : "overall: FAIL") << "\n";
  return out.str();
}

}  // namespace metallic
