#ifndef METALLIC_ERRORS_HPP
#define METALLIC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metallic {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(std::string name)
      : Error("unknown variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class ComplexSpectrum : public Error {
 public:
  using Error::Error;
};

class NonPositiveWarping : public Error {
 public:
  using Error::Error;
};

class MissingFiberStructure : public Error {
 public:
  using Error::Error;
};

class FiberNotLocallyMetallic : public Error {
 public:
  using Error::Error;
};

class DegenerateImmersion : public Error {
 public:
  using Error::Error;
};

/// The normal does not satisfy g(Jν,ν) = p and |tan(Jν)|² = q at a point.
class FrameConditionViolated : public Error {
 public:
  FrameConditionViolated(double normal_component, double tangential_norm, const std::string& where)
      : Error("frame condition violated" + where + ": g(Jv,v) = " + std::to_string(normal_component) +
              ", |tan(Jv)| = " + std::to_string(tangential_norm)),
        normal_component_(normal_component),
        tangential_norm_(tangential_norm) {}
  double normal_component() const noexcept { return normal_component_; }
  double tangential_norm() const noexcept { return tangential_norm_; }

 private:
  double normal_component_;
  double tangential_norm_;
};

class QNotOne : public Error {
 public:
  using Error::Error;
};

class NotKenmotsu : public Error {
 public:
  using Error::Error;
};

class UnknownExample : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; `field` is a JSON pointer into the document.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace metallic

#endif  // METALLIC_ERRORS_HPP
