#ifndef METALLIC_CONFIG_HPP
#define METALLIC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metallic/hypersurface.hpp"
#include "metallic/warped.hpp"

namespace metallic {

enum class OutputFormat { text, json };

/// Command-line overrides; unset fields fall back to the config, then to the defaults.
struct RunOptions {
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  OutputFormat format = OutputFormat::text;
};

inline constexpr std::size_t kDefaultSamples = 100;
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kDefaultTolerance = 1e-9;

/// A parsed and validated configuration. Every expression has been parsed
/// against its chart and every structure constructed.
struct VerificationConfig {
  std::string name;
  std::string description;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::map<std::string, double> tolerances;
  std::vector<std::string> notes;
  std::vector<std::string> checks;

  std::optional<ChartedManifold> manifold;
  std::optional<MetallicStructure> metallic;

  std::optional<QuadraticPhiStructure> quadratic;
  bool metric_compatible = true;
  std::optional<Expr> quadratic_beta;
  std::optional<AssociatedMetricConstants> associated;
  std::optional<ExprMatrix> h_tilde;

  std::optional<WarpedProduct> warped;
  std::optional<Expr> warped_beta;
  std::optional<Expr> expected_beta;

  std::optional<Hypersurface> hypersurface;
  std::optional<double> hypersurface_beta;
};

/// Names accepted in the "checks" list, in documentation order.
const std::vector<std::string>& check_names();

/// Throws ConfigError naming the offending field as a JSON pointer.
VerificationConfig parse_config(std::string_view text);

/// Runs every requested check. Library errors raised inside a check become
/// failed entries of the report; configuration problems throw ConfigError.
VerificationReport run_checks(const VerificationConfig& config, const RunOptions& options);

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 check failure, 2 configuration error
  std::string output;
  std::string diagnostics;
};

RunOutcome run_config_text(std::string_view text, const RunOptions& options);
RunOutcome run_verify(const std::string& path, const RunOptions& options);

}  // namespace metallic

#endif  // METALLIC_CONFIG_HPP
