#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "metallic/catalog.hpp"
#include "metallic/errors.hpp"

namespace {

int emit(const metallic::RunOutcome& out) {
  std::cout << out.output;
  std::cerr << out.diagnostics;
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify metallic and quadratic phi-structure identities at sampled chart points"};
  app.require_subcommand(1);
  app.fallthrough();

  std::size_t samples = metallic::kDefaultSamples;
  std::uint64_t seed = metallic::kDefaultSeed;
  double tol = metallic::kDefaultTolerance;
  metallic::OutputFormat format = metallic::OutputFormat::text;
  auto* samples_opt = app.add_option("--samples", samples, "Sample points per check (default 100)")
                          ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed of the sampling sequence (default 42)");
  auto* tol_opt = app.add_option("--tol", tol, "Absolute residual tolerance (default 1e-9)")->check(CLI::PositiveNumber);
  const std::map<std::string, metallic::OutputFormat> formats{{"text", metallic::OutputFormat::text},
                                                              {"json", metallic::OutputFormat::json}};
  app.add_option("--format", format, "Report format: text or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  std::string path;
  auto* verify = app.add_subcommand("verify", "Run the checks listed in a JSON config");
  verify->add_option("path", path, "Config file")->required();

  auto* examples = app.add_subcommand("examples", "Bundled example configurations");
  examples->require_subcommand(1);
  auto* list = examples->add_subcommand("list", "List the bundled examples");
  std::string name;
  auto* run = examples->add_subcommand("run", "Run a bundled example");
  run->add_option("name", name, "Example name")->required();
  auto* show = examples->add_subcommand("show", "Print the JSON config of a bundled example");
  show->add_option("name", name, "Example name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  metallic::RunOptions options;
  if (samples_opt->count() > 0) options.samples = samples;
  if (seed_opt->count() > 0) options.seed = seed;
  if (tol_opt->count() > 0) options.tol = tol;
  options.format = format;

  try {
    if (verify->parsed()) return emit(metallic::run_verify(path, options));
    if (list->parsed()) {
      for (const auto& e : metallic::list_examples()) std::cout << e.name << "  " << e.description << "\n";
      return 0;
    }
    if (run->parsed()) return emit(metallic::run_example(name, options));
    if (show->parsed()) {
      std::cout << metallic::example_source(name);
      return 0;
    }
  } catch (const metallic::UnknownExample& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
