#include "metallic/catalog.hpp"

#include <json.hpp>

#include "metallic/errors.hpp"

namespace metallic {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& catalog_sources();
}

std::vector<CatalogEntry> list_examples() {
  std::vector<CatalogEntry> out;
  for (const auto& [name, source] : detail::catalog_sources()) {
    const auto doc = nlohmann::json::parse(source);
    out.push_back({std::string(name), doc.value("description", std::string())});
  }
  return out;
}

std::string_view example_source(std::string_view name) {
  for (const auto& [entry, source] : detail::catalog_sources())
    if (entry == name) return source;
  throw UnknownExample("no bundled example named '" + std::string(name) + "'");
}

RunOutcome run_example(std::string_view name, const RunOptions& options) {
  return run_config_text(example_source(name), options);
}

}  // namespace metallic
