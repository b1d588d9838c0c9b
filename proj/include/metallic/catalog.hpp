#ifndef METALLIC_CATALOG_HPP
#define METALLIC_CATALOG_HPP

#include <string>
#include <string_view>
#include <vector>

#include "metallic/config.hpp"

namespace metallic {

struct CatalogEntry {
  std::string name;
  std::string description;
};

/// Bundled example configurations, sorted by name.
std::vector<CatalogEntry> list_examples();
/// Raw JSON of a bundled example. Throws UnknownExample.
std::string_view example_source(std::string_view name);
RunOutcome run_example(std::string_view name, const RunOptions& options);

}  // namespace metallic

#endif  // METALLIC_CATALOG_HPP
