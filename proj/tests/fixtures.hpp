#ifndef METALLIC_TESTS_FIXTURES_HPP
#define METALLIC_TESTS_FIXTURES_HPP

#include <string>

#include "metallic/catalog.hpp"
#include "metallic/config.hpp"

namespace fixtures {

inline metallic::VerificationConfig load(const std::string& name) {
  return metallic::parse_config(metallic::example_source(name));
}

// Golden structure sigma I - sqrt(5) n n^T on R^3, where n is normal to the
// non-integrable plane field dz - y dx = 0. J^2 = J + I and J is symmetric, but
// it is not parallel and its Nijenhuis tensor does not vanish.
inline const char* const kBrokenFiber = R"json({
  "name": "broken_fiber",
  "warped": {
    "t": "t",
    "interval": [-1, 1],
    "f": "exp(t)",
    "fiber": {
      "coords": ["x", "y", "z"],
      "box": [[-1, 1], [-1, 1], [-1, 1]],
      "metric": "euclidean"
    },
    "fiber_metallic": {
      "p": 1,
      "q": 1,
      "J": [["(1+sqrt(5))/2 - sqrt(5)*y^2/(1+y^2)", 0, "sqrt(5)*y/(1+y^2)"],
            [0, "(1+sqrt(5))/2", 0],
            ["sqrt(5)*y/(1+y^2)", 0, "(1+sqrt(5))/2 - sqrt(5)/(1+y^2)"]]
    },
    "beta": -1
  },
  "checks": ["locally_metallic", "integrable", "nijenhuis_phi"]
})json";

}  // namespace fixtures

#endif  // METALLIC_TESTS_FIXTURES_HPP
