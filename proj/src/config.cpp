#include "metallic/config.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "metallic/errors.hpp"

namespace metallic {

namespace {

using json = nlohmann::json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!keys.contains(key)) throw ConfigError(child(path, key), "unknown field");
}

const json& require(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(path, key), "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<long long>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> strings(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string(v[i], child(path, i)));
  return out;
}

Expr expression(const json& v, std::span<const std::string> coords, const std::string& path) {
  if (v.is_number()) return Expr(v.get<double>());
  if (!v.is_string()) throw ConfigError(path, "expected an expression string or a number");
  try {
    return parse(v.get<std::string>(), coords);
  } catch (const SyntaxError& e) {
    throw ConfigError(path, e.what());
  } catch (const UnknownVariable& e) {
    throw ConfigError(path, e.what());
  }
}

ExprVector expression_vector(const json& v, std::span<const std::string> coords, Eigen::Index n,
                             const std::string& path) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n)
    throw ConfigError(path, "expected an array of " + std::to_string(n) + " expressions");
  ExprVector out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = expression(v[static_cast<std::size_t>(i)], coords, child(path, static_cast<std::size_t>(i)));
  return out;
}

ExprMatrix expression_matrix(const json& v, std::span<const std::string> coords, Eigen::Index n,
                             const std::string& path) {
  if (v.is_string() && v.get<std::string>() == "euclidean") {
    ExprMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = Expr(i == j ? 1.0 : 0.0);
    return out;
  }
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n)
    throw ConfigError(path, "expected \"euclidean\" or a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  ExprMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const ExprVector row = expression_vector(v[ui], coords, n, child(path, ui));
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = row(j);
  }
  return out;
}

Interval interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [lo, hi]");
  Interval iv{number(v[0], child(path, 0)), number(v[1], child(path, 1))};
  if (!(iv.lo <= iv.hi)) throw ConfigError(path, "interval has lo > hi");
  return iv;
}

std::vector<Interval> intervals(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array() || v.size() != n)
    throw ConfigError(path, "expected " + std::to_string(n) + " intervals, one per coordinate");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(interval(v[i], child(path, i)));
  return out;
}

std::vector<std::string> coordinate_names(const json& v, const std::string& path) {
  auto names = strings(v, path);
  if (names.empty()) throw ConfigError(path, "at least one coordinate is required");
  const std::set<std::string> unique(names.begin(), names.end());
  if (unique.size() != names.size()) throw ConfigError(path, "coordinate names must be distinct");
  if (names.size() > static_cast<std::size_t>(kMaxJetDim))
    throw ConfigError(path, "at most " + std::to_string(kMaxJetDim) + " coordinates are supported");
  return names;
}

ChartedManifold manifold(const json& v, const std::string& path) {
  check_keys(v, path, {"coords", "box", "metric"});
  const auto coords = coordinate_names(require(v, path, "coords"), child(path, "coords"));
  const auto n = static_cast<Eigen::Index>(coords.size());
  auto box = intervals(require(v, path, "box"), coords.size(), child(path, "box"));
  const json metric = v.contains("metric") ? v["metric"] : json("euclidean");
  const ExprMatrix g = expression_matrix(metric, coords, n, child(path, "metric"));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (!structurally_equal(g(i, j), g(j, i)))
        throw ConfigError(child(child(child(path, "metric"), static_cast<std::size_t>(j)), static_cast<std::size_t>(i)),
                          "metric must be symmetric");
  return ChartedManifold(coords, std::move(box), g);
}

MetallicStructure metallic_structure(const json& v, std::span<const std::string> coords, const std::string& path) {
  check_keys(v, path, {"p", "q", "J"});
  const auto p = integer(require(v, path, "p"), child(path, "p"));
  const auto q = integer(require(v, path, "q"), child(path, "q"));
  if (p < 1) throw ConfigError(child(path, "p"), "p must be a positive integer");
  if (q < 1) throw ConfigError(child(path, "q"), "q must be a positive integer");
  const auto n = static_cast<Eigen::Index>(coords.size());
  TensorField11 J{expression_matrix(require(v, path, "J"), coords, n, child(path, "J"))};
  return MetallicStructure(static_cast<int>(p), static_cast<int>(q), std::move(J));
}

template <typename F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

void parse_quadratic(const json& v, const std::string& path, VerificationConfig& c) {
  check_keys(v, path, {"a", "b", "phi", "eta", "xi", "metric_compatible", "beta", "associated"});
  if (!c.manifold) throw ConfigError(path, "a quadratic structure needs a \"manifold\"");
  const auto& coords = c.manifold->coords();
  const auto n = c.manifold->dim();
  const double a = number(require(v, path, "a"), child(path, "a"));
  const double b = number(require(v, path, "b"), child(path, "b"));
  TensorField11 phi{expression_matrix(require(v, path, "phi"), coords, n, child(path, "phi"))};
  OneForm eta{expression_vector(require(v, path, "eta"), coords, n, child(path, "eta"))};
  VectorField xi{expression_vector(require(v, path, "xi"), coords, n, child(path, "xi"))};
  c.quadratic.emplace(wrap(path, [&] { return QuadraticPhiStructure(a, b, phi, eta, xi); }));
  if (v.contains("metric_compatible")) {
    if (!v["metric_compatible"].is_boolean()) throw ConfigError(child(path, "metric_compatible"), "expected a boolean");
    c.metric_compatible = v["metric_compatible"].get<bool>();
  }
  if (v.contains("beta")) c.quadratic_beta = expression(v["beta"], coords, child(path, "beta"));
  if (v.contains("associated")) {
    const std::string ap = child(path, "associated");
    const json& assoc = v["associated"];
    check_keys(assoc, ap, {"constants", "h_tilde"});
    const json& k = require(assoc, ap, "constants");
    const std::string kp = child(ap, "constants");
    if (!k.is_array() || k.size() != 4) throw ConfigError(kp, "expected [c_alpha, c_beta, c_gamma, c_delta]");
    AssociatedMetricConstants constants{number(k[0], child(kp, 0)), number(k[1], child(kp, 1)),
                                        number(k[2], child(kp, 2)), number(k[3], child(kp, 3))};
    wrap(kp, [&] {
      constants.validate(a, b);
      return 0;
    });
    c.associated = constants;
    if (assoc.contains("h_tilde")) c.h_tilde = expression_matrix(assoc["h_tilde"], coords, n, child(ap, "h_tilde"));
  }
}

void parse_warped(const json& v, const std::string& path, VerificationConfig& c) {
  check_keys(v, path, {"t", "interval", "f", "fiber", "fiber_metallic", "beta", "expected_beta"});
  WarpedProduct wp;
  if (v.contains("t")) wp.t_name = string(v["t"], child(path, "t"));
  if (v.contains("interval")) wp.base = interval(v["interval"], child(path, "interval"));
  wp.fiber = manifold(require(v, path, "fiber"), child(path, "fiber"));
  for (const auto& name : wp.fiber.coords())
    if (name == wp.t_name) throw ConfigError(child(path, "fiber") + "/coords", "fiber coordinate clashes with t");
  const std::string t_only[] = {wp.t_name};
  wp.f = expression(require(v, path, "f"), t_only, child(path, "f"));
  if (v.contains("fiber_metallic"))
    wp.fiber_structure = metallic_structure(v["fiber_metallic"], wp.fiber.coords(), child(path, "fiber_metallic"));
  wrap(child(path, "f"), [&] { return warped_metric(wp); });
  const auto coords = wp.coords();
  if (v.contains("beta")) c.warped_beta = expression(v["beta"], coords, child(path, "beta"));
  if (v.contains("expected_beta")) c.expected_beta = expression(v["expected_beta"], coords, child(path, "expected_beta"));
  c.warped = std::move(wp);
}

void parse_hypersurface(const json& v, const std::string& path, VerificationConfig& c) {
  check_keys(v, path, {"ambient", "ambient_metallic", "params", "box", "embedding", "orientation", "beta"});
  ChartedManifold ambient = manifold(require(v, path, "ambient"), child(path, "ambient"));
  MetallicStructure structure =
      metallic_structure(require(v, path, "ambient_metallic"), ambient.coords(), child(path, "ambient_metallic"));
  const auto params = coordinate_names(require(v, path, "params"), child(path, "params"));
  auto box = intervals(require(v, path, "box"), params.size(), child(path, "box"));
  ExprVector embedding = expression_vector(require(v, path, "embedding"), params, ambient.dim(), child(path, "embedding"));
  int orientation = 1;
  if (v.contains("orientation")) {
    const auto o = integer(v["orientation"], child(path, "orientation"));
    if (o != 1 && o != -1) throw ConfigError(child(path, "orientation"), "orientation must be 1 or -1");
    orientation = static_cast<int>(o);
  }
  if (v.contains("beta")) c.hypersurface_beta = number(v["beta"], child(path, "beta"));
  c.hypersurface.emplace(wrap(path, [&] {
    return Hypersurface(std::move(ambient), std::move(structure), params, std::move(box), std::move(embedding),
                        orientation);
  }));
}

// ---------------------------------------------------------------------------

struct Context {
  const VerificationConfig& config;
  std::size_t samples;
  std::uint64_t seed;
  double tol;

  std::vector<Vector> points(const std::vector<Interval>& box) const { return sample_points(box, samples, seed); }
};

/// The chart and metallic structure a metallic-structure check runs on.
struct MetallicTarget {
  const ChartedManifold* chart = nullptr;
  const MetallicStructure* structure = nullptr;
};

MetallicTarget metallic_target(const VerificationConfig& c) {
  if (c.manifold && c.metallic) return {&*c.manifold, &*c.metallic};
  if (c.warped && c.warped->fiber_structure) return {&c.warped->fiber, &*c.warped->fiber_structure};
  if (c.hypersurface) return {&c.hypersurface->ambient(), &c.hypersurface->structure()};
  return {};
}

struct QuadraticTarget {
  ChartedManifold chart;
  QuadraticPhiStructure structure;
  std::optional<Expr> beta;
  bool with_metric = true;
};

std::optional<QuadraticTarget> quadratic_target(const VerificationConfig& c) {
  if (c.manifold && c.quadratic) return QuadraticTarget{*c.manifold, *c.quadratic, c.quadratic_beta, c.metric_compatible};
  if (c.warped && c.warped->fiber_structure) {
    InducedQuadraticStructure induced = induce_phi(*c.warped);
    std::optional<Expr> beta = c.warped_beta;
    if (!beta) {
      const Expr f = c.warped->warping();
      beta = -differentiate(f, 0) / f;
    }
    return QuadraticTarget{std::move(induced.manifold), std::move(induced.structure), beta, true};
  }
  return std::nullopt;
}

const ChartedManifold* primary_chart(const VerificationConfig& c, std::optional<ChartedManifold>& storage) {
  if (c.manifold) return &*c.manifold;
  if (c.warped) {
    storage = warped_metric(*c.warped);
    return &*storage;
  }
  if (c.hypersurface) return &c.hypersurface->induced();
  return nullptr;
}

struct CheckSpec {
  std::string name;
  std::string requirement;
  std::function<bool(const VerificationConfig&)> available;
  std::function<VerificationReport(const Context&)> run;
};

const Hypersurface& surface(const Context& ctx) { return *ctx.config.hypersurface; }
std::vector<Vector> surface_points(const Context& ctx) { return ctx.points(surface(ctx).induced().box()); }

const std::vector<CheckSpec>& check_specs() {
  auto has_metallic = [](const VerificationConfig& c) { return metallic_target(c).chart != nullptr; };
  auto has_quadratic = [](const VerificationConfig& c) {
    return (c.manifold && c.quadratic) || (c.warped && c.warped->fiber_structure);
  };
  auto has_chart = [](const VerificationConfig& c) { return c.manifold || c.warped || c.hypersurface; };
  auto has_warped = [](const VerificationConfig& c) { return c.warped.has_value(); };
  auto has_fiber_structure = [](const VerificationConfig& c) { return c.warped && c.warped->fiber_structure; };
  auto has_surface = [](const VerificationConfig& c) { return c.hypersurface.has_value(); };
  static const std::vector<CheckSpec> specs = {
      {"levi_civita", "a manifold, warped product or hypersurface", has_chart,
       [](const Context& ctx) {
         std::optional<ChartedManifold> storage;
         const ChartedManifold* m = primary_chart(ctx.config, storage);
         return verify_levi_civita(*m, ctx.points(m->box()), ctx.tol);
       }},
      {"metallic", "a metallic structure", has_metallic,
       [](const Context& ctx) {
         const auto t = metallic_target(ctx.config);
         return verify_metallic(*t.chart, *t.structure, ctx.points(t.chart->box()), ctx.tol);
       }},
      {"locally_metallic", "a metallic structure", has_metallic,
       [](const Context& ctx) {
         const auto t = metallic_target(ctx.config);
         return verify_locally_metallic(*t.chart, *t.structure, ctx.points(t.chart->box()), ctx.tol);
       }},
      {"integrable", "a metallic structure", has_metallic,
       [](const Context& ctx) {
         const auto t = metallic_target(ctx.config);
         return verify_integrable(*t.chart, *t.structure, ctx.points(t.chart->box()), ctx.tol);
       }},
      {"product_roundtrip", "a metallic structure", has_metallic,
       [](const Context& ctx) {
         const auto t = metallic_target(ctx.config);
         return verify_product_roundtrip(*t.structure, ctx.points(t.chart->box()), ctx.tol);
       }},
      {"quadratic_phi", "a quadratic structure or a warped product with a fiber structure", has_quadratic,
       [](const Context& ctx) {
         const auto t = quadratic_target(ctx.config);
         return verify_quadratic_phi(t->chart, t->structure, ctx.points(t->chart.box()), ctx.tol, t->with_metric);
       }},
      {"spectral", "a quadratic structure or a warped product with a fiber structure", has_quadratic,
       [](const Context& ctx) {
         const auto t = quadratic_target(ctx.config);
         return verify_spectral(t->structure, ctx.points(t->chart.box()), ctx.tol);
       }},
      {"associated_metric", "a quadratic structure with \"associated\" constants",
       [](const VerificationConfig& c) { return c.manifold && c.quadratic && c.associated; },
       [](const Context& ctx) {
         const auto& c = ctx.config;
         return verify_associated_metric(*c.manifold, *c.quadratic, *c.associated, ctx.points(c.manifold->box()),
                                         ctx.tol, c.h_tilde);
       }},
      {"kenmotsu", "a warped product with a fiber structure, or a quadratic structure with \"beta\"",
       [](const VerificationConfig& c) {
         return (c.warped && c.warped->fiber_structure) || (c.manifold && c.quadratic && c.quadratic_beta);
       },
       [](const Context& ctx) {
         const auto t = quadratic_target(ctx.config);
         return verify_kenmotsu(t->chart, t->structure, *t->beta, ctx.points(t->chart.box()), ctx.tol);
       }},
      {"nijenhuis_phi", "a quadratic structure or a warped product with a fiber structure", has_quadratic,
       [](const Context& ctx) {
         const auto t = quadratic_target(ctx.config);
         return nijenhuis_phi_check(t->chart, t->structure, ctx.points(t->chart.box()), ctx.tol, t->beta);
       }},
      {"az", "a warped product", has_warped,
       [](const Context& ctx) {
         const auto& wp = *ctx.config.warped;
         return verify_az_formulas(wp, ctx.points(warped_metric(wp).box()), ctx.tol);
       }},
      {"induced_phi", "a warped product with a fiber structure", has_fiber_structure,
       [](const Context& ctx) {
         const InducedQuadraticStructure s = induce_phi(*ctx.config.warped);
         VerificationReport r = verify_quadratic_phi(s.manifold, s.structure, ctx.points(s.manifold.box()), ctx.tol);
         for (auto& c : r.checks) c.name = "induced_phi." + c.name.substr(c.name.find('.') + 1);
         return r;
       }},
      {"qc", "a warped product with a fiber structure", has_fiber_structure,
       [](const Context& ctx) {
         const auto& wp = *ctx.config.warped;
         return theorem_qc_check(wp, ctx.points(warped_metric(wp).box()), ctx.tol, ctx.config.expected_beta);
       }},
      {"shape_operator", "a hypersurface", has_surface,
       [](const Context& ctx) { return verify_shape_operator(surface(ctx), surface_points(ctx), ctx.tol); }},
      {"metallic_shaped", "a hypersurface", has_surface,
       [](const Context& ctx) { return verify_metallic_shaped(surface(ctx), surface_points(ctx), ctx.tol); }},
      {"induced_structure", "a hypersurface", has_surface,
       [](const Context& ctx) { return verify_induced_structure(surface(ctx), surface_points(ctx), ctx.tol); }},
      {"structure_equations", "a hypersurface", has_surface,
       [](const Context& ctx) { return verify_structure_equations(surface(ctx), surface_points(ctx), ctx.tol); }},
      {"killing", "a hypersurface", has_surface,
       [](const Context& ctx) { return killing_check(surface(ctx), surface_points(ctx), ctx.tol); }},
      {"kenmotsu_hypersurface", "a hypersurface", has_surface,
       [](const Context& ctx) {
         return kenmotsu_hypersurface_check(surface(ctx), surface_points(ctx), ctx.tol, ctx.config.hypersurface_beta);
       }},
      {"curvature_xi", "a hypersurface", has_surface,
       [](const Context& ctx) { return curvature_xi_check(surface(ctx), surface_points(ctx), ctx.tol); }},
  };
  return specs;
}

const CheckSpec* find_spec(const std::string& name) {
  for (const auto& s : check_specs())
    if (s.name == name) return &s;
  return nullptr;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : check_specs()) out.push_back(s.name);
    return out;
  }();
  return names;
}

VerificationConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character
    throw ConfigError("", "invalid JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  check_keys(doc, "", {"name", "description", "samples", "seed", "tol", "tolerances", "notes", "checks", "manifold",
                       "metallic", "quadratic", "warped", "hypersurface"});
  VerificationConfig c;
  c.name = doc.contains("name") ? string(doc["name"], "/name") : "config";
  if (doc.contains("description")) c.description = string(doc["description"], "/description");
  if (doc.contains("samples")) {
    const auto s = integer(doc["samples"], "/samples");
    if (s < 1) throw ConfigError("/samples", "samples must be positive");
    c.samples = static_cast<std::size_t>(s);
  }
  if (doc.contains("seed")) {
    const auto s = integer(doc["seed"], "/seed");
    if (s < 0) throw ConfigError("/seed", "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("tol")) {
    c.tol = number(doc["tol"], "/tol");
    if (!(*c.tol > 0.0)) throw ConfigError("/tol", "tolerance must be positive");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("/tolerances", "expected an object mapping check names to tolerances");
    for (const auto& [key, value] : t.items()) {
      if (!find_spec(key)) throw ConfigError("/tolerances/" + key, "unknown check");
      const double v = number(value, "/tolerances/" + key);
      if (!(v > 0.0)) throw ConfigError("/tolerances/" + key, "tolerance must be positive");
      c.tolerances[key] = v;
    }
  }
  if (doc.contains("notes")) c.notes = strings(doc["notes"], "/notes");

  if (doc.contains("manifold")) c.manifold = manifold(doc["manifold"], "/manifold");
  if (doc.contains("metallic")) {
    if (!c.manifold) throw ConfigError("/metallic", "a metallic structure needs a \"manifold\"");
    c.metallic = metallic_structure(doc["metallic"], c.manifold->coords(), "/metallic");
    if (c.metallic->J.dim() != c.manifold->dim()) throw ConfigError("/metallic/J", "dimension mismatch");
  }
  if (doc.contains("quadratic")) parse_quadratic(doc["quadratic"], "/quadratic", c);
  if (doc.contains("warped")) parse_warped(doc["warped"], "/warped", c);
  if (doc.contains("hypersurface")) parse_hypersurface(doc["hypersurface"], "/hypersurface", c);

  c.checks = strings(require(doc, "", "checks"), "/checks");
  if (c.checks.empty()) throw ConfigError("/checks", "at least one check is required");
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const CheckSpec* spec = find_spec(c.checks[i]);
    if (!spec) throw ConfigError(child("/checks", i), "unknown check '" + c.checks[i] + "'");
    if (!spec->available(c))
      throw ConfigError(child("/checks", i), "check '" + c.checks[i] + "' needs " + spec->requirement);
  }
  return c;
}

VerificationReport run_checks(const VerificationConfig& config, const RunOptions& options) {
  const std::size_t samples = options.samples.value_or(config.samples.value_or(kDefaultSamples));
  const std::uint64_t seed = options.seed.value_or(config.seed.value_or(kDefaultSeed));
  const double tol = options.tol.value_or(config.tol.value_or(kDefaultTolerance));
  VerificationReport report;
  report.name = config.name;
  for (const auto& name : config.checks) {
    const CheckSpec& spec = *find_spec(name);
    double check_tol = tol;
    if (!options.tol)
      if (const auto it = config.tolerances.find(name); it != config.tolerances.end()) check_tol = it->second;
    const Context ctx{config, samples, seed, check_tol};
    try {
      report.append(spec.run(ctx));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      CheckResult failed;
      failed.name = name;
      failed.description = "check raised an error";
      failed.tolerance = check_tol;
      failed.pass = false;
      failed.notes.push_back(e.what());
      report.add(std::move(failed));
    }
  }
  for (const auto& n : config.notes) report.notes.push_back(n);
  return report;
}

RunOutcome run_config_text(std::string_view text, const RunOptions& options) {
  RunOutcome out;
  VerificationReport report;
  try {
    report = run_checks(parse_config(text), options);
  } catch (const ConfigError& e) {
    out.exit_code = 2;
    out.diagnostics = "config error: " + std::string(e.what()) + "\n";
    return out;
  }
  out.output = options.format == OutputFormat::json ? to_json(report) : to_text(report);
  out.exit_code = report.passed() ? 0 : 1;
  return out;
}

RunOutcome run_verify(const std::string& path, const RunOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return RunOutcome{2, "", "config error: cannot read '" + path + "'\n"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  RunOutcome out = run_config_text(buffer.str(), options);
  if (out.exit_code == 2) out.diagnostics = path + ": " + out.diagnostics;
  return out;
}

}  // namespace metallic
