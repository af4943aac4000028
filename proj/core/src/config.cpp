#include "dgff/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dgff/io.hpp"

namespace dgff {

namespace {

using Json = nlohmann::json;

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> names = {"sample", "extrema", "stats",
                                              "lqg", "kernels"};
  return names;
}

const std::set<std::string>& known_shapes() {
  static const std::set<std::string> names = {
      "square", "rectangle", "disc", "square_minus_cross",
      "square_minus_slit"};
  return names;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigInvalid(field + ": " + what);
}

double require_number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigInvalid(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config", "top level must be an object");

  static const std::set<std::string> allowed = {
      "experiment", "domain", "scales", "replicas", "seed",
      "threads",    "output_dir", "params", "options"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!allowed.count(key)) fail(key, "unknown field");
  }

  ExperimentConfig config;
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
    fail("experiment", "required string field");
  }
  config.experiment = doc["experiment"].get<std::string>();
  if (!known_experiments().count(config.experiment)) {
    fail("experiment", "unknown value '" + config.experiment + "'");
  }

  if (doc.contains("domain")) {
    const Json& domain = doc["domain"];
    if (!domain.is_object()) fail("domain", "expected an object");
    if (!domain.contains("shape") || !domain["shape"].is_string()) {
      fail("domain.shape", "required string field");
    }
    config.domain_shape = domain["shape"].get<std::string>();
    if (!known_shapes().count(config.domain_shape)) {
      fail("domain.shape", "unknown value '" + config.domain_shape + "'");
    }
    for (const auto& [key, value] : domain.items()) {
      if (key == "shape") continue;
      config.domain_params[key] = require_number(value, "domain." + key);
    }
  }

  if (doc.contains("scales")) {
    if (!doc["scales"].is_array()) fail("scales", "expected an array");
    for (std::size_t i = 0; i < doc["scales"].size(); ++i) {
      const Json& s = doc["scales"][i];
      const std::string field = "scales[" + std::to_string(i) + "]";
      if (!s.is_number_integer()) fail(field, "expected an integer");
      const long long v = s.get<long long>();
      if (v < 2) fail(field, "scale must be at least 2");
      config.scales.push_back(static_cast<int>(v));
    }
  }

  if (doc.contains("replicas")) {
    if (!doc["replicas"].is_number_unsigned() ||
        doc["replicas"].get<unsigned long long>() < 1) {
      fail("replicas", "expected a positive integer");
    }
    config.replicas = doc["replicas"].get<std::size_t>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      fail("seed", "expected an unsigned integer");
    }
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    if (!doc["threads"].is_number_integer() ||
        doc["threads"].get<long long>() < 0) {
      fail("threads", "expected a nonnegative integer (0 = auto)");
    }
    config.threads = doc["threads"].get<int>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail("output_dir", "expected a string");
    config.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) fail("params", "expected an object");
    for (const auto& [key, value] : doc["params"].items()) {
      config.params[key] = require_number(value, "params." + key);
    }
  }
  if (doc.contains("options")) {
    if (!doc["options"].is_object()) fail("options", "expected an object");
    for (const auto& [key, value] : doc["options"].items()) {
      if (!value.is_string()) fail("options." + key, "expected a string");
      config.options[key] = value.get<std::string>();
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigInvalid("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string canonical_config_string(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "experiment=" << config.experiment << ";domain=" << config.domain_shape;
  for (const auto& [key, value] : config.domain_params) {
    out << ',' << key << '=' << format_double(value);
  }
  out << ";scales=";
  for (std::size_t i = 0; i < config.scales.size(); ++i) {
    if (i) out << ',';
    out << config.scales[i];
  }
  out << ";replicas=" << config.replicas;
  out << ";seed=" << config.seed;
  out << ";params=";
  bool first = true;
  for (const auto& [key, value] : config.params) {
    if (!first) out << ',';
    first = false;
    out << key << '=' << format_double(value);
  }
  out << ";options=";
  first = true;
  for (const auto& [key, value] : config.options) {
    if (!first) out << ',';
    first = false;
    out << key << '=' << value;
  }
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  return hex64(fnv1a64(canonical_config_string(config)));
}

namespace {

double param_or(const std::map<std::string, double>& map,
                const std::string& key, double fallback) {
  const auto it = map.find(key);
  return it == map.end() ? fallback : it->second;
}

}  // namespace

ContinuumDomain domain_from_config(const ExperimentConfig& config) {
  const auto& p = config.domain_params;
  if (config.domain_shape == "square") {
    const double side = param_or(p, "side", 1.0);
    const double x0 = param_or(p, "x0", 0.0);
    const double y0 = param_or(p, "y0", 0.0);
    if (!(side > 0.0)) throw ConfigInvalid("domain.side: must be positive");
    return square(side, {x0, y0});
  }
  if (config.domain_shape == "rectangle") {
    const double x0 = param_or(p, "x0", 0.0);
    const double y0 = param_or(p, "y0", 0.0);
    const double x1 = param_or(p, "x1", 1.0);
    const double y1 = param_or(p, "y1", 1.0);
    if (!(x1 > x0) || !(y1 > y0)) {
      throw ConfigInvalid("domain: rectangle needs x1 > x0 and y1 > y0");
    }
    return rectangle({x0, y0}, {x1, y1});
  }
  if (config.domain_shape == "disc") {
    const double r = param_or(p, "radius", 1.0);
    if (!(r > 0.0)) throw ConfigInvalid("domain.radius: must be positive");
    return disc({param_or(p, "cx", 0.0), param_or(p, "cy", 0.0)}, r);
  }
  if (config.domain_shape == "square_minus_cross") {
    const double w = param_or(p, "width", 1.0 / 64.0);
    if (!(w > 0.0) || !(w < 0.5)) {
      throw ConfigInvalid("domain.width: cross width must lie in (0, 0.5)");
    }
    return ContinuumDomain(
        {Rect{{0.0, 0.0}, {1.0, 1.0}}},
        {Rect{{0.5 - w, 0.0}, {0.5 + w, 1.0}},
         Rect{{0.0, 0.5 - w}, {1.0, 0.5 + w}}});
  }
  if (config.domain_shape == "square_minus_slit") {
    const double sx = param_or(p, "slit_x", 0.5);
    const double y0 = param_or(p, "slit_y0", 0.25);
    const double y1 = param_or(p, "slit_y1", 0.75);
    if (!(y1 > y0) || sx <= 0.0 || sx >= 1.0 || y0 < 0.0 || y1 > 1.0) {
      throw ConfigInvalid("domain: slit must be a vertical segment inside "
                          "the unit square");
    }
    return ContinuumDomain({Rect{{0.0, 0.0}, {1.0, 1.0}}},
                           {Rect{{sx, y0}, {sx, y1}}});
  }
  throw ConfigInvalid("domain.shape: unknown value '" + config.domain_shape +
                      "'");
}

}  // namespace dgff
