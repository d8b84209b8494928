#include "classim/oracle/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "classim/core/errors.hpp"

namespace classim::oracle {

namespace {

const std::set<std::string, std::less<>> kTopLevelKeys{
    "seed", "samples_per_class", "sampling", "annotation_noise", "priors", "classes"};

[[noreturn]] void fail(std::string_view source, const std::string& msg) {
  throw DataError(std::string(source) + ": " + msg);
}

double number(const toml::node& node, std::string_view source, const std::string& where) {
  if (auto v = node.value<double>()) return *v;
  fail(source, where + " must be a number");
}

std::vector<double> number_array(const toml::node* node, std::string_view source,
                                 const std::string& where) {
  const auto* arr = node ? node->as_array() : nullptr;
  if (!arr) fail(source, where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : *arr) out.push_back(number(item, source, where));
  return out;
}

Density parse_density(const toml::table& spec, std::string_view source, const std::string& name) {
  const std::string where = "classes." + name;
  const auto family = spec["family"].value<std::string>();
  if (!family) fail(source, where + ".family is required");
  if (*family == "gaussian") {
    for (const auto& [key, _] : spec) {
      if (key != "family" && key != "mean" && key != "variance") {
        fail(source, where + ": unknown key '" + std::string(key.str()) + "'");
      }
    }
    GaussianDensity g;
    g.mean = number_array(spec.get("mean"), source, where + ".mean");
    g.variance = number_array(spec.get("variance"), source, where + ".variance");
    return g;
  }
  if (*family == "discrete") {
    for (const auto& [key, _] : spec) {
      if (key != "family" && key != "support" && key != "probabilities") {
        fail(source, where + ": unknown key '" + std::string(key.str()) + "'");
      }
    }
    DiscreteDensity d;
    const auto* support = spec.get_as<toml::array>("support");
    if (!support) fail(source, where + ".support must be an array");
    for (const auto& point : *support) {
      if (point.is_array()) {
        d.support.push_back(number_array(&point, source, where + ".support"));
      } else {
        d.support.push_back({number(point, source, where + ".support")});
      }
    }
    d.probabilities = number_array(spec.get("probabilities"), source, where + ".probabilities");
    return d;
  }
  fail(source, where + ": unsupported density family '" + *family + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
  toml::table doc;
  try {
    doc = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ")";
    fail(source, msg.str());
  }

  for (const auto& [key, _] : doc) {
    if (!kTopLevelKeys.contains(key.str())) {
      fail(source, "unknown key '" + std::string(key.str()) + "'");
    }
  }

  const auto seed = doc["seed"].value<std::int64_t>();
  if (!seed || *seed < 0) fail(source, "seed must be a non-negative integer");
  const auto per_class = doc["samples_per_class"].value<std::int64_t>();
  if (!per_class || *per_class <= 0) fail(source, "samples_per_class must be a positive integer");

  const auto* classes = doc["classes"].as_table();
  if (!classes || classes->empty()) fail(source, "[classes] must define at least two classes");
  std::map<ClassLabel, Density> components;
  for (const auto& [name, spec] : *classes) {
    const auto* table = spec.as_table();
    if (!table) fail(source, "classes." + std::string(name.str()) + " must be a table");
    components.emplace(std::string(name.str()), parse_density(*table, source, std::string(name.str())));
  }

  std::map<ClassLabel, double> priors;
  if (const auto* table = doc["priors"].as_table()) {
    for (const auto& [name, value] : *table) {
      priors.emplace(std::string(name.str()), number(value, source, "priors." + std::string(name.str())));
    }
  } else if (doc.contains("priors")) {
    fail(source, "priors must be a table");
  }

  try {
    Scenario s = Scenario::create(std::move(components), std::move(priors),
                                  static_cast<std::uint64_t>(*seed),
                                  static_cast<std::size_t>(*per_class));
    if (doc.contains("sampling")) {
      const auto scheme = doc["sampling"].value<std::string>();
      if (scheme == "per_class") {
        s.sampling = SamplingScheme::per_class;
      } else if (scheme == "prior_proportional") {
        s.sampling = SamplingScheme::prior_proportional;
      } else {
        fail(source, "sampling must be \"per_class\" or \"prior_proportional\"");
      }
    }
    if (doc.contains("annotation_noise")) {
      s.annotation_noise = number(*doc.get("annotation_noise"), source, "annotation_noise");
    }
    s.validate();
    return s;
  } catch (const DataError& e) {
    if (std::string_view(e.what()).starts_with(source)) throw;
    fail(source, e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read scenario file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string());
}

}  // namespace classim::oracle
