#include "classim/cli/config.hpp"

#include <toml.hpp>

#include "classim/cli/formats.hpp"
#include "classim/core/errors.hpp"

namespace classim::cli {

classifiers::TrainConfig parse_train_config(std::string_view text, std::string_view source,
                                            std::uint64_t default_seed) {
  toml::table doc;
  try {
    doc = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw DataError(std::string(source) + ": " + std::string(e.description()) + " (line " +
                    std::to_string(e.source().begin.line) + ")");
  }
  auto fail = [&](const std::string& msg) { throw DataError(std::string(source) + ": " + msg); };

  classifiers::TrainConfig config;
  config.seed = default_seed;
  for (const auto& [key, node] : doc) {
    const std::string_view k = key.str();
    if (k == "learning_rate" || k == "l2") {
      const auto v = node.value<double>();
      if (!v) fail(std::string(k) + " must be a number");
      (k == "l2" ? config.l2 : config.learning_rate) = *v;
    } else if (k == "epochs") {
      const auto v = node.value<std::int64_t>();
      if (!v || *v < 0 || *v > 1000000000) fail("epochs must be a non-negative integer");
      config.epochs = static_cast<int>(*v);
    } else if (k == "seed") {
      const auto v = node.value<std::int64_t>();
      if (!v || *v < 0) fail("seed must be a non-negative integer");
      config.seed = static_cast<std::uint64_t>(*v);
    } else if (k == "class_weighting") {
      const auto v = node.value<std::string>();
      if (!v) fail("class_weighting must be a string");
      try {
        config.class_weighting = classifiers::parse_class_weighting(*v);
      } catch (const std::exception& e) {
        fail(e.what());
      }
    } else {
      fail("unknown key '" + std::string(k) + "'");
    }
  }
  try {
    config.validate();
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return config;
}

classifiers::TrainConfig load_train_config(const std::filesystem::path& path,
                                           std::uint64_t default_seed) {
  return parse_train_config(read_file(path), path.string(), default_seed);
}

}  // namespace classim::cli
