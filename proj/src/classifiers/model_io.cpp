#include "classim/classifiers/model_io.hpp"

#include <fstream>

#include "classim/core/errors.hpp"

namespace classim::classifiers {

using nlohmann::json;

json train_config_to_json(const TrainConfig& config) {
  return json{{"learning_rate", config.learning_rate},
              {"epochs", config.epochs},
              {"l2", config.l2},
              {"seed", config.seed},
              {"class_weighting", std::string(to_string(config.class_weighting))}};
}

TrainConfig train_config_from_json(const json& doc) {
  TrainConfig config;
  config.learning_rate = doc.at("learning_rate").get<double>();
  config.epochs = doc.at("epochs").get<int>();
  config.l2 = doc.at("l2").get<double>();
  config.seed = doc.at("seed").get<std::uint64_t>();
  config.class_weighting = parse_class_weighting(doc.at("class_weighting").get<std::string>());
  config.validate();
  return config;
}

json model_to_json(const LinearModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = std::string(to_string(model.kind()));
  if (model.kind() == ModelKind::binary) {
    doc["target"] = model.target();
    doc["negatives"] = model.negatives();
  } else {
    doc["classes"] = model.classes().labels();
  }
  doc["feature_dim"] = model.feature_dim();
  doc["outputs"] = model.outputs();
  doc["standardization"] = {{"mean", model.standardization().mean},
                            {"scale", model.standardization().scale}};
  doc["weights"] = model.weights();
  doc["train_config"] = train_config_to_json(model.train_config());
  return doc;
}

LinearModel model_from_json(const json& doc) {
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format_version " + std::to_string(version));
    }
    Standardization st{doc.at("standardization").at("mean").get<std::vector<double>>(),
                       doc.at("standardization").at("scale").get<std::vector<double>>()};
    if (st.mean.size() != doc.at("feature_dim").get<std::size_t>()) {
      throw DataError("model feature_dim does not match its standardization statistics");
    }
    auto weights = doc.at("weights").get<std::vector<double>>();
    const TrainConfig config = train_config_from_json(doc.at("train_config"));
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "binary") {
      return LinearModel::binary(doc.at("target").get<std::string>(),
                                 doc.at("negatives").get<std::vector<std::string>>(),
                                 std::move(st), std::move(weights), config);
    }
    if (kind == "multinomial") {
      return LinearModel::multinomial(ClassSet(doc.at("classes").get<std::vector<std::string>>()),
                                      std::move(st), std::move(weights), config);
    }
    throw DataError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write model file " + path.string());
  }
  out << model_to_json(model).dump(2) << '\n';
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read model file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed model file " + path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace classim::classifiers
