#include "classim/twolevel/persist.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "classim/classifiers/model_io.hpp"
#include "classim/core/errors.hpp"

namespace classim::twolevel {

using nlohmann::json;

namespace {

std::string model_file(const char* level, std::size_t index) {
  char name[48];
  std::snprintf(name, sizeof name, "%s_%03zu.json", level, index);
  return name;
}

}  // namespace

void save_two_level(const TwoLevelModel& model, const std::filesystem::path& dir) {
  model.validate();
  json doc;
  doc["format_version"] = kTwoLevelFormatVersion;
  doc["classes"] = model.classes.labels();
  std::vector<std::string> order;
  for (std::size_t c : model.order) order.push_back(model.classes.label(c));
  doc["routing_order"] = order;
  doc["thresholds"] = {{"first", model.first_threshold}, {"second", model.second_threshold}};
  doc["similarity_threshold"] = model.similar.threshold;
  json sets = json::object();
  json first = json::object();
  json second = json::object();
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    const ClassLabel& label = model.classes.label(c);
    sets[label] = model.similar.sets[c];
    first[label] = model_file("first_level", c);
    classifiers::save_model(model.first_level[c], dir / model_file("first_level", c));
    if (model.second_level[c]) {
      second[label] = model_file("second_level", c);
      classifiers::save_model(*model.second_level[c], dir / model_file("second_level", c));
    }
  }
  doc["similar_sets"] = sets;
  doc["first_level"] = first;
  doc["second_level"] = second;

  std::ofstream out(dir / kTwoLevelDocument, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + (dir / kTwoLevelDocument).string());
  }
  out << doc.dump(2) << '\n';
}

TwoLevelModel load_two_level(const std::filesystem::path& dir) {
  const auto path = dir / kTwoLevelDocument;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read " + path.string());
  }
  try {
    const json doc = json::parse(in);
    const int version = doc.at("format_version").get<int>();
    if (version != kTwoLevelFormatVersion) {
      throw DataError(path.string() + ": unsupported format_version " + std::to_string(version));
    }
    TwoLevelModel model;
    model.classes = ClassSet(doc.at("classes").get<std::vector<std::string>>());
    for (const auto& label : doc.at("routing_order")) {
      model.order.push_back(model.classes.index_of(label.get<std::string>()));
    }
    model.first_threshold = doc.at("thresholds").at("first").get<double>();
    model.second_threshold = doc.at("thresholds").at("second").get<double>();
    model.similar.threshold = doc.at("similarity_threshold").get<double>();
    model.similar.classes = model.classes;
    const auto& second = doc.at("second_level");
    for (const ClassLabel& label : model.classes.labels()) {
      auto members = doc.at("similar_sets").at(label).get<std::vector<std::string>>();
      for (const auto& m : members) model.classes.index_of(m);
      model.similar.sets.push_back(std::move(members));
      model.first_level.push_back(
          classifiers::load_model(dir / doc.at("first_level").at(label).get<std::string>()));
      if (second.contains(label)) {
        model.second_level.emplace_back(classifiers::load_model(dir / second.at(label).get<std::string>()));
      } else {
        model.second_level.emplace_back(std::nullopt);
      }
    }
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": malformed two-level document: " + e.what());
  }
}

}  // namespace classim::twolevel
