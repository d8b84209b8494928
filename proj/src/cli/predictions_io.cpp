#include "classim/cli/predictions_io.hpp"

#include <map>

#include <json.hpp>

#include "classim/cli/formats.hpp"
#include "classim/core/errors.hpp"

namespace classim::cli {

namespace {

using nlohmann::json;

struct Known {
  std::string label;
  Split split;
};

[[noreturn]] void fail_at(std::string_view source, std::size_t line, const std::string& msg) {
  throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

const json& require(const json& record, const char* key, std::string_view source, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) fail_at(source, line, std::string("missing key '") + key + "'");
  return *it;
}

std::string text_field(const json& record, const char* key, std::string_view source, std::size_t line) {
  const json& v = require(record, key, source, line);
  if (!v.is_string()) fail_at(source, line, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

double score_field(const json& v, const std::string& what, std::string_view source, std::size_t line) {
  if (!v.is_number()) fail_at(source, line, what + " must be a number");
  const double s = v.get<double>();
  if (!(s >= 0.0 && s <= 1.0)) fail_at(source, line, what + " " + format17(s) + " is outside [0,1]");
  return s;
}

std::size_t class_index(const ClassSet& classes, const std::string& label, std::string_view source,
                        std::size_t line) {
  const auto idx = classes.find(label);
  if (!idx) fail_at(source, line, "unknown class '" + label + "'");
  return *idx;
}

void check_coverage(const PredictionTable& table, const LabeledFeatureSet& eval, PredictionMode mode,
                    std::string_view source) {
  const ClassSet& classes = eval.classes();
  for (std::size_t s = 0; s < eval.size(); ++s) {
    const std::string& id = eval.sample(s).id;
    const std::size_t own = eval.label_index(s);
    auto missing = [&](const std::string& what) {
      throw DataError(std::string(source) + ": incomplete coverage: no score for sample '" + id + "'" + what);
    };
    switch (mode) {
      case PredictionMode::ovr:
        for (std::size_t t = 0; t < classes.size(); ++t) {
          if (!table.ovr_score(id, t)) missing(", target '" + classes.label(t) + "'");
        }
        break;
      case PredictionMode::multi:
        if (!table.multi_scores(id)) missing("");
        break;
      case PredictionMode::pairwise:
        for (std::size_t o = 0; o < classes.size(); ++o) {
          if (o == own) continue;
          if (!table.pairwise_score(id, own, o) && !table.pairwise_score(id, o, own)) {
            missing(", pair ('" + classes.label(own) + "', '" + classes.label(o) + "')");
          }
        }
        break;
    }
  }
}

}  // namespace

PredictionTable parse_predictions(std::string_view text, std::string_view source,
                                  PredictionMode mode, const SplitDataset& data, Split eval_split) {
  std::map<std::string, Known, std::less<>> known;
  for (auto split : {Split::train, Split::validation, Split::test}) {
    for (const Sample& s : data.get(split).samples()) known.emplace(s.id, Known{s.label, split});
  }
  const ClassSet& classes = data.classes;
  PredictionTable table(classes, mode);

  std::size_t line_no = 0;
  std::size_t records = 0;
  while (!text.empty()) {
    ++line_no;
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text.remove_prefix(end == std::string_view::npos ? text.size() : end + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_at(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) fail_at(source, line_no, "record must be a JSON object");
    ++records;

    const std::string id = text_field(record, "id", source, line_no);
    const std::string truth = text_field(record, "true_label", source, line_no);
    auto it = known.find(id);
    if (it == known.end()) fail_at(source, line_no, "sample '" + id + "' is not in the features file");
    if (it->second.label != truth) {
      fail_at(source, line_no, "true_label '" + truth + "' disagrees with the features label '" +
                                   it->second.label + "' for sample '" + id + "'");
    }
    if (it->second.split != eval_split) continue;

    try {
      switch (mode) {
        case PredictionMode::ovr: {
          const std::size_t target = class_index(classes, text_field(record, "target", source, line_no),
                                                 source, line_no);
          table.set_ovr(id, target, score_field(require(record, "score", source, line_no), "score",
                                                source, line_no));
          break;
        }
        case PredictionMode::multi: {
          const json& scores = require(record, "scores", source, line_no);
          if (!scores.is_object()) fail_at(source, line_no, "'scores' must be an object");
          std::vector<double> probs(classes.size(), -1.0);
          for (const auto& [label, value] : scores.items()) {
            probs[class_index(classes, label, source, line_no)] =
                score_field(value, "score for '" + label + "'", source, line_no);
          }
          for (std::size_t c = 0; c < probs.size(); ++c) {
            if (probs[c] < 0.0) fail_at(source, line_no, "no score for class '" + classes.label(c) + "'");
          }
          table.set_multi(id, std::move(probs));
          break;
        }
        case PredictionMode::pairwise: {
          const json& pair = require(record, "pair", source, line_no);
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            fail_at(source, line_no, "'pair' must be an array of two class labels");
          }
          const std::size_t a = class_index(classes, pair[0].get<std::string>(), source, line_no);
          const std::size_t b = class_index(classes, pair[1].get<std::string>(), source, line_no);
          table.set_pairwise(id, a, b, score_field(require(record, "score", source, line_no), "score",
                                                   source, line_no));
          break;
        }
      }
    } catch (const DataError& e) {
      const std::string msg = e.what();
      if (msg.rfind(std::string(source) + ":", 0) == 0) throw;
      fail_at(source, line_no, msg);
    }
  }
  if (records == 0) {
    throw DataError(std::string(source) + ": no prediction records");
  }
  check_coverage(table, data.get(eval_split), mode, source);
  return table;
}

PredictionTable ingest_predictions(const std::filesystem::path& path, PredictionMode mode,
                                   const SplitDataset& data, Split eval_split) {
  return parse_predictions(read_file(path), path.string(), mode, data, eval_split);
}

}  // namespace classim::cli
