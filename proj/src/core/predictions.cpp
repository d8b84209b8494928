#include "classim/core/predictions.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "classim/core/errors.hpp"

namespace classim {

std::string_view to_string(PredictionMode mode) noexcept {
  switch (mode) {
    case PredictionMode::pairwise: return "pairwise";
    case PredictionMode::ovr: return "ovr";
    case PredictionMode::multi: return "multi";
  }
  return "ovr";
}

PredictionMode parse_prediction_mode(std::string_view text) {
  if (text == "pairwise") return PredictionMode::pairwise;
  if (text == "ovr") return PredictionMode::ovr;
  if (text == "multi") return PredictionMode::multi;
  throw UsageError("unknown prediction mode '" + std::string(text) + "'");
}

namespace {

void check_score(std::string_view id, double score) {
  if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
    throw DataError("score for sample '" + std::string(id) + "' is outside [0,1]");
  }
}

}  // namespace

PredictionTable::PredictionTable(ClassSet classes, PredictionMode mode)
    : classes_(std::move(classes)), mode_(mode) {}

void PredictionTable::require_mode(PredictionMode wanted) const {
  if (mode_ != wanted) {
    throw DataError("prediction table is in " + std::string(to_string(mode_)) +
                    " mode, not " + std::string(to_string(wanted)));
  }
}

void PredictionTable::set_ovr(std::string_view id, std::size_t target, double score) {
  require_mode(PredictionMode::ovr);
  if (target >= classes_.size()) {
    throw DataError("target class index out of range");
  }
  check_score(id, score);
  auto it = rows_.find(id);
  if (it == rows_.end()) {
    it = rows_.emplace(std::string(id),
                       std::vector<double>(classes_.size(), std::numeric_limits<double>::quiet_NaN()))
             .first;
  }
  double& slot = it->second[target];
  if (!std::isnan(slot)) {
    throw DataError("duplicate ovr score for sample '" + std::string(id) + "', target '" +
                    classes_.label(target) + "'");
  }
  slot = score;
}

std::optional<double> PredictionTable::ovr_score(std::string_view id, std::size_t target) const {
  require_mode(PredictionMode::ovr);
  auto it = rows_.find(id);
  if (it == rows_.end() || target >= it->second.size() || std::isnan(it->second[target])) {
    return std::nullopt;
  }
  return it->second[target];
}

void PredictionTable::set_multi(std::string_view id, std::vector<double> probabilities) {
  require_mode(PredictionMode::multi);
  if (probabilities.size() != classes_.size()) {
    throw DataError("probability vector for sample '" + std::string(id) + "' has " +
                    std::to_string(probabilities.size()) + " entries, expected " +
                    std::to_string(classes_.size()));
  }
  double sum = 0.0;
  for (double p : probabilities) {
    check_score(id, p);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw DataError("probability vector for sample '" + std::string(id) +
                    "' does not sum to 1 (sum " + std::to_string(sum) + ")");
  }
  if (!rows_.emplace(std::string(id), std::move(probabilities)).second) {
    throw DataError("duplicate multi record for sample '" + std::string(id) + "'");
  }
}

const std::vector<double>* PredictionTable::multi_scores(std::string_view id) const {
  require_mode(PredictionMode::multi);
  auto it = rows_.find(id);
  return it == rows_.end() ? nullptr : &it->second;
}

void PredictionTable::set_pairwise(std::string_view id, std::size_t first, std::size_t second,
                                   double score) {
  require_mode(PredictionMode::pairwise);
  if (first >= classes_.size() || second >= classes_.size()) {
    throw DataError("pair class index out of range");
  }
  if (first == second) {
    throw DataError("pairwise record for sample '" + std::string(id) +
                    "' pairs class '" + classes_.label(first) + "' with itself");
  }
  check_score(id, score);
  if (!pairs_[{first, second}].emplace(std::string(id), score).second) {
    throw DataError("duplicate pairwise score for sample '" + std::string(id) + "', pair (" +
                    classes_.label(first) + ", " + classes_.label(second) + ")");
  }
}

std::optional<double> PredictionTable::pairwise_score(std::string_view id, std::size_t first,
                                                      std::size_t second) const {
  require_mode(PredictionMode::pairwise);
  auto pit = pairs_.find({first, second});
  if (pit == pairs_.end()) return std::nullopt;
  auto it = pit->second.find(id);
  if (it == pit->second.end()) return std::nullopt;
  return it->second;
}

bool PredictionTable::has_pair(std::size_t first, std::size_t second) const {
  return pairs_.contains({first, second});
}

std::vector<std::string> PredictionTable::sample_ids() const {
  std::set<std::string, std::less<>> ids;
  for (const auto& [id, row] : rows_) ids.insert(id);
  for (const auto& [pair, scores] : pairs_) {
    for (const auto& [id, s] : scores) ids.insert(id);
  }
  return {ids.begin(), ids.end()};
}

void PredictionTable::merge(const PredictionTable& other) {
  if (other.mode_ != mode_ || other.classes_ != classes_) {
    throw DataError("cannot merge prediction tables with different modes or classes");
  }
  switch (mode_) {
    case PredictionMode::ovr:
      for (const auto& [id, row] : other.rows_) {
        for (std::size_t t = 0; t < row.size(); ++t) {
          if (!std::isnan(row[t])) set_ovr(id, t, row[t]);
        }
      }
      break;
    case PredictionMode::multi:
      for (const auto& [id, row] : other.rows_) set_multi(id, row);
      break;
    case PredictionMode::pairwise:
      for (const auto& [pair, scores] : other.pairs_) {
        for (const auto& [id, s] : scores) set_pairwise(id, pair.first, pair.second, s);
      }
      break;
  }
}

}  // namespace classim
