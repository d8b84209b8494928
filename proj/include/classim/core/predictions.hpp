#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "classim/core/class_set.hpp"

namespace classim {

enum class PredictionMode { pairwise, ovr, multi };

std::string_view to_string(PredictionMode mode) noexcept;
PredictionMode parse_prediction_mode(std::string_view text);

/// Multi-mode probability vectors must sum to 1 within this absolute tolerance.
inline constexpr double kProbabilitySumTolerance = 1e-9;

/// Per-sample classifier outputs in one of three layouts.
///
/// - ovr: one score in [0,1] per (sample, target class), from f_{c,other}.
/// - multi: one probability vector over the class set per sample.
/// - pairwise: one score in [0,1] per (sample, ordered pair (a, b)), read as the
///   confidence for b against a. A single classifier per unordered pair serves
///   both counting directions.
///
/// Every setter validates its input and rejects duplicates.
class PredictionTable {
public:
  PredictionTable(ClassSet classes, PredictionMode mode);

  PredictionMode mode() const noexcept { return mode_; }
  const ClassSet& classes() const noexcept { return classes_; }

  void set_ovr(std::string_view id, std::size_t target, double score);
  std::optional<double> ovr_score(std::string_view id, std::size_t target) const;

  void set_multi(std::string_view id, std::vector<double> probabilities);
  /// nullptr when the sample has no row.
  const std::vector<double>* multi_scores(std::string_view id) const;

  void set_pairwise(std::string_view id, std::size_t first, std::size_t second, double score);
  std::optional<double> pairwise_score(std::string_view id, std::size_t first,
                                       std::size_t second) const;
  bool has_pair(std::size_t first, std::size_t second) const;

  /// Every sample id referenced by the table, sorted.
  std::vector<std::string> sample_ids() const;

  /// Adds all entries of `other` (same mode and classes); duplicates are errors.
  void merge(const PredictionTable& other);

private:
  void require_mode(PredictionMode wanted) const;

  ClassSet classes_;
  PredictionMode mode_;
  // ovr: |C| scores per id, NaN where absent. multi: the probability vector.
  std::map<std::string, std::vector<double>, std::less<>> rows_;
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::string, double, std::less<>>> pairs_;
};

}  // namespace classim
