#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "classim/core/class_set.hpp"
#include "classim/core/dataset.hpp"
#include "classim/core/predictions.hpp"

namespace classim {

/// Decision threshold shared by every counting rule; comparisons are strict.
inline constexpr double kDecisionThreshold = 0.5;

/// Misclassification counts N_{c_j|c_i} and class sizes N_{c_i}.
///
/// In multi mode the diagonal holds the correctly predicted count so that each
/// row partitions N_{c_i}; in the binary modes the diagonal is unused (zero).
class ConfusionCounts {
public:
  ConfusionCounts(ClassSet classes, PredictionMode mode);

  const ClassSet& classes() const noexcept { return classes_; }
  PredictionMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return classes_.size(); }

  /// N_{c_j|c_i}: samples annotated `from` counted as `to`.
  std::uint64_t misclassified(std::size_t from, std::size_t to) const;
  /// N_{c_i}.
  std::uint64_t total(std::size_t cls) const { return totals_.at(cls); }
  /// Multi mode only: samples of `cls` whose argmax is `cls`.
  std::uint64_t correct(std::size_t cls) const { return cells_.at(cls * size() + cls); }

  void set_misclassified(std::size_t from, std::size_t to, std::uint64_t n);
  void set_total(std::size_t cls, std::uint64_t n) { totals_.at(cls) = n; }
  void set_correct(std::size_t cls, std::uint64_t n) { cells_.at(cls * size() + cls) = n; }

  /// Throws DataError if any invariant is violated: empty class, a count
  /// exceeding N_{c_i}, or (multi mode) a row not partitioning N_{c_i}.
  void validate() const;

private:
  ClassSet classes_;
  PredictionMode mode_;
  std::vector<std::uint64_t> cells_;
  std::vector<std::uint64_t> totals_;
};

/// N_{c_j|c_i} = #{x annotated c_i : f_{c_j,other}(x) > 0.5}.
ConfusionCounts count_misclass_ovr(const LabeledFeatureSet& eval_set, const PredictionTable& preds);

/// N_{c_j|c_i} = #{x annotated c_i : argmax_c f_c(x) = c_j}; ties go to the
/// canonically first class.
ConfusionCounts count_misclass_multi(const LabeledFeatureSet& eval_set,
                                     const PredictionTable& preds);

struct PairCounts {
  std::uint64_t second_given_first = 0;  // N_{c_j|c_i}
  std::uint64_t first_given_second = 0;  // N_{c_i|c_j}
};

/// Counts both directions of the unordered pair (c_i, c_j) from one shared
/// binary classifier s(x), read as the confidence for c_j against c_i:
/// c_i samples with s > 0.5 and c_j samples with s <= 0.5 are misclassified.
/// The table may store the classifier under either orientation.
PairCounts count_misclass_pairwise(const LabeledFeatureSet& eval_set, const PredictionTable& preds,
                                   std::string_view first, std::string_view second);

/// All |C|(|C|-1)/2 pairs of a pairwise table.
ConfusionCounts count_misclass_pairwise_all(const LabeledFeatureSet& eval_set,
                                            const PredictionTable& preds);

}  // namespace classim
