#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "classim/core/class_set.hpp"
#include "classim/core/counting.hpp"

namespace classim {

/// ClassSim(X_i, X_j) = 1/2 (N_{j|i}/N_i + N_{i|j}/N_j).
///
/// The two ratios are always summed in canonical index order, so the result
/// is bit-identical under i <-> j. Throws DataError when either class is empty.
double class_sim(const ConfusionCounts& counts, std::size_t i, std::size_t j);
double class_sim(const ConfusionCounts& counts, std::string_view ci, std::string_view cj);

/// Symmetric |C| x |C| matrix of ClassSim values with a unit diagonal.
class SimilarityMatrix {
public:
  /// Validates symmetry (exact), range [0,1] and the unit diagonal.
  SimilarityMatrix(ClassSet classes, std::vector<double> values);

  const ClassSet& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  double at(std::size_t i, std::size_t j) const { return values_.at(i * size() + j); }
  double at(std::string_view ci, std::string_view cj) const;
  /// Row-major values.
  const std::vector<double>& values() const noexcept { return values_; }

private:
  ClassSet classes_;
  std::vector<double> values_;
};

/// Computes each unordered pair once and mirrors it.
SimilarityMatrix similarity_matrix(const ConfusionCounts& counts);

struct RankedClass {
  ClassLabel label;
  double score = 0.0;
};

enum class RankOrder { descending, ascending };

/// Off-diagonal entries of row `target` of a row-major |C| x |C| matrix,
/// sorted by score (ties broken by label) and truncated to k.
/// Requires 1 <= k <= |C|-1.
std::vector<RankedClass> rank_row(const ClassSet& classes, std::span<const double> values,
                                  std::string_view target, std::size_t k, RankOrder order);

/// The k classes most similar to `target`, highest first.
std::vector<RankedClass> top_k(const SimilarityMatrix& matrix, std::string_view target,
                               std::size_t k);

/// Fixed 3-decimal rendering, round-half-to-even on the exact binary value.
std::string format_score3(double value);

/// "class:score" with 3 decimals.
std::string format_ranked(const RankedClass& entry);

}  // namespace classim
