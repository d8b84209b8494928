#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "classim/core/class_set.hpp"
#include "classim/core/similarity.hpp"

namespace classim::twolevel {

inline constexpr double kDefaultSimilarityThreshold = 0.1;

/// For every class, the other classes whose ClassSim strictly exceeds `threshold`.
struct SimilarSets {
  double threshold = kDefaultSimilarityThreshold;
  ClassSet classes;
  std::vector<std::vector<ClassLabel>> sets;  // canonical order, members sorted

  const std::vector<ClassLabel>& of(std::string_view label) const;
  std::size_t non_empty_count() const;
};

/// Throws UsageError unless threshold lies in [0, 1).
SimilarSets select_similar(const SimilarityMatrix& matrix,
                           double threshold = kDefaultSimilarityThreshold);

}  // namespace classim::twolevel
