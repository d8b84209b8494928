#include "classim/twolevel/similar_sets.hpp"

#include <algorithm>

#include "classim/core/errors.hpp"

namespace classim::twolevel {

const std::vector<ClassLabel>& SimilarSets::of(std::string_view label) const {
  return sets.at(classes.index_of(label));
}

std::size_t SimilarSets::non_empty_count() const {
  return static_cast<std::size_t>(
      std::count_if(sets.begin(), sets.end(), [](const auto& s) { return !s.empty(); }));
}

SimilarSets select_similar(const SimilarityMatrix& matrix, double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw UsageError("similarity threshold must lie in [0, 1)");
  }
  SimilarSets out;
  out.threshold = threshold;
  out.classes = matrix.classes();
  const std::size_t n = matrix.size();
  out.sets.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && matrix.at(i, j) > threshold) out.sets[i].push_back(matrix.classes().label(j));
    }
  }
  return out;
}

}  // namespace classim::twolevel
