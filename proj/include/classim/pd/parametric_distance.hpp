#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "classim/core/class_set.hpp"
#include "classim/core/dataset.hpp"
#include "classim/core/similarity.hpp"

namespace classim::pd {

/// Per-class mean and per-dimension sample standard deviation (n - 1 divisor).
struct ClassMoments {
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Moments of every class of `set`, canonical order. Throws DataError for a
/// class with fewer than two samples.
std::vector<ClassMoments> class_moments(const LabeledFeatureSet& set);

/// Sum over dimensions of (mu_i - mu_j)^2 + (sigma_i - sigma_j)^2.
/// Lower means more similar; values are not normalized.
double parametric_distance(const ClassMoments& a, const ClassMoments& b);

/// Symmetric matrix of parametric distances with a zero diagonal.
class DistanceMatrix {
public:
  DistanceMatrix(ClassSet classes, std::vector<double> values);

  const ClassSet& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  double at(std::size_t i, std::size_t j) const { return values_.at(i * size() + j); }
  double at(std::string_view ci, std::string_view cj) const;
  const std::vector<double>& values() const noexcept { return values_; }

private:
  ClassSet classes_;
  std::vector<double> values_;
};

DistanceMatrix pd_matrix(const LabeledFeatureSet& set, unsigned threads = 1);

/// The k classes closest to `target`, smallest distance first.
std::vector<RankedClass> top_k(const DistanceMatrix& matrix, std::string_view target, std::size_t k);

/// Spearman rank correlation with average ranks for ties. Returns NaN when
/// either input is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Per class, the Spearman correlation between its ClassSim row and its negated
/// PD row (off-diagonal entries), so agreement in ranking gives +1.
std::vector<double> row_rank_correlations(const SimilarityMatrix& sim, const DistanceMatrix& pd);

}  // namespace classim::pd
