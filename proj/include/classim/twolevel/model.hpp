#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "classim/classifiers/linear_model.hpp"
#include "classim/core/counting.hpp"
#include "classim/core/dataset.hpp"
#include "classim/twolevel/similar_sets.hpp"

namespace classim::twolevel {

using classifiers::LinearModel;

/// First-level OVR models for every class plus fine-grained second-level OVR
/// models for the classes with a non-empty similar set.
struct TwoLevelModel {
  ClassSet classes;
  /// Routing order as canonical class indices; canonical order by default.
  std::vector<std::size_t> order;
  std::vector<LinearModel> first_level;                 // canonical order
  std::vector<std::optional<LinearModel>> second_level;  // canonical order
  SimilarSets similar;
  double first_threshold = kDecisionThreshold;
  double second_threshold = kDecisionThreshold;

  /// Throws DataError when a second-level model is present without a similar
  /// set (or missing despite one), or when the order is not a permutation.
  void validate() const;
  std::size_t second_level_count() const;
};

/// Canonical order 0..n-1.
std::vector<std::size_t> canonical_order(std::size_t n);

/// Reads one label per line (blank lines ignored); must list every class once.
std::vector<std::size_t> load_order_file(const std::filesystem::path& path, const ClassSet& classes);

/// First-level models are trained on `first_train` against all other classes;
/// second-level models on `second_train` against the class's similar set only.
TwoLevelModel build_two_level(const LabeledFeatureSet& first_train,
                              const LabeledFeatureSet& second_train, const SimilarSets& sets,
                              const classifiers::TrainConfig& config, unsigned threads = 1,
                              std::vector<std::size_t> order = {});

/// Both levels trained on the same set.
TwoLevelModel build_two_level(const LabeledFeatureSet& train, const SimilarSets& sets,
                              const classifiers::TrainConfig& config, unsigned threads = 1);

/// Scores are pulled on demand so classifiers after the returned class are
/// never evaluated. `second` returns nullopt where no second-level model exists.
using FirstLevelScore = std::function<double(std::size_t cls)>;
using SecondLevelScore = std::function<std::optional<double>(std::size_t cls)>;

/// Walks `order`; returns the first class whose first-level score exceeds t1 and
/// whose second-level score (if any) exceeds t2. A failed second-level check
/// falls through to the next class. Returns "none" when nothing qualifies.
ClassLabel route_scores(const ClassSet& classes, std::span<const std::size_t> order,
                        const FirstLevelScore& first, const SecondLevelScore& second,
                        double t1 = kDecisionThreshold, double t2 = kDecisionThreshold);

ClassLabel route(const TwoLevelModel& model, std::span<const double> x);

/// First class in `order` whose OVR score exceeds 0.5, else "none".
ClassLabel route_baseline(const ClassSet& classes, std::span<const LinearModel> first_level,
                          std::span<const std::size_t> order, std::span<const double> x);
ClassLabel route_baseline(const TwoLevelModel& model, std::span<const double> x);

}  // namespace classim::twolevel
