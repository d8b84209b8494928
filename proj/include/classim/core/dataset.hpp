#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "classim/core/class_set.hpp"

namespace classim {

enum class Split { train, validation, test };

std::string_view to_string(Split split) noexcept;
/// Parses "train", "validation" or "test"; throws DataError otherwise.
Split parse_split(std::string_view text);

struct Sample {
  std::string id;
  ClassLabel label;
  std::vector<double> features;
};

/// Feature vectors with annotated labels belonging to one split.
///
/// Construction validates that every label is in `classes`, that all feature
/// vectors share one dimension D >= 1 and that sample ids are unique.
class LabeledFeatureSet {
public:
  LabeledFeatureSet(ClassSet classes, Split split, std::vector<Sample> samples);

  const ClassSet& classes() const noexcept { return classes_; }
  Split split() const noexcept { return split_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const Sample& sample(std::size_t i) const { return samples_.at(i); }
  std::span<const double> features(std::size_t i) const { return samples_.at(i).features; }

  /// Canonical class index of sample i.
  std::size_t label_index(std::size_t i) const { return label_index_.at(i); }

  /// N_c for every class, in canonical order.
  std::vector<std::size_t> class_counts() const;

  /// Samples whose label is in `keep` (canonical indices), in original order.
  LabeledFeatureSet filter_classes(std::span<const std::size_t> keep) const;

private:
  ClassSet classes_;
  Split split_ = Split::train;
  std::size_t dim_ = 0;
  std::vector<Sample> samples_;
  std::vector<std::size_t> label_index_;
};

/// Concatenates sets over the same classes; the result carries `split`.
LabeledFeatureSet merge(std::span<const LabeledFeatureSet* const> parts, Split split);

/// A full dataset partitioned into the three splits.
struct SplitDataset {
  ClassSet classes;
  LabeledFeatureSet train;
  LabeledFeatureSet validation;
  LabeledFeatureSet test;

  const LabeledFeatureSet& get(Split split) const;
};

/// Split sizes as fractions of the whole: train 0.8*0.8, validation 0.8*0.2, test 0.2.
struct SplitRatios {
  int validation_percent = 16;
  int test_percent = 20;
};

/// Deterministic stratified split of `samples` by seed.
///
/// Per-class quotas are floor(n_c * p / 100) topped up by largest remainder so
/// that the split totals equal round(N * p / 100) exactly. Within each split the
/// original sample order is preserved.
SplitDataset stratified_split(const ClassSet& classes, std::vector<Sample> samples,
                              std::uint64_t seed, SplitRatios ratios = {});

}  // namespace classim
