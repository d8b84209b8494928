#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "classim/core/dataset.hpp"

namespace classim::twolevel {

using Router = std::function<ClassLabel(std::span<const double>)>;

struct AccuracyReport {
  ClassSet classes;
  std::uint64_t total = 0;
  std::uint64_t correct = 0;
  double accuracy = 0.0;
  std::vector<std::uint64_t> class_totals;  // canonical order
  std::vector<double> recall;               // canonical order; 0 for classes absent from the set
  /// Rows: true class. Columns: routed class in canonical order, then "none".
  std::vector<std::uint64_t> confusion;
  std::uint64_t none_count = 0;

  std::uint64_t routed(std::string_view truth, std::string_view predicted) const;
};

/// Routes every sample of `test`; "none" always counts as incorrect. Samples
/// are routed in parallel and aggregated in input order. Throws DataError on an
/// empty set or when the router emits an unknown label.
AccuracyReport evaluate(const Router& router, const LabeledFeatureSet& test, unsigned threads = 1);

}  // namespace classim::twolevel
