#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace classim::classifiers {

/// Weighted, L2-regularized cross-entropy over standardized features.
///
/// loss = sum_n w_n * CE_n / sum_n w_n + l2/2 * ||W||^2, where the penalty skips
/// the bias column. Parameters are laid out like LinearModel weights.
struct BinaryProblem {
  std::vector<double> features;  // row-major, n x dim
  std::size_t dim = 0;
  std::vector<double> targets;  // 0 or 1
  std::vector<double> sample_weights;
  double l2 = 0.0;
};

struct MultinomialProblem {
  std::vector<double> features;  // row-major, n x dim
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<std::size_t> labels;
  std::vector<double> sample_weights;
  double l2 = 0.0;
};

/// Returns the loss and writes its gradient into `grad` (same size as params).
double binary_objective(const BinaryProblem& problem, std::span<const double> params,
                        std::span<double> grad);
double multinomial_objective(const MultinomialProblem& problem, std::span<const double> params,
                             std::span<double> grad);

}  // namespace classim::classifiers
