#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "classim/core/class_set.hpp"

namespace classim::classifiers {

enum class ModelKind { binary, multinomial };
enum class ClassWeighting { none, balanced };

std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(ClassWeighting weighting) noexcept;
ClassWeighting parse_class_weighting(std::string_view text);

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 300;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  ClassWeighting class_weighting = ClassWeighting::none;

  /// Throws DataError unless learning_rate > 0, epochs >= 1 and l2 >= 0.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

/// Per-dimension affine map z = (x - mean) / scale fitted on training data.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;

  /// Population statistics of row-major `rows`; zero-variance dimensions get scale 1.
  static Standardization fit(std::span<const double> rows, std::size_t dim);
  static Standardization identity(std::size_t dim);

  void apply(std::span<const double> x, std::span<double> out) const;
  bool operator==(const Standardization&) const = default;
};

/// Logistic (binary) or softmax (multinomial) model over standardized features.
///
/// Weights are stored row-major, one row of D+1 values per output with the
/// bias last. A binary model has one output scoring `target` against
/// `negatives`; a multinomial model has one output per class in `classes`.
class LinearModel {
public:
  static LinearModel binary(ClassLabel target, std::vector<ClassLabel> negatives,
                            Standardization standardization, std::vector<double> weights,
                            TrainConfig config);
  static LinearModel multinomial(ClassSet classes, Standardization standardization,
                                 std::vector<double> weights, TrainConfig config);

  ModelKind kind() const noexcept { return kind_; }
  const ClassLabel& target() const noexcept { return target_; }
  const std::vector<ClassLabel>& negatives() const noexcept { return negatives_; }
  const ClassSet& classes() const noexcept { return classes_; }
  std::size_t feature_dim() const noexcept { return dim_; }
  std::size_t outputs() const noexcept { return kind_ == ModelKind::binary ? 1 : classes_.size(); }
  const Standardization& standardization() const noexcept { return standardization_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const TrainConfig& train_config() const noexcept { return config_; }

  /// Objective value before training and after every epoch (not persisted).
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }
  void set_loss_history(std::vector<double> history) { loss_history_ = std::move(history); }

  /// Binary models: sigmoid(w.z + b), strictly inside (0,1).
  double score(std::span<const double> x) const;
  /// Multinomial models: softmax vector in canonical class order.
  std::vector<double> probabilities(std::span<const double> x) const;

  bool operator==(const LinearModel& other) const;

private:
  LinearModel() = default;
  void check_dim(std::span<const double> x) const;
  void logits(std::span<const double> x, std::span<double> out) const;

  ModelKind kind_ = ModelKind::binary;
  ClassLabel target_;
  std::vector<ClassLabel> negatives_;
  ClassSet classes_;
  std::size_t dim_ = 0;
  Standardization standardization_;
  std::vector<double> weights_;
  TrainConfig config_;
  std::vector<double> loss_history_;
};

/// Numerically safe logistic function.
double sigmoid(double t) noexcept;

/// In-place softmax with max subtraction; the result is renormalized to sum to 1.
void softmax(std::span<double> logits) noexcept;

}  // namespace classim::classifiers
