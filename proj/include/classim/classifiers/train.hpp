#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "classim/classifiers/linear_model.hpp"
#include "classim/core/dataset.hpp"
#include "classim/core/predictions.hpp"

namespace classim::classifiers {

/// Full-batch gradient descent with step halving.
///
/// Each epoch proposes params - lr * grad. If the loss rises (or is not
/// finite) the step is halved permanently and the epoch retried, so the
/// recorded loss sequence never increases. When no halving helps the
/// optimizer has stalled and training stops early. Initial parameters are
/// drawn from N(0, 0.01^2) seeded by `config.seed`.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;
std::vector<double> gradient_descent(const Objective& objective, std::size_t n_params,
                                     const TrainConfig& config, std::vector<double>& loss_history);

/// Binary logistic model for `target` against the union of `negatives`.
LinearModel train_ovr(const LabeledFeatureSet& train, std::string_view target,
                      std::span<const ClassLabel> negatives, const TrainConfig& config);

/// train_ovr against every other class.
LinearModel train_ovr(const LabeledFeatureSet& train, std::string_view target,
                      const TrainConfig& config);

/// Multinomial softmax model over all classes of `train`.
LinearModel train_multi(const LabeledFeatureSet& train, const TrainConfig& config);

/// One OVR model per class, canonical order.
std::vector<LinearModel> train_ovr_all(const LabeledFeatureSet& train, const TrainConfig& config,
                                       unsigned threads = 1);

/// One shared binary model per unordered pair (i < j), scoring c_j against c_i,
/// in order (0,1), (0,2), ..., (1,2), ...
std::vector<LinearModel> train_pairwise_all(const LabeledFeatureSet& train,
                                            const TrainConfig& config, unsigned threads = 1);

/// Binary models fill an ovr table under their target; multinomial models fill
/// a multi table.
PredictionTable predict(const LinearModel& model, const LabeledFeatureSet& eval_set);

/// Binary model with a single negative c_i, emitted as pairwise scores for (c_i, target).
PredictionTable predict_pairwise(const LinearModel& model, const LabeledFeatureSet& eval_set);

/// Merged table of several binary models (ovr) or pair models (pairwise).
PredictionTable predict_all(std::span<const LinearModel> models, const LabeledFeatureSet& eval_set,
                            PredictionMode mode);

}  // namespace classim::classifiers
