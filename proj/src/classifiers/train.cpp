#include "classim/classifiers/train.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "classim/classifiers/objective.hpp"
#include "classim/core/errors.hpp"
#include "classim/core/parallel.hpp"

namespace classim::classifiers {

namespace {

constexpr int kMaxHalvings = 60;
constexpr double kInitScale = 0.01;

// Standardized features of the selected rows plus the fitted statistics.
struct Design {
  Standardization standardization;
  std::vector<double> features;
};

Design standardize(const LabeledFeatureSet& train, std::span<const std::size_t> rows) {
  const std::size_t dim = train.dim();
  std::vector<double> raw;
  raw.reserve(rows.size() * dim);
  for (std::size_t r : rows) {
    const auto x = train.features(r);
    raw.insert(raw.end(), x.begin(), x.end());
  }
  Design design{Standardization::fit(raw, dim), std::vector<double>(raw.size())};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design.standardization.apply(std::span<const double>(raw).subspan(i * dim, dim),
                                 std::span<double>(design.features).subspan(i * dim, dim));
  }
  return design;
}

}  // namespace

std::vector<double> gradient_descent(const Objective& objective, std::size_t n_params,
                                     const TrainConfig& config,
                                     std::vector<double>& loss_history) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> init(0.0, kInitScale);
  std::vector<double> params(n_params);
  for (double& p : params) p = init(rng);

  std::vector<double> grad(n_params);
  std::vector<double> candidate(n_params);
  std::vector<double> candidate_grad(n_params);

  double loss = objective(params, grad);
  if (!std::isfinite(loss)) {
    throw NumericalError("training loss is not finite at initialization");
  }
  loss_history.assign(1, loss);

  double lr = config.learning_rate;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
      for (std::size_t i = 0; i < n_params; ++i) candidate[i] = params[i] - lr * grad[i];
      const double candidate_loss = objective(candidate, candidate_grad);
      if (std::isfinite(candidate_loss) && candidate_loss <= loss) {
        params.swap(candidate);
        grad.swap(candidate_grad);
        loss = candidate_loss;
        accepted = true;
        break;
      }
      lr *= 0.5;
    }
    if (!accepted) break;
    loss_history.push_back(loss);
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw NumericalError("training produced non-finite weights");
  }
  return params;
}

LinearModel train_ovr(const LabeledFeatureSet& train, std::string_view target,
                      std::span<const ClassLabel> negatives, const TrainConfig& config) {
  config.validate();
  const ClassSet& classes = train.classes();
  const std::size_t positive = classes.index_of(target);
  std::vector<bool> is_negative(classes.size(), false);
  std::vector<ClassLabel> negative_labels;
  for (const ClassLabel& neg : negatives) {
    const std::size_t idx = classes.index_of(neg);
    if (idx == positive) {
      throw DataError("target class '" + std::string(target) + "' is listed among its negatives");
    }
    if (!is_negative[idx]) negative_labels.push_back(neg);
    is_negative[idx] = true;
  }

  std::vector<std::size_t> rows;
  std::vector<double> targets;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (std::size_t s = 0; s < train.size(); ++s) {
    const std::size_t label = train.label_index(s);
    if (label == positive) {
      rows.push_back(s);
      targets.push_back(1.0);
      ++n_pos;
    } else if (is_negative[label]) {
      rows.push_back(s);
      targets.push_back(0.0);
      ++n_neg;
    }
  }
  if (n_pos == 0) {
    throw DataError("no positive training samples for class '" + std::string(target) + "'");
  }
  if (n_neg == 0) {
    throw DataError("no negative training samples for class '" + std::string(target) + "'");
  }

  Design design = standardize(train, rows);
  BinaryProblem problem;
  problem.dim = train.dim();
  problem.features = std::move(design.features);
  problem.l2 = config.l2;
  problem.sample_weights.resize(rows.size(), 1.0);
  if (config.class_weighting == ClassWeighting::balanced) {
    const double n = static_cast<double>(rows.size());
    const double w_pos = n / (2.0 * static_cast<double>(n_pos));
    const double w_neg = n / (2.0 * static_cast<double>(n_neg));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      problem.sample_weights[i] = targets[i] > 0.5 ? w_pos : w_neg;
    }
  }
  problem.targets = std::move(targets);

  std::vector<double> history;
  auto weights = gradient_descent(
      [&](std::span<const double> p, std::span<double> g) { return binary_objective(problem, p, g); },
      problem.dim + 1, config, history);
  LinearModel model = LinearModel::binary(std::string(target), std::move(negative_labels),
                                          std::move(design.standardization), std::move(weights),
                                          config);
  model.set_loss_history(std::move(history));
  return model;
}

LinearModel train_ovr(const LabeledFeatureSet& train, std::string_view target,
                      const TrainConfig& config) {
  std::vector<ClassLabel> negatives;
  for (const ClassLabel& label : train.classes().labels()) {
    if (label != target) negatives.push_back(label);
  }
  return train_ovr(train, target, negatives, config);
}

LinearModel train_multi(const LabeledFeatureSet& train, const TrainConfig& config) {
  config.validate();
  const ClassSet& classes = train.classes();
  const auto counts = train.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("no training samples for class '" + classes.label(c) + "'");
    }
  }
  if (classes.size() < 2) {
    throw DataError("multi-class training needs at least two classes");
  }

  std::vector<std::size_t> rows(train.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  Design design = standardize(train, rows);

  MultinomialProblem problem;
  problem.dim = train.dim();
  problem.classes = classes.size();
  problem.features = std::move(design.features);
  problem.l2 = config.l2;
  problem.labels.resize(train.size());
  problem.sample_weights.resize(train.size(), 1.0);
  const double n = static_cast<double>(train.size());
  for (std::size_t s = 0; s < train.size(); ++s) {
    const std::size_t label = train.label_index(s);
    problem.labels[s] = label;
    if (config.class_weighting == ClassWeighting::balanced) {
      problem.sample_weights[s] =
          n / (static_cast<double>(classes.size()) * static_cast<double>(counts[label]));
    }
  }

  std::vector<double> history;
  auto weights = gradient_descent(
      [&](std::span<const double> p, std::span<double> g) {
        return multinomial_objective(problem, p, g);
      },
      problem.classes * (problem.dim + 1), config, history);
  LinearModel model = LinearModel::multinomial(classes, std::move(design.standardization),
                                               std::move(weights), config);
  model.set_loss_history(std::move(history));
  return model;
}

std::vector<LinearModel> train_ovr_all(const LabeledFeatureSet& train, const TrainConfig& config,
                                       unsigned threads) {
  const ClassSet& classes = train.classes();
  std::vector<std::optional<LinearModel>> slots(classes.size());
  parallel_for(classes.size(), threads,
               [&](std::size_t c) { slots[c] = train_ovr(train, classes.label(c), config); });
  std::vector<LinearModel> models;
  models.reserve(slots.size());
  for (auto& m : slots) models.push_back(std::move(*m));
  return models;
}

std::vector<LinearModel> train_pairwise_all(const LabeledFeatureSet& train,
                                            const TrainConfig& config, unsigned threads) {
  const ClassSet& classes = train.classes();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::optional<LinearModel>> slots(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const ClassLabel negative = classes.label(i);
    slots[p] = train_ovr(train, classes.label(j), std::span<const ClassLabel>(&negative, 1), config);
  });
  std::vector<LinearModel> models;
  models.reserve(slots.size());
  for (auto& m : slots) models.push_back(std::move(*m));
  return models;
}

PredictionTable predict(const LinearModel& model, const LabeledFeatureSet& eval_set) {
  const ClassSet& classes = eval_set.classes();
  if (!eval_set.empty() && eval_set.dim() != model.feature_dim()) {
    throw DataError("evaluation features have dimension " + std::to_string(eval_set.dim()) +
                    ", model expects " + std::to_string(model.feature_dim()));
  }
  if (model.kind() == ModelKind::binary) {
    PredictionTable table(classes, PredictionMode::ovr);
    const std::size_t target = classes.index_of(model.target());
    for (const Sample& s : eval_set.samples()) {
      table.set_ovr(s.id, target, model.score(s.features));
    }
    return table;
  }
  if (model.classes() != classes) {
    throw DataError("multinomial model and evaluation set use different class sets");
  }
  PredictionTable table(classes, PredictionMode::multi);
  for (const Sample& s : eval_set.samples()) {
    table.set_multi(s.id, model.probabilities(s.features));
  }
  return table;
}

PredictionTable predict_pairwise(const LinearModel& model, const LabeledFeatureSet& eval_set) {
  if (model.kind() != ModelKind::binary || model.negatives().size() != 1) {
    throw DataError("pairwise prediction needs a binary model with exactly one negative class");
  }
  if (!eval_set.empty() && eval_set.dim() != model.feature_dim()) {
    throw DataError("evaluation features have dimension " + std::to_string(eval_set.dim()) +
                    ", model expects " + std::to_string(model.feature_dim()));
  }
  const ClassSet& classes = eval_set.classes();
  const std::size_t first = classes.index_of(model.negatives().front());
  const std::size_t second = classes.index_of(model.target());
  PredictionTable table(classes, PredictionMode::pairwise);
  for (std::size_t s = 0; s < eval_set.size(); ++s) {
    const std::size_t label = eval_set.label_index(s);
    if (label != first && label != second) continue;
    const Sample& sample = eval_set.sample(s);
    table.set_pairwise(sample.id, first, second, model.score(sample.features));
  }
  return table;
}

PredictionTable predict_all(std::span<const LinearModel> models, const LabeledFeatureSet& eval_set,
                            PredictionMode mode) {
  PredictionTable table(eval_set.classes(), mode);
  for (const LinearModel& model : models) {
    switch (mode) {
      case PredictionMode::ovr: table.merge(predict(model, eval_set)); break;
      case PredictionMode::pairwise: table.merge(predict_pairwise(model, eval_set)); break;
      case PredictionMode::multi: table.merge(predict(model, eval_set)); break;
    }
  }
  return table;
}

}  // namespace classim::classifiers
