#include "classim/twolevel/model.hpp"

#include <fstream>
#include <numeric>

#include "classim/classifiers/train.hpp"
#include "classim/core/errors.hpp"
#include "classim/core/parallel.hpp"

namespace classim::twolevel {

namespace {

void check_order(std::span<const std::size_t> order, std::size_t n) {
  std::vector<bool> seen(n, false);
  if (order.size() != n) {
    throw DataError("routing order must list all " + std::to_string(n) + " classes");
  }
  for (std::size_t idx : order) {
    if (idx >= n || seen[idx]) {
      throw DataError("routing order is not a permutation of the classes");
    }
    seen[idx] = true;
  }
}

void check_dim(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.feature_dim()) {
    throw DataError("feature vector has dimension " + std::to_string(x.size()) + ", models expect " +
                    std::to_string(model.feature_dim()));
  }
}

}  // namespace

std::vector<std::size_t> canonical_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

std::vector<std::size_t> load_order_file(const std::filesystem::path& path, const ClassSet& classes) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot read order file " + path.string());
  }
  std::vector<std::size_t> order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto idx = classes.find(line);
    if (!idx) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": unknown class '" + line + "'");
    }
    order.push_back(*idx);
  }
  check_order(order, classes.size());
  return order;
}

void TwoLevelModel::validate() const {
  const std::size_t n = classes.size();
  check_order(order, n);
  if (first_level.size() != n || second_level.size() != n || similar.sets.size() != n) {
    throw DataError("two-level model does not cover every class");
  }
  if (!(similar.classes == classes)) {
    throw DataError("similar sets and model cover different classes");
  }
  for (std::size_t c = 0; c < n; ++c) {
    const ClassLabel& label = classes.label(c);
    const auto& f = first_level[c];
    if (f.kind() != classifiers::ModelKind::binary || f.target() != label) {
      throw DataError("first-level model for '" + label + "' has the wrong target");
    }
    if (similar.sets[c].empty() == second_level[c].has_value()) {
      throw DataError("class '" + label + "': a second-level model must exist exactly when its similar set is non-empty");
    }
    if (second_level[c]) {
      if (second_level[c]->target() != label || second_level[c]->negatives() != similar.sets[c]) {
        throw DataError("second-level model for '" + label + "' does not match its similar set");
      }
      if (second_level[c]->feature_dim() != f.feature_dim()) {
        throw DataError("second-level model for '" + label + "' has a different feature dimension");
      }
    }
  }
}

std::size_t TwoLevelModel::second_level_count() const {
  std::size_t k = 0;
  for (const auto& m : second_level) k += m.has_value();
  return k;
}

TwoLevelModel build_two_level(const LabeledFeatureSet& first_train,
                              const LabeledFeatureSet& second_train, const SimilarSets& sets,
                              const classifiers::TrainConfig& config, unsigned threads,
                              std::vector<std::size_t> order) {
  const ClassSet& classes = first_train.classes();
  if (!(second_train.classes() == classes) || !(sets.classes == classes)) {
    throw DataError("training sets and similar sets must share one class set");
  }
  const std::size_t n = classes.size();
  TwoLevelModel model;
  model.classes = classes;
  model.order = order.empty() ? canonical_order(n) : std::move(order);
  model.similar = sets;
  model.first_level = classifiers::train_ovr_all(first_train, config, threads);
  model.second_level.resize(n);
  parallel_for(n, threads, [&](std::size_t c) {
    if (!sets.sets[c].empty()) {
      model.second_level[c] = classifiers::train_ovr(second_train, classes.label(c), sets.sets[c], config);
    }
  });
  model.validate();
  return model;
}

TwoLevelModel build_two_level(const LabeledFeatureSet& train, const SimilarSets& sets,
                              const classifiers::TrainConfig& config, unsigned threads) {
  return build_two_level(train, train, sets, config, threads);
}

ClassLabel route_scores(const ClassSet& classes, std::span<const std::size_t> order,
                        const FirstLevelScore& first, const SecondLevelScore& second, double t1,
                        double t2) {
  for (std::size_t c : order) {
    if (!(first(c) > t1)) continue;
    const auto fine = second(c);
    if (!fine || *fine > t2) return classes.label(c);
  }
  return ClassLabel(kNoneLabel);
}

ClassLabel route(const TwoLevelModel& model, std::span<const double> x) {
  check_dim(model.first_level.front(), x);
  return route_scores(
      model.classes, model.order, [&](std::size_t c) { return model.first_level[c].score(x); },
      [&](std::size_t c) -> std::optional<double> {
        if (!model.second_level[c]) return std::nullopt;
        return model.second_level[c]->score(x);
      },
      model.first_threshold, model.second_threshold);
}

ClassLabel route_baseline(const ClassSet& classes, std::span<const LinearModel> first_level,
                          std::span<const std::size_t> order, std::span<const double> x) {
  if (first_level.size() != classes.size()) {
    throw DataError("baseline router needs one model per class");
  }
  check_dim(first_level.front(), x);
  return route_scores(
      classes, order, [&](std::size_t c) { return first_level[c].score(x); },
      [](std::size_t) -> std::optional<double> { return std::nullopt; });
}

ClassLabel route_baseline(const TwoLevelModel& model, std::span<const double> x) {
  return route_baseline(model.classes, model.first_level, model.order, x);
}

}  // namespace classim::twolevel
