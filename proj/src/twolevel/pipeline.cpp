#include "classim/twolevel/pipeline.hpp"

#include <array>

#include "classim/classifiers/train.hpp"
#include "classim/core/counting.hpp"

namespace classim::twolevel {

SimilarityMatrix validation_similarity(const SplitDataset& split,
                                       const classifiers::TrainConfig& config, unsigned threads) {
  const auto models = classifiers::train_ovr_all(split.train, config, threads);
  const auto table = classifiers::predict_all(models, split.validation, PredictionMode::ovr);
  return similarity_matrix(count_misclass_ovr(split.validation, table));
}

TwoLevelModel build_from_split(const SplitDataset& split, const SimilarSets& sets,
                               const classifiers::TrainConfig& config, unsigned threads,
                               std::vector<std::size_t> order) {
  const std::array<const LabeledFeatureSet*, 2> parts{&split.train, &split.validation};
  const LabeledFeatureSet second_train = merge(parts, Split::train);
  return build_two_level(split.train, second_train, sets, config, threads, std::move(order));
}

}  // namespace classim::twolevel
