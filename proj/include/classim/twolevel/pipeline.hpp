#pragma once

#include "classim/classifiers/linear_model.hpp"
#include "classim/core/dataset.hpp"
#include "classim/core/similarity.hpp"
#include "classim/twolevel/model.hpp"

namespace classim::twolevel {

/// ClassSim matrix from OVR models trained on `split.train` and counted on
/// `split.validation`.
SimilarityMatrix validation_similarity(const SplitDataset& split,
                                       const classifiers::TrainConfig& config, unsigned threads = 1);

/// First level on the train split, second level on train + validation.
TwoLevelModel build_from_split(const SplitDataset& split, const SimilarSets& sets,
                               const classifiers::TrainConfig& config, unsigned threads = 1,
                               std::vector<std::size_t> order = {});

}  // namespace classim::twolevel
