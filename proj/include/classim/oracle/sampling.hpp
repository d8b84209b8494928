#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "classim/core/dataset.hpp"
#include "classim/oracle/scenario.hpp"

namespace classim::oracle {

/// Bayes-optimal binary classifier between classes i and j: 1 when
/// p(c_j|x) > p(c_i|x), else 0. Ties go to c_i.
double ideal_binary_score(const Scenario& scenario, std::size_t i, std::size_t j,
                          std::span<const double> x);

/// Samples drawn per class: samples_per_class each, or samples_per_class * |C|
/// divided by prior with largest-remainder rounding.
std::vector<std::size_t> sample_counts(const Scenario& scenario);

/// Draws a labelled sample set. Each class uses its own RNG stream derived from
/// the scenario seed, so the result does not depend on `threads`. Sample ids are
/// "<latent class>#<k>"; with annotation noise the label may differ from the
/// latent class.
LabeledFeatureSet sample(const Scenario& scenario, unsigned threads = 1);

/// sample() followed by a stratified split seeded with the scenario seed.
SplitDataset sample_split(const Scenario& scenario, unsigned threads = 1);

}  // namespace classim::oracle
