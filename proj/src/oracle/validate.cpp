#include "classim/oracle/validate.hpp"

#include <cmath>
#include <optional>

#include "classim/classifiers/train.hpp"
#include "classim/core/counting.hpp"
#include "classim/core/errors.hpp"
#include "classim/core/parallel.hpp"
#include "classim/core/similarity.hpp"
#include "classim/oracle/intersection.hpp"
#include "classim/oracle/sampling.hpp"

namespace classim::oracle {

std::string_view to_string(ValidationMode mode) noexcept {
  switch (mode) {
    case ValidationMode::ideal: return "ideal";
    case ValidationMode::ovr: return "ovr";
    case ValidationMode::multi: return "multi";
  }
  return "ideal";
}

ValidationMode parse_validation_mode(std::string_view text) {
  if (text == "ideal") return ValidationMode::ideal;
  if (text == "ovr") return ValidationMode::ovr;
  if (text == "multi") return ValidationMode::multi;
  throw UsageError("unknown oracle mode '" + std::string(text) + "' (expected ideal, ovr or multi)");
}

const PairValidation& ValidationReport::pair(std::string_view a, std::string_view b) const {
  for (const auto& p : pairs) {
    if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return p;
  }
  throw DataError("no validation row for pair '" + std::string(a) + "', '" + std::string(b) + "'");
}

namespace {

ConfusionCounts ideal_counts(const Scenario& scenario, const LabeledFeatureSet& data) {
  const std::size_t n = scenario.classes.size();
  PredictionTable table(scenario.classes, PredictionMode::pairwise);
  for (std::size_t s = 0; s < data.size(); ++s) {
    const std::size_t own = data.label_index(s);
    const auto x = data.features(s);
    for (std::size_t other = 0; other < n; ++other) {
      if (other == own) continue;
      const std::size_t i = std::min(own, other);
      const std::size_t j = std::max(own, other);
      table.set_pairwise(data.sample(s).id, i, j, ideal_binary_score(scenario, i, j, x));
    }
  }
  return count_misclass_pairwise_all(data, table);
}

}  // namespace

ValidationReport validate_classim(const Scenario& scenario, ValidationMode mode,
                                  const classifiers::TrainConfig& config, unsigned threads) {
  scenario.validate();
  const std::size_t n = scenario.classes.size();

  std::optional<ConfusionCounts> counts;
  std::size_t evaluated = 0;
  if (mode == ValidationMode::ideal) {
    const LabeledFeatureSet data = sample(scenario, threads);
    counts = ideal_counts(scenario, data);
    evaluated = data.size();
  } else {
    const SplitDataset split = sample_split(scenario, threads);
    if (mode == ValidationMode::ovr) {
      const auto models = classifiers::train_ovr_all(split.train, config, threads);
      const auto table = classifiers::predict_all(models, split.validation, PredictionMode::ovr);
      counts = count_misclass_ovr(split.validation, table);
    } else {
      const auto model = classifiers::train_multi(split.train, config);
      counts = count_misclass_multi(split.validation, classifiers::predict(model, split.validation));
    }
    evaluated = split.validation.size();
  }

  ValidationReport report;
  report.mode = mode;
  report.evaluated_samples = evaluated;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      PairValidation row;
      row.first = scenario.classes.label(i);
      row.second = scenario.classes.label(j);
      row.n_first = counts->total(i);
      row.n_second = counts->total(j);
      row.second_given_first = counts->misclassified(i, j);
      row.first_given_second = counts->misclassified(j, i);
      row.class_sim = class_sim(*counts, i, j);
      row.empirical = 2.0 * row.class_sim;
      row.equal_priors = scenario.equal_priors(i, j);
      report.pairs.push_back(std::move(row));
    }
  }

  parallel_for(report.pairs.size(), threads, [&](std::size_t k) {
    auto& row = report.pairs[k];
    row.exact = exact_intersection(scenario, row.first, row.second);
    row.deviation = row.empirical - row.exact;
    const double p1 = static_cast<double>(row.second_given_first) / static_cast<double>(row.n_first);
    const double p2 = static_cast<double>(row.first_given_second) / static_cast<double>(row.n_second);
    row.se_bound = 3.0 * std::sqrt(p1 * (1.0 - p1) / static_cast<double>(row.n_first) +
                                   p2 * (1.0 - p2) / static_cast<double>(row.n_second));
    row.within_bound = row.equal_priors && std::abs(row.deviation) <= row.se_bound + kAreaSlack;
  });
  return report;
}

}  // namespace classim::oracle
