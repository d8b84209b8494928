#include "classim/core/counting.hpp"

#include "classim/core/errors.hpp"

namespace classim {

ConfusionCounts::ConfusionCounts(ClassSet classes, PredictionMode mode)
    : classes_(std::move(classes)),
      mode_(mode),
      cells_(classes_.size() * classes_.size(), 0),
      totals_(classes_.size(), 0) {}

std::uint64_t ConfusionCounts::misclassified(std::size_t from, std::size_t to) const {
  if (from == to) {
    throw DataError("misclassification count is undefined for a class with itself");
  }
  return cells_.at(from * size() + to);
}

void ConfusionCounts::set_misclassified(std::size_t from, std::size_t to, std::uint64_t n) {
  if (from == to) {
    throw DataError("misclassification count is undefined for a class with itself");
  }
  cells_.at(from * size() + to) = n;
}

void ConfusionCounts::validate() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (totals_[i] == 0) {
      throw DataError("class '" + classes_.label(i) + "' has no samples in the evaluation set");
    }
    std::uint64_t row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t v = cells_[i * n + j];
      if (v > totals_[i]) {
        throw DataError("count N(" + classes_.label(j) + "|" + classes_.label(i) +
                        ") exceeds class size");
      }
      row += v;
    }
    if (mode_ == PredictionMode::multi && row != totals_[i]) {
      throw DataError("multi-mode counts for class '" + classes_.label(i) +
                      "' do not partition its samples");
    }
  }
}

namespace {

void require_same_classes(const LabeledFeatureSet& eval_set, const PredictionTable& preds,
                          PredictionMode mode) {
  if (preds.mode() != mode) {
    throw DataError("expected a " + std::string(to_string(mode)) + " prediction table, got " +
                    std::string(to_string(preds.mode())));
  }
  if (eval_set.classes() != preds.classes()) {
    throw DataError("prediction table and evaluation set use different class sets");
  }
}

void fill_totals(ConfusionCounts& counts, const LabeledFeatureSet& eval_set) {
  const auto sizes = eval_set.class_counts();
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] == 0) {
      throw DataError("class '" + eval_set.classes().label(c) +
                      "' has no samples in the evaluation set");
    }
    counts.set_total(c, sizes[c]);
  }
}

}  // namespace

ConfusionCounts count_misclass_ovr(const LabeledFeatureSet& eval_set,
                                   const PredictionTable& preds) {
  require_same_classes(eval_set, preds, PredictionMode::ovr);
  const ClassSet& classes = eval_set.classes();
  const std::size_t n = classes.size();
  ConfusionCounts counts(classes, PredictionMode::ovr);
  fill_totals(counts, eval_set);

  std::vector<std::uint64_t> cells(n * n, 0);
  for (std::size_t s = 0; s < eval_set.size(); ++s) {
    const Sample& sample = eval_set.sample(s);
    const std::size_t i = eval_set.label_index(s);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto score = preds.ovr_score(sample.id, j);
      if (!score) {
        throw DataError("missing ovr score for sample '" + sample.id + "', target '" +
                        classes.label(j) + "'");
      }
      if (*score > kDecisionThreshold) {
        ++cells[i * n + j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) counts.set_misclassified(i, j, cells[i * n + j]);
    }
  }
  counts.validate();
  return counts;
}

ConfusionCounts count_misclass_multi(const LabeledFeatureSet& eval_set,
                                     const PredictionTable& preds) {
  require_same_classes(eval_set, preds, PredictionMode::multi);
  const ClassSet& classes = eval_set.classes();
  const std::size_t n = classes.size();
  ConfusionCounts counts(classes, PredictionMode::multi);
  fill_totals(counts, eval_set);

  std::vector<std::uint64_t> cells(n * n, 0);
  for (std::size_t s = 0; s < eval_set.size(); ++s) {
    const Sample& sample = eval_set.sample(s);
    const std::vector<double>* probs = preds.multi_scores(sample.id);
    if (probs == nullptr) {
      throw DataError("missing probability vector for sample '" + sample.id + "'");
    }
    // Strict > keeps the first maximum, i.e. the canonically first class on ties.
    std::size_t best = 0;
    for (std::size_t c = 1; c < n; ++c) {
      if ((*probs)[c] > (*probs)[best]) best = c;
    }
    ++cells[eval_set.label_index(s) * n + best];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        counts.set_correct(i, cells[i * n + j]);
      } else {
        counts.set_misclassified(i, j, cells[i * n + j]);
      }
    }
  }
  counts.validate();
  return counts;
}

namespace {

PairCounts count_pair(const LabeledFeatureSet& eval_set, const PredictionTable& preds,
                      std::size_t i, std::size_t j) {
  const ClassSet& classes = eval_set.classes();
  // The classifier may be stored as (i, j) or (j, i); `lo`/`hi` name the stored
  // orientation, where the score is the confidence for `hi` against `lo`.
  const bool forward = preds.has_pair(i, j);
  if (!forward && !preds.has_pair(j, i)) {
    throw DataError("no pairwise classifier for pair (" + classes.label(i) + ", " +
                    classes.label(j) + ")");
  }
  const std::size_t lo = forward ? i : j;
  const std::size_t hi = forward ? j : i;

  std::uint64_t hi_given_lo = 0;
  std::uint64_t lo_given_hi = 0;
  for (std::size_t s = 0; s < eval_set.size(); ++s) {
    const std::size_t label = eval_set.label_index(s);
    if (label != lo && label != hi) continue;
    const Sample& sample = eval_set.sample(s);
    const auto score = preds.pairwise_score(sample.id, lo, hi);
    if (!score) {
      throw DataError("missing pairwise score for sample '" + sample.id + "', pair (" +
                      classes.label(lo) + ", " + classes.label(hi) + ")");
    }
    if (label == lo && *score > kDecisionThreshold) ++hi_given_lo;
    if (label == hi && *score <= kDecisionThreshold) ++lo_given_hi;
  }
  return forward ? PairCounts{hi_given_lo, lo_given_hi} : PairCounts{lo_given_hi, hi_given_lo};
}

}  // namespace

PairCounts count_misclass_pairwise(const LabeledFeatureSet& eval_set, const PredictionTable& preds,
                                   std::string_view first, std::string_view second) {
  require_same_classes(eval_set, preds, PredictionMode::pairwise);
  const std::size_t i = eval_set.classes().index_of(first);
  const std::size_t j = eval_set.classes().index_of(second);
  if (i == j) {
    throw DataError("pairwise counting needs two distinct classes, got '" + std::string(first) +
                    "' twice");
  }
  return count_pair(eval_set, preds, i, j);
}

ConfusionCounts count_misclass_pairwise_all(const LabeledFeatureSet& eval_set,
                                            const PredictionTable& preds) {
  require_same_classes(eval_set, preds, PredictionMode::pairwise);
  const std::size_t n = eval_set.classes().size();
  ConfusionCounts counts(eval_set.classes(), PredictionMode::pairwise);
  fill_totals(counts, eval_set);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const PairCounts pc = count_pair(eval_set, preds, i, j);
      counts.set_misclassified(i, j, pc.second_given_first);
      counts.set_misclassified(j, i, pc.first_given_second);
    }
  }
  counts.validate();
  return counts;
}

}  // namespace classim
