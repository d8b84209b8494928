#include "classim/twolevel/evaluate.hpp"

#include "classim/core/errors.hpp"
#include "classim/core/parallel.hpp"

namespace classim::twolevel {

std::uint64_t AccuracyReport::routed(std::string_view truth, std::string_view predicted) const {
  const std::size_t n = classes.size();
  const std::size_t col = predicted == kNoneLabel ? n : classes.index_of(predicted);
  return confusion.at(classes.index_of(truth) * (n + 1) + col);
}

AccuracyReport evaluate(const Router& router, const LabeledFeatureSet& test, unsigned threads) {
  if (test.empty()) {
    throw DataError("cannot evaluate on an empty test set");
  }
  const ClassSet& classes = test.classes();
  const std::size_t n = classes.size();
  std::vector<ClassLabel> labels(test.size());
  parallel_for(test.size(), threads, [&](std::size_t s) { labels[s] = router(test.features(s)); });

  AccuracyReport report;
  report.classes = classes;
  report.total = test.size();
  report.class_totals.assign(n, 0);
  report.confusion.assign(n * (n + 1), 0);
  for (std::size_t s = 0; s < test.size(); ++s) {
    const std::size_t truth = test.label_index(s);
    ++report.class_totals[truth];
    std::size_t col = n;
    if (labels[s] == kNoneLabel) {
      ++report.none_count;
    } else {
      const auto idx = classes.find(labels[s]);
      if (!idx) {
        throw DataError("router returned unknown label '" + labels[s] + "' for sample '" +
                        test.sample(s).id + "'");
      }
      col = *idx;
    }
    ++report.confusion[truth * (n + 1) + col];
    if (col == truth) ++report.correct;
  }
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  report.recall.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (report.class_totals[c] > 0) {
      report.recall[c] = static_cast<double>(report.confusion[c * (n + 1) + c]) /
                         static_cast<double>(report.class_totals[c]);
    }
  }
  return report;
}

}  // namespace classim::twolevel
