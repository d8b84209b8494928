#include "classim/core/similarity.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "classim/core/errors.hpp"

namespace classim {

double class_sim(const ConfusionCounts& counts, std::size_t i, std::size_t j) {
  if (i == j) {
    throw DataError("ClassSim is defined only for distinct classes");
  }
  const std::size_t a = std::min(i, j);
  const std::size_t b = std::max(i, j);
  const std::uint64_t n_a = counts.total(a);
  const std::uint64_t n_b = counts.total(b);
  if (n_a == 0 || n_b == 0) {
    throw DataError("ClassSim needs non-empty classes '" + counts.classes().label(a) + "' and '" +
                    counts.classes().label(b) + "'");
  }
  const double ratio_ab = static_cast<double>(counts.misclassified(a, b)) / static_cast<double>(n_a);
  const double ratio_ba = static_cast<double>(counts.misclassified(b, a)) / static_cast<double>(n_b);
  return 0.5 * (ratio_ab + ratio_ba);
}

double class_sim(const ConfusionCounts& counts, std::string_view ci, std::string_view cj) {
  return class_sim(counts, counts.classes().index_of(ci), counts.classes().index_of(cj));
}

SimilarityMatrix::SimilarityMatrix(ClassSet classes, std::vector<double> values)
    : classes_(std::move(classes)), values_(std::move(values)) {
  const std::size_t n = classes_.size();
  if (n < 2) {
    throw DataError("a similarity matrix needs at least two classes");
  }
  if (values_.size() != n * n) {
    throw DataError("similarity matrix has " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(n * n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (values_[i * n + i] != 1.0) {
      throw DataError("similarity matrix diagonal must be 1 (class '" + classes_.label(i) + "')");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values_[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DataError("similarity (" + classes_.label(i) + ", " + classes_.label(j) +
                        ") is outside [0,1]");
      }
      if (v != values_[j * n + i]) {
        throw DataError("similarity matrix is not symmetric at (" + classes_.label(i) + ", " +
                        classes_.label(j) + ")");
      }
    }
  }
}

double SimilarityMatrix::at(std::string_view ci, std::string_view cj) const {
  return at(classes_.index_of(ci), classes_.index_of(cj));
}

SimilarityMatrix similarity_matrix(const ConfusionCounts& counts) {
  const std::size_t n = counts.size();
  if (n < 2) {
    throw DataError("similarity needs at least two classes");
  }
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = class_sim(counts, i, j);
      values[i * n + j] = s;
      values[j * n + i] = s;
    }
  }
  return SimilarityMatrix(counts.classes(), std::move(values));
}

std::vector<RankedClass> rank_row(const ClassSet& classes, std::span<const double> values,
                                  std::string_view target, std::size_t k, RankOrder order) {
  const std::size_t n = classes.size();
  const std::size_t row = classes.index_of(target);
  if (values.size() != n * n) {
    throw DataError("matrix size does not match its class set");
  }
  if (k < 1 || k + 1 > n) {
    throw DataError("k must be between 1 and " + std::to_string(n - 1) + ", got " +
                    std::to_string(k));
  }
  std::vector<RankedClass> entries;
  entries.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != row) entries.push_back({classes.label(j), values[row * n + j]});
  }
  // Labels are already in canonical order, so a stable sort on score alone
  // breaks ties lexicographically.
  if (order == RankOrder::descending) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RankedClass& a, const RankedClass& b) { return a.score > b.score; });
  } else {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RankedClass& a, const RankedClass& b) { return a.score < b.score; });
  }
  entries.resize(k);
  return entries;
}

std::vector<RankedClass> top_k(const SimilarityMatrix& matrix, std::string_view target,
                               std::size_t k) {
  return rank_row(matrix.classes(), matrix.values(), target, k, RankOrder::descending);
}

std::string format_score3(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, 3);
  if (ec != std::errc{}) {
    throw NumericalError("cannot format score");
  }
  return std::string(buf.data(), end);
}

std::string format_ranked(const RankedClass& entry) {
  return entry.label + ":" + format_score3(entry.score);
}

}  // namespace classim
