#include "classim/pd/parametric_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "classim/core/errors.hpp"
#include "classim/core/parallel.hpp"

namespace classim::pd {

std::vector<ClassMoments> class_moments(const LabeledFeatureSet& set) {
  const std::size_t n = set.classes().size();
  const std::size_t dim = set.dim();
  std::vector<ClassMoments> out(n, ClassMoments{std::vector<double>(dim, 0.0),
                                                std::vector<double>(dim, 0.0)});
  const auto counts = set.class_counts();
  for (std::size_t c = 0; c < n; ++c) {
    if (counts[c] < 2) {
      throw DataError("class '" + set.classes().label(c) +
                      "' needs at least two samples for moments, has " + std::to_string(counts[c]));
    }
  }
  for (std::size_t s = 0; s < set.size(); ++s) {
    auto& m = out[set.label_index(s)].mean;
    const auto x = set.features(s);
    for (std::size_t d = 0; d < dim; ++d) m[d] += x[d];
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (double& v : out[c].mean) v /= static_cast<double>(counts[c]);
  }
  for (std::size_t s = 0; s < set.size(); ++s) {
    auto& m = out[set.label_index(s)];
    const auto x = set.features(s);
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = x[d] - m.mean[d];
      m.stddev[d] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (double& v : out[c].stddev) v = std::sqrt(v / static_cast<double>(counts[c] - 1));
  }
  return out;
}

double parametric_distance(const ClassMoments& a, const ClassMoments& b) {
  if (a.mean.size() != b.mean.size() || a.stddev.size() != b.stddev.size() ||
      a.mean.size() != a.stddev.size()) {
    throw DataError("parametric distance needs moments of matching dimension");
  }
  double total = 0.0;
  for (std::size_t d = 0; d < a.mean.size(); ++d) {
    const double dm = a.mean[d] - b.mean[d];
    const double ds = a.stddev[d] - b.stddev[d];
    total += dm * dm + ds * ds;
  }
  return total;
}

DistanceMatrix::DistanceMatrix(ClassSet classes, std::vector<double> values)
    : classes_(std::move(classes)), values_(std::move(values)) {
  const std::size_t n = classes_.size();
  if (values_.size() != n * n) {
    throw DataError("distance matrix needs " + std::to_string(n * n) + " values");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) {
      throw DataError("distance matrix diagonal must be zero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = at(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DataError("distance matrix entries must be finite and non-negative");
      }
      if (v != at(j, i)) {
        throw DataError("distance matrix is not symmetric at ('" + classes_.label(i) + "', '" +
                        classes_.label(j) + "')");
      }
    }
  }
}

double DistanceMatrix::at(std::string_view ci, std::string_view cj) const {
  return at(classes_.index_of(ci), classes_.index_of(cj));
}

DistanceMatrix pd_matrix(const LabeledFeatureSet& set, unsigned threads) {
  const auto moments = class_moments(set);
  const std::size_t n = moments.size();
  std::vector<double> values(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      values[i * n + j] = parametric_distance(moments[i], moments[j]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) values[i * n + j] = values[j * n + i];
  }
  return DistanceMatrix(set.classes(), std::move(values));
}

std::vector<RankedClass> top_k(const DistanceMatrix& matrix, std::string_view target, std::size_t k) {
  return rank_row(matrix.classes(), matrix.values(), target, k, RankOrder::ascending);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end + 1 < order.size() && v[order[end + 1]] == v[order[k]]) ++end;
    const double rank = 0.5 * static_cast<double>(k + end) + 1.0;
    for (std::size_t t = k; t <= end; ++t) ranks[order[t]] = rank;
    k = end + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("rank correlation needs sequences of equal length");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> row_rank_correlations(const SimilarityMatrix& sim, const DistanceMatrix& pd) {
  if (!(sim.classes() == pd.classes())) {
    throw DataError("similarity and distance matrices cover different classes");
  }
  const std::size_t n = sim.size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> s, d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      s.push_back(sim.at(i, j));
      d.push_back(-pd.at(i, j));
    }
    out.push_back(spearman(s, d));
  }
  return out;
}

}  // namespace classim::pd
