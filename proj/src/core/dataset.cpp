#include "classim/core/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_set>

#include "classim/core/errors.hpp"

namespace classim {

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "validation") return Split::validation;
  if (text == "test") return Split::test;
  throw DataError("unknown split tag '" + std::string(text) + "'");
}

LabeledFeatureSet::LabeledFeatureSet(ClassSet classes, Split split, std::vector<Sample> samples)
    : classes_(std::move(classes)), split_(split), samples_(std::move(samples)) {
  label_index_.reserve(samples_.size());
  std::unordered_set<std::string_view> ids;
  ids.reserve(samples_.size());
  for (const Sample& s : samples_) {
    auto index = classes_.find(s.label);
    if (!index) {
      throw DataError("sample '" + s.id + "' has label '" + s.label + "' outside the class set");
    }
    label_index_.push_back(*index);
    if (!ids.insert(s.id).second) {
      throw DataError("duplicate sample id '" + s.id + "' in " + std::string(to_string(split_)) +
                      " split");
    }
    if (dim_ == 0) {
      dim_ = s.features.size();
      if (dim_ == 0) {
        throw DataError("sample '" + s.id + "' has no features");
      }
    } else if (s.features.size() != dim_) {
      throw DataError("sample '" + s.id + "' has " + std::to_string(s.features.size()) +
                      " features, expected " + std::to_string(dim_));
    }
  }
}

std::vector<std::size_t> LabeledFeatureSet::class_counts() const {
  std::vector<std::size_t> counts(classes_.size(), 0);
  for (std::size_t idx : label_index_) {
    ++counts[idx];
  }
  return counts;
}

LabeledFeatureSet LabeledFeatureSet::filter_classes(std::span<const std::size_t> keep) const {
  std::vector<bool> wanted(classes_.size(), false);
  for (std::size_t k : keep) {
    wanted.at(k) = true;
  }
  std::vector<Sample> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (wanted[label_index_[i]]) {
      out.push_back(samples_[i]);
    }
  }
  return LabeledFeatureSet(classes_, split_, std::move(out));
}

LabeledFeatureSet merge(std::span<const LabeledFeatureSet* const> parts, Split split) {
  if (parts.empty()) {
    throw DataError("nothing to merge");
  }
  std::vector<Sample> all;
  for (const LabeledFeatureSet* part : parts) {
    if (part->classes() != parts.front()->classes()) {
      throw DataError("cannot merge feature sets over different class sets");
    }
    all.insert(all.end(), part->samples().begin(), part->samples().end());
  }
  return LabeledFeatureSet(parts.front()->classes(), split, std::move(all));
}

const LabeledFeatureSet& SplitDataset::get(Split split) const {
  switch (split) {
    case Split::train: return train;
    case Split::validation: return validation;
    case Split::test: return test;
  }
  return train;
}

namespace {

// Largest-remainder allocation of `percent` of each class size, capped by
// `capacity`, so that the quotas sum to round(total * percent / 100).
std::vector<std::size_t> allocate_quota(const std::vector<std::size_t>& sizes,
                                        const std::vector<std::size_t>& capacity, int percent) {
  const auto p = static_cast<std::size_t>(percent);
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  const std::size_t target = (total * p + 50) / 100;

  std::vector<std::size_t> quota(sizes.size());
  std::vector<std::size_t> remainder(sizes.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    quota[c] = std::min(sizes[c] * p / 100, capacity[c]);
    remainder[c] = sizes[c] * p % 100;
    assigned += quota[c];
  }

  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t c : order) {
    if (assigned >= target) break;
    if (remainder[c] > 0 && quota[c] < capacity[c]) {
      ++quota[c];
      ++assigned;
    }
  }
  return quota;
}

}  // namespace

SplitDataset stratified_split(const ClassSet& classes, std::vector<Sample> samples,
                              std::uint64_t seed, SplitRatios ratios) {
  const std::size_t n_classes = classes.size();
  std::vector<std::vector<std::size_t>> members(n_classes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    members[classes.index_of(samples[i].label)].push_back(i);
  }

  std::vector<std::size_t> sizes(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) sizes[c] = members[c].size();

  const auto test_quota = allocate_quota(sizes, sizes, ratios.test_percent);
  std::vector<std::size_t> remaining(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) remaining[c] = sizes[c] - test_quota[c];
  const auto val_quota = allocate_quota(sizes, remaining, ratios.validation_percent);

  std::vector<Split> assignment(samples.size(), Split::train);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    std::vector<std::size_t> shuffled = members[c];
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t k = 0; k < shuffled.size(); ++k) {
      if (k < test_quota[c]) {
        assignment[shuffled[k]] = Split::test;
      } else if (k < test_quota[c] + val_quota[c]) {
        assignment[shuffled[k]] = Split::validation;
      }
    }
  }

  std::vector<Sample> parts[3];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    parts[static_cast<int>(assignment[i])].push_back(std::move(samples[i]));
  }
  return SplitDataset{classes,
                      LabeledFeatureSet(classes, Split::train, std::move(parts[0])),
                      LabeledFeatureSet(classes, Split::validation, std::move(parts[1])),
                      LabeledFeatureSet(classes, Split::test, std::move(parts[2]))};
}

}  // namespace classim
