#include "classim/core/class_set.hpp"

#include <algorithm>

#include "classim/core/errors.hpp"

namespace classim {

ClassSet::ClassSet(std::vector<ClassLabel> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      throw DataError("class labels must be non-empty");
    }
    if (i > 0 && labels_[i] == labels_[i - 1]) {
      throw DataError("duplicate class label '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> ClassSet::find(std::string_view label) const noexcept {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t ClassSet::index_of(std::string_view label) const {
  if (auto index = find(label)) {
    return *index;
  }
  throw DataError("unknown class label '" + std::string(label) + "'");
}

}  // namespace classim
