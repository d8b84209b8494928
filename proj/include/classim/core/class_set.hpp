#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace classim {

using ClassLabel = std::string;

/// Label emitted by routers when no classifier fires. Rejected as an input label.
inline constexpr std::string_view kNoneLabel = "none";

/// The universe of class labels in canonical (lexicographic byte) order.
///
/// Every index-based structure in the library (confusion counts, matrices,
/// probability vectors) is laid out in this order.
class ClassSet {
public:
  ClassSet() = default;

  /// Sorts the labels. Throws DataError on empty or duplicate labels.
  explicit ClassSet(std::vector<ClassLabel> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  const std::vector<ClassLabel>& labels() const noexcept { return labels_; }
  const ClassLabel& label(std::size_t index) const { return labels_.at(index); }

  std::optional<std::size_t> find(std::string_view label) const noexcept;
  bool contains(std::string_view label) const noexcept { return find(label).has_value(); }

  /// Index of a label; throws DataError naming the label when it is unknown.
  std::size_t index_of(std::string_view label) const;

  bool operator==(const ClassSet&) const = default;

private:
  std::vector<ClassLabel> labels_;
};

}  // namespace classim
