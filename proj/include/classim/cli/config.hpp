#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "classim/classifiers/linear_model.hpp"

namespace classim::cli {

/// Training configuration TOML with optional keys learning_rate, epochs, l2,
/// seed and class_weighting ("none" or "balanced"). Absent keys keep their
/// defaults; an absent seed takes `default_seed`.
classifiers::TrainConfig parse_train_config(std::string_view text, std::string_view source,
                                            std::uint64_t default_seed);
classifiers::TrainConfig load_train_config(const std::filesystem::path& path,
                                           std::uint64_t default_seed);

}  // namespace classim::cli
