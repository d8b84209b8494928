#pragma once

#include <filesystem>

#include "classim/twolevel/model.hpp"

namespace classim::twolevel {

inline constexpr int kTwoLevelFormatVersion = 1;
inline constexpr const char* kTwoLevelDocument = "twolevel.json";

/// Writes twolevel.json (class order, thresholds, similar sets, model file
/// names) and one JSON file per classifier into `dir`, which must exist.
void save_two_level(const TwoLevelModel& model, const std::filesystem::path& dir);

TwoLevelModel load_two_level(const std::filesystem::path& dir);

}  // namespace classim::twolevel
