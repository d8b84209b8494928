#pragma once

#include <filesystem>

#include <json.hpp>

#include "classim/classifiers/linear_model.hpp"

namespace classim::classifiers {

inline constexpr int kModelFormatVersion = 1;

/// {format_version, kind, target, negatives | classes, feature_dim, outputs,
///  standardization{mean, scale}, weights (row-major), train_config}
nlohmann::json model_to_json(const LinearModel& model);
/// Throws DataError on a malformed document or an unsupported format_version.
LinearModel model_from_json(const nlohmann::json& doc);

nlohmann::json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& doc);

void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace classim::classifiers
