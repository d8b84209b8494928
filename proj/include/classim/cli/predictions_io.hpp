#pragma once

#include <filesystem>
#include <string_view>

#include "classim/core/dataset.hpp"
#include "classim/core/predictions.hpp"

namespace classim::cli {

/// Reads JSONL prediction records, one per line:
///   ovr:      {"id", "true_label", "target", "score"}
///   multi:    {"id", "true_label", "scores": {class: probability, ...}}
///   pairwise: {"id", "true_label", "pair": [a, b], "score"}  (score is for b against a)
/// Every id must name a sample of `data` with the same label. Records for
/// samples outside `eval_split` are skipped; the samples inside it must be
/// fully covered for `mode`. Errors carry the file name and line number.
PredictionTable ingest_predictions(const std::filesystem::path& path, PredictionMode mode,
                                   const SplitDataset& data, Split eval_split);
PredictionTable parse_predictions(std::string_view text, std::string_view source,
                                  PredictionMode mode, const SplitDataset& data, Split eval_split);

}  // namespace classim::cli
