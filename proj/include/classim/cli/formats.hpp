#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "classim/core/dataset.hpp"
#include "classim/core/similarity.hpp"
#include "classim/pd/parametric_distance.hpp"

namespace classim::cli {

/// 17 significant digits; parses back to the same double.
std::string format17(double value);

/// Features CSV: header `id,label[,split],f0,...,f{D-1}`. Without a split
/// column the rows are split per class at 64/16/20 with `seed`. Errors carry
/// the file name and line number.
SplitDataset ingest_features(const std::filesystem::path& path, std::uint64_t seed);
SplitDataset parse_features(std::string_view text, std::string_view source, std::uint64_t seed);

/// Writes every split with an explicit split column, train rows first.
void write_features(const std::filesystem::path& path, const SplitDataset& data);
std::string render_features(const SplitDataset& data);

/// Square matrix CSV. The top-left cell is `distance=false` for similarities
/// and `distance=true` for distances, so rankings know which way to sort.
struct MatrixTable {
  bool distance = false;
  ClassSet classes;
  std::vector<double> values;  // row-major
};

std::string render_matrix(const MatrixTable& table);
MatrixTable parse_matrix(std::string_view text, std::string_view source);
/// Accepts the CSV form or the JSON form written by --format json.
MatrixTable read_matrix(const std::filesystem::path& path);

MatrixTable to_table(const SimilarityMatrix& matrix);
MatrixTable to_table(const pd::DistanceMatrix& matrix);
SimilarityMatrix to_similarity(const MatrixTable& table);

/// `class,rank1,...,rankk` with entries rendered as "class:0.123". Similarity
/// tables rank descending, distance tables ascending.
std::string render_top_k(const MatrixTable& table, std::size_t k);

/// JSON renderings used by --format json.
std::string render_matrix_json(const MatrixTable& table);
std::string render_top_k_json(const MatrixTable& table, std::size_t k);

/// Rejects text that cannot be stored in an unquoted CSV cell.
void check_csv_cell(std::string_view text, std::string_view what);

/// Reads a whole file; DataError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
/// Writes bytes exactly; DataError on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace classim::cli
