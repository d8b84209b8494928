#include "classim/cli/formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "classim/core/errors.hpp"

namespace classim::cli {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back({number, line});
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line, const std::string& msg) {
  throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

}  // namespace

std::string format17(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void check_csv_cell(std::string_view text, std::string_view what) {
  if (text.find_first_of(",\"\r\n") != std::string_view::npos) {
    throw DataError(std::string(what) + " '" + std::string(text) +
                    "' contains a comma, quote or line break");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
}

SplitDataset parse_features(std::string_view text, std::string_view source, std::uint64_t seed) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw DataError(std::string(source) + ": empty features file");
  }
  const auto header = split_fields(lines.front().text);
  const std::size_t hline = lines.front().number;
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    fail_at(source, hline, "header must start with id,label and list at least one feature");
  }
  const bool has_split = header[2] == "split";
  const std::size_t first_feature = has_split ? 3 : 2;
  const std::size_t dim = header.size() - first_feature;
  if (dim == 0) fail_at(source, hline, "no feature columns");
  for (std::size_t d = 0; d < dim; ++d) {
    if (header[first_feature + d] != "f" + std::to_string(d)) {
      fail_at(source, hline, "expected column 'f" + std::to_string(d) + "', found '" +
                                 std::string(header[first_feature + d]) + "'");
    }
  }

  std::vector<Sample> samples;
  std::vector<Split> splits;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::vector<ClassLabel> labels;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [number, line] = lines[k];
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      fail_at(source, number, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    Sample s;
    s.id = std::string(fields[0]);
    s.label = std::string(fields[1]);
    if (s.id.empty()) fail_at(source, number, "empty id");
    if (s.label.empty()) fail_at(source, number, "empty label");
    if (s.label == kNoneLabel) fail_at(source, number, "label 'none' is reserved");
    if (auto it = seen.find(s.id); it != seen.end()) {
      fail_at(source, number, "duplicate id '" + s.id + "' (first on line " +
                                  std::to_string(it->second) + ")");
    }
    seen.emplace(s.id, number);
    if (has_split) {
      try {
        splits.push_back(parse_split(fields[2]));
      } catch (const DataError&) {
        fail_at(source, number, "unknown split tag '" + std::string(fields[2]) + "'");
      }
    }
    s.features.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const auto cell = fields[first_feature + d];
      if (!parse_double(cell, s.features[d])) {
        fail_at(source, number, "f" + std::to_string(d) + ": '" + std::string(cell) + "' is not a number");
      }
      if (!std::isfinite(s.features[d])) {
        fail_at(source, number, "f" + std::to_string(d) + ": non-finite value");
      }
    }
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) labels.push_back(s.label);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) {
    throw DataError(std::string(source) + ": no samples");
  }

  ClassSet classes(labels);
  if (!has_split) {
    return stratified_split(classes, std::move(samples), seed);
  }
  std::vector<Sample> parts[3];
  for (std::size_t k = 0; k < samples.size(); ++k) {
    parts[static_cast<int>(splits[k])].push_back(std::move(samples[k]));
  }
  return SplitDataset{classes,
                      LabeledFeatureSet(classes, Split::train, std::move(parts[0])),
                      LabeledFeatureSet(classes, Split::validation, std::move(parts[1])),
                      LabeledFeatureSet(classes, Split::test, std::move(parts[2]))};
}

SplitDataset ingest_features(const std::filesystem::path& path, std::uint64_t seed) {
  return parse_features(read_file(path), path.string(), seed);
}

std::string render_features(const SplitDataset& data) {
  std::size_t dim = 0;
  for (auto split : {Split::train, Split::validation, Split::test}) {
    if (!data.get(split).empty()) dim = data.get(split).dim();
  }
  std::string out = "id,label,split";
  for (std::size_t d = 0; d < dim; ++d) out += ",f" + std::to_string(d);
  out += '\n';
  for (auto split : {Split::train, Split::validation, Split::test}) {
    for (const Sample& s : data.get(split).samples()) {
      check_csv_cell(s.id, "sample id");
      check_csv_cell(s.label, "label");
      out += s.id;
      out += ',';
      out += s.label;
      out += ',';
      out += to_string(split);
      for (double v : s.features) {
        out += ',';
        out += format17(v);
      }
      out += '\n';
    }
  }
  return out;
}

void write_features(const std::filesystem::path& path, const SplitDataset& data) {
  write_file(path, render_features(data));
}

std::string render_matrix(const MatrixTable& table) {
  const std::size_t n = table.classes.size();
  std::string out = table.distance ? "distance=true" : "distance=false";
  for (const auto& label : table.classes.labels()) {
    check_csv_cell(label, "label");
    out += ',' + label;
  }
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += table.classes.label(i);
    for (std::size_t j = 0; j < n; ++j) out += ',' + format17(table.values[i * n + j]);
    out += '\n';
  }
  return out;
}

MatrixTable parse_matrix(std::string_view text, std::string_view source) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw DataError(std::string(source) + ": empty matrix file");
  }
  const auto header = split_fields(lines.front().text);
  MatrixTable table;
  if (header[0] == "distance=true") {
    table.distance = true;
  } else if (header[0] != "distance=false") {
    fail_at(source, lines.front().number, "first cell must be distance=false or distance=true");
  }
  std::vector<ClassLabel> order(header.begin() + 1, header.end());
  try {
    table.classes = ClassSet(order);
  } catch (const DataError& e) {
    fail_at(source, lines.front().number, e.what());
  }
  const std::size_t n = order.size();
  if (lines.size() != n + 1) {
    throw DataError(std::string(source) + ": expected " + std::to_string(n) + " matrix rows, found " +
                    std::to_string(lines.size() - 1));
  }
  std::vector<std::size_t> canon(n);
  for (std::size_t k = 0; k < n; ++k) canon[k] = table.classes.index_of(order[k]);
  table.values.assign(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto [number, line] = lines[r + 1];
    const auto fields = split_fields(line);
    if (fields.size() != n + 1) {
      fail_at(source, number, "expected " + std::to_string(n + 1) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    if (fields[0] != order[r]) {
      fail_at(source, number, "row label '" + std::string(fields[0]) + "' does not match column '" +
                                  order[r] + "'");
    }
    for (std::size_t c = 0; c < n; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c + 1], v) || !std::isfinite(v)) {
        fail_at(source, number, "'" + std::string(fields[c + 1]) + "' is not a finite number");
      }
      table.values[canon[r] * n + canon[c]] = v;
    }
  }
  try {
    if (table.distance) {
      pd::DistanceMatrix(table.classes, table.values);
    } else {
      SimilarityMatrix(table.classes, table.values);
    }
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
  return table;
}

namespace {

MatrixTable parse_matrix_json(std::string_view text, std::string_view source) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto labels = doc.at("classes").get<std::vector<std::string>>();
    const auto rows = doc.at("values").get<std::vector<std::vector<double>>>();
    std::string csv = doc.at("distance").get<bool>() ? "distance=true" : "distance=false";
    for (const auto& l : labels) csv += ',' + l;
    csv += '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
      csv += r < labels.size() ? labels[r] : std::string("?");
      for (double v : rows[r]) csv += ',' + format17(v);
      csv += '\n';
    }
    return parse_matrix(csv, source);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string(source) + ": malformed matrix JSON: " + e.what());
  }
}

}  // namespace

MatrixTable read_matrix(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_matrix_json(text, path.string());
  return parse_matrix(text, path.string());
}

MatrixTable to_table(const SimilarityMatrix& matrix) {
  return {false, matrix.classes(), matrix.values()};
}

MatrixTable to_table(const pd::DistanceMatrix& matrix) {
  return {true, matrix.classes(), matrix.values()};
}

SimilarityMatrix to_similarity(const MatrixTable& table) {
  if (table.distance) {
    throw DataError("expected a similarity matrix (distance=false), got a distance matrix");
  }
  return SimilarityMatrix(table.classes, table.values);
}

namespace {

std::vector<std::vector<RankedClass>> ranked_rows(const MatrixTable& table, std::size_t k) {
  std::vector<std::vector<RankedClass>> rows;
  for (const auto& label : table.classes.labels()) {
    rows.push_back(rank_row(table.classes, table.values, label, k,
                            table.distance ? RankOrder::ascending : RankOrder::descending));
  }
  return rows;
}

}  // namespace

std::string render_top_k(const MatrixTable& table, std::size_t k) {
  std::string out = "class";
  for (std::size_t r = 1; r <= k; ++r) out += ",rank" + std::to_string(r);
  out += '\n';
  const auto rows = ranked_rows(table, k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += table.classes.label(i);
    for (const auto& entry : rows[i]) out += ',' + format_ranked(entry);
    out += '\n';
  }
  return out;
}

std::string render_matrix_json(const MatrixTable& table) {
  const std::size_t n = table.classes.size();
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back(std::vector<double>(table.values.begin() + static_cast<std::ptrdiff_t>(i * n),
                                         table.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  }
  nlohmann::json doc{{"distance", table.distance}, {"classes", table.classes.labels()}, {"values", values}};
  return doc.dump(2) + "\n";
}

std::string render_top_k_json(const MatrixTable& table, std::size_t k) {
  nlohmann::json rows = nlohmann::json::object();
  const auto ranked = ranked_rows(table, k);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& entry : ranked[i]) {
      row.push_back({{"class", entry.label}, {"score", entry.score}, {"display", format_ranked(entry)}});
    }
    rows[table.classes.label(i)] = row;
  }
  nlohmann::json doc{{"distance", table.distance}, {"k", k}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

}  // namespace classim::cli
