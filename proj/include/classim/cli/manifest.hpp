#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace classim::cli {

inline constexpr const char* kManifestName = "manifest.json";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Provenance record written once per output directory: command, arguments,
/// input and output digests, seed, configuration, tool version and wall time.
class RunManifest {
public:
  RunManifest(std::string command, std::vector<std::string> arguments);

  void add_input(const std::string& role, const std::filesystem::path& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_config(nlohmann::json config) { config_ = std::move(config); }
  /// `name` is relative to the output directory.
  void add_output(const std::string& name) { outputs_.push_back(name); }

  /// Hashes the outputs and writes manifest.json into `dir`.
  void write(const std::filesystem::path& dir, double wall_seconds) const;

private:
  std::string command_;
  std::vector<std::string> arguments_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::uint64_t seed_ = 0;
  nlohmann::json config_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
};

/// Exclusive claim on an output directory via DIR/.lock, released on destruction.
class OutputLock {
public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

private:
  std::filesystem::path path_;
};

}  // namespace classim::cli
