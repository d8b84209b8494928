#include "classim/cli/manifest.hpp"

#include <cstdio>

#include <openssl/evp.h>

#include "classim/cli/formats.hpp"
#include "classim/core/errors.hpp"

#ifndef CLASSIM_VERSION
#define CLASSIM_VERSION "unknown"
#endif

namespace classim::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw DataError("SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

RunManifest::RunManifest(std::string command, std::vector<std::string> arguments)
    : command_(std::move(command)), arguments_(std::move(arguments)) {}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_[role] = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void RunManifest::write(const std::filesystem::path& dir, double wall_seconds) const {
  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& name : outputs_) outputs[name] = sha256_file(dir / name);
  nlohmann::json doc{{"tool", "classim"},
                     {"version", CLASSIM_VERSION},
                     {"command", command_},
                     {"arguments", arguments_},
                     {"inputs", inputs_},
                     {"seed", seed_},
                     {"config", config_},
                     {"outputs", outputs},
                     {"wall_time_seconds", wall_seconds}};
  write_file(dir / kManifestName, doc.dump(2) + "\n");
}

OutputLock::OutputLock(const std::filesystem::path& dir) : path_(dir / ".lock") {
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    throw DataError("output directory " + dir.string() + " is locked by another run (" +
                    path_.string() + " exists)");
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

}  // namespace classim::cli
