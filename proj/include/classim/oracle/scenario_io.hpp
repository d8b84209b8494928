#pragma once

#include <filesystem>
#include <string_view>

#include "classim/oracle/scenario.hpp"

namespace classim::oracle {

/// Parses a scenario document (see docs/scenario-format.md). `source` names the
/// document in error messages. Throws DataError on syntax or schema errors.
Scenario parse_scenario(std::string_view text, std::string_view source = "scenario");

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace classim::oracle
