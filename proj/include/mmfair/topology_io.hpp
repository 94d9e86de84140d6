#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mmfair/model.hpp"

namespace mmfair {

/// Raised for unreadable, malformed or invalid input files.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

McsTable load_mcs_table(const std::filesystem::path& file);
McsTable parse_mcs_table(const nlohmann::json& doc);

/// Parses a topology document. Relative `mcs_table` paths resolve against
/// `base_dir`. Unknown fields are rejected. When `validate` is set, any
/// violation reported by validate_topology() becomes a LoadError.
Topology parse_topology(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                        bool validate = true);
Topology load_topology(const std::filesystem::path& file, bool validate = true);

nlohmann::json topology_to_json(const Topology& topology);

/// Reads a JSON file, turning parse failures into LoadError with the
/// line/column of the offending byte.
nlohmann::json read_json_file(const std::filesystem::path& file);

}  // namespace mmfair
