#pragma once

#include <filesystem>
#include <string>

#include "aloha/model.hpp"

namespace aloha {

// Parses a config from JSON text. Schema:
//   { "alpha": float,
//     "classes": [ { "lambda": float, "power": float,
//                    "mean_link_distance": float, "sir_threshold": float,
//                    "arrival_rate": float, "access_prob": float }, ... ] }
// All fields are required, unknown fields are rejected, and field ranges are
// validated. Throws ValidationError with a diagnostic naming the offending
// field.
NetworkConfig config_from_json(const std::string& text);

// config_from_json applied to the contents of a file.
NetworkConfig load_config(const std::filesystem::path& file);

// Serializes a config back to the same JSON schema (2-space indented).
std::string config_to_json(const NetworkConfig& config);

}  // namespace aloha
