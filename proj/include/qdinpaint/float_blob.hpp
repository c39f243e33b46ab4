#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace qdi {

// A one-line JSON header followed by raw little-endian float32 values.
// Shared by descriptor tables, feature stacks and class-probability files.
struct FloatBlob {
  nlohmann::json header;
  std::vector<float> values;
};

FloatBlob read_float_blob(const std::filesystem::path& path);
void write_float_blob(const std::filesystem::path& path, const nlohmann::json& header, std::span<const float> values);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j, int indent = 2);

}  // namespace qdi
