#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qdinpaint/float_blob.hpp"

namespace qdi {

// `{"count":N,"dim":D}` + N*D float32 rows, with a sidecar JSON array of ids.
struct DescriptorTable {
  std::vector<std::string> ids;
  std::size_t dim = 0;
  std::vector<float> values;  // row-major, ids.size() x dim
};

DescriptorTable read_descriptor_table(const std::filesystem::path& table, const std::filesystem::path& ids);
void write_descriptor_table(const std::filesystem::path& table, const std::filesystem::path& ids,
                            const DescriptorTable& t);

// Non-negative integer header field; throws Io when absent.
std::size_t header_field(const nlohmann::json& header, const char* key);

}  // namespace qdi
