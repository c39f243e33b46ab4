#include "qdinpaint/descriptor_io.hpp"

#include "qdinpaint/error.hpp"

namespace qdi {

namespace {

std::size_t header_size(const nlohmann::json& h, const char* key) {
  const auto it = h.find(key);
  if (it == h.end() || !it->is_number_unsigned()) {
    throw Error(ErrorCode::Io, std::string("header field `") + key + "` missing or not a non-negative integer");
  }
  return it->get<std::size_t>();
}

}  // namespace

DescriptorTable read_descriptor_table(const std::filesystem::path& table, const std::filesystem::path& ids_path) {
  FloatBlob blob = read_float_blob(table);
  const std::size_t count = header_size(blob.header, "count");
  const std::size_t dim = header_size(blob.header, "dim");
  if (blob.values.size() != count * dim) {
    throw Error(ErrorCode::Io, table.string() + ": expected " + std::to_string(count * dim) + " floats, found " +
                                   std::to_string(blob.values.size()));
  }
  const nlohmann::json ids = read_json_file(ids_path);
  if (!ids.is_array() || ids.size() != count) {
    throw Error(ErrorCode::Io, ids_path.string() + ": expected a JSON array of " + std::to_string(count) + " ids");
  }
  DescriptorTable t;
  t.dim = dim;
  t.values = std::move(blob.values);
  for (const auto& id : ids) {
    if (!id.is_string()) throw Error(ErrorCode::Io, ids_path.string() + ": ids must be strings");
    t.ids.push_back(id.get<std::string>());
  }
  return t;
}

void write_descriptor_table(const std::filesystem::path& table, const std::filesystem::path& ids_path,
                            const DescriptorTable& t) {
  if (t.dim == 0 ? !t.values.empty() : t.values.size() != t.ids.size() * t.dim) {
    throw Error(ErrorCode::DimensionMismatch, "descriptor table size does not match ids x dim");
  }
  write_float_blob(table, {{"count", t.ids.size()}, {"dim", t.dim}}, t.values);
  write_json_file(ids_path, t.ids, -1);
}

std::size_t header_field(const nlohmann::json& header, const char* key) { return header_size(header, key); }

}  // namespace qdi
