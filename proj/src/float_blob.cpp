#include "qdinpaint/float_blob.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "qdinpaint/error.hpp"

namespace qdi {

namespace {

std::uint32_t byteswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
}

float from_le(const unsigned char* p) {
  std::uint32_t bits;
  std::memcpy(&bits, p, 4);
  if constexpr (std::endian::native == std::endian::big) bits = byteswap32(bits);
  return std::bit_cast<float>(bits);
}

void to_le(float v, unsigned char* p) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = byteswap32(bits);
  std::memcpy(p, &bits, 4);
}

}  // namespace

FloatBlob read_float_blob(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, path.string() + ": missing header line");
  FloatBlob blob;
  try {
    blob.header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Io, path.string() + ": bad header: " + e.what());
  }
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() % 4 != 0) throw Error(ErrorCode::Io, path.string() + ": payload is not a whole number of floats");
  blob.values.resize(bytes.size() / 4);
  for (std::size_t i = 0; i < blob.values.size(); ++i) blob.values[i] = from_le(bytes.data() + 4 * i);
  return blob;
}

void write_float_blob(const std::filesystem::path& path, const nlohmann::json& header, std::span<const float> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << header.dump() << '\n';
  std::vector<unsigned char> bytes(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) to_le(values[i], bytes.data() + 4 * i);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Io, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j, int indent) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(indent) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace qdi
