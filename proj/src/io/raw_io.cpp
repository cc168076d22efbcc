#include "scloss/io/raw_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "scloss/error.hpp"

namespace scloss::io {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'F', '1'};
constexpr std::size_t kHeader = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + b])) << (8 * b);
  return v;
}

}  // namespace

std::string encode_scf(const FieldMap& field) {
  std::string out(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(field.dims().height));
  put_u32(out, static_cast<std::uint32_t>(field.dims().width));
  put_u32(out, 0);
  out.reserve(kHeader + 8 * field.size());
  for (const double v : field.values()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
  return out;
}

FieldMap decode_scf(const std::string& bytes) {
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorKind::io, "not an SCF1 file");
  const std::uint32_t h = get_u32(bytes, 4);
  const std::uint32_t w = get_u32(bytes, 8);
  if (get_u32(bytes, 12) != 0) fail(ErrorKind::io, "SCF1 pad bytes must be zero");
  if (h == 0 || w == 0 || h > (1u << 20) || w > (1u << 20)) fail(ErrorKind::io, "SCF1 dimensions out of range");
  const GridDims dims(static_cast<int>(h), static_cast<int>(w));
  if (bytes.size() != kHeader + 8 * dims.size()) {
    fail(ErrorKind::io, "SCF1 payload is " + std::to_string(bytes.size() - kHeader) + " bytes, expected " +
                            std::to_string(8 * dims.size()));
  }
  std::vector<double> values(dims.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[kHeader + 8 * i + b])) << (8 * b);
    }
    values[i] = std::bit_cast<double>(bits);
  }
  return FieldMap(dims, std::move(values));
}

void write_scf(const std::filesystem::path& path, const FieldMap& field) {
  const std::string bytes = encode_scf(field);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, path.string() + ": cannot open for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorKind::io, path.string() + ": write failed");
}

FieldMap read_scf(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::io, path.string() + ": cannot open for reading");
  const std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  try {
    return decode_scf(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

bool is_scf(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  char head[4] = {};
  f.read(head, 4);
  return f.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0;
}

}  // namespace scloss::io
