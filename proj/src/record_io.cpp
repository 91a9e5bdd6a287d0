#include "hpwe/record_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace hpwe {
namespace le {

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw IoError("unexpected end of file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw IoError("unexpected end of file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace le

void write_records(const std::filesystem::path& path, const std::vector<Record>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write("PSRT", 4);
  le::put_u32(out, kRecordFileVersion);
  le::put_u64(out, records.size());
  for (const auto& r : records) {
    le::put_u64(out, r.key);
    le::put_u64(out, r.payload);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Record> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PSRT", 4) != 0) {
    throw IoError(path.string() + ": not a record file");
  }
  const std::uint32_t version = le::get_u32(in);
  if (version != kRecordFileVersion) throw IoError(path.string() + ": unsupported version");
  const std::uint64_t n = le::get_u64(in);
  const auto size = std::filesystem::file_size(path);
  if (size < 16 || (size - 16) / 16 < n) throw IoError(path.string() + ": truncated record file");
  std::vector<Record> records(n);
  for (auto& r : records) {
    r.key = le::get_u64(in);
    r.payload = le::get_u64(in);
  }
  return records;
}

}  // namespace hpwe
