#pragma once

// Binary record files: little-endian header {"PSRT", version u32, n u64}
// followed by n pairs {key u64, payload u64}.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "hpwe/primitives.hpp"

namespace hpwe {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kRecordFileVersion = 1;

void write_records(const std::filesystem::path& path, const std::vector<Record>& records);
std::vector<Record> read_records(const std::filesystem::path& path);

namespace le {

void put_u32(std::ostream& out, std::uint32_t v);
void put_u64(std::ostream& out, std::uint64_t v);
std::uint32_t get_u32(std::istream& in);
std::uint64_t get_u64(std::istream& in);

}  // namespace le

}  // namespace hpwe
