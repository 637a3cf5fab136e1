#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irony {

// Little-endian writer for the model container. Reals are stored as their
// IEEE-754 bit patterns so a save/load round trip is lossless.
class BinaryWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v), 8); }
  void str(std::string_view s) {
    u64(s.size());
    buf_.append(s);
  }
  void f64s(std::span<const double> values) {
    u64(values.size());
    for (double v : values) f64(v);
  }
  void strs(std::span<const std::string> values) {
    u64(values.size());
    for (const auto& s : values) str(s);
  }
  // Length-prefixed nested section with a 4-character tag.
  void section(std::string_view tag, const BinaryWriter& body);

  const std::string& bytes() const { return buf_; }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string buf_;
};

// Every read is bounds-checked; running off the end raises an integrity error.
class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get_le(8)); }
  double f64() { return std::bit_cast<double>(get_le(8)); }
  std::string str();
  std::vector<double> f64s();
  std::vector<std::string> strs();
  BinaryReader section(std::string_view expected_tag);

  bool at_end() const { return pos_ == data_.size(); }
  // Guards length prefixes against absurd allocations from corrupt input.
  std::uint64_t count(std::uint64_t min_bytes_each);

 private:
  std::string_view take(std::size_t n);
  std::uint64_t get_le(int n);

  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint64_t fnv1a64(std::string_view data);

// Container: magic, format version, payload length, payload, FNV-1a checksum.
inline constexpr std::string_view kContainerMagic = "IRONYMDL";

void write_container(const std::filesystem::path& path, std::uint32_t version,
                     const std::string& payload);
std::string read_container(const std::filesystem::path& path, std::uint32_t expected_version);

}  // namespace irony
