#include "irony/binary_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "irony/error.hpp"

namespace irony {

void BinaryWriter::section(std::string_view tag, const BinaryWriter& body) {
  buf_.append(tag.substr(0, 4));
  u64(body.bytes().size());
  buf_.append(body.bytes());
}

std::string_view BinaryReader::take(std::size_t n) {
  if (n > data_.size() - pos_) {
    throw Error(ErrorKind::Integrity, "model data truncated at byte " + std::to_string(pos_));
  }
  auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint64_t BinaryReader::get_le(int n) {
  const auto bytes = take(static_cast<std::size_t>(n));
  std::uint64_t v = 0;
  for (int i = n - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[i]);
  return v;
}

std::uint64_t BinaryReader::count(std::uint64_t min_bytes_each) {
  const std::uint64_t n = u64();
  const std::uint64_t remaining = data_.size() - pos_;
  if (min_bytes_each > 0 && n > remaining / min_bytes_each) {
    throw Error(ErrorKind::Integrity, "corrupt length prefix " + std::to_string(n));
  }
  return n;
}

std::string BinaryReader::str() {
  const auto n = count(1);
  return std::string(take(n));
}

std::vector<double> BinaryReader::f64s() {
  const auto n = count(8);
  std::vector<double> out(n);
  for (auto& v : out) v = f64();
  return out;
}

std::vector<std::string> BinaryReader::strs() {
  const auto n = count(8);
  std::vector<std::string> out(n);
  for (auto& s : out) s = str();
  return out;
}

BinaryReader BinaryReader::section(std::string_view expected_tag) {
  const auto tag = take(4);
  if (tag != expected_tag.substr(0, 4)) {
    throw Error(ErrorKind::Integrity, "expected section '" + std::string(expected_tag) +
                                          "', found '" + std::string(tag) + "'");
  }
  const auto n = count(1);
  return BinaryReader(take(n));
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_container(const std::filesystem::path& path, std::uint32_t version,
                     const std::string& payload) {
  BinaryWriter header;
  header.u32(version);
  header.u64(payload.size());
  BinaryWriter trailer;
  trailer.u64(fnv1a64(payload));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(kContainerMagic.data(), static_cast<std::streamsize>(kContainerMagic.size()));
  out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  out.write(trailer.bytes().data(), static_cast<std::streamsize>(trailer.bytes().size()));
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::string read_container(const std::filesystem::path& path, std::uint32_t expected_version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open model file '" + path.string() + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < kContainerMagic.size() + 12 + 8) {
    throw Error(ErrorKind::Integrity, "model file '" + path.string() + "' is truncated or empty");
  }
  if (std::string_view(data).substr(0, kContainerMagic.size()) != kContainerMagic) {
    throw Error(ErrorKind::Integrity, "'" + path.string() + "' is not a model file");
  }
  BinaryReader header(std::string_view(data).substr(kContainerMagic.size(), 12));
  const std::uint32_t version = header.u32();
  const std::uint64_t length = header.u64();
  if (version != expected_version) {
    throw Error(ErrorKind::Integrity, "model format version " + std::to_string(version) +
                                          " not supported (expected " +
                                          std::to_string(expected_version) + ")");
  }
  const std::size_t start = kContainerMagic.size() + 12;
  if (length != data.size() - start - 8) {
    throw Error(ErrorKind::Integrity, "model file '" + path.string() + "' is truncated");
  }
  std::string payload = data.substr(start, length);
  BinaryReader trailer(std::string_view(data).substr(start + length));
  if (trailer.u64() != fnv1a64(payload)) {
    throw Error(ErrorKind::Integrity, "model file '" + path.string() + "' checksum mismatch");
  }
  return payload;
}

}  // namespace irony
