#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace irony {

class BinaryWriter;
class BinaryReader;

inline constexpr std::size_t kNumPosTags = 45;

// Penn Treebank word tags plus punctuation tags, sorted by byte value. The
// order fixes the column layout of the syntactic feature block.
inline constexpr std::array<std::string_view, kNumPosTags> kPosTagset = {
    "#",   "$",   "''",  ",",    "-LRB-", "-RRB-", ".",   ":",   "CC",  "CD",  "DT",  "EX",
    "FW",  "IN",  "JJ",  "JJR",  "JJS",   "LS",    "MD",  "NN",  "NNP", "NNPS", "NNS", "PDT",
    "POS", "PRP", "PRP$", "RB",  "RBR",   "RBS",   "RP",  "SYM", "TO",  "UH",  "VB",  "VBD",
    "VBG", "VBN", "VBP", "VBZ",  "WDT",   "WP",    "WP$", "WRB", "``"};

std::optional<std::size_t> pos_tag_index(std::string_view tag);

// Greedy averaged-perceptron tagger. Features: bias, word suffix(3) and first
// character, previous one and two tags, current/surrounding words and their
// suffixes. Frequent unambiguous words are tagged from a lookup table.
//
// Weights file (text, tab-separated):
//   format  1
//   tagset  <45 space-separated tags>
//   tagdict <word> <tag>
//   feat    <feature string> <TAG=weight TAG=weight ...>
// Lines starting with '#' are comments.
class PosTagger {
 public:
  static PosTagger load(const std::filesystem::path& path);
  static PosTagger parse(std::istream& in, const std::string& source);

  std::vector<std::string> tag(std::span<const std::string> tokens) const;

  std::size_t num_features() const { return feature_index_.size(); }

  void save(BinaryWriter& w) const;
  static PosTagger load(BinaryReader& r);

 private:
  struct Weight {
    std::uint8_t tag;
    double value;
  };

  void add_feature(std::string name, std::vector<Weight> weights);
  void score(std::string_view feature, std::array<double, kNumPosTags>& scores) const;

  std::unordered_map<std::string, std::uint8_t> tagdict_;
  std::unordered_map<std::string, std::pair<std::uint32_t, std::uint32_t>> feature_index_;
  std::vector<std::string> feature_names_;  // insertion order, for serialization
  std::vector<Weight> weights_;
};

using SidecarTags = std::map<std::int64_t, std::vector<std::string>>;

// TSV "id \t TAG TAG ..."; every tag must belong to the tagset.
SidecarTags read_sidecar_tags(const std::filesystem::path& path);

// Throws a validation error listing ids absent from the sidecar.
void check_sidecar_coverage(const SidecarTags& sidecar, std::span<const std::int64_t> ids);

}  // namespace irony
