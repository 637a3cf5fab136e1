#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace irony {

class BinaryWriter;
class BinaryReader;

using WordSet = std::set<std::string, std::less<>>;
using StringMap = std::map<std::string, std::string, std::less<>>;

// Word -> dense vector. All rows share one dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 300) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Returns false (and keeps the first vector) when `word` already exists.
  bool add(std::string word, std::span<const double> vec);
  std::optional<std::span<const double>> find(std::string_view word) const;

  void save(BinaryWriter& w) const;
  static EmbeddingTable load(BinaryReader& r);

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingTable load_embedding_table(const std::filesystem::path& path, std::size_t expected_dim);

// One entry per line; ';' comment lines and blanks skipped; case-folded.
WordSet load_lexicon(const std::filesystem::path& path, std::string_view resource_name = "lexicon");

// Two-column TSV variant -> canonical, case-folded.
StringMap load_normalization_dict(const std::filesystem::path& path);

// Two-column TSV "U+1F602 [U+FE0F ...]\tname". Keys are the UTF-8 encoded
// code point sequence.
StringMap load_emoji_map(const std::filesystem::path& path);

enum class Polarity { Positive, Negative };
std::map<std::string, Polarity, std::less<>> load_emoji_polarity(const std::filesystem::path& path);

WordSet default_negation_words();

struct ResourceBundle {
  EmbeddingTable embeddings{300};
  WordSet positive;
  WordSet negative;
  StringMap normalization;
  StringMap emoji_map;
  std::map<std::string, Polarity, std::less<>> emoji_polarity;
  WordSet negation = default_negation_words();

  void save(BinaryWriter& w) const;
  static ResourceBundle load(BinaryReader& r);
};

// Paths to the on-disk resources. Empty paths leave the member empty; an
// empty embeddings path yields an empty table of `embedding_dim`.
struct ResourcePaths {
  std::filesystem::path embeddings;
  std::size_t embedding_dim = 300;
  std::filesystem::path positive_lexicon;
  std::filesystem::path negative_lexicon;
  std::filesystem::path normalization_dict;
  std::filesystem::path emoji_map;
  std::filesystem::path emoji_polarity;
  std::filesystem::path negation_words;

  // The shipped files under `data_dir` (no embeddings).
  static ResourcePaths defaults(const std::filesystem::path& data_dir);
};

ResourceBundle load_resources(const ResourcePaths& paths);

std::string to_lower_ascii(std::string_view s);

}  // namespace irony
