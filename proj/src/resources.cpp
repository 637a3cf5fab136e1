#include "irony/resources.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/utf8.hpp"

namespace irony {

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::ifstream open_resource(const std::filesystem::path& path, std::string_view name) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Resource,
                "missing " + std::string(name) + " file: '" + path.string() + "'");
  }
  return in;
}

// Calls fn(line_no, key, value) for every non-blank, non-comment TSV row.
template <typename Fn>
void for_each_pair(const std::filesystem::path& path, std::string_view name, Fn&& fn) {
  auto in = open_resource(path, name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty() || row.front() == ';' || row.front() == '#') continue;
    const auto tab = row.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": " +
                                        std::string(name) + " row needs two tab-separated columns");
    }
    fn(line_no, trim(row.substr(0, tab)), trim(row.substr(tab + 1)));
  }
}

std::string parse_code_points(std::string_view spec, const std::string& where) {
  std::string out;
  std::size_t i = 0;
  while (i < spec.size()) {
    while (i < spec.size() && (spec[i] == ' ' || spec[i] == '-' || spec[i] == ',')) ++i;
    if (i >= spec.size()) break;
    if (spec.substr(i, 2) == "U+" || spec.substr(i, 2) == "u+") i += 2;
    std::size_t j = i;
    while (j < spec.size() && std::isxdigit(static_cast<unsigned char>(spec[j]))) ++j;
    std::uint32_t cp = 0;
    auto [ptr, ec] = std::from_chars(spec.data() + i, spec.data() + j, cp, 16);
    if (j == i || ec != std::errc() || cp > 0x10FFFF) {
      throw Error(ErrorKind::Parse, where + ": bad code point sequence '" + std::string(spec) + "'");
    }
    utf8::append(out, static_cast<char32_t>(cp));
    i = j;
  }
  if (out.empty()) throw Error(ErrorKind::Parse, where + ": empty code point sequence");
  return out;
}

void save_set(BinaryWriter& w, const WordSet& set) {
  w.u64(set.size());
  for (const auto& s : set) w.str(s);
}

WordSet load_set(BinaryReader& r) {
  WordSet out;
  const auto n = r.count(8);
  for (std::uint64_t i = 0; i < n; ++i) out.insert(r.str());
  return out;
}

void save_map(BinaryWriter& w, const StringMap& map) {
  w.u64(map.size());
  for (const auto& [k, v] : map) {
    w.str(k);
    w.str(v);
  }
}

StringMap load_map(BinaryReader& r) {
  StringMap out;
  const auto n = r.count(16);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto k = r.str();
    out.emplace(std::move(k), r.str());
  }
  return out;
}

}  // namespace

bool EmbeddingTable::add(std::string word, std::span<const double> vec) {
  if (vec.size() != dim_) {
    throw Error(ErrorKind::Validation, "embedding for '" + word + "' has dimension " +
                                           std::to_string(vec.size()) + ", expected " +
                                           std::to_string(dim_));
  }
  if (index_.count(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vec.begin(), vec.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

void EmbeddingTable::save(BinaryWriter& w) const {
  w.u64(dim_);
  w.strs(words_);
  w.f64s(data_);
}

EmbeddingTable EmbeddingTable::load(BinaryReader& r) {
  EmbeddingTable table(r.u64());
  auto words = r.strs();
  auto data = r.f64s();
  if (data.size() != words.size() * table.dim_) {
    throw Error(ErrorKind::Integrity, "embedding table size mismatch");
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    table.add(std::move(words[i]), std::span<const double>(data.data() + i * table.dim_, table.dim_));
  }
  return table;
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path, std::size_t expected_dim) {
  auto in = open_resource(path, "embeddings");
  EmbeddingTable table(expected_dim);
  std::vector<double> vec;
  vec.reserve(expected_dim);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto sp = row.find(' ');
    if (sp == std::string_view::npos) {
      throw Error(ErrorKind::Parse, where + ": token without vector");
    }
    std::string word(row.substr(0, sp));
    row.remove_prefix(sp + 1);
    vec.clear();
    while (!row.empty()) {
      while (!row.empty() && row.front() == ' ') row.remove_prefix(1);
      if (row.empty()) break;
      auto end = row.find(' ');
      if (end == std::string_view::npos) end = row.size();
      double v = 0;
      auto [ptr, ec] = std::from_chars(row.data(), row.data() + end, v);
      if (ec != std::errc() || ptr != row.data() + end) {
        throw Error(ErrorKind::Parse, where + ": unparsable real '" + std::string(row.substr(0, end)) + "'");
      }
      vec.push_back(v);
      row.remove_prefix(end);
    }
    if (vec.size() != expected_dim) {
      throw Error(ErrorKind::Parse, where + ": dimension " + std::to_string(vec.size()) +
                                        " does not match expected " + std::to_string(expected_dim));
    }
    table.add(std::move(word), vec);
  }
  return table;
}

WordSet load_lexicon(const std::filesystem::path& path, std::string_view resource_name) {
  auto in = open_resource(path, resource_name);
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const auto row = trim(line);
    if (row.empty() || row.front() == ';') continue;
    words.insert(to_lower_ascii(row));
  }
  return words;
}

StringMap load_normalization_dict(const std::filesystem::path& path) {
  StringMap dict;
  for_each_pair(path, "normalization dictionary",
                [&](std::size_t, std::string_view k, std::string_view v) {
                  dict.emplace(to_lower_ascii(k), to_lower_ascii(v));
                });
  return dict;
}

StringMap load_emoji_map(const std::filesystem::path& path) {
  StringMap map;
  for_each_pair(path, "emoji map", [&](std::size_t line_no, std::string_view k, std::string_view v) {
    map.emplace(parse_code_points(k, path.string() + ":" + std::to_string(line_no)),
                to_lower_ascii(v));
  });
  return map;
}

std::map<std::string, Polarity, std::less<>> load_emoji_polarity(const std::filesystem::path& path) {
  std::map<std::string, Polarity, std::less<>> out;
  for_each_pair(path, "emoji polarity", [&](std::size_t line_no, std::string_view k, std::string_view v) {
    const auto label = to_lower_ascii(v);
    if (label != "pos" && label != "neg") {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                        ": polarity must be 'pos' or 'neg'");
    }
    out.emplace(to_lower_ascii(k), label == "pos" ? Polarity::Positive : Polarity::Negative);
  });
  return out;
}

WordSet default_negation_words() {
  return {"not", "n't", "no", "never", "neither", "nor", "nobody", "nothing", "nowhere", "cannot"};
}

void ResourceBundle::save(BinaryWriter& w) const {
  embeddings.save(w);
  save_set(w, positive);
  save_set(w, negative);
  save_map(w, normalization);
  save_map(w, emoji_map);
  w.u64(emoji_polarity.size());
  for (const auto& [name, pol] : emoji_polarity) {
    w.str(name);
    w.u8(pol == Polarity::Positive ? 1 : 0);
  }
  save_set(w, negation);
}

ResourceBundle ResourceBundle::load(BinaryReader& r) {
  ResourceBundle b;
  b.embeddings = EmbeddingTable::load(r);
  b.positive = load_set(r);
  b.negative = load_set(r);
  b.normalization = load_map(r);
  b.emoji_map = load_map(r);
  const auto n = r.count(9);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto name = r.str();
    b.emoji_polarity.emplace(std::move(name), r.u8() ? Polarity::Positive : Polarity::Negative);
  }
  b.negation = load_set(r);
  return b;
}

ResourcePaths ResourcePaths::defaults(const std::filesystem::path& data_dir) {
  ResourcePaths p;
  p.positive_lexicon = data_dir / "lexicon" / "positive-words.txt";
  p.negative_lexicon = data_dir / "lexicon" / "negative-words.txt";
  p.normalization_dict = data_dir / "normalization.tsv";
  p.emoji_map = data_dir / "emoji_map.tsv";
  p.emoji_polarity = data_dir / "emoji_polarity.tsv";
  p.negation_words = data_dir / "negation.txt";
  return p;
}

ResourceBundle load_resources(const ResourcePaths& paths) {
  ResourceBundle b;
  b.embeddings = paths.embeddings.empty() ? EmbeddingTable(paths.embedding_dim)
                                          : load_embedding_table(paths.embeddings, paths.embedding_dim);
  if (!paths.positive_lexicon.empty()) b.positive = load_lexicon(paths.positive_lexicon, "positive lexicon");
  if (!paths.negative_lexicon.empty()) b.negative = load_lexicon(paths.negative_lexicon, "negative lexicon");
  if (!paths.normalization_dict.empty()) b.normalization = load_normalization_dict(paths.normalization_dict);
  if (!paths.emoji_map.empty()) b.emoji_map = load_emoji_map(paths.emoji_map);
  if (!paths.emoji_polarity.empty()) b.emoji_polarity = load_emoji_polarity(paths.emoji_polarity);
  if (!paths.negation_words.empty()) b.negation = load_lexicon(paths.negation_words, "negation list");
  return b;
}

}  // namespace irony
