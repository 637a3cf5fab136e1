#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irony/pos_tagger.hpp"
#include "irony/tokenize.hpp"

namespace irony {

class BinaryWriter;
class BinaryReader;

enum class NgramLevel { Word, Char };

// Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
double smoothed_idf(std::size_t num_docs, std::size_t doc_freq);

// Every 1..max_n gram occurrence of the tweet at `level`. Word grams join
// tokens with a single space; char grams run over the normalized text
// (spaces included), in code points.
std::vector<std::string> extract_ngrams(const TokenizedTweet& tweet, NgramLevel level, int max_n = 3);

struct NgramEntry {
  std::string gram;
  double idf = 0.0;
};

class NgramVocabulary {
 public:
  NgramVocabulary() = default;
  NgramVocabulary(NgramLevel level, int max_n, std::size_t top_k, std::vector<NgramEntry> entries);

  NgramLevel level() const { return level_; }
  int max_n() const { return max_n_; }
  std::size_t top_k() const { return top_k_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<NgramEntry>& entries() const { return entries_; }
  std::optional<std::size_t> column(std::string_view gram) const;

  void save(BinaryWriter& w) const;
  static NgramVocabulary load(BinaryReader& r);

 private:
  NgramLevel level_ = NgramLevel::Word;
  int max_n_ = 3;
  std::size_t top_k_ = 0;
  std::vector<NgramEntry> entries_;  // column order
  std::unordered_map<std::string, std::size_t> index_;
};

// Pools 1..3-grams at one level and keeps the `top_k` grams with the largest
// summed tf-idf over the corpus; ties go to the lexicographically smaller gram.
NgramVocabulary fit_ngram_vocab(std::span<const TokenizedTweet> corpus, NgramLevel level, int top_k,
                                int max_n = 3);

// tf * idf per vocabulary column, L2-normalized; out-of-vocabulary grams ignored.
std::vector<double> vectorize_ngrams(const TokenizedTweet& tweet, const NgramVocabulary& vocab);

// [characters, words] of the normalized tweet.
std::array<double, 2> surface_counts(const TokenizedTweet& tweet);

class PosVocabulary {
 public:
  PosVocabulary() { idf_.fill(1.0); }
  explicit PosVocabulary(std::array<double, kNumPosTags> idf) : idf_(idf) {}

  const std::array<double, kNumPosTags>& idf() const { return idf_; }

  void save(BinaryWriter& w) const;
  static PosVocabulary load(BinaryReader& r);

 private:
  std::array<double, kNumPosTags> idf_;
};

// Tags never seen in training get df = 0, i.e. idf = ln(1 + N) + 1.
PosVocabulary fit_pos_vocab(std::span<const TokenizedTweet> corpus);
std::vector<double> vectorize_pos(const TokenizedTweet& tweet, const PosVocabulary& vocab);

}  // namespace irony
