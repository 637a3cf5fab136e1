#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irony/tokenize.hpp"

namespace irony {

class BinaryWriter;
class BinaryReader;

struct Bigram {
  std::uint32_t left;
  std::uint32_t right;
  std::uint64_t count;
};

// Unigram and adjacent-pair counts over the thresholded vocabulary. Pairs never
// span two tweets, and a pair touching a dropped word is dropped with it.
struct BigramStats {
  std::vector<std::string> words;     // descending frequency, then lexicographic
  std::vector<std::uint64_t> counts;  // parallel to words
  std::vector<Bigram> bigrams;        // sorted by (left, right)
  std::uint64_t total_tokens = 0;
  std::uint64_t total_bigrams = 0;

  std::optional<std::uint32_t> index(std::string_view word) const;
  std::uint64_t bigram_count(std::uint32_t left, std::uint32_t right) const;

  std::unordered_map<std::string, std::uint32_t> word_index;
};

BigramStats collect_bigram_stats(std::span<const std::vector<std::string>> sentences, int min_count = 1);
BigramStats collect_bigram_stats(std::span<const TokenizedTweet> corpus, int min_count = 1);

// Average mutual information of the cluster bigram distribution:
//   sum_{c,c'} p(c,c') ln(p(c,c') / (p_l(c) p_r(c'))),
// with p_l, p_r the left/right marginals and empty cells contributing 0.
// `assignment[w]` is the cluster of stats.words[w].
double average_mutual_information(std::span<const int> assignment, const BigramStats& stats);

struct MergeRecord {
  std::uint32_t inserted_word;  // word whose insertion triggered the merge
  int left;                     // cluster positions before the merge, left < right
  int right;
  double loss;
};

struct BrownClustering {
  int num_clusters = 0;              // requested C; feature width
  std::vector<std::string> words;    // vocabulary in frequency order
  std::vector<int> cluster_of;       // parallel to words, ids in [0, min(C, |words|))
  std::vector<std::uint64_t> frequency;
  double ami = 0.0;                  // tracked incrementally during training
  std::vector<MergeRecord> merges;

  std::optional<int> cluster(std::string_view word) const;
  void rebuild_index();
  void write_tsv(std::ostream& out) const;  // word \t cluster-id \t frequency

  void save(BinaryWriter& w) const;
  static BrownClustering load(BinaryReader& r);

 private:
  std::unordered_map<std::string, int> index_;
};

// Greedy agglomerative clustering with a window of C clusters. The C most
// frequent words start as singletons; each further word (in frequency order)
// joins as a new cluster and the pair whose merge loses the least AMI is
// merged. Clusters are kept in insertion order; a merge of positions i < j
// keeps the result at i and closes the gap at j. Loss ties (within 1e-12) go
// to the lexicographically smallest (i, j).
BrownClustering train_brown(const BigramStats& stats, int num_clusters);

inline constexpr double kBrownTieEpsilon = 1e-12;

// Per clustering, a C-wide token count per cluster id; blocks concatenated in
// the order given. Unknown words contribute nothing.
std::vector<double> cluster_count_block(const TokenizedTweet& tweet,
                                        std::span<const BrownClustering> clusterings);

}  // namespace irony
