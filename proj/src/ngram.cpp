#include "irony/ngram.hpp"

#include <algorithm>
#include <cmath>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/utf8.hpp"

namespace irony {

double smoothed_idf(std::size_t num_docs, std::size_t doc_freq) {
  return std::log((1.0 + static_cast<double>(num_docs)) / (1.0 + static_cast<double>(doc_freq))) + 1.0;
}

std::vector<std::string> extract_ngrams(const TokenizedTweet& tweet, NgramLevel level, int max_n) {
  std::vector<std::string> grams;
  if (level == NgramLevel::Word) {
    const auto& toks = tweet.tokens;
    for (int n = 1; n <= max_n; ++n) {
      for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        std::string g = toks[i];
        for (int k = 1; k < n; ++k) {
          g.push_back(' ');
          g += toks[i + k];
        }
        grams.push_back(std::move(g));
      }
    }
  } else {
    const std::u32string cps = utf8::decode(tweet.text);
    for (int n = 1; n <= max_n; ++n) {
      for (std::size_t i = 0; i + n <= cps.size(); ++i) {
        grams.push_back(utf8::encode(std::u32string_view(cps).substr(i, n)));
      }
    }
  }
  return grams;
}

NgramVocabulary::NgramVocabulary(NgramLevel level, int max_n, std::size_t top_k,
                                 std::vector<NgramEntry> entries)
    : level_(level), max_n_(max_n), top_k_(top_k), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].gram, i);
}

std::optional<std::size_t> NgramVocabulary::column(std::string_view gram) const {
  const auto it = index_.find(std::string(gram));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void NgramVocabulary::save(BinaryWriter& w) const {
  w.u8(level_ == NgramLevel::Word ? 0 : 1);
  w.u32(static_cast<std::uint32_t>(max_n_));
  w.u64(top_k_);
  w.u64(entries_.size());
  for (const auto& e : entries_) {
    w.str(e.gram);
    w.f64(e.idf);
  }
}

NgramVocabulary NgramVocabulary::load(BinaryReader& r) {
  const auto level = r.u8() == 0 ? NgramLevel::Word : NgramLevel::Char;
  const int max_n = static_cast<int>(r.u32());
  const auto top_k = r.u64();
  std::vector<NgramEntry> entries(r.count(16));
  for (auto& e : entries) {
    e.gram = r.str();
    e.idf = r.f64();
  }
  return NgramVocabulary(level, max_n, top_k, std::move(entries));
}

NgramVocabulary fit_ngram_vocab(std::span<const TokenizedTweet> corpus, NgramLevel level, int top_k,
                                int max_n) {
  if (top_k <= 0) throw Error(ErrorKind::Config, "n-gram top_k must be positive");
  if (corpus.empty()) throw Error(ErrorKind::Validation, "cannot fit n-gram vocabulary on an empty corpus");

  struct Stats {
    std::size_t df = 0;
    std::size_t cf = 0;
    std::size_t last_doc = SIZE_MAX;
  };
  std::unordered_map<std::string, Stats> stats;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto& g : extract_ngrams(corpus[d], level, max_n)) {
      auto& s = stats[std::move(g)];
      ++s.cf;
      if (s.last_doc != d) {
        ++s.df;
        s.last_doc = d;
      }
    }
  }

  struct Ranked {
    double score;
    double idf;
    const std::string* gram;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(stats.size());
  for (const auto& [gram, s] : stats) {
    const double idf = smoothed_idf(corpus.size(), s.df);
    ranked.push_back({static_cast<double>(s.cf) * idf, idf, &gram});
  }
  const auto better = [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    return *a.gram < *b.gram;
  };
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(top_k), ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), better);

  std::vector<NgramEntry> entries;
  entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) entries.push_back({*ranked[i].gram, ranked[i].idf});
  return NgramVocabulary(level, max_n, static_cast<std::size_t>(top_k), std::move(entries));
}

namespace {

void l2_normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq <= 0.0) return;
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
}

}  // namespace

std::vector<double> vectorize_ngrams(const TokenizedTweet& tweet, const NgramVocabulary& vocab) {
  std::vector<double> block(vocab.size(), 0.0);
  for (const auto& g : extract_ngrams(tweet, vocab.level(), vocab.max_n())) {
    if (const auto col = vocab.column(g)) block[*col] += 1.0;
  }
  for (std::size_t c = 0; c < block.size(); ++c) {
    if (block[c] != 0.0) block[c] *= vocab.entries()[c].idf;
  }
  l2_normalize(block);
  return block;
}

std::array<double, 2> surface_counts(const TokenizedTweet& tweet) {
  return {static_cast<double>(tweet.char_count), static_cast<double>(tweet.word_count)};
}

void PosVocabulary::save(BinaryWriter& w) const { w.f64s(idf_); }

PosVocabulary PosVocabulary::load(BinaryReader& r) {
  const auto v = r.f64s();
  if (v.size() != kNumPosTags) throw Error(ErrorKind::Integrity, "POS vocabulary must have 45 entries");
  std::array<double, kNumPosTags> idf{};
  std::copy(v.begin(), v.end(), idf.begin());
  return PosVocabulary(idf);
}

PosVocabulary fit_pos_vocab(std::span<const TokenizedTweet> corpus) {
  std::array<std::size_t, kNumPosTags> df{};
  for (const auto& t : corpus) {
    std::array<bool, kNumPosTags> seen{};
    for (const auto& tag : t.tags) {
      const auto idx = pos_tag_index(tag);
      if (!idx) throw Error(ErrorKind::Validation, "unknown POS tag '" + tag + "'");
      seen[*idx] = true;
    }
    for (std::size_t k = 0; k < kNumPosTags; ++k) df[k] += seen[k] ? 1 : 0;
  }
  std::array<double, kNumPosTags> idf{};
  for (std::size_t k = 0; k < kNumPosTags; ++k) idf[k] = smoothed_idf(corpus.size(), df[k]);
  return PosVocabulary(idf);
}

std::vector<double> vectorize_pos(const TokenizedTweet& tweet, const PosVocabulary& vocab) {
  std::vector<double> block(kNumPosTags, 0.0);
  for (const auto& tag : tweet.tags) {
    const auto idx = pos_tag_index(tag);
    if (!idx) throw Error(ErrorKind::Validation, "unknown POS tag '" + tag + "'");
    block[*idx] += 1.0;
  }
  for (std::size_t k = 0; k < kNumPosTags; ++k) block[k] *= vocab.idf()[k];
  l2_normalize(block);
  return block;
}

}  // namespace irony
