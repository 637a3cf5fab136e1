#include <doctest.h>

#include <cmath>

#include "irony/ngram.hpp"
#include "irony/rng.hpp"
#include "irony/tokenize.hpp"
#include "oracles.hpp"

using namespace irony;

namespace {

std::vector<TokenizedTweet> random_corpus(std::uint64_t seed, std::size_t docs) {
  const std::vector<std::string> words = {"a", "b", "cat", "dog", "é", "no", "yes", "so", "#not", "!"};
  Rng rng(seed);
  std::vector<TokenizedTweet> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    const auto n = 1 + rng.below(7);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (i) text += ' ';
      text += words[rng.below(words.size())];
    }
    out.push_back(make_tokenized(static_cast<std::int64_t>(d), text));
  }
  return out;
}

oracle::Doc as_doc(const TokenizedTweet& t) { return {t.text, t.tokens}; }

}  // namespace

TEST_CASE("smoothed idf") {
  CHECK(smoothed_idf(3, 1) == doctest::Approx(std::log(2.0) + 1.0));
  CHECK(smoothed_idf(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("ngram extraction") {
  const auto t = make_tokenized(1, "i love it");
  const auto w = extract_ngrams(t, NgramLevel::Word, 3);
  CHECK(w == std::vector<std::string>{"i", "love", "it", "i love", "love it", "i love it"});
  const auto c = extract_ngrams(make_tokenized(2, "ab é"), NgramLevel::Char, 2);
  CHECK(c == std::vector<std::string>{"a", "b", " ", "é", "ab", "b ", " é"});
}

TEST_CASE("tf-idf vocabulary and vectors match the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto corpus = random_corpus(seed, 25);
    for (auto level : {NgramLevel::Word, NgramLevel::Char}) {
      std::vector<std::vector<std::string>> doc_grams;
      for (const auto& t : corpus) {
        doc_grams.push_back(level == NgramLevel::Word ? oracle::word_grams(as_doc(t), 3)
                                                      : oracle::char_grams(as_doc(t), 3));
      }
      const std::size_t top_k = 15 + seed * 4;
      const auto ref = oracle::tfidf_vocab(doc_grams, top_k);
      const auto vocab = fit_ngram_vocab(corpus, level, static_cast<int>(top_k));
      REQUIRE(vocab.size() == ref.grams.size());
      for (std::size_t c = 0; c < vocab.size(); ++c) {
        CHECK(vocab.entries()[c].gram == ref.grams[c]);
        CHECK(std::abs(vocab.entries()[c].idf - ref.idf[c]) < 1e-12);
      }
      for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto got = vectorize_ngrams(corpus[d], vocab);
        const auto want = oracle::tfidf_block(doc_grams[d], ref);
        REQUIRE(got.size() == want.size());
        for (std::size_t c = 0; c < got.size(); ++c) CHECK(std::abs(got[c] - want[c]) < 1e-12);
      }
    }
  }
}

TEST_CASE("vectors: empty and out-of-vocabulary tweets are all zeros") {
  const auto corpus = random_corpus(3, 10);
  const auto vocab = fit_ngram_vocab(corpus, NgramLevel::Word, 10);
  for (double x : vectorize_ngrams(make_tokenized(99, ""), vocab)) CHECK(x == 0.0);
  for (double x : vectorize_ngrams(make_tokenized(99, "zebra"), vocab)) CHECK(x == 0.0);
}

TEST_CASE("surface counts and POS vector") {
  auto t = make_tokenized(1, "i love it !");
  CHECK(surface_counts(t) == std::array<double, 2>{11.0, 4.0});
  t.tags = {"PRP", "VBP", "PRP", "."};
  auto u = make_tokenized(2, "dogs");
  u.tags = {"NNS"};
  const std::vector<TokenizedTweet> corpus{t, u};
  const auto vocab = fit_pos_vocab(corpus);
  const auto v = vectorize_pos(t, vocab);
  CHECK(v.size() == kNumPosTags);
  const auto prp = *pos_tag_index("PRP");
  const auto vbp = *pos_tag_index("VBP");
  // PRP: tf 2, df 1 of 2 docs
  const double idf = std::log(3.0 / 2.0) + 1.0;
  const double norm = std::sqrt(4 * idf * idf + 2 * idf * idf);
  CHECK(v[prp] == doctest::Approx(2 * idf / norm));
  CHECK(v[vbp] == doctest::Approx(idf / norm));
  CHECK(vocab.idf()[*pos_tag_index("JJ")] == doctest::Approx(std::log(3.0) + 1.0));
}
