#include <doctest.h>

#include "irony/brown.hpp"
#include "irony/lsi.hpp"
#include "irony/normalize.hpp"
#include "irony/polarity.hpp"
#include "irony/rng.hpp"
#include "irony/semantic.hpp"
#include "irony/tokenize.hpp"
#include "test_helpers.hpp"

using namespace irony;

TEST_CASE("average embedding") {
  EmbeddingTable table(2);
  const double a[] = {1.0, 0.0};
  const double b[] = {0.0, 1.0};
  table.add("a", a);
  table.add("b", b);
  CHECK(average_embedding(make_tokenized(1, "a b"), table) == std::vector<double>{0.5, 0.5});
  CHECK(average_embedding(make_tokenized(1, "a a"), table) == std::vector<double>{1.0, 0.0});
  CHECK(average_embedding(make_tokenized(1, "a zzz"), table) == std::vector<double>{1.0, 0.0});
  CHECK(average_embedding(make_tokenized(1, "x y"), table) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("semantic block is the concatenation of its parts") {
  EmbeddingTable table(3);
  const double v[] = {0.25, -1.0, 2.0};
  table.add("cat", v);
  std::vector<TokenizedTweet> corpus;
  for (const char* s : {"cat dog", "dog cat bird", "bird cat", "dog bird"}) {
    corpus.push_back(make_tokenized(static_cast<std::int64_t>(corpus.size()), s));
  }
  LsiOptions opt;
  opt.method = SvdMethod::Dense;
  const auto lsi = fit_lsi_padded(corpus, 5, opt);
  const std::vector<BrownClustering> cl{train_brown(collect_bigram_stats(corpus), 2)};

  const auto t = make_tokenized(9, "cat bird cat");
  const auto block = semantic_block(t, table, lsi, cl);
  std::vector<double> want = average_embedding(t, table);
  const auto p = lsi.project(t);
  const auto c = cluster_count_block(t, cl);
  want.insert(want.end(), p.begin(), p.end());
  want.insert(want.end(), c.begin(), c.end());
  CHECK(block == want);
  CHECK(block.size() == 3 + 5 + 2);

  for (double x : semantic_block(make_tokenized(10, ""), table, lsi, cl)) CHECK(x == 0.0);
}

namespace {

std::array<double, kPolarityWidth> polarity_of(const std::string& raw) {
  const auto res = testutil::shipped_resources();
  const Normalizer norm(*res);
  return polarity_block(make_tokenized(1, norm.normalize(raw)), *res);
}

}  // namespace

TEST_CASE("polarity block examples") {
  CHECK(polarity_of("i love this") == std::array<double, kPolarityWidth>{1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1});
  const auto contrast = polarity_of("I really love this year's summer; weeks and weeks of awful weather");
  CHECK(contrast[kPosWords] >= 1);
  CHECK(contrast[kNegWords] >= 1);
  CHECK(contrast[kContrast] == 1);
  for (double x : polarity_of("")) CHECK(x == 0.0);
  CHECK(polarity_of("don't go")[kHasNegation] == 1);
  CHECK(polarity_of("LOVE it")[kPosWords] == 1);
}

TEST_CASE("polarity emoji via normalized names") {
  const auto res = testutil::shipped_resources();
  std::string pos_name, neg_name;
  for (const auto& [name, pol] : res->emoji_polarity) {
    if (pol == Polarity::Positive && pos_name.empty()) pos_name = name;
    if (pol == Polarity::Negative && neg_name.empty()) neg_name = name;
  }
  REQUIRE(!pos_name.empty());
  REQUIRE(!neg_name.empty());
  const auto b = polarity_block(make_tokenized(1, pos_name + " " + neg_name + " " + pos_name), *res);
  CHECK(b[kPosEmoji] == 2);
  CHECK(b[kNegEmoji] == 1);
  CHECK(b[kHasPosEmoji] == 1);
  CHECK(b[kHasNegEmoji] == 1);
  CHECK(b[kSignalTotal] == 3);
}

TEST_CASE("polarity invariants and monotonicity on random token lists") {
  const auto res = testutil::shipped_resources();
  const std::vector<std::string> pool = {"love", "awful", "great", "bad", "not", "n't", "the", "sunny",
                                         "hate", "nice", "never", "rain", "smiling_face_with_heart-eyes"};
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const auto n = rng.below(10);
    for (std::uint64_t i = 0; i < n; ++i) text += (i ? " " : "") + pool[rng.below(pool.size())];
    const auto b = polarity_block(make_tokenized(1, text), *res);
    for (auto col : {kHasPosWord, kHasNegWord, kHasPosEmoji, kHasNegEmoji, kHasNegation, kContrast}) {
      CHECK((b[col] == 0 || b[col] == 1));
    }
    for (auto col : {kPosWords, kNegWords, kPosEmoji, kNegEmoji, kSignalTotal}) CHECK(b[col] >= 0);
    CHECK(b[kSignalTotal] == b[kPosWords] + b[kNegWords] + b[kPosEmoji] + b[kNegEmoji]);
    CHECK(b[kWordBalance] == b[kPosWords] - b[kNegWords]);

    const auto more = polarity_block(make_tokenized(1, text + " love"), *res);
    for (auto col : {kPosWords, kHasPosWord, kWordBalance, kSignalTotal}) CHECK(more[col] >= b[col]);
  }
}
