#include <doctest.h>

#include <cmath>
#include <sstream>

#include "irony/binary_io.hpp"
#include "irony/dataset.hpp"
#include "irony/error.hpp"
#include "irony/pipeline.hpp"
#include "irony/polarity.hpp"
#include "irony/semantic.hpp"
#include "test_helpers.hpp"

using namespace irony;

namespace {

LabeledCorpus toy() { return load_dataset(std::filesystem::path(IRONY_DATA_DIR) / "fixtures/toy30.tsv", Task::A); }

FeaturePipeline fit_toy(const FeatureConfig& cfg) {
  return fit_pipeline(toy(), testutil::shipped_resources(), testutil::shipped_tagger(), cfg);
}

}  // namespace

TEST_CASE("pipeline width on a toy corpus equals the layout sum") {
  FeatureConfig cfg;
  const auto p = fit_toy(cfg);
  const std::size_t w = p.word_vocab().size();
  const std::size_t c = p.char_vocab().size();
  CHECK(w <= 1000);
  CHECK(c == 1000);
  CHECK(p.width() == w + c + 2 + 45 + 700 + 12);
  CHECK(p.layout().family_width("lexical") == w + c + 2);
  CHECK(p.layout().family_width("syntactic") == 45);
  CHECK(p.layout().family_width("semantic") == 700);
  CHECK(p.layout().family_width("polarity") == 12);
  std::size_t off = 0;
  for (const auto& b : p.layout().blocks()) {
    CHECK(b.offset == off);
    off += b.width;
  }
  CHECK(off == p.width());
}

TEST_CASE("pipeline transform: finite, deterministic, compositional") {
  FeatureConfig cfg;
  cfg.brown_sizes = {4, 6, 8};
  cfg.lsi_dim = 10;
  const auto corpus = toy();
  const auto p = fit_toy(cfg);
  const auto p2 = fit_toy(cfg);

  BinaryWriter a, b;
  p.save(a);
  p2.save(b);
  CHECK(a.bytes() == b.bytes());

  const auto prepared = p.prepare_all(corpus.tweets);
  const auto x = p.transform_batch(prepared);
  CHECK(x.allFinite());
  CHECK(static_cast<std::size_t>(x.cols()) == p.width());

  // dense training columns are standardized
  const auto* pol = p.layout().find("polarity");
  REQUIRE(pol != nullptr);
  for (std::size_t col = pol->offset; col < pol->offset + pol->width; ++col) {
    CHECK(std::abs(x.col(static_cast<Eigen::Index>(col)).mean()) < 1e-9);
  }

  // slices equal the module ops composed with the scaler
  const auto& t = prepared[3];
  auto raw = p.raw_features(t);
  const auto* wn = p.layout().find("word_ngrams");
  const auto words = vectorize_ngrams(t, p.word_vocab());
  for (std::size_t i = 0; i < words.size(); ++i) CHECK(raw[wn->offset + i] == words[i]);
  const auto* pos = p.layout().find("pos_tags");
  const auto tags = vectorize_pos(t, p.pos_vocab());
  for (std::size_t i = 0; i < tags.size(); ++i) CHECK(raw[pos->offset + i] == tags[i]);
  const auto polv = polarity_block(t, p.resources());
  for (std::size_t i = 0; i < polv.size(); ++i) CHECK(raw[pol->offset + i] == polv[i]);
  const auto* lsi = p.layout().find("lsi");
  const auto proj = p.lsi().project(t);
  for (std::size_t i = 0; i < proj.size(); ++i) CHECK(raw[lsi->offset + i] == proj[i]);
  p.scale(raw);
  for (Eigen::Index i = 0; i < x.cols(); ++i) CHECK(raw[static_cast<std::size_t>(i)] == x(3, i));

  // transform is independent of call order
  const auto v1 = p.transform(corpus.tweets[5]).values;
  p.transform(corpus.tweets[0]);
  CHECK(p.transform(corpus.tweets[5]).values == v1);

  // empty tweet: sparse zeros, dense at -mean/std
  const auto empty = p.transform(RawTweet{99, "", std::nullopt}).values;
  for (std::size_t i = 0; i < words.size(); ++i) CHECK(empty[wn->offset + i] == 0.0);
  for (double v : empty) CHECK(std::isfinite(v));

  // persistence round trip
  BinaryReader r(a.bytes());
  const auto back = FeaturePipeline::load(r);
  CHECK(back.transform(corpus.tweets[5]).values == v1);
}

TEST_CASE("pipeline toggles shrink the layout by the block width") {
  FeatureConfig cfg;
  cfg.brown_sizes = {4, 6, 8};
  cfg.lsi_dim = 10;
  const auto full = fit_toy(cfg);
  auto no_sem = cfg;
  no_sem.semantic = false;
  CHECK(fit_toy(no_sem).width() == full.width() - full.layout().family_width("semantic"));
  auto no_pol = cfg;
  no_pol.polarity = false;
  CHECK(fit_toy(no_pol).width() == full.width() - 12);
  auto no_syn = cfg;
  no_syn.syntactic = false;
  CHECK(fit_toy(no_syn).width() == full.width() - 45);
  auto none = cfg;
  none.lexical = none.syntactic = none.semantic = none.polarity = false;
  CHECK_THROWS_AS(fit_toy(none), Error);
}

TEST_CASE("pipeline errors carry the block name") {
  FeatureConfig cfg;
  cfg.brown_sizes = {4};
  cfg.brown_min_count = 1000;
  try {
    fit_toy(cfg);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("brown") != std::string::npos);
  }
}

TEST_CASE("feature matrix export") {
  FeatureConfig cfg;
  cfg.brown_sizes = {4};
  cfg.lsi_dim = 3;
  cfg.word_top_k = 5;
  cfg.char_top_k = 5;
  const auto p = fit_toy(cfg);
  const auto corpus = toy();
  const auto prepared = p.prepare_all(std::span(corpus.tweets).first(2));
  const auto x = p.transform_batch(prepared);
  std::ostringstream out;
  const std::vector<std::int64_t> ids{prepared[0].id, prepared[1].id};
  write_feature_matrix(out, p.layout(), ids, x);
  const auto text = out.str();
  CHECK(text.rfind("# block\tlexical\tword_ngrams\t0\t5\n", 0) == 0);
  std::size_t rows = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    ++rows;
  }
  CHECK(rows == 3);  // column header + 2 rows
}
