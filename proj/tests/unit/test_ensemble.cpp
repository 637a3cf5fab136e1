#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "irony/dataset.hpp"
#include "irony/ensemble.hpp"
#include "irony/error.hpp"
#include "irony/rng.hpp"
#include "test_helpers.hpp"

using namespace irony;

TEST_CASE("split_folds: stratified partition") {
  std::vector<int> labels(100);
  for (int i = 0; i < 100; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
  const auto f = split_folds(labels, 10, 5);
  std::map<std::pair<int, int>, int> cell;
  for (std::size_t i = 0; i < f.size(); ++i) ++cell[{f[i], labels[i]}];
  for (int k = 0; k < 10; ++k) {
    CHECK(cell[{k, 0}] == 5);
    CHECK(cell[{k, 1}] == 5);
  }
  CHECK(split_folds(labels, 10, 5) == f);
  for (int x : split_folds(labels, 1, 5)) CHECK(x == 0);
  CHECK_THROWS_AS(split_folds(std::vector<int>{0, 1}, 3, 1), Error);
}

TEST_CASE("split_folds: uneven classes keep sizes and per-class counts within one") {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 12 + rng.below(80);
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.below(4));
    const int k = 2 + static_cast<int>(rng.below(9));
    const auto f = split_folds(labels, k, static_cast<std::uint64_t>(trial));
    std::vector<int> size(static_cast<std::size_t>(k));
    std::map<int, std::vector<int>> per_class;
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(f[i] >= 0);
      REQUIRE(f[i] < k);
      ++size[static_cast<std::size_t>(f[i])];
      auto& v = per_class[labels[i]];
      v.resize(static_cast<std::size_t>(k));
      ++v[static_cast<std::size_t>(f[i])];
    }
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
    for (auto& [c, v] : per_class) CHECK(*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()) <= 1);
  }
}

namespace {

Prediction stub(int label, std::vector<double> probs) { return {label, std::move(probs)}; }

}  // namespace

TEST_CASE("voting rules") {
  std::vector<Prediction> all_one(10, stub(1, {0.2, 0.8}));
  const auto u = vote_outputs(all_one, 2);
  CHECK(u.label == 1);
  CHECK(u.counts == std::vector<int>{0, 10});
  const auto full = tally_votes(all_one, 2);
  CHECK(full.label == u.label);
  CHECK(full.counts == u.counts);
  CHECK(full.mean_probs == u.mean_probs);

  // 5-5 tie: class 0 has mean probability 0.52
  std::vector<Prediction> tie;
  for (int i = 0; i < 5; ++i) tie.push_back(stub(0, {0.62, 0.38}));
  for (int i = 0; i < 5; ++i) tie.push_back(stub(1, {0.42, 0.58}));
  auto v = vote_outputs(tie, 2);
  CHECK(v.mean_probs[0] == doctest::Approx(0.52));
  CHECK(v.label == 0);
  // and the other way round
  for (auto& p : tie) std::swap(p.probabilities[0], p.probabilities[1]);
  for (auto& p : tie) p.label = 1 - p.label;
  CHECK(vote_outputs(tie, 2).label == 1);

  // exact tie on votes and probability -> lowest id
  std::vector<Prediction> even{stub(0, {0.5, 0.5}), stub(1, {0.5, 0.5})};
  CHECK(vote_outputs(even, 2).label == 0);

  // 4/3/3 plurality, order independent
  std::vector<Prediction> three;
  for (int i = 0; i < 3; ++i) three.push_back(stub(0, {0.9, 0.05, 0.05}));
  for (int i = 0; i < 4; ++i) three.push_back(stub(2, {0.3, 0.3, 0.4}));
  for (int i = 0; i < 3; ++i) three.push_back(stub(1, {0.05, 0.9, 0.05}));
  CHECK(vote_outputs(three, 3).label == 2);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    rng.shuffle(std::span(three));
    CHECK(vote_outputs(three, 3).label == 2);
  }
}

namespace {

LabeledCorpus toy60() {
  auto c = load_dataset(std::filesystem::path(IRONY_DATA_DIR) / "fixtures/toy30.tsv", Task::A);
  const auto n = c.tweets.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto t = c.tweets[i];
    t.id += 1000;
    t.text += " again";
    c.tweets.push_back(t);
  }
  return c;
}

FeatureConfig small_features() {
  FeatureConfig f;
  f.word_top_k = 50;
  f.char_top_k = 50;
  f.brown_sizes = {4, 5, 6};
  f.lsi_dim = 8;
  return f;
}

EnsembleConfig small_ensemble(std::uint64_t seed) {
  EnsembleConfig e;
  e.mlp.hidden = {8, 4};
  e.mlp.max_epochs = 4;
  e.mlp.patience = 2;
  e.mlp.learning_rate = 1e-3;
  e.seed = seed;
  e.mlp.seed = seed;
  return e;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("ensemble training, prediction and persistence") {
  const auto corpus = toy60();
  const auto res = testutil::shipped_resources();
  const auto tag = testutil::shipped_tagger();
  const auto model = train_ensemble(corpus, res, tag, small_features(), small_ensemble(4));
  CHECK(model.members.size() == 10);
  CHECK(model.fold_of.size() == 60);
  std::map<int, int> per_fold;
  for (auto [id, f] : model.fold_of) ++per_fold[f];
  for (auto [f, n] : per_fold) CHECK(n == 6);  // each member: 54 train, 6 validation
  for (const auto& m : model.members) CHECK(m.input_dim() == static_cast<int>(model.pipeline->width()));

  const auto preds = predict_corpus(model, corpus);
  CHECK(preds.size() == 60);
  std::ostringstream out;
  write_predictions(out, preds, 10, 2);
  const auto path = testutil::write_file("preds.tsv", out.str());
  const auto back = read_predictions(path);
  CHECK(back.size() == 60);
  CHECK(back.at(preds[0].id) == preds[0].vote.label);

  // retraining is deterministic, jobs do not matter
  auto cfg2 = small_ensemble(4);
  cfg2.jobs = 3;
  const auto again = train_ensemble(corpus, res, tag, small_features(), cfg2);
  const auto p1 = testutil::temp_dir() / "m1.bin";
  const auto p2 = testutil::temp_dir() / "m2.bin";
  save_model(model, p1);
  save_model(again, p2);
  CHECK(slurp(p1) == slurp(p2));

  const auto loaded = load_model(p1);
  CHECK(loaded.task == Task::A);
  CHECK(loaded.members.size() == 10);
  const auto lp = predict_corpus(loaded, corpus);
  for (std::size_t i = 0; i < lp.size(); ++i) {
    CHECK(lp[i].vote.label == preds[i].vote.label);
    CHECK(lp[i].vote.mean_probs == preds[i].vote.mean_probs);
  }

  // a task B corpus is refused
  LabeledCorpus b = corpus;
  b.task = Task::B;
  try {
    predict_corpus(model, b);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TaskMismatch);
  }
}

TEST_CASE("ensemble errors") {
  const auto res = testutil::shipped_resources();
  const auto tag = testutil::shipped_tagger();
  auto cfg = small_ensemble(1);
  cfg.folds = 1;
  CHECK_THROWS_AS(train_ensemble(toy60(), res, tag, small_features(), cfg), Error);
  auto bad = small_ensemble(1);
  bad.mlp.learning_rate = -1;
  CHECK_THROWS_AS(train_ensemble(toy60(), res, tag, small_features(), bad), Error);
  CHECK_THROWS_AS(load_model("/nonexistent/model.bin"), Error);
}
