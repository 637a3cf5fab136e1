#include <doctest.h>

#include <cmath>
#include <sstream>

#include "irony/error.hpp"
#include "irony/metrics.hpp"
#include "irony/rng.hpp"

using namespace irony;

namespace {

double pct(double x) { return std::round(x * 10000.0) / 100.0; }

}  // namespace

TEST_CASE("hand confusion matrix [[3,1],[2,4]]") {
  const auto r = evaluate_confusion({{3, 1}, {2, 4}}, Task::A);
  CHECK(std::abs(r.accuracy - 0.7) < 1e-12);
  CHECK(std::abs(r.aggregate.precision - 0.8) < 1e-12);
  CHECK(std::abs(r.aggregate.recall - 4.0 / 6.0) < 1e-12);
  CHECK(std::abs(r.aggregate.f1 - 2 * 0.8 * (4.0 / 6.0) / (0.8 + 4.0 / 6.0)) < 1e-12);
  CHECK(pct(r.aggregate.f1) == 72.73);

  // same thing from label lists
  const std::vector<int> gold{0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  const std::vector<int> pred{0, 0, 0, 1, 0, 0, 1, 1, 1, 1};
  const auto e = evaluate(gold, pred, Task::A);
  CHECK(e.confusion == ConfusionMatrix{{3, 1}, {2, 4}});
  CHECK(e.aggregate.f1 == r.aggregate.f1);
}

TEST_CASE("subtask A regression target") {
  // TP 215, FP 138, FN 96, TN 335 on 784 tweets
  const auto r = evaluate_confusion({{335, 138}, {96, 215}}, Task::A);
  CHECK(r.total == 784);
  CHECK(pct(r.accuracy) == 70.15);
  CHECK(pct(r.aggregate.precision) == 60.91);
  CHECK(pct(r.aggregate.recall) == 69.13);
  CHECK(pct(r.aggregate.f1) == 64.76);
}

TEST_CASE("subtask B regression target") {
  const ConfusionMatrix m{{378, 83, 10, 2}, {42, 116, 5, 1}, {54, 10, 20, 1}, {44, 9, 6, 3}};
  const auto r = evaluate_confusion(m, Task::B);
  CHECK(pct(r.accuracy) == 65.94);
  CHECK(pct(r.aggregate.precision) == 54.46);
  CHECK(pct(r.aggregate.recall) == 44.75);
  CHECK(pct(r.aggregate.f1) == 44.37);
  const double f1s[] = {76.29, 60.73, 31.75, 8.70};
  for (int c = 0; c < 4; ++c) CHECK(pct(r.per_class[static_cast<std::size_t>(c)].f1) == f1s[c]);

  const auto alt = evaluate_confusion(m, Task::B, MacroMode::F1OfMeans);
  const double p = alt.aggregate.precision, rc = alt.aggregate.recall;
  CHECK(std::abs(alt.aggregate.f1 - 2 * p * rc / (p + rc)) < 1e-15);
}

TEST_CASE("perfect and degenerate predictions") {
  const std::vector<int> g{0, 1, 1, 0};
  const auto perfect = evaluate(g, g, Task::A);
  CHECK(perfect.accuracy == 1.0);
  for (const auto& c : perfect.per_class) CHECK(c.f1 == 1.0);

  // never predicts the positive class: precision denominator 0 -> 0
  const std::vector<int> zeros{0, 0, 0, 0};
  const auto none = evaluate(g, zeros, Task::A);
  CHECK(none.aggregate.precision == 0.0);
  CHECK(none.aggregate.recall == 0.0);
  CHECK(none.aggregate.f1 == 0.0);
  CHECK(none.accuracy == 0.5);

  CHECK_THROWS_AS(evaluate(g, std::vector<int>{0, 1}, Task::A), Error);
  CHECK_THROWS_AS(evaluate(g, std::vector<int>{0, 1, 2, 0}, Task::A), Error);
  CHECK_THROWS_AS(evaluate(std::vector<int>{}, std::vector<int>{}, Task::A), Error);
}

TEST_CASE("metric properties on random inputs") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<int> g(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = static_cast<int>(rng.below(4));
      p[i] = static_cast<int>(rng.below(4));
    }
    const auto r = evaluate(g, p, Task::B);

    // brute force from the pairs
    double macro = 0, correct = 0;
    for (int c = 0; c < 4; ++c) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += g[i] == c && p[i] == c;
        fp += g[i] != c && p[i] == c;
        fn += g[i] == c && p[i] != c;
      }
      const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
      const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
      macro += prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
      correct += tp;
    }
    CHECK(std::abs(r.aggregate.f1 - macro / 4) < 1e-12);
    CHECK(std::abs(r.accuracy - correct / static_cast<double>(n)) < 1e-15);

    // permutation invariance
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span(order));
    std::vector<int> g2, p2;
    for (auto i : order) {
      g2.push_back(g[i]);
      p2.push_back(p[i]);
    }
    const auto r2 = evaluate(g2, p2, Task::B);
    CHECK(r2.confusion == r.confusion);
    CHECK(r2.aggregate.f1 == r.aggregate.f1);
  }
}

TEST_CASE("report output") {
  const auto r = evaluate_confusion({{3, 1}, {2, 4}}, Task::A);
  std::ostringstream text, tsv;
  write_report_text(text, r);
  write_report_tsv(tsv, r);
  CHECK(text.str().find("70.00") != std::string::npos);
  CHECK(text.str().find("72.73") != std::string::npos);
  CHECK(tsv.str().find("accuracy") != std::string::npos);
}
