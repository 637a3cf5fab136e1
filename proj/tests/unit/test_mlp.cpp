#include <doctest.h>

#include <cmath>
#include <numeric>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/mlp.hpp"
#include "irony/rng.hpp"
#include "oracles.hpp"

using namespace irony;

namespace {

RowMatrix random_batch(Rng& rng, int rows, int cols) {
  RowMatrix x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x(i, j) = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("init: shapes, zero biases, determinism, bad dims") {
  const auto m = init_mlp({4, 3, 2, 2}, 7);
  CHECK(m.w[0].rows() == 4);
  CHECK(m.w[0].cols() == 3);
  CHECK(m.w[1].rows() == 3);
  CHECK(m.w[1].cols() == 2);
  CHECK(m.w[2].rows() == 2);
  CHECK(m.w[2].cols() == 2);
  for (const auto& b : m.b) CHECK(b.isZero());
  const auto m2 = init_mlp({4, 3, 2, 2}, 7);
  for (int l = 0; l < 3; ++l) CHECK(m.w[l] == m2.w[l]);
  const double bound = std::sqrt(6.0 / 4.0);
  CHECK(m.w[0].cwiseAbs().maxCoeff() <= bound);
  CHECK_THROWS_AS(init_mlp({4, 0, 2, 2}, 1), Error);
}

TEST_CASE("forward: zero network is uniform; probabilities normalized") {
  const auto z = zero_mlp({3, 2, 2, 2});
  const std::vector<double> x{1, 2, 3};
  const auto p = forward(z, x);
  CHECK(p == std::vector<double>{0.5, 0.5});
  CHECK(predict(z, x).label == 0);

  Rng rng(3);
  const auto m = init_mlp({5, 4, 3, 3}, 9);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(5);
    for (auto& e : v) e = rng.normal() * 50;
    const auto q = forward(m, v);
    CHECK(std::abs(std::accumulate(q.begin(), q.end(), 0.0) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(forward(m, std::vector<double>{1.0}), Error);
}

TEST_CASE("forward: hand-computed 2-2-2-2 network") {
  MlpModel m = zero_mlp({2, 2, 2, 2});
  m.w[0] << 1.0, -1.0,
            0.5, 2.0;      // h1 = relu(W1^T x + b1)
  m.b[0] << 0.1, -0.2;
  m.w[1] << 1.0, 0.0,
            -1.0, 1.0;
  m.b[1] << 0.0, 0.3;
  m.w[2] << 2.0, -1.0,
            0.5, 0.5;
  m.b[2] << 0.0, 0.1;
  const std::vector<double> x{1.0, 2.0};
  // z1 = (1*1 + 0.5*2 + 0.1, -1*1 + 2*2 - 0.2) = (2.1, 2.8)
  // z2 = (2.1 - 2.8, 0*2.1 + 2.8 + 0.3) = (-0.7, 3.1) -> h2 = (0, 3.1)
  // z3 = (2*0 + 0.5*3.1, -1*0 + 0.5*3.1 + 0.1) = (1.55, 1.65)
  const double e0 = std::exp(1.55 - 1.65);
  const double p0 = e0 / (e0 + 1.0);
  const auto p = forward(m, x);
  CHECK(std::abs(p[0] - p0) < 1e-12);
  CHECK(std::abs(p[1] - (1.0 - p0)) < 1e-12);
  CHECK(predict(m, x).label == 1);
}

TEST_CASE("loss: analytic cases") {
  const auto z = zero_mlp({2, 2, 2, 2});
  RowMatrix x(2, 2);
  x << 1, 2, 3, 4;
  const std::vector<int> y{0, 1};
  CHECK(std::abs(loss(z, x, y, 0.0) - std::log(2.0)) < 1e-15);

  MlpModel m = zero_mlp({2, 2, 2, 2});
  m.w[0] << 1, 2, 3, 4;  // 30
  m.w[1] << 1, 0, 0, 1;  // 2
  m.w[2] << 0, 0, 0, 2;  // 4
  m.b[0] << 100, 100;    // biases excluded from the penalty
  const double base = loss(m, x, y, 0.0);
  CHECK(std::abs(loss(m, x, y, 0.5) - base - 0.5 * 36.0) < 1e-9);

  // confident and correct -> loss near 0
  MlpModel sure = zero_mlp({1, 1, 1, 2});
  sure.b[2] << 50.0, -50.0;
  RowMatrix one(1, 1);
  one << 0.0;
  CHECK(loss(sure, one, std::vector<int>{0}, 0.0) < 1e-40);
  // confidently wrong stays finite thanks to the log floor
  sure.b[2] << 1000.0, -1000.0;
  CHECK(std::isfinite(loss(sure, one, std::vector<int>{1}, 0.0)));
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    auto m = init_mlp({6, 4, 3, 2}, 100 + static_cast<std::uint64_t>(trial));
    for (auto& b : m.b)
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 0.1 * rng.normal();
    const auto x = random_batch(rng, 5, 6);
    std::vector<int> y(5);
    for (auto& v : y) v = static_cast<int>(rng.below(2));
    const double l2 = 1e-3;
    const auto g = gradients(m, x, y, l2);
    int checked = 0;
    for (int l = 0; l < 3; ++l) {
      for (Eigen::Index i = 0; i < m.w[l].size(); ++i) {
        auto f = [&](double v) {
          auto mm = m;
          mm.w[l].data()[i] = v;
          return loss(mm, x, y, l2);
        };
        const double num = oracle::central_difference(f, m.w[l].data()[i], 1e-5);
        CHECK(oracle::relative_error(g.w[l].data()[i], num) < 1e-4);
        ++checked;
      }
      for (Eigen::Index i = 0; i < m.b[l].size(); ++i) {
        auto f = [&](double v) {
          auto mm = m;
          mm.b[l](i) = v;
          return loss(mm, x, y, l2);
        };
        const double num = oracle::central_difference(f, m.b[l](i), 1e-5);
        CHECK(oracle::relative_error(g.b[l](i), num) < 1e-4);
        ++checked;
      }
    }
    CHECK(checked == 6 * 4 + 4 * 3 + 3 * 2 + 4 + 3 + 2);
  }
}

TEST_CASE("gradients: mean reduction and l2 term") {
  Rng rng(4);
  const auto m = init_mlp({3, 3, 3, 2}, 5);
  const auto x = random_batch(rng, 2, 3);
  const std::vector<int> y{0, 1};
  RowMatrix xx(4, 3);
  xx << x, x;
  const std::vector<int> yy{0, 1, 0, 1};
  const auto g1 = gradients(m, x, y, 0.0);
  const auto g2 = gradients(m, xx, yy, 0.0);
  for (int l = 0; l < 3; ++l) CHECK((g1.w[l] - g2.w[l]).cwiseAbs().maxCoeff() < 1e-14);
  const auto gl = gradients(m, x, y, 0.25);
  for (int l = 0; l < 3; ++l) CHECK((gl.w[l] - g1.w[l] - 0.5 * m.w[l]).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("argmax ties and shift invariance") {
  CHECK(argmax_label(std::vector<double>{0.7, 0.3}) == 0);
  CHECK(argmax_label(std::vector<double>{0.5, 0.5}) == 0);
  CHECK(argmax_label(std::vector<double>{0.2, 0.4, 0.4}) == 1);
  auto m = init_mlp({3, 4, 4, 3}, 2);
  const std::vector<double> x{0.3, -1, 2};
  const int before = predict(m, x).label;
  m.b[2].array() += 5.0;
  CHECK(predict(m, x).label == before);
}

namespace {

struct Toy {
  RowMatrix x;
  std::vector<int> y;
};

Toy separable(std::uint64_t seed) {
  Rng rng(seed);
  Toy t{RowMatrix(40, 2), std::vector<int>(40)};
  for (int i = 0; i < 40; ++i) {
    const int label = i % 2;
    t.y[static_cast<std::size_t>(i)] = label;
    t.x(i, 0) = (label ? 1.5 : -1.5) + 0.4 * rng.normal();
    t.x(i, 1) = rng.normal();
  }
  return t;
}

}  // namespace

TEST_CASE("training: separable toy set reaches training accuracy 1") {
  const auto t = separable(8);
  std::vector<std::size_t> train(32), val(8);
  std::iota(train.begin(), train.end(), 0);
  std::iota(val.begin(), val.end(), 32);
  MlpConfig cfg;
  cfg.hidden = {16, 8};
  cfg.learning_rate = 1e-2;
  cfg.batch_size = 8;
  cfg.seed = 3;
  const auto res = train_mlp(init_mlp({2, 16, 8, 2}, 3), t.x, t.y, train, val, cfg);
  int correct = 0;
  for (std::size_t i : train) {
    const std::vector<double> row(t.x.row(static_cast<Eigen::Index>(i)).data(),
                                  t.x.row(static_cast<Eigen::Index>(i)).data() + 2);
    correct += predict(res.model, row).label == t.y[i];
  }
  CHECK(correct == 32);
  CHECK(res.log.size() <= 100);
  // best-checkpoint contract
  for (const auto& e : res.log) CHECK(res.best_val_loss <= e.val_loss);
  std::vector<int> yv;
  RowMatrix xv(8, 2);
  for (std::size_t k = 0; k < val.size(); ++k) {
    xv.row(static_cast<Eigen::Index>(k)) = t.x.row(static_cast<Eigen::Index>(val[k]));
    yv.push_back(t.y[val[k]]);
  }
  // validation loss is the full objective, penalty included
  CHECK(std::abs(loss(res.model, xv, yv, cfg.l2) - res.best_val_loss) < 1e-9);

  // determinism
  const auto again = train_mlp(init_mlp({2, 16, 8, 2}, 3), t.x, t.y, train, val, cfg);
  for (int l = 0; l < 3; ++l) CHECK(again.model.w[l] == res.model.w[l]);

  BinaryWriter w;
  res.model.save(w);
  BinaryReader r(w.bytes());
  const auto back = MlpModel::load(r);
  for (int l = 0; l < 3; ++l) CHECK(back.w[l] == res.model.w[l]);
}

TEST_CASE("training: patience 0 stops at the first non-improving epoch") {
  const auto t = separable(9);
  std::vector<std::size_t> train(30), val(10);
  std::iota(train.begin(), train.end(), 0);
  std::iota(val.begin(), val.end(), 30);
  MlpConfig cfg;
  cfg.hidden = {4, 4};
  cfg.learning_rate = 0.5;  // large enough to overshoot quickly
  cfg.patience = 0;
  cfg.max_epochs = 100;
  const auto res = train_mlp(init_mlp({2, 4, 4, 2}, 1), t.x, t.y, train, val, cfg);
  REQUIRE(res.log.size() >= 2);
  double best = res.log[0].val_loss;
  for (std::size_t e = 1; e + 1 < res.log.size(); ++e) {
    CHECK(res.log[e].val_loss < best);
    best = res.log[e].val_loss;
  }
  if (res.log.size() < 100) CHECK(res.log.back().val_loss >= best);

  CHECK_THROWS_AS(train_mlp(init_mlp({2, 4, 4, 2}, 1), t.x, t.y, std::vector<std::size_t>{}, val, cfg), Error);
  MlpConfig bad = cfg;
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("task defaults") {
  CHECK(MlpConfig::for_task(Task::A).hidden == std::array<int, 2>{800, 400});
  CHECK(MlpConfig::for_task(Task::B).hidden == std::array<int, 2>{800, 300});
  const auto c = MlpConfig::for_task(Task::A);
  CHECK(c.learning_rate == 1e-4);
  CHECK(c.l2 == 1e-5);
  CHECK(c.max_epochs == 100);
  CHECK(c.patience == 30);
}
