#include "irony/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/rng.hpp"

namespace irony {

namespace {

constexpr double kLogFloor = 1e-300;

struct Activations {
  RowMatrix h1;
  RowMatrix h2;
  RowMatrix probs;
};

// Input columns that are non-zero somewhere in the batch. Layer 1 only needs
// those rows of W1; skipping the rest changes no value.
struct ActiveInputs {
  bool sparse = false;
  std::vector<Eigen::Index> columns;
  RowMatrix x;             // batch restricted to `columns`
  Eigen::MatrixXd w;       // W1 rows for `columns`
};

void select_active(const RowMatrix& x, const Eigen::MatrixXd& w1, ActiveInputs& a) {
  a.columns.clear();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if ((x.col(j).array() != 0.0).any()) a.columns.push_back(j);
  }
  a.sparse = a.columns.size() * 10 < static_cast<std::size_t>(x.cols()) * 9;
  if (!a.sparse) return;
  const auto k = static_cast<Eigen::Index>(a.columns.size());
  a.x.resize(x.rows(), k);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < k; ++c) a.x(i, c) = x(i, a.columns[static_cast<std::size_t>(c)]);
  }
  a.w.resize(k, w1.cols());
  for (Eigen::Index h = 0; h < w1.cols(); ++h) {
    for (Eigen::Index c = 0; c < k; ++c) a.w(c, h) = w1(a.columns[static_cast<std::size_t>(c)], h);
  }
}

void softmax_in_place(RowMatrix& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp();
    z.row(i) /= z.row(i).sum();
  }
}

void run_into(const MlpModel& m, const RowMatrix& x, ActiveInputs& active, Activations& a) {
  if (x.cols() != m.dims[0]) {
    throw Error(ErrorKind::Validation, "input has " + std::to_string(x.cols()) + " features, model expects " +
                                           std::to_string(m.dims[0]));
  }
  select_active(x, m.w[0], active);
  a.h1.resize(x.rows(), m.dims[1]);
  if (active.sparse) {
    a.h1.noalias() = active.x * active.w;
  } else {
    a.h1.noalias() = x * m.w[0];
  }
  a.h1.rowwise() += m.b[0].transpose();
  a.h1 = a.h1.cwiseMax(0.0);
  a.h2.resize(x.rows(), m.dims[2]);
  a.h2.noalias() = a.h1 * m.w[1];
  a.h2.rowwise() += m.b[1].transpose();
  a.h2 = a.h2.cwiseMax(0.0);
  a.probs.resize(x.rows(), m.dims[3]);
  a.probs.noalias() = a.h2 * m.w[2];
  a.probs.rowwise() += m.b[2].transpose();
  softmax_in_place(a.probs);
}

Activations run(const MlpModel& m, const RowMatrix& x) {
  ActiveInputs active;
  Activations a;
  run_into(m, x, active, a);
  return a;
}

double weight_penalty(const MlpModel& m) {
  double s = 0.0;
  for (const auto& w : m.w) s += w.squaredNorm();
  return s;
}

double cross_entropy(const RowMatrix& probs, std::span<const int> y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    total -= std::log(std::max(probs(i, y[static_cast<std::size_t>(i)]), kLogFloor));
  }
  return total / static_cast<double>(probs.rows());
}

void check_batch(const MlpModel& m, const RowMatrix& x, std::span<const int> y) {
  if (x.rows() == 0) throw Error(ErrorKind::Validation, "empty batch");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw Error(ErrorKind::Validation, "batch has mismatched feature rows and labels");
  }
  for (int label : y) {
    if (label < 0 || label >= m.dims[3]) {
      throw Error(ErrorKind::Validation, "label " + std::to_string(label) + " outside the model's classes");
    }
  }
}

RowMatrix gather(const RowMatrix& x, std::span<const std::size_t> rows) {
  RowMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

std::vector<int> gather(std::span<const int> y, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(y[r]);
  return out;
}

// Validation loss in chunks to bound memory.
double chunked_loss(const MlpModel& m, const RowMatrix& x, std::span<const int> y,
                    std::span<const std::size_t> rows, double l2) {
  constexpr std::size_t kChunk = 512;
  double ce = 0.0;
  for (std::size_t start = 0; start < rows.size(); start += kChunk) {
    const auto part = rows.subspan(start, std::min(kChunk, rows.size() - start));
    const RowMatrix probs = run(m, gather(x, part)).probs;
    const auto labels = gather(y, part);
    ce += cross_entropy(probs, labels) * static_cast<double>(part.size());
  }
  return ce / static_cast<double>(rows.size()) + l2 * weight_penalty(m);
}

struct AdamState {
  MlpModel m;
  MlpModel v;
  long step = 0;
};

void adam_update(Eigen::Ref<Eigen::MatrixXd> p, const Eigen::MatrixXd& g, Eigen::Ref<Eigen::MatrixXd> m,
                 Eigen::Ref<Eigen::MatrixXd> v, double lr, double c1, double c2) {
  constexpr double b1 = 0.9;
  constexpr double b2 = 0.999;
  constexpr double eps = 1e-8;
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
  p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

}  // namespace

MlpConfig MlpConfig::for_task(Task task) {
  MlpConfig c;
  c.hidden = task == Task::A ? std::array<int, 2>{800, 400} : std::array<int, 2>{800, 300};
  return c;
}

void MlpConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::Config, what + " must be positive"); };
  if (hidden[0] <= 0 || hidden[1] <= 0) fail("hidden layer sizes");
  if (!(learning_rate > 0.0)) fail("learning rate");
  if (l2 < 0.0) throw Error(ErrorKind::Config, "l2 must be non-negative");
  if (max_epochs <= 0) fail("max_epochs");
  if (patience < 0) throw Error(ErrorKind::Config, "early-stop patience must be non-negative");
  if (batch_size <= 0) fail("batch size");
}

bool MlpModel::all_finite() const {
  for (int l = 0; l < 3; ++l) {
    if (!w[l].allFinite() || !b[l].allFinite()) return false;
  }
  return true;
}

void MlpModel::save(BinaryWriter& out) const {
  for (int d : dims) out.u32(static_cast<std::uint32_t>(d));
  for (int l = 0; l < 3; ++l) {
    out.f64s(std::span<const double>(w[l].data(), static_cast<std::size_t>(w[l].size())));
    out.f64s(std::span<const double>(b[l].data(), static_cast<std::size_t>(b[l].size())));
  }
}

MlpModel MlpModel::load(BinaryReader& in) {
  std::array<int, 4> dims{};
  for (int& d : dims) {
    d = static_cast<int>(in.u32());
    if (d <= 0) throw Error(ErrorKind::Integrity, "network dimension must be positive");
  }
  MlpModel m = zero_mlp(dims);
  for (int l = 0; l < 3; ++l) {
    const auto wv = in.f64s();
    const auto bv = in.f64s();
    if (wv.size() != static_cast<std::size_t>(m.w[l].size()) || bv.size() != static_cast<std::size_t>(m.b[l].size())) {
      throw Error(ErrorKind::Integrity, "network layer size does not match its dimensions");
    }
    std::copy(wv.begin(), wv.end(), m.w[l].data());
    std::copy(bv.begin(), bv.end(), m.b[l].data());
  }
  return m;
}

MlpModel zero_mlp(std::array<int, 4> dims) {
  for (int d : dims) {
    if (d <= 0) throw Error(ErrorKind::Config, "network dimensions must be positive");
  }
  MlpModel m;
  m.dims = dims;
  for (int l = 0; l < 3; ++l) {
    m.w[l] = Eigen::MatrixXd::Zero(dims[l], dims[l + 1]);
    m.b[l] = Eigen::VectorXd::Zero(dims[l + 1]);
  }
  return m;
}

MlpModel init_mlp(std::array<int, 4> dims, std::uint64_t seed) {
  MlpModel m = zero_mlp(dims);
  Rng rng(seed);
  for (int l = 0; l < 3; ++l) {
    const double limit = std::sqrt(6.0 / dims[l]);
    for (Eigen::Index i = 0; i < m.w[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < m.w[l].cols(); ++j) m.w[l](i, j) = rng.uniform(-limit, limit);
    }
  }
  return m;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.dims[0])) {
    throw Error(ErrorKind::Validation, "input has " + std::to_string(x.size()) + " features, model expects " +
                                           std::to_string(model.dims[0]));
  }
  RowMatrix row = Eigen::Map<const RowMatrix>(x.data(), 1, static_cast<Eigen::Index>(x.size()));
  const RowMatrix p = run(model, row).probs;
  return std::vector<double>(p.data(), p.data() + p.size());
}

RowMatrix forward_batch(const MlpModel& model, const RowMatrix& x) { return run(model, x).probs; }

double loss(const MlpModel& model, const RowMatrix& x, std::span<const int> y, double l2) {
  check_batch(model, x, y);
  return cross_entropy(run(model, x).probs, y) + l2 * weight_penalty(model);
}

namespace {

struct GradientWorkspace {
  ActiveInputs active;
  Activations act;
  RowMatrix d3;
  RowMatrix d2;
  RowMatrix d1;
  Eigen::MatrixXd w1_active;
};

// Writes the gradients of `loss` into g (already shaped like the model).
double gradients_into(const MlpModel& model, const RowMatrix& x, std::span<const int> y, double l2,
                      GradientWorkspace& ws, MlpGradients& g) {
  check_batch(model, x, y);
  run_into(model, x, ws.active, ws.act);
  const Activations& a = ws.act;
  const double n = static_cast<double>(x.rows());
  const double value = cross_entropy(a.probs, y) + l2 * weight_penalty(model);

  // d(mean CE)/d logits = (p - onehot) / n
  ws.d3 = a.probs;
  for (Eigen::Index i = 0; i < ws.d3.rows(); ++i) ws.d3(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  ws.d3 /= n;

  g.w[2].noalias() = a.h2.transpose() * ws.d3;
  g.b[2] = ws.d3.colwise().sum().transpose();

  ws.d2.resize(x.rows(), model.dims[2]);
  ws.d2.noalias() = ws.d3 * model.w[2].transpose();
  ws.d2 = ws.d2.cwiseProduct((a.h2.array() > 0.0).cast<double>().matrix());
  g.w[1].noalias() = a.h1.transpose() * ws.d2;
  g.b[1] = ws.d2.colwise().sum().transpose();

  ws.d1.resize(x.rows(), model.dims[1]);
  ws.d1.noalias() = ws.d2 * model.w[1].transpose();
  ws.d1 = ws.d1.cwiseProduct((a.h1.array() > 0.0).cast<double>().matrix());
  g.b[0] = ws.d1.colwise().sum().transpose();

  g.w[1] += 2.0 * l2 * model.w[1];
  g.w[2] += 2.0 * l2 * model.w[2];
  if (ws.active.sparse) {
    g.w[0] = 2.0 * l2 * model.w[0];
    ws.w1_active.resize(static_cast<Eigen::Index>(ws.active.columns.size()), model.dims[1]);
    ws.w1_active.noalias() = ws.active.x.transpose() * ws.d1;
    for (Eigen::Index h = 0; h < g.w[0].cols(); ++h) {
      for (std::size_t c = 0; c < ws.active.columns.size(); ++c) {
        g.w[0](ws.active.columns[c], h) += ws.w1_active(static_cast<Eigen::Index>(c), h);
      }
    }
  } else {
    g.w[0].noalias() = x.transpose() * ws.d1;
    g.w[0] += 2.0 * l2 * model.w[0];
  }
  return value;
}

}  // namespace

MlpGradients gradients(const MlpModel& model, const RowMatrix& x, std::span<const int> y, double l2,
                       double* loss_out) {
  GradientWorkspace ws;
  MlpGradients g = zero_mlp(model.dims);
  const double value = gradients_into(model, x, y, l2, ws, g);
  if (loss_out) *loss_out = value;
  return g;
}

int argmax_label(std::span<const double> probabilities) {
  int best = 0;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    if (probabilities[i] > probabilities[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

Prediction predict(const MlpModel& model, std::span<const double> x) {
  Prediction p;
  p.probabilities = forward(model, x);
  p.label = argmax_label(p.probabilities);
  return p;
}

TrainResult train_mlp(MlpModel model, const RowMatrix& x, std::span<const int> y,
                      std::span<const std::size_t> train_rows, std::span<const std::size_t> val_rows,
                      const MlpConfig& config) {
  config.validate();
  if (train_rows.empty()) throw Error(ErrorKind::Validation, "training split is empty");
  if (val_rows.empty()) throw Error(ErrorKind::Validation, "validation split is empty");
  if (x.cols() != model.dims[0]) {
    throw Error(ErrorKind::Validation, "feature width " + std::to_string(x.cols()) +
                                           " does not match the network input " + std::to_string(model.dims[0]));
  }

  Rng rng(config.seed);
  AdamState adam{zero_mlp(model.dims), zero_mlp(model.dims), 0};
  std::vector<std::size_t> order(train_rows.begin(), train_rows.end());
  const auto batch = static_cast<std::size_t>(config.batch_size);
  GradientWorkspace ws;
  MlpGradients g = zero_mlp(model.dims);
  RowMatrix xb;
  std::vector<int> yb;

  TrainResult result;
  result.model = model;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const auto rows = std::span<const std::size_t>(order).subspan(start, std::min(batch, order.size() - start));
      xb.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
      yb.clear();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        xb.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
        yb.push_back(y[rows[i]]);
      }
      loss_sum += gradients_into(model, xb, yb, config.l2, ws, g);
      ++batches;

      ++adam.step;
      const double c1 = 1.0 - std::pow(0.9, static_cast<double>(adam.step));
      const double c2 = 1.0 - std::pow(0.999, static_cast<double>(adam.step));
      for (int l = 0; l < 3; ++l) {
        adam_update(model.w[l], g.w[l], adam.m.w[l], adam.v.w[l], config.learning_rate, c1, c2);
        adam_update(model.b[l], g.b[l], adam.m.b[l], adam.v.b[l], config.learning_rate, c1, c2);
      }
    }

    const double val = chunked_loss(model, x, y, val_rows, config.l2);
    result.log.push_back({epoch, loss_sum / batches, val});
    if (!std::isfinite(val)) throw Error(ErrorKind::Internal, "validation loss diverged at epoch " + std::to_string(epoch));
    if (val < result.best_val_loss) {
      result.best_val_loss = val;
      result.best_epoch = epoch;
      result.model = model;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return result;
}

void write_training_log(std::ostream& out, std::span<const EpochLog> log) {
  out << "epoch\ttrain_loss\tval_loss\n";
  const auto old = out.precision(17);
  for (const auto& e : log) out << e.epoch << '\t' << e.train_loss << '\t' << e.val_loss << '\n';
  out.precision(old);
}

}  // namespace irony
