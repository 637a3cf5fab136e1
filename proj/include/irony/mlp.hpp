#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "irony/task.hpp"

namespace irony {

class BinaryWriter;
class BinaryReader;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct MlpConfig {
  std::array<int, 2> hidden{800, 400};
  double learning_rate = 1e-4;
  double l2 = 1e-5;
  int max_epochs = 100;
  int patience = 30;
  int batch_size = 32;
  std::uint64_t seed = 0;

  // Hidden sizes (800, 400) for subtask A and (800, 300) for B.
  static MlpConfig for_task(Task task);
  void validate() const;  // config error on non-positive values
};

// input -> h1 -> h2 -> classes. Weight matrices are fan_in x fan_out so a
// layer computes W^T x + b.
struct MlpModel {
  std::array<int, 4> dims{};
  std::array<Eigen::MatrixXd, 3> w;
  std::array<Eigen::VectorXd, 3> b;

  int input_dim() const { return dims[0]; }
  int num_classes() const { return dims[3]; }
  bool all_finite() const;

  void save(BinaryWriter& out) const;
  static MlpModel load(BinaryReader& in);
};

using MlpGradients = MlpModel;

// He-uniform weights, U(-sqrt(6/fan_in), sqrt(6/fan_in)), filled layer by
// layer in row-major order from one seeded stream; zero biases.
MlpModel init_mlp(std::array<int, 4> dims, std::uint64_t seed);
MlpModel zero_mlp(std::array<int, 4> dims);

std::vector<double> forward(const MlpModel& model, std::span<const double> x);
// Row-wise class probabilities for a batch.
RowMatrix forward_batch(const MlpModel& model, const RowMatrix& x);

// Mean cross-entropy (log floored at 1e-300) + l2 * sum of squared weights.
double loss(const MlpModel& model, const RowMatrix& x, std::span<const int> y, double l2);
// Analytic gradients of `loss`; the ReLU derivative at 0 is 0. Returns the
// loss through `loss_out` when given.
MlpGradients gradients(const MlpModel& model, const RowMatrix& x, std::span<const int> y, double l2,
                       double* loss_out = nullptr);

struct Prediction {
  int label = 0;
  std::vector<double> probabilities;
};

// Arg-max with ties to the lowest class id.
int argmax_label(std::span<const double> probabilities);
Prediction predict(const MlpModel& model, std::span<const double> x);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // mean of mini-batch losses
  double val_loss = 0.0;    // includes the l2 penalty
};

struct TrainResult {
  MlpModel model;  // best-validation parameters
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_val_loss = 0.0;
};

// Adam (0.9, 0.999, 1e-8) on seeded shuffled mini-batches; validation loss
// after each epoch; stops once `patience` consecutive epochs fail to improve
// on the best validation loss, or at max_epochs.
TrainResult train_mlp(MlpModel model, const RowMatrix& x, std::span<const int> y,
                      std::span<const std::size_t> train_rows, std::span<const std::size_t> val_rows,
                      const MlpConfig& config);

void write_training_log(std::ostream& out, std::span<const EpochLog> log);

}  // namespace irony
