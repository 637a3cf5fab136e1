#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "irony/dataset.hpp"
#include "irony/mlp.hpp"
#include "irony/pipeline.hpp"

namespace irony {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Stratified k-fold assignment, one fold per row. Classes are visited in
// ascending label order; each class's rows are shuffled with one shared
// seeded stream and dealt round-robin, the dealing position carrying over
// from class to class so fold sizes differ by at most one.
std::vector<int> split_folds(std::span<const int> labels, int k, std::uint64_t seed);

struct EnsembleConfig {
  MlpConfig mlp;
  int folds = 10;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::vector<RawTweet> brown_corpus;  // extra unlabeled text for clustering
};

struct EnsembleModel {
  Task task = Task::A;
  std::shared_ptr<const FeaturePipeline> pipeline;
  std::vector<MlpModel> members;
  std::map<std::int64_t, int> fold_of;
  MlpConfig config;
  std::uint64_t seed = 0;
  std::vector<TrainResult> training;  // per member; not persisted
};

using ProgressFn = std::function<void(const std::string&)>;

// Fits the pipeline once on the whole corpus, then trains member i on every
// fold but i with fold i as the early-stopping set. Member i draws its
// initialization and batch order from seed + i. Up to `jobs` members train
// at once; results do not depend on `jobs`.
EnsembleModel train_ensemble(const LabeledCorpus& corpus, std::shared_ptr<const ResourceBundle> resources,
                             std::shared_ptr<const PosTagger> tagger, const FeatureConfig& features,
                             const EnsembleConfig& config, const SidecarTags* sidecar = nullptr,
                             const ProgressFn& progress = nullptr);

struct VoteResult {
  int label = 0;
  std::vector<int> counts;           // votes per class
  std::vector<double> mean_probs;    // mean softmax output per class
  std::vector<int> member_labels;
};

// Plurality; ties go to the highest mean probability, then the lowest id.
VoteResult vote_outputs(std::span<const Prediction> outputs, int classes);
// Same rule without the unanimity shortcut.
VoteResult tally_votes(std::span<const Prediction> outputs, int classes);

VoteResult vote(const EnsembleModel& model, std::span<const double> features);
VoteResult vote(const EnsembleModel& model, const RawTweet& tweet);

struct TweetPrediction {
  std::int64_t id = 0;
  VoteResult vote;
};

std::vector<TweetPrediction> predict_corpus(const EnsembleModel& model, const LabeledCorpus& corpus,
                                            const SidecarTags* sidecar = nullptr);

// "id \t label \t vote_0..vote_{m-1} \t prob_0..prob_{C-1}"
void write_predictions(std::ostream& out, std::span<const TweetPrediction> predictions, int members, int classes);
// id -> predicted label from a predictions file.
std::map<std::int64_t, int> read_predictions(const std::filesystem::path& path);

void save_model(const EnsembleModel& model, const std::filesystem::path& path);
EnsembleModel load_model(const std::filesystem::path& path);

struct CrossValidationResult {
  std::vector<double> accuracy;           // one per (repeat, fold)
  std::vector<double> majority_accuracy;  // training-majority class on the same test fold
  double mean_accuracy = 0.0;
  double mean_majority = 0.0;
};

// repeats x folds cross-validation of the whole system (pipeline + ensemble
// are refitted on every training part). Repeat r splits with seed + r.
CrossValidationResult cross_validate(const LabeledCorpus& corpus, std::shared_ptr<const ResourceBundle> resources,
                                     std::shared_ptr<const PosTagger> tagger, const FeatureConfig& features,
                                     const EnsembleConfig& config, int repeats, int folds,
                                     const ProgressFn& progress = nullptr);

}  // namespace irony
