#include "irony/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/rng.hpp"

namespace irony {

namespace {

// Batch order stream of member i, kept apart from its initialization stream.
std::uint64_t shuffle_seed(std::uint64_t member_seed) { return member_seed ^ 0x9E3779B97F4A7C15ULL; }

void save_mlp_config(BinaryWriter& w, const MlpConfig& c) {
  w.i64(c.hidden[0]);
  w.i64(c.hidden[1]);
  w.f64(c.learning_rate);
  w.f64(c.l2);
  w.i64(c.max_epochs);
  w.i64(c.patience);
  w.i64(c.batch_size);
  w.u64(c.seed);
}

MlpConfig load_mlp_config(BinaryReader& r) {
  MlpConfig c;
  c.hidden[0] = static_cast<int>(r.i64());
  c.hidden[1] = static_cast<int>(r.i64());
  c.learning_rate = r.f64();
  c.l2 = r.f64();
  c.max_epochs = static_cast<int>(r.i64());
  c.patience = static_cast<int>(r.i64());
  c.batch_size = static_cast<int>(r.i64());
  c.seed = r.u64();
  return c;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// failure by index.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, std::max(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<int> split_folds(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::Config, "fold count must be at least 1");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw Error(ErrorKind::Validation, "cannot split " + std::to_string(labels.size()) + " tweets into " +
                                           std::to_string(k) + " folds");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  std::vector<int> fold(labels.size(), 0);
  std::size_t dealt = 0;
  for (auto& [label, rows] : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    for (auto r : rows) fold[r] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
  }
  return fold;
}

EnsembleModel train_ensemble(const LabeledCorpus& corpus, std::shared_ptr<const ResourceBundle> resources,
                             std::shared_ptr<const PosTagger> tagger, const FeatureConfig& features,
                             const EnsembleConfig& config, const SidecarTags* sidecar, const ProgressFn& progress) {
  config.mlp.validate();
  if (config.folds < 2) throw Error(ErrorKind::Config, "the ensemble needs at least 2 folds");
  if (corpus.size() == 0) throw Error(ErrorKind::Validation, "training corpus is empty");
  const auto labels = corpus.labels();

  const auto pre = FeaturePipeline::preprocessor(resources, tagger);
  const auto prepared = pre.prepare_all(corpus.tweets, sidecar);
  if (progress) progress("prepared " + std::to_string(prepared.size()) + " tweets");

  FeatureConfig fc = features;
  fc.seed = config.seed;
  const auto brown_extra = pre.prepare_all(config.brown_corpus);
  auto pipeline =
      std::make_shared<const FeaturePipeline>(fit_pipeline(prepared, resources, tagger, fc, brown_extra));
  if (progress) progress("fitted feature pipeline, width " + std::to_string(pipeline->width()));
  const RowMatrix x = pipeline->transform_batch(prepared);

  EnsembleModel model;
  model.task = corpus.task;
  model.pipeline = pipeline;
  model.config = config.mlp;
  model.seed = config.seed;
  const auto fold = split_folds(labels, config.folds, config.seed);
  for (std::size_t i = 0; i < corpus.size(); ++i) model.fold_of[corpus.tweets[i].id] = fold[i];

  const std::array<int, 4> dims{static_cast<int>(pipeline->width()), config.mlp.hidden[0], config.mlp.hidden[1],
                                num_classes(corpus.task)};
  model.members.resize(static_cast<std::size_t>(config.folds));
  model.training.resize(static_cast<std::size_t>(config.folds));
  std::mutex log_mutex;
  parallel_for(config.folds, config.jobs, [&](int f) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> val_rows;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? val_rows : train_rows).push_back(i);
    const std::uint64_t member_seed = config.seed + static_cast<std::uint64_t>(f);
    MlpConfig mc = config.mlp;
    mc.seed = shuffle_seed(member_seed);
    try {
      auto result = train_mlp(init_mlp(dims, member_seed), x, labels, train_rows, val_rows, mc);
      model.members[static_cast<std::size_t>(f)] = result.model;
      if (progress) {
        std::lock_guard lock(log_mutex);
        progress("member " + std::to_string(f) + ": " + std::to_string(result.log.size()) + " epochs, best " +
                 std::to_string(result.best_epoch));
      }
      model.training[static_cast<std::size_t>(f)] = std::move(result);
    } catch (const Error& e) {
      throw Error(e.kind(), "fold " + std::to_string(f) + ": " + e.what());
    }
  });
  return model;
}

VoteResult tally_votes(std::span<const Prediction> outputs, int classes) {
  if (outputs.empty()) throw Error(ErrorKind::Internal, "no member outputs to vote on");
  VoteResult v;
  v.counts.assign(static_cast<std::size_t>(classes), 0);
  v.mean_probs.assign(static_cast<std::size_t>(classes), 0.0);
  for (const auto& p : outputs) {
    if (p.label < 0 || p.label >= classes || static_cast<int>(p.probabilities.size()) != classes) {
      throw Error(ErrorKind::Internal, "member output does not match the class count");
    }
    ++v.counts[static_cast<std::size_t>(p.label)];
    v.member_labels.push_back(p.label);
    for (int c = 0; c < classes; ++c) v.mean_probs[static_cast<std::size_t>(c)] += p.probabilities[static_cast<std::size_t>(c)];
  }
  for (double& m : v.mean_probs) m /= static_cast<double>(outputs.size());

  int best = 0;
  for (int c = 1; c < classes; ++c) {
    const auto i = static_cast<std::size_t>(c);
    const auto b = static_cast<std::size_t>(best);
    if (v.counts[i] > v.counts[b] || (v.counts[i] == v.counts[b] && v.mean_probs[i] > v.mean_probs[b])) best = c;
  }
  v.label = best;
  return v;
}

VoteResult vote_outputs(std::span<const Prediction> outputs, int classes) {
  if (outputs.empty()) throw Error(ErrorKind::Internal, "no member outputs to vote on");
  const int first = outputs.front().label;
  const bool unanimous = std::all_of(outputs.begin(), outputs.end(), [&](const Prediction& p) { return p.label == first; });
  if (!unanimous) return tally_votes(outputs, classes);
  VoteResult v = tally_votes(outputs, classes);
  v.label = first;
  return v;
}

VoteResult vote(const EnsembleModel& model, std::span<const double> features) {
  std::vector<Prediction> outputs;
  outputs.reserve(model.members.size());
  for (const auto& m : model.members) outputs.push_back(predict(m, features));
  return vote_outputs(outputs, num_classes(model.task));
}

VoteResult vote(const EnsembleModel& model, const RawTweet& tweet) {
  return vote(model, model.pipeline->transform(tweet).values);
}

std::vector<TweetPrediction> predict_corpus(const EnsembleModel& model, const LabeledCorpus& corpus,
                                            const SidecarTags* sidecar) {
  if (corpus.task != model.task) {
    throw Error(ErrorKind::TaskMismatch, std::string("model was trained for subtask ") + to_string(model.task) +
                                             " but the dataset is subtask " + to_string(corpus.task));
  }
  const auto prepared = model.pipeline->prepare_all(corpus.tweets, sidecar);
  const RowMatrix x = model.pipeline->transform_batch(prepared);
  const int classes = num_classes(model.task);

  std::vector<RowMatrix> probs;
  for (const auto& m : model.members) probs.push_back(forward_batch(m, x));
  std::vector<TweetPrediction> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<Prediction> outputs;
    for (const auto& p : probs) {
      Prediction pr;
      pr.probabilities.assign(p.row(i).data(), p.row(i).data() + classes);
      pr.label = argmax_label(pr.probabilities);
      outputs.push_back(std::move(pr));
    }
    out.push_back({corpus.tweets[static_cast<std::size_t>(i)].id, vote_outputs(outputs, classes)});
  }
  return out;
}

void write_predictions(std::ostream& out, std::span<const TweetPrediction> predictions, int members, int classes) {
  out << "id\tlabel";
  for (int m = 0; m < members; ++m) out << "\tvote_" << m;
  for (int c = 0; c < classes; ++c) out << "\tprob_" << c;
  out << '\n';
  const auto old = out.precision(17);
  for (const auto& p : predictions) {
    out << p.id << '\t' << p.vote.label;
    for (int l : p.vote.member_labels) out << '\t' << l;
    for (double v : p.vote.mean_probs) out << '\t' << v;
    out << '\n';
  }
  out.precision(old);
}

std::map<std::int64_t, int> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open predictions file " + path.string());
  std::map<std::int64_t, int> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line.rfind("id\t", 0) == 0)) continue;
    std::istringstream row(line);
    std::string id_text;
    std::string label_text;
    if (!std::getline(row, id_text, '\t') || !std::getline(row, label_text, '\t')) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected id and label columns");
    }
    try {
      std::size_t used = 0;
      const auto id = std::stoll(id_text, &used);
      if (used != id_text.size()) throw std::invalid_argument("id");
      const int label = std::stoi(label_text, &used);
      if (used != label_text.size()) throw std::invalid_argument("label");
      if (!out.emplace(id, label).second) {
        throw Error(ErrorKind::Validation, path.string() + ":" + std::to_string(lineno) + ": duplicate id " + id_text);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": malformed id or label");
    }
  }
  return out;
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
  if (!model.pipeline || model.members.empty()) throw Error(ErrorKind::Internal, "cannot save an unfitted model");
  BinaryWriter payload;
  BinaryWriter meta;
  meta.str(to_string(model.task));
  meta.u64(model.seed);
  save_mlp_config(meta, model.config);
  payload.section("META", meta);

  BinaryWriter pipe;
  model.pipeline->save(pipe);
  payload.section("PIPE", pipe);

  BinaryWriter members;
  members.u64(model.members.size());
  for (const auto& m : model.members) m.save(members);
  payload.section("MEMB", members);

  BinaryWriter folds;
  folds.u64(model.fold_of.size());
  for (const auto& [id, f] : model.fold_of) {
    folds.i64(id);
    folds.u32(static_cast<std::uint32_t>(f));
  }
  payload.section("FOLD", folds);
  write_container(path, kModelFormatVersion, payload.bytes());
}

EnsembleModel load_model(const std::filesystem::path& path) {
  const std::string payload = read_container(path, kModelFormatVersion);
  BinaryReader r(payload);
  EnsembleModel model;
  try {
    auto meta = r.section("META");
    model.task = parse_task(meta.str());
    model.seed = meta.u64();
    model.config = load_mlp_config(meta);

    auto pipe = r.section("PIPE");
    model.pipeline = std::make_shared<const FeaturePipeline>(FeaturePipeline::load(pipe));

    auto members = r.section("MEMB");
    const auto n = members.count(16);
    for (std::uint64_t i = 0; i < n; ++i) model.members.push_back(MlpModel::load(members));

    auto folds = r.section("FOLD");
    const auto nf = folds.count(12);
    for (std::uint64_t i = 0; i < nf; ++i) {
      const auto id = folds.i64();
      model.fold_of[id] = static_cast<int>(folds.u32());
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Integrity) throw;
    throw Error(ErrorKind::Integrity, path.string() + ": " + e.what());
  }
  if (model.members.empty()) throw Error(ErrorKind::Integrity, path.string() + ": model has no members");
  for (const auto& m : model.members) {
    if (static_cast<std::size_t>(m.input_dim()) != model.pipeline->width() || m.num_classes() != num_classes(model.task)) {
      throw Error(ErrorKind::Integrity, path.string() + ": member shape does not match the pipeline");
    }
  }
  return model;
}

CrossValidationResult cross_validate(const LabeledCorpus& corpus, std::shared_ptr<const ResourceBundle> resources,
                                     std::shared_ptr<const PosTagger> tagger, const FeatureConfig& features,
                                     const EnsembleConfig& config, int repeats, int folds, const ProgressFn& progress) {
  if (repeats < 1 || folds < 2) throw Error(ErrorKind::Config, "cross-validation needs repeats >= 1 and folds >= 2");
  const auto labels = corpus.labels();
  CrossValidationResult result;
  for (int r = 0; r < repeats; ++r) {
    const auto split = split_folds(labels, folds, config.seed + static_cast<std::uint64_t>(r));
    for (int f = 0; f < folds; ++f) {
      LabeledCorpus train{{}, corpus.task, corpus.provenance};
      LabeledCorpus test{{}, corpus.task, corpus.provenance};
      for (std::size_t i = 0; i < corpus.size(); ++i) (split[i] == f ? test : train).tweets.push_back(corpus.tweets[i]);

      EnsembleConfig ec = config;
      ec.seed = config.seed + 1000 * static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(f);
      const auto model = train_ensemble(train, resources, tagger, features, ec);
      const auto preds = predict_corpus(model, test);

      std::size_t correct = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i].vote.label == *test.tweets[i].label;
      const auto counts = train.class_counts();
      int majority = counts.begin()->first;
      for (const auto& [label, n] : counts) {
        if (n > counts.at(majority)) majority = label;
      }
      std::size_t base = 0;
      for (const auto& t : test.tweets) base += *t.label == majority;

      const double acc = static_cast<double>(correct) / static_cast<double>(test.size());
      const double maj = static_cast<double>(base) / static_cast<double>(test.size());
      result.accuracy.push_back(acc);
      result.majority_accuracy.push_back(maj);
      if (progress) {
        std::ostringstream msg;
        msg << "repeat " << r << " fold " << f << ": accuracy " << std::fixed << std::setprecision(4) << acc
            << ", majority " << maj;
        progress(msg.str());
      }
    }
  }
  for (std::size_t i = 0; i < result.accuracy.size(); ++i) {
    result.mean_accuracy += result.accuracy[i] / static_cast<double>(result.accuracy.size());
    result.mean_majority += result.majority_accuracy[i] / static_cast<double>(result.accuracy.size());
  }
  return result;
}

}  // namespace irony
