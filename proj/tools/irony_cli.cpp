// irony: train, apply and evaluate the tweet irony classifier.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "irony/brown.hpp"
#include "irony/config.hpp"
#include "irony/dataset.hpp"
#include "irony/ensemble.hpp"
#include "irony/error.hpp"
#include "irony/metrics.hpp"
#include "irony/normalize.hpp"
#include "irony/pipeline.hpp"
#include "irony/pos_tagger.hpp"
#include "irony/resources.hpp"

namespace {

using namespace irony;
namespace fs = std::filesystem;

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kResource = 3,
  kInvalidData = 4,
  kTaskMismatch = 5,
  kConfig = 6,
  kIntegrity = 7,
  kIo = 8,
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Validation: return kInvalidData;
    case ErrorKind::Resource: return kResource;
    case ErrorKind::Config: return kConfig;
    case ErrorKind::Integrity: return kIntegrity;
    case ErrorKind::Io: return kIo;
    case ErrorKind::TaskMismatch: return kTaskMismatch;
    case ErrorKind::Internal: return kOther;
  }
  return kOther;
}

// Flag values collected before the config file is read; applied on top.
struct Overrides {
  std::string config_file;
  std::vector<std::string> sets;
  std::string task, data_dir, embeddings, tagger, sidecar;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<int> folds;
  bool no_lexical = false, no_syntactic = false, no_semantic = false, no_polarity = false;
  bool verbose = false;
};

RunConfig resolve(const Overrides& o) {
  RunConfig c;
  if (!o.config_file.empty()) c.apply(read_config_file(o.config_file));
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.task.empty()) c.task = parse_task(o.task);
  if (!o.data_dir.empty()) c.data_dir = o.data_dir;
  if (!o.embeddings.empty()) c.embeddings = o.embeddings;
  if (!o.tagger.empty()) c.pos_tagger = o.tagger;
  if (!o.sidecar.empty()) c.pos_sidecar = o.sidecar;
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.folds) c.folds = *o.folds;
  if (o.no_lexical) c.features.lexical = false;
  if (o.no_syntactic) c.features.syntactic = false;
  if (o.no_semantic) c.features.semantic = false;
  if (o.no_polarity) c.features.polarity = false;
  return c;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_file, "Config file ([section] key = value)");
  cmd->add_option("--set", o.sets, "Override a config key: section.key=value")->take_all();
  cmd->add_option("-t,--task", o.task, "Subtask A (binary) or B (4-class)");
  cmd->add_option("--data-dir", o.data_dir, "Directory with the shipped resource files");
  cmd->add_option("--embeddings", o.embeddings, "Word embedding text file (token + reals per line)");
  cmd->add_option("--pos-tagger", o.tagger, "POS tagger weights file");
  cmd->add_option("--pos-tags", o.sidecar, "Sidecar TSV of precomputed POS tags (id \\t tags)");
  cmd->add_option("--seed", o.seed, "Seed for every random choice");
  cmd->add_flag("-v,--verbose", o.verbose, "Progress on stderr");
}

void add_training(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-j,--jobs", o.jobs, "Members trained concurrently (1 = reference mode)");
  cmd->add_option("--folds", o.folds, "Ensemble folds");
  cmd->add_flag("--no-lexical", o.no_lexical, "Drop the n-gram and surface-count block");
  cmd->add_flag("--no-syntactic", o.no_syntactic, "Drop the POS block");
  cmd->add_flag("--no-semantic", o.no_semantic, "Drop the embedding, LSI and Brown block");
  cmd->add_flag("--no-polarity", o.no_polarity, "Drop the polarity block");
}

struct Loaded {
  std::shared_ptr<const ResourceBundle> resources;
  std::shared_ptr<const PosTagger> tagger;
};

Loaded load_all(const RunConfig& c) {
  return {std::make_shared<const ResourceBundle>(load_resources(c.resource_paths())),
          std::make_shared<const PosTagger>(PosTagger::load(c.tagger_path()))};
}

std::optional<SidecarTags> load_sidecar(const RunConfig& c, const LabeledCorpus& corpus) {
  if (c.pos_sidecar.empty()) return std::nullopt;
  auto tags = read_sidecar_tags(c.pos_sidecar);
  std::vector<std::int64_t> ids;
  for (const auto& t : corpus.tweets) ids.push_back(t.id);
  check_sidecar_coverage(tags, ids);
  return tags;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

ProgressFn progress_fn(bool verbose) {
  if (!verbose) return nullptr;
  const auto start = std::chrono::steady_clock::now();
  return [start](const std::string& msg) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "[" << std::fixed << std::setprecision(1) << s << "s] " << msg << std::endl;
  };
}

int cmd_train(const Overrides& o, const std::string& train, const std::string& model_out,
              const std::string& brown_corpus, const std::string& log_dir) {
  RunConfig c = resolve(o);
  if (!train.empty()) c.train = train;
  if (!model_out.empty()) c.model = model_out;
  if (c.train.empty()) throw Error(ErrorKind::Config, "no training data (--train or data.train)");
  if (c.model.empty()) throw Error(ErrorKind::Config, "no model output path (--model or data.model)");

  const auto corpus = load_dataset(c.train, c.task);
  const auto res = load_all(c);
  const auto sidecar = load_sidecar(c, corpus);
  EnsembleConfig ec = c.ensemble();
  if (!brown_corpus.empty()) {
    std::ifstream in(brown_corpus);
    if (!in) throw Error(ErrorKind::Resource, "cannot open Brown corpus " + brown_corpus);
    std::string line;
    std::int64_t id = 0;
    while (std::getline(in, line)) ec.brown_corpus.push_back({id++, line, std::nullopt});
  }
  const auto model = train_ensemble(corpus, res.resources, res.tagger, c.features, ec,
                                    sidecar ? &*sidecar : nullptr, progress_fn(o.verbose));
  save_model(model, c.model);
  if (!log_dir.empty()) {
    fs::create_directories(log_dir);
    for (std::size_t i = 0; i < model.training.size(); ++i) {
      std::ostringstream log;
      write_training_log(log, model.training[i].log);
      emit((fs::path(log_dir) / ("member_" + std::to_string(i) + ".tsv")).string(), log.str());
    }
  }
  std::cerr << "trained " << model.members.size() << " members on " << corpus.size() << " tweets, "
            << model.pipeline->width() << " features -> " << c.model.string() << '\n';
  return kOk;
}

int cmd_predict(const Overrides& o, const std::string& model_path, const std::string& input,
                const std::string& output) {
  RunConfig c = resolve(o);
  const auto model = load_model(model_path.empty() ? c.model : fs::path(model_path));
  const Task task = o.task.empty() ? model.task : c.task;
  if (task != model.task) {
    throw Error(ErrorKind::TaskMismatch, std::string("model was trained for subtask ") + to_string(model.task) +
                                             " but --task is " + to_string(task));
  }
  const auto corpus = load_dataset(input.empty() ? c.test : fs::path(input), task, LabelPolicy::Optional);
  const auto sidecar = load_sidecar(c, corpus);
  const auto preds = predict_corpus(model, corpus, sidecar ? &*sidecar : nullptr);
  std::ostringstream out;
  write_predictions(out, preds, static_cast<int>(model.members.size()), num_classes(model.task));
  emit(output, out.str());
  return kOk;
}

int cmd_evaluate(const Overrides& o, const std::string& predictions, const std::string& gold_path,
                 const std::string& format, const std::string& macro, const std::string& output) {
  RunConfig c = resolve(o);
  const auto gold = load_dataset(gold_path.empty() ? c.test : fs::path(gold_path), c.task);
  const auto pred = read_predictions(predictions);
  std::vector<int> g;
  std::vector<int> p;
  for (const auto& t : gold.tweets) {
    const auto it = pred.find(t.id);
    if (it == pred.end()) throw Error(ErrorKind::Validation, "no prediction for tweet " + std::to_string(t.id));
    g.push_back(*t.label);
    p.push_back(it->second);
  }
  if (pred.size() != gold.size()) {
    throw Error(ErrorKind::Validation, "predictions cover " + std::to_string(pred.size()) + " tweets, gold has " +
                                           std::to_string(gold.size()));
  }
  const auto report = evaluate(g, p, c.task, macro == "f1-of-means" ? MacroMode::F1OfMeans : MacroMode::MeanOfF1);
  std::ostringstream out;
  if (format == "tsv") {
    write_report_tsv(out, report);
  } else {
    write_report_text(out, report);
  }
  emit(output, out.str());
  return kOk;
}

int cmd_normalize(const Overrides& o, const std::string& input, const std::string& output) {
  RunConfig c = resolve(o);
  const auto corpus = load_dataset(input, c.task, LabelPolicy::Optional);
  const auto resources = load_resources(c.resource_paths());
  const Normalizer norm(resources);
  std::ostringstream out;
  out << "Tweet index\tLabel\tTweet text\n";
  for (const auto& t : corpus.tweets) {
    out << t.id << '\t';
    if (t.label) out << *t.label;
    out << '\t' << norm.normalize(t.text) << '\n';
  }
  emit(output, out.str());
  return kOk;
}

int cmd_brown(const Overrides& o, const std::string& input, int clusters, int min_count, const std::string& output) {
  RunConfig c = resolve(o);
  const auto corpus = load_dataset(input, c.task, LabelPolicy::Optional);
  const auto resources = std::make_shared<const ResourceBundle>(load_resources(c.resource_paths()));
  const Normalizer norm(*resources);
  std::vector<TokenizedTweet> tweets;
  for (const auto& t : corpus.tweets) tweets.push_back(make_tokenized(t.id, norm.normalize(t.text)));
  const auto stats = collect_bigram_stats(tweets, min_count);
  const auto clustering = train_brown(stats, clusters);
  std::ostringstream out;
  clustering.write_tsv(out);
  emit(output, out.str());
  std::cerr << stats.words.size() << " words, " << clusters << " clusters, AMI " << clustering.ami << '\n';
  return kOk;
}

int cmd_features(const Overrides& o, const std::string& model_path, const std::string& input,
                 const std::string& output) {
  RunConfig c = resolve(o);
  const auto model = load_model(model_path.empty() ? c.model : fs::path(model_path));
  const auto corpus = load_dataset(input, model.task, LabelPolicy::Optional);
  const auto sidecar = load_sidecar(c, corpus);
  const auto prepared = model.pipeline->prepare_all(corpus.tweets, sidecar ? &*sidecar : nullptr);
  const RowMatrix x = model.pipeline->transform_batch(prepared);
  std::vector<std::int64_t> ids;
  for (const auto& t : corpus.tweets) ids.push_back(t.id);
  std::ostringstream out;
  write_feature_matrix(out, model.pipeline->layout(), ids, x);
  emit(output, out.str());
  return kOk;
}

int cmd_cv(const Overrides& o, const std::string& train, int repeats, int folds) {
  RunConfig c = resolve(o);
  if (!train.empty()) c.train = train;
  const auto corpus = load_dataset(c.train, c.task);
  const auto res = load_all(c);
  const auto result = cross_validate(corpus, res.resources, res.tagger, c.features, c.ensemble(), repeats, folds,
                                     progress_fn(o.verbose));
  std::cout << "repeat\tfold\taccuracy\tmajority\n";
  for (std::size_t i = 0; i < result.accuracy.size(); ++i) {
    std::cout << i / static_cast<std::size_t>(folds) << '\t' << i % static_cast<std::size_t>(folds) << '\t'
              << result.accuracy[i] << '\t' << result.majority_accuracy[i] << '\n';
  }
  std::cout << "mean\t-\t" << result.mean_accuracy << '\t' << result.mean_majority << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tweet irony detection: feature pipeline + MLP voting ensemble"};
  app.require_subcommand(1);
  Overrides o;
  std::string train, model, input, output, predictions, gold, brown_corpus, log_dir;
  std::string format = "text", macro = "mean-f1";
  int clusters = 100, min_count = 1, repeats = 5, cv_folds = 2;

  auto* t = app.add_subcommand("train", "Fit the pipeline and the fold ensemble, write a model file");
  add_common(t, o);
  add_training(t, o);
  t->add_option("--train", train, "Training dataset TSV");
  t->add_option("-m,--model", model, "Model file to write");
  t->add_option("--brown-corpus", brown_corpus, "Extra unlabeled text for Brown clustering, one tweet per line");
  t->add_option("--log-dir", log_dir, "Write per-member training logs here");

  auto* p = app.add_subcommand("predict", "Label a dataset with a trained model");
  add_common(p, o);
  p->add_option("-m,--model", model, "Model file");
  p->add_option("-i,--input", input, "Dataset TSV (labels optional)");
  p->add_option("-o,--output", output, "Predictions TSV (default stdout)");

  auto* e = app.add_subcommand("evaluate", "Score predictions against gold labels");
  add_common(e, o);
  e->add_option("-p,--predictions", predictions, "Predictions TSV")->required();
  e->add_option("-g,--gold", gold, "Gold dataset TSV");
  e->add_option("--format", format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
  e->add_option("--macro", macro, "Subtask B macro rule")->check(CLI::IsMember({"mean-f1", "f1-of-means"}));
  e->add_option("-o,--output", output, "Report file (default stdout)");

  auto* n = app.add_subcommand("normalize", "Write normalized tweets");
  add_common(n, o);
  n->add_option("-i,--input", input, "Dataset TSV")->required();
  n->add_option("-o,--output", output, "Output TSV (default stdout)");

  auto* b = app.add_subcommand("brown", "Cluster the words of a corpus");
  add_common(b, o);
  b->add_option("-i,--input", input, "Dataset TSV")->required();
  b->add_option("-C,--clusters", clusters, "Number of clusters");
  b->add_option("--min-count", min_count, "Drop words rarer than this");
  b->add_option("-o,--output", output, "Cluster TSV (default stdout)");

  auto* f = app.add_subcommand("features", "Export the feature matrix of a dataset");
  add_common(f, o);
  f->add_option("-m,--model", model, "Model file");
  f->add_option("-i,--input", input, "Dataset TSV")->required();
  f->add_option("-o,--output", output, "Matrix file (default stdout)");

  auto* v = app.add_subcommand("cv", "Repeated k-fold cross-validation of the whole system");
  add_common(v, o);
  add_training(v, o);
  v->add_option("--train", train, "Labeled dataset TSV");
  v->add_option("--repeats", repeats, "Repetitions");
  v->add_option("--cv-folds", cv_folds, "Outer folds per repetition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (t->parsed()) return cmd_train(o, train, model, brown_corpus, log_dir);
    if (p->parsed()) return cmd_predict(o, model, input, output);
    if (e->parsed()) return cmd_evaluate(o, predictions, gold, format, macro, output);
    if (n->parsed()) return cmd_normalize(o, input, output);
    if (b->parsed()) return cmd_brown(o, input, clusters, min_count, output);
    if (f->parsed()) return cmd_features(o, model, input, output);
    if (v->parsed()) return cmd_cv(o, train, repeats, cv_folds);
  } catch (const Error& err) {
    std::cerr << "irony: " << to_string(err.kind()) << ": " << err.what() << '\n';
    return exit_code(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "irony: error: " << err.what() << '\n';
    return kOther;
  }
  return kUsage;
}
