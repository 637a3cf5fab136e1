#include "irony/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/polarity.hpp"
#include "irony/semantic.hpp"

namespace irony {

namespace {

constexpr double kStdFloor = 1e-12;

template <typename F>
auto attributed(std::string_view block, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(block) + ": " + e.what());
  }
}

void append(std::vector<double>& out, std::span<const double> block) { out.insert(out.end(), block.begin(), block.end()); }

}  // namespace

void FeatureConfig::validate() const {
  if (lexical && (word_top_k <= 0 || char_top_k <= 0)) throw Error(ErrorKind::Config, "n-gram top_k must be positive");
  if (!lexical && !syntactic && !semantic && !polarity) {
    throw Error(ErrorKind::Config, "every feature block is disabled");
  }
  if (max_n < 1) throw Error(ErrorKind::Config, "max n-gram order must be at least 1");
  if (semantic) {
    if (lsi_dim < 1) throw Error(ErrorKind::Config, "LSI dimension must be at least 1");
    for (int c : brown_sizes) {
      if (c <= 0) throw Error(ErrorKind::Config, "Brown cluster counts must be positive");
    }
  }
}

void FeatureConfig::save(BinaryWriter& w) const {
  w.i64(word_top_k);
  w.i64(char_top_k);
  w.i64(max_n);
  w.u64(brown_sizes.size());
  for (int c : brown_sizes) w.i64(c);
  w.i64(brown_min_count);
  w.i64(lsi_dim);
  w.i64(lsi_min_df);
  w.u8(lexical);
  w.u8(syntactic);
  w.u8(semantic);
  w.u8(polarity);
  w.u64(seed);
}

FeatureConfig FeatureConfig::load(BinaryReader& r) {
  FeatureConfig c;
  c.word_top_k = static_cast<int>(r.i64());
  c.char_top_k = static_cast<int>(r.i64());
  c.max_n = static_cast<int>(r.i64());
  c.brown_sizes.resize(r.count(8));
  for (int& s : c.brown_sizes) s = static_cast<int>(r.i64());
  c.brown_min_count = static_cast<int>(r.i64());
  c.lsi_dim = static_cast<int>(r.i64());
  c.lsi_min_df = static_cast<int>(r.i64());
  c.lexical = r.u8() != 0;
  c.syntactic = r.u8() != 0;
  c.semantic = r.u8() != 0;
  c.polarity = r.u8() != 0;
  c.seed = r.u64();
  return c;
}

void FeatureLayout::add(std::string family, std::string name, std::size_t width, bool dense) {
  blocks_.push_back({std::move(family), std::move(name), width_, width, dense});
  width_ += width;
}

std::size_t FeatureLayout::family_width(std::string_view family) const {
  std::size_t w = 0;
  for (const auto& b : blocks_) {
    if (b.family == family) w += b.width;
  }
  return w;
}

const BlockSpec* FeatureLayout::find(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

FeaturePipeline FeaturePipeline::preprocessor(std::shared_ptr<const ResourceBundle> resources,
                                              std::shared_ptr<const PosTagger> tagger) {
  if (!resources || !tagger) throw Error(ErrorKind::Internal, "pipeline needs resources and a tagger");
  FeaturePipeline p;
  p.resources_ = std::move(resources);
  p.tagger_ = std::move(tagger);
  p.normalizer_ = std::make_shared<const Normalizer>(*p.resources_);
  return p;
}

TokenizedTweet FeaturePipeline::prepare(const RawTweet& raw, const SidecarTags* sidecar) const {
  TokenizedTweet t = make_tokenized(raw.id, normalizer_->normalize(raw.text));
  if (sidecar) {
    if (const auto it = sidecar->find(raw.id); it != sidecar->end()) {
      if (it->second.size() != t.tokens.size()) {
        throw Error(ErrorKind::Validation, "sidecar tags for tweet " + std::to_string(raw.id) + " have " +
                                               std::to_string(it->second.size()) + " tags for " +
                                               std::to_string(t.tokens.size()) + " tokens");
      }
      t.tags = it->second;
      return t;
    }
  }
  t.tags = tagger_->tag(t.tokens);
  return t;
}

std::vector<TokenizedTweet> FeaturePipeline::prepare_all(std::span<const RawTweet> tweets,
                                                         const SidecarTags* sidecar) const {
  std::vector<TokenizedTweet> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) out.push_back(prepare(t, sidecar));
  return out;
}

void FeaturePipeline::build_layout() {
  layout_ = FeatureLayout{};
  if (config_.lexical) {
    layout_.add("lexical", "word_ngrams", word_vocab_.size(), false);
    layout_.add("lexical", "char_ngrams", char_vocab_.size(), false);
    layout_.add("lexical", "surface_counts", 2, true);
  }
  if (config_.syntactic) layout_.add("syntactic", "pos_tags", kNumPosTags, false);
  if (config_.semantic) {
    layout_.add("semantic", "embedding_avg", resources_->embeddings.dim(), true);
    layout_.add("semantic", "lsi", static_cast<std::size_t>(lsi_.dim()), true);
    std::size_t clusters = 0;
    for (const auto& c : clusterings_) clusters += static_cast<std::size_t>(c.num_clusters);
    layout_.add("semantic", "brown_clusters", clusters, true);
  }
  if (config_.polarity) layout_.add("polarity", "polarity", kPolarityWidth, true);

  dense_columns_.clear();
  for (const auto& b : layout_.blocks()) {
    if (!b.dense) continue;
    for (std::size_t c = 0; c < b.width; ++c) dense_columns_.push_back(b.offset + c);
  }
}

std::vector<double> FeaturePipeline::raw_features(const TokenizedTweet& tweet) const {
  std::vector<double> row;
  row.reserve(layout_.width());
  if (config_.lexical) {
    append(row, vectorize_ngrams(tweet, word_vocab_));
    append(row, vectorize_ngrams(tweet, char_vocab_));
    append(row, surface_counts(tweet));
  }
  if (config_.syntactic) append(row, vectorize_pos(tweet, pos_vocab_));
  if (config_.semantic) append(row, semantic_block(tweet, resources_->embeddings, lsi_, clusterings_));
  if (config_.polarity) append(row, polarity_block(tweet, *resources_));
  if (row.size() != layout_.width()) throw Error(ErrorKind::Internal, "feature row does not match the layout width");
  return row;
}

void FeaturePipeline::scale(std::span<double> row) const {
  for (std::size_t i = 0; i < dense_columns_.size(); ++i) {
    double& v = row[dense_columns_[i]];
    v = std_[i] < kStdFloor ? 0.0 : (v - mean_[i]) / std_[i];
  }
}

FeatureVector FeaturePipeline::transform(const TokenizedTweet& tweet) const {
  FeatureVector fv{tweet.id, raw_features(tweet)};
  scale(fv.values);
  return fv;
}

FeatureVector FeaturePipeline::transform(const RawTweet& raw) const { return transform(prepare(raw)); }

RowMatrix FeaturePipeline::transform_batch(std::span<const TokenizedTweet> tweets) const {
  RowMatrix x(static_cast<Eigen::Index>(tweets.size()), static_cast<Eigen::Index>(width()));
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const auto fv = transform(tweets[i]);
    std::copy(fv.values.begin(), fv.values.end(), x.row(static_cast<Eigen::Index>(i)).data());
  }
  return x;
}

FeaturePipeline fit_pipeline(std::span<const TokenizedTweet> prepared, std::shared_ptr<const ResourceBundle> resources,
                             std::shared_ptr<const PosTagger> tagger, const FeatureConfig& config,
                             std::span<const TokenizedTweet> brown_extra) {
  config.validate();
  if (prepared.empty()) throw Error(ErrorKind::Validation, "cannot fit features on an empty corpus");
  FeaturePipeline p = FeaturePipeline::preprocessor(std::move(resources), std::move(tagger));
  p.config_ = config;

  if (config.lexical) {
    p.word_vocab_ = attributed("lexical/word", [&] {
      return fit_ngram_vocab(prepared, NgramLevel::Word, config.word_top_k, config.max_n);
    });
    p.char_vocab_ = attributed("lexical/char", [&] {
      return fit_ngram_vocab(prepared, NgramLevel::Char, config.char_top_k, config.max_n);
    });
  }
  if (config.syntactic) p.pos_vocab_ = fit_pos_vocab(prepared);
  if (config.semantic) {
    LsiOptions lsi_options;
    lsi_options.min_df = config.lsi_min_df;
    lsi_options.randomized.seed = config.seed;
    p.lsi_ = attributed("semantic/lsi", [&] { return fit_lsi_padded(prepared, config.lsi_dim, lsi_options); });
    std::vector<TokenizedTweet> brown_corpus(prepared.begin(), prepared.end());
    brown_corpus.insert(brown_corpus.end(), brown_extra.begin(), brown_extra.end());
    const auto stats =
        attributed("semantic/brown", [&] { return collect_bigram_stats(brown_corpus, config.brown_min_count); });
    for (int c : config.brown_sizes) {
      p.clusterings_.push_back(attributed("semantic/brown", [&] { return train_brown(stats, c); }));
    }
  }
  p.build_layout();

  // Dense-column statistics over the training rows (population std).
  const std::size_t d = p.dense_columns_.size();
  std::vector<double> sum(d, 0.0);
  std::vector<std::vector<double>> columns(d);
  for (const auto& t : prepared) {
    const auto row = p.raw_features(t);
    for (std::size_t i = 0; i < d; ++i) columns[i].push_back(row[p.dense_columns_[i]]);
  }
  const auto n = static_cast<double>(prepared.size());
  p.mean_.assign(d, 0.0);
  p.std_.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (double v : columns[i]) s += v;
    const double mean = s / n;
    double ss = 0.0;
    for (double v : columns[i]) ss += (v - mean) * (v - mean);
    p.mean_[i] = mean;
    p.std_[i] = std::sqrt(ss / n);
  }
  return p;
}

FeaturePipeline fit_pipeline(const LabeledCorpus& corpus, std::shared_ptr<const ResourceBundle> resources,
                             std::shared_ptr<const PosTagger> tagger, const FeatureConfig& config,
                             const SidecarTags* sidecar) {
  const auto pre = FeaturePipeline::preprocessor(resources, tagger);
  const auto prepared = pre.prepare_all(corpus.tweets, sidecar);
  return fit_pipeline(prepared, std::move(resources), std::move(tagger), config);
}

void FeaturePipeline::save(BinaryWriter& w) const {
  BinaryWriter cfg;
  config_.save(cfg);
  w.section("FCFG", cfg);

  BinaryWriter res;
  resources_->save(res);
  w.section("RSRC", res);

  BinaryWriter tag;
  tagger_->save(tag);
  w.section("TAGR", tag);

  BinaryWriter vocab;
  word_vocab_.save(vocab);
  char_vocab_.save(vocab);
  pos_vocab_.save(vocab);
  w.section("VOCB", vocab);

  BinaryWriter sem;
  lsi_.save(sem);
  sem.u64(clusterings_.size());
  for (const auto& c : clusterings_) c.save(sem);
  w.section("SEMA", sem);

  BinaryWriter sc;
  sc.f64s(mean_);
  sc.f64s(std_);
  w.section("SCAL", sc);
}

FeaturePipeline FeaturePipeline::load(BinaryReader& r) {
  auto cfg = r.section("FCFG");
  const FeatureConfig config = FeatureConfig::load(cfg);
  auto res = r.section("RSRC");
  auto resources = std::make_shared<const ResourceBundle>(ResourceBundle::load(res));
  auto tag = r.section("TAGR");
  auto tagger = std::make_shared<const PosTagger>(PosTagger::load(tag));

  FeaturePipeline p = preprocessor(std::move(resources), std::move(tagger));
  p.config_ = config;
  auto vocab = r.section("VOCB");
  p.word_vocab_ = NgramVocabulary::load(vocab);
  p.char_vocab_ = NgramVocabulary::load(vocab);
  p.pos_vocab_ = PosVocabulary::load(vocab);
  auto sem = r.section("SEMA");
  p.lsi_ = LsiModel::load(sem);
  const auto n = sem.count(1);
  for (std::uint64_t i = 0; i < n; ++i) p.clusterings_.push_back(BrownClustering::load(sem));
  auto sc = r.section("SCAL");
  p.mean_ = sc.f64s();
  p.std_ = sc.f64s();
  p.build_layout();
  if (p.mean_.size() != p.dense_columns_.size() || p.std_.size() != p.dense_columns_.size()) {
    throw Error(ErrorKind::Integrity, "scaler size does not match the feature layout");
  }
  return p;
}

void write_feature_matrix(std::ostream& out, const FeatureLayout& layout, std::span<const std::int64_t> ids,
                          const RowMatrix& features) {
  if (static_cast<std::size_t>(features.rows()) != ids.size() ||
      static_cast<std::size_t>(features.cols()) != layout.width()) {
    throw Error(ErrorKind::Internal, "feature matrix does not match ids or layout");
  }
  for (const auto& b : layout.blocks()) {
    out << "# block\t" << b.family << '\t' << b.name << '\t' << b.offset << '\t' << b.width << '\n';
  }
  out << "id";
  for (const auto& b : layout.blocks()) {
    for (std::size_t c = 0; c < b.width; ++c) out << '\t' << b.name << '_' << c;
  }
  out << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < features.cols(); ++j) out << '\t' << features(i, j);
    out << '\n';
  }
}

}  // namespace irony
