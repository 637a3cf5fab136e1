#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "irony/brown.hpp"
#include "irony/dataset.hpp"
#include "irony/lsi.hpp"
#include "irony/mlp.hpp"
#include "irony/ngram.hpp"
#include "irony/normalize.hpp"
#include "irony/pos_tagger.hpp"
#include "irony/resources.hpp"
#include "irony/tokenize.hpp"

namespace irony {

struct FeatureConfig {
  int word_top_k = 1000;
  int char_top_k = 1000;
  int max_n = 3;
  std::vector<int> brown_sizes{80, 100, 120};
  int brown_min_count = 1;
  int lsi_dim = 100;
  int lsi_min_df = 2;
  bool lexical = true;
  bool syntactic = true;
  bool semantic = true;
  bool polarity = true;
  std::uint64_t seed = 0;  // randomized SVD

  void validate() const;
  void save(BinaryWriter& w) const;
  static FeatureConfig load(BinaryReader& r);
};

struct BlockSpec {
  std::string family;  // lexical | syntactic | semantic | polarity
  std::string name;
  std::size_t offset = 0;
  std::size_t width = 0;
  bool dense = false;  // standardized with training statistics
};

class FeatureLayout {
 public:
  void add(std::string family, std::string name, std::size_t width, bool dense);
  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  std::size_t width() const { return width_; }
  std::size_t family_width(std::string_view family) const;
  const BlockSpec* find(std::string_view name) const;

 private:
  std::vector<BlockSpec> blocks_;
  std::size_t width_ = 0;
};

struct FeatureVector {
  std::int64_t tweet_id = 0;
  std::vector<double> values;
};

// Fitted extractors plus the dense-column scaler. Immutable after fitting;
// copies share the resources, tagger and normalizer.
class FeaturePipeline {
 public:
  const FeatureConfig& config() const { return config_; }
  const FeatureLayout& layout() const { return layout_; }
  std::size_t width() const { return layout_.width(); }
  const ResourceBundle& resources() const { return *resources_; }
  const NgramVocabulary& word_vocab() const { return word_vocab_; }
  const NgramVocabulary& char_vocab() const { return char_vocab_; }
  const PosVocabulary& pos_vocab() const { return pos_vocab_; }
  const LsiModel& lsi() const { return lsi_; }
  const std::vector<BrownClustering>& clusterings() const { return clusterings_; }
  const std::vector<double>& scale_mean() const { return mean_; }
  const std::vector<double>& scale_std() const { return std_; }

  // normalize -> tokenize -> tag. Sidecar tags replace the tagger's output
  // for ids they cover and must match the token count.
  TokenizedTweet prepare(const RawTweet& raw, const SidecarTags* sidecar = nullptr) const;
  std::vector<TokenizedTweet> prepare_all(std::span<const RawTweet> tweets, const SidecarTags* sidecar = nullptr) const;

  // All blocks in layout order, before standardization.
  std::vector<double> raw_features(const TokenizedTweet& tweet) const;
  // Standardizes the dense columns in place: (x - mean) / std, 0 when std < 1e-12.
  void scale(std::span<double> row) const;

  FeatureVector transform(const RawTweet& raw) const;
  FeatureVector transform(const TokenizedTweet& tweet) const;
  RowMatrix transform_batch(std::span<const TokenizedTweet> tweets) const;

  void save(BinaryWriter& w) const;
  static FeaturePipeline load(BinaryReader& r);

  friend FeaturePipeline fit_pipeline(std::span<const TokenizedTweet> prepared,
                                      std::shared_ptr<const ResourceBundle> resources,
                                      std::shared_ptr<const PosTagger> tagger, const FeatureConfig& config,
                                      std::span<const TokenizedTweet> brown_extra);

  // Unfitted pipeline that can only prepare tweets.
  static FeaturePipeline preprocessor(std::shared_ptr<const ResourceBundle> resources,
                                      std::shared_ptr<const PosTagger> tagger);

 private:
  void build_layout();

  FeatureConfig config_;
  std::shared_ptr<const ResourceBundle> resources_;
  std::shared_ptr<const PosTagger> tagger_;
  std::shared_ptr<const Normalizer> normalizer_;
  NgramVocabulary word_vocab_;
  NgramVocabulary char_vocab_;
  PosVocabulary pos_vocab_;
  LsiModel lsi_;
  std::vector<BrownClustering> clusterings_;
  FeatureLayout layout_;
  std::vector<std::size_t> dense_columns_;
  std::vector<double> mean_;  // parallel to dense_columns_
  std::vector<double> std_;
};

// Fits on already prepared training tweets only. `brown_extra` adds
// unlabeled text to the Brown bigram statistics and nothing else.
FeaturePipeline fit_pipeline(std::span<const TokenizedTweet> prepared, std::shared_ptr<const ResourceBundle> resources,
                             std::shared_ptr<const PosTagger> tagger, const FeatureConfig& config,
                             std::span<const TokenizedTweet> brown_extra = {});

// Convenience: prepares the corpus with the same resources, then fits.
FeaturePipeline fit_pipeline(const LabeledCorpus& corpus, std::shared_ptr<const ResourceBundle> resources,
                             std::shared_ptr<const PosTagger> tagger, const FeatureConfig& config,
                             const SidecarTags* sidecar = nullptr);

// "# block\t<family>\t<name>\t<offset>\t<width>" header lines, a column header,
// then one tab-separated row per tweet: id followed by every value.
void write_feature_matrix(std::ostream& out, const FeatureLayout& layout, std::span<const std::int64_t> ids,
                          const RowMatrix& features);

}  // namespace irony
