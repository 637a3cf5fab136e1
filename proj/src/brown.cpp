#include "irony/brown.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"

namespace irony {

std::optional<std::uint32_t> BigramStats::index(std::string_view word) const {
  const auto it = word_index.find(std::string(word));
  if (it == word_index.end()) return std::nullopt;
  return it->second;
}

std::uint64_t BigramStats::bigram_count(std::uint32_t left, std::uint32_t right) const {
  const auto it = std::lower_bound(bigrams.begin(), bigrams.end(), std::make_pair(left, right),
                                   [](const Bigram& b, const std::pair<std::uint32_t, std::uint32_t>& key) {
                                     return std::make_pair(b.left, b.right) < key;
                                   });
  if (it == bigrams.end() || it->left != left || it->right != right) return 0;
  return it->count;
}

BigramStats collect_bigram_stats(std::span<const std::vector<std::string>> sentences, int min_count) {
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++freq[w];
  }

  BigramStats stats;
  for (const auto& [w, n] : freq) {
    if (n >= static_cast<std::uint64_t>(std::max(min_count, 1))) stats.words.push_back(w);
  }
  if (stats.words.empty()) {
    throw Error(ErrorKind::Validation, "Brown clustering vocabulary is empty after min_count=" +
                                           std::to_string(min_count) + " thresholding");
  }
  std::sort(stats.words.begin(), stats.words.end(), [&](const std::string& a, const std::string& b) {
    const auto fa = freq.at(a);
    const auto fb = freq.at(b);
    return fa != fb ? fa > fb : a < b;
  });
  for (std::uint32_t i = 0; i < stats.words.size(); ++i) {
    stats.word_index.emplace(stats.words[i], i);
    stats.counts.push_back(freq.at(stats.words[i]));
    stats.total_tokens += stats.counts.back();
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> pairs;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const auto a = stats.index(s[i]);
      const auto b = stats.index(s[i + 1]);
      if (a && b) ++pairs[{*a, *b}];
    }
  }
  for (const auto& [key, n] : pairs) {
    stats.bigrams.push_back({key.first, key.second, n});
    stats.total_bigrams += n;
  }
  return stats;
}

BigramStats collect_bigram_stats(std::span<const TokenizedTweet> corpus, int min_count) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(corpus.size());
  for (const auto& t : corpus) sentences.push_back(t.tokens);
  return collect_bigram_stats(sentences, min_count);
}

double average_mutual_information(std::span<const int> assignment, const BigramStats& stats) {
  if (assignment.size() != stats.words.size()) {
    throw Error(ErrorKind::Internal, "cluster assignment does not cover the vocabulary");
  }
  if (stats.total_bigrams == 0) return 0.0;
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> left;
  std::map<int, double> right;
  for (const auto& b : stats.bigrams) {
    const int cl = assignment[b.left];
    const int cr = assignment[b.right];
    const auto n = static_cast<double>(b.count);
    cells[{cl, cr}] += n;
    left[cl] += n;
    right[cr] += n;
  }
  const auto total = static_cast<double>(stats.total_bigrams);
  double ami = 0.0;
  for (const auto& [key, n] : cells) {
    ami += (n / total) * std::log(n * total / (left[key.first] * right[key.second]));
  }
  return ami;
}

namespace {

// Incremental Brown clustering state over at most C+1 active clusters.
class BrownTrainer {
 public:
  BrownTrainer(const BigramStats& stats, int capacity)
      : stats_(stats), total_(static_cast<double>(stats.total_bigrams)) {
    const std::size_t v = stats.words.size();
    out_.resize(v);
    in_.resize(v);
    left_marginal_.assign(v, 0.0);
    right_marginal_.assign(v, 0.0);
    for (const auto& b : stats.bigrams) {
      const auto n = static_cast<double>(b.count);
      out_[b.left].push_back({b.right, n});
      in_[b.right].push_back({b.left, n});
      left_marginal_[b.left] += n;
      right_marginal_[b.right] += n;
    }
    word_handle_.assign(v, -1);
    reserve(static_cast<std::size_t>(capacity) + 1);
  }

  void insert(std::uint32_t word) {
    const std::size_t n = size();
    const int handle = static_cast<int>(parent_.size());
    parent_.push_back(handle);
    slot_of_handle_.push_back(static_cast<int>(n));
    handle_of_slot_.push_back(handle);
    word_handle_[word] = handle;

    grow();
    left_[n] = left_marginal_[word];
    right_[n] = right_marginal_[word];
    for (const auto& [other, cnt] : out_[word]) {
      if (other == word) {
        at(counts_, n, n) += cnt;
      } else if (const int s = slot_of_word(other); s >= 0) {
        at(counts_, n, s) += cnt;
      }
    }
    for (const auto& [other, cnt] : in_[word]) {
      if (other == word) continue;
      if (const int s = slot_of_word(other); s >= 0) at(counts_, s, n) += cnt;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      at(q_, n, k) = q(at(counts_, n, k), left_[n], right_[k]);
      at(q_, k, n) = q(at(counts_, k, n), left_[k], right_[n]);
    }
    for (std::size_t k = 0; k <= n; ++k) ami_ += at(q_, n, k);
    for (std::size_t k = 0; k < n; ++k) ami_ += at(q_, k, n);

    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = s + 1; t < n; ++t) at(loss_, s, t) += contribution(s, t, n);
    }
    for (std::size_t s = 0; s < n; ++s) at(loss_, s, n) = full_loss(s, n);
  }

  // Lowest-loss pair; ties within epsilon keep the earlier pair.
  std::pair<std::size_t, std::size_t> best_pair() const {
    const std::size_t n = size();
    std::pair<std::size_t, std::size_t> best{0, 1};
    double best_loss = at(loss_, 0, 1);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = s + 1; t < n; ++t) {
        if (at(loss_, s, t) < best_loss - kBrownTieEpsilon) {
          best_loss = at(loss_, s, t);
          best = {s, t};
        }
      }
    }
    return best;
  }

  double loss(std::size_t s, std::size_t t) const { return at(loss_, s, t); }

  void merge(std::size_t i, std::size_t j) {
    const std::size_t n = size();
    for (std::size_t s = 0; s < n; ++s) {
      if (s == i || s == j) continue;
      for (std::size_t t = s + 1; t < n; ++t) {
        if (t == i || t == j) continue;
        at(loss_, s, t) -= contribution(s, t, i) + contribution(s, t, j);
      }
    }
    ami_ -= at(loss_, i, j);

    const double self = at(counts_, i, i) + at(counts_, i, j) + at(counts_, j, i) + at(counts_, j, j);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      at(counts_, i, k) += at(counts_, j, k);
      at(counts_, k, i) += at(counts_, k, j);
    }
    at(counts_, i, i) = self;
    left_[i] += left_[j];
    right_[i] += right_[j];
    parent_[handle_of_slot_[j]] = handle_of_slot_[i];
    erase(j);

    const std::size_t m = size();
    for (std::size_t k = 0; k < m; ++k) {
      at(q_, i, k) = q(at(counts_, i, k), left_[i], right_[k]);
      at(q_, k, i) = q(at(counts_, k, i), left_[k], right_[i]);
    }
    for (std::size_t s = 0; s < m; ++s) {
      if (s == i) continue;
      for (std::size_t t = s + 1; t < m; ++t) {
        if (t == i) continue;
        at(loss_, s, t) += contribution(s, t, i);
      }
    }
    for (std::size_t s = 0; s < m; ++s) {
      if (s == i) continue;
      const auto [a, b] = std::minmax(s, i);
      at(loss_, a, b) = full_loss(a, b);
    }
  }

  std::size_t size() const { return left_.size(); }
  double ami() const { return ami_; }

  int slot_of_word(std::uint32_t word) {
    const int h = word_handle_[word];
    return h < 0 ? -1 : slot_of_handle_[find(h)];
  }

 private:
  using Grid = std::vector<double>;

  double& at(Grid& g, std::size_t r, std::size_t c) { return g[r * stride_ + c]; }
  double at(const Grid& g, std::size_t r, std::size_t c) const { return g[r * stride_ + c]; }

  void reserve(std::size_t cap) {
    stride_ = cap + 1;
    counts_.assign(stride_ * stride_, 0.0);
    q_.assign(stride_ * stride_, 0.0);
    loss_.assign(stride_ * stride_, 0.0);
  }

  void grow() {
    const std::size_t n = size();
    if (n + 1 > stride_) {
      throw Error(ErrorKind::Internal, "Brown clustering window overflow");
    }
    left_.push_back(0.0);
    right_.push_back(0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      at(counts_, n, k) = at(counts_, k, n) = 0.0;
      at(q_, n, k) = at(q_, k, n) = 0.0;
      at(loss_, n, k) = at(loss_, k, n) = 0.0;
    }
  }

  // Removes slot j, shifting later slots down by one.
  void erase(std::size_t j) {
    const std::size_t n = size();
    for (Grid* g : {&counts_, &q_, &loss_}) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = j; c + 1 < n; ++c) at(*g, r, c) = at(*g, r, c + 1);
      }
      for (std::size_t r = j; r + 1 < n; ++r) {
        for (std::size_t c = 0; c + 1 < n; ++c) at(*g, r, c) = at(*g, r + 1, c);
      }
    }
    left_.erase(left_.begin() + static_cast<std::ptrdiff_t>(j));
    right_.erase(right_.begin() + static_cast<std::ptrdiff_t>(j));
    handle_of_slot_.erase(handle_of_slot_.begin() + static_cast<std::ptrdiff_t>(j));
    for (std::size_t s = j; s < handle_of_slot_.size(); ++s) {
      slot_of_handle_[handle_of_slot_[s]] = static_cast<int>(s);
    }
  }

  int find(int h) {
    while (parent_[h] != h) {
      parent_[h] = parent_[parent_[h]];
      h = parent_[h];
    }
    return h;
  }

  double q(double n, double l, double r) const {
    if (n <= 0.0) return 0.0;
    return (n / total_) * std::log(n * total_ / (l * r));
  }

  // Change in the (s, t) merge loss attributable to cluster k.
  double contribution(std::size_t s, std::size_t t, std::size_t k) const {
    const double before = at(q_, s, k) + at(q_, k, s) + at(q_, t, k) + at(q_, k, t);
    const double after = q(at(counts_, s, k) + at(counts_, t, k), left_[s] + left_[t], right_[k]) +
                         q(at(counts_, k, s) + at(counts_, k, t), left_[k], right_[s] + right_[t]);
    return before - after;
  }

  double full_loss(std::size_t s, std::size_t t) const {
    const std::size_t n = size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == s || k == t) continue;
      total += contribution(s, t, k);
    }
    const double before = at(q_, s, s) + at(q_, t, t) + at(q_, s, t) + at(q_, t, s);
    const double self = at(counts_, s, s) + at(counts_, s, t) + at(counts_, t, s) + at(counts_, t, t);
    const double after = q(self, left_[s] + left_[t], right_[s] + right_[t]);
    return total + before - after;
  }

  const BigramStats& stats_;
  double total_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> in_;
  std::vector<double> left_marginal_;
  std::vector<double> right_marginal_;

  std::size_t stride_ = 0;
  Grid counts_;
  Grid q_;
  Grid loss_;
  std::vector<double> left_;
  std::vector<double> right_;
  double ami_ = 0.0;

  std::vector<int> word_handle_;
  std::vector<int> parent_;
  std::vector<int> slot_of_handle_;
  std::vector<int> handle_of_slot_;
};

}  // namespace

BrownClustering train_brown(const BigramStats& stats, int num_clusters) {
  if (num_clusters <= 0) throw Error(ErrorKind::Config, "Brown cluster count must be positive");
  const std::size_t v = stats.words.size();
  const std::size_t c = static_cast<std::size_t>(num_clusters);

  BrownTrainer trainer(stats, num_clusters);
  BrownClustering out;
  out.num_clusters = num_clusters;
  out.words = stats.words;
  out.frequency = stats.counts;

  for (std::uint32_t w = 0; w < v; ++w) {
    trainer.insert(w);
    if (trainer.size() <= c) continue;
    const auto [i, j] = trainer.best_pair();
    out.merges.push_back({w, static_cast<int>(i), static_cast<int>(j), trainer.loss(i, j)});
    trainer.merge(i, j);
  }

  out.cluster_of.resize(v);
  for (std::uint32_t w = 0; w < v; ++w) out.cluster_of[w] = trainer.slot_of_word(w);
  out.ami = trainer.ami();
  out.rebuild_index();
  return out;
}

std::optional<int> BrownClustering::cluster(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void BrownClustering::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < words.size(); ++i) index_.emplace(words[i], cluster_of[i]);
}

void BrownClustering::write_tsv(std::ostream& out) const {
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << words[i] << '\t' << cluster_of[i] << '\t' << frequency[i] << '\n';
  }
}

void BrownClustering::save(BinaryWriter& w) const {
  w.u32(static_cast<std::uint32_t>(num_clusters));
  w.strs(words);
  w.u64(cluster_of.size());
  for (int c : cluster_of) w.u32(static_cast<std::uint32_t>(c));
  w.u64(frequency.size());
  for (auto f : frequency) w.u64(f);
  w.f64(ami);
}

BrownClustering BrownClustering::load(BinaryReader& r) {
  BrownClustering b;
  b.num_clusters = static_cast<int>(r.u32());
  b.words = r.strs();
  b.cluster_of.resize(r.count(4));
  for (int& c : b.cluster_of) {
    c = static_cast<int>(r.u32());
    if (c < 0 || c >= b.num_clusters) throw Error(ErrorKind::Integrity, "Brown cluster id out of range");
  }
  b.frequency.resize(r.count(8));
  for (auto& f : b.frequency) f = r.u64();
  b.ami = r.f64();
  if (b.cluster_of.size() != b.words.size() || b.frequency.size() != b.words.size()) {
    throw Error(ErrorKind::Integrity, "Brown clustering arrays disagree in length");
  }
  b.rebuild_index();
  return b;
}

std::vector<double> cluster_count_block(const TokenizedTweet& tweet,
                                        std::span<const BrownClustering> clusterings) {
  std::size_t width = 0;
  for (const auto& c : clusterings) width += static_cast<std::size_t>(c.num_clusters);
  std::vector<double> block(width, 0.0);
  std::size_t offset = 0;
  for (const auto& c : clusterings) {
    for (const auto& tok : tweet.tokens) {
      if (const auto id = c.cluster(tok)) block[offset + static_cast<std::size_t>(*id)] += 1.0;
    }
    offset += static_cast<std::size_t>(c.num_clusters);
  }
  return block;
}

}  // namespace irony
