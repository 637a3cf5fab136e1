#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "irony/dataset.hpp"
#include "irony/resources.hpp"

namespace irony {

inline constexpr std::string_view kUserToken = "<USER>";
inline constexpr std::string_view kUrlToken = "<URL>";

struct NormalizedTweet {
  std::int64_t id = 0;
  std::string text;
  std::vector<std::string> applied;  // tags of the rules that changed something
};

// Tweet normalization, stages in this order:
//   1. emoji -> describing name (longest code point sequence in the emoji map)
//   2. @mention -> <USER>
//   3. http(s):// and www. URLs -> <URL>
//   4. per-token normalization-dictionary lookup (case-insensitive)
//   5. elongation squeeze: letter runs of 3+ cut to 2 and re-checked against
//      the dictionary, falling back to runs of 1 when that yields a known word
//   6. lowercase everything but the two sentinels
// Case folding is ASCII-only and happens per token before 4 and 5, which
// gives the same result as folding last. Output tokens are single-space joined.
class Normalizer {
 public:
  explicit Normalizer(const ResourceBundle& resources);

  std::string normalize(std::string_view text, std::vector<std::string>* applied = nullptr) const;
  NormalizedTweet operator()(const RawTweet& raw) const;

 private:
  std::string replace_emoji(std::string_view text, bool& changed) const;
  std::string normalize_word(std::string_view word, std::vector<std::string>* applied) const;
  std::string resolve(const std::string& word, int depth) const;

  const StringMap* emoji_map_;
  StringMap dictionary_;  // chains resolved to fixpoints
  WordSet known_words_;
  std::size_t max_emoji_len_ = 0;
};

NormalizedTweet normalize_tweet(const RawTweet& raw, const ResourceBundle& resources);

}  // namespace irony
