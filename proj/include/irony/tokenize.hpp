#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace irony {

// A normalized tweet split into tokens with one POS tag per token.
struct TokenizedTweet {
  std::int64_t id = 0;
  std::string text;  // normalized text the tokens came from
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::size_t char_count = 0;  // code points of `text`
  std::size_t word_count = 0;  // == tokens.size()
};

// Whitespace split, then leading/trailing ASCII punctuation peeled off one
// character per token. "<USER>", "<URL>" and "#hashtag" stay whole;
// contractions split at the apostrophe ("don't" -> "do" "n't").
std::vector<std::string> tokenize(std::string_view normalized);

// Fills text/tokens/counts; tags are left empty.
TokenizedTweet make_tokenized(std::int64_t id, std::string normalized);

}  // namespace irony
