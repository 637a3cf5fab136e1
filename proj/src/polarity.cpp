#include "irony/polarity.hpp"

namespace irony {

std::array<std::string_view, kPolarityWidth> polarity_column_names() {
  return {"pos_words",  "neg_words",    "pos_emoji",     "neg_emoji", "has_pos_word", "has_neg_word",
          "has_pos_emoji", "has_neg_emoji", "has_negation", "word_balance", "contrast",  "signal_total"};
}

std::array<double, kPolarityWidth> polarity_block(const TokenizedTweet& tweet, const ResourceBundle& resources) {
  std::array<double, kPolarityWidth> b{};
  bool negation = false;
  for (const auto& tok : tweet.tokens) {
    const std::string w = to_lower_ascii(tok);
    if (resources.positive.count(w)) b[kPosWords] += 1.0;
    if (resources.negative.count(w)) b[kNegWords] += 1.0;
    if (const auto it = resources.emoji_polarity.find(w); it != resources.emoji_polarity.end()) {
      b[it->second == Polarity::Positive ? kPosEmoji : kNegEmoji] += 1.0;
    }
    if (resources.negation.count(w)) negation = true;
  }
  b[kHasPosWord] = b[kPosWords] > 0 ? 1.0 : 0.0;
  b[kHasNegWord] = b[kNegWords] > 0 ? 1.0 : 0.0;
  b[kHasPosEmoji] = b[kPosEmoji] > 0 ? 1.0 : 0.0;
  b[kHasNegEmoji] = b[kNegEmoji] > 0 ? 1.0 : 0.0;
  b[kHasNegation] = negation ? 1.0 : 0.0;
  b[kWordBalance] = b[kPosWords] - b[kNegWords];
  b[kContrast] = b[kPosWords] > 0 && b[kNegWords] > 0 ? 1.0 : 0.0;
  b[kSignalTotal] = b[kPosWords] + b[kNegWords] + b[kPosEmoji] + b[kNegEmoji];
  return b;
}

}  // namespace irony
