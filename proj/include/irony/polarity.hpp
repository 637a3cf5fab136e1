#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "irony/resources.hpp"
#include "irony/tokenize.hpp"

namespace irony {

inline constexpr std::size_t kPolarityWidth = 12;

// Column order of the polarity block.
enum PolarityColumn : std::size_t {
  kPosWords = 0,
  kNegWords,
  kPosEmoji,
  kNegEmoji,
  kHasPosWord,
  kHasNegWord,
  kHasPosEmoji,
  kHasNegEmoji,
  kHasNegation,
  kWordBalance,    // positive minus negative word count
  kContrast,       // both word counts non-zero
  kSignalTotal,    // sum of the four counts
};

std::array<std::string_view, kPolarityWidth> polarity_column_names();

// Token-level, case-insensitive exact matches. A word in both lexicons counts
// toward both; emoji are the name tokens the normalizer put in their place.
std::array<double, kPolarityWidth> polarity_block(const TokenizedTweet& tweet, const ResourceBundle& resources);

}  // namespace irony
