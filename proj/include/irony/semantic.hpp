#pragma once

#include <span>
#include <vector>

#include "irony/brown.hpp"
#include "irony/lsi.hpp"
#include "irony/resources.hpp"
#include "irony/tokenize.hpp"

namespace irony {

// Mean of the embeddings of in-table tokens; zeros when none are found.
std::vector<double> average_embedding(const TokenizedTweet& tweet, const EmbeddingTable& table);

// [embedding average | LSI projection | Brown cluster counts].
std::vector<double> semantic_block(const TokenizedTweet& tweet, const EmbeddingTable& table,
                                   const LsiModel& lsi, std::span<const BrownClustering> clusterings);

}  // namespace irony
