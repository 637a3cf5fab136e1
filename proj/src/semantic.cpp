#include "irony/semantic.hpp"

#include "irony/error.hpp"

namespace irony {

std::vector<double> average_embedding(const TokenizedTweet& tweet, const EmbeddingTable& table) {
  std::vector<double> sum(table.dim(), 0.0);
  std::size_t found = 0;
  for (const auto& tok : tweet.tokens) {
    const auto vec = table.find(tok);
    if (!vec) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
    ++found;
  }
  if (found > 0) {
    for (double& v : sum) v /= static_cast<double>(found);
  }
  return sum;
}

std::vector<double> semantic_block(const TokenizedTweet& tweet, const EmbeddingTable& table,
                                   const LsiModel& lsi, std::span<const BrownClustering> clusterings) {
  std::size_t cluster_width = 0;
  for (const auto& c : clusterings) cluster_width += static_cast<std::size_t>(c.num_clusters);

  const auto emb = average_embedding(tweet, table);
  const auto proj = lsi.project(tweet);
  const auto counts = cluster_count_block(tweet, clusterings);
  if (emb.size() != table.dim() || proj.size() != static_cast<std::size_t>(lsi.dim()) ||
      counts.size() != cluster_width) {
    throw Error(ErrorKind::Internal, "semantic block component width mismatch");
  }

  std::vector<double> block;
  block.reserve(emb.size() + proj.size() + counts.size());
  block.insert(block.end(), emb.begin(), emb.end());
  block.insert(block.end(), proj.begin(), proj.end());
  block.insert(block.end(), counts.begin(), counts.end());
  return block;
}

}  // namespace irony
