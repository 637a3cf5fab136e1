#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "irony/tokenize.hpp"

namespace irony {

class BinaryWriter;
class BinaryReader;

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SvdResult {
  Eigen::MatrixXd U;      // m x k, orthonormal columns
  Eigen::VectorXd sigma;  // k, descending
  Eigen::MatrixXd V;      // n x k
};

struct RandomizedSvdOptions {
  std::uint64_t seed = 0;
  int power_iterations = 4;
  int oversample = 10;
};

// Rank-k SVD of a dense matrix through JacobiSVD. Slow, exact; used for
// small inputs and tests.
SvdResult dense_truncated_svd(const Eigen::MatrixXd& a, int k);

// Randomized range finder (Gaussian test matrix, power iterations with
// re-orthonormalization) followed by a dense SVD of the projected matrix.
SvdResult randomized_svd(const SparseMatrix& a, int k, const RandomizedSvdOptions& options);

// Flips signs so that the largest-magnitude entry of every U column is
// positive (first such entry on ties); V columns follow.
void canonicalize_signs(SvdResult& svd);

enum class SvdMethod { Randomized, Dense };

struct LsiOptions {
  int min_df = 2;
  SvdMethod method = SvdMethod::Randomized;
  RandomizedSvdOptions randomized;
};

class LsiModel {
 public:
  LsiModel() = default;
  LsiModel(std::vector<std::string> terms, std::vector<double> idf, Eigen::MatrixXd u,
           Eigen::VectorXd sigma, int output_dim);

  int rank() const { return static_cast<int>(sigma_.size()); }
  // Width of projections; ranks below it are zero-padded.
  int dim() const { return output_dim_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  const Eigen::MatrixXd& u() const { return u_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  std::optional<std::size_t> row(std::string_view term) const;

  // Unnormalized tf-idf term vector of a tweet (length |terms|).
  Eigen::VectorXd term_vector(const TokenizedTweet& tweet) const;
  // diag(sigma)^-1 U^T q, no normalization of q; sigma < 1e-12 gives 0.
  std::vector<double> project_vector(const Eigen::VectorXd& q) const;
  // Fold-in of the L2-normalized term vector.
  std::vector<double> project(const TokenizedTweet& tweet) const;

  void save(BinaryWriter& w) const;
  static LsiModel load(BinaryReader& r);

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  Eigen::MatrixXd u_;
  Eigen::VectorXd sigma_;
  int output_dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Term-document matrix: rows are words with df >= min_df (sorted), columns
// are tweets, entries tf * smoothed idf with each column L2-normalized.
struct TermDocumentMatrix {
  std::vector<std::string> terms;
  std::vector<double> idf;
  SparseMatrix matrix;
};
TermDocumentMatrix build_term_document_matrix(std::span<const TokenizedTweet> corpus, int min_df = 2);

// Raises a config error when k < 1 or k > min(|terms|, |docs|).
LsiModel fit_lsi(std::span<const TokenizedTweet> corpus, int k, const LsiOptions& options = {});

// Like fit_lsi but fits min(k, achievable) dimensions and zero-pads the
// projection to k. Used by the pipeline on small corpora.
LsiModel fit_lsi_padded(std::span<const TokenizedTweet> corpus, int k, const LsiOptions& options = {});

}  // namespace irony
