#include "irony/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/ngram.hpp"
#include "irony/rng.hpp"

namespace irony {

namespace {

constexpr double kSigmaFloor = 1e-12;

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

SvdResult small_svd(const Eigen::MatrixXd& a, int k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out;
  out.U = svd.matrixU().leftCols(k);
  out.sigma = svd.singularValues().head(k);
  out.V = svd.matrixV().leftCols(k);
  return out;
}

void check_rank(int k, Eigen::Index rows, Eigen::Index cols) {
  const auto max_rank = std::min(rows, cols);
  if (k < 1) throw Error(ErrorKind::Config, "SVD rank must be at least 1, got " + std::to_string(k));
  if (k > max_rank) {
    throw Error(ErrorKind::Config, "SVD rank " + std::to_string(k) + " exceeds the achievable maximum " +
                                       std::to_string(max_rank));
  }
}

}  // namespace

SvdResult dense_truncated_svd(const Eigen::MatrixXd& a, int k) {
  check_rank(k, a.rows(), a.cols());
  SvdResult out = small_svd(a, k);
  canonicalize_signs(out);
  return out;
}

SvdResult randomized_svd(const SparseMatrix& a, int k, const RandomizedSvdOptions& options) {
  check_rank(k, a.rows(), a.cols());
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::Index l = std::min<Eigen::Index>(k + std::max(options.oversample, 0), std::min(m, n));

  Rng rng(options.seed);
  Eigen::MatrixXd omega(n, l);
  for (Eigen::Index j = 0; j < l; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) omega(i, j) = rng.normal();
  }
  Eigen::MatrixXd q = orthonormalize(a * omega);
  for (int it = 0; it < options.power_iterations; ++it) {
    const Eigen::MatrixXd z = orthonormalize(a.transpose() * q);
    q = orthonormalize(a * z);
  }
  const Eigen::MatrixXd b = (a.transpose() * q).transpose();  // l x n
  SvdResult small = small_svd(b, k);
  SvdResult out;
  out.U = q * small.U;
  out.sigma = small.sigma;
  out.V = small.V;
  canonicalize_signs(out);
  return out;
}

void canonicalize_signs(SvdResult& svd) {
  for (Eigen::Index j = 0; j < svd.U.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < svd.U.rows(); ++i) {
      if (std::abs(svd.U(i, j)) > std::abs(svd.U(best, j))) best = i;
    }
    if (svd.U.rows() > 0 && svd.U(best, j) < 0) {
      svd.U.col(j) *= -1.0;
      if (j < svd.V.cols()) svd.V.col(j) *= -1.0;
    }
  }
}

LsiModel::LsiModel(std::vector<std::string> terms, std::vector<double> idf, Eigen::MatrixXd u,
                   Eigen::VectorXd sigma, int output_dim)
    : terms_(std::move(terms)), idf_(std::move(idf)), u_(std::move(u)), sigma_(std::move(sigma)),
      output_dim_(output_dim) {
  if (output_dim_ < rank()) throw Error(ErrorKind::Internal, "LSI output width below its rank");
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

std::optional<std::size_t> LsiModel::row(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::VectorXd LsiModel::term_vector(const TokenizedTweet& tweet) const {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(terms_.size()));
  for (const auto& tok : tweet.tokens) {
    if (const auto r = row(tok)) q(static_cast<Eigen::Index>(*r)) += idf_[*r];
  }
  return q;
}

std::vector<double> LsiModel::project_vector(const Eigen::VectorXd& q) const {
  if (q.size() != u_.rows()) throw Error(ErrorKind::Internal, "LSI query has the wrong length");
  std::vector<double> out(static_cast<std::size_t>(output_dim_), 0.0);
  const Eigen::VectorXd coords = u_.transpose() * q;
  for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
    if (sigma_(i) >= kSigmaFloor) out[static_cast<std::size_t>(i)] = coords(i) / sigma_(i);
  }
  return out;
}

std::vector<double> LsiModel::project(const TokenizedTweet& tweet) const {
  Eigen::VectorXd q = term_vector(tweet);
  const double norm = q.norm();
  if (norm > 0.0) q /= norm;
  return project_vector(q);
}

void LsiModel::save(BinaryWriter& w) const {
  w.strs(terms_);
  w.f64s(idf_);
  w.u32(static_cast<std::uint32_t>(output_dim_));
  w.u64(static_cast<std::uint64_t>(u_.rows()));
  w.u64(static_cast<std::uint64_t>(u_.cols()));
  w.f64s(std::span<const double>(u_.data(), static_cast<std::size_t>(u_.size())));
  w.f64s(std::span<const double>(sigma_.data(), static_cast<std::size_t>(sigma_.size())));
}

LsiModel LsiModel::load(BinaryReader& r) {
  auto terms = r.strs();
  auto idf = r.f64s();
  const auto dim = static_cast<int>(r.u32());
  const auto rows = r.u64();
  const auto cols = r.u64();
  const auto u_data = r.f64s();
  const auto s_data = r.f64s();
  if (rows != terms.size() || idf.size() != terms.size() || u_data.size() != rows * cols ||
      s_data.size() != cols) {
    throw Error(ErrorKind::Integrity, "LSI model arrays disagree in shape");
  }
  Eigen::MatrixXd u = Eigen::Map<const Eigen::MatrixXd>(u_data.data(), static_cast<Eigen::Index>(rows),
                                                        static_cast<Eigen::Index>(cols));
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(s_data.data(), static_cast<Eigen::Index>(cols));
  if (dim < static_cast<int>(cols)) throw Error(ErrorKind::Integrity, "LSI width below its rank");
  return LsiModel(std::move(terms), std::move(idf), std::move(u), std::move(s), dim);
}

TermDocumentMatrix build_term_document_matrix(std::span<const TokenizedTweet> corpus, int min_df) {
  if (corpus.empty()) throw Error(ErrorKind::Validation, "LSI needs a non-empty corpus");
  std::map<std::string, std::size_t> df;
  for (const auto& t : corpus) {
    std::vector<std::string> seen(t.tokens.begin(), t.tokens.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto& w : seen) ++df[w];
  }

  TermDocumentMatrix out;
  std::unordered_map<std::string, std::size_t> row;
  for (const auto& [w, n] : df) {
    if (n < static_cast<std::size_t>(std::max(min_df, 1))) continue;
    row.emplace(w, out.terms.size());
    out.terms.push_back(w);
    out.idf.push_back(smoothed_idf(corpus.size(), n));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t j = 0; j < corpus.size(); ++j) {
    std::map<std::size_t, double> col;
    for (const auto& tok : corpus[j].tokens) {
      const auto it = row.find(tok);
      if (it != row.end()) col[it->second] += out.idf[it->second];
    }
    double norm = 0.0;
    for (const auto& [r, v] : col) norm += v * v;
    norm = std::sqrt(norm);
    for (const auto& [r, v] : col) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(j), v / norm);
    }
  }
  out.matrix.resize(static_cast<Eigen::Index>(out.terms.size()), static_cast<Eigen::Index>(corpus.size()));
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

namespace {

LsiModel fit_at(TermDocumentMatrix tdm, int k, int width, const LsiOptions& options) {
  SvdResult svd = options.method == SvdMethod::Dense
                      ? dense_truncated_svd(Eigen::MatrixXd(tdm.matrix), k)
                      : randomized_svd(tdm.matrix, k, options.randomized);
  return LsiModel(std::move(tdm.terms), std::move(tdm.idf), std::move(svd.U), std::move(svd.sigma), width);
}

}  // namespace

LsiModel fit_lsi(std::span<const TokenizedTweet> corpus, int k, const LsiOptions& options) {
  if (k < 1) throw Error(ErrorKind::Config, "LSI dimension must be at least 1, got " + std::to_string(k));
  auto tdm = build_term_document_matrix(corpus, options.min_df);
  check_rank(k, tdm.matrix.rows(), tdm.matrix.cols());
  return fit_at(std::move(tdm), k, k, options);
}

LsiModel fit_lsi_padded(std::span<const TokenizedTweet> corpus, int k, const LsiOptions& options) {
  if (k < 1) throw Error(ErrorKind::Config, "LSI dimension must be at least 1, got " + std::to_string(k));
  auto tdm = build_term_document_matrix(corpus, options.min_df);
  const int achievable = static_cast<int>(std::min(tdm.matrix.rows(), tdm.matrix.cols()));
  if (achievable == 0) {
    return LsiModel(std::move(tdm.terms), std::move(tdm.idf), Eigen::MatrixXd(tdm.matrix.rows(), 0),
                    Eigen::VectorXd(0), k);
  }
  return fit_at(std::move(tdm), std::min(k, achievable), k, options);
}

}  // namespace irony
