#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bwesg/corpus.hpp"
#include "bwesg/random.hpp"
#include "bwesg/shuffle.hpp"

namespace bwesg {

class EmbeddingSpace;

/// How the logistic function is evaluated inside the SGD loop.
enum class SigmoidMode {
  Table,  ///< 1000 bins over [-6, 6], saturating outside (word2vec behaviour).
  Exact,  ///< 1 / (1 + exp(-x)) in double precision.
};

struct TrainingConfig {
  std::size_t dim = 300;
  std::size_t window = 48;
  std::size_t negatives = 25;
  double subsample = 1e-4;
  std::size_t epochs = 15;
  double lr0 = 0.025;
  /// Defaults to 1e-4 * lr0 when unset.
  std::optional<double> lr_min;
  double unigram_power = 0.75;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  SigmoidMode sigmoid = SigmoidMode::Table;
  /// Slots in the negative-sampling table.
  std::size_t negative_table_size = 10'000'000;

  double effective_lr_min() const { return lr_min.value_or(1e-4 * lr0); }

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Pivot and context embedding matrices, row-major, one row per vocabulary
/// entry.
template <typename Real>
struct ModelParams {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<Real> pivot;
  std::vector<Real> context;

  ModelParams() = default;
  ModelParams(std::size_t rows_, std::size_t dim_)
      : rows(rows_), dim(dim_), pivot(rows_ * dim_, Real(0)), context(rows_ * dim_, Real(0)) {}

  std::span<Real> pivot_row(std::size_t i) { return {pivot.data() + i * dim, dim}; }
  std::span<const Real> pivot_row(std::size_t i) const { return {pivot.data() + i * dim, dim}; }
  std::span<Real> context_row(std::size_t i) { return {context.data() + i * dim, dim}; }
  std::span<const Real> context_row(std::size_t i) const { return {context.data() + i * dim, dim}; }

  bool all_finite() const {
    for (Real x : pivot)
      if (!std::isfinite(x)) return false;
    for (Real x : context)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

/// Pivot rows uniform in [-0.5/d, 0.5/d] drawn from Rng(seed); context rows zero.
ModelParams<float> init_params(std::size_t vocab_size, const TrainingConfig& cfg);
ModelParams<float> init_params(const Vocabulary& vocab, const TrainingConfig& cfg);

inline constexpr double kSigmoidBound = 6.0;
inline constexpr std::size_t kSigmoidBins = 1000;

/// Logistic function of a precomputed dot product.
double sigmoid(double x, SigmoidMode mode);

/// P(observed | w, v) = sigmoid(w . v_c).
template <typename Real>
double pair_probability(std::span<const Real> w, std::span<const Real> v_c, SigmoidMode mode = SigmoidMode::Exact) {
  double dot = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) dot += static_cast<double>(w[k]) * static_cast<double>(v_c[k]);
  return sigmoid(dot, mode);
}

/// Keep probability min(1, (sqrt(f/t) + 1) * t/f) for a token of relative
/// frequency f. Returns 1 when t == 0.
double keep_probability(double frequency, double rate);

/// Per-index keep probabilities, with frequencies relative to the pooled
/// bilingual token total of the vocabulary.
std::vector<double> keep_probabilities(const Vocabulary& vocab, double rate);

/// Drops each token independently with its keep probability; order preserved.
void subsample_indices(std::span<const std::uint32_t> doc, std::span<const double> keep, Rng& rng,
                       std::vector<std::uint32_t>& out);

/// Token-level subsampling of a pseudo-bilingual document. Tokens missing from
/// the vocabulary are kept unchanged.
PseudoBilingualDocument subsample(const PseudoBilingualDocument& doc, const Vocabulary& vocab, double rate, Rng& rng);

struct TrainingPair {
  std::uint32_t pivot_index;
  std::uint32_t context_index;
  bool positive = true;
};

/// Visits every positive (pivot position, context position) pair of a
/// document. For each position a window t is drawn uniformly from {1..cs};
/// positions within t on either side (clipped at the document edges) are
/// emitted left to right.
template <typename Visit>
void for_each_window_pair(std::size_t length, std::size_t cs, Rng& rng, Visit&& visit) {
  for (std::size_t n = 0; n < length; ++n) {
    const std::size_t t = 1 + static_cast<std::size_t>(rng.uniform_index(cs));
    const std::size_t lo = n >= t ? n - t : 0;
    const std::size_t hi = std::min(length - 1, n + t);
    for (std::size_t m = lo; m <= hi; ++m) {
      if (m != n) visit(n, m);
    }
  }
}

std::vector<TrainingPair> generate_pairs(std::span<const std::uint32_t> doc, std::size_t cs, Rng& rng);

/// Number of positive pairs generate_pairs would emit, consuming the same
/// random draws.
std::uint64_t count_pairs(std::size_t length, std::size_t cs, Rng& rng);

/// Precomputed table for drawing negatives with probability proportional to
/// count^power.
class NegativeTable {
 public:
  NegativeTable(std::span<const std::uint64_t> counts, double power, std::size_t slots = 10'000'000);

  std::uint32_t draw(Rng& rng) const { return table_[rng.next() % table_.size()]; }

  std::size_t slots() const noexcept { return table_.size(); }
  /// Share of table slots assigned to index i.
  double probability(std::size_t i) const;

 private:
  std::vector<std::uint32_t> table_;
  std::vector<std::size_t> slots_per_index_;
};

/// Scratch buffers reused across sgd_step calls.
template <typename Real>
struct SgdWorkspace {
  std::vector<Real> pivot_grad;
  std::vector<double> coeffs;
};

/// One stochastic ascent step on
///   log sigmoid(w . c) + sum_j log sigmoid(-w . c'_j)
/// for pivot row w, positive context row c and negative context rows c'_j.
///
/// All coefficients are computed from the pre-update parameters; context rows
/// then move by lr * g * w and the pivot row by lr * sum g * c.
template <typename Real>
void sgd_step(ModelParams<Real>& params, std::size_t pivot_idx, std::size_t context_idx,
              std::span<const std::uint32_t> negatives, Real lr, SigmoidMode mode, SgdWorkspace<Real>& ws) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using Row = Eigen::Map<Vec>;
  const auto d = static_cast<Eigen::Index>(params.dim);
  Row w(params.pivot_row(pivot_idx).data(), d);
  ws.pivot_grad.assign(params.dim, Real(0));
  Row grad(ws.pivot_grad.data(), d);
  ws.coeffs.resize(negatives.size() + 1);

  auto context = [&](std::size_t j) {
    return Row(params.context_row(j == 0 ? context_idx : negatives[j - 1]).data(), d);
  };

  for (std::size_t j = 0; j <= negatives.size(); ++j) {
    const double label = j == 0 ? 1.0 : 0.0;
    ws.coeffs[j] = label - sigmoid(static_cast<double>(w.dot(context(j))), mode);
  }
  for (std::size_t j = 0; j <= negatives.size(); ++j) grad += static_cast<Real>(ws.coeffs[j]) * context(j);
  for (std::size_t j = 0; j <= negatives.size(); ++j) context(j) += (lr * static_cast<Real>(ws.coeffs[j])) * w;
  w += lr * grad;
}

template <typename Real>
void sgd_step(ModelParams<Real>& params, std::size_t pivot_idx, std::size_t context_idx,
              std::span<const std::uint32_t> negatives, Real lr, SigmoidMode mode = SigmoidMode::Exact) {
  SgdWorkspace<Real> ws;
  sgd_step(params, pivot_idx, context_idx, negatives, lr, mode, ws);
}

/// Local objective of one positive pair and its negatives (exact sigmoid).
template <typename Real>
double local_objective(const ModelParams<Real>& params, std::size_t pivot_idx, std::size_t context_idx,
                       std::span<const std::uint32_t> negatives) {
  auto dot = [&](std::size_t c_idx) {
    auto w = params.pivot_row(pivot_idx);
    auto c = params.context_row(c_idx);
    double s = 0.0;
    for (std::size_t k = 0; k < params.dim; ++k) s += static_cast<double>(w[k]) * static_cast<double>(c[k]);
    return s;
  };
  // log sigmoid(x) = -log1p(exp(-x))
  auto log_sigmoid = [](double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); };
  double total = log_sigmoid(dot(context_idx));
  for (auto n : negatives) total += log_sigmoid(-dot(n));
  return total;
}

/// Maps every token to its vocabulary index. Throws UnknownWordError on a
/// token missing from the vocabulary.
std::vector<std::vector<std::uint32_t>> index_documents(const std::vector<PseudoBilingualDocument>& docs,
                                                        const Vocabulary& vocab);

/// Removes tokens missing from the vocabulary.
PseudoBilingualDocument filter_document(const PseudoBilingualDocument& doc, const Vocabulary& vocab);

/// Vocabulary over pseudo-bilingual documents.
Vocabulary build_vocabulary(const std::vector<PseudoBilingualDocument>& docs, std::uint64_t min_count);

struct TrainStats {
  std::uint64_t positive_pairs = 0;
  std::uint64_t tokens_seen = 0;
  std::uint64_t tokens_kept = 0;
  double final_lr = 0.0;
  double seconds = 0.0;
};

using EpochCallback = std::function<void(std::size_t epoch, const ModelParams<float>& params)>;

/// Runs SGNS over indexed documents and returns the learned parameters.
///
/// The learning rate decays linearly with the number of processed tokens from
/// lr0 to lr_min. With workers == 1 the result is bit-reproducible for a fixed
/// seed; with more workers, threads update the shared matrices without locks.
ModelParams<float> train_params(const std::vector<std::vector<std::uint32_t>>& docs, const Vocabulary& vocab,
                                const TrainingConfig& cfg, TrainStats* stats = nullptr,
                                const EpochCallback& on_epoch = {});

/// Trains on pseudo-bilingual documents and returns the pivot embeddings.
EmbeddingSpace train(const std::vector<PseudoBilingualDocument>& docs, const Vocabulary& vocab,
                     const TrainingConfig& cfg, TrainStats* stats = nullptr);

/// Wraps the pivot matrix as an embedding space keyed by vocabulary tokens.
EmbeddingSpace make_space(const ModelParams<float>& params, const Vocabulary& vocab);

}  // namespace bwesg
