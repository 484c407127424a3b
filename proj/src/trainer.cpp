#include "bwesg/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "bwesg/error.hpp"
#include "bwesg/space.hpp"

namespace bwesg {

void TrainingConfig::validate() const {
  if (dim < 1) throw ConfigError("dim must be at least 1");
  if (window < 1) throw ConfigError("window must be at least 1");
  if (!(subsample >= 0.0)) throw ConfigError("subsample rate must be non-negative");
  if (!(lr0 > 0.0)) throw ConfigError("lr0 must be positive");
  const double floor = effective_lr_min();
  if (!(floor > 0.0) || !(floor < lr0)) throw ConfigError("lr_min must satisfy 0 < lr_min < lr0");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (negative_table_size < 1) throw ConfigError("negative table must have at least one slot");
  if (!std::isfinite(unigram_power)) throw ConfigError("unigram power must be finite");
}

ModelParams<float> init_params(std::size_t vocab_size, const TrainingConfig& cfg) {
  ModelParams<float> params(vocab_size, cfg.dim);
  Rng rng(cfg.seed);
  const double bound = 0.5 / static_cast<double>(cfg.dim);
  for (auto& x : params.pivot) x = static_cast<float>(rng.uniform(-bound, bound));
  return params;
}

ModelParams<float> init_params(const Vocabulary& vocab, const TrainingConfig& cfg) {
  return init_params(vocab.size(), cfg);
}

namespace {

const std::array<double, kSigmoidBins + 1>& sigmoid_table() {
  static const auto table = [] {
    std::array<double, kSigmoidBins + 1> t{};
    for (std::size_t i = 0; i <= kSigmoidBins; ++i) {
      const double x = -kSigmoidBound + 2.0 * kSigmoidBound * static_cast<double>(i) / kSigmoidBins;
      t[i] = 1.0 / (1.0 + std::exp(-x));
    }
    return t;
  }();
  return table;
}

}  // namespace

double sigmoid(double x, SigmoidMode mode) {
  if (mode == SigmoidMode::Exact) return 1.0 / (1.0 + std::exp(-x));
  const auto& table = sigmoid_table();
  if (x >= kSigmoidBound) return table[kSigmoidBins];
  if (x <= -kSigmoidBound) return table[0];
  constexpr double scale = kSigmoidBins / (2.0 * kSigmoidBound);
  return table[static_cast<std::size_t>((x + kSigmoidBound) * scale)];
}

double keep_probability(double frequency, double rate) {
  if (rate <= 0.0 || frequency <= 0.0) return 1.0;
  return std::min(1.0, (std::sqrt(frequency / rate) + 1.0) * rate / frequency);
}

std::vector<double> keep_probabilities(const Vocabulary& vocab, double rate) {
  std::vector<double> keep(vocab.size(), 1.0);
  const auto total = static_cast<double>(vocab.total_tokens());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    keep[i] = keep_probability(static_cast<double>(vocab.count(i)) / total, rate);
  }
  return keep;
}

void subsample_indices(std::span<const std::uint32_t> doc, std::span<const double> keep, Rng& rng,
                       std::vector<std::uint32_t>& out) {
  out.clear();
  for (auto idx : doc) {
    const double p = keep[idx];
    if (p >= 1.0 || rng.uniform01() < p) out.push_back(idx);
  }
}

PseudoBilingualDocument subsample(const PseudoBilingualDocument& doc, const Vocabulary& vocab, double rate, Rng& rng) {
  PseudoBilingualDocument out{{}, doc.origin_id, doc.strategy};
  const auto total = static_cast<double>(vocab.total_tokens());
  for (const auto& token : doc.tokens) {
    const auto idx = vocab.find(token);
    const double p = idx ? keep_probability(static_cast<double>(vocab.count(*idx)) / total, rate) : 1.0;
    if (p >= 1.0 || rng.uniform01() < p) out.tokens.push_back(token);
  }
  return out;
}

std::vector<TrainingPair> generate_pairs(std::span<const std::uint32_t> doc, std::size_t cs, Rng& rng) {
  std::vector<TrainingPair> pairs;
  for_each_window_pair(doc.size(), cs, rng,
                       [&](std::size_t n, std::size_t m) { pairs.push_back({doc[n], doc[m], true}); });
  return pairs;
}

std::uint64_t count_pairs(std::size_t length, std::size_t cs, Rng& rng) {
  std::uint64_t total = 0;
  for (std::size_t n = 0; n < length; ++n) {
    const std::size_t t = 1 + static_cast<std::size_t>(rng.uniform_index(cs));
    total += std::min(t, n) + std::min(t, length - 1 - n);
  }
  return total;
}

NegativeTable::NegativeTable(std::span<const std::uint64_t> counts, double power, std::size_t slots)
    : slots_per_index_(counts.size(), 0) {
  if (counts.empty()) throw ConfigError("negative table needs a non-empty vocabulary");
  if (slots == 0) throw ConfigError("negative table needs at least one slot");
  std::vector<double> weights(counts.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(counts[i]), power);
    norm += weights[i];
  }
  table_.resize(slots);
  // Index i owns slots [floor(F(i-1) * slots), floor(F(i) * slots)) where F is
  // the cumulative distribution.
  double cumulative = 0.0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    cumulative += weights[i] / norm;
    std::size_t end = i + 1 == counts.size() ? slots
                                             : std::min(slots, static_cast<std::size_t>(cumulative * static_cast<double>(slots)));
    end = std::max(end, begin);
    std::fill(table_.begin() + static_cast<std::ptrdiff_t>(begin), table_.begin() + static_cast<std::ptrdiff_t>(end),
              static_cast<std::uint32_t>(i));
    slots_per_index_[i] = end - begin;
    begin = end;
  }
}

double NegativeTable::probability(std::size_t i) const {
  return static_cast<double>(slots_per_index_.at(i)) / static_cast<double>(table_.size());
}

std::vector<std::vector<std::uint32_t>> index_documents(const std::vector<PseudoBilingualDocument>& docs,
                                                        const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.tokens.size());
    for (const auto& token : doc.tokens) {
      const auto idx = vocab.find(token);
      if (!idx) throw UnknownWordError("token '" + to_string(token) + "' is not in the vocabulary");
      ids.push_back(static_cast<std::uint32_t>(*idx));
    }
    out.push_back(std::move(ids));
  }
  return out;
}

PseudoBilingualDocument filter_document(const PseudoBilingualDocument& doc, const Vocabulary& vocab) {
  PseudoBilingualDocument out{{}, doc.origin_id, doc.strategy};
  std::copy_if(doc.tokens.begin(), doc.tokens.end(), std::back_inserter(out.tokens),
               [&](const Token& t) { return vocab.contains(t); });
  return out;
}

Vocabulary build_vocabulary(const std::vector<PseudoBilingualDocument>& docs, std::uint64_t min_count) {
  std::unordered_map<Token, std::uint64_t, TokenHash> counts;
  for (const auto& doc : docs)
    for (const auto& t : doc.tokens) ++counts[t];
  return Vocabulary::from_counts(counts, min_count);
}

namespace {

constexpr std::uint64_t kLrUpdateInterval = 10'000;

struct SharedState {
  const std::vector<std::vector<std::uint32_t>>& docs;
  const TrainingConfig& cfg;
  const NegativeTable& negatives;
  const std::vector<double>& keep;
  ModelParams<float>& params;
  std::uint64_t total_work;  // epochs * corpus tokens
  std::atomic<std::uint64_t> processed{0};
  std::atomic<std::uint64_t> pairs{0};
  std::atomic<std::uint64_t> kept{0};
};

double scheduled_lr(const TrainingConfig& cfg, std::uint64_t processed, std::uint64_t total) {
  const double lr = cfg.lr0 * (1.0 - static_cast<double>(processed) / static_cast<double>(total + 1));
  return std::max(lr, cfg.effective_lr_min());
}

/// Processes documents worker, worker + stride, ... for one epoch.
void run_worker(SharedState& st, std::size_t worker, std::size_t stride, Rng& rng) {
  SgdWorkspace<float> ws;
  std::vector<std::uint32_t> sampled;
  std::vector<std::uint32_t> negs(st.cfg.negatives);
  std::uint64_t local_pairs = 0, local_kept = 0, pending = 0;
  float lr = static_cast<float>(scheduled_lr(st.cfg, st.processed.load(std::memory_order_relaxed), st.total_work));

  for (std::size_t d = worker; d < st.docs.size(); d += stride) {
    const auto& doc = st.docs[d];
    subsample_indices(doc, st.keep, rng, sampled);
    local_kept += sampled.size();
    pending += doc.size();
    if (pending >= kLrUpdateInterval) {
      const auto done = st.processed.fetch_add(pending, std::memory_order_relaxed) + pending;
      pending = 0;
      lr = static_cast<float>(scheduled_lr(st.cfg, done, st.total_work));
    }
    for_each_window_pair(sampled.size(), st.cfg.window, rng, [&](std::size_t n, std::size_t m) {
      for (auto& neg : negs) neg = st.negatives.draw(rng);
      sgd_step(st.params, sampled[n], sampled[m], std::span<const std::uint32_t>(negs), lr, st.cfg.sigmoid, ws);
      ++local_pairs;
    });
  }
  st.processed.fetch_add(pending, std::memory_order_relaxed);
  st.pairs.fetch_add(local_pairs, std::memory_order_relaxed);
  st.kept.fetch_add(local_kept, std::memory_order_relaxed);
}

}  // namespace

ModelParams<float> train_params(const std::vector<std::vector<std::uint32_t>>& docs, const Vocabulary& vocab,
                                const TrainingConfig& cfg, TrainStats* stats, const EpochCallback& on_epoch) {
  cfg.validate();
  if (docs.empty()) throw ConfigError("training needs at least one document");
  std::uint64_t corpus_tokens = 0;
  for (const auto& doc : docs) {
    for (auto idx : doc)
      if (idx >= vocab.size()) throw ConfigError("document index outside the vocabulary");
    corpus_tokens += doc.size();
  }
  if (corpus_tokens == 0) throw ConfigError("training documents contain no tokens");

  const auto start = std::chrono::steady_clock::now();
  ModelParams<float> params = init_params(vocab, cfg);
  if (cfg.epochs == 0) {
    if (stats) *stats = TrainStats{0, 0, 0, cfg.lr0, 0.0};
    return params;
  }

  const NegativeTable table(vocab.counts(), cfg.unigram_power, cfg.negative_table_size);
  const std::vector<double> keep = keep_probabilities(vocab, cfg.subsample);
  SharedState st{docs, cfg, table, keep, params, corpus_tokens * cfg.epochs};

  // Worker w draws from Rng(seed ^ (w + 1)); the initialisation consumed Rng(seed).
  std::vector<Rng> rngs;
  rngs.reserve(cfg.workers);
  for (std::size_t w = 0; w < cfg.workers; ++w) rngs.emplace_back(derive_seed(cfg.seed, w + 1));

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.workers == 1) {
      run_worker(st, 0, 1, rngs[0]);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(cfg.workers);
      for (std::size_t w = 0; w < cfg.workers; ++w) {
        threads.emplace_back([&st, &rngs, w, n = cfg.workers] { run_worker(st, w, n, rngs[w]); });
      }
      for (auto& t : threads) t.join();
    }
    if (on_epoch) on_epoch(epoch, params);
  }

  if (stats) {
    stats->positive_pairs = st.pairs.load();
    stats->tokens_seen = st.processed.load();
    stats->tokens_kept = st.kept.load();
    stats->final_lr = scheduled_lr(cfg, st.processed.load(), st.total_work);
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return params;
}

EmbeddingSpace make_space(const ModelParams<float>& params, const Vocabulary& vocab) {
  EmbeddingSpace space(params.dim);
  for (std::size_t i = 0; i < params.rows; ++i) space.add(vocab.token(i), params.pivot_row(i));
  return space;
}

EmbeddingSpace train(const std::vector<PseudoBilingualDocument>& docs, const Vocabulary& vocab,
                     const TrainingConfig& cfg, TrainStats* stats) {
  if (docs.empty()) throw ConfigError("training needs at least one document");
  return make_space(train_params(index_documents(docs, vocab), vocab, cfg, stats), vocab);
}

}  // namespace bwesg
