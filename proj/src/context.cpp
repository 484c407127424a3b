#include "bwesg/context.hpp"

#include <cmath>

#include "bwesg/error.hpp"

namespace bwesg {

ContextMethod parse_context_method(std::string_view name) {
  if (name == "interp") return ContextMethod::InterpolatedAdd;
  if (name == "add-mel") return ContextMethod::AddMelamud;
  if (name == "mult-mel") return ContextMethod::MultMelamud;
  throw ConfigError("unknown context method '" + std::string(name) + "' (expected interp, add-mel or mult-mel)");
}

std::string_view context_method_name(ContextMethod m) {
  switch (m) {
    case ContextMethod::InterpolatedAdd:
      return "interp";
    case ContextMethod::AddMelamud:
      return "add-mel";
    case ContextMethod::MultMelamud:
      return "mult-mel";
  }
  return "unknown";
}

void ContextScorerConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
}

std::vector<double> compose(const EmbeddingSpace& space, const ContextBag& bag, std::size_t* oov) {
  std::vector<double> sum(space.dim(), 0.0);
  std::size_t used = 0;
  for (const auto& word : bag.words) {
    const auto idx = space.find(word);
    if (!idx) {
      if (oov) ++*oov;
      continue;
    }
    const auto v = space.vector(*idx);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += static_cast<double>(v[k]);
    ++used;
  }
  if (used == 0) throw EmptyContextError("context of '" + to_string(bag.pivot) + "' has no in-vocabulary word");
  return sum;
}

std::vector<double> contextualize(const EmbeddingSpace& space, const Token& w, const ContextBag& bag, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  const auto wv = space.vector(w);
  std::vector<double> out(wv.begin(), wv.end());
  if (lambda == 0.0) return out;
  const auto ctx = compose(space, bag);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - lambda) * out[k] + lambda * ctx[k];
  return out;
}

double shifted_cosine(std::span<const float> x, std::span<const float> y) { return (cosine(x, y) + 1.0) / 2.0; }

double score_in_context(const EmbeddingSpace& space, const Token& w, const Token& t, const ContextBag& bag,
                        const ContextScorerConfig& cfg, std::size_t* oov) {
  const auto tv = space.vector(t);
  switch (cfg.method) {
    case ContextMethod::InterpolatedAdd: {
      if (cfg.lambda == 0.0) {
        // Plain type-level similarity; identical arithmetic to the baseline.
        return cosine(space.vector(w), tv);
      }
      if (oov) {
        for (const auto& cw : bag.words)
          if (!space.contains(cw)) ++*oov;
      }
      const auto wc = contextualize(space, w, bag, cfg.lambda);
      const std::vector<double> td(tv.begin(), tv.end());
      return cosine(std::span<const double>(wc), std::span<const double>(td));
    }
    case ContextMethod::AddMelamud: {
      double sum = cosine(space.vector(w), tv);
      std::size_t terms = 1;
      for (const auto& cw : bag.words) {
        const auto idx = space.find(cw);
        if (!idx) {
          if (oov) ++*oov;
          continue;
        }
        sum += cosine(space.vector(*idx), tv);
        ++terms;
      }
      return sum / static_cast<double>(terms);
    }
    case ContextMethod::MultMelamud: {
      // Geometric mean in log space; shifted cosines lie in [0, 1].
      double log_sum = std::log(shifted_cosine(space.vector(w), tv));
      std::size_t terms = 1;
      for (const auto& cw : bag.words) {
        const auto idx = space.find(cw);
        if (!idx) {
          if (oov) ++*oov;
          continue;
        }
        log_sum += std::log(shifted_cosine(space.vector(*idx), tv));
        ++terms;
      }
      return std::exp(log_sum / static_cast<double>(terms));
    }
  }
  return 0.0;
}

std::vector<ScoredToken> rank_candidates(const EmbeddingSpace& space, const Token& w, const ContextBag& bag,
                                         const std::vector<Token>& candidates, const ContextScorerConfig& cfg,
                                         std::size_t* oov) {
  cfg.validate();
  if (candidates.empty()) throw ConfigError("rank_candidates needs at least one candidate");
  space.index_of(w);
  for (const auto& c : candidates) space.index_of(c);

  std::vector<ScoredToken> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    // OOV context words are counted once per instance, not once per candidate.
    scored.push_back({candidates[i], score_in_context(space, w, candidates[i], bag, cfg, i == 0 ? oov : nullptr)});
  }
  sort_by_score(scored);
  return scored;
}

}  // namespace bwesg
