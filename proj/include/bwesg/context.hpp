#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bwesg/corpus.hpp"
#include "bwesg/space.hpp"

namespace bwesg {

/// Multiset of words observed around one occurrence of `pivot`.
struct ContextBag {
  Token pivot;
  std::vector<Token> words;
};

enum class ContextMethod { InterpolatedAdd, AddMelamud, MultMelamud };

ContextMethod parse_context_method(std::string_view name);
std::string_view context_method_name(ContextMethod m);

struct ContextScorerConfig {
  ContextMethod method = ContextMethod::InterpolatedAdd;
  /// Weight of the composed context in InterpolatedAdd; must lie in [0, 1].
  double lambda = 1.0;

  void validate() const;
};

/// Sum of the vectors of the in-space bag words. Out-of-space words are
/// skipped and counted into *oov when given. Throws EmptyContextError when no
/// bag word is in the space.
std::vector<double> compose(const EmbeddingSpace& space, const ContextBag& bag, std::size_t* oov = nullptr);

/// (1 - lambda) * vec(w) + lambda * compose(bag). With lambda == 0 the bag is
/// not consulted.
std::vector<double> contextualize(const EmbeddingSpace& space, const Token& w, const ContextBag& bag, double lambda);

/// (cos(x, y) + 1) / 2.
double shifted_cosine(std::span<const float> x, std::span<const float> y);

/// Context-sensitive similarity of w and candidate t:
///  - InterpolatedAdd: cos(contextualize(w, bag, lambda), t)
///  - AddMelamud: mean of cos(w, t) and cos(cw, t) over in-space bag words
///  - MultMelamud: geometric mean of the shifted cosines of the same terms
double score_in_context(const EmbeddingSpace& space, const Token& w, const Token& t, const ContextBag& bag,
                        const ContextScorerConfig& cfg, std::size_t* oov = nullptr);

/// Candidates scored by score_in_context, best first, ties by token order.
/// Throws UnknownWordError naming the first candidate missing from the space.
std::vector<ScoredToken> rank_candidates(const EmbeddingSpace& space, const Token& w, const ContextBag& bag,
                                         const std::vector<Token>& candidates, const ContextScorerConfig& cfg,
                                         std::size_t* oov = nullptr);

}  // namespace bwesg
