#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bwesg/corpus.hpp"

namespace bwesg {

enum class Strategy { MergeShuffle, LengthRatio, Concat };

/// "merge", "ratio" or "concat".
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

/// One interleaved, language-tagged token sequence built from an aligned pair.
struct PseudoBilingualDocument {
  std::vector<Token> tokens;
  std::string origin_id;
  Strategy strategy = Strategy::Concat;
};

/// Concatenates source ++ target and applies a Fisher-Yates shuffle driven by
/// Rng(seed). Throws EmptyDocumentError if both sides are empty.
PseudoBilingualDocument merge_and_shuffle(const DocumentPair& pair, std::uint64_t seed);

/// Deterministic interleaving by length ratio.
///
/// With L the longer side and S the shorter (the source side wins ties), emits
/// floor(|L|/|S|) tokens of L followed by one token of S until S is exhausted,
/// then the remaining |L| mod |S| tokens of L. Monolingual order is preserved.
/// Throws EmptyDocumentError if either side is empty.
PseudoBilingualDocument length_ratio_shuffle(const DocumentPair& pair);

/// source ++ target. Throws EmptyDocumentError if both sides are empty.
PseudoBilingualDocument concat(const DocumentPair& pair);

struct ShuffleResult {
  std::vector<PseudoBilingualDocument> documents;
  std::size_t skipped = 0;
};

/// Applies a strategy to every pair, in corpus order. Pairs that violate the
/// strategy's precondition are skipped and counted. Pair i is shuffled with
/// derive_seed(seed, i), so results do not depend on how the corpus is sliced.
ShuffleResult shuffle_corpus(const AlignedCorpus& corpus, Strategy strategy, std::uint64_t seed);

/// One document per line, tokens as `lang:surface` separated by single spaces.
void write_pseudo_documents(std::ostream& out, const std::vector<PseudoBilingualDocument>& docs);
std::vector<PseudoBilingualDocument> read_pseudo_documents(std::istream& in);
std::vector<PseudoBilingualDocument> read_pseudo_documents(const std::filesystem::path& path);

}  // namespace bwesg
