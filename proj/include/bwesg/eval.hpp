#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "bwesg/context.hpp"
#include "bwesg/corpus.hpp"
#include "bwesg/space.hpp"

namespace bwesg {

/// Gold one-to-one translation pairs, source -> target.
struct BleTestSet {
  std::vector<std::pair<Token, Token>> pairs;
};

/// `src_lang:src<TAB>tgt_lang:gold` per line; '#' lines and blank lines are
/// skipped. Throws ParseError on a malformed line or repeated source.
BleTestSet parse_ble_test(std::istream& in);
BleTestSet load_ble_test(const std::filesystem::path& path);

struct SwtcInstance {
  Token pivot;
  std::vector<Token> sentence;
  std::vector<Token> candidates;
  Token gold;
};

/// `pivot<TAB>gold<TAB>c1,c2,...<TAB>sentence tokens` per line.
std::vector<SwtcInstance> parse_swtc_instances(std::istream& in);
std::vector<SwtcInstance> load_swtc_instances(const std::filesystem::path& path);
void write_swtc_instances(std::ostream& out, const std::vector<SwtcInstance>& instances);

/// The sentence minus the first occurrence of the pivot.
ContextBag context_bag(const SwtcInstance& instance);

struct EvalResult {
  std::vector<bool> correct;
  /// Whether every token the item needs was present in the space.
  std::vector<bool> covered;
  double acc1 = 0.0;
  double coverage = 0.0;
  /// Out-of-vocabulary context words dropped while scoring.
  std::size_t oov_context = 0;

  std::size_t size() const noexcept { return correct.size(); }
  std::size_t num_correct() const;
};

/// Acc1 of cross-lingual nearest neighbours against the gold translations,
/// over the full test-set size. Items whose source or gold is missing from the
/// space count as incorrect and uncovered.
EvalResult ble_evaluate(const EmbeddingSpace& space, const BleTestSet& test);

/// Acc1 of context-sensitive candidate ranking. Instances with an unknown
/// pivot or candidate, or (InterpolatedAdd, lambda > 0) no in-space context
/// word, count as incorrect and uncovered.
EvalResult swtc_evaluate(const EmbeddingSpace& space, const std::vector<SwtcInstance>& instances,
                         const ContextScorerConfig& cfg);

/// Context-free baseline: the candidate with the highest cosine to the pivot.
EvalResult no_context_baseline(const EmbeddingSpace& space, const std::vector<SwtcInstance>& instances);

struct McNemarResult {
  double chi2 = 0.0;
  bool significant = false;
  std::size_t only_a = 0;  ///< a correct, b wrong
  std::size_t only_b = 0;  ///< a wrong, b correct
};

inline constexpr double kChi2Critical95 = 3.841;

/// Continuity-corrected McNemar test on paired correctness bits:
/// chi2 = (|b10 - b01| - 1)^2 / (b10 + b01), significant iff chi2 > 3.841.
/// Throws PairingError on a length mismatch.
McNemarResult mcnemar(const std::vector<bool>& a, const std::vector<bool>& b);

/// One 0/1 per line.
std::vector<bool> read_bits(std::istream& in);
std::vector<bool> read_bits(const std::filesystem::path& path);
void write_bits(std::ostream& out, const std::vector<bool>& bits);

struct SenseBucket {
  std::size_t senses = 0;
  std::size_t count = 0;
  std::size_t correct = 0;
  /// Empty when the bucket has no instances.
  std::optional<double> acc1;
};

/// Acc1 split by candidate-inventory size (2, 3 and 4 senses). Instances with
/// other inventory sizes are ignored.
std::array<SenseBucket, 3> acc_by_sense_count(const EvalResult& result, const std::vector<SwtcInstance>& instances);

}  // namespace bwesg
