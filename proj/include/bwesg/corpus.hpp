#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bwesg {

/// A language-tagged word. Ordered lexicographically by (lang, surface).
struct Token {
  std::string lang;
  std::string surface;

  auto operator<=>(const Token&) const = default;
  bool operator==(const Token&) const = default;
};

/// "lang:surface".
std::string to_string(const Token& token);

/// Parses "lang:surface", splitting at the first ':'. Throws ParseError when
/// either part is empty or the text contains whitespace.
Token parse_token(std::string_view text);

struct TokenHash {
  std::size_t operator()(const Token& t) const noexcept {
    const std::size_t h = std::hash<std::string>{}(t.lang);
    return h ^ (std::hash<std::string>{}(t.surface) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

/// One aligned source/target document pair.
struct DocumentPair {
  std::string id;
  std::vector<Token> source_tokens;
  std::vector<Token> target_tokens;
};

struct AlignedCorpus {
  std::string source_lang;
  std::string target_lang;
  std::vector<DocumentPair> pairs;
};

/// Identifier of the only supported corpus format.
inline constexpr std::string_view kDapcTsv = "dapc-tsv";

/// Reads a document-aligned corpus in the "dapc-tsv" format:
/// `doc_id<TAB>lang<TAB>space-separated tokens`, one record per line.
///
/// The source language is the language of the first record in the file.
/// Pairs are emitted in order of first appearance of their id.
AlignedCorpus load_corpus(const std::filesystem::path& path, std::string_view format = kDapcTsv);
AlignedCorpus parse_corpus(std::istream& in, std::string_view format = kDapcTsv);

/// Writes a corpus in the "dapc-tsv" format (source record first per pair).
void write_corpus(std::ostream& out, const AlignedCorpus& corpus);

/// Frequency-filtered union vocabulary over both languages.
///
/// Indices are dense and assigned by descending count, ties broken by
/// (lang, surface).
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Keeps every type whose count is at least min_count. Throws ConfigError
  /// if min_count < 1 or nothing survives.
  static Vocabulary from_counts(const std::unordered_map<Token, std::uint64_t, TokenHash>& counts,
                                std::uint64_t min_count);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  std::optional<std::size_t> find(const Token& token) const;
  bool contains(const Token& token) const { return find(token).has_value(); }

  const Token& token(std::size_t index) const { return tokens_.at(index); }
  std::uint64_t count(std::size_t index) const { return counts_.at(index); }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::span<const Token> tokens() const noexcept { return tokens_; }

  std::uint64_t min_count() const noexcept { return min_count_; }

  /// Sum of counts of retained types of one language (0 for unknown langs).
  std::uint64_t total_tokens(const std::string& lang) const;
  /// Sum of counts of all retained types, both languages pooled.
  std::uint64_t total_tokens() const noexcept { return total_; }

 private:
  std::vector<Token> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<Token, std::size_t, TokenHash> index_;
  std::map<std::string, std::uint64_t> lang_totals_;
  std::uint64_t total_ = 0;
  std::uint64_t min_count_ = 1;
};

/// Counts every (lang, surface) type of the corpus and keeps those occurring
/// at least min_count times. The threshold applies per language-tagged type.
Vocabulary build_vocabulary(const AlignedCorpus& corpus, std::uint64_t min_count);

/// Drops out-of-vocabulary tokens, preserving the order of the survivors.
DocumentPair filter_pair(const DocumentPair& pair, const Vocabulary& vocab);

/// filter_pair applied to every pair of the corpus.
AlignedCorpus filter_corpus(const AlignedCorpus& corpus, const Vocabulary& vocab);

}  // namespace bwesg
