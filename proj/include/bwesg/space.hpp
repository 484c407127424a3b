#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bwesg/corpus.hpp"

namespace bwesg {

/// Language-tagged word vectors sharing one d-dimensional space.
class EmbeddingSpace {
 public:
  explicit EmbeddingSpace(std::size_t dim = 0) : dim_(dim) {}

  /// Appends a vector. Throws FormatError on a duplicate token, wrong
  /// dimensionality or non-finite component.
  void add(const Token& token, std::span<const float> vec);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  std::optional<std::size_t> find(const Token& token) const;
  bool contains(const Token& token) const { return find(token).has_value(); }
  /// Throws UnknownWordError when absent.
  std::size_t index_of(const Token& token) const;

  const Token& token(std::size_t i) const { return tokens_.at(i); }
  std::span<const Token> tokens() const noexcept { return tokens_; }
  std::span<const float> vector(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<const float> vector(const Token& token) const { return vector(index_of(token)); }
  double norm(std::size_t i) const { return norms_.at(i); }

  /// Returns a copy with every vector multiplied by factor.
  EmbeddingSpace scaled(float factor) const;

 private:
  std::size_t dim_;
  std::vector<Token> tokens_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<Token, std::size_t, TokenHash> index_;
};

/// Model text format: `|V| d` header, then `lang:surface f_1 ... f_d` per line.
/// Floats are written in shortest round-trip form, so save/load is lossless.
void save_space(std::ostream& out, const EmbeddingSpace& space);
EmbeddingSpace load_space(std::istream& in);
EmbeddingSpace load_space(const std::filesystem::path& path);

/// Interoperability export: `|V| d` header, then `surface lang f_1 ... f_d`.
void export_plain(std::ostream& out, const EmbeddingSpace& space);

/// (a . b) / (|a| |b|). Throws DomainError on a zero-norm argument.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(std::span<const float> a, std::span<const float> b);

/// Hellinger distance (1/sqrt 2) * sqrt(sum (sqrt p_k - sqrt q_k)^2) between two
/// probability vectors; 0 for identical inputs, 1 for disjoint supports.
/// Throws DomainError on a negative component or a sum outside 1 +- 1e-9.
double hellinger(std::span<const double> p, std::span<const double> q);

enum class QueryMode { Monolingual, CrossLingual, Multilingual };

QueryMode parse_query_mode(std::string_view name);
std::string_view query_mode_name(QueryMode mode);

struct ScoredToken {
  Token token;
  double score = 0.0;
};

/// Sorts by descending score, ties by ascending (lang, surface).
void sort_by_score(std::vector<ScoredToken>& items);

struct RankedList {
  Token query;
  QueryMode mode = QueryMode::Multilingual;
  std::size_t limit = 0;
  std::vector<ScoredToken> items;
};

/// Cosine-ranked neighbours of query, restricted by mode, excluding the query
/// itself, pruned to the top `limit`. Throws UnknownWordError for an absent
/// query.
RankedList ranked_list(const EmbeddingSpace& space, const Token& query, QueryMode mode, std::size_t limit);

/// Highest-cosine word of the other language. Throws UnknownWordError for an
/// absent query and DomainError when the space has no other-language word.
Token nearest_cross(const EmbeddingSpace& space, const Token& query);

}  // namespace bwesg
