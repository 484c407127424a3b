#include "bwesg/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "bwesg/error.hpp"

namespace bwesg {

void EmbeddingSpace::add(const Token& token, std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw FormatError("vector for '" + to_string(token) + "' has " + std::to_string(vec.size()) +
                      " components, expected " + std::to_string(dim_));
  }
  double sq = 0.0;
  for (float x : vec) {
    if (!std::isfinite(x)) throw FormatError("non-finite component in vector for '" + to_string(token) + "'");
    sq += static_cast<double>(x) * static_cast<double>(x);
  }
  if (!index_.emplace(token, tokens_.size()).second) {
    throw FormatError("duplicate token '" + to_string(token) + "'");
  }
  tokens_.push_back(token);
  data_.insert(data_.end(), vec.begin(), vec.end());
  norms_.push_back(std::sqrt(sq));
}

std::optional<std::size_t> EmbeddingSpace::find(const Token& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingSpace::index_of(const Token& token) const {
  const auto idx = find(token);
  if (!idx) throw UnknownWordError("unknown word '" + to_string(token) + "'");
  return *idx;
}

EmbeddingSpace EmbeddingSpace::scaled(float factor) const {
  EmbeddingSpace out(dim_);
  std::vector<float> buf(dim_);
  for (std::size_t i = 0; i < size(); ++i) {
    auto v = vector(i);
    std::transform(v.begin(), v.end(), buf.begin(), [&](float x) { return x * factor; });
    out.add(tokens_[i], buf);
  }
  return out;
}

void save_space(std::ostream& out, const EmbeddingSpace& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << to_string(space.token(i));
    for (float x : space.vector(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(text) + "'", line_no);
  }
  return value;
}

}  // namespace

EmbeddingSpace load_space(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header line", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_spaces(line);
  if (header.size() != 2) throw ParseError("header must be '<vocab size> <dim>'", 1);
  const auto n = parse_number<std::size_t>(header[0], 1, "vocabulary size");
  const auto dim = parse_number<std::size_t>(header[1], 1, "dimension");
  if (dim == 0) throw ParseError("dimension must be positive", 1);

  EmbeddingSpace space(dim);
  std::vector<float> vec(dim);
  std::size_t line_no = 1;
  while (space.size() < n) {
    if (!std::getline(in, line)) {
      throw ParseError("expected " + std::to_string(n) + " vectors, found " + std::to_string(space.size()));
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_spaces(line);
    if (fields.size() != dim + 1) {
      throw ParseError("expected token and " + std::to_string(dim) + " values", line_no);
    }
    Token token;
    try {
      token = parse_token(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    for (std::size_t k = 0; k < dim; ++k) vec[k] = parse_number<float>(fields[k + 1], line_no, "float");
    try {
      space.add(token, vec);
    } catch (const FormatError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return space;
}

EmbeddingSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path.string());
  return load_space(in);
}

void export_plain(std::ostream& out, const EmbeddingSpace& space) {
  out << space.size() << ' ' << space.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& t = space.token(i);
    out << t.surface << ' ' << t.lang;
    for (float x : space.vector(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

namespace {

template <typename Real>
double cosine_impl(std::span<const Real> a, std::span<const Real> b) {
  if (a.size() != b.size()) throw DomainError("cosine of vectors with different dimensionality");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto x = static_cast<double>(a[k]);
    const auto y = static_cast<double>(b[k]);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine is undefined for a zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }
double cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

double hellinger(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DomainError("hellinger of vectors with different dimensionality");
  auto check = [](std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) {
      if (!(x >= 0.0)) throw DomainError("hellinger requires non-negative components");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("hellinger requires vectors summing to 1");
  };
  check(p);
  check(q);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double diff = std::sqrt(p[k]) - std::sqrt(q[k]);
    acc += diff * diff;
  }
  return std::sqrt(acc) / std::sqrt(2.0);
}

QueryMode parse_query_mode(std::string_view name) {
  if (name == "mono") return QueryMode::Monolingual;
  if (name == "cross") return QueryMode::CrossLingual;
  if (name == "multi") return QueryMode::Multilingual;
  throw ConfigError("unknown query mode '" + std::string(name) + "' (expected mono, cross or multi)");
}

std::string_view query_mode_name(QueryMode mode) {
  switch (mode) {
    case QueryMode::Monolingual:
      return "mono";
    case QueryMode::CrossLingual:
      return "cross";
    case QueryMode::Multilingual:
      return "multi";
  }
  return "unknown";
}

namespace {

bool score_order(const ScoredToken& a, const ScoredToken& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.token < b.token;
}

}  // namespace

void sort_by_score(std::vector<ScoredToken>& items) { std::sort(items.begin(), items.end(), score_order); }

RankedList ranked_list(const EmbeddingSpace& space, const Token& query, QueryMode mode, std::size_t limit) {
  const std::size_t qi = space.index_of(query);
  RankedList list{query, mode, limit, {}};
  if (limit == 0) return list;
  if (space.norm(qi) == 0.0) throw DomainError("query '" + to_string(query) + "' has a zero vector");

  const auto qv = space.vector(qi);
  std::vector<ScoredToken> scored;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i == qi) continue;
    const auto& t = space.token(i);
    const bool same_lang = t.lang == query.lang;
    if (mode == QueryMode::Monolingual && !same_lang) continue;
    if (mode == QueryMode::CrossLingual && same_lang) continue;
    if (space.norm(i) == 0.0) continue;
    scored.push_back({t, cosine(qv, space.vector(i))});
  }
  const std::size_t keep = std::min(limit, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), score_order);
  scored.resize(keep);
  list.items = std::move(scored);
  return list;
}

Token nearest_cross(const EmbeddingSpace& space, const Token& query) {
  auto list = ranked_list(space, query, QueryMode::CrossLingual, 1);
  if (list.items.empty()) throw DomainError("no cross-lingual candidate for '" + to_string(query) + "'");
  return list.items.front().token;
}

}  // namespace bwesg
