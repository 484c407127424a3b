#include "bwesg/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "bwesg/error.hpp"

namespace bwesg {

namespace {

bool has_space(std::string_view s) {
  return s.find_first_of(" \t\n\r\v\f") != std::string_view::npos;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string to_string(const Token& token) { return token.lang + ':' + token.surface; }

Token parse_token(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw ParseError("expected lang:surface token, got '" + std::string(text) + "'");
  }
  if (has_space(text)) throw ParseError("token contains whitespace: '" + std::string(text) + "'");
  return Token{std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

AlignedCorpus load_corpus(const std::filesystem::path& path, std::string_view format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return parse_corpus(in, format);
}

AlignedCorpus parse_corpus(std::istream& in, std::string_view format) {
  if (format != kDapcTsv) throw FormatError("unsupported corpus format '" + std::string(format) + "'");

  struct Slot {
    std::optional<std::vector<std::string>> by_lang[2];
  };
  std::vector<std::string> langs;
  std::vector<std::string> order;
  std::unordered_map<std::string, Slot> slots;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError("expected 3 tab-separated fields, got " + std::to_string(fields.size()), line_no);
    }
    const std::string id(fields[0]);
    const std::string lang(fields[1]);
    if (id.empty()) throw ParseError("empty document id", line_no);
    if (lang.empty()) throw ParseError("empty language code", line_no);

    auto lang_it = std::find(langs.begin(), langs.end(), lang);
    if (lang_it == langs.end()) {
      if (langs.size() == 2) {
        throw FormatError("line " + std::to_string(line_no) + ": third language tag '" + lang +
                          "' (corpus already has '" + langs[0] + "' and '" + langs[1] + "')");
      }
      langs.push_back(lang);
      lang_it = langs.end() - 1;
    }
    const auto side = static_cast<std::size_t>(lang_it - langs.begin());

    auto [slot_it, inserted] = slots.try_emplace(id);
    if (inserted) order.push_back(id);
    auto& dest = slot_it->second.by_lang[side];
    if (dest) throw ParseError("duplicate record for document '" + id + "' language '" + lang + "'", line_no);

    std::vector<std::string> tokens;
    for (std::string_view tok : split(fields[2], ' ')) {
      if (!tok.empty()) tokens.emplace_back(tok);
    }
    dest = std::move(tokens);
  }

  if (order.empty()) throw FormatError("corpus contains no document records");

  AlignedCorpus corpus;
  corpus.source_lang = langs[0];
  corpus.target_lang = langs.size() > 1 ? langs[1] : std::string();
  corpus.pairs.reserve(order.size());
  for (const auto& id : order) {
    auto& slot = slots.at(id);
    if (!slot.by_lang[0] || !slot.by_lang[1]) {
      throw AlignmentError("document '" + id + "' has only one language present");
    }
    DocumentPair pair{id, {}, {}};
    pair.source_tokens.reserve(slot.by_lang[0]->size());
    for (auto& s : *slot.by_lang[0]) pair.source_tokens.push_back({corpus.source_lang, std::move(s)});
    pair.target_tokens.reserve(slot.by_lang[1]->size());
    for (auto& s : *slot.by_lang[1]) pair.target_tokens.push_back({corpus.target_lang, std::move(s)});
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

void write_corpus(std::ostream& out, const AlignedCorpus& corpus) {
  auto write_side = [&](const std::string& id, const std::string& lang, const std::vector<Token>& toks) {
    out << id << '\t' << lang << '\t';
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) out << ' ';
      out << toks[i].surface;
    }
    out << '\n';
  };
  for (const auto& pair : corpus.pairs) {
    write_side(pair.id, corpus.source_lang, pair.source_tokens);
    write_side(pair.id, corpus.target_lang, pair.target_tokens);
  }
}

Vocabulary Vocabulary::from_counts(const std::unordered_map<Token, std::uint64_t, TokenHash>& counts,
                                   std::uint64_t min_count) {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");

  std::vector<std::pair<Token, std::uint64_t>> kept;
  for (const auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  if (kept.empty()) {
    throw ConfigError("vocabulary is empty after applying min_count=" + std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.min_count_ = min_count;
  v.tokens_.reserve(kept.size());
  v.counts_.reserve(kept.size());
  for (auto& [token, count] : kept) {
    v.index_.emplace(token, v.tokens_.size());
    v.lang_totals_[token.lang] += count;
    v.total_ += count;
    v.tokens_.push_back(std::move(token));
    v.counts_.push_back(count);
  }
  return v;
}

std::optional<std::size_t> Vocabulary::find(const Token& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::total_tokens(const std::string& lang) const {
  const auto it = lang_totals_.find(lang);
  return it == lang_totals_.end() ? 0 : it->second;
}

Vocabulary build_vocabulary(const AlignedCorpus& corpus, std::uint64_t min_count) {
  std::unordered_map<Token, std::uint64_t, TokenHash> counts;
  for (const auto& pair : corpus.pairs) {
    for (const auto& t : pair.source_tokens) ++counts[t];
    for (const auto& t : pair.target_tokens) ++counts[t];
  }
  return Vocabulary::from_counts(counts, min_count);
}

DocumentPair filter_pair(const DocumentPair& pair, const Vocabulary& vocab) {
  DocumentPair out{pair.id, {}, {}};
  std::copy_if(pair.source_tokens.begin(), pair.source_tokens.end(), std::back_inserter(out.source_tokens),
               [&](const Token& t) { return vocab.contains(t); });
  std::copy_if(pair.target_tokens.begin(), pair.target_tokens.end(), std::back_inserter(out.target_tokens),
               [&](const Token& t) { return vocab.contains(t); });
  return out;
}

AlignedCorpus filter_corpus(const AlignedCorpus& corpus, const Vocabulary& vocab) {
  AlignedCorpus out{corpus.source_lang, corpus.target_lang, {}};
  out.pairs.reserve(corpus.pairs.size());
  for (const auto& pair : corpus.pairs) out.pairs.push_back(filter_pair(pair, vocab));
  return out;
}

}  // namespace bwesg
