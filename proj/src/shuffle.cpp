#include "bwesg/shuffle.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "bwesg/error.hpp"
#include "bwesg/random.hpp"

namespace bwesg {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::MergeShuffle:
      return "merge";
    case Strategy::LengthRatio:
      return "ratio";
    case Strategy::Concat:
      return "concat";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "merge") return Strategy::MergeShuffle;
  if (name == "ratio") return Strategy::LengthRatio;
  if (name == "concat") return Strategy::Concat;
  throw ConfigError("unknown strategy '" + std::string(name) + "' (expected merge, ratio or concat)");
}

namespace {

std::vector<Token> concatenated(const DocumentPair& pair) {
  std::vector<Token> out;
  out.reserve(pair.source_tokens.size() + pair.target_tokens.size());
  out.insert(out.end(), pair.source_tokens.begin(), pair.source_tokens.end());
  out.insert(out.end(), pair.target_tokens.begin(), pair.target_tokens.end());
  return out;
}

void require_nonempty(const DocumentPair& pair) {
  if (pair.source_tokens.empty() && pair.target_tokens.empty()) {
    throw EmptyDocumentError("document pair '" + pair.id + "' has two empty sides");
  }
}

}  // namespace

PseudoBilingualDocument merge_and_shuffle(const DocumentPair& pair, std::uint64_t seed) {
  require_nonempty(pair);
  PseudoBilingualDocument doc{concatenated(pair), pair.id, Strategy::MergeShuffle};
  Rng rng(seed);
  auto& t = doc.tokens;
  for (std::size_t i = t.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i + 1));
    std::swap(t[i], t[j]);
  }
  return doc;
}

PseudoBilingualDocument length_ratio_shuffle(const DocumentPair& pair) {
  if (pair.source_tokens.empty() || pair.target_tokens.empty()) {
    throw EmptyDocumentError("length-ratio shuffle needs two non-empty sides (document '" + pair.id + "')");
  }
  const bool source_longer = pair.source_tokens.size() >= pair.target_tokens.size();
  const auto& longer = source_longer ? pair.source_tokens : pair.target_tokens;
  const auto& shorter = source_longer ? pair.target_tokens : pair.source_tokens;
  const std::size_t ratio = longer.size() / shorter.size();

  PseudoBilingualDocument doc{{}, pair.id, Strategy::LengthRatio};
  doc.tokens.reserve(longer.size() + shorter.size());
  auto next_long = longer.begin();
  for (const auto& s : shorter) {
    doc.tokens.insert(doc.tokens.end(), next_long, next_long + static_cast<std::ptrdiff_t>(ratio));
    next_long += static_cast<std::ptrdiff_t>(ratio);
    doc.tokens.push_back(s);
  }
  doc.tokens.insert(doc.tokens.end(), next_long, longer.end());
  return doc;
}

PseudoBilingualDocument concat(const DocumentPair& pair) {
  require_nonempty(pair);
  return {concatenated(pair), pair.id, Strategy::Concat};
}

ShuffleResult shuffle_corpus(const AlignedCorpus& corpus, Strategy strategy, std::uint64_t seed) {
  ShuffleResult result;
  result.documents.reserve(corpus.pairs.size());
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    const auto& pair = corpus.pairs[i];
    const bool has_source = !pair.source_tokens.empty();
    const bool has_target = !pair.target_tokens.empty();
    switch (strategy) {
      case Strategy::LengthRatio:
        if (!has_source || !has_target) {
          ++result.skipped;
          continue;
        }
        result.documents.push_back(length_ratio_shuffle(pair));
        break;
      case Strategy::MergeShuffle:
        if (!has_source && !has_target) {
          ++result.skipped;
          continue;
        }
        result.documents.push_back(merge_and_shuffle(pair, derive_seed(seed, i)));
        break;
      case Strategy::Concat:
        if (!has_source && !has_target) {
          ++result.skipped;
          continue;
        }
        result.documents.push_back(concat(pair));
        break;
    }
  }
  return result;
}

void write_pseudo_documents(std::ostream& out, const std::vector<PseudoBilingualDocument>& docs) {
  for (const auto& doc : docs) {
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i) out << ' ';
      out << doc.tokens[i].lang << ':' << doc.tokens[i].surface;
    }
    out << '\n';
  }
}

std::vector<PseudoBilingualDocument> read_pseudo_documents(std::istream& in) {
  std::vector<PseudoBilingualDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    PseudoBilingualDocument doc;
    doc.origin_id = std::to_string(line_no);
    std::string_view rest(line);
    while (!rest.empty()) {
      const std::size_t sp = rest.find(' ');
      const std::string_view word = rest.substr(0, sp);
      if (!word.empty()) {
        try {
          doc.tokens.push_back(parse_token(word));
        } catch (const ParseError& e) {
          throw ParseError(e.what(), line_no);
        }
      }
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }
    if (!doc.tokens.empty()) docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<PseudoBilingualDocument> read_pseudo_documents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pseudo-document file " + path.string());
  return read_pseudo_documents(in);
}

}  // namespace bwesg
