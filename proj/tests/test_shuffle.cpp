#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bwesg/error.hpp"
#include "bwesg/random.hpp"
#include "bwesg/shuffle.hpp"

using namespace bwesg;

namespace {

std::vector<Token> toks(const std::string& lang, std::initializer_list<const char*> words) {
  std::vector<Token> out;
  for (auto w : words) out.push_back({lang, w});
  return out;
}

DocumentPair make_pair(std::size_t m_s, std::size_t m_t) {
  DocumentPair p{"p", {}, {}};
  for (std::size_t i = 0; i < m_s; ++i) p.source_tokens.push_back({"S", "s" + std::to_string(i)});
  for (std::size_t i = 0; i < m_t; ++i) p.target_tokens.push_back({"T", "t" + std::to_string(i)});
  return p;
}

// Direct simulation of the interleaving procedure with explicit cursors.
std::string ratio_pattern_oracle(std::size_t m_long, std::size_t m_short) {
  std::string out;
  const std::size_t r = m_long / m_short;
  std::size_t long_used = 0, short_used = 0;
  while (short_used < m_short) {
    for (std::size_t i = 0; i < r; ++i, ++long_used) out += 'L';
    out += 'T';
    ++short_used;
  }
  for (std::size_t i = 0; i < m_long % m_short; ++i, ++long_used) out += 'L';
  return out;
}

}  // namespace

TEST_CASE("length-ratio shuffle reproduces the Frodo example") {
  const DocumentPair pair{"toy", toks("en", {"Frodo", "Sam", "orcs", "goblins", "Mordor", "ring"}),
                          toks("es", {"anillo", "orcos", "mago"})};
  const auto doc = length_ratio_shuffle(pair);
  std::vector<std::string> got;
  for (const auto& t : doc.tokens) got.push_back(t.surface);
  CHECK(got == std::vector<std::string>{"Frodo", "Sam", "anillo", "orcs", "goblins", "orcos", "Mordor", "ring", "mago"});
  CHECK(doc.strategy == Strategy::LengthRatio);
}

TEST_CASE("length-ratio shuffle ties alternate starting with the source") {
  const DocumentPair pair{"p", toks("S", {"a", "b"}), toks("T", {"x", "y"})};
  const auto doc = length_ratio_shuffle(pair);
  CHECK(doc.tokens == std::vector<Token>{{"S", "a"}, {"T", "x"}, {"S", "b"}, {"T", "y"}});
}

TEST_CASE("length-ratio pattern matches a step-wise simulation") {
  SUBCASE("7 vs 3") {
    const auto doc = length_ratio_shuffle(make_pair(7, 3));
    std::string pattern;
    for (const auto& t : doc.tokens) pattern += t.lang == "S" ? 'L' : 'T';
    CHECK(pattern == "LLTLLTLLTL");
    CHECK(pattern == ratio_pattern_oracle(7, 3));
  }
  SUBCASE("target longer swaps roles") {
    const auto doc = length_ratio_shuffle(make_pair(2, 5));
    std::string pattern;
    for (const auto& t : doc.tokens) pattern += t.lang == "T" ? 'L' : 'T';
    CHECK(pattern == ratio_pattern_oracle(5, 2));
  }
  SUBCASE("all small shapes") {
    for (std::size_t a = 1; a <= 12; ++a) {
      for (std::size_t b = 1; b <= 12; ++b) {
        const auto doc = length_ratio_shuffle(make_pair(a, b));
        const std::string longer = a >= b ? "S" : "T";
        std::string pattern;
        for (const auto& t : doc.tokens) pattern += t.lang == longer ? 'L' : 'T';
        CHECK(pattern == ratio_pattern_oracle(std::max(a, b), std::min(a, b)));
      }
    }
  }
}

TEST_CASE("length-ratio shuffle rejects an empty side") {
  CHECK_THROWS_AS(length_ratio_shuffle(make_pair(3, 0)), EmptyDocumentError);
  CHECK_THROWS_AS(length_ratio_shuffle(make_pair(0, 3)), EmptyDocumentError);
}

TEST_CASE("concat") {
  const DocumentPair pair{"p", toks("S", {"a", "b"}), toks("T", {"x"})};
  CHECK(concat(pair).tokens == std::vector<Token>{{"S", "a"}, {"S", "b"}, {"T", "x"}});
  const auto one_sided = concat(make_pair(3, 0));
  CHECK(one_sided.tokens == make_pair(3, 0).source_tokens);
  CHECK_THROWS_AS(concat(make_pair(0, 0)), EmptyDocumentError);
}

TEST_CASE("merge_and_shuffle basics") {
  const auto single = make_pair(1, 0);
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    CHECK(merge_and_shuffle(single, seed).tokens == single.source_tokens);
  }
  const auto pair = make_pair(6, 4);
  CHECK(merge_and_shuffle(pair, 42).tokens == merge_and_shuffle(pair, 42).tokens);
  CHECK_THROWS_AS(merge_and_shuffle(make_pair(0, 0), 1), EmptyDocumentError);
}

TEST_CASE("merge_and_shuffle first-token language is balanced over seeds") {
  const auto pair = make_pair(5, 5);
  int source_first = 0;
  constexpr int kSeeds = 10'000;
  for (int s = 0; s < kSeeds; ++s) source_first += merge_and_shuffle(pair, static_cast<std::uint64_t>(s)).tokens[0].lang == "S";
  CHECK(static_cast<double>(source_first) / kSeeds == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("merge_and_shuffle position marginals are uniform") {
  // Each of the 4 tokens should land in each of the 4 slots with p = 1/4.
  const auto pair = make_pair(2, 2);
  std::map<std::pair<std::string, std::size_t>, int> hits;
  constexpr int kSeeds = 40'000;
  for (int s = 0; s < kSeeds; ++s) {
    const auto doc = merge_and_shuffle(pair, static_cast<std::uint64_t>(s) * 7919);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) ++hits[{doc.tokens[i].surface, i}];
  }
  for (const auto& [key, n] : hits) CHECK(std::abs(static_cast<double>(n) / kSeeds - 0.25) < 0.015);
}

TEST_CASE("merge_and_shuffle is seed-sensitive on long documents") {
  const auto pair = make_pair(5, 5);
  std::set<std::vector<Token>> seen;
  for (std::uint64_t s = 0; s < 50; ++s) seen.insert(merge_and_shuffle(pair, s).tokens);
  CHECK(seen.size() >= 49);
}

TEST_CASE("shuffle invariants on random pairs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    DocumentPair p{"r", {}, {}};
    const auto ns = 1 + rng.uniform_index(40), nt = 1 + rng.uniform_index(40);
    for (std::size_t i = 0; i < ns; ++i) p.source_tokens.push_back({"S", std::to_string(rng.uniform_index(10))});
    for (std::size_t i = 0; i < nt; ++i) p.target_tokens.push_back({"T", std::to_string(rng.uniform_index(10))});
    auto expected = p.source_tokens;
    expected.insert(expected.end(), p.target_tokens.begin(), p.target_tokens.end());
    std::sort(expected.begin(), expected.end());

    for (const auto& doc : {length_ratio_shuffle(p), merge_and_shuffle(p, rng.next()), concat(p)}) {
      auto got = doc.tokens;
      std::sort(got.begin(), got.end());
      CHECK(got == expected);
    }
    const auto lr = length_ratio_shuffle(p);
    std::vector<Token> src, tgt;
    for (const auto& t : lr.tokens) (t.lang == "S" ? src : tgt).push_back(t);
    CHECK(src == p.source_tokens);
    CHECK(tgt == p.target_tokens);
    const auto cc = concat(p);
    CHECK(std::equal(p.source_tokens.begin(), p.source_tokens.end(), cc.tokens.begin()));
  }
}

TEST_CASE("shuffle_corpus") {
  AlignedCorpus corpus{"S", "T", {make_pair(2, 1), make_pair(3, 0), make_pair(1, 4)}};
  corpus.pairs[0].id = "a";
  corpus.pairs[1].id = "b";
  corpus.pairs[2].id = "c";

  SUBCASE("concat keeps order and every pair") {
    const auto r = shuffle_corpus(corpus, Strategy::Concat, 0);
    REQUIRE(r.documents.size() == 3);
    CHECK(r.skipped == 0);
    CHECK(r.documents[0].origin_id == "a");
    CHECK(r.documents[2].origin_id == "c");
  }
  SUBCASE("length ratio skips the empty-sided pair") {
    const auto r = shuffle_corpus(corpus, Strategy::LengthRatio, 0);
    CHECK(r.documents.size() == 2);
    CHECK(r.skipped == 1);
  }
  SUBCASE("merge uses seed xor ordinal per pair") {
    const auto r = shuffle_corpus(corpus, Strategy::MergeShuffle, 77);
    REQUIRE(r.documents.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(r.documents[i].tokens == merge_and_shuffle(corpus.pairs[i], derive_seed(77, i)).tokens);
    }
  }
  SUBCASE("merge output stream is byte-identical across runs") {
    std::ostringstream a, b;
    write_pseudo_documents(a, shuffle_corpus(corpus, Strategy::MergeShuffle, 5).documents);
    write_pseudo_documents(b, shuffle_corpus(corpus, Strategy::MergeShuffle, 5).documents);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("pseudo-document text format") {
  const std::vector<PseudoBilingualDocument> docs{length_ratio_shuffle(make_pair(2, 1))};
  std::ostringstream out;
  write_pseudo_documents(out, docs);
  CHECK(out.str() == "S:s0 S:s1 T:t0\n");
  std::istringstream in(out.str());
  const auto back = read_pseudo_documents(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].tokens == docs[0].tokens);

  std::istringstream bad("S:a nolang\n");
  CHECK_THROWS_AS(read_pseudo_documents(bad), ParseError);
}

TEST_CASE("strategy names") {
  for (auto s : {Strategy::MergeShuffle, Strategy::LengthRatio, Strategy::Concat}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
  CHECK_THROWS_AS(parse_strategy("blend"), ConfigError);
}
