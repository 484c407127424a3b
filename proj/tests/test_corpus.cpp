#include <doctest.h>

#include <map>
#include <sstream>

#include "bwesg/corpus.hpp"
#include "bwesg/error.hpp"
#include "bwesg/random.hpp"

using namespace bwesg;

namespace {

AlignedCorpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

// Random corpus over a small alphabet so that counts straddle thresholds.
AlignedCorpus random_corpus(Rng& rng, std::size_t pairs) {
  AlignedCorpus c{"es", "en", {}};
  for (std::size_t p = 0; p < pairs; ++p) {
    DocumentPair pair{"d" + std::to_string(p), {}, {}};
    const auto ns = rng.uniform_index(12), nt = rng.uniform_index(12);
    for (std::size_t i = 0; i < ns; ++i) pair.source_tokens.push_back({"es", "w" + std::to_string(rng.uniform_index(9))});
    for (std::size_t i = 0; i < nt; ++i) pair.target_tokens.push_back({"en", "w" + std::to_string(rng.uniform_index(9))});
    c.pairs.push_back(pair);
  }
  return c;
}

}  // namespace

TEST_CASE("tokens print and parse as lang:surface") {
  CHECK(to_string(Token{"es", "reina"}) == "es:reina");
  CHECK(parse_token("en:queen") == Token{"en", "queen"});
  CHECK(parse_token("en:a:b") == Token{"en", "a:b"});
  CHECK_THROWS_AS(parse_token("queen"), ParseError);
  CHECK_THROWS_AS(parse_token(":queen"), ParseError);
  CHECK_THROWS_AS(parse_token("en:"), ParseError);
}

TEST_CASE("load_corpus reads two well-formed pairs") {
  const auto c = parse("# comment\nd1\tes\tperro gato\nd1\ten\tdog cat\nd2\ten\thouse\nd2\tes\tcasa\n");
  REQUIRE(c.pairs.size() == 2);
  CHECK(c.source_lang == "es");
  CHECK(c.target_lang == "en");
  CHECK(c.pairs[0].id == "d1");
  CHECK(c.pairs[1].source_tokens == std::vector<Token>{{"es", "casa"}});
  CHECK(c.pairs[1].target_tokens == std::vector<Token>{{"en", "house"}});
}

TEST_CASE("toy pair round-trips with the longer side first") {
  const auto c = parse("toy\ten\tFrodo Sam orcs goblins Mordor ring\ntoy\tes\tanillo orcos mago\n");
  REQUIRE(c.pairs.size() == 1);
  CHECK(c.source_lang == "en");
  CHECK(c.pairs[0].source_tokens.size() == 6);
  CHECK(c.pairs[0].target_tokens.size() == 3);

  std::ostringstream out;
  write_corpus(out, c);
  std::istringstream back(out.str());
  const auto again = parse_corpus(back);
  CHECK(again.pairs[0].source_tokens == c.pairs[0].source_tokens);
  CHECK(again.pairs[0].target_tokens == c.pairs[0].target_tokens);
}

TEST_CASE("empty token field gives an empty side") {
  const auto c = parse("d1\tes\t\nd1\ten\tdog\n");
  CHECK(c.pairs[0].source_tokens.empty());
  CHECK(c.pairs[0].target_tokens.size() == 1);
}

TEST_CASE("load_corpus error paths") {
  SUBCASE("wrong field count names the line") {
    try {
      parse("d1\tes\tperro\nd1\ten\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("one-sided document names the id") {
    try {
      parse("d1\tes\tperro\nd1\ten\tdog\nd7\ten\tcat\n");
      FAIL("expected AlignmentError");
    } catch (const AlignmentError& e) {
      CHECK(std::string(e.what()).find("d7") != std::string::npos);
    }
  }
  SUBCASE("third language") { CHECK_THROWS_AS(parse("d1\tes\ta\nd1\ten\tb\nd2\tit\tc\n"), FormatError); }
  SUBCASE("duplicate id/lang record") { CHECK_THROWS_AS(parse("d1\tes\ta\nd1\tes\tb\n"), ParseError); }
  SUBCASE("no records") { CHECK_THROWS_AS(parse("# nothing\n"), FormatError); }
  SUBCASE("unknown format") {
    std::istringstream in("d1\tes\ta\n");
    CHECK_THROWS_AS(parse_corpus(in, "xml"), FormatError);
  }
}

TEST_CASE("build_vocabulary threshold boundary") {
  AlignedCorpus c{"es", "en", {}};
  DocumentPair p{"d", {{"es", "x"}}, {}};
  for (int i = 0; i < 5; ++i) p.target_tokens.push_back({"en", "dog"});
  for (int i = 0; i < 4; ++i) p.target_tokens.push_back({"en", "cat"});
  c.pairs.push_back(p);
  const auto v = build_vocabulary(c, 5);
  CHECK(v.size() == 1);
  CHECK(v.contains({"en", "dog"}));
  CHECK_FALSE(v.contains({"en", "cat"}));
  CHECK(v.count(0) == 5);
  CHECK(v.total_tokens("en") == 5);
  CHECK(v.total_tokens("es") == 0);
}

TEST_CASE("build_vocabulary applies the threshold per language") {
  AlignedCorpus c{"es", "en", {}};
  DocumentPair p{"d", {{"es", "taxi"}, {"es", "taxi"}}, {{"en", "taxi"}, {"en", "taxi"}, {"en", "taxi"}}};
  c.pairs.push_back(p);
  const auto v = build_vocabulary(c, 3);
  CHECK(v.contains({"en", "taxi"}));
  CHECK_FALSE(v.contains({"es", "taxi"}));
}

TEST_CASE("build_vocabulary orders indices by count then token") {
  AlignedCorpus c{"es", "en", {}};
  c.pairs.push_back({"d", {{"es", "b"}, {"es", "a"}, {"es", "c"}, {"es", "c"}}, {{"en", "a"}}});
  const auto v = build_vocabulary(c, 1);
  REQUIRE(v.size() == 4);
  CHECK(v.token(0) == Token{"es", "c"});
  CHECK(v.token(1) == Token{"en", "a"});
  CHECK(v.token(2) == Token{"es", "a"});
  CHECK(v.token(3) == Token{"es", "b"});
}

TEST_CASE("build_vocabulary rejects bad configurations") {
  AlignedCorpus c{"es", "en", {{"d", {{"es", "a"}}, {{"en", "b"}}}}};
  CHECK_THROWS_AS(build_vocabulary(c, 0), ConfigError);
  CHECK_THROWS_AS(build_vocabulary(c, 2), ConfigError);
}

TEST_CASE("vocabulary counts equal an independent tally") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = random_corpus(rng, 3);
    std::map<std::string, std::uint64_t> tally;
    for (const auto& p : corpus.pairs) {
      for (const auto& t : p.source_tokens) ++tally[t.lang + "/" + t.surface];
      for (const auto& t : p.target_tokens) ++tally[t.lang + "/" + t.surface];
    }
    const std::uint64_t min_count = 1 + rng.uniform_index(3);
    std::size_t expected_size = 0;
    for (const auto& [k, n] : tally) expected_size += n >= min_count;
    if (expected_size == 0) continue;
    const auto v = build_vocabulary(corpus, min_count);
    CHECK(v.size() == expected_size);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(v.count(i) == tally.at(v.token(i).lang + "/" + v.token(i).surface));
      CHECK(v.count(i) >= min_count);
    }
  }
}

TEST_CASE("filter_pair matches a membership filter and is idempotent") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto corpus = random_corpus(rng, 4);
    Vocabulary v;
    try {
      v = build_vocabulary(corpus, 2);
    } catch (const ConfigError&) {
      continue;
    }
    for (const auto& p : corpus.pairs) {
      const auto f = filter_pair(p, v);
      std::vector<Token> src, tgt;
      for (const auto& t : p.source_tokens)
        if (v.find(t)) src.push_back(t);
      for (const auto& t : p.target_tokens)
        if (v.find(t)) tgt.push_back(t);
      CHECK(f.source_tokens == src);
      CHECK(f.target_tokens == tgt);
      const auto ff = filter_pair(f, v);
      CHECK(ff.source_tokens == f.source_tokens);
      CHECK(ff.target_tokens == f.target_tokens);
    }
  }
}

TEST_CASE("filter_pair edge cases") {
  AlignedCorpus c{"es", "en", {{"d", {{"es", "a"}, {"es", "b"}}, {{"en", "x"}}}}};
  const auto all = build_vocabulary(c, 1);
  const auto same = filter_pair(c.pairs[0], all);
  CHECK(same.source_tokens == c.pairs[0].source_tokens);
  CHECK(same.target_tokens == c.pairs[0].target_tokens);

  DocumentPair foreign{"f", {{"es", "zz"}}, {{"en", "yy"}}};
  const auto empty = filter_pair(foreign, all);
  CHECK(empty.source_tokens.empty());
  CHECK(empty.target_tokens.empty());
}
