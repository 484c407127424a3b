#include "bwesg/eval.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "bwesg/error.hpp"

namespace bwesg {

namespace {

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

Token token_at(std::string_view text, std::size_t line_no) {
  try {
    return parse_token(text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_no);
  }
}

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    fn(std::string_view(line), line_no);
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void finalize(EvalResult& r) {
  r.acc1 = ratio(r.num_correct(), r.size());
  r.coverage = ratio(static_cast<std::size_t>(std::count(r.covered.begin(), r.covered.end(), true)), r.size());
}

}  // namespace

BleTestSet parse_ble_test(std::istream& in) {
  BleTestSet test;
  std::set<Token> seen;
  for_each_record(in, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw ParseError("expected source<TAB>gold", line_no);
    Token src = token_at(fields[0], line_no);
    Token gold = token_at(fields[1], line_no);
    if (!seen.insert(src).second) throw ParseError("repeated source word '" + to_string(src) + "'", line_no);
    test.pairs.emplace_back(std::move(src), std::move(gold));
  });
  return test;
}

BleTestSet load_ble_test(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open BLE test file " + path.string());
  return parse_ble_test(in);
}

std::vector<SwtcInstance> parse_swtc_instances(std::istream& in) {
  std::vector<SwtcInstance> out;
  for_each_record(in, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split(line, '\t');
    if (fields.size() != 4) throw ParseError("expected pivot<TAB>gold<TAB>candidates<TAB>sentence", line_no);
    SwtcInstance inst;
    inst.pivot = token_at(fields[0], line_no);
    inst.gold = token_at(fields[1], line_no);
    for (auto c : split(fields[2], ','))
      if (!c.empty()) inst.candidates.push_back(token_at(c, line_no));
    for (auto w : split(fields[3], ' '))
      if (!w.empty()) inst.sentence.push_back(token_at(w, line_no));
    if (inst.candidates.size() < 2) throw ParseError("an instance needs at least two candidates", line_no);
    if (std::find(inst.candidates.begin(), inst.candidates.end(), inst.gold) == inst.candidates.end()) {
      throw ParseError("gold '" + to_string(inst.gold) + "' is not among the candidates", line_no);
    }
    out.push_back(std::move(inst));
  });
  return out;
}

std::vector<SwtcInstance> load_swtc_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open SWTC test file " + path.string());
  return parse_swtc_instances(in);
}

void write_swtc_instances(std::ostream& out, const std::vector<SwtcInstance>& instances) {
  for (const auto& inst : instances) {
    out << to_string(inst.pivot) << '\t' << to_string(inst.gold) << '\t';
    for (std::size_t i = 0; i < inst.candidates.size(); ++i) out << (i ? "," : "") << to_string(inst.candidates[i]);
    out << '\t';
    for (std::size_t i = 0; i < inst.sentence.size(); ++i) out << (i ? " " : "") << to_string(inst.sentence[i]);
    out << '\n';
  }
}

ContextBag context_bag(const SwtcInstance& instance) {
  ContextBag bag{instance.pivot, instance.sentence};
  const auto it = std::find(bag.words.begin(), bag.words.end(), instance.pivot);
  if (it != bag.words.end()) bag.words.erase(it);
  return bag;
}

std::size_t EvalResult::num_correct() const {
  return static_cast<std::size_t>(std::count(correct.begin(), correct.end(), true));
}

EvalResult ble_evaluate(const EmbeddingSpace& space, const BleTestSet& test) {
  if (test.pairs.empty()) throw ConfigError("BLE test set is empty");
  EvalResult r;
  r.correct.reserve(test.pairs.size());
  r.covered.reserve(test.pairs.size());
  for (const auto& [source, gold] : test.pairs) {
    const bool covered = space.contains(source) && space.contains(gold);
    bool ok = false;
    if (space.contains(source)) {
      const auto list = ranked_list(space, source, QueryMode::CrossLingual, 1);
      ok = !list.items.empty() && list.items.front().token == gold;
    }
    r.correct.push_back(ok);
    r.covered.push_back(covered);
  }
  finalize(r);
  return r;
}

namespace {

bool instance_covered(const EmbeddingSpace& space, const SwtcInstance& inst) {
  if (!space.contains(inst.pivot)) return false;
  return std::all_of(inst.candidates.begin(), inst.candidates.end(),
                     [&](const Token& c) { return space.contains(c); });
}

}  // namespace

EvalResult swtc_evaluate(const EmbeddingSpace& space, const std::vector<SwtcInstance>& instances,
                         const ContextScorerConfig& cfg) {
  if (instances.empty()) throw ConfigError("SWTC instance list is empty");
  cfg.validate();
  EvalResult r;
  for (const auto& inst : instances) {
    bool covered = instance_covered(space, inst);
    bool ok = false;
    if (covered) {
      const auto bag = context_bag(inst);
      try {
        const auto ranked = rank_candidates(space, inst.pivot, bag, inst.candidates, cfg, &r.oov_context);
        ok = ranked.front().token == inst.gold;
      } catch (const EmptyContextError&) {
        covered = false;
      }
    }
    r.correct.push_back(ok);
    r.covered.push_back(covered);
  }
  finalize(r);
  return r;
}

EvalResult no_context_baseline(const EmbeddingSpace& space, const std::vector<SwtcInstance>& instances) {
  if (instances.empty()) throw ConfigError("SWTC instance list is empty");
  EvalResult r;
  for (const auto& inst : instances) {
    const bool covered = instance_covered(space, inst);
    bool ok = false;
    if (covered) {
      const auto pv = space.vector(inst.pivot);
      std::vector<ScoredToken> scored;
      for (const auto& c : inst.candidates) scored.push_back({c, cosine(pv, space.vector(c))});
      sort_by_score(scored);
      ok = scored.front().token == inst.gold;
    }
    r.correct.push_back(ok);
    r.covered.push_back(covered);
  }
  finalize(r);
  return r;
}

McNemarResult mcnemar(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size()) {
    throw PairingError("paired results differ in length (" + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  McNemarResult r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) ++r.only_a;
    if (!a[i] && b[i]) ++r.only_b;
  }
  const std::size_t discordant = r.only_a + r.only_b;
  if (discordant == 0) return r;
  const double diff = std::abs(static_cast<double>(r.only_a) - static_cast<double>(r.only_b)) - 1.0;
  r.chi2 = diff * diff / static_cast<double>(discordant);
  r.significant = r.chi2 > kChi2Critical95;
  return r;
}

std::vector<bool> read_bits(std::istream& in) {
  std::vector<bool> bits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "0") {
      bits.push_back(false);
    } else if (line == "1") {
      bits.push_back(true);
    } else {
      throw ParseError("expected 0 or 1, got '" + line + "'", line_no);
    }
  }
  return bits;
}

std::vector<bool> read_bits(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bit file " + path.string());
  return read_bits(in);
}

void write_bits(std::ostream& out, const std::vector<bool>& bits) {
  for (bool b : bits) out << (b ? '1' : '0') << '\n';
}

std::array<SenseBucket, 3> acc_by_sense_count(const EvalResult& result, const std::vector<SwtcInstance>& instances) {
  if (result.size() != instances.size()) throw PairingError("result and instance counts differ");
  std::array<SenseBucket, 3> buckets{};
  for (std::size_t i = 0; i < buckets.size(); ++i) buckets[i].senses = i + 2;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::size_t tq = instances[i].candidates.size();
    if (tq < 2 || tq > 4) continue;
    auto& b = buckets[tq - 2];
    ++b.count;
    if (result.correct[i]) ++b.correct;
  }
  for (auto& b : buckets)
    if (b.count > 0) b.acc1 = ratio(b.correct, b.count);
  return buckets;
}

}  // namespace bwesg
