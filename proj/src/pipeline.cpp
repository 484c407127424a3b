#include "bwesg/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>

#include "bwesg/corpus.hpp"
#include "bwesg/error.hpp"

namespace bwesg {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PipelineConfig::validate() const {
  if (corpus.empty()) throw ConfigError("config needs an input corpus (key 'in')");
  if (format != kDapcTsv) throw ConfigError("unsupported corpus format '" + format + "'");
  if (min_count < 1) throw ConfigError("min-count must be at least 1");
  training.validate();
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    auto& t = cfg.training;
    if (key == "input-kind") {
      if (value == "corpus") {
        cfg.input = PipelineConfig::Input::Corpus;
      } else if (value == "pseudo") {
        cfg.input = PipelineConfig::Input::Pseudo;
      } else {
        throw ConfigError("input-kind must be 'corpus' or 'pseudo', got '" + value + "'");
      }
    } else if (key == "in") {
      cfg.corpus = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "out") {
      cfg.output = value;
    } else if (key == "strategy") {
      cfg.strategy = parse_strategy(value);
    } else if (key == "seed") {
      cfg.seed = parse_value<std::uint64_t>(key, value);
      t.seed = cfg.seed;
    } else if (key == "min-count") {
      cfg.min_count = parse_value<std::uint64_t>(key, value);
    } else if (key == "dim") {
      t.dim = parse_value<std::size_t>(key, value);
    } else if (key == "window") {
      t.window = parse_value<std::size_t>(key, value);
    } else if (key == "negatives") {
      t.negatives = parse_value<std::size_t>(key, value);
    } else if (key == "subsample") {
      t.subsample = parse_value<double>(key, value);
    } else if (key == "epochs") {
      t.epochs = parse_value<std::size_t>(key, value);
    } else if (key == "lr") {
      t.lr0 = parse_value<double>(key, value);
    } else if (key == "lr-min") {
      t.lr_min = parse_value<double>(key, value);
    } else if (key == "unigram-power") {
      t.unigram_power = parse_value<double>(key, value);
    } else if (key == "workers") {
      t.workers = parse_value<std::size_t>(key, value);
    } else if (key == "version" || starts_with(key, "digest.") || starts_with(key, "timing.") ||
               starts_with(key, "count.")) {
      // manifest-only keys
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const PipelineConfig& cfg) {
  const auto& t = cfg.training;
  out << "input-kind=" << (cfg.input == PipelineConfig::Input::Pseudo ? "pseudo" : "corpus") << '\n'
      << "in=" << cfg.corpus.string() << '\n'
      << "format=" << cfg.format << '\n';
  if (!cfg.output.empty()) out << "out=" << cfg.output.string() << '\n';
  out << "strategy=" << strategy_name(cfg.strategy) << '\n'
      << "seed=" << cfg.seed << '\n'
      << "min-count=" << cfg.min_count << '\n'
      << "dim=" << t.dim << '\n'
      << "window=" << t.window << '\n'
      << "negatives=" << t.negatives << '\n'
      << "subsample=" << format_double(t.subsample) << '\n'
      << "epochs=" << t.epochs << '\n'
      << "lr=" << format_double(t.lr0) << '\n';
  if (t.lr_min) out << "lr-min=" << format_double(*t.lr_min) << '\n';
  out << "unigram-power=" << format_double(t.unigram_power) << '\n'
      << "workers=" << t.workers << '\n';
}

void write_manifest(std::ostream& out, const RunManifest& m) {
  write_config(out, m.config);
  for (const auto& [path, digest] : m.digests) out << "digest." << path << '=' << digest << '\n';
  out << "version=" << m.version << '\n';
  out << "count.vocab=" << m.vocab_size << '\n'
      << "count.documents=" << m.documents << '\n'
      << "count.skipped=" << m.skipped_pairs << '\n';
  for (const auto& [phase, secs] : m.timings) out << "timing." << phase << '=' << format_double(secs) << '\n';
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 initialisation failed");
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(std::random_device{}());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
      writer(out);
      out.flush();
      if (!out) throw IoError("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

PipelineResult run_pipeline_in_memory(const PipelineConfig& cfg_in) {
  PipelineConfig cfg = cfg_in;
  cfg.training.seed = cfg.seed;
  cfg.validate();

  RunManifest manifest;
  manifest.config = cfg;

  auto t0 = std::chrono::steady_clock::now();
  manifest.digests[cfg.corpus.string()] = sha256_file(cfg.corpus);
  if (cfg.input == PipelineConfig::Input::Pseudo) {
    const auto raw = read_pseudo_documents(cfg.corpus);
    manifest.timings["load"] = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const Vocabulary vocab = build_vocabulary(raw, cfg.min_count);
    std::vector<PseudoBilingualDocument> docs;
    docs.reserve(raw.size());
    for (const auto& doc : raw) {
      auto kept = filter_document(doc, vocab);
      if (kept.tokens.empty()) {
        ++manifest.skipped_pairs;
      } else {
        docs.push_back(std::move(kept));
      }
    }
    manifest.timings["vocabulary"] = seconds_since(t0);
    manifest.vocab_size = vocab.size();
    manifest.documents = docs.size();

    t0 = std::chrono::steady_clock::now();
    TrainStats stats;
    EmbeddingSpace space = train(docs, vocab, cfg.training, &stats);
    manifest.timings["train"] = seconds_since(t0);
    return PipelineResult{std::move(space), std::move(manifest), stats};
  }
  const AlignedCorpus corpus = load_corpus(cfg.corpus, cfg.format);
  manifest.timings["load"] = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const Vocabulary vocab = build_vocabulary(corpus, cfg.min_count);
  const AlignedCorpus filtered = filter_corpus(corpus, vocab);
  manifest.timings["vocabulary"] = seconds_since(t0);
  manifest.vocab_size = vocab.size();

  t0 = std::chrono::steady_clock::now();
  ShuffleResult shuffled = shuffle_corpus(filtered, cfg.strategy, cfg.seed);
  manifest.timings["shuffle"] = seconds_since(t0);
  manifest.documents = shuffled.documents.size();
  manifest.skipped_pairs = shuffled.skipped;
  if (shuffled.documents.empty()) throw ConfigError("no document pair survived filtering and shuffling");

  t0 = std::chrono::steady_clock::now();
  TrainStats stats;
  EmbeddingSpace space = train(shuffled.documents, vocab, cfg.training, &stats);
  manifest.timings["train"] = seconds_since(t0);

  return PipelineResult{std::move(space), std::move(manifest), stats};
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  if (cfg.output.empty()) throw ConfigError("config needs an output model path (key 'out')");
  PipelineResult result = run_pipeline_in_memory(cfg);

  const auto t0 = std::chrono::steady_clock::now();
  write_file_atomic(cfg.output, [&](std::ostream& out) { save_space(out, result.space); });
  result.manifest.timings["write"] = seconds_since(t0);

  auto manifest_path = cfg.output;
  manifest_path += ".manifest";
  write_file_atomic(manifest_path, [&](std::ostream& out) { write_manifest(out, result.manifest); });
  return result;
}

void summarize(SweepResult& result) {
  if (result.rows.empty()) return;
  const auto [lo, hi] = std::minmax_element(result.rows.begin(), result.rows.end(),
                                            [](const SweepRow& a, const SweepRow& b) { return a.acc1 < b.acc1; });
  result.min = lo->acc1;
  result.max = hi->acc1;
  const double sum = std::accumulate(result.rows.begin(), result.rows.end(), 0.0,
                                     [](double s, const SweepRow& r) { return s + r.acc1; });
  result.avg = sum / static_cast<double>(result.rows.size());
}

SweepResult sweep(const PipelineConfig& cfg, const std::vector<std::uint64_t>& seeds, const SweepEvaluator& evaluate) {
  if (cfg.strategy != Strategy::MergeShuffle) throw ConfigError("sweep requires the merge strategy");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  if (!evaluate) throw ConfigError("sweep needs an evaluation");
  cfg.validate();

  SweepResult result;
  for (auto seed : seeds) {
    PipelineConfig run = cfg;
    run.seed = seed;
    const auto out = run_pipeline_in_memory(run);
    result.rows.push_back({seed, evaluate(out.space)});
  }
  summarize(result);
  return result;
}

}  // namespace bwesg
