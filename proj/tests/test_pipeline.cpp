#include <doctest.h>

#include <fstream>
#include <sstream>

#include "bwesg/error.hpp"
#include "bwesg/pipeline.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace bwesg;
using bwesg::testing::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig small_config(const TempDir& dir) {
  testing::SyntheticOptions opt;
  opt.lexicon = 30;
  opt.topics = 10;
  opt.pairs = 40;
  opt.min_side = 20;
  opt.max_side = 40;
  const auto data = testing::make_synthetic(opt);
  {
    std::ofstream out(dir / "corpus.tsv");
    write_corpus(out, data.corpus);
  }
  PipelineConfig cfg;
  cfg.corpus = dir / "corpus.tsv";
  cfg.output = dir / "model.txt";
  cfg.min_count = 2;
  cfg.training.dim = 8;
  cfg.training.window = 4;
  cfg.training.negatives = 3;
  cfg.training.epochs = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# run\nin=c.tsv\nout=m.txt\nstrategy=merge\nseed=9\nmin-count=3\ndim=40\nwindow=12\nnegatives=7\n"
      "subsample=0.001\nepochs=4\nlr=0.05\nlr-min=0.0001\nunigram-power=0.5\nworkers=2\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.corpus == "c.tsv");
  CHECK(cfg.strategy == Strategy::MergeShuffle);
  CHECK(cfg.seed == 9);
  CHECK(cfg.min_count == 3);
  CHECK(cfg.training.dim == 40);
  CHECK(cfg.training.window == 12);
  CHECK(cfg.training.negatives == 7);
  CHECK(cfg.training.subsample == 0.001);
  CHECK(cfg.training.epochs == 4);
  CHECK(cfg.training.lr0 == 0.05);
  CHECK(cfg.training.lr_min == 0.0001);
  CHECK(cfg.training.unigram_power == 0.5);
  CHECK(cfg.training.workers == 2);
  CHECK_NOTHROW(cfg.validate());

  std::ostringstream out;
  write_config(out, cfg);
  std::istringstream back(out.str());
  std::ostringstream again;
  write_config(again, parse_config(back));
  CHECK(again.str() == out.str());
}

TEST_CASE("config defaults") {
  std::istringstream in("in=c.tsv\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.strategy == Strategy::LengthRatio);
  CHECK(cfg.min_count == 5);
  CHECK(cfg.training.dim == 300);
  CHECK(cfg.training.window == 48);
}

TEST_CASE("config errors") {
  std::istringstream unknown("in=c.tsv\ncolour=blue\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream no_eq("in c.tsv\n");
  CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
  std::istringstream bad_num("dim=many\n");
  CHECK_THROWS_AS(parse_config(bad_num), ConfigError);

  std::istringstream zero_window("in=c.tsv\nwindow=0\n");
  const auto cfg = parse_config(zero_window);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  std::istringstream no_input("dim=3\n");
  CHECK_THROWS_AS(parse_config(no_input).validate(), ConfigError);
}

TEST_CASE("sha256 of a known input") {
  TempDir dir;
  {
    std::ofstream out(dir / "abc");
    out << "abc";
  }
  CHECK(sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK_THROWS_AS(sha256_file(dir / "missing"), IoError);
}

TEST_CASE("atomic writes leave nothing behind on failure") {
  TempDir dir;
  const auto target = dir / "out.txt";
  write_file_atomic(target, [](std::ostream& o) { o << "first"; });
  CHECK(slurp(target) == "first");
  CHECK_THROWS(write_file_atomic(target, [](std::ostream& o) {
    o << "partial";
    throw std::runtime_error("boom");
  }));
  CHECK(slurp(target) == "first");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
  CHECK(entries == 1);
}

TEST_CASE("pipeline run is deterministic and writes a manifest") {
  TempDir dir;
  auto cfg = small_config(dir);
  const auto first = run_pipeline(cfg);
  const auto model1 = slurp(cfg.output);
  auto manifest_path = cfg.output;
  manifest_path += ".manifest";
  const auto manifest1 = slurp(manifest_path);
  REQUIRE(!model1.empty());

  run_pipeline(cfg);
  CHECK(slurp(cfg.output) == model1);

  CHECK(first.manifest.vocab_size == first.space.size());
  CHECK(first.manifest.digests.at(cfg.corpus.string()) == sha256_file(cfg.corpus));
  CHECK(manifest1.find("digest.") != std::string::npos);
  CHECK(manifest1.find("version=0.1.0") != std::string::npos);

  // The manifest is itself a config that reproduces the run.
  const auto replay_cfg = load_config(manifest_path);
  std::ostringstream a, b;
  write_config(a, replay_cfg);
  write_config(b, first.manifest.config);
  CHECK(a.str() == b.str());
  auto replay = replay_cfg;
  replay.output = dir / "replay.txt";
  run_pipeline(replay);
  CHECK(slurp(replay.output) == model1);

  cfg.seed = 2;
  cfg.output = dir / "other.txt";
  run_pipeline(cfg);
  CHECK(slurp(cfg.output) != model1);
}

TEST_CASE("pipeline on pre-shuffled documents") {
  TempDir dir;
  auto cfg = small_config(dir);
  const auto corpus = load_corpus(cfg.corpus);
  const auto shuffled = shuffle_corpus(corpus, Strategy::Concat, 1);
  {
    std::ofstream out(dir / "pseudo.txt");
    write_pseudo_documents(out, shuffled.documents);
  }
  cfg.input = PipelineConfig::Input::Pseudo;
  cfg.corpus = dir / "pseudo.txt";
  const auto r = run_pipeline_in_memory(cfg);
  CHECK(r.space.size() > 0);
  CHECK(r.manifest.documents == shuffled.documents.size());
}

TEST_CASE("sweep") {
  TempDir dir;
  auto cfg = small_config(dir);
  cfg.training.epochs = 1;
  auto evaluate = [](const EmbeddingSpace& s) { return static_cast<double>(s.vector(std::size_t{0})[0] > 0); };
  CHECK_THROWS_AS(sweep(cfg, {1, 2}, evaluate), ConfigError);
  cfg.strategy = Strategy::MergeShuffle;
  CHECK_THROWS_AS(sweep(cfg, {}, evaluate), ConfigError);

  std::vector<double> scores;
  const auto r = sweep(cfg, {1, 2, 3}, [&](const EmbeddingSpace& s) {
    scores.push_back(static_cast<double>(scores.size()) * 0.25 + 0.1);
    return scores.back() + 0.0 * static_cast<double>(s.size());
  });
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[2].seed == 3);
  CHECK(r.min == doctest::Approx(0.1));
  CHECK(r.max == doctest::Approx(0.6));
  CHECK(r.avg == doctest::Approx(0.35));
}

TEST_CASE("summarize") {
  SweepResult r;
  r.rows = {{1, 0.4}, {2, 0.9}, {3, 0.2}};
  summarize(r);
  CHECK(r.min == 0.2);
  CHECK(r.max == 0.9);
  CHECK(r.avg == doctest::Approx(0.5));
}
