// bwesg: command-line front end for bilingual embedding training and evaluation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bwesg/context.hpp"
#include "bwesg/corpus.hpp"
#include "bwesg/error.hpp"
#include "bwesg/eval.hpp"
#include "bwesg/pipeline.hpp"
#include "bwesg/shuffle.hpp"
#include "bwesg/space.hpp"
#include "bwesg/trainer.hpp"

namespace {

using namespace bwesg;

struct ShuffleArgs {
  std::string strategy = "ratio";
  std::uint64_t seed = 1;
  std::uint64_t min_count = 5;
  std::string in, out;
};

struct TrainArgs {
  std::string in, out;
  TrainingConfig cfg;
  std::optional<double> lr_min;
  std::uint64_t min_count = 5;
};

struct EvalArgs {
  std::string model, test, bits_out, compare;
  std::string method = "interp";
  double lambda = 1.0;
  std::string baseline;
};

void print_acc(const char* label, const EvalResult& r) {
  std::cout << label << "\tacc1=" << std::fixed << std::setprecision(4) << r.acc1 << "\tcorrect=" << r.num_correct()
            << "/" << r.size() << "\tcoverage=" << r.coverage << '\n';
}

void save_bits(const std::string& path, const EvalResult& r) {
  if (path.empty()) return;
  write_file_atomic(path, [&](std::ostream& out) { write_bits(out, r.correct); });
}

void compare_bits(const std::string& path, const EvalResult& r) {
  if (path.empty()) return;
  const auto other = read_bits(std::filesystem::path(path));
  const auto m = mcnemar(r.correct, other);
  std::cout << "mcnemar\tchi2=" << std::setprecision(4) << m.chi2 << "\tb10=" << m.only_a << "\tb01=" << m.only_b
            << "\tsignificant=" << (m.significant ? "yes" : "no") << '\n';
}

void add_training_flags(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--dim", a.cfg.dim, "Embedding dimensionality")->capture_default_str();
  cmd->add_option("--window", a.cfg.window, "Maximum window size cs")->capture_default_str();
  cmd->add_option("--negatives", a.cfg.negatives, "Negative samples per positive pair")->capture_default_str();
  cmd->add_option("--epochs", a.cfg.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", a.cfg.lr0, "Initial learning rate")->capture_default_str();
  cmd->add_option("--lr-min", a.lr_min, "Learning-rate floor (default 1e-4 * lr)");
  cmd->add_option("--subsample", a.cfg.subsample, "Subsampling rate t (0 disables)")->capture_default_str();
  cmd->add_option("--unigram-power", a.cfg.unigram_power, "Exponent of the negative-sampling distribution")
      ->capture_default_str();
  cmd->add_option("--seed", a.cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--workers", a.cfg.workers, "Training threads")->capture_default_str();
  cmd->add_option("--min-count", a.min_count, "Minimum count per language-tagged type")->capture_default_str();
}

int run(int argc, char** argv) {
  CLI::App app{"Bilingual word embeddings from document-aligned comparable corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  ShuffleArgs sh;
  auto* shuffle_cmd = app.add_subcommand("shuffle", "Build pseudo-bilingual documents from an aligned corpus");
  shuffle_cmd->add_option("--strategy", sh.strategy, "merge | ratio | concat")
      ->check(CLI::IsMember({"merge", "ratio", "concat"}))
      ->capture_default_str();
  shuffle_cmd->add_option("--seed", sh.seed, "Shuffle seed (merge only)")->capture_default_str();
  shuffle_cmd->add_option("--min-count", sh.min_count, "Drop types rarer than this before shuffling")
      ->capture_default_str();
  shuffle_cmd->add_option("--in", sh.in, "Aligned corpus (dapc-tsv)")->required();
  shuffle_cmd->add_option("--out", sh.out, "Pseudo-document output")->required();

  TrainArgs tr;
  tr.cfg.dim = 300;
  auto* train_cmd = app.add_subcommand("train", "Train SGNS on pseudo-bilingual documents");
  train_cmd->add_option("--in", tr.in, "Pseudo-document file")->required();
  train_cmd->add_option("--out", tr.out, "Model output (text vectors)")->required();
  add_training_flags(train_cmd, tr);

  std::string run_config, run_out;
  auto* run_cmd = app.add_subcommand("run", "Shuffle and train as described by a key=value config or manifest");
  run_cmd->add_option("--config", run_config, "Config file")->required();
  run_cmd->add_option("--out", run_out, "Override the model output path");

  std::string nn_model, nn_query, nn_mode = "cross";
  std::size_t nn_top = 10;
  auto* nn_cmd = app.add_subcommand("nn", "Print the ranked list of nearest neighbours of a word");
  nn_cmd->add_option("--model", nn_model)->required();
  nn_cmd->add_option("--query", nn_query, "lang:surface")->required();
  nn_cmd->add_option("--mode", nn_mode, "mono | cross | multi")
      ->check(CLI::IsMember({"mono", "cross", "multi"}))
      ->capture_default_str();
  nn_cmd->add_option("--top", nn_top)->capture_default_str();

  EvalArgs ble;
  auto* ble_cmd = app.add_subcommand("ble", "Bilingual lexicon extraction accuracy");
  ble_cmd->add_option("--model", ble.model)->required();
  ble_cmd->add_option("--test", ble.test, "source<TAB>gold per line")->required();
  ble_cmd->add_option("--bits-out", ble.bits_out, "Write per-item correctness bits");
  ble_cmd->add_option("--compare", ble.compare, "McNemar test against a saved bit file");

  EvalArgs sw;
  auto* swtc_cmd = app.add_subcommand("swtc", "Word translation in context accuracy");
  swtc_cmd->add_option("--model", sw.model)->required();
  swtc_cmd->add_option("--test", sw.test)->required();
  swtc_cmd->add_option("--method", sw.method, "interp | add-mel | mult-mel")
      ->check(CLI::IsMember({"interp", "add-mel", "mult-mel"}))
      ->capture_default_str();
  swtc_cmd->add_option("--lambda", sw.lambda)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  swtc_cmd->add_option("--baseline", sw.baseline, "Also report a baseline (no-context)")
      ->check(CLI::IsMember({"no-context"}));
  swtc_cmd->add_option("--bits-out", sw.bits_out, "Write per-item correctness bits");
  swtc_cmd->add_option("--compare", sw.compare, "McNemar test against a saved bit file");

  EvalArgs sc;
  auto* score_cmd = app.add_subcommand("swtc-score", "Print per-instance candidate rankings");
  score_cmd->add_option("--model", sc.model)->required();
  score_cmd->add_option("--in", sc.test)->required();
  score_cmd->add_option("--method", sc.method)
      ->check(CLI::IsMember({"interp", "add-mel", "mult-mel"}))
      ->capture_default_str();
  score_cmd->add_option("--lambda", sc.lambda)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  std::string sweep_config, sweep_ble, sweep_swtc, sweep_method = "interp";
  std::vector<std::uint64_t> sweep_seeds;
  double sweep_lambda = 1.0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat a merge-and-shuffle run over seeds; report MIN/AVG/MAX");
  sweep_cmd->add_option("--config", sweep_config)->required();
  sweep_cmd->add_option("--seeds", sweep_seeds, "Comma-separated seeds")->delimiter(',')->required();
  auto* sweep_ble_opt = sweep_cmd->add_option("--ble", sweep_ble, "BLE test file");
  auto* sweep_swtc_opt = sweep_cmd->add_option("--swtc", sweep_swtc, "SWTC test file");
  sweep_ble_opt->excludes(sweep_swtc_opt);
  sweep_cmd->add_option("--method", sweep_method)
      ->check(CLI::IsMember({"interp", "add-mel", "mult-mel"}))
      ->capture_default_str();
  sweep_cmd->add_option("--lambda", sweep_lambda)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  std::string export_model, export_out;
  auto* export_cmd = app.add_subcommand("export", "Write vectors keyed by bare surface with a language column");
  export_cmd->add_option("--model", export_model)->required();
  export_cmd->add_option("--out", export_out)->required();

  CLI11_PARSE(app, argc, argv);

  if (*shuffle_cmd) {
    auto corpus = load_corpus(sh.in);
    const auto vocab = build_vocabulary(corpus, sh.min_count);
    corpus = filter_corpus(corpus, vocab);
    const auto result = shuffle_corpus(corpus, parse_strategy(sh.strategy), sh.seed);
    write_file_atomic(sh.out, [&](std::ostream& out) { write_pseudo_documents(out, result.documents); });
    std::cerr << "wrote " << result.documents.size() << " documents, skipped " << result.skipped << " pairs\n";
  } else if (*train_cmd) {
    PipelineConfig cfg;
    cfg.input = PipelineConfig::Input::Pseudo;
    cfg.corpus = tr.in;
    cfg.output = tr.out;
    cfg.min_count = tr.min_count;
    cfg.seed = tr.cfg.seed;
    cfg.training = tr.cfg;
    cfg.training.lr_min = tr.lr_min;
    const auto result = run_pipeline(cfg);
    std::cerr << "trained " << result.space.size() << " vectors, " << result.stats.positive_pairs
              << " positive pairs in " << std::setprecision(3) << result.stats.seconds << "s\n";
  } else if (*run_cmd) {
    auto cfg = load_config(run_config);
    if (!run_out.empty()) cfg.output = run_out;
    const auto result = run_pipeline(cfg);
    std::cerr << "trained " << result.space.size() << " vectors in " << std::setprecision(3) << result.stats.seconds
              << "s\n";
  } else if (*nn_cmd) {
    const auto space = load_space(std::filesystem::path(nn_model));
    const auto list = ranked_list(space, parse_token(nn_query), parse_query_mode(nn_mode), nn_top);
    std::cout << to_string(list.query) << '\t' << nn_mode << '\n';
    std::size_t rank = 0;
    for (const auto& item : list.items) {
      std::cout << ++rank << '\t' << to_string(item.token) << '\t' << std::fixed << std::setprecision(6)
                << item.score << '\n';
    }
  } else if (*ble_cmd) {
    const auto space = load_space(std::filesystem::path(ble.model));
    const auto result = ble_evaluate(space, load_ble_test(ble.test));
    print_acc("ble", result);
    save_bits(ble.bits_out, result);
    compare_bits(ble.compare, result);
  } else if (*swtc_cmd) {
    const auto space = load_space(std::filesystem::path(sw.model));
    const auto instances = load_swtc_instances(sw.test);
    const ContextScorerConfig scfg{parse_context_method(sw.method), sw.lambda};
    const auto result = swtc_evaluate(space, instances, scfg);
    print_acc(sw.method.c_str(), result);
    for (const auto& b : acc_by_sense_count(result, instances)) {
      if (b.acc1) std::cout << "senses=" << b.senses << "\tacc1=" << *b.acc1 << "\tn=" << b.count << '\n';
    }
    if (sw.baseline == "no-context") {
      const auto base = no_context_baseline(space, instances);
      print_acc("no-context", base);
      const auto m = mcnemar(result.correct, base.correct);
      std::cout << "mcnemar(" << sw.method << ",no-context)\tchi2=" << m.chi2
                << "\tsignificant=" << (m.significant ? "yes" : "no") << '\n';
    }
    save_bits(sw.bits_out, result);
    compare_bits(sw.compare, result);
  } else if (*score_cmd) {
    const auto space = load_space(std::filesystem::path(sc.model));
    const auto instances = load_swtc_instances(sc.test);
    const ContextScorerConfig scfg{parse_context_method(sc.method), sc.lambda};
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& inst = instances[i];
      std::cout << i + 1 << '\t' << to_string(inst.pivot);
      try {
        for (const auto& item : rank_candidates(space, inst.pivot, context_bag(inst), inst.candidates, scfg)) {
          std::cout << '\t' << to_string(item.token) << '=' << std::fixed << std::setprecision(6) << item.score;
        }
      } catch (const Error& e) {
        std::cout << "\tskipped: " << e.what();
      }
      std::cout << '\n';
    }
  } else if (*sweep_cmd) {
    if (sweep_ble.empty() && sweep_swtc.empty()) throw ConfigError("sweep needs --ble or --swtc");
    const auto cfg = load_config(sweep_config);
    SweepEvaluator evaluate;
    if (!sweep_ble.empty()) {
      evaluate = [test = load_ble_test(sweep_ble)](const EmbeddingSpace& s) { return ble_evaluate(s, test).acc1; };
    } else {
      const ContextScorerConfig scfg{parse_context_method(sweep_method), sweep_lambda};
      evaluate = [inst = load_swtc_instances(sweep_swtc), scfg](const EmbeddingSpace& s) {
        return swtc_evaluate(s, inst, scfg).acc1;
      };
    }
    const auto result = sweep(cfg, sweep_seeds, evaluate);
    std::cout << "seed\tacc1\n" << std::fixed << std::setprecision(4);
    for (const auto& row : result.rows) std::cout << row.seed << '\t' << row.acc1 << '\n';
    std::cout << "MIN\t" << result.min << "\nAVG\t" << result.avg << "\nMAX\t" << result.max << '\n';
  } else if (*export_cmd) {
    const auto space = load_space(std::filesystem::path(export_model));
    write_file_atomic(export_out, [&](std::ostream& out) { export_plain(out, space); });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "bwesg: error: " << e.what() << '\n';
    return 1;
  }
}
