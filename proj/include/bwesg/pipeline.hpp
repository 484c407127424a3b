#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bwesg/context.hpp"
#include "bwesg/eval.hpp"
#include "bwesg/shuffle.hpp"
#include "bwesg/space.hpp"
#include "bwesg/trainer.hpp"

namespace bwesg {

inline constexpr std::string_view kVersion = "0.1.0";

/// Everything needed to go from an aligned corpus to a model file.
///
/// Serialised as flat `key=value` lines; keys mirror the CLI flags:
/// input-kind, in, format, out, strategy, seed, min-count, dim, window,
/// negatives, subsample, epochs, lr, lr-min, unigram-power, workers.
struct PipelineConfig {
  enum class Input {
    Corpus,  ///< aligned corpus; vocabulary, filtering and shuffling run first
    Pseudo,  ///< already shuffled pseudo-bilingual documents, one per line
  };

  Input input = Input::Corpus;
  std::filesystem::path corpus;
  std::string format = "dapc-tsv";
  std::filesystem::path output;
  Strategy strategy = Strategy::LengthRatio;
  std::uint64_t min_count = 5;
  /// One run seed drives both the shuffle and SGNS.
  std::uint64_t seed = 1;
  TrainingConfig training;

  void validate() const;
};

/// Parses `key=value` lines. Blank lines and '#' comments are ignored, as are
/// the `digest.*`, `timing.*` and `version` keys a manifest adds. Unknown keys
/// raise ConfigError.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const PipelineConfig& cfg);

struct RunManifest {
  PipelineConfig config;
  /// Input path -> hex SHA-256 of its contents.
  std::map<std::string, std::string> digests;
  std::string version{kVersion};
  /// Phase name -> wall-clock seconds.
  std::map<std::string, double> timings;
  std::size_t vocab_size = 0;
  std::size_t documents = 0;
  std::size_t skipped_pairs = 0;
};

/// Config keys followed by digest.*, timing.*, version and counts. The result
/// is itself a valid config file.
void write_manifest(std::ostream& out, const RunManifest& manifest);

std::string sha256_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so a failed
/// write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

struct PipelineResult {
  EmbeddingSpace space;
  RunManifest manifest;
  TrainStats stats;
};

/// load -> vocabulary -> filter -> shuffle -> train. For pseudo-document
/// input the shuffle is skipped. Writes nothing.
PipelineResult run_pipeline_in_memory(const PipelineConfig& cfg);

/// run_pipeline_in_memory, then writes cfg.output and cfg.output + ".manifest".
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// An evaluation applied to each sweep run.
using SweepEvaluator = std::function<double(const EmbeddingSpace&)>;

struct SweepRow {
  std::uint64_t seed = 0;
  double acc1 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

/// One merge-and-shuffle pipeline run per seed, each scored by `evaluate`.
/// Throws ConfigError unless the strategy is MergeShuffle and seeds is
/// non-empty.
SweepResult sweep(const PipelineConfig& cfg, const std::vector<std::uint64_t>& seeds, const SweepEvaluator& evaluate);

/// MIN/AVG/MAX over the rows' acc1 values.
void summarize(SweepResult& result);

}  // namespace bwesg
