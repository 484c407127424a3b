#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>

#include "bwesg/context.hpp"
#include "bwesg/error.hpp"
#include "bwesg/eval.hpp"
#include "bwesg/pipeline.hpp"
#include "bwesg/shuffle.hpp"
#include "bwesg/space.hpp"
#include "bwesg/trainer.hpp"

namespace py = pybind11;
using namespace bwesg;

namespace {

std::vector<float> vector_copy(const EmbeddingSpace& s, const Token& t) {
  const auto v = s.vector(t);
  return {v.begin(), v.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bilingual word embeddings from document-aligned corpora";
  m.attr("__version__") = std::string(kVersion);
  py::register_exception<Error>(m, "BwesgError", PyExc_RuntimeError);

  py::class_<Token>(m, "Token")
      .def(py::init<std::string, std::string>(), py::arg("lang"), py::arg("surface"))
      .def(py::init([](const std::string& s) { return parse_token(s); }), py::arg("text"))
      .def_readwrite("lang", &Token::lang)
      .def_readwrite("surface", &Token::surface)
      .def("__str__", [](const Token& t) { return to_string(t); })
      .def("__repr__", [](const Token& t) { return "Token('" + to_string(t) + "')"; })
      .def("__eq__", [](const Token& a, const Token& b) { return a == b; })
      .def("__lt__", [](const Token& a, const Token& b) { return a < b; })
      .def("__hash__", [](const Token& t) { return TokenHash{}(t); });
  py::implicitly_convertible<py::str, Token>();

  py::class_<DocumentPair>(m, "DocumentPair")
      .def(py::init<std::string, std::vector<Token>, std::vector<Token>>(), py::arg("id"), py::arg("source_tokens"),
           py::arg("target_tokens"))
      .def_readwrite("id", &DocumentPair::id)
      .def_readwrite("source_tokens", &DocumentPair::source_tokens)
      .def_readwrite("target_tokens", &DocumentPair::target_tokens);

  py::class_<AlignedCorpus>(m, "AlignedCorpus")
      .def(py::init<>())
      .def_readwrite("source_lang", &AlignedCorpus::source_lang)
      .def_readwrite("target_lang", &AlignedCorpus::target_lang)
      .def_readwrite("pairs", &AlignedCorpus::pairs)
      .def("__len__", [](const AlignedCorpus& c) { return c.pairs.size(); });
  m.def("load_corpus", [](const std::filesystem::path& p) { return load_corpus(p); }, py::arg("path"));

  py::enum_<Strategy>(m, "Strategy")
      .value("MERGE_SHUFFLE", Strategy::MergeShuffle)
      .value("LENGTH_RATIO", Strategy::LengthRatio)
      .value("CONCAT", Strategy::Concat);

  py::class_<PseudoBilingualDocument>(m, "PseudoBilingualDocument")
      .def_readonly("tokens", &PseudoBilingualDocument::tokens)
      .def_readonly("origin_id", &PseudoBilingualDocument::origin_id)
      .def_readonly("strategy", &PseudoBilingualDocument::strategy)
      .def("__len__", [](const PseudoBilingualDocument& d) { return d.tokens.size(); });

  m.def("merge_and_shuffle", &merge_and_shuffle, py::arg("pair"), py::arg("seed"));
  m.def("length_ratio_shuffle", &length_ratio_shuffle, py::arg("pair"));
  m.def("concat", &concat, py::arg("pair"));
  m.def(
      "shuffle_corpus",
      [](const AlignedCorpus& c, Strategy s, std::uint64_t seed) { return shuffle_corpus(c, s, seed).documents; },
      py::arg("corpus"), py::arg("strategy"), py::arg("seed") = 1);

  py::class_<TrainingConfig>(m, "TrainingConfig")
      .def(py::init<>())
      .def_readwrite("dim", &TrainingConfig::dim)
      .def_readwrite("window", &TrainingConfig::window)
      .def_readwrite("negatives", &TrainingConfig::negatives)
      .def_readwrite("subsample", &TrainingConfig::subsample)
      .def_readwrite("epochs", &TrainingConfig::epochs)
      .def_readwrite("lr0", &TrainingConfig::lr0)
      .def_readwrite("lr_min", &TrainingConfig::lr_min)
      .def_readwrite("unigram_power", &TrainingConfig::unigram_power)
      .def_readwrite("seed", &TrainingConfig::seed)
      .def_readwrite("workers", &TrainingConfig::workers)
      .def_readwrite("negative_table_size", &TrainingConfig::negative_table_size)
      .def("validate", &TrainingConfig::validate);

  py::class_<EmbeddingSpace>(m, "EmbeddingSpace")
      .def(py::init<std::size_t>(), py::arg("dim"))
      .def("add", [](EmbeddingSpace& s, const Token& t, const std::vector<float>& v) { s.add(t, v); })
      .def_property_readonly("dim", &EmbeddingSpace::dim)
      .def("__len__", &EmbeddingSpace::size)
      .def("__contains__", &EmbeddingSpace::contains)
      .def("tokens", [](const EmbeddingSpace& s) { return std::vector<Token>(s.tokens().begin(), s.tokens().end()); })
      .def("vector", &vector_copy, py::arg("token"));

  m.def(
      "train",
      [](const std::vector<PseudoBilingualDocument>& docs, const TrainingConfig& cfg, std::uint64_t min_count) {
        const auto vocab = build_vocabulary(docs, min_count);
        std::vector<PseudoBilingualDocument> kept;
        for (const auto& d : docs) {
          auto f = filter_document(d, vocab);
          if (!f.tokens.empty()) kept.push_back(std::move(f));
        }
        py::gil_scoped_release release;
        return train(kept, vocab, cfg);
      },
      py::arg("documents"), py::arg("config") = TrainingConfig{}, py::arg("min_count") = 1);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_static(
          "load", [](const std::filesystem::path& p) { return load_config(p); }, py::arg("path"))
      .def_readwrite("corpus", &PipelineConfig::corpus)
      .def_readwrite("output", &PipelineConfig::output)
      .def_readwrite("strategy", &PipelineConfig::strategy)
      .def_readwrite("min_count", &PipelineConfig::min_count)
      .def_readwrite("seed", &PipelineConfig::seed)
      .def_readwrite("training", &PipelineConfig::training);
  m.def(
      "run_pipeline",
      [](const PipelineConfig& cfg) {
        py::gil_scoped_release release;
        return cfg.output.empty() ? run_pipeline_in_memory(cfg).space : run_pipeline(cfg).space;
      },
      py::arg("config"), "Trains a model; also writes it (plus a manifest) when config.output is set.");

  m.def("load_space", [](const std::filesystem::path& p) { return load_space(p); }, py::arg("path"));
  m.def(
      "save_space",
      [](const EmbeddingSpace& s, const std::filesystem::path& p) {
        write_file_atomic(p, [&](std::ostream& out) { save_space(out, s); });
      },
      py::arg("space"), py::arg("path"));

  m.def(
      "cosine",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return cosine(std::span<const double>(a), std::span<const double>(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "hellinger", [](const std::vector<double>& p, const std::vector<double>& q) { return hellinger(p, q); },
      py::arg("p"), py::arg("q"));

  py::enum_<QueryMode>(m, "QueryMode")
      .value("MONOLINGUAL", QueryMode::Monolingual)
      .value("CROSS_LINGUAL", QueryMode::CrossLingual)
      .value("MULTILINGUAL", QueryMode::Multilingual);
  py::class_<ScoredToken>(m, "ScoredToken")
      .def_readonly("token", &ScoredToken::token)
      .def_readonly("score", &ScoredToken::score)
      .def("__repr__",
           [](const ScoredToken& s) { return "ScoredToken('" + to_string(s.token) + "', " + std::to_string(s.score) + ")"; });
  m.def(
      "ranked_list",
      [](const EmbeddingSpace& s, const Token& q, QueryMode mode, std::size_t limit) {
        return ranked_list(s, q, mode, limit).items;
      },
      py::arg("space"), py::arg("query"), py::arg("mode") = QueryMode::CrossLingual, py::arg("limit") = 10);
  m.def("nearest_cross", &nearest_cross, py::arg("space"), py::arg("query"));

  py::enum_<ContextMethod>(m, "ContextMethod")
      .value("INTERPOLATED_ADD", ContextMethod::InterpolatedAdd)
      .value("ADD_MELAMUD", ContextMethod::AddMelamud)
      .value("MULT_MELAMUD", ContextMethod::MultMelamud);

  py::class_<SwtcInstance>(m, "SwtcInstance")
      .def(py::init<Token, std::vector<Token>, std::vector<Token>, Token>(), py::arg("pivot"), py::arg("sentence"),
           py::arg("candidates"), py::arg("gold"))
      .def_readwrite("pivot", &SwtcInstance::pivot)
      .def_readwrite("sentence", &SwtcInstance::sentence)
      .def_readwrite("candidates", &SwtcInstance::candidates)
      .def_readwrite("gold", &SwtcInstance::gold);

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("correct", &EvalResult::correct)
      .def_readonly("covered", &EvalResult::covered)
      .def_readonly("acc1", &EvalResult::acc1)
      .def_readonly("coverage", &EvalResult::coverage)
      .def_readonly("oov_context", &EvalResult::oov_context)
      .def("__len__", &EvalResult::size);

  m.def(
      "load_ble_test", [](const std::filesystem::path& p) { return load_ble_test(p).pairs; }, py::arg("path"));
  m.def(
      "ble_evaluate",
      [](const EmbeddingSpace& s, const std::vector<std::pair<Token, Token>>& pairs) {
        return ble_evaluate(s, BleTestSet{pairs});
      },
      py::arg("space"), py::arg("pairs"));
  m.def(
      "load_swtc_instances", [](const std::filesystem::path& p) { return load_swtc_instances(p); }, py::arg("path"));
  m.def(
      "swtc_evaluate",
      [](const EmbeddingSpace& s, const std::vector<SwtcInstance>& inst, ContextMethod method, double lambda) {
        return swtc_evaluate(s, inst, {method, lambda});
      },
      py::arg("space"), py::arg("instances"), py::arg("method") = ContextMethod::InterpolatedAdd,
      py::arg("lam") = 1.0);
  m.def("no_context_baseline", &no_context_baseline, py::arg("space"), py::arg("instances"));

  py::class_<McNemarResult>(m, "McNemarResult")
      .def_readonly("chi2", &McNemarResult::chi2)
      .def_readonly("significant", &McNemarResult::significant)
      .def_readonly("only_a", &McNemarResult::only_a)
      .def_readonly("only_b", &McNemarResult::only_b);
  m.def("mcnemar", &mcnemar, py::arg("a"), py::arg("b"));
}
