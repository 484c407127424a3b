"""Bilingual word embeddings from document-aligned comparable corpora."""

from ._core import (
    AlignedCorpus,
    BwesgError,
    ContextMethod,
    DocumentPair,
    EmbeddingSpace,
    EvalResult,
    McNemarResult,
    PipelineConfig,
    PseudoBilingualDocument,
    QueryMode,
    ScoredToken,
    Strategy,
    SwtcInstance,
    Token,
    TrainingConfig,
    __version__,
    ble_evaluate,
    concat,
    cosine,
    hellinger,
    length_ratio_shuffle,
    load_ble_test,
    load_corpus,
    load_space,
    load_swtc_instances,
    mcnemar,
    merge_and_shuffle,
    nearest_cross,
    no_context_baseline,
    ranked_list,
    run_pipeline,
    save_space,
    shuffle_corpus,
    swtc_evaluate,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
