"""Citation-orchestration indicators (C/h^2, A50%C, A50) over a publication corpus."""

from ._citorch import (
    Corpus,
    CorpusError,
    IngestError,
    PipelineError,
    SynthConfigError,
    UndefinedMetric,
    c_over_h2,
    contingency,
    fold_enrichment,
    format_significant,
    h_index,
    percentile_threshold,
    run,
    synth,
)

__all__ = [
    "Corpus",
    "CorpusError",
    "IngestError",
    "PipelineError",
    "SynthConfigError",
    "UndefinedMetric",
    "c_over_h2",
    "contingency",
    "fold_enrichment",
    "format_significant",
    "h_index",
    "percentile_threshold",
    "run",
    "synth",
]
