"""relcorpus: analytics and annotation tooling for translation-relation corpora."""

from .model import (
    AlignedUnit,
    AnnotationError,
    Corpus,
    LingToken,
    RelationLabel,
    SentencePair,
    SubTag,
    ValidationReport,
    Violation,
    project_source_relations,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedUnit",
    "AnnotationError",
    "Corpus",
    "LingToken",
    "RelationLabel",
    "SentencePair",
    "SubTag",
    "ValidationReport",
    "Violation",
    "project_source_relations",
    "validate",
    "__version__",
]
