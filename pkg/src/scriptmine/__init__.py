"""Corpus analytics for chaptered book collections.

Pipeline: raw texts -> labeled chapter corpus -> cleaned token lists ->
document-term matrix -> TF-IDF weights -> chapter/book distance analysis ->
supervised classification with cross-validated grid search.
"""

__version__ = "0.1.0"

from ._kernels import backend as kernel_backend
from .ingest import BookLabel, Corpus, RawDocument, load_corpus
from .preprocess import PreprocessConfig, pipeline, tokenize_words
from .dtm import DocTermMatrix, WeightMatrix, build_dtm, idf, slice_book, tf, tfidf

__all__ = [
    "__version__",
    "kernel_backend",
    "BookLabel",
    "Corpus",
    "RawDocument",
    "load_corpus",
    "PreprocessConfig",
    "pipeline",
    "tokenize_words",
    "DocTermMatrix",
    "WeightMatrix",
    "build_dtm",
    "tf",
    "idf",
    "tfidf",
    "slice_book",
]
