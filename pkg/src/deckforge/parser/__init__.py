"""Command parser: tokenizer, POS tagger, features, and the CRF concept tagger."""

from .corpus import generate_corpus, load_corpus_file, save_corpus_file, train_test_corpora
from .crf import (
    CONCEPT_LABELS,
    LABELS,
    CrfModel,
    TaggedCommand,
    evaluate_tagger,
    load_model,
    save_model,
    tag_command,
    train_tagger,
)
from .features import BOUNDARY, TokenFeatures, feature_strings, featurize
from .pos import tokenize, tokenize_and_pos

__all__ = [
    "BOUNDARY",
    "CONCEPT_LABELS",
    "CrfModel",
    "LABELS",
    "TaggedCommand",
    "TokenFeatures",
    "evaluate_tagger",
    "feature_strings",
    "featurize",
    "generate_corpus",
    "load_corpus_file",
    "load_model",
    "save_corpus_file",
    "save_model",
    "tag_command",
    "tokenize",
    "tokenize_and_pos",
    "train_tagger",
    "train_test_corpora",
]
