"""Simulated-user laboratory comparing the naive and belief-scored knowledge bases."""

from .harness import (
    EpisodeLog,
    ExperimentConfig,
    ExperimentResult,
    GridCell,
    SlideRecord,
    matching_score,
    nkb_user_study,
    run_experiment,
    run_grid,
    run_phase,
    write_curves_csv,
    write_grid_csv,
)
from .lexicon import NeighborLexicon, generate_lexicon, load_lexicon_tsv, save_lexicon_tsv
from .users import PDF_SHAPES, SimulatedUser, VocabularyPdf, sample_word

__all__ = [
    "EpisodeLog",
    "ExperimentConfig",
    "ExperimentResult",
    "GridCell",
    "NeighborLexicon",
    "PDF_SHAPES",
    "SimulatedUser",
    "SlideRecord",
    "VocabularyPdf",
    "generate_lexicon",
    "load_lexicon_tsv",
    "matching_score",
    "nkb_user_study",
    "run_experiment",
    "run_grid",
    "run_phase",
    "sample_word",
    "save_lexicon_tsv",
    "write_curves_csv",
    "write_grid_csv",
]
