"""deckforge: conversational report generation with an adaptive knowledge base."""

__version__ = "0.1.0"
