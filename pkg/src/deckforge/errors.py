"""Exception hierarchy shared across deckforge modules."""


class DeckforgeError(Exception):
    """Base class for all deckforge errors."""

    code = "error"


class ValidationError(DeckforgeError):
    """A value violates one of its documented invariants."""

    code = "validation"


class ParseError(DeckforgeError):
    """Input text or file could not be parsed at all."""

    code = "parse"


class FormatError(DeckforgeError):
    """A file is parseable but does not match the expected schema."""

    code = "format"


class EmptyCommandError(DeckforgeError):
    """The user issued an empty or whitespace-only command."""

    code = "empty_command"


class OntologyError(DeckforgeError):
    """A main-concept or sub-concept is not part of the ontology."""

    code = "ontology"


class AlreadyMappedError(DeckforgeError):
    """Attempt to overwrite an existing naive knowledge-base mapping."""

    code = "already_mapped"


class VariantMismatchError(DeckforgeError):
    """A knowledge-base file was loaded into the wrong KB variant."""

    code = "variant_mismatch"


class AmbiguityError(DeckforgeError):
    """A command carries contradictory concept spans."""

    code = "ambiguity"


class InvalidChoiceError(DeckforgeError):
    """A clarification answer is not among the offered candidates."""

    code = "invalid_choice"


class NoSuchSkillError(DeckforgeError):
    """No atomic skill is registered for the requested object."""

    code = "no_such_skill"


class TargetNotFoundError(DeckforgeError):
    """An update or delete referenced a slide that does not exist."""

    code = "target_not_found"


class NameTakenError(DeckforgeError):
    """A macro name is already registered in the skill library."""

    code = "name_taken"


class NothingToSaveError(DeckforgeError):
    """Macro recording was requested with an empty command history."""

    code = "nothing_to_save"


class DataError(DeckforgeError):
    """A referenced dataset is missing or unreadable."""

    code = "data"


class InsufficientDataError(DeckforgeError):
    """A primitive needs more data points than the series provides."""

    code = "insufficient_data"


class WindowError(DeckforgeError):
    """A rolling window exceeds the series length."""

    code = "window"


class UnboundSlotError(DeckforgeError):
    """An insight template slot has no binding."""

    code = "unbound_slot"


class ScoringError(DeckforgeError):
    """An insight is missing a utility score required by the config."""

    code = "scoring"


class DegenerateDataError(DeckforgeError):
    """Chart data admits no sensible rendering (e.g. all-zero pie)."""

    code = "degenerate_data"


class ConfigError(DeckforgeError):
    """An experiment or simulation configuration is inconsistent."""

    code = "config"


class DimensionError(DeckforgeError):
    """Two vectors that must have equal length do not."""

    code = "dimension"
