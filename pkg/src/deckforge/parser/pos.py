"""Whitespace/punctuation tokenizer and a lexicon-plus-suffix POS tagger.

The tagger covers the report-command domain with a bundled word list and
falls back to suffix and shape rules. No external NLP dependency.
"""

from __future__ import annotations

import string

from ..errors import EmptyCommandError

PUNCT_CHARS = set(string.punctuation)

VERB = "VERB"
NOUN = "NOUN"
DET = "DET"
ADP = "ADP"
PRON = "PRON"
ADV = "ADV"
ADJ = "ADJ"
CCONJ = "CCONJ"
NUM = "NUM"
PUNCT = "PUNCT"
PART = "PART"

_WORDS: dict[str, str] = {}


def _add(tag: str, words: str) -> None:
    for w in words.split():
        _WORDS[w] = tag


_add(DET, "a an the this that these those some any each every no another my our your his her its their")
_add(
    ADP,
    "in on at of for from with using into onto about over under between among through during against "
    "across behind beyond within without along around near per via upon after before since until toward",
)
_add(PRON, "i you he she it we they me him them us myself yourself itself everyone anything something nothing who what which")
_add(CCONJ, "and or but nor so yet plus")
_add(PART, "to not n't")
_add(
    VERB,
    "create make generate build produce update modify refresh revise regenerate delete remove drop erase "
    "add insert append include put place show display render draw plot compare analyze analyse compute "
    "calculate summarize summarise run launch execute start stop save store load open close send email "
    "share export import rename copy move change set adjust increase decrease use need want give get take "
    "is are was were be been being do does did have has had can could will would shall should may might "
    "must help see look find fetch pull push write read tell ask clarify confirm cancel undo redo replace "
    "apply switch swap keep hold let try check verify review prepare finish complete begin continue "
    "repeat rerun rebuild recreate visualize visualise chart graph highlight annotate label sort rank "
    "filter group aggregate average sum count slice split merge join append",
)
_add(
    ADV,
    "please now then here there today tomorrow yesterday again soon later always never often sometimes "
    "very quite really too also just only instead rather first next last finally quickly slowly nicely "
    "weekly daily monthly quarterly annually yearly once twice together separately above below",
)
_add(
    ADJ,
    "new old big small large little good bad best worst better worse latest recent previous current final "
    "initial main major minor important relevant comparable financial numerical historical weekly daily "
    "monthly quarterly annual yearly top bottom high low open closed full empty whole entire same different "
    "median mean average total rolling moving simple robust naive quick detailed brief short long nice "
    "blue red green dark light",
)
_add(
    NOUN,
    "report reports presentation presentations deck decks slide slides page pages document documents file "
    "files chart charts graph graphs plot plots figure figures table tables piechart piecharts barchart "
    "barcharts linechart linecharts histogram histograms pie bar line wedge axis analysis analyses insight "
    "insights summary summaries overview data dataset datasets source sources series number numbers value "
    "values metric metrics kpi performance return returns price prices volume volumes share shares stock "
    "stocks market markets company companies firm firms client clients ticker tickers sector sectors "
    "revenue sales profit loss cash flow trend trends volatility minimum maximum mean median month months "
    "week weeks day days year years quarter quarters horizon period periods time date dates title titles "
    "name names template templates skill skills macro macros object objects action actions concept concepts "
    "vocabulary word words user users team teams business bank banking finance energy tech healthcare "
    "commodities equities trading marketing briefing review reviews pack packet section "
    "sections content contents output input request requests question questions answer answers parameter "
    "updates "
    "parameters configuration settings list lists item items thing things way ways example examples",
)


def tokenize(command: str) -> list[str]:
    """Whitespace split with leading/trailing punctuation detached as tokens."""
    if not command or not command.strip():
        raise EmptyCommandError("empty command")
    tokens: list[str] = []
    for chunk in command.split():
        prefix: list[str] = []
        suffix: list[str] = []
        while chunk and chunk[0] in PUNCT_CHARS:
            prefix.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in PUNCT_CHARS:
            suffix.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(prefix)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(suffix))
    return tokens


def pos_tag(token: str) -> str:
    """POS for one token: lexicon lookup, then suffix and shape rules."""
    if all(ch in PUNCT_CHARS for ch in token):
        return PUNCT
    lower = token.lower()
    if lower in _WORDS:
        return _WORDS[lower]
    if lower.replace(".", "", 1).replace(",", "").isdigit():
        return NUM
    if lower.endswith("ly"):
        return ADV
    if lower.endswith("ing"):
        return VERB
    # capitalized unknowns and everything else default to noun
    return NOUN


def tokenize_and_pos(command: str) -> list[tuple[str, str]]:
    """Tokenize a command and attach one POS tag per token."""
    return [(tok, pos_tag(tok)) for tok in tokenize(command)]


def lexicon_size() -> int:
    return len(_WORDS)
