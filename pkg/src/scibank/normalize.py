"""Phrase canonicalization, deduplication, and single-word permutation.

Raw survey answers arrive as free-text phrases ("Public   Transport",
"IAS / IFRS"). This module turns them into stable index terms: a display
form that keeps the author's casing, and a folded ``norm`` form used as
the index key. Composed phrases are additionally split ("permuted") into
their constituent words so each significant word becomes a clickable
index entry of its own; a stoplist plus length/digit rules filter out
generated words with no retrieval value.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from .errors import EmptyTermError

if TYPE_CHECKING:
    from .ingest import Researcher

_WS_RE = re.compile(r"\s+")

# Characters that survive into the norm form besides letters and digits.
# Hyphen keeps compounds like "spin-off" as one word; apostrophe keeps
# elisions like "d'azienda". Everything else folds to a space.
_KEPT_PUNCT = "-' "


class Facet(str, Enum):
    """Which survey question a term answers."""

    KEYWORD = "keyword"
    EXPERTISE = "expertise"


class Origin(str, Enum):
    """Whether a term is an original phrase or a permuted single word."""

    PHRASE = "phrase"
    WORD = "word"


@dataclass(frozen=True)
class TermRecord:
    """One normalized index term.

    ``display`` preserves the original casing; ``norm`` is the folded
    index key. Word terms record the phrase they were first split from.
    """

    display: str
    norm: str
    facet: Facet
    origin: Origin
    source_phrase: str | None = None

    def __post_init__(self) -> None:
        if self.origin is Origin.WORD:
            if " " in self.norm:
                raise ValueError(f"word term contains a space: {self.norm!r}")
            if self.source_phrase is None:
                raise ValueError(f"word term lacks a source phrase: {self.norm!r}")
        elif self.source_phrase is not None:
            raise ValueError(f"phrase term carries a source phrase: {self.norm!r}")


@dataclass(frozen=True)
class StopList:
    """Words excluded from permutation output, plus a minimum word length."""

    words: frozenset[str]
    min_length: int = 2

    def __post_init__(self) -> None:
        if self.min_length < 1:
            raise ValueError("min_length must be >= 1")

    def allows(self, word: str) -> bool:
        """True if ``word`` may become a standalone word term."""
        return (
            len(word) >= self.min_length
            and not word.isdigit()
            and word not in self.words
        )

    @classmethod
    def from_words(cls, words: Iterable[str], min_length: int = 2) -> "StopList":
        folded = frozenset(_fold(w) for w in words if _fold(w))
        return cls(words=folded, min_length=min_length)

    @classmethod
    def from_file(cls, path: str | Path, min_length: int = 2) -> "StopList":
        """Load a stoplist file: UTF-8, one word per line, '#' comments."""
        text = Path(path).read_text(encoding="utf-8")
        return cls._from_text(text, min_length)

    @classmethod
    def default(cls, min_length: int = 2) -> "StopList":
        """The shipped minimal Italian+English function-word list."""
        text = resources.files("scibank.data").joinpath("stoplist.txt").read_text("utf-8")
        return cls._from_text(text, min_length)

    @classmethod
    def _from_text(cls, text: str, min_length: int) -> "StopList":
        words = []
        for line in text.splitlines():
            entry = line.split("#", 1)[0].strip()
            if entry:
                words.append(entry)
        return cls.from_words(words, min_length=min_length)


def _fold(text: str) -> str:
    """Casefold and strip non-indexable punctuation, keeping diacritics."""
    folded = text.casefold().replace("’", "'")
    kept = "".join(ch if ch.isalnum() or ch in _KEPT_PUNCT else " " for ch in folded)
    return _WS_RE.sub(" ", kept).strip()


def canonicalize(raw: str) -> tuple[str, str]:
    """Return the (display, norm) pair for one raw phrase.

    display: trimmed, whitespace-collapsed, NFC-normalized original.
    norm: display casefolded, with punctuation other than hyphen and
    apostrophe replaced by spaces and whitespace re-collapsed. Diacritics
    are significant and survive folding.

    Raises EmptyTermError when the input trims to nothing, or when the
    folded form has no indexable characters left (e.g. "???").
    """
    display = _WS_RE.sub(" ", unicodedata.normalize("NFC", raw)).strip()
    if not display:
        raise EmptyTermError("phrase is empty after trimming")
    norm = _fold(display)
    if not norm:
        raise EmptyTermError(f"phrase folds to nothing indexable: {display!r}")
    return display, norm


def dedupe(phrases: Iterable[str]) -> tuple[list[str], dict[str, int]]:
    """Collapse repeated norm-form phrases.

    Returns the unique phrases in first-occurrence order and a
    multiplicity map; multiplicities sum to the input length.
    """
    unique: list[str] = []
    multiplicity: dict[str, int] = {}
    for phrase in phrases:
        if phrase not in multiplicity:
            multiplicity[phrase] = 0
            unique.append(phrase)
        multiplicity[phrase] += 1
    return unique, multiplicity


def permute(phrase_norm: str, stoplist: StopList) -> set[str]:
    """Split a composed phrase into its significant single words.

    Stoplist words, words shorter than the minimum length, and pure-digit
    words are dropped. Single-word phrases yield an empty set: the phrase
    entry itself already covers them (see the bank module's merge rule).
    """
    words = phrase_norm.split(" ")
    if len(words) <= 1:
        return set()
    return {w for w in words if stoplist.allows(w)}


def _phrase_words(phrase_norm: str, stoplist: StopList) -> list[str]:
    """Words a phrase contributes to the word level, in phrase order.

    Single-word phrases contribute themselves unfiltered: they are
    researcher-authored terms, not machine-generated splits, so the
    false-positive filter does not apply to them.
    """
    words = phrase_norm.split(" ")
    if len(words) == 1:
        return words
    allowed = permute(phrase_norm, stoplist)
    return [w for w in words if w in allowed]


def researcher_phrases(researcher: "Researcher", facet: Facet) -> list[tuple[str, str]]:
    """Canonical (display, norm) pairs for one researcher's facet answers.

    Deduplicates per researcher by norm, keeping first-occurrence order;
    phrases that fold to nothing indexable are skipped.
    """
    raw = researcher.keywords if facet is Facet.KEYWORD else researcher.expertise
    out: list[tuple[str, str]] = []
    seen: set[str] = set()
    for phrase in raw:
        try:
            display, norm = canonicalize(phrase)
        except EmptyTermError:
            continue
        if norm not in seen:
            seen.add(norm)
            out.append((display, norm))
    return out


def researcher_words(
    researcher: "Researcher", facet: Facet, stoplist: StopList
) -> list[str]:
    """Ordered unique word-level terms for one researcher's facet answers."""
    out: list[str] = []
    seen: set[str] = set()
    for _, norm in researcher_phrases(researcher, facet):
        for word in _phrase_words(norm, stoplist):
            if word not in seen:
                seen.add(word)
                out.append(word)
    return out


@dataclass(frozen=True)
class FacetStats:
    raw_phrases: int
    unique_phrases: int
    unique_words: int


@dataclass(frozen=True)
class CleaningStats:
    by_facet: dict[Facet, FacetStats]

    def __getitem__(self, facet: Facet) -> FacetStats:
        return self.by_facet[facet]


@dataclass(frozen=True)
class Corpus:
    """Output of the cleaning stage, consumed by the bank and graph builders.

    ``multiplicity`` counts researchers mentioning each phrase (not raw
    repetitions within one answer); ``word_sources`` maps each word term
    to the unique phrases it appears in, in first-occurrence order.
    """

    phrases: dict[Facet, list[TermRecord]]
    words: dict[Facet, list[TermRecord]]
    multiplicity: dict[Facet, dict[str, int]]
    word_sources: dict[Facet, dict[str, list[str]]]
    stats: CleaningStats
    stoplist: StopList = field(default_factory=StopList.default)


def clean_corpus(
    researchers: Iterable["Researcher"], stoplist: StopList | None = None
) -> Corpus:
    """Canonicalize, dedupe, and permute every researcher's answers."""
    if stoplist is None:
        stoplist = StopList.default()
    researchers = list(researchers)

    phrases: dict[Facet, list[TermRecord]] = {}
    words: dict[Facet, list[TermRecord]] = {}
    multiplicity: dict[Facet, dict[str, int]] = {}
    word_sources: dict[Facet, dict[str, list[str]]] = {}
    facet_stats: dict[Facet, FacetStats] = {}

    for facet in Facet:
        raw_total = 0
        phrase_terms: list[TermRecord] = []
        counts: dict[str, int] = {}
        for researcher in researchers:
            raw = researcher.keywords if facet is Facet.KEYWORD else researcher.expertise
            raw_total += len(raw)
            for display, norm in researcher_phrases(researcher, facet):
                if norm not in counts:
                    counts[norm] = 0
                    phrase_terms.append(
                        TermRecord(display=display, norm=norm, facet=facet, origin=Origin.PHRASE)
                    )
                counts[norm] += 1

        word_terms: list[TermRecord] = []
        sources: dict[str, list[str]] = {}
        for term in phrase_terms:
            for word in _phrase_words(term.norm, stoplist):
                slot = sources.setdefault(word, [])
                if not slot:
                    word_terms.append(
                        TermRecord(
                            display=word,
                            norm=word,
                            facet=facet,
                            origin=Origin.WORD,
                            source_phrase=term.norm,
                        )
                    )
                if term.norm not in slot:
                    slot.append(term.norm)

        phrases[facet] = phrase_terms
        words[facet] = word_terms
        multiplicity[facet] = counts
        word_sources[facet] = sources
        facet_stats[facet] = FacetStats(
            raw_phrases=raw_total,
            unique_phrases=len(phrase_terms),
            unique_words=len(word_terms),
        )

    return Corpus(
        phrases=phrases,
        words=words,
        multiplicity=multiplicity,
        word_sources=word_sources,
        stats=CleaningStats(by_facet=facet_stats),
        stoplist=stoplist,
    )
