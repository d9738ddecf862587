"""The knowledge bank: a dual inverted index from terms to researchers.

Keyword and expertise facets are indexed separately. Each index maps a
norm-form term to its posting (the term record plus the researchers who
disclosed it, sorted by surname). Word-level entries union the postings
of every phrase they were split from; when a single-word phrase and a
permuted word share a key, one merged entry covers both.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import DuplicateResearcherError, EmailFormatError
from .ingest import Researcher, validate_email
from .normalize import Corpus, Facet, Origin, StopList, TermRecord, researcher_phrases


def researcher_id(full_name: str, email: str) -> str:
    """Stable 16-hex id so rebuilds agree without a database."""
    digest = hashlib.sha256(f"{full_name}\x1f{email}".encode("utf-8")).hexdigest()
    return digest[:16]


def name_sort_key(full_name: str) -> tuple[str, str]:
    """(surname, given name) folded for ordering.

    Names follow the survey's given-name-first convention, so everything
    after the first token is treated as the surname ("Francesco DE LUCA"
    sorts under "de luca").
    """
    tokens = full_name.split()
    if len(tokens) >= 2:
        return " ".join(tokens[1:]).casefold(), tokens[0].casefold()
    return full_name.casefold(), ""


def obfuscate_email(addr: str) -> str:
    """Replace the single "@" with " at "; no other change."""
    if not validate_email(addr):
        raise EmailFormatError(f"not an obfuscatable address: {addr!r}")
    return addr.replace("@", " at ")


@dataclass(frozen=True)
class ResearcherCard:
    """What a term page shows for one researcher."""

    full_name: str
    email_obfuscated: str
    keywords_display: list[str]
    expertise_display: list[str]


@dataclass(frozen=True)
class Posting:
    term: TermRecord
    researcher_ids: list[str]


@dataclass(frozen=True)
class KnowledgeBank:
    researchers: dict[str, ResearcherCard]
    keyword_index: dict[str, Posting]
    expertise_index: dict[str, Posting]
    stoplist: StopList = field(default_factory=StopList.default)

    def index_for(self, facet: Facet) -> dict[str, Posting]:
        return self.keyword_index if facet is Facet.KEYWORD else self.expertise_index

    @property
    def researcher_count(self) -> int:
        return len(self.researchers)


def build_bank(researchers: list[Researcher], corpus: Corpus) -> KnowledgeBank:
    """Assemble the bank from parsed records and their cleaned corpus.

    Precondition: ``corpus`` came from normalize.clean_corpus over the
    same researcher list.
    """
    cards: dict[str, ResearcherCard] = {}
    phrase_owners: dict[Facet, dict[str, list[str]]] = {f: {} for f in Facet}
    for r in researchers:
        rid = researcher_id(r.full_name, r.email)
        if rid in cards:
            raise DuplicateResearcherError(
                f"duplicate researcher {r.full_name!r} <{r.email}>"
            )
        keyword_pairs = researcher_phrases(r, Facet.KEYWORD)
        expertise_pairs = researcher_phrases(r, Facet.EXPERTISE)
        cards[rid] = ResearcherCard(
            full_name=r.full_name,
            email_obfuscated=obfuscate_email(r.email),
            keywords_display=[display for display, _ in keyword_pairs],
            expertise_display=[display for display, _ in expertise_pairs],
        )
        for facet, pairs in ((Facet.KEYWORD, keyword_pairs), (Facet.EXPERTISE, expertise_pairs)):
            for _, norm in pairs:
                phrase_owners[facet].setdefault(norm, []).append(rid)

    order = {rid: (*name_sort_key(card.full_name), rid) for rid, card in cards.items()}

    def sorted_posting(ids: list[str]) -> list[str]:
        return sorted(set(ids), key=lambda rid: order[rid])

    indexes: dict[Facet, dict[str, Posting]] = {}
    for facet in Facet:
        owners = phrase_owners[facet]
        sources = corpus.word_sources[facet]

        def word_union(word: str) -> list[str]:
            ids: list[str] = []
            for phrase in sources.get(word, []):
                ids.extend(owners.get(phrase, []))
            return ids

        index: dict[str, Posting] = {}
        for term in corpus.phrases[facet]:
            # A single-word phrase shares its key with the permuted word
            # level; the merged posting unions both contributions.
            ids = word_union(term.norm) if " " not in term.norm else owners[term.norm]
            index[term.norm] = Posting(term=term, researcher_ids=sorted_posting(ids))
        for term in corpus.words[facet]:
            if term.norm in index:
                continue
            index[term.norm] = Posting(
                term=term, researcher_ids=sorted_posting(word_union(term.norm))
            )
        indexes[facet] = index

    return KnowledgeBank(
        researchers=cards,
        keyword_index=indexes[Facet.KEYWORD],
        expertise_index=indexes[Facet.EXPERTISE],
        stoplist=corpus.stoplist,
    )


def lookup(bank: KnowledgeBank, norm: str, facet: Facet) -> list[ResearcherCard]:
    """Researcher cards for a term, in posting order; [] for unknown terms.

    Unknown terms are not an error: the disclosure site must degrade
    gracefully for arbitrary clicks and queries.
    """
    posting = bank.index_for(facet).get(norm)
    if posting is None:
        return []
    return [bank.researchers[rid] for rid in posting.researcher_ids]
