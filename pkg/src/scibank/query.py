"""Ranked free-text search over the knowledge bank.

The query is canonicalized and permuted with the same rules as the
corpus, then every resulting term is looked up in the indexes. A
researcher's score sums idf(t) * kind_weight over their matched terms,
idf(t) = ln(1 + R/df(t)) with R the researcher count and df(t) the
posting size, so rare terms dominate in a corpus that is mostly
variation. Whole-phrase matches outweigh word matches, which outweigh
synonym-expanded matches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .bank import KnowledgeBank, name_sort_key
from .errors import EmptyTermError
from .normalize import Facet, _phrase_words, canonicalize

PHRASE_WEIGHT = 2.0
WORD_WEIGHT = 1.0
SYNONYM_WEIGHT = 0.5

KIND_WEIGHTS = {"phrase": PHRASE_WEIGHT, "word": WORD_WEIGHT, "synonym": SYNONYM_WEIGHT}


class QueryTerm(NamedTuple):
    norm: str
    kind: str  # phrase | word | synonym


class MatchedTerm(NamedTuple):
    norm: str
    facet: Facet
    kind: str


@dataclass(frozen=True)
class QueryResult:
    researcher_id: str
    score: float
    matched_terms: list[MatchedTerm]


def query_terms(query: str, bank: KnowledgeBank) -> list[QueryTerm]:
    """The query's whole-phrase term plus its permuted words, in order.

    Word filtering reuses the stoplist the bank was built with, so query
    words and index words agree. An empty query yields no terms.
    """
    try:
        _, norm = canonicalize(query)
    except EmptyTermError:
        return []
    terms = [QueryTerm(norm, "phrase")]
    words = norm.split(" ")
    if len(words) > 1:
        seen = {norm}
        for word in _phrase_words(norm, bank.stoplist):
            if word not in seen:
                seen.add(word)
                terms.append(QueryTerm(word, "word"))
    return terms


def expand_query(
    terms: Iterable[QueryTerm],
    synonym_table: Mapping[str, set[str]] | None,
) -> list[QueryTerm]:
    """Add single-hop synonyms, marked so they score at half word weight.

    One hop only: synonyms of synonyms are not followed, which keeps
    bilingual tables (a->b, b->a) from drifting.
    """
    terms = list(terms)
    if not synonym_table:
        return terms
    present = {t.norm for t in terms}
    expanded = list(terms)
    for term in terms:
        for synonym in sorted(synonym_table.get(term.norm, ())):
            if synonym not in present:
                present.add(synonym)
                expanded.append(QueryTerm(synonym, "synonym"))
    return expanded


def load_synonyms(path: str | Path) -> dict[str, set[str]]:
    """Parse a synonym table file: lines "term<TAB>synonym[,synonym...]"."""
    table: dict[str, set[str]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or "\t" not in line:
            continue
        term, rest = line.split("\t", 1)
        try:
            _, term_norm = canonicalize(term)
        except EmptyTermError:
            continue
        synonyms = set()
        for chunk in rest.split(","):
            try:
                synonyms.add(canonicalize(chunk)[1])
            except EmptyTermError:
                pass
        if synonyms:
            table.setdefault(term_norm, set()).update(synonyms)
    return table


def idf(bank: KnowledgeBank, df: int) -> float:
    return math.log(1 + bank.researcher_count / df)


def search(
    bank: KnowledgeBank,
    query: str,
    facet_filter: Facet | None = None,
    limit: int = 10,
    synonyms: Mapping[str, set[str]] | None = None,
) -> list[QueryResult]:
    """Rank researchers against a free-text query.

    Results are sorted by score descending, ties broken by surname,
    given name, then id, and truncated to ``limit``.
    """
    terms = expand_query(query_terms(query, bank), synonyms)
    if not terms or bank.researcher_count == 0:
        return []

    facets = [facet_filter] if facet_filter is not None else list(Facet)
    scores: dict[str, float] = {}
    matches: dict[str, list[MatchedTerm]] = {}
    for term in terms:
        for facet in facets:
            posting = bank.index_for(facet).get(term.norm)
            if posting is None:
                continue
            weight = KIND_WEIGHTS[term.kind] * idf(bank, len(posting.researcher_ids))
            for rid in posting.researcher_ids:
                scores[rid] = scores.get(rid, 0.0) + weight
                matches.setdefault(rid, []).append(MatchedTerm(term.norm, facet, term.kind))

    def sort_key(rid: str):
        surname, given = name_sort_key(bank.researchers[rid].full_name)
        return (-scores[rid], surname, given, rid)

    ranked = sorted(scores, key=sort_key)
    return [
        QueryResult(researcher_id=rid, score=scores[rid], matched_terms=matches[rid])
        for rid in ranked[: max(limit, 0)]
    ]
