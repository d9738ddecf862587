"""Deterministic serialization: the static disclosure site and the bank file.

The site is plain HTML browsable without scripts: one index page listing
every term of both facets alphabetically, one page per term showing the
relevant researchers in a Name / Keywords / Expertise table. Output is
byte-identical across runs on identical input. Email obfuscation is
total: "@" never appears raw in emitted HTML (it is entity-escaped even
inside phrase text).

The bank file is a versioned JSON document ("bank-format": 1) with
sorted keys, consumed by the query CLI, the API service, and the web UI.
Build timestamps live in a sidecar, never in the document, so digests
stay stable.
"""

from __future__ import annotations

import hashlib
import html
import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple
from urllib.parse import quote

from . import __version__
from .bank import KnowledgeBank, Posting, ResearcherCard
from .errors import BankFormatError, SiteWriteError
from .normalize import Facet, Origin, StopList, TermRecord

BANK_FORMAT = 1

FACET_DIRS = {Facet.KEYWORD: "keyword", Facet.EXPERTISE: "expert"}


class ManifestEntry(NamedTuple):
    path: str
    size: int
    digest: str


@dataclass(frozen=True)
class SiteManifest:
    files: list[ManifestEntry]

    def render(self) -> str:
        return "\n".join(f"{e.path}\t{e.size}\t{e.digest}" for e in self.files) + "\n"


def manifest_entry(path: str, content: bytes) -> ManifestEntry:
    return ManifestEntry(path, len(content), hashlib.sha256(content).hexdigest())


def slugify(norm: str) -> str:
    """Filename slug: spaces to "-", non-alphanumerics except "-" percent-encoded."""
    out = []
    for ch in norm:
        if ch == " ":
            out.append("-")
        elif ch == "-" or ch.isalnum():
            out.append(ch)
        else:
            out.append(quote(ch, safe=""))
    return "".join(out)


def _esc(text: str) -> str:
    # Entity-escaping "@" keeps the no-raw-@ guarantee even when phrase
    # text itself contains an address-like string.
    return html.escape(text, quote=True).replace("@", "&#64;")


_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ font-family: Georgia, serif; margin: 2em auto; max-width: 60em; padding: 0 1em; }}
table {{ border-collapse: collapse; width: 100%; }}
th, td {{ border: 1px solid #999; padding: 0.4em 0.6em; vertical-align: top; text-align: left; }}
ul {{ margin: 0; padding-left: 1.2em; }}
.facet {{ color: #666; font-size: 0.85em; }}
</style>
</head>
<body>
{body}
</body>
</html>
"""


def _assign_paths(bank: KnowledgeBank) -> dict[Facet, dict[str, str]]:
    """Per-facet norm -> relative page path, with collision-proof slugs.

    Distinct norms can share a slug ("a-b" vs "a b"); later ones, in
    sorted norm order, get a numeric suffix.
    """
    paths: dict[Facet, dict[str, str]] = {}
    for facet in Facet:
        taken: set[str] = set()
        mapping: dict[str, str] = {}
        for norm in sorted(bank.index_for(facet)):
            slug = slugify(norm)
            candidate, i = slug, 1
            while candidate in taken:
                i += 1
                candidate = f"{slug}.{i}"
            taken.add(candidate)
            mapping[norm] = f"{FACET_DIRS[facet]}/{candidate}.htm"
        paths[facet] = mapping
    return paths


def _render_index(bank: KnowledgeBank, paths: dict[Facet, dict[str, str]]) -> str:
    entries = []
    for facet in Facet:
        for norm, posting in bank.index_for(facet).items():
            entries.append((norm, facet, posting))
    entries.sort(key=lambda e: (e[0], e[1].value))
    items = [
        f'<li><a href="{_esc(paths[facet][norm])}">{_esc(posting.term.display)}</a>'
        f' <span class="facet">{facet.value}</span></li>'
        for norm, facet, posting in entries
    ]
    body = (
        "<h1>Index of keywords and expertise</h1>\n"
        f"<p>{bank.researcher_count} researchers &middot; "
        f"{len(bank.keyword_index)} keyword terms &middot; "
        f"{len(bank.expertise_index)} expertise terms</p>\n"
        "<ul>\n" + "\n".join(items) + "\n</ul>"
    )
    return _PAGE.format(title="Index of keywords and expertise", body=body)


def _card_rows(bank: KnowledgeBank, posting: Posting) -> str:
    rows = []
    for rid in posting.researcher_ids:
        card = bank.researchers[rid]
        keywords = "".join(f"<li>{_esc(p)}</li>" for p in card.keywords_display)
        expertise = "".join(f"<li>{_esc(p)}</li>" for p in card.expertise_display)
        rows.append(
            "<tr>"
            f"<td>{_esc(card.full_name)}<br>&lt;{_esc(card.email_obfuscated)}&gt;</td>"
            f"<td><ul>{keywords}</ul></td>"
            f"<td><ul>{expertise}</ul></td>"
            "</tr>"
        )
    return "\n".join(rows)


def _render_term_page(bank: KnowledgeBank, facet: Facet, posting: Posting) -> str:
    body = (
        f"<h1>{_esc(posting.term.display)} "
        f'<span class="facet">({facet.value})</span></h1>\n'
        '<p><a href="../index.htm">Back to the index</a></p>\n'
        "<table>\n<tr><th>Name</th><th>Keywords</th><th>Expertise</th></tr>\n"
        + _card_rows(bank, posting)
        + "\n</table>"
    )
    return _PAGE.format(title=posting.term.display, body=body)


def emit_site(bank: KnowledgeBank, out_dir: str | Path) -> SiteManifest:
    """Write the static site; returns the manifest of every emitted file.

    Paths in the manifest are relative to ``out_dir`` and sorted.
    """
    out = Path(out_dir)
    paths = _assign_paths(bank)
    pages: dict[str, str] = {"index.htm": _render_index(bank, paths)}
    for facet in Facet:
        for norm, posting in bank.index_for(facet).items():
            pages[paths[facet][norm]] = _render_term_page(bank, facet, posting)

    entries = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for facet_dir in FACET_DIRS.values():
            (out / facet_dir).mkdir(exist_ok=True)
        for rel_path in sorted(pages):
            content = pages[rel_path].encode("utf-8")
            (out / rel_path).write_bytes(content)
            entries.append(manifest_entry(rel_path, content))
    except OSError as exc:
        raise SiteWriteError(f"cannot write site under {out}: {exc}") from exc
    return SiteManifest(files=entries)


def emit_bank_file(bank: KnowledgeBank) -> str:
    """Serialize the bank as the versioned JSON document."""

    def index_doc(index: dict[str, Posting]) -> dict:
        doc = {}
        for norm, posting in index.items():
            entry = {
                "display": posting.term.display,
                "origin": posting.term.origin.value,
                "researchers": list(posting.researcher_ids),
            }
            if posting.term.source_phrase is not None:
                entry["source_phrase"] = posting.term.source_phrase
            doc[norm] = entry
        return doc

    document = {
        "bank-format": BANK_FORMAT,
        "metadata": {
            "tool": "scibank",
            "version": __version__,
            "researchers": bank.researcher_count,
            "keyword_terms": len(bank.keyword_index),
            "expertise_terms": len(bank.expertise_index),
            "stoplist": sorted(bank.stoplist.words),
            "min_length": bank.stoplist.min_length,
        },
        "researchers": {
            rid: {
                "full_name": card.full_name,
                "email_obfuscated": card.email_obfuscated,
                "keywords_display": list(card.keywords_display),
                "expertise_display": list(card.expertise_display),
            }
            for rid, card in bank.researchers.items()
        },
        "keyword_index": index_doc(bank.keyword_index),
        "expertise_index": index_doc(bank.expertise_index),
    }
    return json.dumps(document, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def load_bank_file(text: str) -> KnowledgeBank:
    """Parse a bank document; raises BankFormatError on version mismatch."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BankFormatError(f"bank file is not valid JSON: {exc}") from exc
    fmt = document.get("bank-format")
    if fmt != BANK_FORMAT:
        raise BankFormatError(f"unsupported bank-format {fmt!r}, expected {BANK_FORMAT}")

    researchers = {
        rid: ResearcherCard(
            full_name=entry["full_name"],
            email_obfuscated=entry["email_obfuscated"],
            keywords_display=list(entry["keywords_display"]),
            expertise_display=list(entry["expertise_display"]),
        )
        for rid, entry in document["researchers"].items()
    }

    def load_index(key: str, facet: Facet) -> dict[str, Posting]:
        index = {}
        for norm, entry in document[key].items():
            term = TermRecord(
                display=entry["display"],
                norm=norm,
                facet=facet,
                origin=Origin(entry["origin"]),
                source_phrase=entry.get("source_phrase"),
            )
            index[norm] = Posting(term=term, researcher_ids=list(entry["researchers"]))
        return index

    metadata = document.get("metadata", {})
    stoplist = StopList(
        words=frozenset(metadata.get("stoplist", [])),
        min_length=int(metadata.get("min_length", 2)),
    )
    return KnowledgeBank(
        researchers=researchers,
        keyword_index=load_index("keyword_index", Facet.KEYWORD),
        expertise_index=load_index("expertise_index", Facet.EXPERTISE),
        stoplist=stoplist,
    )
