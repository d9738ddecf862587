"""scibank: a research-expertise knowledge bank.

Pipeline: survey CSV -> validated records -> normalized terms -> dual
inverted index -> static disclosure site + bank file, with descriptive
statistics, a co-word graph, and a ranked query engine on top.
"""

__version__ = "0.1.0"

from .normalize import Facet, Origin, StopList, TermRecord, canonicalize, clean_corpus
from .ingest import Researcher, parse_survey, read_survey_csv
from .bank import KnowledgeBank, build_bank, lookup, obfuscate_email
from .emit import emit_bank_file, emit_site, load_bank_file
from .query import search

__all__ = [
    "Facet",
    "Origin",
    "StopList",
    "TermRecord",
    "Researcher",
    "KnowledgeBank",
    "canonicalize",
    "clean_corpus",
    "parse_survey",
    "read_survey_csv",
    "build_bank",
    "lookup",
    "obfuscate_email",
    "emit_site",
    "emit_bank_file",
    "load_bank_file",
    "search",
    "__version__",
]
