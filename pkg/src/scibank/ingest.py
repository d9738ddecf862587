"""Survey-export parsing and validation.

Input is a UTF-8 CSV with the exact header
``full_name,email,position,department,area_code,keywords,expertise``.
The keywords/expertise cells hold ";"-separated phrase lists (phrases
frequently contain commas, so ";" is the list separator; a literal ";"
inside a phrase is not representable). Parsing is batch-tolerant: bad
rows become diagnostics, never abort the run, and raw phrase text is
left untouched apart from outer trimming — normalization is a later
stage.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from . import stats
from .errors import SurveyFormatError

COLUMNS = ["full_name", "email", "position", "department", "area_code", "keywords", "expertise"]

LIST_SEPARATOR = ";"


class Position(str, Enum):
    FULL_PROFESSOR = "Full Professor"
    ASSOCIATE_PROFESSOR = "Associate Professor"
    SENIOR_LECTURER = "Senior Lecturer"
    LECTURER = "Lecturer"
    ASSISTANT_PROFESSOR = "Assistant Professor"


# The 14 research areas prescribed for Italian universities, keyed by the
# two-digit area code used in survey exports.
AREA_NAMES = {
    "01": "Mathematics and Informatics",
    "02": "Physical Sciences",
    "03": "Chemical Sciences",
    "04": "Earth Sciences",
    "05": "Biological Sciences",
    "06": "Medical Sciences",
    "07": "Agricultural Sciences and Veterinary",
    "08": "Civil Engineering and Architecture",
    "09": "Industrial Engineering and Information",
    "10": "Study of the Ancient, Philological and Literary, Historical-artistic and Eastern",
    "11": "Historical Sciences, Philosophical, Education, Psychological, Demo-anthropological, Geography, Sports",
    "12": "Law",
    "13": "Economics, Management, Accounting and Statistics",
    "14": "Social and Political Sciences",
}


def _letters(token: str) -> str:
    return "".join(ch for ch in token.casefold() if ch.isalpha())


_POSITION_TOKENS = {_letters(member.value): member for member in Position}
_AREA_BY_NAME = {name.casefold(): code for code, name in AREA_NAMES.items()}


def parse_position(token: str) -> Position | None:
    """Case-insensitive position lookup; separators and case are ignored."""
    return _POSITION_TOKENS.get(_letters(token))


def parse_area(token: str) -> str | None:
    """Resolve an area cell ("06", "6", or the area name) to its code."""
    cleaned = token.strip()
    if cleaned.isdigit():
        code = cleaned.zfill(2)
        return code if code in AREA_NAMES else None
    return _AREA_BY_NAME.get(cleaned.casefold())


def validate_email(addr: str) -> bool:
    """Exactly one "@", nonempty local and domain, no whitespace."""
    if any(ch.isspace() for ch in addr):
        return False
    if addr.count("@") != 1:
        return False
    local, domain = addr.split("@")
    return bool(local) and bool(domain)


@dataclass
class Researcher:
    """One accepted survey record; phrase lists are raw, just trimmed."""

    full_name: str
    email: str
    position: Position
    department: str
    area_code: str
    keywords: list[str]
    expertise: list[str]


class Diagnostic(NamedTuple):
    row: int
    code: str
    message: str


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: int = 0
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def render(self) -> str:
        return "\n".join(f"ROW {d.row} {d.code} {d.message}" for d in self.diagnostics)


def _split_phrases(cell: str) -> list[str]:
    return [p.strip() for p in cell.split(LIST_SEPARATOR) if p.strip()]


def parse_survey(rows: Iterable[Mapping[str, str]]) -> tuple[list[Researcher], IngestReport]:
    """Validate tabular records into Researchers, one diagnostic per problem.

    Rows are numbered from 1 over the data rows. A malformed email or an
    unknown position/area token rejects the row; a row with neither
    keywords nor expertise is accepted with a W_EMPTY warning (providing
    only one of the two is a normal, valid answer).
    """
    researchers: list[Researcher] = []
    report = IngestReport()
    for row_num, row in enumerate(rows, start=1):
        if None in row:  # csv.DictReader parks excess cells under None
            report.rejected += 1
            report.diagnostics.append(
                Diagnostic(row_num, "E_SCHEMA", "row has more cells than the header")
            )
            continue
        get = lambda key: (row.get(key) or "").strip()

        email = get("email")
        if not validate_email(email):
            report.rejected += 1
            report.diagnostics.append(Diagnostic(row_num, "E_EMAIL", f"malformed email {email!r}"))
            continue

        position = parse_position(get("position"))
        if position is None:
            report.rejected += 1
            report.diagnostics.append(
                Diagnostic(row_num, "E_ENUM", f"unknown position {get('position')!r}")
            )
            continue

        area = parse_area(get("area_code"))
        if area is None:
            report.rejected += 1
            report.diagnostics.append(
                Diagnostic(row_num, "E_ENUM", f"unknown research area {get('area_code')!r}")
            )
            continue

        keywords = _split_phrases(get("keywords"))
        expertise = _split_phrases(get("expertise"))
        if not keywords and not expertise:
            report.diagnostics.append(
                Diagnostic(row_num, "W_EMPTY", "record provides neither keywords nor expertise")
            )

        researchers.append(
            Researcher(
                full_name=get("full_name"),
                email=email,
                position=position,
                department=get("department"),
                area_code=area,
                keywords=keywords,
                expertise=expertise,
            )
        )
        report.accepted += 1
    return researchers, report


def read_survey_csv(path: str | Path) -> tuple[list[Researcher], IngestReport]:
    """Parse a survey CSV file; raises SurveyFormatError on a bad header."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except UnicodeDecodeError as exc:
        raise SurveyFormatError(f"{path} is not valid UTF-8: {exc}") from exc
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != COLUMNS:
        raise SurveyFormatError(
            f"{path} header must be exactly: {','.join(COLUMNS)}"
        )
    return parse_survey(reader)


def researchers_to_rows(researchers: Iterable[Researcher]) -> list[dict[str, str]]:
    """Serialize Researchers back to the CSV row schema (round-trippable)."""
    return [
        {
            "full_name": r.full_name,
            "email": r.email,
            "position": r.position.value,
            "department": r.department,
            "area_code": r.area_code,
            "keywords": f"{LIST_SEPARATOR} ".join(r.keywords),
            "expertise": f"{LIST_SEPARATOR} ".join(r.expertise),
        }
        for r in researchers
    ]


def write_survey_csv(researchers: Iterable[Researcher], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=COLUMNS)
        writer.writeheader()
        writer.writerows(researchers_to_rows(researchers))


class PopulationProfile(NamedTuple):
    by_position: stats.FrequencyTable
    by_area: stats.FrequencyTable


def population_profile(researchers: Iterable[Researcher]) -> PopulationProfile:
    """Frequency tables of the population per position and per research area.

    All categories appear, including empty ones, so profiles over
    different samples stay comparable.
    """
    position_counts = {member.value: 0 for member in Position}
    area_counts = {f"{code}: {name}": 0 for code, name in AREA_NAMES.items()}
    for r in researchers:
        position_counts[r.position.value] += 1
        area_counts[f"{r.area_code}: {AREA_NAMES[r.area_code]}"] += 1
    return PopulationProfile(
        by_position=stats.frequency_table(position_counts),
        by_area=stats.frequency_table(area_counts),
    )
