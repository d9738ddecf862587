"""FastAPI service over a built knowledge bank.

Read-only by design: the bank is loaded once and shared across requests
(lookups and searches never mutate it). The emitted static site can be
mounted at the root so one process serves both the browsable pages and
the JSON API the web UI talks to.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.staticfiles import StaticFiles

from .. import __version__, query as query_mod
from ..bank import KnowledgeBank
from ..emit import BANK_FORMAT, emit_bank_file, load_bank_file
from ..ingest import COLUMNS, parse_survey
from ..normalize import Facet
from . import schemas


def _load(bank_path: str | Path) -> KnowledgeBank:
    return load_bank_file(Path(bank_path).read_text(encoding="utf-8"))


def _card_model(bank: KnowledgeBank, rid: str) -> schemas.ResearcherCardModel:
    card = bank.researchers[rid]
    return schemas.ResearcherCardModel(
        researcher_id=rid,
        full_name=card.full_name,
        email_obfuscated=card.email_obfuscated,
        keywords=list(card.keywords_display),
        expertise=list(card.expertise_display),
    )


def create_app(
    bank: KnowledgeBank | None = None,
    bank_path: str | Path | None = None,
    site_dir: str | Path | None = None,
) -> FastAPI:
    if bank is None:
        if bank_path is None:
            raise ValueError("create_app needs a bank or a bank_path")
        bank = _load(bank_path)

    app = FastAPI(title="scibank", version=__version__)
    app.state.bank = bank

    @app.get("/api/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(
            status="ok",
            version=__version__,
            bank_format=BANK_FORMAT,
            researchers=bank.researcher_count,
            keyword_terms=len(bank.keyword_index),
            expertise_terms=len(bank.expertise_index),
        )

    @app.get("/api/bank")
    def bank_document() -> Response:
        return Response(content=emit_bank_file(bank), media_type="application/json")

    @app.get("/api/terms", response_model=schemas.TermListResponse)
    def terms(
        facet: schemas.FacetName | None = None,
        prefix: str = "",
        limit: int = Query(default=100, ge=0, le=10000),
    ) -> schemas.TermListResponse:
        facets = [Facet(facet)] if facet else list(Facet)
        found = []
        for f in facets:
            for norm, posting in bank.index_for(f).items():
                if norm.startswith(prefix):
                    found.append((norm, f, posting))
        found.sort(key=lambda e: (e[0], e[1].value))
        models = [
            schemas.TermModel(
                norm=norm,
                display=posting.term.display,
                facet=f.value,
                origin=posting.term.origin.value,
                researchers=len(posting.researcher_ids),
            )
            for norm, f, posting in found[:limit]
        ]
        return schemas.TermListResponse(terms=models, total=len(found))

    @app.get("/api/terms/{facet}/{norm}", response_model=schemas.LookupResponse)
    def term_lookup(facet: schemas.FacetName, norm: str) -> schemas.LookupResponse:
        f = Facet(facet)
        posting = bank.index_for(f).get(norm)
        if posting is None:
            raise HTTPException(status_code=404, detail=f"unknown {facet} term {norm!r}")
        return schemas.LookupResponse(
            norm=norm,
            facet=facet,
            researchers=[_card_model(bank, rid) for rid in posting.researcher_ids],
        )

    @app.post("/api/search", response_model=schemas.SearchResponse)
    def search(request: schemas.SearchRequest) -> schemas.SearchResponse:
        facet = Facet(request.facet) if request.facet else None
        results = query_mod.search(bank, request.query, facet_filter=facet, limit=request.limit)
        models = []
        for result in results:
            card = _card_model(bank, result.researcher_id)
            models.append(
                schemas.SearchResultModel(
                    researcher_id=result.researcher_id,
                    score=result.score,
                    full_name=card.full_name,
                    email_obfuscated=card.email_obfuscated,
                    matched_terms=[
                        schemas.MatchedTermModel(norm=m.norm, facet=m.facet.value, kind=m.kind)
                        for m in result.matched_terms
                    ],
                    keywords=card.keywords,
                    expertise=card.expertise,
                )
            )
        return schemas.SearchResponse(query=request.query, results=models)

    @app.post("/api/validate", response_model=schemas.ValidateResponse)
    def validate(request: schemas.ValidateRequest) -> schemas.ValidateResponse:
        reader = csv.DictReader(io.StringIO(request.csv_text))
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != COLUMNS:
            raise HTTPException(
                status_code=422,
                detail=f"header must be exactly: {','.join(COLUMNS)}",
            )
        _, report = parse_survey(reader)
        return schemas.ValidateResponse(
            accepted=report.accepted,
            rejected=report.rejected,
            diagnostics=[
                schemas.DiagnosticModel(row=d.row, code=d.code, message=d.message)
                for d in report.diagnostics
            ],
        )

    if site_dir is not None:
        app.mount("/", StaticFiles(directory=str(site_dir), html=True), name="site")

    return app
