"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

FacetName = Literal["keyword", "expertise"]


class HealthResponse(BaseModel):
    status: str
    version: str
    bank_format: int
    researchers: int
    keyword_terms: int
    expertise_terms: int


class ResearcherCardModel(BaseModel):
    researcher_id: str
    full_name: str
    email_obfuscated: str
    keywords: list[str]
    expertise: list[str]


class TermModel(BaseModel):
    norm: str
    display: str
    facet: FacetName
    origin: Literal["phrase", "word"]
    researchers: int


class TermListResponse(BaseModel):
    terms: list[TermModel]
    total: int


class LookupResponse(BaseModel):
    norm: str
    facet: FacetName
    researchers: list[ResearcherCardModel]


class SearchRequest(BaseModel):
    query: str
    facet: Optional[FacetName] = None
    limit: int = Field(default=10, ge=0, le=1000)


class MatchedTermModel(BaseModel):
    norm: str
    facet: FacetName
    kind: Literal["phrase", "word", "synonym"]


class SearchResultModel(BaseModel):
    researcher_id: str
    score: float
    full_name: str
    email_obfuscated: str
    matched_terms: list[MatchedTermModel]
    keywords: list[str]
    expertise: list[str]


class SearchResponse(BaseModel):
    query: str
    results: list[SearchResultModel]


class ValidateRequest(BaseModel):
    csv_text: str


class DiagnosticModel(BaseModel):
    row: int
    code: str
    message: str


class ValidateResponse(BaseModel):
    accepted: int
    rejected: int
    diagnostics: list[DiagnosticModel]
