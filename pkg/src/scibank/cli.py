"""Command-line entry point.

Subcommands are thin wrappers over the core modules. File-producing
commands only ever write inside the configured output directory. Exit
statuses: 0 success, 1 I/O or configuration error, 2 completed with
diagnostics (bad rows reported, run finished).
"""

from __future__ import annotations

import csv
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import __version__, coword, emit, ingest, query as query_mod, stats
from .bank import build_bank
from .errors import ScibankError
from .normalize import Facet, Origin, StopList, clean_corpus

EXIT_OK = 0
EXIT_IO = 1
EXIT_DIAGNOSTICS = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_IO)


def _load_stoplist(path: str | None, min_length: int) -> StopList:
    try:
        if path:
            return StopList.from_file(path, min_length=min_length)
        return StopList.default(min_length=min_length)
    except OSError as exc:
        _fail(f"cannot read stoplist: {exc}")


def _read_survey(path: str) -> tuple[list[ingest.Researcher], ingest.IngestReport]:
    try:
        return ingest.read_survey_csv(path)
    except (OSError, ScibankError) as exc:
        _fail(str(exc))


@click.group()
@click.version_option(version=__version__, prog_name="scibank")
def main() -> None:
    """Build and query a research-expertise knowledge bank."""


@main.command()
@click.option("--input", "input_path", required=True, help="Survey CSV to check.")
def validate(input_path: str) -> None:
    """Validate a survey export, printing one line per diagnostic."""
    _, report = _read_survey(input_path)
    if report.diagnostics:
        click.echo(report.render())
    click.echo(f"accepted {report.accepted} rejected {report.rejected}")
    sys.exit(EXIT_DIAGNOSTICS if report.diagnostics else EXIT_OK)


@main.command()
@click.option("--input", "input_path", required=True, help="Survey CSV to build from.")
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--stoplist", envvar="SCIBANK_STOPLIST", default=None,
              help="Stoplist file (falls back to SCIBANK_STOPLIST, then the shipped list).")
@click.option("--min-length", default=2, show_default=True,
              help="Minimum permuted-word length.")
def build(input_path: str, out_dir: str, stoplist: str | None, min_length: int) -> None:
    """Build the static site, the bank file, and the manifest."""
    researchers, report = _read_survey(input_path)
    stop = _load_stoplist(stoplist, min_length)
    corpus = clean_corpus(researchers, stop)
    bank = build_bank(researchers, corpus)

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        manifest = emit.emit_site(bank, out / "site")
        bank_text = emit.emit_bank_file(bank)
        (out / "bank.json").write_text(bank_text, encoding="utf-8")
        entries = [
            emit.ManifestEntry(f"site/{e.path}", e.size, e.digest) for e in manifest.files
        ]
        entries.append(emit.manifest_entry("bank.json", bank_text.encode("utf-8")))
        (out / "manifest.txt").write_text(
            emit.SiteManifest(files=entries).render(), encoding="utf-8"
        )
        # Build timestamp lives in a sidecar so manifest digests stay stable.
        (out / "bank.stamp").write_text(
            datetime.now(timezone.utc).isoformat() + "\n", encoding="utf-8"
        )
    except (OSError, ScibankError) as exc:
        _fail(str(exc))

    if report.diagnostics:
        click.echo(report.render(), err=True)
    click.echo(f"researchers: {report.accepted}")
    for facet in Facet:
        fs = corpus.stats[facet]
        click.echo(
            f"{facet.value}s: raw {fs.raw_phrases}"
            f" unique {fs.unique_phrases} words {fs.unique_words}"
        )
    click.echo(f"site: {len(manifest.files)} pages under {out / 'site'}")
    sys.exit(EXIT_DIAGNOSTICS if report.diagnostics else EXIT_OK)


def _stats_from_survey(input_path: str, out_dir: str | None) -> int:
    researchers, report = _read_survey(input_path)
    profile = ingest.population_profile(researchers)
    click.echo(stats.render_frequency_table(profile.by_position, "Position",
                                            "Respondents by position"))
    click.echo("")
    click.echo(stats.render_frequency_table(profile.by_area, "Research area",
                                            "Respondents by research area"))

    corpus = clean_corpus(researchers)
    for facet in Facet:
        counts = [
            len(ingest_phrases)
            for r in researchers
            if (ingest_phrases := (r.keywords if facet is Facet.KEYWORD else r.expertise))
        ]
        click.echo("")
        if counts:
            summary = stats.distribution_summary(counts)
            skew = "undefined" if summary.sample_skewness is None else f"{summary.sample_skewness:.3f}"
            click.echo(
                f"{facet.value}s per respondent: min {summary.min} max {summary.max}"
                f" mean {summary.mean:.2f} skewness {skew}"
            )
        repeats = stats.repeat_stats(corpus.multiplicity[facet])
        click.echo(
            f"{facet.value} terms: {repeats.unique} unique,"
            f" {repeats.repeated} repeated ({repeats.repeated_percent}%)"
        )

    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "by_position.csv").write_text(
            stats.frequency_table_csv(profile.by_position, "position"), encoding="utf-8"
        )
        (out / "by_area.csv").write_text(
            stats.frequency_table_csv(profile.by_area, "area"), encoding="utf-8"
        )
    return EXIT_DIAGNOSTICS if report.diagnostics else EXIT_OK


def _stats_from_table(input_path: str) -> int:
    """Recompute a published counts table: label,count[,percent]."""
    path = Path(input_path)
    try:
        rows = list(csv.DictReader(path.read_text(encoding="utf-8-sig").splitlines()))
    except OSError as exc:
        _fail(str(exc))
    if not rows or "label" not in rows[0] or "count" not in rows[0]:
        _fail(f"{path} must have a header with label,count[,percent] columns")

    counts = {row["label"]: int(row["count"]) for row in rows}
    table = stats.frequency_table(counts)
    click.echo(stats.render_frequency_table(table, "Label"))

    if "percent" in rows[0] and any((row.get("percent") or "").strip() for row in rows):
        published = [
            (row["label"], int(row["count"]), float(row["percent"]))
            for row in rows
            if (row.get("percent") or "").strip()
        ]
        findings = stats.audit_table(published, table=path.stem)
        for finding in findings:
            click.echo(finding.render())
        if not findings:
            click.echo(f"audit: all {len(published)} published percents reproduce")
    return EXIT_OK


@main.command(name="stats")
@click.option("--input", "input_path", required=True,
              help="Survey CSV, or a label,count[,percent] table with --table.")
@click.option("--table", "is_table", is_flag=True,
              help="Treat the input as a published counts table and audit it.")
@click.option("--out", "out_dir", default=None, help="Directory for CSV reports.")
def stats_command(input_path: str, is_table: bool, out_dir: str | None) -> None:
    """Descriptive statistics, or a rounding audit of a published table."""
    if is_table:
        sys.exit(_stats_from_table(input_path))
    sys.exit(_stats_from_survey(input_path, out_dir))


@main.command()
@click.option("--input", "input_path", required=True, help="Survey CSV.")
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--facet", type=click.Choice([f.value for f in Facet]), default="keyword",
              show_default=True)
@click.option("--level", type=click.Choice([o.value for o in Origin]), default="phrase",
              show_default=True)
@click.option("--seed", default=coword.DEFAULT_SEED, show_default=True)
@click.option("--iterations", default=coword.DEFAULT_ITERATIONS, show_default=True)
@click.option("--stoplist", envvar="SCIBANK_STOPLIST", default=None)
@click.option("--min-length", default=2, show_default=True)
def graph(
    input_path: str,
    out_dir: str,
    facet: str,
    level: str,
    seed: int,
    iterations: int,
    stoplist: str | None,
    min_length: int,
) -> None:
    """Export the co-word graph with a force-directed layout."""
    researchers, report = _read_survey(input_path)
    stop = _load_stoplist(stoplist, min_length)
    g = coword.cooccurrence_graph(researchers, Facet(facet), Origin(level), stop)
    layout = coword.layout_fr(g, iterations=iterations, seed=seed)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "graph.tsv").write_text(coword.export_graph(g, layout), encoding="utf-8")
        nodes_csv, edges_csv = coword.graph_csv(g, layout)
        (out / "nodes.csv").write_text(nodes_csv, encoding="utf-8")
        (out / "edges.csv").write_text(edges_csv, encoding="utf-8")
    except OSError as exc:
        _fail(str(exc))
    click.echo(
        f"{facet} {level} graph: {len(g.nodes)} nodes, {len(g.edges)} edges,"
        f" isolation ratio {coword.isolation_ratio(g):.3f}"
    )
    sys.exit(EXIT_DIAGNOSTICS if report.diagnostics else EXIT_OK)


def _render_results(results: list[dict]) -> None:
    for rank, row in enumerate(results, start=1):
        matched = ", ".join(
            f"{m['norm']}({m['facet']}/{m['kind']})" for m in row["matched_terms"]
        )
        click.echo(
            f"{rank}. {row['score']:.4f} {row['full_name']}"
            f" <{row['email_obfuscated']}> [{matched}]"
        )


@main.command(name="query")
@click.argument("text")
@click.option("--input", "bank_path", default=None, help="Bank file from `build`.")
@click.option("--server", default=None, help="Query a running scibank service instead.")
@click.option("--facet", type=click.Choice([f.value for f in Facet]), default=None)
@click.option("--limit", default=10, show_default=True)
@click.option("--synonyms", default=None, help="Synonym table file.")
def query_command(
    text: str,
    bank_path: str | None,
    server: str | None,
    facet: str | None,
    limit: int,
    synonyms: str | None,
) -> None:
    """Rank researchers against free-text TEXT."""
    if server:
        import httpx

        try:
            response = httpx.post(
                server.rstrip("/") + "/api/search",
                json={"query": text, "facet": facet, "limit": limit},
                timeout=30.0,
            )
            response.raise_for_status()
        except httpx.HTTPError as exc:
            _fail(f"server query failed: {exc}")
        _render_results(response.json()["results"])
        return

    if not bank_path:
        _fail("either --input BANK or --server URL is required")
    try:
        bank = emit.load_bank_file(Path(bank_path).read_text(encoding="utf-8"))
        table = query_mod.load_synonyms(synonyms) if synonyms else None
    except (OSError, ScibankError) as exc:
        _fail(str(exc))
    results = query_mod.search(
        bank, text, facet_filter=Facet(facet) if facet else None,
        limit=limit, synonyms=table,
    )
    _render_results(
        [
            {
                "score": r.score,
                "full_name": bank.researchers[r.researcher_id].full_name,
                "email_obfuscated": bank.researchers[r.researcher_id].email_obfuscated,
                "matched_terms": [
                    {"norm": m.norm, "facet": m.facet.value, "kind": m.kind}
                    for m in r.matched_terms
                ],
            }
            for r in results
        ]
    )


@main.command()
@click.option("--input", "bank_path", required=True, help="Bank file from `build`.")
@click.option("--site", "site_dir", default=None, help="Emitted site directory to serve at /.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(bank_path: str, site_dir: str | None, host: str, port: int) -> None:
    """Serve the JSON API (and optionally the static site) over HTTP."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(bank_path=bank_path, site_dir=site_dir)
    except (OSError, ScibankError) as exc:
        _fail(str(exc))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
