import random
import re

import pytest

from scibank.bank import build_bank
from scibank.emit import (
    emit_bank_file,
    emit_site,
    load_bank_file,
    manifest_entry,
    slugify,
)
from scibank.errors import BankFormatError, SiteWriteError
from scibank.ingest import parse_survey
from scibank.normalize import Facet, clean_corpus

from fixture_data import random_rows

HREF_RE = re.compile(r'href="([^"]+)"')


def build_from_rows(rows):
    researchers, _ = parse_survey(rows)
    return build_bank(researchers, clean_corpus(researchers))


class TestSlugify:
    def test_spaces_become_hyphens(self):
        assert slugify("corporate governance") == "corporate-governance"

    def test_hyphen_kept(self):
        assert slugify("spin-off") == "spin-off"

    def test_apostrophe_percent_encoded(self):
        assert slugify("qualità dell'aria") == "qualità-dell%27aria"


class TestEmitSite:
    def test_accounting_page_lists_all_three(self, sample_bank, tmp_path):
        emit_site(sample_bank, tmp_path)
        page = (tmp_path / "expert" / "accounting.htm").read_text(encoding="utf-8")
        assert page.count("<tr>") == 4  # header + three researchers
        for name in ("Daniela DI BERARDINO", "Stefania MIGLIORI", "Francesco DE LUCA"):
            assert name in page
        assert "s.migliori at unich.it" in page

    def test_no_raw_at_sign_anywhere(self, sample_bank, tmp_path):
        emit_site(sample_bank, tmp_path)
        for path in tmp_path.rglob("*.htm"):
            assert b"@" not in path.read_bytes(), path

    def test_at_sign_inside_phrases_is_entity_escaped(self, tmp_path):
        rows = random_rows(random.Random(2), 1)
        rows[0]["keywords"] = "social media @ work"
        bank = build_from_rows(rows)
        emit_site(bank, tmp_path)
        index = (tmp_path / "index.htm").read_bytes()
        assert b"@" not in index
        assert "social media &#64; work".encode() in index

    def test_empty_bank_emits_only_index(self, tmp_path):
        bank = build_from_rows([])
        manifest = emit_site(bank, tmp_path)
        assert [e.path for e in manifest.files] == ["index.htm"]

    def test_index_sorted_alphabetically(self, tmp_path):
        rows = random_rows(random.Random(3), 1)
        rows[0]["keywords"] = "beta; alpha"
        rows[0]["expertise"] = ""
        bank = build_from_rows(rows)
        emit_site(bank, tmp_path)
        index = (tmp_path / "index.htm").read_text(encoding="utf-8")
        assert index.find(">alpha<") < index.find(">beta<")

    def test_site_is_fully_crawlable(self, tmp_path):
        researchers, _ = parse_survey(random_rows(random.Random(67), 20))
        bank = build_bank(researchers, clean_corpus(researchers))
        manifest = emit_site(bank, tmp_path)
        emitted = {e.path for e in manifest.files}

        index_links = set(HREF_RE.findall((tmp_path / "index.htm").read_text(encoding="utf-8")))
        # every linked page exists and was emitted
        assert index_links <= emitted
        # every term page is linked from the index and links back
        term_pages = emitted - {"index.htm"}
        assert term_pages == index_links
        for page in term_pages:
            content = (tmp_path / page).read_text(encoding="utf-8")
            assert '"../index.htm"' in content

    def test_manifest_matches_bytes_on_disk(self, sample_bank, tmp_path):
        manifest = emit_site(sample_bank, tmp_path)
        for entry in manifest.files:
            content = (tmp_path / entry.path).read_bytes()
            assert manifest_entry(entry.path, content) == entry

    def test_byte_identical_across_runs(self, sample_bank, tmp_path):
        first = emit_site(sample_bank, tmp_path / "one")
        second = emit_site(sample_bank, tmp_path / "two")
        assert first == second
        assert first.render() == second.render()

    def test_colliding_slugs_get_distinct_paths(self, tmp_path):
        rows = random_rows(random.Random(4), 1)
        rows[0]["keywords"] = "a-b; a b"
        rows[0]["expertise"] = ""
        bank = build_from_rows(rows)
        manifest = emit_site(bank, tmp_path)
        paths = [e.path for e in manifest.files if e.path != "index.htm"]
        # two phrase pages plus no word pages ("a" and "b" are below min length)
        assert len(paths) == len(set(paths)) == 2

    def test_unwritable_directory_raises(self, sample_bank, tmp_path):
        blocked = tmp_path / "blocked"
        blocked.write_text("a file, not a directory", encoding="utf-8")
        with pytest.raises(SiteWriteError):
            emit_site(sample_bank, blocked / "site")


class TestBankFile:
    def test_contains_obfuscated_email(self, sample_bank):
        text = emit_bank_file(sample_bank)
        assert '"s.migliori at unich.it"' in text
        assert "bank-format" in text

    def test_empty_bank_round_trips(self):
        bank = build_from_rows([])
        text = emit_bank_file(bank)
        assert emit_bank_file(load_bank_file(text)) == text

    def test_load_then_emit_is_identity(self, sample_bank):
        text = emit_bank_file(sample_bank)
        assert emit_bank_file(load_bank_file(text)) == text

    def test_loaded_bank_serves_lookups(self, sample_bank):
        from scibank.bank import lookup

        loaded = load_bank_file(emit_bank_file(sample_bank))
        cards = lookup(loaded, "accounting", Facet.EXPERTISE)
        assert [c.full_name for c in cards] == [
            "Francesco DE LUCA",
            "Daniela DI BERARDINO",
            "Stefania MIGLIORI",
        ]
        assert loaded.stoplist == sample_bank.stoplist

    def test_site_from_loaded_bank_is_identical(self, sample_bank, tmp_path):
        loaded = load_bank_file(emit_bank_file(sample_bank))
        a = emit_site(sample_bank, tmp_path / "a")
        b = emit_site(loaded, tmp_path / "b")
        assert a == b

    def test_wrong_version_rejected(self, sample_bank):
        text = emit_bank_file(sample_bank).replace('"bank-format": 1', '"bank-format": 99')
        with pytest.raises(BankFormatError):
            load_bank_file(text)

    def test_garbage_rejected(self):
        with pytest.raises(BankFormatError):
            load_bank_file("not json at all {")
