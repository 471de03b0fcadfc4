import pytest

from bibx import ingest
from bibx.errors import ParseError, UsageError


class TestBibtexParser:
    def test_basic_entry(self):
        records = ingest.parse_bibtex(
            "@ARTICLE{key1,\n  title = {A Title},\n  year = {2020}\n}", "scopus"
        )
        assert len(records) == 1
        r = records[0]
        assert r.first("ENTRYTYPE") == "ARTICLE"
        assert r.first("KEY") == "key1"
        assert r.first("TITLE") == "A Title"
        assert r.first("YEAR") == "2020"

    def test_nested_braces_survive(self):
        records = ingest.parse_bibtex(
            "@article{k, title = {Evaluating {TF-IDF} {and {deeper}} nesting}}",
            "scopus",
        )
        assert records[0].first("TITLE") == "Evaluating {TF-IDF} {and {deeper}} nesting"

    def test_quoted_values(self):
        records = ingest.parse_bibtex(
            '@article{k, title = "Quoted {braced} title", year = 2019}', "wos"
        )
        assert records[0].first("TITLE") == "Quoted {braced} title"
        assert records[0].first("YEAR") == "2019"

    def test_bare_values(self):
        records = ingest.parse_bibtex("@article{k, year = 2021,\n}", "scopus")
        assert records[0].first("YEAR") == "2021"

    def test_comment_lines_skipped(self):
        text = "% @article{ghost, title={Nope}}\n@article{k, title={Real}}"
        records = ingest.parse_bibtex(text, "scopus")
        assert len(records) == 1
        assert records[0].first("TITLE") == "Real"

    def test_special_entry_types_skipped(self):
        text = (
            "@comment{anything here}\n"
            "@string{x = {y}}\n"
            "@preamble{z}\n"
            "@article{k, title={Kept}}"
        )
        records = ingest.parse_bibtex(text, "scopus")
        assert [r.first("TITLE") for r in records] == ["Kept"]

    def test_stray_at_in_prose(self):
        text = "Contact us @ example.\n@article{k, title={Kept}}"
        records = ingest.parse_bibtex(text, "scopus")
        assert len(records) == 1

    def test_unbalanced_braces_positioned_error(self):
        with pytest.raises(ParseError) as exc:
            ingest.parse_bibtex("@article{k, title = {Broken", "scopus")
        assert exc.value.offset is not None

    def test_repeated_tags_accumulate(self):
        records = ingest.parse_bibtex(
            "@article{k, note={one}, note={two}, title={T}}", "scopus"
        )
        assert records[0].all("NOTE") == ["one", "two"]

    def test_dialect_validation(self):
        with pytest.raises(UsageError):
            ingest.parse_bibtex("@article{k, title={T}}", "pubmed")

    def test_round_trip(self):
        original = "@ARTICLE{k1,\n  title = {Some {Nested} Title},\n  year = {2020},\n}"
        records = ingest.parse_bibtex(original, "scopus")
        emitted = ingest.emit_bibtex(records[0])
        reparsed = ingest.parse_bibtex(emitted, "scopus")
        assert reparsed[0].fields == records[0].fields


class TestPubmedParser:
    def test_basic_record(self):
        text = "PMID- 123\nTI  - A Title\nAB  - An abstract.\n"
        records = ingest.parse_pubmed(text)
        assert len(records) == 1
        assert records[0].first("TI") == "A Title"

    def test_continuation_lines(self):
        text = "TI  - A Title That\n      Continues Here\n"
        records = ingest.parse_pubmed(text)
        assert records[0].first("TI") == "A Title That Continues Here"

    def test_blank_line_separates_records(self):
        text = "TI  - One\n\nTI  - Two\n"
        records = ingest.parse_pubmed(text)
        assert [r.first("TI") for r in records] == ["One", "Two"]

    def test_repeated_tags(self):
        text = "FAU - Doe, Jane\nFAU - Smith, John\n"
        records = ingest.parse_pubmed(text)
        assert records[0].all("FAU") == ["Doe, Jane", "Smith, John"]

    def test_unrecognized_line_positioned_error(self):
        with pytest.raises(ParseError) as exc:
            ingest.parse_pubmed("TI  - ok\nthis is not a tagged line\n")
        assert exc.value.line == 2

    def test_orphan_continuation_rejected(self):
        with pytest.raises(ParseError) as exc:
            ingest.parse_pubmed("      orphan continuation\n")
        assert exc.value.line == 1

    def test_round_trip(self):
        text = "PMID- 9\nTI  - A Title\nFAU - Doe, Jane\n"
        records = ingest.parse_pubmed(text)
        emitted = ingest.emit_pubmed(records[0])
        reparsed = ingest.parse_pubmed(emitted)
        assert reparsed[0].fields == records[0].fields


class TestNormalize:
    def test_scopus_fixture_fields(self, data_dir):
        docs = ingest.parse_file(data_dir / "scopus.bib", "scopus")
        assert len(docs) == 4
        smith = docs[0]
        assert smith.title == "Deep Learning Methods for Citation Network Analysis"
        assert smith.authors == ["Smith, John A.", "Doe, Jane"]
        assert smith.year == 2020
        assert smith.times_cited == 12  # from "cited By 12"
        assert smith.doi == "10.1000/joi.2020.001"
        assert smith.doc_type == "Article"
        assert len(smith.references) == 2
        assert smith.affiliations == [
            ("University of Testing", "GB"),
            ("Example Institute", "FR"),
        ]
        assert smith.author_keywords == [
            "citation analysis",
            "deep learning",
            "graph neural networks",
        ]

    def test_scopus_braces_stripped_from_title(self, data_dir):
        docs = ingest.parse_file(data_dir / "scopus.bib", "scopus")
        garcia = docs[3]
        assert garcia.title == "Evaluating TF-IDF Representations for Document Clustering"
        assert garcia.authors[0] == "García, José"

    def test_wos_fixture_fields(self, data_dir):
        docs = ingest.parse_file(data_dir / "wos.bib", "wos")
        assert len(docs) == 3
        muller = docs[2]
        assert muller.times_cited == 7
        assert muller.keywords_plus == ["SOCIAL NETWORK ANALYSIS"]
        assert muller.references == [
            "Doe J, 2015, A Survey of Bibliometric Indicators in Research Evaluation, SCIENTOMETRICS"
        ]

    def test_pubmed_fixture_fields(self, data_dir):
        docs = ingest.parse_file(data_dir / "pubmed.txt", "pubmed")
        assert len(docs) == 2
        tanaka = docs[0]
        assert tanaka.title.startswith("Mining Clinical Trial Literature")
        assert tanaka.authors == ["Tanaka, Yuki", "Smith, John A"]
        assert tanaka.year == 2022
        assert tanaka.doi == "10.1000/jbi.2022.005"
        assert tanaka.keywords_plus == [
            "Natural Language Processing",
            "Clinical Trials as Topic",
        ]
        assert tanaka.author_keywords == ["text mining", "clinical trials"]
        # MEDLINE exports carry no reference list or citation count
        assert tanaka.references is None
        assert tanaka.times_cited is None
        assert tanaka.affiliations[0][1] == "JP"

    def test_missing_title_dropped_with_warning(self):
        warnings = []
        record = ingest.parse_bibtex("@article{k, year={2020}}", "scopus")[0]
        doc = ingest.normalize(record, warn=lambda off, msg: warnings.append(msg))
        assert doc is None
        assert warnings and "title" in warnings[0]

    def test_unparseable_year_warns_but_keeps(self):
        warnings = []
        record = ingest.parse_bibtex(
            "@article{k, title={T}, year={in press}}", "scopus"
        )[0]
        doc = ingest.normalize(record, warn=lambda off, msg: warnings.append(msg))
        assert doc is not None
        assert doc.year is None
        assert any("year" in w for w in warnings)

    def test_affiliation_institution_hint(self):
        got = ingest._parse_affiliation(
            "Department of Physics, Example University, Oxford, United Kingdom",
            ingest.DEFAULT_TABLE,
        )
        assert got == ("Example University", "GB")

    def test_affiliation_without_hint_uses_first_segment(self):
        got = ingest._parse_affiliation(
            "Acme Research Labs, Somewhere, France", ingest.DEFAULT_TABLE
        )
        assert got == ("Acme Research Labs", "FR")
