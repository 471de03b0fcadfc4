import pathlib

import pytest

from bibx.corpus import Document, assign_ids

DATA = pathlib.Path(__file__).parent / "data"


def make_doc(
    title="Untitled",
    authors=("Doe, Jane",),
    year=2020,
    source="Test Journal",
    times_cited=0,
    abstract="",
    references=None,
    doi=None,
    affiliations=(),
    author_keywords=(),
    keywords_plus=(),
    doc_type="Article",
    language="English",
    origin="scopus",
):
    return Document(
        title=title,
        authors=list(authors),
        year=year,
        source=source,
        times_cited=times_cited,
        abstract=abstract,
        references=list(references) if references is not None else [],
        doi=doi,
        affiliations=[tuple(a) for a in affiliations],
        author_keywords=list(author_keywords),
        keywords_plus=list(keywords_plus),
        doc_type=doc_type,
        language=language,
        origin=origin,
    )


def build_corpus(docs):
    return assign_ids([d.copy() for d in docs])


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def fixture_corpus():
    """Merged fixture corpus from the three raw export files."""
    from bibx import fuse, ingest

    datasets = [
        (ingest.parse_file(DATA / "scopus.bib", "scopus"), "scopus"),
        (ingest.parse_file(DATA / "wos.bib", "wos"), "wos"),
        (ingest.parse_file(DATA / "pubmed.txt", "pubmed"), "pubmed"),
    ]
    corpus = fuse.merge(fuse.MergePlan(datasets=datasets))
    fuse.match_references(corpus)
    return corpus
