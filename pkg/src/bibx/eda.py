"""Descriptive statistics: the summary report, bar/evolution/productivity
series, Sankey flows, treemap data, and the Lotka productivity fit.

All averages are total/total ratios rounded half-up to two decimals; a
missing year or citation count is excluded, never treated as zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .corpus import Corpus
from .errors import AnalysisUnavailableError, UsageError

# the seven flow element kinds (plus per-year variants used by evolution)
ELEMENT_KINDS = (
    "authors",
    "countries",
    "institutions",
    "sources",
    "author_keywords",
    "keywords_plus",
    "languages",
)

BAR_KINDS = (
    "documents_per_year",
    "citations_per_year",
    "past_citations_per_year",
    "lotka_law",
    "sources_per_document",
    "sources_per_citation",
    "authors_per_document",
    "authors_per_citation",
    "authors_per_h_index",
    "bradford_law",
    "institutions_per_documents",
    "institutions_per_citations",
    "countries_per_documents",
    "countries_per_citations",
    "language_per_documents",
    "keywords_plus_per_documents",
    "authors_keywords_per_documents",
)

_KIND_TO_FIELD = {
    "sources_per_document": ("sources", "docs"),
    "sources_per_citation": ("sources", "citations"),
    "authors_per_document": ("authors", "docs"),
    "authors_per_citation": ("authors", "citations"),
    "institutions_per_documents": ("institutions", "docs"),
    "institutions_per_citations": ("institutions", "citations"),
    "countries_per_documents": ("countries", "docs"),
    "countries_per_citations": ("countries", "citations"),
    "language_per_documents": ("languages", "docs"),
    "keywords_plus_per_documents": ("keywords_plus", "docs"),
    "authors_keywords_per_documents": ("author_keywords", "docs"),
}


def round2(value: float):
    """Half-up rounding to 2 decimals (report display convention)."""
    return float(Decimal(repr(value)).quantize(Decimal("0.01"), ROUND_HALF_UP))


def average(numerator: float, denominator: float):
    if denominator == 0:
        return None
    return round2(numerator / denominator)


def entity_values(doc, kind: str) -> list[str]:
    """Entity strings of one flow kind occurring in a document."""
    if kind == "authors":
        return list(doc.authors)
    if kind == "countries":
        return doc.countries()
    if kind == "institutions":
        return doc.institutions()
    if kind == "sources":
        return [doc.source] if doc.source else []
    if kind == "author_keywords":
        return list(doc.author_keywords)
    if kind == "keywords_plus":
        return list(doc.keywords_plus)
    if kind == "languages":
        return [doc.language.lower()] if doc.language else []
    raise UsageError(f"unknown element kind: {kind}")


@dataclass
class EdaReport:
    timespan: tuple[int, int] | None
    n_countries: int
    n_institutions: int
    n_sources: int
    n_references: int
    languages: dict[str, int]
    n_documents: int
    doc_types: dict[str, int]
    n_authors: int
    n_author_keywords: int
    n_keywords_plus: int
    n_citations: int
    docs_per_author: float | None
    docs_per_institution: float | None
    docs_per_source: float | None
    docs_per_year: float | None
    citations_per_author: float | None
    citations_per_institution: float | None
    citations_per_document: float | None
    citations_per_source: float | None
    collaboration_index: float | None
    single_authored: int
    multi_authored: int
    max_h_index: int

    def rows(self) -> list[tuple[str, str]]:
        """Label/value pairs in report row order."""

        def fmt(x):
            if x is None:
                return "—"
            text = f"{x:.2f}"
            if text.endswith("0"):
                text = text[:-1]  # display drops one trailing zero
            return text

        span = f"{self.timespan[0]}-{self.timespan[1]}" if self.timespan else "—"
        out = [
            ("Timespan", span),
            ("Total Number of Countries", str(self.n_countries)),
            ("Total Number of Institutions", str(self.n_institutions)),
            ("Total Number of Sources", str(self.n_sources)),
            ("Total Number of References", str(self.n_references)),
            ("Total Number of Languages", str(len(self.languages))),
        ]
        for lang, count in sorted(self.languages.items()):
            out.append((f"--{lang or 'unknown'} (# of docs)", str(count)))
        out.append(("Total Number of Documents", str(self.n_documents)))
        for doc_type, count in sorted(self.doc_types.items()):
            out.append((f"--{doc_type or 'unknown'}", str(count)))
        out += [
            ("Average Documents per Author", fmt(self.docs_per_author)),
            ("Average Documents per Institution", fmt(self.docs_per_institution)),
            ("Average Documents per Source", fmt(self.docs_per_source)),
            ("Average Documents per Year", fmt(self.docs_per_year)),
            ("Total Number of Authors", str(self.n_authors)),
            ("Total Number of Authors' Keywords", str(self.n_author_keywords)),
            ("Total Number of Authors' Keywords Plus", str(self.n_keywords_plus)),
            ("Total Single-Authored Documents", str(self.single_authored)),
            ("Total Multi-Authored Documents", str(self.multi_authored)),
            ("Average Collaboration Index", fmt(self.collaboration_index)),
            ("Max h-Index", str(self.max_h_index)),
            ("Total Number of Citations", str(self.n_citations)),
            ("Average Citations per Author", fmt(self.citations_per_author)),
            ("Average Citations per Institution", fmt(self.citations_per_institution)),
            ("Average Citations per Document", fmt(self.citations_per_document)),
            ("Average Citations per Source", fmt(self.citations_per_source)),
        ]
        return out

    def to_text(self) -> str:
        rows = self.rows()
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


@dataclass
class Series:
    label: str
    kind: str
    points: list[tuple[object, float]] = field(default_factory=list)


@dataclass
class LotkaFit:
    observed: list[tuple[int, int]]
    c: float | None
    beta: float | None
    expected: list[tuple[int, float]] = field(default_factory=list)


@dataclass
class Flow:
    left: tuple[str, str]
    right: tuple[str, str]
    weight: int


@dataclass
class ProductivityMatrix:
    authors: list[str]
    years: list[int]
    cells: dict[tuple[str, int], list[int]]  # (author, year) -> doc ids

    def row_total(self, author: str) -> int:
        return sum(
            len(ids) for (a, _y), ids in self.cells.items() if a == author
        )


def h_index(citation_counts: list[int]) -> int:
    """Largest h with at least h entries >= h."""
    ranked = sorted(citation_counts, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def collaboration_index_from_counts(
    n_authors: int, single_authored: int, multi_authored: int
) -> float | None:
    """(distinct authors - single-authored docs) / multi-authored docs."""
    if multi_authored == 0:
        return None
    return round2((n_authors - single_authored) / multi_authored)


def collaboration_index(corpus: Corpus) -> float | None:
    single = sum(1 for d in corpus.documents if len(d.authors) == 1)
    multi = sum(1 for d in corpus.documents if len(d.authors) > 1)
    return collaboration_index_from_counts(
        len(corpus.registry("author")), single, multi
    )


def author_citation_profiles(corpus: Corpus) -> dict[str, list[int]]:
    """Per-author list of citation counts of their in-corpus documents."""
    profiles: dict[str, list[int]] = {a: [] for a in corpus.registry("author").entries}
    for doc in corpus.documents:
        cited = doc.times_cited if doc.times_cited is not None else 0
        for author in doc.authors:
            profiles[author].append(cited)
    return profiles


def max_h_index(corpus: Corpus) -> int:
    profiles = author_citation_profiles(corpus)
    return max((h_index(c) for c in profiles.values()), default=0)


def build_report(corpus: Corpus) -> EdaReport:
    if not corpus.documents:
        raise UsageError("cannot report on an empty corpus")
    docs = corpus.documents
    years = [d.year for d in docs if d.year is not None]
    citations = sum(d.times_cited or 0 for d in docs)
    n_docs = len(docs)
    n_sources = len(corpus.registry("source"))
    n_authors = len(corpus.registry("author"))
    n_institutions = len(corpus.registry("institution"))
    languages: dict[str, int] = {}
    doc_types: dict[str, int] = {}
    authorship_links = 0
    institution_links = 0
    for d in docs:
        languages[d.language] = languages.get(d.language, 0) + 1
        doc_types[d.doc_type] = doc_types.get(d.doc_type, 0) + 1
        authorship_links += len(d.authors)
        institution_links += len(d.institutions())
    single = sum(1 for d in docs if len(d.authors) == 1)
    multi = sum(1 for d in docs if len(d.authors) > 1)
    n_references = len(corpus.registry("reference")) + sum(
        1 for link in corpus.citation_links if isinstance(link[1], int)
    )
    if not n_references:
        n_references = sum(len(d.references or []) for d in docs)
    return EdaReport(
        timespan=(min(years), max(years)) if years else None,
        n_countries=len(corpus.registry("country")),
        n_institutions=n_institutions,
        n_sources=n_sources,
        n_references=n_references,
        languages=languages,
        n_documents=n_docs,
        doc_types=doc_types,
        n_authors=n_authors,
        n_author_keywords=len(corpus.registry("author_keyword")),
        n_keywords_plus=len(corpus.registry("keyword_plus")),
        n_citations=citations,
        docs_per_author=average(authorship_links, n_authors),
        docs_per_institution=average(institution_links, n_institutions),
        docs_per_source=average(n_docs, n_sources),
        docs_per_year=average(n_docs, len(set(years))),
        citations_per_author=average(citations, n_authors),
        citations_per_institution=average(citations, n_institutions),
        citations_per_document=average(citations, n_docs),
        citations_per_source=average(citations, n_sources),
        collaboration_index=collaboration_index_from_counts(n_authors, single, multi),
        single_authored=single,
        multi_authored=multi,
        max_h_index=max_h_index(corpus),
    )


def _year_series(corpus: Corpus, value_of) -> list[tuple[int, float]]:
    """Per-year aggregation over min..max with zero fill."""
    per_year: dict[int, float] = {}
    for doc in corpus.documents:
        if doc.year is None:
            continue
        per_year[doc.year] = per_year.get(doc.year, 0) + value_of(doc)
    if not per_year:
        return []
    lo, hi = min(per_year), max(per_year)
    return [(y, per_year.get(y, 0)) for y in range(lo, hi + 1)]


def _entity_totals(corpus: Corpus, kind: str, metric: str) -> dict[str, float]:
    totals: dict[str, float] = {}
    for doc in corpus.documents:
        weight = 1 if metric == "docs" else (doc.times_cited or 0)
        for entity in entity_values(doc, kind):
            totals[entity] = totals.get(entity, 0) + weight
    return totals


def _ranked(totals: dict[str, float], top_n: int) -> list[tuple[str, float]]:
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n] if top_n is not None else ranked


def bar_series(corpus: Corpus, kind: str, top_n: int = 15) -> Series:
    """One of the 17 bar-plot aggregations."""
    if kind not in BAR_KINDS:
        raise UsageError(f"unknown bar kind: {kind}")
    if kind == "documents_per_year":
        return Series(kind, kind, _year_series(corpus, lambda d: 1))
    if kind == "past_citations_per_year":
        # citations attributed to each document's publication year
        return Series(kind, kind, _year_series(corpus, lambda d: d.times_cited or 0))
    if kind == "citations_per_year":
        docs = _year_series(corpus, lambda d: 1)
        cites = dict(_year_series(corpus, lambda d: d.times_cited or 0))
        points = [
            (y, round2(cites.get(y, 0) / n) if n else 0.0) for y, n in docs
        ]
        return Series(kind, kind, points)
    if kind == "lotka_law":
        fit = lotka_fit(corpus)
        return Series(kind, kind, [(n, c) for n, c in fit.observed])
    if kind == "bradford_law":
        from .fuse import bradford_zones

        zoning = bradford_zones(corpus)
        return Series(kind, kind, list(zoning.ranked_sources)[:top_n])
    if kind == "authors_per_h_index":
        profiles = author_citation_profiles(corpus)
        totals = {a: float(h_index(c)) for a, c in profiles.items()}
        return Series(kind, kind, _ranked(totals, top_n))
    entity_kind, metric = _KIND_TO_FIELD[kind]
    return Series(kind, kind, _ranked(_entity_totals(corpus, entity_kind, metric), top_n))


def lotka_fit(corpus: Corpus) -> LotkaFit:
    """Least-squares power-law fit of author productivity in log-log space."""
    per_author: dict[str, int] = {}
    for doc in corpus.documents:
        for author in doc.authors:
            per_author[author] = per_author.get(author, 0) + 1
    level_counts: dict[int, int] = {}
    for count in per_author.values():
        level_counts[count] = level_counts.get(count, 0) + 1
    observed = sorted(level_counts.items())
    if len(observed) < 2:
        return LotkaFit(observed=observed, c=None, beta=None)
    xs = [math.log(n) for n, _ in observed]
    ys = [math.log(count) for _, count in observed]
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    beta = -slope
    c = math.exp(intercept)
    expected = [(level, c / level**beta) for level, _ in observed]
    return LotkaFit(observed=observed, c=c, beta=beta, expected=expected)


def evolution(
    corpus: Corpus,
    field_kind: str,
    year_range: tuple[int, int],
    top_n: int = 10,
) -> list[Series]:
    """Per-entity frequency per year; entities ranked by total in range."""
    if field_kind not in ELEMENT_KINDS:
        raise UsageError(f"unknown element kind: {field_kind}")
    lo, hi = year_range
    if lo > hi:
        raise UsageError("evolution: empty year range")
    if top_n <= 0:
        return []
    totals: dict[str, int] = {}
    per_entity_year: dict[str, dict[int, int]] = {}
    for doc in corpus.documents:
        if doc.year is None or not lo <= doc.year <= hi:
            continue
        for entity in entity_values(doc, field_kind):
            totals[entity] = totals.get(entity, 0) + 1
            per_entity_year.setdefault(entity, {})[doc.year] = (
                per_entity_year.get(entity, {}).get(doc.year, 0) + 1
            )
    top = [e for e, _ in sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))][:top_n]
    out = []
    for entity in top:
        counts = per_entity_year[entity]
        points = [(y, counts.get(y, 0)) for y in range(lo, hi + 1)]
        out.append(Series(entity, "evolution", points))
    return out


def treemap_data(corpus: Corpus, field_kind: str, top_n: int = 15) -> Series:
    """Total entity frequency, descending, truncated.

    Keyword fields count whole phrases: documents contribute one occurrence
    per stored keyword string, never per token.
    """
    totals: dict[str, int] = {}
    for doc in corpus.documents:
        for entity in entity_values(doc, field_kind):
            totals[entity] = totals.get(entity, 0) + 1
    return Series(field_kind, "treemap", _ranked(totals, top_n))


def sankey_flows(
    corpus: Corpus, left_kind: str, right_kind: str, top_n: int = 10
) -> list[Flow]:
    """Document co-occurrence weights between two element kinds."""
    if left_kind == right_kind:
        raise UsageError("sankey: left and right kinds must differ")
    for kind in (left_kind, right_kind):
        if kind not in ELEMENT_KINDS:
            raise UsageError(f"unknown element kind: {kind}")
    weights: dict[tuple[str, str], int] = {}
    for doc in corpus.documents:
        lefts = set(entity_values(doc, left_kind))
        rights = set(entity_values(doc, right_kind))
        for l in lefts:
            for r in rights:
                weights[(l, r)] = weights.get((l, r), 0) + 1
    ranked = sorted(weights.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        Flow(left=(left_kind, l), right=(right_kind, r), weight=w)
        for (l, r), w in ranked[:top_n]
    ]


def productivity(corpus: Corpus, top_n: int = 10) -> ProductivityMatrix:
    """Author-by-year document counts with per-cell doc ids."""
    totals: dict[str, int] = {}
    cells: dict[tuple[str, int], list[int]] = {}
    years = set()
    for doc in corpus.documents:
        if doc.year is None:
            continue
        years.add(doc.year)
        for author in doc.authors:
            totals[author] = totals.get(author, 0) + 1
            cells.setdefault((author, doc.year), []).append(doc.id)
    top = [a for a, _ in sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))][:top_n]
    top_set = set(top)
    kept = {k: v for k, v in cells.items() if k[0] in top_set}
    year_list = sorted(years)
    return ProductivityMatrix(authors=top, years=year_list, cells=kept)


def word_cloud_source(corpus: Corpus, field_kind: str, top_n: int = 50):
    """Frequencies for the wordcloud: whole phrases for keyword kinds."""
    if field_kind in ("author_keywords", "keywords_plus"):
        series = treemap_data(corpus, field_kind, top_n)
        return dict(series.points)
    raise AnalysisUnavailableError(
        "word_cloud_source handles keyword kinds; use textkit for text fields"
    )
