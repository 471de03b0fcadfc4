"""Merging, deduplication, filtering, Bradford zoning, citation resolution.

The merge follows a fill-only precedence rule: datasets are processed in
plan order, the first occurrence of a key wins, and later duplicates may
only fill fields the retained document lacks. List fields fill only when
entirely empty (never unioned) to avoid variant-spelling duplicates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import Corpus, Document, assign_ids, canonicalize
from .errors import EmptyCorpusError, UsageError

# Document fields eligible for fill during merge
_SCALAR_FIELDS = (
    "abstract",
    "source",
    "doc_type",
    "language",
    "year",
    "times_cited",
    "doi",
)
_LIST_FIELDS = (
    "authors",
    "affiliations",
    "author_keywords",
    "keywords_plus",
    "references",
)


@dataclass
class MergePlan:
    """Ordered datasets; earlier entries are higher-precedence references."""

    datasets: list[tuple[list[Document], str]]

    def __post_init__(self):
        if not self.datasets:
            raise UsageError("merge plan needs at least one dataset")


@dataclass
class FilterCriteria:
    doc_types: set[str] | None = None
    year_range: tuple[int, int] | None = None
    sources: set[str] | None = None
    bradford_zones: set[int] | None = None
    countries: set[str] | None = None
    languages: set[str] | None = None
    require_abstract: bool = False

    def __post_init__(self):
        if self.year_range is not None and self.year_range[0] > self.year_range[1]:
            raise UsageError("year range min must not exceed max")


@dataclass
class BradfordZoning:
    zone_of_source: dict[str, int]
    zone_doc_totals: dict[int, int]
    zone_source_counts: dict[int, int]
    ranked_sources: list[tuple[str, int]] = field(default_factory=list)


_PUNCT_RE = re.compile(r"[^0-9a-z]+")


def dedup_key(doc: Document) -> str:
    """Duplicate-detection key: lowercase DOI, else squashed title."""
    if doc.doi:
        return "doi:" + doc.doi.strip().lower()
    squashed = _PUNCT_RE.sub("", doc.title.lower())
    if squashed:
        return "title:" + squashed
    return f"sentinel:{id(doc)}"


def merge(plan: MergePlan) -> Corpus:
    """Merge datasets under the fill-only rule; order = first appearance."""
    by_key: dict[str, Document] = {}
    order: list[str] = []
    title_fallback_merges = 0
    merges = 0
    for documents, _source_db in plan.datasets:
        for doc in documents:
            key = dedup_key(doc)
            kept = by_key.get(key)
            if kept is None:
                by_key[key] = doc.copy()
                order.append(key)
            else:
                _fill(kept, doc)
                kept.origin = "merged"
                merges += 1
                if key.startswith("title:"):
                    title_fallback_merges += 1
    corpus = assign_ids([by_key[k] for k in order])
    corpus.merge_stats = {
        "merged": merges,
        "title_fallback_merges": title_fallback_merges,
    }
    return corpus


def _fill(kept: Document, incoming: Document) -> None:
    for name in _SCALAR_FIELDS:
        if _is_empty(getattr(kept, name)) and not _is_empty(getattr(incoming, name)):
            setattr(kept, name, getattr(incoming, name))
    for name in _LIST_FIELDS:
        current = getattr(kept, name)
        new = getattr(incoming, name)
        if (current is None or len(current) == 0) and new:
            setattr(kept, name, list(new))


def _is_empty(value) -> bool:
    return value is None or value == "" or value == []


def filter_corpus(corpus: Corpus, criteria: FilterCriteria):
    """Keep documents passing every active criterion; re-labels ids.

    Returns (new corpus, provenance) where provenance maps new id -> old id.
    """
    zoning = None
    if criteria.bradford_zones is not None:
        zoning = bradford_zones(corpus)
    doc_types = _lowered(criteria.doc_types)
    languages = _lowered(criteria.languages)
    sources = (
        {canonicalize(s, "source") for s in criteria.sources}
        if criteria.sources is not None
        else None
    )
    countries = _lowered(criteria.countries)

    survivors = []
    for doc in corpus.documents:
        if doc_types is not None and doc.doc_type.lower() not in doc_types:
            continue
        if languages is not None and doc.language.lower() not in languages:
            continue
        if sources is not None and doc.source not in sources:
            continue
        if criteria.year_range is not None:
            lo, hi = criteria.year_range
            if doc.year is None or not lo <= doc.year <= hi:
                continue
        if countries is not None and not (set(doc.countries()) & countries):
            continue
        if zoning is not None:
            zone = zoning.zone_of_source.get(doc.source)
            if zone is None or zone not in criteria.bradford_zones:
                continue
        if criteria.require_abstract and not doc.abstract.strip():
            continue
        survivors.append(doc)
    if not survivors:
        raise EmptyCorpusError("filter produced an empty corpus")
    provenance = {new_id: doc.id for new_id, doc in enumerate(survivors)}
    return assign_ids(survivors), provenance


def _lowered(values):
    return {v.lower() for v in values} if values is not None else None


def bradford_zones(corpus: Corpus) -> BradfordZoning:
    """Three-zone split of sources sorted by descending productivity.

    Zone boundaries are the smallest prefixes whose cumulative document
    count reaches n/3 and 2n/3.
    """
    counts: dict[str, int] = {}
    for doc in corpus.documents:
        if doc.source:
            counts[doc.source] = counts.get(doc.source, 0) + 1
    if not counts:
        raise UsageError("bradford_zones needs at least one source")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    total = sum(counts.values())
    zone_of_source: dict[str, int] = {}
    zone_doc_totals = {1: 0, 2: 0, 3: 0}
    zone_source_counts = {1: 0, 2: 0, 3: 0}
    cum = 0
    for source, count in ranked:
        if cum < total / 3:
            zone = 1
        elif cum < 2 * total / 3:
            zone = 2
        else:
            zone = 3
        cum += count
        zone_of_source[source] = zone
        zone_doc_totals[zone] += count
        zone_source_counts[zone] += 1
    return BradfordZoning(zone_of_source, zone_doc_totals, zone_source_counts, ranked)


# -- citation resolution --------------------------------------------------

_TITLE_MIN_CHARS = 20
_TITLE_TOKEN_FRACTION = 0.6


def _squash(text: str) -> str:
    return _PUNCT_RE.sub("", text.lower())


def match_references(corpus: Corpus) -> list[tuple[int, int | str]]:
    """Resolve every raw reference to an in-corpus id or a new r_# label.

    Precedence: (a) DOI substring, (b) normalized-title containment for
    titles of >= 20 squashed characters, (c) first-author surname + year
    co-occurrence with >= 60% of title tokens present. The corpus's
    reference registry and citation_links are populated in place.
    """
    doc_doi = []
    doc_title = []
    doc_meta = []
    for doc in corpus.documents:
        doc_doi.append(doc.doi.strip().lower() if doc.doi else None)
        squashed = _squash(doc.title)
        doc_title.append(squashed if len(squashed) >= _TITLE_MIN_CHARS else None)
        surname = (
            _squash(doc.authors[0].split(",")[0]) if doc.authors else None
        )
        tokens = [t for t in re.findall(r"[0-9a-z]+", doc.title.lower()) if len(t) > 2]
        doc_meta.append((surname, str(doc.year) if doc.year else None, tokens))

    reg = corpus.registry("reference")
    resolved_cache: dict[str, int | str] = {}
    links: list[tuple[int, int | str]] = []
    for doc in corpus.documents:
        if not doc.references:
            continue
        for raw in doc.references:
            canon = canonicalize(raw, "reference")
            if canon is None:
                continue
            target = resolved_cache.get(canon)
            if target is None:
                target = _resolve(canon, doc_doi, doc_title, doc_meta, reg)
                resolved_cache[canon] = target
            if target == doc.id:
                continue  # no self-loops
            links.append((doc.id, target))
    links = sorted(set(links), key=lambda l: (l[0], isinstance(l[1], str), str(l[1])))
    corpus.citation_links = links
    return links


def _resolve(reference: str, doc_doi, doc_title, doc_meta, reg):
    ref_lower = reference.lower()
    ref_squashed = _squash(reference)
    # (a) DOI substring
    for i, doi in enumerate(doc_doi):
        if doi and doi in ref_lower:
            return i
    # (b) normalized-title containment
    for i, title in enumerate(doc_title):
        if title and title in ref_squashed:
            return i
    # (c) surname + year + 60% of title tokens
    ref_tokens = set(re.findall(r"[0-9a-z]+", ref_lower))
    for i, (surname, year, tokens) in enumerate(doc_meta):
        if not surname or not year or not tokens:
            continue
        if surname not in ref_tokens or year not in ref_tokens:
            continue
        hits = sum(1 for t in tokens if t in ref_tokens)
        if hits >= _TITLE_TOKEN_FRACTION * len(tokens):
            return i
    return reg.label(reg.add(reference))


# public alias; filter_corpus avoids shadowing the builtin internally
filter = filter_corpus
