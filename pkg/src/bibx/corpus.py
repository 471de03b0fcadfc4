"""Core data model: documents, entity registries, and the labeled corpus.

Every entity string (author, source, institution, country, keyword,
reference) is canonicalized, deduplicated into a per-kind registry, and
addressed by a stable label `<prefix>_<index>` assigned in first-appearance
order. Documents are numbered by position.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field, asdict
from typing import Optional, Union

from .errors import UsageError

# kind -> label prefix, fixed
PREFIXES = {
    "author": "a",
    "source": "j",
    "institution": "i",
    "country": "c",
    "author_keyword": "k",
    "keyword_plus": "p",
    "reference": "r",
}
KINDS_BY_PREFIX = {v: k for k, v in PREFIXES.items()}

ORIGINS = ("scopus", "wos", "pubmed", "merged")


def _fold_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


# a bare-initials token such as 'J', 'JA', 'J.A.' or 'T.-Y.'
_INITIALS_TOKEN_RE = re.compile(r"(?:[A-Z]\.?-?){1,3}")


def _initials(given: str) -> str:
    """Collapse a given-name part to dotted initials: 'Tzu-Yu' -> 'T.-Y.'."""
    out_tokens = []
    for token in given.split():
        piece_texts = []
        for piece in token.split("-"):
            subs = [s for s in piece.split(".") if s]
            if subs:
                piece_texts.append(".".join(s[0].upper() for s in subs) + ".")
        if piece_texts:
            out_tokens.append("-".join(piece_texts))
    return "".join(out_tokens)


def canonicalize(raw: str, kind: str) -> Optional[str]:
    """Normalize an entity string for registry deduplication.

    Returns None when the value is empty after trimming (caller drops it).
    Authors become 'Surname, I.-I.'; sources are uppercased; keywords and
    countries are lowercased; diacritics fold to base letters everywhere.
    """
    if kind not in PREFIXES:
        raise UsageError(f"unknown entity kind: {kind}")
    text = " ".join(_fold_diacritics(raw).split())
    if not text:
        return None
    if kind in ("author_keyword", "keyword_plus", "country"):
        return text.lower()
    if kind == "source":
        return text.upper()
    if kind == "author":
        return _canonical_author(text)
    # institution, reference: whitespace/diacritic fold only
    return text


def _canonical_author(name: str) -> str:
    if "," in name:
        surname, _, given = name.partition(",")
    else:
        tokens = name.split()
        if len(tokens) == 1:
            surname, given = tokens[0], ""
        elif _INITIALS_TOKEN_RE.fullmatch(tokens[-1]):
            # 'Smith JA' vendor form: trailing initials, surname first;
            # pre-dot the run so every letter becomes its own initial
            surname = " ".join(tokens[:-1])
            given = "".join(
                c + "." if c.isalpha() else c for c in tokens[-1].replace(".", "")
            )
        else:
            # 'John Smith' fallback: last token is the surname
            surname, given = tokens[-1], " ".join(tokens[:-1])
    surname = surname.strip()
    given = given.strip()
    surname = " ".join(
        "-".join(p[:1].upper() + p[1:].lower() for p in w.split("-"))
        for w in surname.split()
    )
    ini = _initials(given)
    return f"{surname}, {ini}" if ini else surname


@dataclass
class Document:
    """One bibliographic record with normalized metadata."""

    id: int = -1
    title: str = ""
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    affiliations: list[tuple[str, Optional[str]]] = field(default_factory=list)
    author_keywords: list[str] = field(default_factory=list)
    keywords_plus: list[str] = field(default_factory=list)
    source: str = ""
    doc_type: str = ""
    language: str = ""
    year: Optional[int] = None
    references: Optional[list[str]] = None
    times_cited: Optional[int] = None
    doi: Optional[str] = None
    origin: str = "scopus"

    def copy(self) -> "Document":
        return Document(
            id=self.id,
            title=self.title,
            abstract=self.abstract,
            authors=list(self.authors),
            affiliations=[tuple(a) for a in self.affiliations],
            author_keywords=list(self.author_keywords),
            keywords_plus=list(self.keywords_plus),
            source=self.source,
            doc_type=self.doc_type,
            language=self.language,
            year=self.year,
            references=list(self.references) if self.references is not None else None,
            times_cited=self.times_cited,
            doi=self.doi,
            origin=self.origin,
        )

    def countries(self) -> list[str]:
        # lowercase, matching the country registry's canonical form
        seen = []
        for _inst, code in self.affiliations:
            if code and code.lower() not in seen:
                seen.append(code.lower())
        return seen

    def institutions(self) -> list[str]:
        seen = []
        for inst, _code in self.affiliations:
            if inst and inst not in seen:
                seen.append(inst)
        return seen


class EntityRegistry:
    """Ordered set of canonical strings with `<prefix>_<index>` labels."""

    def __init__(self, kind: str):
        if kind not in PREFIXES:
            raise UsageError(f"unknown entity kind: {kind}")
        self.kind = kind
        self.label_prefix = PREFIXES[kind]
        self.entries: list[str] = []
        self._index: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, entry: str) -> bool:
        return entry in self._index

    def add(self, entry: str) -> int:
        """Insert (or look up) a canonical entry; returns its index."""
        idx = self._index.get(entry)
        if idx is None:
            idx = len(self.entries)
            self.entries.append(entry)
            self._index[entry] = idx
        return idx

    def index_of(self, entry: str) -> int:
        return self._index[entry]

    def label(self, index: int) -> str:
        if not 0 <= index < len(self.entries):
            raise UsageError(f"registry index out of range: {index}")
        return f"{self.label_prefix}_{index}"

    def label_of(self, entry: str) -> str:
        return self.label(self.index_of(entry))

    def entry_for_label(self, label: str) -> str:
        prefix, _, idx = label.partition("_")
        if prefix != self.label_prefix:
            raise UsageError(f"label {label} does not belong to kind {self.kind}")
        return self.entries[int(idx)]


# a citation target: in-corpus document id, or an r_# label
CitationTarget = Union[int, str]


class Corpus:
    """Immutable-after-construction set of documents plus registries."""

    def __init__(self):
        self.documents: list[Document] = []
        self.registries: dict[str, EntityRegistry] = {
            kind: EntityRegistry(kind) for kind in PREFIXES
        }
        self.citation_links: list[tuple[int, CitationTarget]] = []

    def __len__(self) -> int:
        return len(self.documents)

    def registry(self, kind: str) -> EntityRegistry:
        if kind not in self.registries:
            raise UsageError(f"unknown entity kind: {kind}")
        return self.registries[kind]

    # -- serialization (the CLI interchange format) ----------------------

    def to_json_dict(self) -> dict:
        return {
            "documents": [asdict(d) for d in self.documents],
            "registries": {
                kind: reg.entries for kind, reg in self.registries.items()
            },
            "citation_links": [list(link) for link in self.citation_links],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, indent=1)

    @classmethod
    def from_json_dict(cls, data: dict) -> "Corpus":
        corpus = cls()
        for raw in data.get("documents", []):
            doc = Document(**{**raw, "affiliations": [
                (a[0], a[1]) for a in raw.get("affiliations", [])
            ]})
            corpus.documents.append(doc)
        for kind, entries in data.get("registries", {}).items():
            reg = corpus.registry(kind)
            for entry in entries:
                reg.add(entry)
        for citing, target in data.get("citation_links", []):
            corpus.citation_links.append((citing, target))
        return corpus

    @classmethod
    def from_json(cls, text: str) -> "Corpus":
        return cls.from_json_dict(json.loads(text))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "Corpus":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())

    def citation_string(self, doc_id: int) -> str:
        """'96 (CHEN, 2016)'-style short citation for a document."""
        doc = self.documents[doc_id]
        surname = doc.authors[0].split(",")[0].upper() if doc.authors else "ANON"
        year = doc.year if doc.year is not None else "n.d."
        return f"{doc_id} ({surname}, {year})"


def assign_ids(documents: list[Document]) -> Corpus:
    """Number documents 0..n-1 and build all entity registries.

    Registries are filled by first appearance, scanning documents in id
    order and each document's list fields in stored order; the reference
    registry stays empty until citation matching runs.
    """
    if not documents:
        raise UsageError("assign_ids requires a non-empty document list")
    corpus = Corpus()
    for i, doc in enumerate(documents):
        doc = doc.copy()
        doc.id = i
        doc.authors = _canon_list(doc.authors, "author")
        doc.author_keywords = _canon_list(doc.author_keywords, "author_keyword")
        doc.keywords_plus = _canon_list(doc.keywords_plus, "keyword_plus")
        canon_source = canonicalize(doc.source, "source") if doc.source else None
        doc.source = canon_source or ""
        doc.affiliations = [
            (inst, code)
            for inst, code in (
                (canonicalize(a[0], "institution"), a[1]) for a in doc.affiliations
            )
            if inst
        ]
        corpus.documents.append(doc)

        for author in doc.authors:
            corpus.registry("author").add(author)
        if doc.source:
            corpus.registry("source").add(doc.source)
        for inst, code in doc.affiliations:
            corpus.registry("institution").add(inst)
            if code:
                corpus.registry("country").add(code.lower())
        for kw in doc.author_keywords:
            corpus.registry("author_keyword").add(kw)
        for kw in doc.keywords_plus:
            corpus.registry("keyword_plus").add(kw)
    return corpus


def _canon_list(values: list[str], kind: str) -> list[str]:
    out = []
    for v in values:
        canon = canonicalize(v, kind)
        if canon is not None:
            out.append(canon)
    return out


def validate(corpus: Corpus) -> list[str]:
    """Check every Corpus/Document invariant; returns violation messages."""
    problems = []
    n = len(corpus.documents)
    for i, doc in enumerate(corpus.documents):
        if doc.id != i:
            problems.append(f"doc {doc.id}: id does not match position {i}")
        if doc.year is not None and not (1000 <= doc.year <= 3000):
            problems.append(f"doc {doc.id}: year out of range")
        if doc.times_cited is not None and doc.times_cited < 0:
            problems.append(f"doc {doc.id}: negative times_cited")
        if doc.origin not in ORIGINS:
            problems.append(f"doc {doc.id}: unknown origin {doc.origin!r}")
        for author in doc.authors:
            if author not in corpus.registry("author"):
                problems.append(f"doc {doc.id}: author {author!r} not in registry")
        if doc.source and doc.source not in corpus.registry("source"):
            problems.append(f"doc {doc.id}: source {doc.source!r} not in registry")
        for inst, code in doc.affiliations:
            if inst not in corpus.registry("institution"):
                problems.append(
                    f"doc {doc.id}: institution {inst!r} not in registry"
                )
            if code and code.lower() not in corpus.registry("country"):
                problems.append(f"doc {doc.id}: country {code!r} not in registry")
        for kw in doc.author_keywords:
            if kw not in corpus.registry("author_keyword"):
                problems.append(f"doc {doc.id}: keyword {kw!r} not in registry")
        for kw in doc.keywords_plus:
            if kw not in corpus.registry("keyword_plus"):
                problems.append(
                    f"doc {doc.id}: keyword-plus {kw!r} not in registry"
                )
    for citing, target in corpus.citation_links:
        if not 0 <= citing < n:
            problems.append(f"citation link: citing id {citing} out of range")
        if isinstance(target, int):
            if not 0 <= target < n:
                problems.append(f"citation link: target id {target} out of range")
            if target == citing:
                problems.append(f"citation link: self-loop on doc {citing}")
        else:
            prefix, _, idx = str(target).partition("_")
            reg = corpus.registry("reference")
            if prefix != "r" or not idx.isdigit() or int(idx) >= len(reg):
                problems.append(f"citation link: dangling label {target!r}")
    return problems


def parse_label(label: str) -> tuple[str, int]:
    """'a_12' -> ('author', 12)."""
    prefix, _, idx = label.partition("_")
    kind = KINDS_BY_PREFIX.get(prefix)
    if kind is None or not idx.isdigit():
        raise UsageError(f"malformed label: {label!r}")
    return kind, int(idx)
