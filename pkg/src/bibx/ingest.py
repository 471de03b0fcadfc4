"""Parsers for raw database export files.

Two grammars: BibTeX-like `.bib` (Scopus and WoS dialects, nested braces
allowed inside values) and MEDLINE tagged text (PubMed). Both parse into
RawRecord, an ordered tag -> values multimap; `normalize` then applies the
per-dialect field mapping to produce Documents.

The tag mappings are table-driven (TAG_MAPS below) so vendor drift can be
corrected without touching parser code.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .corpus import Document
from .countries import DEFAULT_TABLE, CountryTable
from .errors import ParseError, UsageError

DIALECTS = ("scopus", "wos", "pubmed")


@dataclass
class RawRecord:
    source_db: str
    fields: dict[str, list[str]] = field(default_factory=dict)
    span: tuple[int, int] = (0, 0)

    def add(self, tag: str, value: str) -> None:
        self.fields.setdefault(tag.upper(), []).append(value)

    def first(self, *tags: str) -> str | None:
        for tag in tags:
            values = self.fields.get(tag.upper())
            if values:
                return values[0]
        return None

    def all(self, *tags: str) -> list[str]:
        for tag in tags:
            values = self.fields.get(tag.upper())
            if values:
                return values
        return []


def _decode(data) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8", errors="replace")
    return data


# -- BibTeX ---------------------------------------------------------------

_TYPE_RE = re.compile(r"[A-Za-z]+")
_SKIPPED_ENTRY_TYPES = {"COMMENT", "STRING", "PREAMBLE"}


def parse_bibtex(data, dialect: str) -> list[RawRecord]:
    """Parse a Scopus/WoS BibTeX export into raw records.

    Brace depth is tracked explicitly so vendor values with unescaped
    nested braces survive verbatim. Unbalanced braces raise a positioned
    ParseError; unknown fields are kept.
    """
    if dialect not in ("scopus", "wos"):
        raise UsageError(f"parse_bibtex: dialect must be scopus or wos, got {dialect}")
    text = _decode(data)
    records = []
    pos = 0
    n = len(text)
    while True:
        at = text.find("@", pos)
        if at == -1:
            break
        # ignore an @ sitting on a % comment line
        line_start = text.rfind("\n", 0, at) + 1
        if text[line_start:at].lstrip().startswith("%"):
            eol = text.find("\n", at)
            pos = n if eol == -1 else eol + 1
            continue
        record, pos = _parse_entry(text, at, dialect)
        if record is not None:
            records.append(record)
    return records


def _parse_entry(text: str, at: int, dialect: str):
    n = len(text)
    m = _TYPE_RE.match(text, at + 1)
    if m is None:
        return None, at + 1
    entry_type = m.group().upper()
    pos = _skip_ws(text, m.end())
    if pos >= n or text[pos] != "{":
        # stray @word in prose between entries; resume after it
        return None, m.end()
    if entry_type in _SKIPPED_ENTRY_TYPES:
        # @comment/@string/@preamble bodies need not be field-shaped;
        # consume the balanced group and move on
        _body, end = _parse_braced(text, pos)
        return None, end
    pos += 1
    # citation key: up to the first comma or closing brace
    key_end = pos
    while key_end < n and text[key_end] not in ",}{":
        key_end += 1
    if key_end >= n:
        raise ParseError("unterminated entry", offset=at)
    record = RawRecord(source_db=dialect)
    record.add("ENTRYTYPE", entry_type)
    key = text[pos:key_end].strip()
    if key:
        record.add("KEY", key)
    pos = key_end
    if text[pos] == ",":
        pos += 1
    while True:
        pos = _skip_ws_commas(text, pos)
        if pos >= n:
            raise ParseError("unterminated entry", offset=at)
        if text[pos] == "}":
            pos += 1
            break
        name_end = text.find("=", pos)
        if name_end == -1:
            raise ParseError("field without '='", offset=pos)
        name = text[pos:name_end].strip()
        if not name or "}" in name or "{" in name or "\n" in name.strip("\n "):
            raise ParseError("malformed field name", offset=pos)
        value, pos = _parse_value(text, name_end + 1)
        record.add(name, value)
    record.span = (at, pos)
    if entry_type in _SKIPPED_ENTRY_TYPES:
        return None, pos
    return record, pos


def _parse_value(text: str, pos: int):
    n = len(text)
    pos = _skip_ws(text, pos)
    if pos >= n:
        raise ParseError("missing field value", offset=pos)
    ch = text[pos]
    if ch == "{":
        return _parse_braced(text, pos)
    if ch == '"':
        return _parse_quoted(text, pos)
    end = pos
    while end < n and text[end] not in ",}":
        end += 1
    return text[pos:end].strip(), end


def _parse_braced(text: str, pos: int):
    start = pos + 1
    depth = 1
    i = start
    while depth > 0:
        nxt_open = text.find("{", i)
        nxt_close = text.find("}", i)
        if nxt_close == -1:
            raise ParseError("unbalanced braces", offset=pos)
        if nxt_open != -1 and nxt_open < nxt_close:
            depth += 1
            i = nxt_open + 1
        else:
            depth -= 1
            i = nxt_close + 1
    return text[start : i - 1], i


def _parse_quoted(text: str, pos: int):
    i = pos + 1
    depth = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            if depth == 0:
                raise ParseError("unbalanced braces", offset=pos)
            depth -= 1
        elif ch == '"' and depth == 0:
            return text[pos + 1 : i], i + 1
        i += 1
    raise ParseError("unterminated quoted value", offset=pos)


def _skip_ws(text: str, pos: int) -> int:
    n = len(text)
    while pos < n and text[pos].isspace():
        pos += 1
    return pos


def _skip_ws_commas(text: str, pos: int) -> int:
    n = len(text)
    while pos < n and (text[pos].isspace() or text[pos] == ","):
        pos += 1
    return pos


def emit_bibtex(record: RawRecord) -> str:
    """Re-emit a raw record in the BibTeX dialect (round-trip aid)."""
    entry_type = record.first("ENTRYTYPE") or "MISC"
    key = record.first("KEY") or "key"
    lines = [f"@{entry_type}{{{key},"]
    for tag, values in record.fields.items():
        if tag in ("ENTRYTYPE", "KEY"):
            continue
        for value in values:
            lines.append(f"  {tag.lower()} = {{{value}}},")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- MEDLINE --------------------------------------------------------------

_MEDLINE_TAG_RE = re.compile(r"^([A-Z0-9]{1,4})\s*- ?(.*)$")


def parse_pubmed(data) -> list[RawRecord]:
    """Parse a MEDLINE tagged export (`TAG - value` lines) into raw records.

    Continuation lines start with six spaces and join the previous value
    with a single space; a blank line ends a record.
    """
    text = _decode(data)
    records = []
    current: RawRecord | None = None
    last_tag: str | None = None
    start_line = 0
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.rstrip("\r")
        if not stripped.strip():
            if current is not None and current.fields:
                current.span = (start_line, lineno - 1)
                records.append(current)
            current, last_tag = None, None
            continue
        if stripped.startswith("      "):
            if current is None or last_tag is None:
                raise ParseError("continuation line outside a record", line=lineno)
            values = current.fields[last_tag]
            values[-1] = values[-1] + " " + stripped.strip()
            continue
        m = _MEDLINE_TAG_RE.match(stripped)
        if m is None:
            raise ParseError(f"unrecognized line {stripped[:40]!r}", line=lineno)
        if current is None:
            current = RawRecord(source_db="pubmed")
            start_line = lineno
        tag = m.group(1).upper()
        current.add(tag, m.group(2).strip())
        last_tag = tag
    if current is not None and current.fields:
        current.span = (start_line, lineno)
        records.append(current)
    return records


def emit_pubmed(record: RawRecord) -> str:
    lines = []
    for tag, values in record.fields.items():
        for value in values:
            lines.append(f"{tag:<4}- {value}")
    return "\n".join(lines) + "\n\n"


# -- normalization --------------------------------------------------------

# dialect -> Document field -> candidate raw tags, tried in order
TAG_MAPS = {
    "scopus": {
        "title": ("TITLE",),
        "abstract": ("ABSTRACT",),
        "authors": ("AUTHOR",),
        "source": ("JOURNAL", "BOOKTITLE", "SOURCE"),
        "year": ("YEAR",),
        "doi": ("DOI",),
        "doc_type": ("DOCUMENT_TYPE", "TYPE", "ENTRYTYPE"),
        "language": ("LANGUAGE",),
        "author_keywords": ("KEYWORDS", "AUTHOR_KEYWORDS"),
        "keywords_plus": ("KEYWORDS-PLUS",),
        "references": ("REFERENCES",),
        "affiliations": ("AFFILIATIONS", "AFFILIATION"),
        "times_cited": ("NOTE", "TIMES-CITED"),
    },
    "wos": {
        "title": ("TITLE",),
        "abstract": ("ABSTRACT",),
        "authors": ("AUTHOR",),
        "source": ("JOURNAL", "BOOKTITLE", "SERIES"),
        "year": ("YEAR",),
        "doi": ("DOI",),
        "doc_type": ("TYPE", "DOCUMENT_TYPE", "ENTRYTYPE"),
        "language": ("LANGUAGE",),
        "author_keywords": ("KEYWORDS",),
        "keywords_plus": ("KEYWORDS-PLUS",),
        "references": ("CITED-REFERENCES", "REFERENCES"),
        "affiliations": ("AFFILIATIONS", "AFFILIATION"),
        "times_cited": ("TIMES-CITED", "NOTE"),
    },
    "pubmed": {
        "title": ("TI",),
        "abstract": ("AB",),
        "authors": ("FAU", "AU"),
        "source": ("JT", "TA"),
        "year": ("DP",),
        "doi": ("LID", "AID"),
        "doc_type": ("PT",),
        "language": ("LA",),
        "author_keywords": ("OT",),
        "keywords_plus": ("MH",),
        "affiliations": ("AD",),
    },
}

_YEAR_RE = re.compile(r"\b(\d{4})\b")
_CITED_BY_RE = re.compile(r"cited\s+by\s*:?\s*(\d+)", re.IGNORECASE)
_INSTITUTION_HINT = re.compile(
    r"univ|institut|college|school|academy|hospital|center|centre|laborator|polytech",
    re.IGNORECASE,
)


# TeX accent command -> combining character
_ACCENTS = {
    "'": "\u0301",
    "`": "\u0300",
    '"': "\u0308",
    "^": "\u0302",
    "~": "\u0303",
    "=": "\u0304",
    ".": "\u0307",
    "u": "\u0306",
    "v": "\u030c",
    "H": "\u030b",
    "c": "\u0327",
    "k": "\u0328",
    "r": "\u030a",
}
_ACCENT_RE = re.compile(r"\\([`'\"^~=.uvHckr])\s*\{?([A-Za-z])\}?")
_TEX_LIGATURES = {"\\ss": "ss", "\\ae": "ae", "\\AE": "AE", "\\oe": "oe",
                  "\\o": "o", "\\O": "O", "\\l": "l", "\\L": "L"}


def _decode_tex(value: str) -> str:
    value = _ACCENT_RE.sub(
        lambda m: unicodedata.normalize("NFC", m.group(2) + _ACCENTS[m.group(1)]),
        value,
    )
    for escape, plain in _TEX_LIGATURES.items():
        value = value.replace(escape + "{}", plain).replace(escape, plain)
    return value


def _strip_braces(value: str) -> str:
    value = _decode_tex(value)
    return " ".join(value.replace("{", "").replace("}", "").split())


def _split_top_level(value: str, sep: str) -> list[str]:
    """Split on sep only at brace depth 0."""
    parts, depth, buf = [], 0, []
    for ch in value:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        if ch == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return [p.strip() for p in parts if p.strip()]


_AND_RE = re.compile(r"\s+and\s+", re.IGNORECASE)


def _split_authors_bib(value: str) -> list[str]:
    """Split a BibTeX author field on ' and ' at top brace level."""
    out, depth, start = [], 0, 0
    i = 0
    n = len(value)
    while i < n:
        ch = value[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        elif depth == 0 and value[i : i + 5].lower() == " and " :
            out.append(value[start:i])
            i += 5
            start = i
            continue
        i += 1
    out.append(value[start:])
    return [_strip_braces(a) for a in out if _strip_braces(a)]


def _parse_affiliation(raw: str, table: CountryTable):
    segments = [s.strip() for s in raw.split(",") if s.strip()]
    if not segments:
        return None
    code = table.code_for(segments[-1]) if segments else None
    institution = segments[0]
    for seg in segments:
        if _INSTITUTION_HINT.search(seg):
            institution = seg
            break
    return (institution, code)


def normalize(
    record: RawRecord,
    warn=None,
    country_table: CountryTable = DEFAULT_TABLE,
) -> Document | None:
    """Map a RawRecord to a Document via the dialect's tag table.

    Returns None (with a warning) when the record has no usable title.
    The warn callback receives (offset, message); the offset is the
    record's starting byte (BibTeX) or line (MEDLINE).
    """
    warn = warn or (lambda offset, msg: None)
    tags = TAG_MAPS[record.source_db]
    doc = Document(origin=record.source_db)

    title = record.first(*tags["title"])
    if not title or not _strip_braces(title):
        warn(record.span[0], "record has no title, dropped")
        return None
    doc.title = _strip_braces(title)

    abstract = record.first(*tags["abstract"])
    doc.abstract = _strip_braces(abstract) if abstract else ""

    if record.source_db == "pubmed":
        doc.authors = [a.strip() for a in record.all(*tags["authors"]) if a.strip()]
        doc.keywords_plus = [k.strip() for k in record.all(*tags["keywords_plus"])]
        doc.author_keywords = [
            k.strip() for k in record.all(*tags["author_keywords"])
        ]
        doc.affiliations = [
            aff
            for aff in (
                _parse_affiliation(a, country_table) for a in record.all(*tags["affiliations"])
            )
            if aff is not None
        ]
        doi = None
        for value in record.all("LID") + record.all("AID"):
            if "[doi]" in value:
                doi = value.replace("[doi]", "").strip()
                break
        doc.doi = doi
        doc.doc_type = record.first(*tags["doc_type"]) or ""
        # references/times_cited stay absent: PubMed does not export them
    else:
        author_field = record.first(*tags["authors"])
        doc.authors = _split_authors_bib(author_field) if author_field else []
        kw = record.first(*tags["author_keywords"])
        doc.author_keywords = (
            [_strip_braces(k) for k in _split_top_level(kw, ";")] if kw else []
        )
        kwp = record.first(*tags["keywords_plus"])
        doc.keywords_plus = (
            [_strip_braces(k) for k in _split_top_level(kwp, ";")] if kwp else []
        )
        refs = record.first(*tags["references"])
        doc.references = (
            [_strip_braces(r) for r in _split_top_level(refs, ";")] if refs else []
        )
        aff = record.first(*tags["affiliations"])
        if aff:
            doc.affiliations = [
                a
                for a in (
                    _parse_affiliation(_strip_braces(chunk), country_table)
                    for chunk in _split_top_level(aff, ";")
                )
                if a is not None
            ]
        doi = record.first(*tags["doi"])
        doc.doi = _strip_braces(doi) if doi else None
        doc.doc_type = _strip_braces(record.first(*tags["doc_type"]) or "")
        doc.times_cited = _extract_times_cited(record, tags["times_cited"])

    source = record.first(*tags["source"])
    doc.source = _strip_braces(source) if source else ""
    lang = record.first(*tags["language"])
    doc.language = _strip_braces(lang) if lang else ""

    year_raw = record.first(*tags["year"])
    if year_raw:
        m = _YEAR_RE.search(year_raw)
        if m:
            doc.year = int(m.group(1))
        else:
            warn(record.span[0], f"unparseable year {year_raw!r}")
    return doc


def _extract_times_cited(record: RawRecord, tags) -> int | None:
    for tag in tags:
        value = record.first(tag)
        if value is None:
            continue
        value = _strip_braces(value)
        if value.isdigit():
            return int(value)
        m = _CITED_BY_RE.search(value)
        if m:
            return int(m.group(1))
    return None


def parse_file(path, dialect: str, warn=None, country_table=DEFAULT_TABLE):
    """Parse + normalize one export file; returns the document list."""
    if dialect not in DIALECTS:
        raise UsageError(f"unknown source dialect: {dialect}")
    with open(path, "rb") as fh:
        data = fh.read()
    if dialect == "pubmed":
        records = parse_pubmed(data)
    else:
        records = parse_bibtex(data, dialect)
    docs = []
    for record in records:
        doc = normalize(record, warn=warn, country_table=country_table)
        if doc is not None:
            docs.append(doc)
    return docs
