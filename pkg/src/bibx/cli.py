"""Command-line surface.

Each command reads and/or writes the Corpus JSON interchange file, so a
pipeline is a sequence of independent, replayable invocations. Exit codes:
0 success, 1 usage/configuration error, 2 data error, 3 external service.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import difflib
import io
import json
import sys

from . import eda, fuse, graphs, ingest, summarize, textkit, topics, vectorlab, views
from .askllm import LlmConfig, ask
from .corpus import Corpus, assign_ids
from .errors import (
    BibxError,
    ConfigurationError,
    DataError,
    ServiceError,
    UsageError,
)
from .render import Palette, emit_html, emit_svg

COMMANDS = (
    "ingest",
    "merge",
    "filter",
    "report",
    "ngram",
    "wordcloud",
    "project",
    "evolution",
    "treemap",
    "sankey",
    "productivity",
    "bar",
    "network",
    "history",
    "similarity",
    "collab",
    "worldmap",
    "topics",
    "summarize",
    "ask",
    "export",
)


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting the process."""

    def error(self, message):
        raise UsageError(message)


def _warn_printer(path):
    def warn(offset, message):
        print(f"WARN {path}:{offset} {message}", file=sys.stderr)

    return warn


def _read_config(path) -> dict:
    """Flattened `section.key` map from an INI-style config file."""
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise DataError(f"config file not found: {path}")
    out = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            out[f"{section}.{key}"] = value
    return out


def _llm_config(config: dict) -> LlmConfig:
    kwargs = {}
    mapping = {
        "llm.endpoint": ("endpoint", str),
        "llm.model": ("model", str),
        "llm.temperature": ("temperature", float),
        "llm.max_tokens": ("max_tokens", int),
        "llm.timeout_s": ("timeout_s", float),
        "llm.context_budget_chars": ("context_budget_chars", int),
    }
    for key, (attr, cast) in mapping.items():
        if key in config:
            try:
                kwargs[attr] = cast(config[key])
            except ValueError:
                raise ConfigurationError(f"bad value for {key}: {config[key]!r}")
    return LlmConfig(**kwargs)


def _stopwords(config: dict):
    path = config.get("text.stopwords_path")
    if path:
        return textkit.load_stopwords(path)
    return textkit.STOPWORDS


def _palette(args) -> Palette:
    raw = getattr(args, "palette", None)
    if not raw:
        return Palette()
    colors = [c.strip() for c in raw.split(",") if c.strip()]
    for color in colors:
        if not (len(color) == 7 and color.startswith("#")):
            raise UsageError(f"palette colors must be #rrggbb, got {color!r}")
    return Palette(colors=colors)


def _load_corpus(path) -> Corpus:
    try:
        return Corpus.load(path)
    except FileNotFoundError:
        raise DataError(f"corpus file not found: {path}")
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DataError(f"corpus file {path} is not valid corpus JSON: {exc}")


def _parse_inputs(pairs) -> list[tuple[str, str]]:
    """'file.bib:scopus' flags -> (path, dialect) tuples."""
    out = []
    for raw in pairs:
        path, sep, dialect = raw.rpartition(":")
        if not sep or dialect not in ingest.DIALECTS:
            raise UsageError(
                f"--in expects <file>:<{'|'.join(ingest.DIALECTS)}>, got {raw!r}"
            )
        out.append((path, dialect))
    return out


def _parse_documents(path, dialect):
    try:
        return ingest.parse_file(path, dialect, warn=_warn_printer(path))
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}")


def _write_figure(args, view, data) -> None:
    """Figure commands write the SVG plus a sibling data JSON."""
    out = args.out
    svg = emit_svg(view)
    if out.endswith(".html"):
        with open(out, "wb") as fh:
            fh.write(emit_html([(view.title or args.command, view)]))
    else:
        with open(out, "wb") as fh:
            fh.write(svg)
    data_path = out.rsplit(".", 1)[0] + ".json"
    payload = {"seed": getattr(args, "seed", None), "data": data}
    with open(data_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1)
    print(f"wrote {out} and {data_path}")


def _series_data(series: eda.Series) -> dict:
    return {
        "label": series.label,
        "kind": series.kind,
        "points": [[c, v] for c, v in series.points],
    }


def _graph_payload(graph: graphs.Graph) -> dict:
    return graph.to_json_dict()


# -- command implementations -------------------------------------------------


def _cmd_ingest(args, config):
    documents = []
    for path, dialect in _parse_inputs(args.inputs):
        documents.extend(_parse_documents(path, dialect))
    if not documents:
        raise DataError("no usable records in the input files")
    corpus = assign_ids(documents)
    fuse.match_references(corpus)
    corpus.save(args.out)
    print(f"{len(corpus.documents)} documents -> {args.out}")
    return 0


def _cmd_merge(args, config):
    datasets = []
    for path, dialect in _parse_inputs(args.inputs):
        datasets.append((_parse_documents(path, dialect), dialect))
    corpus = fuse.merge(fuse.MergePlan(datasets=datasets))
    fuse.match_references(corpus)
    corpus.save(args.out)
    stats = getattr(corpus, "merge_stats", {})
    print(
        f"{len(corpus.documents)} documents -> {args.out}"
        f" ({stats.get('merged', 0)} duplicates merged)"
    )
    return 0


def _split_set(raw):
    return {v.strip() for v in raw.split(",") if v.strip()} if raw else None


def _cmd_filter(args, config):
    corpus = _load_corpus(args.corpus)
    year_range = None
    if args.years:
        try:
            lo, _, hi = args.years.partition(":")
            year_range = (int(lo), int(hi))
        except ValueError:
            raise UsageError(f"--years expects min:max, got {args.years!r}")
    zones = None
    if args.bradford:
        try:
            zones = {int(z) for z in args.bradford.split(",")}
        except ValueError:
            raise UsageError(f"--bradford expects zone numbers, got {args.bradford!r}")
    criteria = fuse.FilterCriteria(
        doc_types=_split_set(args.types),
        year_range=year_range,
        sources=_split_set(args.sources),
        bradford_zones=zones,
        countries=_split_set(args.countries),
        languages=_split_set(args.languages),
        require_abstract=args.require_abstract,
    )
    filtered, provenance = fuse.filter_corpus(corpus, criteria)
    fuse.match_references(filtered)
    filtered.save(args.out)
    print(
        f"{len(filtered.documents)} of {len(corpus.documents)} documents"
        f" -> {args.out}"
    )
    if args.provenance:
        with open(args.provenance, "w", encoding="utf-8") as fh:
            json.dump({str(k): v for k, v in provenance.items()}, fh, indent=1)
    return 0


def _cmd_report(args, config):
    corpus = _load_corpus(args.corpus)
    report = eda.build_report(corpus)
    if args.format == "json":
        print(json.dumps(dict(report.rows()), ensure_ascii=False, indent=1))
    else:
        print(report.to_text())
    return 0


def _cmd_bar(args, config):
    corpus = _load_corpus(args.corpus)
    series = eda.bar_series(corpus, args.kind, top_n=args.top)
    if args.out:
        view = views.bar_view(series, args.width, args.height, _palette(args))
        _write_figure(args, view, _series_data(series))
    else:
        _print_series_csv(series)
    return 0


def _print_series_csv(series: eda.Series) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["category", "value"])
    for category, value in series.points:
        writer.writerow([category, value])


def _cmd_ngram(args, config):
    corpus = _load_corpus(args.corpus)
    stop = _stopwords(config)
    streams = [
        textkit.tokenize(textkit.field_text(d, args.field), stop, args.field)
        for d in corpus.documents
    ]
    counts = textkit.ngrams(streams, args.n)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[: args.top]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["ngram", "count"])
    for gram, count in ranked:
        writer.writerow([gram, count])
    return 0


def _cmd_wordcloud(args, config):
    corpus = _load_corpus(args.corpus)
    freqs = textkit.word_frequencies(
        corpus, args.field, top_n=args.top, stopwords=_stopwords(config)
    )
    if not freqs:
        raise DataError(f"no words found in field {args.field!r}")
    view, dropped = views.wordcloud_view(
        freqs, args.width, args.height, seed=args.seed, palette=_palette(args)
    )
    for word in dropped:
        print(f"WARN {args.out}:0 word not placeable: {word}", file=sys.stderr)
    _write_figure(args, view, {"frequencies": freqs, "dropped": dropped})
    return 0


def _cmd_project(args, config):
    corpus = _load_corpus(args.corpus)
    projection = vectorlab.project2d(
        corpus,
        vector_source="external" if args.vectors else "tfidf",
        cluster_k=args.clusters,
        seed=args.seed,
        vectors_path=args.vectors,
    )
    view = views.scatter_view(projection, args.width, args.height, _palette(args))
    data = {
        "method": projection.method,
        "coordinates": [[float(x), float(y)] for x, y in projection.coordinates],
        "clusters": [int(c) for c in projection.cluster_labels],
    }
    _write_figure(args, view, data)
    return 0


def _cmd_evolution(args, config):
    corpus = _load_corpus(args.corpus)
    try:
        lo, _, hi = args.years.partition(":")
        year_range = (int(lo), int(hi))
    except ValueError:
        raise UsageError(f"--years expects min:max, got {args.years!r}")
    series_list = eda.evolution(corpus, args.kind, year_range, top_n=args.top)
    view = views.evolution_view(series_list, args.width, args.height, _palette(args))
    _write_figure(args, view, [_series_data(s) for s in series_list])
    return 0


def _cmd_treemap(args, config):
    corpus = _load_corpus(args.corpus)
    series = eda.treemap_data(corpus, args.kind, top_n=args.top)
    view = views.treemap_view(series, args.width, args.height, _palette(args))
    _write_figure(args, view, _series_data(series))
    return 0


def _cmd_sankey(args, config):
    corpus = _load_corpus(args.corpus)
    flows = eda.sankey_flows(corpus, args.left, args.right, top_n=args.top)
    if not flows:
        raise DataError("no flows between the requested kinds")
    view = views.sankey_view(flows, args.width, args.height, _palette(args))
    data = [
        {"left": f.left[1], "right": f.right[1], "weight": f.weight} for f in flows
    ]
    _write_figure(args, view, data)
    return 0


def _cmd_productivity(args, config):
    corpus = _load_corpus(args.corpus)
    matrix = eda.productivity(corpus, top_n=args.top)
    view = views.productivity_view(matrix, args.width, args.height, _palette(args))
    data = {
        "authors": matrix.authors,
        "years": matrix.years,
        "cells": [
            {"author": a, "year": y, "documents": ids}
            for (a, y), ids in sorted(matrix.cells.items())
        ],
    }
    _write_figure(args, view, data)
    return 0


def _cmd_network(args, config):
    corpus = _load_corpus(args.corpus)
    graph = graphs.citation_network(corpus, min_citations=args.min_citations)
    return _emit_graph(args, graph)


def _cmd_similarity(args, config):
    corpus = _load_corpus(args.corpus)
    graph = graphs.shared_reference_graph(corpus, min_shared=args.min_shared)
    return _emit_graph(args, graph)


def _cmd_collab(args, config):
    corpus = _load_corpus(args.corpus)
    graph = graphs.coauthorship(corpus)
    if args.author:
        graph = graphs.ego(graph, args.author, depth=args.depth)
    return _emit_graph(args, graph)


def _emit_graph(args, graph: graphs.Graph) -> int:
    if args.out:
        view = views.network_view(
            graph, args.width, args.height, seed=args.seed, palette=_palette(args)
        )
        _write_figure(args, view, _graph_payload(graph))
        edges_path = args.out.rsplit(".", 1)[0] + ".edges.tsv"
        with open(edges_path, "w", encoding="utf-8") as fh:
            fh.write(graph.to_edge_list())
        print(f"wrote {edges_path}")
    else:
        sys.stdout.write(graph.to_edge_list())
    return 0


def _cmd_worldmap(args, config):
    corpus = _load_corpus(args.corpus)
    graph = graphs.country_collab(corpus)
    view = views.worldmap_view(graph, args.width, args.height, _palette(args))
    _write_figure(args, view, _graph_payload(graph))
    return 0


def _cmd_history(args, config):
    corpus = _load_corpus(args.corpus)
    chain = graphs.citation_history(corpus, args.doc)
    print(f"document {args.doc}: {corpus.citation_string(args.doc)}")
    for name, edges in (("backward", chain.backward), ("forward", chain.forward)):
        print(f"{name}:")
        for citing, cited in sorted(edges):
            print(f"  {citing} -> {cited}")
    return 0


def _cmd_topics(args, config):
    corpus = _load_corpus(args.corpus)
    matrix = textkit.tfidf(corpus, "abstract", _stopwords(config))
    k = "auto" if args.k == "auto" else int(args.k)
    model = topics.fit_topics(corpus, matrix.to_dense(), k=k, seed=args.seed)
    for index, size, words, central in topics.topic_summary(model, corpus):
        print(f"Topic {index} ({size}): {words} | central: {central}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(topics.to_json_dict(model), fh, ensure_ascii=False, indent=1)
        print(f"wrote {args.out}")
    return 0


def _cmd_summarize(args, config):
    corpus = _load_corpus(args.corpus)
    try:
        doc_ids = [int(v) for v in args.docs.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--docs expects comma-separated ids, got {args.docs!r}")
    if not doc_ids:
        raise UsageError("--docs must name at least one document")
    summary = summarize.extractive_summary(corpus, doc_ids, args.sentences)
    for sentence in summary.sentences:
        print(sentence)
    return 0


_ASK_RESULTS = ("report", "topics", "summary", "network", "similarity", "collab")


def _cmd_ask(args, config):
    corpus = _load_corpus(args.corpus)
    if args.result == "report":
        result = eda.build_report(corpus)
    elif args.result == "topics":
        matrix = textkit.tfidf(corpus, "abstract", _stopwords(config))
        result = topics.fit_topics(corpus, matrix.to_dense(), seed=args.seed)
    elif args.result == "summary":
        result = summarize.extractive_summary(
            corpus, list(range(len(corpus.documents)))
        )
    elif args.result == "network":
        result = graphs.citation_network(corpus)
    elif args.result == "similarity":
        result = graphs.shared_reference_graph(corpus)
    elif args.result == "collab":
        result = graphs.coauthorship(corpus)
    else:
        raise UsageError(f"--result must be one of {', '.join(_ASK_RESULTS)}")
    exchange = ask(result, args.q, _llm_config(config), session_log=args.log)
    print(exchange.answer)
    return 0


def _cmd_export(args, config):
    corpus = _load_corpus(args.corpus)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["id", "title", "authors", "source", "year", "doc_type",
             "language", "times_cited", "doi", "origin"]
        )
        for d in corpus.documents:
            writer.writerow(
                [d.id, d.title, "; ".join(d.authors), d.source, d.year,
                 d.doc_type, d.language, d.times_cited, d.doi, d.origin]
            )
        text = buf.getvalue()
    elif args.format == "bibtex":
        chunks = []
        for d in corpus.documents:
            record = ingest.RawRecord(source_db="scopus")
            record.fields["ENTRYTYPE"] = [d.doc_type or "misc"]
            record.fields["KEY"] = [f"doc{d.id}"]
            record.fields["TITLE"] = [d.title]
            if d.authors:
                record.fields["AUTHOR"] = [" and ".join(d.authors)]
            if d.source:
                record.fields["JOURNAL"] = [d.source]
            if d.year is not None:
                record.fields["YEAR"] = [str(d.year)]
            if d.abstract:
                record.fields["ABSTRACT"] = [d.abstract]
            if d.doi:
                record.fields["DOI"] = [d.doi]
            chunks.append(ingest.emit_bibtex(record))
        text = "\n".join(chunks)
    else:
        raise UsageError(f"unknown export format: {args.format}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# -- parser construction ------------------------------------------------------


def _add_figure_flags(parser, default_w=720, default_h=480):
    parser.add_argument("--width", type=float, default=default_w,
                        help="figure width in pixels")
    parser.add_argument("--height", type=float, default=default_h,
                        help="figure height in pixels")
    parser.add_argument("--palette", help="comma-separated #rrggbb colors")


def build_parser() -> _Parser:
    parser = _Parser(prog="bibx", description="Bibliometric analysis toolkit.")
    parser.add_argument("--config", help="INI config file (llm.*, render.*, text.*)")
    sub = parser.add_subparsers(dest="command")

    def command(name, help_text, needs_corpus=True, seed=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if needs_corpus:
            p.add_argument("corpus", help="corpus JSON file")
        if seed:
            p.add_argument("--seed", type=int, default=42,
                           help="random seed (default 42)")
        return p

    p = command("ingest", "parse export files into a corpus", needs_corpus=False)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="FILE:DIALECT",
                   help="input file with dialect (scopus|wos|pubmed); repeatable")
    p.add_argument("-o", "--out", required=True, help="output corpus JSON")

    p = command("merge", "merge multiple export files, filling gaps",
                needs_corpus=False)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="FILE:DIALECT",
                   help="input file with dialect (scopus|wos|pubmed); repeatable")
    p.add_argument("-o", "--out", required=True, help="output corpus JSON")

    p = command("filter", "keep documents matching all criteria")
    p.add_argument("--types", help="comma-separated document types")
    p.add_argument("--years", help="inclusive year range min:max")
    p.add_argument("--sources", help="comma-separated source names")
    p.add_argument("--bradford", help="comma-separated Bradford zones (1,2,3)")
    p.add_argument("--countries", help="comma-separated country codes")
    p.add_argument("--languages", help="comma-separated languages")
    p.add_argument("--require-abstract", action="store_true",
                   help="drop documents without an abstract")
    p.add_argument("--provenance", help="write new-id -> old-id map JSON here")
    p.add_argument("-o", "--out", required=True, help="output corpus JSON")

    p = command("report", "corpus summary statistics")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="output format")

    p = command("bar", "one of the ranked/per-year bar aggregations")
    p.add_argument("--kind", choices=eda.BAR_KINDS, required=True,
                   help="aggregation kind")
    p.add_argument("--top", type=int, default=15, help="max categories")
    p.add_argument("-o", "--out", help="write SVG here (else CSV to stdout)")
    _add_figure_flags(p)

    p = command("ngram", "most frequent n-grams of a text field")
    p.add_argument("--field", default="abstract",
                   choices=("abstract", "title", "author_keywords", "keywords_plus"),
                   help="text field")
    p.add_argument("--n", type=int, default=2, help="n-gram length")
    p.add_argument("--top", type=int, default=15, help="rows to print")

    p = command("wordcloud", "frequency-scaled word cloud")
    p.add_argument("--field", default="abstract",
                   choices=("abstract", "title", "author_keywords", "keywords_plus"),
                   help="text field")
    p.add_argument("--top", type=int, default=50, help="max words")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p)

    p = command("project", "2-D document map (TSVD + k-means)")
    p.add_argument("--clusters", type=int, default=2, help="k-means cluster count")
    p.add_argument("--vectors", help="external embedding vectors file")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p)

    p = command("evolution", "per-entity frequency per year")
    p.add_argument("--kind", choices=eda.ELEMENT_KINDS, required=True,
                   help="entity kind")
    p.add_argument("--years", required=True, help="inclusive year range min:max")
    p.add_argument("--top", type=int, default=10, help="entities to track")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p)

    p = command("treemap", "squarified treemap of entity frequencies")
    p.add_argument("--kind", choices=eda.ELEMENT_KINDS, required=True,
                   help="entity kind")
    p.add_argument("--top", type=int, default=15, help="max cells")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p)

    p = command("sankey", "flows between two entity kinds")
    p.add_argument("--left", choices=eda.ELEMENT_KINDS, required=True,
                   help="left-column kind")
    p.add_argument("--right", choices=eda.ELEMENT_KINDS, required=True,
                   help="right-column kind")
    p.add_argument("--top", type=int, default=10, help="max flows")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p)

    p = command("productivity", "author-by-year document grid")
    p.add_argument("--top", type=int, default=10, help="authors to include")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p)

    p = command("network", "document-reference citation network")
    p.add_argument("--min-citations", type=int, default=1,
                   help="keep references cited at least this often")
    p.add_argument("-o", "--out", help="write SVG here (else edge list to stdout)")
    _add_figure_flags(p)

    for name in ("similarity", "cocitation"):
        p = command(name, "shared-reference (bibliographic coupling) graph")
        p.add_argument("--min-shared", type=int, default=10,
                       help="minimum shared references for an edge")
        p.add_argument("-o", "--out", help="write SVG here (else edge list to stdout)")
        _add_figure_flags(p)

    p = command("collab", "co-authorship network, optionally an ego view")
    p.add_argument("--author", help="seed author for an ego subgraph")
    p.add_argument("--depth", type=int, default=1, help="ego hop depth")
    p.add_argument("-o", "--out", help="write SVG here (else edge list to stdout)")
    _add_figure_flags(p)

    p = command("worldmap", "country collaboration map")
    p.add_argument("-o", "--out", required=True, help="output SVG")
    _add_figure_flags(p, default_w=900)

    p = command("history", "backward/forward citation chains of one document")
    p.add_argument("--doc", type=int, required=True, help="focal document id")

    p = command("topics", "k-means topics with class-TF-IDF words")
    p.add_argument("--k", default="auto", help="topic count or 'auto'")
    p.add_argument("-o", "--out", help="write topics JSON here")

    p = command("summarize", "extractive summary of selected abstracts")
    p.add_argument("--docs", required=True, help="comma-separated document ids")
    p.add_argument("--sentences", type=int, default=3, help="sentences to keep")

    p = command("ask", "question over a serialized analysis result")
    p.add_argument("--result", choices=_ASK_RESULTS, default="report",
                   help="which analysis to serialize as context")
    p.add_argument("--q", required=True, help="the question")
    p.add_argument("--log", help="append the exchange to this JSONL file")

    p = command("export", "write the corpus back out")
    p.add_argument("--format", choices=("csv", "bibtex"), default="csv",
                   help="output format")
    p.add_argument("-o", "--out", help="output file (else stdout)")

    return parser


_HANDLERS = {
    "ingest": _cmd_ingest,
    "merge": _cmd_merge,
    "filter": _cmd_filter,
    "report": _cmd_report,
    "bar": _cmd_bar,
    "ngram": _cmd_ngram,
    "wordcloud": _cmd_wordcloud,
    "project": _cmd_project,
    "evolution": _cmd_evolution,
    "treemap": _cmd_treemap,
    "sankey": _cmd_sankey,
    "productivity": _cmd_productivity,
    "network": _cmd_network,
    "similarity": _cmd_similarity,
    "cocitation": _cmd_similarity,
    "collab": _cmd_collab,
    "worldmap": _cmd_worldmap,
    "history": _cmd_history,
    "topics": _cmd_topics,
    "summarize": _cmd_summarize,
    "ask": _cmd_ask,
    "export": _cmd_export,
}


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return 1
        config = _read_config(args.config)
        return _HANDLERS[args.command](args, config)
    except (UsageError, ConfigurationError) as exc:
        hint = ""
        word = str(exc).rsplit(" ", 1)[-1].strip("'\"")
        close = difflib.get_close_matches(word, COMMANDS, n=1)
        if close and word not in COMMANDS:
            hint = f" (did you mean {close[0]!r}?)"
        print(f"error: {exc}{hint}", file=sys.stderr)
        return 1
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BibxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
