"""Network analyses: citation, citation history, shared references,
co-authorship (with ego views), and country collaboration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Corpus
from .countries import DEFAULT_TABLE, CountryTable
from .errors import UsageError


@dataclass
class Graph:
    nodes: list[tuple[str, str, dict]] = field(default_factory=list)
    edges: list[tuple[int, int, float, bool]] = field(default_factory=list)

    def add_node(self, label: str, kind: str, **attrs) -> int:
        self.nodes.append((label, kind, attrs))
        return len(self.nodes) - 1

    def node_index(self, label: str) -> int:
        for i, (l, _k, _a) in enumerate(self.nodes):
            if l == label:
                return i
        raise KeyError(label)

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"label": l, "kind": k, **a} for l, k, a in self.nodes
            ],
            "edges": [
                {"source": s, "target": t, "weight": w, "directed": d}
                for s, t, w, d in self.edges
            ],
        }

    def to_edge_list(self) -> str:
        lines = []
        for s, t, w, _d in self.edges:
            lines.append(f"{self.nodes[s][0]}\t{self.nodes[t][0]}\t{w:g}")
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class CitationChain:
    focal: int
    backward: set[tuple[int, int]]  # citing -> cited, reachable from focal
    forward: set[tuple[int, int]]  # edges on paths reaching focal


def _in_corpus_links(corpus: Corpus) -> list[tuple[int, int]]:
    return [
        (citing, target)
        for citing, target in corpus.citation_links
        if isinstance(target, int) and target != citing
    ]


def citation_network(corpus: Corpus, min_citations: int = 1) -> Graph:
    """Documents plus references cited at least `min_citations` times.

    Document nodes carry color-class blue, reference nodes red; documents
    with no surviving edges are dropped.
    """
    ref_in_degree: dict[str, int] = {}
    for _citing, target in corpus.citation_links:
        if isinstance(target, str):
            ref_in_degree[target] = ref_in_degree.get(target, 0) + 1
    kept_refs = {r for r, d in ref_in_degree.items() if d >= min_citations}

    edges: list[tuple[int | str, int | str]] = []
    doc_targets: dict[int, int] = {}
    for citing, target in corpus.citation_links:
        if isinstance(target, int):
            if target != citing:
                edges.append((citing, target))
                doc_targets[target] = doc_targets.get(target, 0) + 1
        elif target in kept_refs:
            edges.append((citing, target))

    graph = Graph()
    index: dict[object, int] = {}
    involved_docs = sorted(
        {e[0] for e in edges} | {e[1] for e in edges if isinstance(e[1], int)}
    )
    for doc_id in involved_docs:
        index[doc_id] = graph.add_node(
            str(doc_id),
            "document",
            color_class="blue",
            citation=corpus.citation_string(doc_id),
        )
    for label in sorted(kept_refs, key=lambda l: int(l.split("_")[1])):
        reg = corpus.registry("reference")
        index[label] = graph.add_node(
            label,
            "reference",
            color_class="red",
            text=reg.entry_for_label(label),
            citations=ref_in_degree[label],
        )
    for citing, target in sorted(edges, key=lambda e: (e[0], str(e[1]))):
        graph.edges.append((index[citing], index[target], 1.0, True))
    return graph


def citation_history(corpus: Corpus, focal: int) -> CitationChain:
    """Transitive backward (cited-by-focal) and forward (cites-focal) chains."""
    n = len(corpus.documents)
    if not 0 <= focal < n:
        raise UsageError(f"citation_history: invalid document id {focal}")
    links = _in_corpus_links(corpus)
    cites: dict[int, set[int]] = {}
    cited_by: dict[int, set[int]] = {}
    for citing, cited in links:
        cites.setdefault(citing, set()).add(cited)
        cited_by.setdefault(cited, set()).add(citing)

    backward: set[tuple[int, int]] = set()
    stack = [focal]
    seen = {focal}
    while stack:
        doc = stack.pop()
        for cited in sorted(cites.get(doc, ())):
            backward.add((doc, cited))
            if cited not in seen:
                seen.add(cited)
                stack.append(cited)
    forward: set[tuple[int, int]] = set()
    stack = [focal]
    seen = {focal}
    while stack:
        doc = stack.pop()
        for citing in sorted(cited_by.get(doc, ())):
            forward.add((citing, doc))
            if citing not in seen:
                seen.add(citing)
                stack.append(citing)
    return CitationChain(focal=focal, backward=backward, forward=forward)


def shared_reference_graph(corpus: Corpus, min_shared: int = 10) -> Graph:
    """Bibliographic-coupling graph: edge weight = |shared references|.

    Reference identity is the resolved citation target. Isolated documents
    are dropped; connected components are numbered by size descending then
    smallest member id, stored as node attribute `component`.
    """
    refs_of: dict[int, set] = {}
    for citing, target in corpus.citation_links:
        refs_of.setdefault(citing, set()).add(target)
    doc_ids = sorted(refs_of)
    pairs: list[tuple[int, int, int]] = []
    for a_pos, i in enumerate(doc_ids):
        for j in doc_ids[a_pos + 1 :]:
            shared = len(refs_of[i] & refs_of[j])
            if shared >= min_shared:
                pairs.append((i, j, shared))

    adjacency: dict[int, set[int]] = {}
    for i, j, _w in pairs:
        adjacency.setdefault(i, set()).add(j)
        adjacency.setdefault(j, set()).add(i)
    components = _components(adjacency)

    graph = Graph()
    index: dict[int, int] = {}
    comp_of: dict[int, int] = {}
    for comp_idx, members in enumerate(components):
        for doc_id in members:
            comp_of[doc_id] = comp_idx
    for doc_id in sorted(adjacency):
        index[doc_id] = graph.add_node(
            str(doc_id),
            "document",
            component=comp_of[doc_id],
            citation=corpus.citation_string(doc_id),
        )
    for i, j, w in sorted(pairs):
        graph.edges.append((index[i], index[j], float(w), False))
    return graph


def _components(adjacency: dict[int, set[int]]) -> list[list[int]]:
    seen: set[int] = set()
    components: list[list[int]] = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack, members = [start], []
        seen.add(start)
        while stack:
            node = stack.pop()
            members.append(node)
            for nxt in sorted(adjacency[node]):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        components.append(sorted(members))
    components.sort(key=lambda m: (-len(m), m[0]))
    return components


def coauthorship(corpus: Corpus) -> Graph:
    """Undirected author graph weighted by co-authored document count."""
    weights: dict[tuple[str, str], int] = {}
    doc_count: dict[str, int] = {}
    for doc in corpus.documents:
        authors = doc.authors
        for a in authors:
            doc_count[a] = doc_count.get(a, 0) + 1
        for x in range(len(authors)):
            for y in range(x + 1, len(authors)):
                pair = tuple(sorted((authors[x], authors[y])))
                if pair[0] == pair[1]:
                    continue
                weights[pair] = weights.get(pair, 0) + 1
    graph = Graph()
    index: dict[str, int] = {}
    for author in corpus.registry("author").entries:
        index[author] = graph.add_node(
            author, "author", documents=doc_count.get(author, 0)
        )
    for (a, b), w in sorted(weights.items()):
        graph.edges.append((index[a], index[b], float(w), False))
    return graph


def ego(graph: Graph, author: str, depth: int = 1) -> Graph:
    """Breadth-limited subgraph within `depth` hops of the seed author."""
    labels = [l for l, _k, _a in graph.nodes]
    if author not in labels:
        near = [l for l in labels if author.split(",")[0].lower() in l.lower()]
        hint = f"; near matches: {', '.join(sorted(near)[:5])}" if near else ""
        raise UsageError(f"unknown author {author!r}{hint}")
    seed = labels.index(author)
    adjacency: dict[int, set[int]] = {}
    for s, t, _w, _d in graph.edges:
        adjacency.setdefault(s, set()).add(t)
        adjacency.setdefault(t, set()).add(s)
    hop = {seed: 0}
    frontier = [seed]
    level = 0
    while frontier and level < depth:
        level += 1
        nxt = []
        for node in frontier:
            for neigh in sorted(adjacency.get(node, ())):
                if neigh not in hop:
                    hop[neigh] = level
                    nxt.append(neigh)
        frontier = nxt
    keep = sorted(hop)
    sub = Graph()
    remap: dict[int, int] = {}
    for old in keep:
        label, kind, attrs = graph.nodes[old]
        remap[old] = sub.add_node(label, kind, **{**attrs, "hop": hop[old]})
    for s, t, w, d in graph.edges:
        if s in remap and t in remap:
            sub.edges.append((remap[s], remap[t], w, d))
    return sub


def country_collab(corpus: Corpus, table: CountryTable = DEFAULT_TABLE) -> Graph:
    """Country graph: edge weight = documents with authors in both countries.

    Node attributes: doc_count, domestic (single-country docs), lat/lon
    from the embedded centroid table.
    """
    doc_counts: dict[str, int] = {}
    domestic: dict[str, int] = {}
    weights: dict[tuple[str, str], int] = {}
    for doc in corpus.documents:
        codes = doc.countries()
        for c in codes:
            doc_counts[c] = doc_counts.get(c, 0) + 1
        if len(codes) == 1:
            domestic[codes[0]] = domestic.get(codes[0], 0) + 1
        for x in range(len(codes)):
            for y in range(x + 1, len(codes)):
                pair = tuple(sorted((codes[x], codes[y])))
                weights[pair] = weights.get(pair, 0) + 1
    graph = Graph()
    index: dict[str, int] = {}
    for code in corpus.registry("country").entries:
        centroid = table.centroid(code.upper())
        attrs = {
            "doc_count": doc_counts.get(code, 0),
            "domestic": domestic.get(code, 0),
            "name": table.name_for(code.upper()) or code,
        }
        if centroid:
            attrs["lat"], attrs["lon"] = centroid
        index[code] = graph.add_node(code, "country", **attrs)
    for (a, b), w in sorted(weights.items()):
        graph.edges.append((index[a], index[b], float(w), False))
    return graph
