"""Acceptance suite: one test per shipped criterion.

Every test prints a single PASS/FAIL line so the suite doubles as a
release checklist. Tolerances and runtime budgets are pinned in the
assertions themselves.
"""

import itertools
import json
import random
import threading
import time
import xml.etree.ElementTree as ET
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import numpy as np
import pytest

from bibx import askllm, eda, fuse, graphs, ingest, render, textkit, topics, vectorlab
from bibx.errors import BibxError, ConfigurationError
from conftest import build_corpus, make_doc
from test_textkit import dense_tfidf_oracle
from test_vectorlab import jacobi_singular_values

DATA = Path(__file__).parent / "data"


def _verdict(num: int, ok: bool, description: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d}: {description}")


def test_criterion_01_report_ratios():
    start = time.perf_counter()
    got = (
        eda.average(5674, 184),
        eda.average(184, 121),
        eda.average(5674, 121),
        eda.average(5674, 495),
        eda.average(5674, 231),
    )
    elapsed = time.perf_counter() - start
    ok = got == (30.84, 1.52, 46.89, 11.46, 24.56) and elapsed < 0.001
    _verdict(1, ok, "report ratios 30.84/1.52/46.89/11.46/24.56, < 1 ms")
    assert ok, (got, elapsed)


def test_criterion_02_collaboration_index():
    got = eda.collaboration_index_from_counts(495, 43, 141)
    ok = got == 3.21
    _verdict(2, ok, "collaboration index (495-43)/141 = 3.21 exactly")
    assert ok, got


def test_criterion_03_docs_per_year():
    got = eda.average(184, 25)
    ok = got == 7.36
    _verdict(3, ok, "documents per year 184/25 = 7.36 exactly")
    assert ok, got


def test_criterion_04_merge_counts():
    def doc(key, origin):
        return make_doc(
            title=f"Merge fixture article {key} with a long stable title",
            doi=f"10.1234/{key}",
            origin=origin,
        )

    first = [doc(f"a{i:03d}", "scopus") for i in range(234)]
    second = [doc(f"a{i:03d}", "wos") for i in range(176)] + [
        doc(f"b{i:03d}", "wos") for i in range(30)
    ]
    third = [doc(f"a{i:03d}", "pubmed") for i in range(9)] + [
        doc("c000", "pubmed")
    ]
    start = time.perf_counter()
    corpus = fuse.merge(
        fuse.MergePlan(
            datasets=[(first, "scopus"), (second, "wos"), (third, "pubmed")]
        )
    )
    elapsed = time.perf_counter() - start
    ok = len(corpus.documents) == 265 and elapsed < 1.0
    _verdict(4, ok, "234/206/10 inputs with 176+9 overlaps merge to 265, < 1 s")
    assert ok, (len(corpus.documents), elapsed)


def test_criterion_05_shared_reference_weights():
    labels = [92, 97, 128, 123, 122, 116]
    pools = {
        name: [f"Coupling pool {name} item {j:02d} shared bibliography entry"
               for j in range(count)]
        for name, count in (
            ("AB", 14), ("AC", 10), ("BC", 20), ("DE", 26), ("EF", 13)
        )
    }
    ref_sets = [
        pools["AB"] + pools["AC"],          # 92
        pools["AB"] + pools["BC"],          # 97
        pools["AC"] + pools["BC"],          # 128
        pools["DE"],                        # 123
        pools["DE"] + pools["EF"],          # 122
        pools["EF"],                        # 116
    ]
    corpus = build_corpus(
        [
            make_doc(
                title=f"Coupling fixture primary document number {label}",
                authors=[f"Writer{i}, W."],
                references=refs,
            )
            for i, (label, refs) in enumerate(zip(labels, ref_sets))
        ]
    )
    fuse.match_references(corpus)
    start = time.perf_counter()
    graph = graphs.shared_reference_graph(corpus, min_shared=10)
    elapsed = time.perf_counter() - start

    by_label = {}
    for s, t, w, _d in graph.edges:
        a = labels[int(graph.nodes[s][0])]
        b = labels[int(graph.nodes[t][0])]
        by_label[tuple(sorted((a, b)))] = w
    expected = {
        (92, 97): 14.0, (92, 128): 10.0, (97, 128): 20.0,
        (122, 123): 26.0, (116, 122): 13.0,
    }
    components = {}
    for node_label, _kind, attrs in graph.nodes:
        components.setdefault(attrs["component"], set()).add(
            labels[int(node_label)]
        )
    ok = (
        by_label == expected
        and {frozenset(c) for c in components.values()}
        == {frozenset({116, 122, 123}), frozenset({92, 97, 128})}
        and elapsed < 1.0
    )
    _verdict(5, ok, "shared-ref weights 14/10/20/26/13 and two 3-components")
    assert ok, (by_label, components, elapsed)


def test_criterion_06_citation_history_chains():
    labels = [97, 118, 96, 128, 66, 38, 23, 26, 999]
    cites = {97: [118, 96, 128], 96: [128], 66: [97], 38: [66],
             23: [66], 26: [38]}
    docs = []
    for label in labels:
        refs = [
            f"Earlier study n{c:03d} (2015) doi:10.9999/n{c:03d}"
            for c in cites.get(label, [])
        ]
        docs.append(
            make_doc(
                title=f"History fixture chained document number {label}",
                authors=[f"Chain{label}, C."],
                doi=f"10.9999/n{label:03d}",
                references=refs,
            )
        )
    corpus = build_corpus(docs)
    fuse.match_references(corpus)
    chain = graphs.citation_history(corpus, labels.index(97))

    def named(edges):
        return {(labels[a], labels[b]) for a, b in edges}

    backward = named(chain.backward)
    forward = named(chain.forward)
    ok = backward == {(97, 118), (97, 96), (97, 128), (96, 128)} and forward == {
        (66, 97), (38, 66), (23, 66), (26, 38)
    }
    _verdict(6, ok, "citation chains around 97 match the wired fixture exactly")
    assert ok, (backward, forward)


def test_criterion_07_ego_network_sizes():
    corpus = build_corpus(
        [
            make_doc(title="Ego fixture paper one", authors=["Ego, S.", "Aa, A.", "Bb, B."]),
            make_doc(title="Ego fixture paper two", authors=["Ego, S.", "Cc, C."]),
            make_doc(title="Ego fixture paper three", authors=["Ego, S.", "Dd, D."]),
            make_doc(title="Ego fixture paper four", authors=["Aa, A.", "Ee, E."]),
            make_doc(title="Ego fixture paper five", authors=["Bb, B.", "Ff, F."]),
        ]
    )
    graph = graphs.coauthorship(corpus)
    one_hop = graphs.ego(graph, "Ego, S.", depth=1)
    two_hop = graphs.ego(graph, "Ego, S.", depth=2)
    neighbors = [l for l, _k, a in one_hop.nodes if a["hop"] == 1]
    frontier = [l for l, _k, a in two_hop.nodes if a["hop"] == 2]
    ok = len(neighbors) == 4 and sorted(frontier) == ["Ee, E.", "Ff, F."]
    _verdict(7, ok, "ego view: 4 depth-1 collaborators, depth-2 frontier of 2")
    assert ok, (neighbors, frontier)


def test_criterion_08_h_index_oracle():
    def brute(counts):
        return max(
            (h for h in range(len(counts) + 1)
             if sum(1 for c in counts if c >= h) >= h),
            default=0,
        )

    rng = random.Random(42)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(1000):
        counts = [rng.randint(0, 200) for _ in range(rng.randint(0, 60))]
        if eda.h_index(counts) != brute(counts):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 1.0
    _verdict(8, ok, "h-index equals brute force on 1000 random vectors, < 1 s")
    assert ok, (mismatches, elapsed)


def test_criterion_09_tsvd_oracle():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    monotone = True
    for trial in range(50):
        n = int(rng.integers(2, 21))
        m = int(rng.integers(2, 21))
        a = rng.normal(size=(n, m))
        k = int(rng.integers(1, min(n, m) + 1))
        fact = vectorlab.tsvd(a, k, seed=trial)
        oracle = jacobi_singular_values(a)[:k]
        worst = max(worst, float(np.max(np.abs(fact.s - oracle))))
        monotone = monotone and bool(
            np.all(fact.s[:-1] >= fact.s[1:] - 1e-12)
        )
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and monotone and elapsed < 10.0
    _verdict(9, ok, "TSVD matches Jacobi oracle to 1e-6 on 50 matrices, < 10 s")
    assert ok, (worst, monotone, elapsed)


def test_criterion_10_kmeans_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(1)

    x = rng.normal(size=(60, 3))
    clustering = vectorlab.kmeans(x, 4, seed=1)
    history = clustering.inertia_history
    non_increasing = all(
        history[i + 1] <= history[i] + 1e-9 for i in range(len(history) - 1)
    )

    single = vectorlab.kmeans(x, 1, seed=0)
    closed_form = (
        np.allclose(single.centroids[0], x.mean(axis=0), atol=1e-12)
        and single.inertia == pytest.approx(
            float(np.sum((x - x.mean(axis=0)) ** 2)), rel=1e-12
        )
    )

    blob_a = rng.normal(loc=0.0, scale=0.3, size=(25, 2))
    blob_b = rng.normal(loc=8.0, scale=0.3, size=(25, 2))
    blobs = np.vstack([blob_a, blob_b])
    separated = True
    for seed in range(20):
        labels = vectorlab.kmeans(blobs, 2, seed=seed).labels
        separated = separated and (
            len(set(labels[:25])) == 1
            and len(set(labels[25:])) == 1
            and labels[0] != labels[-1]
        )
    elapsed = time.perf_counter() - start
    ok = non_increasing and closed_form and separated and elapsed < 5.0
    _verdict(10, ok, "k-means: monotone inertia, k=1 closed form, 20-seed blobs")
    assert ok, (non_increasing, closed_form, separated, elapsed)


TOPIC_A = ["neural", "network", "gradient", "training", "layers",
           "attention", "encoder", "embedding"]
TOPIC_B = ["citation", "journal", "index", "impact", "metrics",
           "bradford", "lotka", "scientometrics"]


def test_criterion_11_topic_partition():
    docs = [make_doc(title=f"TA{i}", abstract=" ".join(TOPIC_A * 2))
            for i in range(153)]
    docs += [make_doc(title=f"TB{i}", abstract=" ".join(TOPIC_B * 2))
             for i in range(31)]
    corpus = build_corpus(docs)
    start = time.perf_counter()
    matrix = textkit.tfidf(corpus, "abstract")
    model = topics.fit_topics(corpus, matrix.to_dense(), k=2, seed=42)
    elapsed = time.perf_counter() - start
    labels = list(model.assignment)
    partition = len(set(labels[:153])) == 1 and len(set(labels[153:])) == 1 \
        and labels[0] != labels[-1]
    sizes = sorted(t.size for t in model.topics) == [31, 153]
    a_topic = model.topics[labels[0]]
    b_topic = model.topics[labels[-1]]
    purity = (
        not set(a_topic.top_words) & set(TOPIC_B)
        and not set(b_topic.top_words) & set(TOPIC_A)
    )
    ok = partition and sizes and purity and elapsed < 5.0
    _verdict(11, ok, "two-group 153/31 topics recovered with pure top words")
    assert ok, (partition, sizes, purity, elapsed)


def test_criterion_12_tfidf_oracle():
    fixtures = [
        [["alpha", "beta"], ["beta", "gamma"], ["alpha", "alpha", "delta"]],
        [["one"], ["one"], ["one", "two"]],
        [["solo"]],
        [["a1", "b2", "c3"], [], ["c3", "c3", "d4"], ["a1"]],
        [["x9"] * 10 + ["y8"], ["y8", "z7"]],
        [[f"w{i}" for i in range(30)] for _ in range(10)],
        [["p", "q"] * 5, ["q"], ["p", "r"], ["r", "r", "q"], ["s"]],
    ]
    worst = 0.0
    norms_ok = True
    for token_lists in fixtures:
        streams = [textkit.TokenStream(list(t)) for t in token_lists]
        matrix = textkit.tfidf_from_streams(streams)
        vocab, expected = dense_tfidf_oracle(token_lists)
        assert matrix.vocabulary == vocab
        dense = matrix.to_dense()
        worst = max(worst, float(np.max(np.abs(dense - expected))))
        for i, tokens in enumerate(token_lists):
            norm = float(np.linalg.norm(dense[i]))
            if tokens:
                norms_ok = norms_ok and abs(norm - 1.0) <= 1e-12
            else:
                norms_ok = norms_ok and norm == 0.0
    ok = worst <= 1e-12 and norms_ok
    _verdict(12, ok, "TF-IDF equals dense oracle to 1e-12 with unit rows")
    assert ok, (worst, norms_ok)


def test_criterion_13_render_invariants():
    values = [13, 7, 5, 3, 2, 1]
    rect = (0.0, 0.0, 600.0, 400.0)
    cells = render.layout_treemap(values, rect)
    area_ok = all(
        abs(w * h - v / sum(values) * 600 * 400) <= 0.001 * (v / sum(values) * 600 * 400)
        for v, (_x, _y, w, h) in zip(values, cells)
    )

    freqs = {f"word{i:02d}": 40 - i for i in range(18)}
    overlap_free = True
    for seed in range(20):
        placements, _ = render.layout_wordcloud(freqs, (0, 0, 480, 320), seed=seed)
        boxes = [
            (x - render.text_width(wd, s) / 2, y - 0.85 * s,
             render.text_width(wd, s), render.text_height(s))
            for wd, s, x, y in placements
        ]
        for (ax, ay, aw, ah), (bx, by, bw, bh) in itertools.combinations(boxes, 2):
            if not (ax + aw <= bx or bx + bw <= ax or ay + ah <= by or by + bh <= ay):
                overlap_free = False

    flows = [
        eda.Flow(("kw", "networks"), ("src", "A"), 8),
        eda.Flow(("kw", "networks"), ("src", "B"), 3),
        eda.Flow(("kw", "impact"), ("src", "A"), 5),
    ]
    left, right, ribbons = render.layout_sankey(flows, (0, 0, 500, 300))
    sums_left = {}
    sums_right = {}
    for flow, _xl, _yl, _xr, _yr, t in ribbons:
        sums_left[flow.left[1]] = sums_left.get(flow.left[1], 0.0) + t
        sums_right[flow.right[1]] = sums_right.get(flow.right[1], 0.0) + t
    sankey_ok = all(sums_left[l] == h for l, _x, _y, _w, h in left) and all(
        sums_right[l] == h for l, _x, _y, _w, h in right
    )

    view = render.ViewSpec(width=200, height=100, title="demo view")
    view.add("rect", x=10, y=10, w=50, h=30, fill="#4c78a8",
             meta={"label": "decision making", "value": 122})
    view.add("circle", cx=120, cy=40, r=8, fill="#e45756",
             stroke="#222222", opacity=0.8)
    view.add("line", x1=0, y1=90, x2=200, y2=90, stroke="#555555")
    view.add("path", d="M10 80 C 40 10, 65 10, 95 80",
             stroke="#54a24b", opacity=0.5)
    view.add("text", x=100, y=95, content="label & <sub>", size=11,
             anchor="middle")
    svg = render.emit_svg(view)
    ET.fromstring(svg)  # must be well-formed
    golden_ok = svg == (DATA / "golden_demo.svg").read_bytes()

    ok = area_ok and overlap_free and sankey_ok and golden_ok
    _verdict(13, ok, "treemap/wordcloud/sankey invariants and golden bytes")
    assert ok, (area_ok, overlap_free, sankey_ok, golden_ok)


def test_criterion_14_parser_fuzzing():
    bib = (DATA / "scopus.bib").read_bytes()
    med = (DATA / "pubmed.txt").read_bytes()
    rng = random.Random(1234)
    start = time.perf_counter()
    crashes = 0
    for base, parse in ((bib, lambda d: ingest.parse_bibtex(d, "scopus")),
                        (med, ingest.parse_pubmed)):
        data = bytearray(base)
        for _ in range(50_000):
            pos = rng.randrange(len(data))
            old = data[pos]
            data[pos] = rng.randrange(256)
            try:
                parse(bytes(data))
            except BibxError:
                pass  # positioned errors are the contract
            except Exception:
                crashes += 1
            if rng.random() < 0.7:
                data[pos] = old  # usually revert so inputs stay near-valid
    elapsed = time.perf_counter() - start
    ok = crashes == 0 and elapsed < 60.0
    _verdict(14, ok, "100k byte mutations: no parser crash, < 60 s")
    assert ok, (crashes, elapsed)


class _StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        self.server.request_count += 1
        length = int(self.headers["Content-Length"])
        self.rfile.read(length)
        payload = json.dumps(
            {"choices": [{"message": {"content": "stub answer 7291"}}]}
        ).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


def test_criterion_15_askllm_stub(monkeypatch):
    corpus = build_corpus(
        [make_doc(title="Ask fixture", abstract="citation counts", times_cited=3)]
    )
    report = eda.build_report(corpus)
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    server.request_count = 0
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        config = askllm.LlmConfig(
            endpoint=f"http://127.0.0.1:{server.server_address[1]}/v1/chat/completions",
            api_key="stub-key",
        )
        exchange = askllm.ask(
            report, "Give me insights about the given information", config
        )
        verbatim = exchange.answer == "stub answer 7291"
        served = server.request_count == 1

        monkeypatch.delenv(askllm.API_KEY_ENV, raising=False)
        config_no_key = askllm.LlmConfig(endpoint=config.endpoint, api_key=None)
        raised = False
        try:
            askllm.ask(report, "Give me insights about the given information",
                       config_no_key)
        except ConfigurationError:
            raised = True
        no_socket = server.request_count == 1
    finally:
        server.shutdown()
        thread.join()
    ok = verbatim and served and raised and no_socket
    _verdict(15, ok, "stub answer verbatim; keyless call opens no socket")
    assert ok, (verbatim, served, raised, no_socket)
