"""Question answering over serialized analysis results.

Any analysis output can be rendered to deterministic plain text (within a
character budget) and sent, together with a question, to a chat-completion
HTTP endpoint. The endpoint and model are configurable; the API key comes
from the environment and is never logged.
"""

from __future__ import annotations

import json
import os
import socket
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone

from .eda import EdaReport, Flow, LotkaFit, ProductivityMatrix, Series
from .errors import ConfigurationError, ServiceError
from .graphs import CitationChain, Graph
from .summarize import Summary
from .topics import TopicModel
from .vectorlab import Projection2D

API_KEY_ENV = "BIBX_LLM_API_KEY"
SYSTEM_MESSAGE = "You are analyzing bibliometric results."


@dataclass
class LlmConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4"
    temperature: float = 0.2
    max_tokens: int = 1024
    timeout_s: float = 60.0
    context_budget_chars: int = 6000
    api_key: str | None = field(default=None, repr=False)

    def resolved_key(self) -> str:
        key = self.api_key or os.environ.get(API_KEY_ENV)
        if not key:
            raise ConfigurationError(f"set {API_KEY_ENV}")
        return key


@dataclass
class Exchange:
    context: str
    question: str
    answer: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    timestamp: str = ""


def serialize_result(result, budget: int = 6000) -> str:
    """Deterministic tabular text for any analysis result, truncated to the
    budget by keeping the highest-weight rows."""
    header, rows = _tabulate(result)
    lines = [header] if header else []
    body = [_row_text(r) for r in rows]
    total = sum(len(l) + 1 for l in lines)
    kept = []
    omitted = 0
    for line in body:
        if total + len(line) + 1 <= budget:
            kept.append(line)
            total += len(line) + 1
        else:
            omitted += 1
    lines.extend(kept)
    if omitted:
        lines.append(f"… ({omitted} rows omitted)")
    return "\n".join(lines)


def _row_text(row) -> str:
    return "\t".join(str(v) for v in row)


def _tabulate(result):
    """(header, rows) for each analyzable result kind; rows come pre-sorted
    with the most important first so truncation keeps them."""
    if isinstance(result, EdaReport):
        return "", [(label + ":", value) for label, value in result.rows()]
    if isinstance(result, Series):
        if result.kind in ("documents_per_year", "citations_per_year",
                           "past_citations_per_year", "evolution"):
            points = sorted(result.points)  # year order
        else:
            points = result.points
        return f"{result.label} (category\tvalue)", points
    if isinstance(result, LotkaFit):
        rows = [(n, count) for n, count in result.observed]
        header = "publications\tauthors"
        if result.beta is not None:
            header += f"\t(fit beta={result.beta:.3f}, C={result.c:.3f})"
        return header, rows
    if isinstance(result, list) and result and isinstance(result[0], Flow):
        rows = [
            (f.left[1], f.right[1], f.weight)
            for f in sorted(result, key=lambda f: -f.weight)
        ]
        return "left\tright\tweight", rows
    if isinstance(result, list) and result and isinstance(result[0], Series):
        rows = []
        for series in result:
            for category, value in series.points:
                rows.append((series.label, category, value))
        return "entity\tyear\tcount", rows
    if isinstance(result, ProductivityMatrix):
        rows = []
        for author in result.authors:
            for year in result.years:
                ids = result.cells.get((author, year))
                if ids:
                    rows.append((author, year, len(ids)))
        return "author\tyear\tdocuments", rows
    if isinstance(result, Graph):
        rows = [
            (result.nodes[s][0], result.nodes[t][0], w)
            for s, t, w, _d in sorted(result.edges, key=lambda e: -e[2])
        ]
        return f"graph: {len(result.nodes)} nodes, {len(result.edges)} edges", rows
    if isinstance(result, CitationChain):
        rows = [("backward", c, t) for c, t in sorted(result.backward)]
        rows += [("forward", c, t) for c, t in sorted(result.forward)]
        return f"citation chains around document {result.focal}", rows
    if isinstance(result, TopicModel):
        rows = [
            (t.index, t.size, ", ".join(t.top_words), t.central_doc)
            for t in result.topics
        ]
        return "topic\tsize\twords\tcentral doc", rows
    if isinstance(result, Summary):
        return "summary sentences", [(s,) for s in result.sentences]
    if isinstance(result, Projection2D):
        rows = [
            (meta["doc_id"], f"{x:.4f}", f"{y:.4f}",
             int(result.cluster_labels[i]) if result.cluster_labels is not None else "")
            for i, ((x, y), meta) in enumerate(
                zip(result.coordinates, result.metadata)
            )
        ]
        return "doc\tx\ty\tcluster", rows
    if isinstance(result, dict):
        rows = sorted(result.items(), key=lambda kv: (-kv[1], kv[0]))
        return "term\tcount", rows
    raise ServiceError(f"result kind not serializable: {type(result).__name__}")


def ask(
    result,
    question: str,
    config: LlmConfig,
    session_log=None,
    _opener=None,
) -> Exchange:
    """Single chat-completion request over the serialized result.

    The key is resolved before any connection is made; a timeout is
    retried once. HTTP >= 400 and malformed responses raise ServiceError.
    """
    key = config.resolved_key()  # no socket is opened without a key
    context = serialize_result(result, budget=config.context_budget_chars)
    body = json.dumps(
        {
            "model": config.model,
            "temperature": config.temperature,
            "max_tokens": config.max_tokens,
            "messages": [
                {"role": "system", "content": SYSTEM_MESSAGE},
                {"role": "user", "content": f"{context}\n\n{question}"},
            ],
        }
    ).encode("utf-8")
    request = urllib.request.Request(
        config.endpoint,
        data=body,
        headers={
            "Content-Type": "application/json",
            "Authorization": f"Bearer {key}",
        },
        method="POST",
    )
    opener = _opener or urllib.request.urlopen
    raw = _send_with_retry(opener, request, config.timeout_s)
    try:
        payload = json.loads(raw)
        answer = payload["choices"][0]["message"]["content"]
        usage = payload.get("usage", {})
    except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
        raise ServiceError(f"malformed response JSON: {exc}")
    exchange = Exchange(
        context=context,
        question=question,
        answer=answer,
        prompt_tokens=int(usage.get("prompt_tokens", 0)),
        completion_tokens=int(usage.get("completion_tokens", 0)),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    if session_log is not None:
        with open(session_log, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(asdict(exchange), ensure_ascii=False) + "\n")
    return exchange


def _send_with_retry(opener, request, timeout: float) -> bytes:
    last_timeout = None
    for attempt in range(2):
        try:
            with opener(request, timeout=timeout) as response:
                return response.read()
        except urllib.error.HTTPError as exc:
            excerpt = exc.read()[:200].decode("utf-8", errors="replace")
            raise ServiceError(
                f"service returned HTTP {exc.code}: {excerpt}", status=exc.code
            )
        except (TimeoutError, socket.timeout) as exc:
            last_timeout = exc
            if attempt == 0:
                time.sleep(0.1)
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (TimeoutError, socket.timeout)):
                last_timeout = exc
                if attempt == 0:
                    time.sleep(0.1)
                    continue
            raise ServiceError(f"request failed: {exc.reason}")
    raise ServiceError(f"request timed out after retry: {last_timeout}")
