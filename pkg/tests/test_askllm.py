import io
import json
import socket
import threading
import urllib.error
import urllib.request
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from bibx import askllm, eda
from bibx.askllm import Exchange, LlmConfig
from bibx.errors import ConfigurationError, ServiceError

from conftest import build_corpus, make_doc


def small_corpus():
    return build_corpus(
        [
            make_doc(
                title="A",
                year=2020,
                authors=["Smith, J."],
                source="Journal One",
                abstract="citation networks grow",
                times_cited=5,
            ),
            make_doc(
                title="B",
                year=2021,
                authors=["Doe, J.", "Smith, J."],
                source="Journal Two",
                abstract="citation counts vary",
                times_cited=3,
            ),
        ]
    )


class TestSerializeResult:
    def test_report_serializes_all_rows(self):
        report = eda.build_report(small_corpus())
        text = askllm.serialize_result(report)
        assert "Documents:" in text
        assert "\t" in text

    def test_budget_truncates_with_footer(self):
        freqs = {f"term{i:03d}": 100 - i for i in range(100)}
        text = askllm.serialize_result(freqs, budget=200)
        assert "rows omitted)" in text
        assert len(text) <= 200 + 40  # footer may exceed by its own length

    def test_truncation_keeps_highest_weight_rows(self):
        freqs = {f"term{i:03d}": 100 - i for i in range(100)}
        text = askllm.serialize_result(freqs, budget=200)
        assert "term000\t100" in text
        assert "term099\t1" not in text

    def test_deterministic(self):
        report = eda.build_report(small_corpus())
        assert askllm.serialize_result(report) == askllm.serialize_result(report)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ServiceError):
            askllm.serialize_result(object())


class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        self.server.request_count += 1
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        self.server.last_request = {
            "body": body,
            "authorization": self.headers.get("Authorization"),
        }
        question = body["messages"][-1]["content"].rsplit("\n\n", 1)[-1]
        payload = json.dumps(
            {
                "choices": [
                    {"message": {"content": f"Echo: {question}"}}
                ],
                "usage": {"prompt_tokens": 12, "completion_tokens": 7},
            }
        ).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _Handler)
    server.request_count = 0
    server.last_request = None
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    thread.join()


def stub_config(server, **overrides):
    defaults = dict(
        endpoint=f"http://127.0.0.1:{server.server_address[1]}/v1/chat/completions",
        api_key="test-key-123",
        timeout_s=5.0,
    )
    defaults.update(overrides)
    return LlmConfig(**defaults)


class TestAsk:
    def test_round_trip_answer_verbatim(self, stub_server):
        report = eda.build_report(small_corpus())
        exchange = askllm.ask(
            report, "How many documents?", stub_config(stub_server)
        )
        assert exchange.answer == "Echo: How many documents?"
        assert exchange.question == "How many documents?"
        assert exchange.prompt_tokens == 12
        assert exchange.completion_tokens == 7
        assert stub_server.request_count == 1

    def test_request_carries_context_and_key(self, stub_server):
        report = eda.build_report(small_corpus())
        config = stub_config(stub_server)
        askllm.ask(report, "Q?", config)
        sent = stub_server.last_request
        assert sent["authorization"] == "Bearer test-key-123"
        user_message = sent["body"]["messages"][-1]["content"]
        assert "Documents:" in user_message
        assert sent["body"]["model"] == config.model

    def test_missing_key_raises_before_any_connection(
        self, stub_server, monkeypatch
    ):
        monkeypatch.delenv(askllm.API_KEY_ENV, raising=False)
        config = stub_config(stub_server, api_key=None)
        report = eda.build_report(small_corpus())
        with pytest.raises(ConfigurationError, match="BIBX_LLM_API_KEY"):
            askllm.ask(report, "Q?", config)
        assert stub_server.request_count == 0

    def test_key_from_environment(self, stub_server, monkeypatch):
        monkeypatch.setenv(askllm.API_KEY_ENV, "env-key")
        config = stub_config(stub_server, api_key=None)
        askllm.ask(eda.build_report(small_corpus()), "Q?", config)
        assert stub_server.last_request["authorization"] == "Bearer env-key"

    def test_timeout_retried_once_then_succeeds(self):
        calls = []

        class _Response(io.BytesIO):
            def __enter__(self):
                return self

            def __exit__(self, *exc):
                return False

        def opener(request, timeout):
            calls.append(timeout)
            if len(calls) == 1:
                raise socket.timeout("timed out")
            return _Response(
                json.dumps(
                    {"choices": [{"message": {"content": "late answer"}}]}
                ).encode("utf-8")
            )

        config = LlmConfig(api_key="k", timeout_s=1.0)
        exchange = askllm.ask(
            eda.build_report(small_corpus()), "Q?", config, _opener=opener
        )
        assert exchange.answer == "late answer"
        assert len(calls) == 2

    def test_timeout_twice_raises_service_error(self):
        def opener(request, timeout):
            raise socket.timeout("timed out")

        config = LlmConfig(api_key="k", timeout_s=1.0)
        with pytest.raises(ServiceError, match="timed out after retry"):
            askllm.ask(
                eda.build_report(small_corpus()), "Q?", config, _opener=opener
            )

    def test_http_error_maps_to_service_error_with_status(self):
        def opener(request, timeout):
            raise urllib.error.HTTPError(
                request.full_url, 429, "Too Many Requests",
                {}, io.BytesIO(b'{"error": "rate limited"}'),
            )

        config = LlmConfig(api_key="k")
        with pytest.raises(ServiceError, match="HTTP 429") as excinfo:
            askllm.ask(
                eda.build_report(small_corpus()), "Q?", config, _opener=opener
            )
        assert excinfo.value.status == 429

    def test_malformed_response_raises_service_error(self):
        class _Response(io.BytesIO):
            def __enter__(self):
                return self

            def __exit__(self, *exc):
                return False

        def opener(request, timeout):
            return _Response(b"{not json")

        config = LlmConfig(api_key="k")
        with pytest.raises(ServiceError, match="malformed"):
            askllm.ask(
                eda.build_report(small_corpus()), "Q?", config, _opener=opener
            )


class TestSessionLog:
    def test_exchanges_appended_as_jsonl(self, stub_server, tmp_path):
        log = tmp_path / "session.jsonl"
        report = eda.build_report(small_corpus())
        config = stub_config(stub_server)
        askllm.ask(report, "first?", config, session_log=log)
        askllm.ask(report, "second?", config, session_log=log)
        lines = log.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        first = json.loads(lines[0])
        assert first["question"] == "first?"
        assert first["answer"] == "Echo: first?"
        assert first["timestamp"]

    def test_api_key_never_written_to_log(self, stub_server, tmp_path):
        log = tmp_path / "session.jsonl"
        config = stub_config(stub_server, api_key="sekrit-key-value")
        askllm.ask(
            eda.build_report(small_corpus()), "Q?", config, session_log=log
        )
        assert "sekrit-key-value" not in log.read_text(encoding="utf-8")

    def test_api_key_hidden_from_repr(self):
        config = LlmConfig(api_key="sekrit-key-value")
        assert "sekrit-key-value" not in repr(config)
