"""Chat client: retries, backoff, fingerprints, and the credential-leak scan."""

import random

import pytest

from reviewforge.llm import (
    AuthError,
    BACKOFF_CAP_S,
    ChatMessage,
    CompletionResult,
    ImagePart,
    MockProvider,
    ModelConfig,
    ProviderError,
    RateLimited,
    TextPart,
    TransientFailure,
    UnscriptedPrompt,
    backoff_delay,
    complete,
    fingerprint_messages,
)


def _messages(text="hello"):
    return [ChatMessage.text("user", text)]


def _config(**kw):
    return ModelConfig(**kw)


class TestChatMessage:
    def test_role_validation(self):
        with pytest.raises(ValueError):
            ChatMessage(role="wizard", parts=(TextPart("x"),))

    def test_parts_non_empty(self):
        with pytest.raises(ValueError):
            ChatMessage(role="user", parts=())

    def test_images_only_in_user_messages(self):
        with pytest.raises(ValueError):
            ChatMessage(role="system", parts=(ImagePart(b"123"),))
        ChatMessage(role="user", parts=(TextPart("x"), ImagePart(b"123")))


class TestFingerprint:
    def test_stable_for_same_messages(self):
        assert fingerprint_messages(_messages()) == fingerprint_messages(_messages())

    def test_changes_on_text_edit(self):
        assert fingerprint_messages(_messages("a")) != fingerprint_messages(_messages("a!"))

    def test_changes_on_image_bytes(self):
        m1 = [ChatMessage(role="user", parts=(TextPart("t"), ImagePart(b"\x89PNG1")))]
        m2 = [ChatMessage(role="user", parts=(TextPart("t"), ImagePart(b"\x89PNG2")))]
        assert fingerprint_messages(m1) != fingerprint_messages(m2)


class TestMockProvider:
    def test_scripted_reply(self):
        fp = fingerprint_messages(_messages())
        mock = MockProvider(script={fp: "canned"})
        result = complete(_messages(), _config(), mock)
        assert result.text == "canned"

    def test_unscripted_raises(self):
        mock = MockProvider(script={})
        with pytest.raises(UnscriptedPrompt):
            complete(_messages(), _config(), mock)

    def test_default_reply(self):
        mock = MockProvider(default_reply="fallback")
        assert complete(_messages(), _config(), mock).text == "fallback"

    def test_call_log_records_fingerprints(self):
        mock = MockProvider(default_reply="ok")
        complete(_messages("one"), _config(), mock)
        complete(_messages("two"), _config(), mock)
        assert len(mock.calls) == 2
        assert mock.calls[0].fingerprint != mock.calls[1].fingerprint


class TestRetries:
    def test_two_failures_then_success(self):
        mock = MockProvider(default_reply="ok", failures=["server", "timeout"])
        sleeps = []
        result = complete(_messages(), _config(max_retries=3), mock, sleeper=sleeps.append)
        assert result.text == "ok"
        assert len(mock.calls) == 3
        assert len(sleeps) == 2

    def test_rate_limit_exhaustion_counts_attempts(self):
        mock = MockProvider(default_reply="ok", failures=["rate"] * 10)
        sleeps = []
        with pytest.raises(RateLimited):
            complete(_messages(), _config(max_retries=2), mock, sleeper=sleeps.append)
        assert len(mock.calls) == 3  # max_retries + 1 attempts, exactly
        assert len(sleeps) == 2

    def test_server_exhaustion_raises_provider_error(self):
        mock = MockProvider(default_reply="ok", failures=["server"] * 5)
        with pytest.raises(ProviderError):
            complete(_messages(), _config(max_retries=1), mock, sleeper=lambda s: None)

    def test_zero_retries(self):
        mock = MockProvider(default_reply="ok", failures=["server"])
        with pytest.raises(ProviderError):
            complete(_messages(), _config(max_retries=0), mock, sleeper=lambda s: None)

    def test_auth_error_not_retried(self):
        class AuthFailingProvider:
            def __init__(self):
                self.calls = 0

            def complete_once(self, messages, config):
                self.calls += 1
                raise AuthError("credentials rejected")

        provider = AuthFailingProvider()
        with pytest.raises(AuthError):
            complete(_messages(), _config(max_retries=5), provider, sleeper=lambda s: None)
        assert provider.calls == 1


class TestBackoff:
    def test_non_decreasing_delays(self):
        for seed in range(25):
            rng = random.Random(seed)
            delays = [backoff_delay(i, rng) for i in range(10)]
            assert all(a <= b + 1e-9 for a, b in zip(delays, delays[1:]))

    def test_capped(self):
        rng = random.Random(0)
        assert backoff_delay(40, rng) <= BACKOFF_CAP_S

    def test_jitter_within_band(self):
        rng = random.Random(1)
        for _ in range(50):
            d = backoff_delay(0, rng)
            assert 0.8 <= d <= 1.2


class TestStatelessness:
    def test_equal_configs_behave_identically(self):
        fp = fingerprint_messages(_messages())
        replies = {fp: "same"}
        a = complete(_messages(), _config(), MockProvider(script=dict(replies)))
        b = complete(_messages(), _config(), MockProvider(script=dict(replies)))
        assert a.text == b.text


class TestCredentialHygiene:
    def test_no_secret_in_errors_or_config_repr(self, monkeypatch):
        secret = "sk-super-secret-credential-123"
        monkeypatch.setenv("REVIEWFORGE_API_KEY", secret)
        config = _config(max_retries=0)
        assert secret not in repr(config)
        mock = MockProvider(default_reply="ok", failures=["server"])
        try:
            complete(_messages(), config, mock, sleeper=lambda s: None)
        except ProviderError as exc:
            assert secret not in str(exc)

    def test_no_secret_in_wire_logs(self, monkeypatch, caplog):
        import logging

        secret = "sk-another-secret-456"
        monkeypatch.setenv("REVIEWFORGE_API_KEY", secret)
        with caplog.at_level(logging.DEBUG):
            mock = MockProvider(default_reply="ok")
            complete(_messages(), _config(), mock)
        assert secret not in caplog.text


class _StubHandler:
    """Tiny scripted HTTP server for provider wire-path tests."""


def _run_stub_server(script):
    import http.server
    import json as _json
    import threading

    responses = list(script)
    seen_bodies = []

    class Handler(http.server.BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", "0"))
            seen_bodies.append(self.rfile.read(length))
            status, body = responses.pop(0) if responses else (500, {})
            payload = _json.dumps(body).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, seen_bodies


class TestHttpProvider:
    def _config(self, server, **kw):
        port = server.server_address[1]
        return ModelConfig(endpoint=f"http://127.0.0.1:{port}/v1/chat/completions", **kw)

    def test_success_parses_text_and_usage(self):
        from reviewforge.llm import HttpProvider

        ok = (200, {
            "choices": [{"message": {"content": "fine review"}}],
            "usage": {"prompt_tokens": 11, "completion_tokens": 7},
        })
        server, bodies = _run_stub_server([ok])
        try:
            result = complete(_messages("ping"), self._config(server), HttpProvider())
            assert result.text == "fine review"
            assert (result.input_tokens, result.output_tokens) == (11, 7)
            assert b"ping" in bodies[0]
        finally:
            server.shutdown()

    def test_retries_5xx_then_succeeds(self):
        from reviewforge.llm import HttpProvider

        ok = (200, {"choices": [{"message": {"content": "ok"}}]})
        server, bodies = _run_stub_server([(503, {}), (503, {}), ok])
        try:
            result = complete(
                _messages(), self._config(server, max_retries=3), HttpProvider(),
                sleeper=lambda s: None,
            )
            assert result.text == "ok"
            assert len(bodies) == 3
        finally:
            server.shutdown()

    def test_auth_error_immediate(self):
        from reviewforge.llm import HttpProvider

        server, bodies = _run_stub_server([(401, {"error": "bad key"})])
        try:
            with pytest.raises(AuthError):
                complete(_messages(), self._config(server, max_retries=3), HttpProvider(),
                         sleeper=lambda s: None)
            assert len(bodies) == 1
        finally:
            server.shutdown()

    def test_context_overflow_maps_to_oversize(self):
        from reviewforge.llm import HttpProvider, OversizeInput

        overflow = (400, {"error": {"message": "This model's maximum context length is 8192 tokens"}})
        server, _ = _run_stub_server([overflow])
        try:
            with pytest.raises(OversizeInput):
                complete(_messages(), self._config(server), HttpProvider(), sleeper=lambda s: None)
        finally:
            server.shutdown()

    def test_image_part_becomes_data_url(self):
        from reviewforge.llm import HttpProvider

        ok = (200, {"choices": [{"message": {"content": "ok"}}]})
        server, bodies = _run_stub_server([ok])
        try:
            messages = [ChatMessage(role="user", parts=(TextPart("t"), ImagePart(b"\x89PNGxyz", "png")))]
            complete(messages, self._config(server), HttpProvider())
            assert b"data:image/png;base64," in bodies[0]
        finally:
            server.shutdown()

    def test_bearer_header_sent_but_never_logged(self, monkeypatch, caplog):
        import logging

        from reviewforge.llm import HttpProvider

        secret = "sk-wire-secret-789"
        monkeypatch.setenv("REVIEWFORGE_API_KEY", secret)
        ok = (200, {"choices": [{"message": {"content": "ok"}}]})

        import http.server
        import threading

        captured = {}

        class Handler(http.server.BaseHTTPRequestHandler):
            def do_POST(self):
                captured["auth"] = self.headers.get("Authorization")
                length = int(self.headers.get("Content-Length", "0"))
                self.rfile.read(length)
                import json as _json

                payload = _json.dumps(ok[1]).encode()
                self.send_response(200)
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

            def log_message(self, *args):
                pass

        server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        try:
            with caplog.at_level(logging.DEBUG):
                complete(_messages(), self._config(server), HttpProvider())
            assert captured["auth"] == f"Bearer {secret}"
            assert secret not in caplog.text
        finally:
            server.shutdown()


def test_completion_summarizer_uses_provider():
    from reviewforge.llm import CompletionSummarizer

    mock = MockProvider(default_reply="A tight two-sentence summary. It keeps the numbers.")
    summarizer = CompletionSummarizer(mock, ModelConfig(), max_sentences=2)
    out = summarizer.summarize(["First sentence here.", "Second sentence follows."])
    assert out == "A tight two-sentence summary. It keeps the numbers."
    assert len(mock.calls) == 1
