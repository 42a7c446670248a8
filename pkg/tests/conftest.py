import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from claimarg.qbaf import Argument, Qbaf, Relation


def make_qbaf(root_score=0.5, children=(), root="r"):
    """Small builder: children is a sequence of (id, polarity, score) tuples
    attached directly to the root."""
    arguments = [Argument(root, "the claim", root_score)]
    relations = []
    for child_id, polarity, score in children:
        arguments.append(Argument(child_id, f"argument {child_id}", score))
        relations.append(Relation(child_id, root, polarity))
    return Qbaf(arguments, relations, root)


class ScriptedBackend:
    """Backend returning canned responses, optionally keyed by purpose."""

    def __init__(self, responses=None, by_purpose=None):
        self.responses = list(responses or [])
        self.by_purpose = {k: list(v) for k, v in (by_purpose or {}).items()}
        self.prompts = []

    def complete(self, prompt, purpose):
        self.prompts.append((purpose, prompt))
        if purpose in self.by_purpose and self.by_purpose[purpose]:
            return self.by_purpose[purpose].pop(0)
        if not self.responses:
            raise AssertionError(f"no scripted response left for {purpose}")
        return self.responses.pop(0)


class _StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        server = self.server
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length)) if length else {}
        server.requests.append(body)
        if server.fail_next > 0:
            server.fail_next -= 1
            self.send_response(500)
            self.end_headers()
            self.wfile.write(b"boom")
            return
        prompt = ""
        if body.get("messages"):
            prompt = body["messages"][0].get("content", "")
        if "0 to 100" in prompt:
            content = "60"
        elif "true or false" in prompt:
            content = "true"
        else:
            content = "A plausible stub argument about the statement."
        payload = json.dumps({"choices": [{"message": {"content": content}}]})
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(payload.encode("utf-8"))

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    """Local chat-completions stub; records request bodies and can be told
    to fail the next N requests."""
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    server.requests = []
    server.fail_next = 0
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    server.url = f"http://127.0.0.1:{server.server_port}/v1/chat/completions"
    yield server
    server.shutdown()
    thread.join(timeout=5)
