import json
import threading

import pytest
from fastapi.testclient import TestClient

from claimarg import qbaf as qbaf_mod
from claimarg.service import create_app

from conftest import make_qbaf


@pytest.fixture()
def client():
    return TestClient(create_app())


def flip_document():
    framework = make_qbaf(
        root_score=0.5,
        children=[("sup", "support", 0.6), ("att", "attack", 0.9)],
    )
    return qbaf_mod.to_dict(framework)


def open_session(client, semantics="df-quad"):
    response = client.post(
        "/sessions", json={"qbaf": flip_document(), "semantics": semantics}
    )
    assert response.status_code == 200
    return response.json()


class TestSemanticsEndpoint:
    def test_lists_both(self, client):
        assert client.get("/semantics").json() == {"semantics": ["df-quad", "qem"]}


class TestVerify:
    def test_argllm_returns_framework_and_session(self, client):
        response = client.post(
            "/verify", json={"claim": "The sky is blue.", "mock": True, "seed": 3}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["method"] == "argllm-0.5-d1"
        assert isinstance(body["label"], bool)
        assert body["label"] == (body["root_strength"] > 0.5)
        assert len(body["qbaf"]["arguments"]) == 3
        assert "df-quad" in body["qbaf"]["strengths"]
        assert body["polarity"][body["qbaf"]["root"]] == "root"
        assert set(body["polarity"].values()) == {"root", "pro", "con"}
        assert body["session_id"]

    def test_verify_is_deterministic_under_fixed_seed(self, client):
        payloads = []
        for _ in range(2):
            body = client.post(
                "/verify", json={"claim": "Water is wet.", "mock": True, "seed": 11}
            ).json()
            body.pop("session_id")
            payloads.append(body)
        assert payloads[0] == payloads[1]

    def test_missing_claim_is_400(self, client):
        assert client.post("/verify", json={"seed": 1}).status_code == 400
        assert client.post("/verify", json={"claim": "  "}).status_code == 400

    def test_unknown_method_is_400(self, client):
        response = client.post("/verify", json={"claim": "x", "method": "magic"})
        assert response.status_code == 400

    def test_bad_depth_is_400(self, client):
        response = client.post("/verify", json={"claim": "x", "depth": 0})
        assert response.status_code == 400

    def test_baseline_method_has_transcript_but_no_session(self, client):
        response = client.post(
            "/verify",
            json={"claim": "x", "method": "chain_of_thought", "mock": True},
        )
        assert response.status_code == 200
        body = response.json()
        assert "session_id" not in body
        assert "qbaf" not in body
        assert len(body["transcript"]) == 2


class TestSessions:
    def test_open_from_document(self, client):
        view = open_session(client)
        assert view["root_strength"] == pytest.approx(0.35)
        assert view["label"] is False
        assert view["history"] == []
        assert view["polarity"] == {"r": "root", "sup": "pro", "att": "con"}

    def test_invalid_document_is_400(self, client):
        doc = flip_document()
        doc["relations"].append({"source": "sup", "target": "att", "polarity": "attack"})
        response = client.post("/sessions", json={"qbaf": doc})
        assert response.status_code == 400
        assert "invalid framework" in response.json()["error"]

    def test_missing_framework_is_400(self, client):
        assert client.post("/sessions", json={}).status_code == 400

    def test_unknown_session_is_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/contest", json={}).status_code == 404

    def test_get_returns_current_view(self, client):
        session_id = open_session(client)["session_id"]
        view = client.get(f"/sessions/{session_id}").json()
        assert view["session_id"] == session_id
        assert view["qbaf"]["root"] == "r"


class TestContest:
    def test_edit_flips_verdict_and_reports_diff(self, client):
        session_id = open_session(client)["session_id"]
        response = client.post(
            f"/sessions/{session_id}/contest",
            json={"kind": "set_base_score", "target": "att", "new_score": 0.5},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["label"] is True
        assert body["root_strength"] == pytest.approx(0.55)
        diff = body["diff"]
        assert diff["flipped"] is True
        assert diff["predicted_direction"] == "nondecrease"
        assert len(body["history"]) == 1

    def test_unknown_target_is_422(self, client):
        session_id = open_session(client)["session_id"]
        response = client.post(
            f"/sessions/{session_id}/contest",
            json={"kind": "set_base_score", "target": "ghost", "new_score": 0.5},
        )
        assert response.status_code == 422

    def test_malformed_edit_is_422(self, client):
        session_id = open_session(client)["session_id"]
        response = client.post(
            f"/sessions/{session_id}/contest", json={"kind": "set_base_score"}
        )
        assert response.status_code == 422

    def test_failed_edit_leaves_session_unchanged(self, client):
        session_id = open_session(client)["session_id"]
        client.post(
            f"/sessions/{session_id}/contest",
            json={"kind": "set_base_score", "target": "att", "new_score": 2.0},
        )
        view = client.get(f"/sessions/{session_id}").json()
        assert view["history"] == []
        assert view["root_strength"] == pytest.approx(0.35)

    def test_add_and_remove_argument(self, client):
        session_id = open_session(client)["session_id"]
        add = client.post(
            f"/sessions/{session_id}/contest",
            json={
                "kind": "add_argument",
                "target": "rebut",
                "new_argument": {
                    "text": "a counter to the attacker",
                    "polarity": "attack",
                    "base_score": 0.8,
                    "parent": "att",
                },
            },
        )
        assert add.status_code == 200
        assert add.json()["diff"]["predicted_direction"] == "nondecrease"
        removed = client.post(
            f"/sessions/{session_id}/contest",
            json={"kind": "remove_argument", "target": "rebut"},
        )
        assert removed.status_code == 200
        assert removed.json()["root_strength"] == pytest.approx(0.35)
        assert len(removed.json()["history"]) == 2

    def test_concurrent_edits_both_land(self, client):
        session_id = open_session(client)["session_id"]
        edits = [
            {"kind": "set_base_score", "target": "att", "new_score": 0.4},
            {"kind": "set_base_score", "target": "sup", "new_score": 0.7},
        ]
        threads = [
            threading.Thread(
                target=lambda e=e: client.post(f"/sessions/{session_id}/contest", json=e)
            )
            for e in edits
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        view = client.get(f"/sessions/{session_id}").json()
        assert len(view["history"]) == 2
        assert view["root_strength"] == pytest.approx(0.5 + 0.5 * (0.7 - 0.4))


class TestSnapshots:
    def test_sessions_survive_restart(self, tmp_path):
        with TestClient(create_app(snapshot_dir=tmp_path)) as client:
            session_id = open_session(client)["session_id"]
            client.post(
                f"/sessions/{session_id}/contest",
                json={"kind": "set_base_score", "target": "att", "new_score": 0.5},
            )
        with TestClient(create_app(snapshot_dir=tmp_path)) as client:
            view = client.get(f"/sessions/{session_id}")
            assert view.status_code == 200
            assert view.json()["root_strength"] == pytest.approx(0.55)

    def test_corrupt_snapshot_skipped(self, tmp_path):
        (tmp_path / "junk.json").write_text("not json", "utf-8")
        with TestClient(create_app(snapshot_dir=tmp_path)) as client:
            assert client.get("/semantics").status_code == 200

    def test_snapshot_file_contents(self, tmp_path):
        with TestClient(create_app(snapshot_dir=tmp_path)) as client:
            session_id = open_session(client)["session_id"]
        doc = json.loads((tmp_path / f"{session_id}.json").read_text("utf-8"))
        assert doc["session_id"] == session_id
        assert doc["current_qbaf"]["root"] == "r"
