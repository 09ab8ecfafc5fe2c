"""HTTP API surface: paths, payloads, and error envelope."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from realcred.docmodel import Annotation, annotation_payload
from realcred.process import ProcessEngine
from realcred.store import Store
from realcred.service import create_app
from realcred.synthgen import ZERO_PROFILE, consistent_bundle


@pytest.fixture
def client(tmp_path):
    engine = ProcessEngine(Store(tmp_path / "svc.sqlite3"),
                           issuer_seed=b"\x05" * 32, document_root=tmp_path)
    app = create_app(engine=engine)
    with TestClient(app) as c:
        c.engine = engine
        yield c


def _stream_payload(gold, stream):
    entities = [Annotation(label=l, text=t.text, box=t.box) for t, l in stream.tokens]
    return {
        "doc_id": gold.doc_id,
        "kind": gold.kind.value,
        "token_stream": annotation_payload(gold.kind, gold.doc_id, entities),
    }


def _new_holder(client) -> str:
    response = client.post("/dids")
    assert response.status_code == 200
    return response.json()["uri"]


def _submit_all(client, process_id, seed=33):
    bundle = consistent_bundle(seed, ZERO_PROFILE)
    body = {"documents": [_stream_payload(g, s) for g, s in bundle]}
    response = client.post(f"/processes/{process_id}/documents", json=body)
    assert response.status_code == 200, response.text
    return response


class TestProcessEndpoints:
    def test_create_and_get(self, client):
        holder = _new_holder(client)
        created = client.post("/processes", json={"holder_did": holder})
        assert created.status_code == 201
        pid = created.json()["process_id"]
        fetched = client.get(f"/processes/{pid}")
        assert fetched.status_code == 200
        assert fetched.json()["state"] == "AwaitingDocuments"

    def test_unknown_process_error_envelope(self, client):
        response = client.get("/processes/nope")
        assert response.status_code == 404
        body = response.json()
        assert set(body) == {"error", "detail"}
        assert body["error"] == "UNKNOWN_PROCESS"

    def test_create_requires_registered_holder(self, client):
        response = client.post("/processes",
                               json={"holder_did": "did:local:0000000000000000"})
        assert response.status_code == 404
        assert response.json()["error"] == "UNKNOWN_DID"

    def test_submission_triggers_background_extraction(self, client):
        holder = _new_holder(client)
        pid = client.post("/processes", json={"holder_did": holder}).json()["process_id"]
        response = _submit_all(client, pid)
        assert response.json()["state"] == "Extracting"
        # TestClient runs background tasks before returning control
        state = client.get(f"/processes/{pid}").json()["state"]
        assert state == "PendingValidation"

    def test_token_stream_path_submission(self, client, tmp_path):
        from realcred.docmodel import write_annotation
        bundle = consistent_bundle(8, ZERO_PROFILE)
        gold, stream = bundle[0]
        entities = [Annotation(label=l, text=t.text, box=t.box)
                    for t, l in stream.tokens]
        path = tmp_path / "upload.json"
        write_annotation(path, gold.kind, gold.doc_id, entities)
        holder = _new_holder(client)
        pid = client.post("/processes", json={"holder_did": holder}).json()["process_id"]
        response = client.post(f"/processes/{pid}/documents", json={
            "doc_id": gold.doc_id, "kind": gold.kind.value,
            "token_stream_path": str(path),
        })
        assert response.status_code == 200
        extracted = client.get(f"/processes/{pid}").json()["extraction_results"]
        assert gold.doc_id in extracted

    def test_full_flow_with_validation_and_issue(self, client):
        holder = _new_holder(client)
        pid = client.post("/processes", json={"holder_did": holder}).json()["process_id"]
        _submit_all(client, pid)
        issuer_did = client.engine.issuer.did.uri
        validated = client.post(f"/processes/{pid}/validation", json={
            "issuer_did": issuer_did, "decision": "Approve", "corrections": [],
        })
        assert validated.status_code == 200
        assert validated.json()["state"] == "ReadyToIssue"
        offer = client.post(f"/processes/{pid}/issue", json={})
        assert offer.status_code == 200
        body = offer.json()
        assert set(body) == {"offer_id", "redeem_url"}
        redeemed = client.post(body["redeem_url"])
        assert redeemed.status_code == 200
        assert len(redeemed.json()["credentials"]) == 4
        again = client.post(body["redeem_url"])
        assert again.status_code == 410
        assert again.json()["error"] == "OFFER_CONSUMED"

    def test_validation_rejects_bad_decision(self, client):
        holder = _new_holder(client)
        pid = client.post("/processes", json={"holder_did": holder}).json()["process_id"]
        response = client.post(f"/processes/{pid}/validation", json={
            "issuer_did": "x", "decision": "Maybe",
        })
        assert response.status_code == 400


class TestVerificationEndpoints:
    def _issued_credentials(self, client):
        holder = _new_holder(client)
        pid = client.post("/processes", json={"holder_did": holder}).json()["process_id"]
        _submit_all(client, pid)
        issuer_did = client.engine.issuer.did.uri
        client.post(f"/processes/{pid}/validation",
                    json={"issuer_did": issuer_did, "decision": "Approve"})
        offer = client.post(f"/processes/{pid}/issue", json={}).json()
        credentials = client.post(offer["redeem_url"]).json()["credentials"]
        return pid, credentials

    def test_verify_endpoint(self, client):
        _, credentials = self._issued_credentials(client)
        response = client.post("/verify", json=credentials[0])
        assert response.status_code == 200
        assert response.json()["verdict"] == "Valid"

    def test_revoke_credential_endpoint(self, client):
        _, credentials = self._issued_credentials(client)
        target = credentials[0]
        revoked = client.post(f"/credentials/{target['id']}/revoke")
        assert revoked.status_code == 200
        verdict = client.post("/verify", json=target).json()["verdict"]
        assert verdict == "Revoked"
        other = client.post("/verify", json=credentials[1]).json()["verdict"]
        assert other == "Valid"

    def test_revoke_process_endpoint(self, client):
        pid, credentials = self._issued_credentials(client)
        response = client.post(f"/processes/{pid}/revoke")
        assert response.status_code == 200
        assert response.json()["state"] == "Revoked"
        for credential in credentials:
            assert client.post("/verify", json=credential).json()["verdict"] == "Revoked"

    def test_status_list_endpoint(self, client):
        _, credentials = self._issued_credentials(client)
        list_id = credentials[0]["credentialStatus"]["id"]
        response = client.get(f"/status-lists/{list_id}")
        assert response.status_code == 200
        subject = response.json()["credentialSubject"]
        assert {"encodedList", "statusPurpose", "statusSize"} <= set(subject)

    def test_did_lookup(self, client):
        holder = _new_holder(client)
        response = client.get(f"/dids/{holder}")
        assert response.status_code == 200
        assert response.json()["uri"] == holder
        missing = client.get("/dids/did:local:doesnotexist00")
        assert missing.status_code == 404

    def test_tampered_credential_reported_invalid(self, client):
        _, credentials = self._issued_credentials(client)
        forged = dict(credentials[0])
        forged["credentialSubject"] = dict(forged["credentialSubject"])
        forged["credentialSubject"]["holder"] = "did:local:attacker000000"
        response = client.post("/verify", json=forged)
        assert response.json()["verdict"] == "Invalid"
        assert response.json()["reason"] == "BAD_SIGNATURE"
