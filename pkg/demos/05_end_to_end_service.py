"""
Full workflow through the HTTP service
======================================

Holder submits three documents, the service extracts and reconciles them,
the issuer approves with a correction, credentials are issued and redeemed
through a one-shot offer, then the whole process is revoked.

Uses the in-process test client; point the same calls at a running
`credsvc` instance to drive a live deployment.
"""

from fastapi.testclient import TestClient

from realcred.docmodel import Annotation, annotation_payload
from realcred.process import ProcessEngine
from realcred.service import create_app
from realcred.store import Store
from realcred.synthgen import ZERO_PROFILE, consistent_bundle

engine = ProcessEngine(Store(":memory:"))
client = TestClient(create_app(engine=engine))
issuer_did = engine.issuer.did.uri

# Holder onboarding: a DID and a fresh process.
holder = client.post("/dids").json()["uri"]
process = client.post("/processes", json={"holder_did": holder}).json()
pid = process["process_id"]
print("process", pid, "state:", process["state"])

# Submit one persona's Citizen Card, Energy Certificate, and Property Record.
documents = []
for gold, stream in consistent_bundle(seed=7, profile=ZERO_PROFILE):
    entities = [Annotation(label=l, text=t.text, box=t.box) for t, l in stream.tokens]
    documents.append({
        "doc_id": gold.doc_id,
        "kind": gold.kind.value,
        "token_stream": annotation_payload(gold.kind, gold.doc_id, entities),
    })
client.post(f"/processes/{pid}/documents", json={"documents": documents})
print("after extraction:", client.get(f"/processes/{pid}").json()["state"])

# Issuer reviews, fixes the document number, and approves.
state = client.get(f"/processes/{pid}").json()
cc_doc = documents[0]["doc_id"]
old = state["extraction_results"][cc_doc]["fields"]["DOC_NUMBER"][0]["value"]
validated = client.post(f"/processes/{pid}/validation", json={
    "issuer_did": issuer_did,
    "decision": "Approve",
    "corrections": [{"doc_id": cc_doc, "label": "DOC_NUMBER",
                     "old_value": old, "new_value": "99999999 9 XX9"}],
}).json()
print("after validation:", validated["state"],
      "consistent:", validated["report"]["consistent"])

# Issue and redeem: the offer is single-use.
offer = client.post(f"/processes/{pid}/issue", json={}).json()
credentials = client.post(offer["redeem_url"]).json()["credentials"]
print("redeemed", len(credentials), "credentials:",
      [c["type"][1] for c in credentials])
print("second redemption:", client.post(offer["redeem_url"]).json()["error"])

# Everything verifies, including the corrected claim.
for credential in credentials:
    verdict = client.post("/verify", json=credential).json()["verdict"]
    subject = credential["credentialSubject"]
    if subject.get("docId") == cc_doc:
        print("corrected claim in credential:", subject["DOC_NUMBER"])
    assert verdict == "Valid"

# Revoke the whole process; every credential now reports Revoked.
client.post(f"/processes/{pid}/revoke")
verdicts = {client.post("/verify", json=c).json()["verdict"] for c in credentials}
print("after process revocation:", verdicts)
