#!/usr/bin/env python3
"""Generate test fixtures from the backend package.

The frontend tests check byte- and verdict-level parity against the service
implementation; these fixtures freeze backend outputs (status list
credentials, signed credentials, canonical forms, the state enumeration) so
the suite runs without a live server. Regenerate with `npm run fixtures`.
"""

from __future__ import annotations

import json
import random
from datetime import timedelta
from pathlib import Path

from realcred.credential import (
    CredentialState,
    DidRegistry,
    Issuer,
    StatusList,
    b64url_encode,
    canonicalize,
    encode_status_list,
    keypair_from_seed,
    utcnow,
)
from realcred.docmodel import Annotation, DocumentKind, annotation_payload
from realcred.process import ProcessState
from realcred.synthgen import ZERO_PROFILE, consistent_bundle

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

STATES = [CredentialState.VALID, CredentialState.REVOKED, CredentialState.SUSPENDED]


def status_cases(n: int = 1000) -> dict:
    rng = random.Random(424242)
    registry = DidRegistry()
    issuer = Issuer(keypair_from_seed(b"\x21" * 32), registry)
    cases = []
    for i in range(n):
        capacity = rng.choice([16, 64, 256, 1024, 4096])
        slist = StatusList(f"fixture-{i}", capacity)
        for index in rng.sample(range(capacity), k=rng.randrange(0, min(capacity, 32))):
            slist.set(index, rng.choice(STATES[1:]))
        probe = rng.randrange(capacity)
        credential = encode_status_list(slist, issuer.keypair, registry)
        cases.append({
            "encodedList": credential.credential_subject["encodedList"],
            "statusSize": credential.credential_subject["statusSize"],
            "index": probe,
            "expected": slist.get(probe).name.title(),
        })
    return {"cases": cases}


def verify_cases() -> dict:
    registry = DidRegistry()
    issuer = Issuer(keypair_from_seed(b"\x22" * 32), registry)
    now = utcnow()

    valid = issuer.issue({"FIRST_NAME": "Ana", "NIF": "123456789"}, now=now,
                         types=("VerifiableCredential", "CitizenCardCredential"))
    revoked = issuer.issue({"FIRST_NAME": "Rui"}, now=now)
    issuer.revoke(revoked.id)
    suspended = issuer.issue({"FIRST_NAME": "Eva"}, now=now)
    issuer.suspend(suspended.id)
    expired = issuer.issue({"FIRST_NAME": "Old"}, validity_days=1, now=now)

    tampered_payload = valid.to_json_dict()
    tampered_payload["credentialSubject"] = dict(tampered_payload["credentialSubject"])
    tampered_payload["credentialSubject"]["FIRST_NAME"] = "Mallory"

    status_credential = issuer.status_list_credential(now=now)

    return {
        "issuer": {
            "uri": issuer.did.uri,
            "publicKey": b64url_encode(issuer.did.public_key),
        },
        "statusListCredential": status_credential.to_json_dict(),
        "now": (now + timedelta(days=30)).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "cases": [
            {"name": "valid", "credential": valid.to_json_dict(),
             "expected": "Valid"},
            {"name": "revoked", "credential": revoked.to_json_dict(),
             "expected": "Revoked"},
            {"name": "suspended", "credential": suspended.to_json_dict(),
             "expected": "Suspended"},
            {"name": "expired", "credential": expired.to_json_dict(),
             "expected": "Expired"},
            {"name": "tampered", "credential": tampered_payload,
             "expected": "Invalid", "failingCheck": "signature"},
        ],
    }


def canonical_cases() -> dict:
    samples = [
        {"b": 1, "a": 2},
        {"z": {"y": 1, "x": 2}, "a": [3, 2, 1]},
        {"name": "João", "morada": "R. Açores, 12", "n": 42},
        {"nested": {"déjà": "vu", "zz": ["à", "b"]}, "empty": {}, "t": True,
         "nil": None},
        {"statusSize": 2, "encodedList": "eJxLSU0FAAQNAZE", "version": 7},
    ]
    return {
        "cases": [
            {"value": sample, "canonical": canonicalize(sample).decode("utf-8")}
            for sample in samples
        ]
    }


def submission_bundle(seed: int = 808) -> dict:
    """A consistent zero-noise document trio plus a correction the issuer
    applies during review; used by the live-backend integration test."""
    documents = []
    cc_doc_id = None
    cc_doc_number = None
    for gold, stream in consistent_bundle(seed, ZERO_PROFILE):
        entities = [Annotation(label=label, text=token.text, box=token.box)
                    for token, label in stream.tokens]
        documents.append({
            "doc_id": gold.doc_id,
            "kind": gold.kind.value,
            "token_stream": annotation_payload(gold.kind, gold.doc_id, entities),
        })
        if gold.kind is DocumentKind.CITIZEN_CARD:
            cc_doc_id = gold.doc_id
            cc_doc_number = gold.values_for("DOC_NUMBER")[0]
    return {
        "documents": documents,
        "edit": {
            "doc_id": cc_doc_id,
            "label": "DOC_NUMBER",
            "old_value": cc_doc_number,
            "new_value": "77777777 7 QQ7",
        },
    }


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "status_cases.json").write_text(
        json.dumps(status_cases(), ensure_ascii=False) + "\n", encoding="utf-8")
    (OUT / "verify_cases.json").write_text(
        json.dumps(verify_cases(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    (OUT / "canonical_cases.json").write_text(
        json.dumps(canonical_cases(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    (OUT / "process_states.json").write_text(
        json.dumps({"states": [s.value for s in ProcessState]}) + "\n",
        encoding="utf-8")
    (OUT / "submission_bundle.json").write_text(
        json.dumps(submission_bundle(), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
