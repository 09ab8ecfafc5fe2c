"""
Verifiable credentials and status-list revocation
=================================================

Sign credentials over canonical JSON, verify them offline against a DID
registry snapshot plus one published status list, and manage revocation and
suspension through the 2-bit-per-entry bitstring.
"""

import json

from realcred import (
    CredentialState,
    DidRegistry,
    Issuer,
    StatusList,
    canonicalize,
    decode_status_list,
    verify_credential,
)
from realcred.credential import generate_keypair, verify_bytes

# Canonical form: sorted keys, no whitespace, deterministic bytes.
print(canonicalize({"b": 1, "a": {"z": 2, "y": 3}}).decode())

registry = DidRegistry()
issuer = Issuer(generate_keypair(), registry)
print("issuer DID:", issuer.did.uri)

vc = issuer.issue({"FIRST_NAME": "Ana", "LAST_NAME": "Silva", "NIF": "123456789"},
                  types=("VerifiableCredential", "CitizenCardCredential"))
print(json.dumps(vc.to_json_dict(), indent=2)[:400], "...")

# Verification needs only the registry snapshot and one status list fetch.
resolver = lambda list_id: issuer.status_list_credential()
print("fresh credential:", verify_credential(vc, registry, resolver).verdict.value)

# Any single-byte change to the canonical form breaks the signature.
canonical = bytearray(vc.canonical_bytes())
canonical[10] ^= 0x01
print("tampered byte verifies:",
      verify_bytes(issuer.keypair.public, vc.proof.signature, bytes(canonical)))

# The status list packs one 2-bit entry per credential, MSB-first.
slist = StatusList("demo-list", capacity=16)
slist.set(3, CredentialState.REVOKED)
print("raw bitstring:", [hex(b) for b in slist.to_bytes()])  # entry 3 -> 0x01

# Suspension is reversible; revocation is permanent.
issuer.suspend(vc.id)
print("suspended:", verify_credential(vc, registry, resolver).verdict.value)
issuer.reinstate(vc.id)
print("reinstated:", verify_credential(vc, registry, resolver).verdict.value)
issuer.revoke(vc.id)
print("revoked:", verify_credential(vc, registry, resolver).verdict.value)

# The published list is itself a signed credential and decodes exactly.
published = issuer.status_list_credential()
decoded = decode_status_list(published, registry)
print("published version:", decoded.version,
      "entry state:", decoded.get(issuer.slots[vc.id]).name)
