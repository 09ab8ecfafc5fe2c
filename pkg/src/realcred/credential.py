"""Verifiable credentials: canonical JSON, signing, DIDs, and status lists.

Credentials are plain JSON documents signed with Ed25519 over a canonical
byte form (sorted keys, no whitespace). Revocation state lives in a 2-bit-
per-entry bitstring published as its own signed credential; verifiers fetch
that one document and decode locally, with no further issuer interaction.
"""

from __future__ import annotations

import base64
import hashlib
import json
import uuid
import zlib
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Any, Callable, Mapping, Optional, Sequence, Union

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .errors import CodedError

CONTEXT_V2 = "https://www.w3.org/ns/credentials/v2"
PROOF_TYPE = "Ed25519Signature-local"
DEFAULT_STATUS_CAPACITY = 131072


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------


def canonicalize(payload: Mapping[str, Any]) -> bytes:
    """Deterministic UTF-8 JSON bytes: keys sorted at every depth, no
    insignificant whitespace, numbers in shortest round-trip form."""
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
        allow_nan=False,
    ).encode("utf-8")


def b64url_encode(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).decode("ascii").rstrip("=")


def b64url_decode(data: str) -> bytes:
    padding = "=" * (-len(data) % 4)
    return base64.urlsafe_b64decode(data + padding)


def _format_ts(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


def utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


# ---------------------------------------------------------------------------
# Keys and DIDs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KeyPair:
    private: Ed25519PrivateKey
    public: bytes  # 32 raw bytes

    def sign(self, message: bytes) -> bytes:
        return self.private.sign(message)


def generate_keypair() -> KeyPair:
    private = Ed25519PrivateKey.generate()
    return KeyPair(private=private, public=_raw_public(private))


def keypair_from_seed(seed: bytes) -> KeyPair:
    if len(seed) != 32:
        raise ValueError("seed must be 32 bytes")
    private = Ed25519PrivateKey.from_private_bytes(seed)
    return KeyPair(private=private, public=_raw_public(private))


def _raw_public(private: Ed25519PrivateKey) -> bytes:
    from cryptography.hazmat.primitives import serialization

    return private.public_key().public_bytes(
        serialization.Encoding.Raw, serialization.PublicFormat.Raw
    )


def verify_bytes(public_key: bytes, signature: bytes, message: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
        return True
    except (InvalidSignature, ValueError):
        return False


@dataclass(frozen=True)
class Did:
    uri: str
    public_key: bytes


def did_uri_for_key(public_key: bytes) -> str:
    digest = hashlib.sha256(public_key).hexdigest()[:16]
    return f"did:local:{digest}"


@dataclass(frozen=True)
class RegistryEntry:
    uri: str
    public_key: bytes
    prev_hash: str
    entry_hash: str


class DidRegistry:
    """Append-only, hash-chained registry of local DIDs.

    Each entry commits to its predecessor, so the log is tamper-evident;
    ``verify_chain`` recomputes every link.
    """

    def __init__(self) -> None:
        self._entries: list[RegistryEntry] = []
        self._by_uri: dict[str, RegistryEntry] = {}

    @staticmethod
    def _hash(prev_hash: str, uri: str, public_key: bytes) -> str:
        material = f"{prev_hash}|{uri}|{public_key.hex()}".encode("ascii")
        return hashlib.sha256(material).hexdigest()

    def register(self, public_key: bytes) -> Did:
        if len(public_key) != 32:
            raise ValueError("public key must be 32 bytes")
        uri = did_uri_for_key(public_key)
        existing = self._by_uri.get(uri)
        if existing is not None:
            if existing.public_key != public_key:
                raise CodedError("DID_CONFLICT", f"{uri} registered with another key")
            return Did(uri=uri, public_key=public_key)
        prev = self._entries[-1].entry_hash if self._entries else ""
        entry = RegistryEntry(
            uri=uri, public_key=public_key, prev_hash=prev,
            entry_hash=self._hash(prev, uri, public_key),
        )
        self._entries.append(entry)
        self._by_uri[uri] = entry
        return Did(uri=uri, public_key=public_key)

    def resolve(self, uri: str) -> Optional[Did]:
        entry = self._by_uri.get(uri)
        if entry is None:
            return None
        return Did(uri=entry.uri, public_key=entry.public_key)

    def entries(self) -> list[RegistryEntry]:
        return list(self._entries)

    def verify_chain(self) -> bool:
        prev = ""
        for entry in self._entries:
            if entry.prev_hash != prev:
                return False
            if self._hash(prev, entry.uri, entry.public_key) != entry.entry_hash:
                return False
            prev = entry.entry_hash
        return True

    def load_entries(self, entries: Sequence[RegistryEntry]) -> None:
        self._entries = list(entries)
        self._by_uri = {e.uri: e for e in self._entries}
        if not self.verify_chain():
            raise CodedError("REGISTRY_CORRUPT", "DID registry hash chain broken")


# ---------------------------------------------------------------------------
# Status lists
# ---------------------------------------------------------------------------


class CredentialState(Enum):
    VALID = 0b00
    REVOKED = 0b01
    SUSPENDED = 0b10


class StatusList:
    """Revocation bitstring with 2 bits per entry (00/01/10; 11 forbidden).

    Entry i occupies bits [2i, 2i+1] counting from the most significant bit
    of byte 0. The version increments on every mutation.
    """

    def __init__(self, list_id: str, capacity: int = DEFAULT_STATUS_CAPACITY,
                 bits: Optional[bytes] = None, version: int = 0) -> None:
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.id = list_id
        self.capacity = capacity
        size = (2 * capacity + 7) // 8
        if bits is None:
            self._bits = bytearray(size)
        else:
            if len(bits) != size:
                raise ValueError(f"expected {size} bytes of bits, got {len(bits)}")
            self._bits = bytearray(bits)
        self.version = version

    def to_bytes(self) -> bytes:
        return bytes(self._bits)

    def _shift(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self.capacity:
            raise CodedError("INDEX_OUT_OF_RANGE",
                             f"index {index} outside capacity {self.capacity}")
        return index // 4, 6 - 2 * (index % 4)

    def get(self, index: int) -> CredentialState:
        byte, shift = self._shift(index)
        value = (self._bits[byte] >> shift) & 0b11
        if value == 0b11:
            raise CodedError("CORRUPT_LIST", f"entry {index} holds forbidden state 11")
        return CredentialState(value)

    def set(self, index: int, state: CredentialState) -> None:
        byte, shift = self._shift(index)
        current = (self._bits[byte] >> shift) & 0b11
        if current == CredentialState.REVOKED.value and state is not CredentialState.REVOKED:
            raise CodedError("UNREVOKE_FORBIDDEN",
                             f"entry {index} is revoked; revocation is permanent")
        self._bits[byte] = (self._bits[byte] & ~(0b11 << shift)) | (state.value << shift)
        self.version += 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StatusList):
            return NotImplemented
        return (self.id == other.id and self.capacity == other.capacity
                and self._bits == other._bits and self.version == other.version)

    def copy(self) -> "StatusList":
        return StatusList(self.id, self.capacity, bytes(self._bits), self.version)


def set_status(status_list: StatusList, index: int, state: CredentialState) -> StatusList:
    """Pure variant of StatusList.set: returns an updated copy."""
    updated = status_list.copy()
    updated.set(index, state)
    return updated


# ---------------------------------------------------------------------------
# Credentials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StatusEntry:
    status_list_id: str
    status_list_index: int
    status_purpose: str = "revocation"

    def to_json_dict(self) -> dict:
        return {
            "id": self.status_list_id,
            "statusListIndex": str(self.status_list_index),
            "statusPurpose": self.status_purpose,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "StatusEntry":
        return cls(
            status_list_id=payload["id"],
            status_list_index=int(payload["statusListIndex"]),
            status_purpose=payload.get("statusPurpose", "revocation"),
        )


@dataclass(frozen=True)
class Proof:
    created: str
    verification_method: str
    signature: bytes
    type: str = PROOF_TYPE

    def to_json_dict(self) -> dict:
        return {
            "type": self.type,
            "created": self.created,
            "verificationMethod": self.verification_method,
            "proofValue": b64url_encode(self.signature),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Proof":
        return cls(
            created=payload["created"],
            verification_method=payload["verificationMethod"],
            signature=b64url_decode(payload["proofValue"]),
            type=payload.get("type", PROOF_TYPE),
        )


@dataclass(frozen=True)
class VerifiableCredential:
    context: tuple[str, ...]
    id: str
    type: tuple[str, ...]
    issuer: str
    issuance_date: str
    expiration_date: str
    credential_subject: dict[str, Any]
    credential_status: Optional[StatusEntry] = None
    proof: Optional[Proof] = None

    def to_json_dict(self, include_proof: bool = True) -> dict:
        payload: dict[str, Any] = {
            "@context": list(self.context),
            "id": self.id,
            "type": list(self.type),
            "issuer": self.issuer,
            "validFrom": self.issuance_date,
            "validUntil": self.expiration_date,
            "credentialSubject": self.credential_subject,
        }
        if self.credential_status is not None:
            payload["credentialStatus"] = self.credential_status.to_json_dict()
        if include_proof and self.proof is not None:
            payload["proof"] = self.proof.to_json_dict()
        return payload

    @classmethod
    def from_json_dict(cls, payload: dict) -> "VerifiableCredential":
        try:
            status = payload.get("credentialStatus")
            proof = payload.get("proof")
            return cls(
                context=tuple(payload["@context"]),
                id=payload["id"],
                type=tuple(payload["type"]),
                issuer=payload["issuer"],
                issuance_date=payload["validFrom"],
                expiration_date=payload["validUntil"],
                credential_subject=dict(payload["credentialSubject"]),
                credential_status=StatusEntry.from_json_dict(status) if status else None,
                proof=Proof.from_json_dict(proof) if proof else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CodedError("MALFORMED", f"bad credential JSON: {exc}") from exc

    def canonical_bytes(self) -> bytes:
        return canonicalize(self.to_json_dict(include_proof=False))


def sign_credential(vc: VerifiableCredential, keypair: KeyPair, issuer_uri: str,
                    now: Optional[datetime] = None) -> VerifiableCredential:
    created = _format_ts(now or utcnow())
    signature = keypair.sign(vc.canonical_bytes())
    proof = Proof(created=created, verification_method=issuer_uri, signature=signature)
    return replace(vc, proof=proof)


def issue_credential(
    subject_claims: Mapping[str, Any],
    issuer_keypair: KeyPair,
    registry: DidRegistry,
    validity_days: int,
    status_slot: Optional[tuple[StatusList, int]] = None,
    types: Sequence[str] = ("VerifiableCredential",),
    now: Optional[datetime] = None,
    credential_id: Optional[str] = None,
) -> VerifiableCredential:
    """Build and sign a credential for the given claims.

    The issuer's DID must already be registered and the optional status
    slot must lie within the list's capacity.
    """
    issuer_uri = did_uri_for_key(issuer_keypair.public)
    resolved = registry.resolve(issuer_uri)
    if resolved is None or resolved.public_key != issuer_keypair.public:
        raise CodedError("UNREGISTERED_ISSUER", f"issuer {issuer_uri} not registered")
    if validity_days <= 0:
        raise CodedError("INVALID_VALIDITY", "validity_days must be positive")
    issued_at = now or utcnow()
    status = None
    if status_slot is not None:
        status_list, index = status_slot
        if not 0 <= index < status_list.capacity:
            raise CodedError("LIST_FULL",
                             f"slot {index} outside capacity {status_list.capacity}")
        status = StatusEntry(status_list_id=status_list.id, status_list_index=index)
    vc = VerifiableCredential(
        context=(CONTEXT_V2,),
        id=credential_id or f"urn:uuid:{uuid.uuid4()}",
        type=tuple(types),
        issuer=issuer_uri,
        issuance_date=_format_ts(issued_at),
        expiration_date=_format_ts(issued_at + timedelta(days=validity_days)),
        credential_subject=dict(subject_claims),
        credential_status=status,
    )
    return sign_credential(vc, issuer_keypair, issuer_uri, now=issued_at)


class Verdict(Enum):
    VALID = "Valid"
    INVALID = "Invalid"
    REVOKED = "Revoked"
    SUSPENDED = "Suspended"
    EXPIRED = "Expired"


@dataclass(frozen=True)
class VerificationResult:
    verdict: Verdict
    reason: Optional[str] = None

    def to_json_dict(self) -> dict:
        return {"verdict": self.verdict.value, "reason": self.reason}


StatusResolver = Callable[[str], Union[VerifiableCredential, StatusList, None]]


def verify_credential(
    vc: VerifiableCredential,
    registry: DidRegistry,
    status_resolver: Optional[StatusResolver] = None,
    now: Optional[datetime] = None,
) -> VerificationResult:
    """Run the full verification check chain; the first failure wins.

    Order: issuer resolution, signature over the canonical bytes, shape,
    validity window, then revocation status. A credential that is both
    expired and revoked therefore reports Expired.
    """
    moment = now or utcnow()

    issuer = registry.resolve(vc.issuer)
    if issuer is None:
        return VerificationResult(Verdict.INVALID, "UNKNOWN_ISSUER")

    if vc.proof is None:
        return VerificationResult(Verdict.INVALID, "MISSING_PROOF")
    if not verify_bytes(issuer.public_key, vc.proof.signature, vc.canonical_bytes()):
        return VerificationResult(Verdict.INVALID, "BAD_SIGNATURE")

    if not vc.context or vc.context[0] != CONTEXT_V2:
        return VerificationResult(Verdict.INVALID, "MALFORMED")
    if not vc.type or "VerifiableCredential" not in vc.type:
        return VerificationResult(Verdict.INVALID, "MALFORMED")
    try:
        valid_from = _parse_ts(vc.issuance_date)
        valid_until = _parse_ts(vc.expiration_date)
    except ValueError:
        return VerificationResult(Verdict.INVALID, "MALFORMED")
    if valid_until <= valid_from:
        return VerificationResult(Verdict.INVALID, "MALFORMED")

    if moment < valid_from:
        return VerificationResult(Verdict.INVALID, "NOT_YET_VALID")
    if moment > valid_until:
        return VerificationResult(Verdict.EXPIRED, "EXPIRED")

    if vc.credential_status is not None:
        if status_resolver is None:
            return VerificationResult(Verdict.INVALID, "STATUS_UNAVAILABLE")
        try:
            resolved = status_resolver(vc.credential_status.status_list_id)
        except Exception:
            resolved = None
        if resolved is None:
            return VerificationResult(Verdict.INVALID, "STATUS_UNAVAILABLE")
        if isinstance(resolved, VerifiableCredential):
            try:
                status_list = decode_status_list(resolved, registry)
            except CodedError as exc:
                return VerificationResult(Verdict.INVALID, exc.code)
        else:
            status_list = resolved
        try:
            state = status_list.get(vc.credential_status.status_list_index)
        except CodedError as exc:
            return VerificationResult(Verdict.INVALID, exc.code)
        if state is CredentialState.REVOKED:
            return VerificationResult(Verdict.REVOKED, None)
        if state is CredentialState.SUSPENDED:
            return VerificationResult(Verdict.SUSPENDED, None)

    return VerificationResult(Verdict.VALID, None)


# ---------------------------------------------------------------------------
# Status list credentials
# ---------------------------------------------------------------------------


def encode_status_list(
    status_list: StatusList,
    issuer_keypair: KeyPair,
    registry: DidRegistry,
    now: Optional[datetime] = None,
    validity_days: int = 365,
) -> VerifiableCredential:
    """Publish a status list as a signed credential.

    The raw bitstring is DEFLATE-compressed (zlib container) and base64url-
    encoded without padding; the subject carries encodedList, statusPurpose,
    and statusSize plus the list id, capacity, and version needed to decode
    back to an identical StatusList.
    """
    raw = status_list.to_bytes()
    encoded = b64url_encode(zlib.compress(raw))
    subject = {
        "id": status_list.id,
        "encodedList": encoded,
        "statusPurpose": "revocation",
        "statusSize": 2,
        "capacity": status_list.capacity,
        "version": status_list.version,
    }
    return issue_credential(
        subject_claims=subject,
        issuer_keypair=issuer_keypair,
        registry=registry,
        validity_days=validity_days,
        types=("VerifiableCredential", "StatusListCredential"),
        now=now,
        credential_id=f"{status_list.id}#v{status_list.version}",
    )


def decode_status_list(credential: VerifiableCredential,
                       registry: DidRegistry) -> StatusList:
    """Inverse of encode_status_list; rejects tampering and forbidden states."""
    result = verify_credential(credential, registry)
    if result.verdict is not Verdict.VALID:
        raise CodedError("BAD_SIGNATURE",
                         f"status list credential failed verification: "
                         f"{result.reason or result.verdict.value}")
    subject = credential.credential_subject
    for key in ("encodedList", "statusPurpose", "statusSize"):
        if key not in subject:
            raise CodedError("MALFORMED", f"status list subject missing {key!r}")
    if subject["statusSize"] != 2:
        raise CodedError("MALFORMED", f"unsupported statusSize {subject['statusSize']!r}")
    if subject["statusPurpose"] != "revocation":
        raise CodedError("MALFORMED", "statusPurpose must be 'revocation'")
    try:
        raw = zlib.decompress(b64url_decode(subject["encodedList"]))
    except (ValueError, zlib.error) as exc:
        raise CodedError("CORRUPT_LIST", f"cannot decode list: {exc}") from exc
    capacity = int(subject.get("capacity", len(raw) * 4))
    if (2 * capacity + 7) // 8 != len(raw):
        raise CodedError("CORRUPT_LIST", "capacity does not match payload size")
    status_list = StatusList(
        list_id=subject.get("id", credential.id),
        capacity=capacity,
        bits=raw,
        version=int(subject.get("version", 0)),
    )
    _reject_forbidden_entries(raw, capacity)
    return status_list


_BYTES_WITH_11 = frozenset(
    b for b in range(256)
    if any((b >> shift) & 0b11 == 0b11 for shift in (0, 2, 4, 6))
)


def _reject_forbidden_entries(raw: bytes, capacity: int) -> None:
    whole_bytes = capacity // 4
    if not _BYTES_WITH_11.isdisjoint(raw[:whole_bytes]):
        offset = next(i for i, b in enumerate(raw[:whole_bytes]) if b in _BYTES_WITH_11)
        for k in range(4):
            if (raw[offset] >> (6 - 2 * k)) & 0b11 == 0b11:
                raise CodedError("CORRUPT_LIST",
                                 f"entry {offset * 4 + k} holds forbidden state 11")
    for i in range(whole_bytes * 4, capacity):
        if (raw[i // 4] >> (6 - 2 * (i % 4))) & 0b11 == 0b11:
            raise CodedError("CORRUPT_LIST", f"entry {i} holds forbidden state 11")


# ---------------------------------------------------------------------------
# Issuer facade
# ---------------------------------------------------------------------------


class Issuer:
    """Holds an issuer keypair plus one status list and tracks issued slots."""

    def __init__(self, keypair: KeyPair, registry: DidRegistry,
                 status_list: Optional[StatusList] = None,
                 status_list_id: str = "status-main",
                 capacity: int = DEFAULT_STATUS_CAPACITY) -> None:
        self.keypair = keypair
        self.registry = registry
        self.did = registry.register(keypair.public)
        self.status_list = status_list or StatusList(status_list_id, capacity)
        self.issued: dict[str, VerifiableCredential] = {}
        self._slots: dict[str, int] = {}
        self._next_slot = 0

    def _allocate_slot(self) -> int:
        if self._next_slot >= self.status_list.capacity:
            raise CodedError("LIST_FULL", "status list capacity exhausted")
        slot = self._next_slot
        self._next_slot += 1
        return slot

    def restore_slots(self, slots: Mapping[str, int]) -> None:
        self._slots = dict(slots)
        self._next_slot = max(self._slots.values(), default=-1) + 1

    @property
    def slots(self) -> dict[str, int]:
        return dict(self._slots)

    def issue(self, claims: Mapping[str, Any], validity_days: int = 365,
              types: Sequence[str] = ("VerifiableCredential",),
              now: Optional[datetime] = None) -> VerifiableCredential:
        slot = self._allocate_slot()
        vc = issue_credential(
            subject_claims=claims,
            issuer_keypair=self.keypair,
            registry=self.registry,
            validity_days=validity_days,
            status_slot=(self.status_list, slot),
            types=types,
            now=now,
        )
        self.issued[vc.id] = vc
        self._slots[vc.id] = slot
        return vc

    def _set_state(self, credential_id: str, state: CredentialState) -> None:
        if credential_id not in self._slots:
            raise CodedError("UNKNOWN_CREDENTIAL", f"no credential {credential_id!r}")
        self.status_list.set(self._slots[credential_id], state)

    def revoke(self, credential_id: str) -> None:
        self._set_state(credential_id, CredentialState.REVOKED)

    def suspend(self, credential_id: str) -> None:
        self._set_state(credential_id, CredentialState.SUSPENDED)

    def reinstate(self, credential_id: str) -> None:
        self._set_state(credential_id, CredentialState.VALID)

    def status_list_credential(self, now: Optional[datetime] = None) -> VerifiableCredential:
        return encode_status_list(self.status_list, self.keypair, self.registry, now=now)
