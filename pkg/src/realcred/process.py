"""Workflow state machine and engine for credentialing processes.

A process moves through ingestion, extraction, issuer validation,
reconciliation, issuance, and revocation. Every mutation is committed to the
embedded store before returning, so a restarted service resumes each process
in its last committed state; mutations on a single process are linearized
by a per-process lock.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Union

from .credential import (
    DidRegistry,
    Issuer,
    StatusList,
    VerifiableCredential,
    Verdict,
    VerificationResult,
    _format_ts,
    _parse_ts,
    generate_keypair,
    keypair_from_seed,
    utcnow,
    verify_credential,
)
from .docmodel import (
    DEFAULT_ROW_TOLERANCE,
    BoundingBox,
    DocumentKind,
    ExtractedValue,
    ExtractionResult,
    Token,
    assemble_extraction,
    field_schema,
    parse_annotation_payload,
    read_annotation,
    schema_for,
)
from .errors import CodedError
from .reconcile import (
    DEFAULT_COORDINATE_TOLERANCE_KM,
    ReconciliationReport,
    reconcile_documents,
)

DEFAULT_OFFER_TTL_SECONDS = 15 * 60


class ProcessState(Enum):
    AWAITING_DOCUMENTS = "AwaitingDocuments"
    EXTRACTING = "Extracting"
    PENDING_VALIDATION = "PendingValidation"
    REJECTED = "Rejected"
    RECONCILING = "Reconciling"
    RECONCILIATION_FAILED = "ReconciliationFailed"
    READY_TO_ISSUE = "ReadyToIssue"
    ISSUED = "Issued"
    REVOKED = "Revoked"


#: The transition relation: every observable state change must be one of these.
TRANSITIONS: dict[ProcessState, frozenset[ProcessState]] = {
    ProcessState.AWAITING_DOCUMENTS: frozenset({ProcessState.EXTRACTING}),
    ProcessState.EXTRACTING: frozenset({ProcessState.PENDING_VALIDATION}),
    ProcessState.PENDING_VALIDATION: frozenset({
        ProcessState.REJECTED, ProcessState.RECONCILING, ProcessState.EXTRACTING,
    }),
    ProcessState.RECONCILING: frozenset({
        ProcessState.RECONCILIATION_FAILED, ProcessState.READY_TO_ISSUE,
    }),
    ProcessState.RECONCILIATION_FAILED: frozenset({ProcessState.PENDING_VALIDATION}),
    ProcessState.READY_TO_ISSUE: frozenset({ProcessState.ISSUED}),
    ProcessState.ISSUED: frozenset({ProcessState.REVOKED}),
    ProcessState.REJECTED: frozenset(),
    ProcessState.REVOKED: frozenset(),
}

#: States in which each engine operation is accepted; everything else gets
#: INVALID_STATE and leaves the process untouched.
OPERATION_STATES: dict[str, frozenset[ProcessState]] = {
    "submit_document": frozenset({
        ProcessState.AWAITING_DOCUMENTS, ProcessState.EXTRACTING,
        ProcessState.PENDING_VALIDATION,
    }),
    "run_extraction": frozenset({ProcessState.EXTRACTING}),
    "record_validation": frozenset({
        ProcessState.PENDING_VALIDATION, ProcessState.RECONCILIATION_FAILED,
    }),
    "issue_for_process": frozenset({ProcessState.READY_TO_ISSUE}),
    "revoke_for_process": frozenset({ProcessState.ISSUED}),
}


class ValidationDecision(Enum):
    APPROVE = "Approve"
    REJECT = "Reject"


class RevocationScope(Enum):
    ONE = "One"
    ALL = "All"


@dataclass(frozen=True)
class DocumentSubmission:
    doc_id: str
    kind: DocumentKind
    payload_type: str  # "token_stream" | "credential"
    tokens: tuple[tuple[Token, str], ...] = ()
    credential: Optional[VerifiableCredential] = None
    source_path: Optional[str] = None
    pre_validated: bool = False
    extracted: bool = False


@dataclass(frozen=True)
class CorrectionEvent:
    doc_id: str
    label: str
    old_value: str
    new_value: str
    issuer_did: str
    timestamp: str


@dataclass
class Process:
    process_id: str
    holder_did: str
    state: ProcessState
    submissions: list[DocumentSubmission] = field(default_factory=list)
    extraction_results: dict[str, ExtractionResult] = field(default_factory=dict)
    corrections: list[CorrectionEvent] = field(default_factory=list)
    report: Optional[ReconciliationReport] = None
    issued: list[str] = field(default_factory=list)
    offer_id: Optional[str] = None
    extraction_warnings: list[str] = field(default_factory=list)
    transitions: list[tuple[str, str]] = field(default_factory=list)  # (state, timestamp)


# -- serialization -----------------------------------------------------------


def _token_to_json(token: Token, label: str) -> dict:
    return {"label": label, "text": token.text, "box": token.box.as_list(),
            "confidence": token.confidence}


def _token_from_json(payload: dict) -> tuple[Token, str]:
    token = Token(text=payload["text"], box=BoundingBox(*payload["box"]),
                  confidence=float(payload.get("confidence", 1.0)))
    return token, payload["label"]


def _extraction_to_json(result: ExtractionResult) -> dict:
    return {
        "kind": result.kind.value,
        "fields": {
            label: [{"value": v.value, "confidence": v.confidence} for v in values]
            for label, values in result.fields.items()
        },
    }


def _extraction_from_json(payload: dict) -> ExtractionResult:
    return ExtractionResult(
        kind=DocumentKind(payload["kind"]),
        fields={
            label: tuple(ExtractedValue(v["value"], float(v["confidence"]))
                         for v in values)
            for label, values in payload["fields"].items()
        },
    )


def process_to_json(process: Process) -> dict:
    return {
        "process_id": process.process_id,
        "holder_did": process.holder_did,
        "state": process.state.value,
        "submissions": [
            {
                "doc_id": s.doc_id,
                "kind": s.kind.value,
                "payload_type": s.payload_type,
                "tokens": [_token_to_json(t, l) for t, l in s.tokens],
                "credential": s.credential.to_json_dict() if s.credential else None,
                "source_path": s.source_path,
                "pre_validated": s.pre_validated,
                "extracted": s.extracted,
            }
            for s in process.submissions
        ],
        "extraction_results": {
            doc_id: _extraction_to_json(result)
            for doc_id, result in process.extraction_results.items()
        },
        "corrections": [
            {
                "doc_id": c.doc_id, "label": c.label, "old_value": c.old_value,
                "new_value": c.new_value, "issuer_did": c.issuer_did,
                "timestamp": c.timestamp,
            }
            for c in process.corrections
        ],
        "report": process.report.to_json_dict() if process.report else None,
        "issued": list(process.issued),
        "offer_id": process.offer_id,
        "extraction_warnings": list(process.extraction_warnings),
        "transitions": [list(t) for t in process.transitions],
    }


def process_from_json(payload: dict) -> Process:
    submissions = [
        DocumentSubmission(
            doc_id=s["doc_id"],
            kind=DocumentKind(s["kind"]),
            payload_type=s["payload_type"],
            tokens=tuple(_token_from_json(t) for t in s["tokens"]),
            credential=(VerifiableCredential.from_json_dict(s["credential"])
                        if s.get("credential") else None),
            source_path=s.get("source_path"),
            pre_validated=bool(s.get("pre_validated")),
            extracted=bool(s.get("extracted")),
        )
        for s in payload["submissions"]
    ]
    return Process(
        process_id=payload["process_id"],
        holder_did=payload["holder_did"],
        state=ProcessState(payload["state"]),
        submissions=submissions,
        extraction_results={
            doc_id: _extraction_from_json(result)
            for doc_id, result in payload["extraction_results"].items()
        },
        corrections=[
            CorrectionEvent(
                doc_id=c["doc_id"], label=c["label"], old_value=c["old_value"],
                new_value=c["new_value"], issuer_did=c["issuer_did"],
                timestamp=c["timestamp"],
            )
            for c in payload["corrections"]
        ],
        report=(ReconciliationReport.from_json_dict(payload["report"])
                if payload.get("report") else None),
        issued=list(payload.get("issued", [])),
        offer_id=payload.get("offer_id"),
        extraction_warnings=list(payload.get("extraction_warnings", [])),
        transitions=[(t[0], t[1]) for t in payload.get("transitions", [])],
    )


# -- engine -------------------------------------------------------------------


class ProcessEngine:
    """Coordinates processes, the issuer, the DID registry, and the store."""

    def __init__(
        self,
        store,
        issuer_seed: Optional[bytes] = None,
        coordinate_tolerance_km: float = DEFAULT_COORDINATE_TOLERANCE_KM,
        offer_ttl_seconds: int = DEFAULT_OFFER_TTL_SECONDS,
        row_tolerance: int = DEFAULT_ROW_TOLERANCE,
        clock: Callable[[], datetime] = utcnow,
        document_root: Optional[Union[str, Path]] = None,
    ) -> None:
        self.store = store
        self.clock = clock
        self.coordinate_tolerance_km = coordinate_tolerance_km
        self.offer_ttl_seconds = offer_ttl_seconds
        self.row_tolerance = row_tolerance
        self.document_root = Path(document_root) if document_root else None
        self.registry = DidRegistry()
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()

        entries = store.did_entries()
        if entries:
            self.registry.load_entries(entries)
        self.issuer = self._restore_issuer(issuer_seed)
        self._sync_registry()
        self._persist_status_list()

    # -- bootstrap ----------------------------------------------------------

    def _restore_issuer(self, issuer_seed: Optional[bytes]) -> Issuer:
        from cryptography.hazmat.primitives import serialization

        saved = self.store.load_issuer_key()
        if saved is not None:
            _, secret_hex = saved
            keypair = keypair_from_seed(bytes.fromhex(secret_hex))
        elif issuer_seed is not None:
            keypair = keypair_from_seed(issuer_seed)
        else:
            keypair = generate_keypair()

        list_ids = self.store.status_list_ids()
        status_list = None
        if list_ids:
            list_id = list_ids[0]
            loaded = self.store.load_status_list(list_id)
            assert loaded is not None
            capacity, version, bits, _ = loaded
            status_list = StatusList(list_id, capacity, bits, version)

        issuer = Issuer(keypair, self.registry, status_list=status_list)
        slots = {cid: slot for cid, _, slot, _ in self.store.credential_rows()}
        issuer.restore_slots(slots)
        for cid, _, _, data in self.store.credential_rows():
            issuer.issued[cid] = VerifiableCredential.from_json_dict(data)

        secret = keypair.private.private_bytes(
            serialization.Encoding.Raw,
            serialization.PrivateFormat.Raw,
            serialization.NoEncryption(),
        )
        self.store.save_issuer_key(issuer.did.uri, secret.hex())
        return issuer

    def _sync_registry(self) -> None:
        for entry in self.registry.entries():
            self.store.append_did(entry)

    def _persist_status_list(self) -> None:
        slist = self.issuer.status_list
        credential = self.issuer.status_list_credential(now=self.clock())
        self.store.save_status_list(
            slist.id, slist.capacity, slist.version, slist.to_bytes(),
            credential.to_json_dict(),
        )

    # -- DID management -----------------------------------------------------

    def register_did(self, public_key: bytes):
        did = self.registry.register(public_key)
        self._sync_registry()
        return did

    def create_holder_did(self):
        keypair = generate_keypair()
        return self.register_did(keypair.public)

    def resolve_did(self, uri: str):
        return self.registry.resolve(uri)

    # -- locking and persistence --------------------------------------------

    def _lock(self, process_id: str) -> threading.RLock:
        with self._locks_guard:
            if process_id not in self._locks:
                self._locks[process_id] = threading.RLock()
            return self._locks[process_id]

    def _save(self, process: Process) -> None:
        self.store.save_process(
            process.process_id, process.state.value, process_to_json(process)
        )

    def _load(self, process_id: str) -> Process:
        payload = self.store.load_process(process_id)
        if payload is None:
            raise CodedError("UNKNOWN_PROCESS", f"no process {process_id!r}")
        return process_from_json(payload)

    def get_process(self, process_id: str) -> Process:
        return self._load(process_id)

    def list_processes(self) -> list[Process]:
        return [process_from_json(p) for p in self.store.list_processes()]

    def _transition(self, process: Process, new_state: ProcessState) -> None:
        if new_state not in TRANSITIONS[process.state]:
            raise CodedError(
                "INVALID_STATE",
                f"no transition {process.state.value} -> {new_state.value}",
            )
        process.state = new_state
        process.transitions.append((new_state.value, _format_ts(self.clock())))
        self._save(process)

    def _require_operation(self, process: Process, operation: str) -> None:
        if process.state not in OPERATION_STATES[operation]:
            raise CodedError(
                "INVALID_STATE",
                f"{operation} not allowed in state {process.state.value}",
            )

    # -- operations ----------------------------------------------------------

    def create_process(self, holder_did: str) -> Process:
        if self.registry.resolve(holder_did) is None:
            raise CodedError("UNKNOWN_DID", f"holder DID {holder_did!r} not registered")
        process = Process(
            process_id=f"proc-{uuid.uuid4().hex[:12]}",
            holder_did=holder_did,
            state=ProcessState.AWAITING_DOCUMENTS,
        )
        process.transitions.append(
            (ProcessState.AWAITING_DOCUMENTS.value, _format_ts(self.clock()))
        )
        self._save(process)
        return process

    def _status_resolver(self, list_id: str):
        loaded = self.store.load_status_list(list_id)
        if loaded is None:
            return None
        _, _, _, credential = loaded
        if credential is None:
            return None
        return VerifiableCredential.from_json_dict(credential)

    def verify(self, vc: VerifiableCredential) -> VerificationResult:
        return verify_credential(vc, self.registry, self._status_resolver,
                                 now=self.clock())

    def parse_submission(self, payload: dict) -> DocumentSubmission:
        """Build a DocumentSubmission from an API payload.

        Token streams arrive either as a file path to an annotation-format
        document or inline under "token_stream"; existing credentials arrive
        under "credential".
        """
        try:
            kind = DocumentKind(payload["kind"])
            doc_id = str(payload["doc_id"])
        except (KeyError, ValueError) as exc:
            raise CodedError("MALFORMED", f"bad submission: {exc}") from exc
        if payload.get("credential") is not None:
            vc = VerifiableCredential.from_json_dict(payload["credential"])
            return DocumentSubmission(doc_id=doc_id, kind=kind,
                                      payload_type="credential", credential=vc)
        if payload.get("token_stream") is not None:
            _, _, annotations = parse_annotation_payload(payload["token_stream"])
            source_path = None
        elif payload.get("token_stream_path") is not None:
            source_path = str(payload["token_stream_path"])
            path = Path(source_path)
            if self.document_root is not None and not path.is_absolute():
                path = self.document_root / path
            try:
                _, _, annotations = read_annotation(path)
            except OSError as exc:
                raise CodedError("IO_ERROR", f"{path}: {exc}") from exc
        else:
            raise CodedError("MALFORMED",
                             "submission needs credential, token_stream, or "
                             "token_stream_path")
        tokens = tuple(
            (Token(text=a.text, box=a.box, confidence=1.0), a.label)
            for a in annotations
        )
        return DocumentSubmission(doc_id=doc_id, kind=kind,
                                  payload_type="token_stream", tokens=tokens,
                                  source_path=source_path)

    def submit_document(self, process_id: str, submission: DocumentSubmission) -> Process:
        with self._lock(process_id):
            process = self._load(process_id)
            self._require_operation(process, "submit_document")

            existing = next((s for s in process.submissions
                             if s.doc_id == submission.doc_id), None)
            same_kind = next((s for s in process.submissions
                              if s.kind == submission.kind), None)
            if existing is None and same_kind is not None:
                raise CodedError("DUPLICATE_KIND",
                                 f"a {submission.kind.value} document was already submitted")
            if existing is not None and existing.kind != submission.kind:
                raise CodedError("DUPLICATE_KIND",
                                 f"doc {submission.doc_id!r} already submitted as "
                                 f"{existing.kind.value}")

            pre_extracted: Optional[ExtractionResult] = None
            if submission.payload_type == "credential":
                assert submission.credential is not None
                result = self.verify(submission.credential)
                if result.verdict is not Verdict.VALID:
                    raise CodedError(
                        "VC_INVALID",
                        f"submitted credential is {result.verdict.value}"
                        + (f" ({result.reason})" if result.reason else ""),
                    )
                claims = submission.credential.credential_subject
                labels = {fs.label for fs in schema_for(submission.kind)}
                fields: dict[str, tuple[ExtractedValue, ...]] = {}
                for label, value in claims.items():
                    if label not in labels:
                        continue
                    values = value if isinstance(value, list) else [value]
                    fields[label] = tuple(ExtractedValue(str(v), 1.0) for v in values)
                submission = replace(submission, pre_validated=True, extracted=True)
                pre_extracted = ExtractionResult(kind=submission.kind, fields=fields)

            if existing is not None:
                process.submissions = [
                    submission if s.doc_id == submission.doc_id else s
                    for s in process.submissions
                ]
                process.extraction_results.pop(submission.doc_id, None)
            else:
                process.submissions.append(submission)
            if pre_extracted is not None:
                process.extraction_results[submission.doc_id] = pre_extracted

            if process.state is not ProcessState.EXTRACTING:
                self._transition(process, ProcessState.EXTRACTING)
            else:
                self._save(process)
            return process

    def run_extraction(self, process_id: str) -> Process:
        with self._lock(process_id):
            process = self._load(process_id)
            self._require_operation(process, "run_extraction")
            for i, submission in enumerate(process.submissions):
                if submission.payload_type != "token_stream" or submission.extracted:
                    continue
                result = assemble_extraction(submission.tokens, submission.kind,
                                             self.row_tolerance)
                if not result.fields:
                    process.extraction_warnings.append(
                        f"{submission.doc_id}: no labeled tokens; empty extraction"
                    )
                process.extraction_results[submission.doc_id] = result
                process.submissions[i] = replace(submission, extracted=True)
            self._transition(process, ProcessState.PENDING_VALIDATION)
            return process

    def record_validation(
        self,
        process_id: str,
        issuer_did: str,
        decision: ValidationDecision,
        corrections: Sequence[dict] = (),
    ) -> Process:
        with self._lock(process_id):
            process = self._load(process_id)
            self._require_operation(process, "record_validation")
            if self.registry.resolve(issuer_did) is None:
                raise CodedError("UNKNOWN_DID", f"issuer DID {issuer_did!r} not registered")

            if process.state is ProcessState.RECONCILIATION_FAILED:
                self._transition(process, ProcessState.PENDING_VALIDATION)

            for corr in corrections:
                self._apply_correction(process, issuer_did, corr)

            if decision is ValidationDecision.REJECT:
                self._transition(process, ProcessState.REJECTED)
                return process

            self._transition(process, ProcessState.RECONCILING)
            report = reconcile_documents(
                dict(process.extraction_results),
                process_id=process.process_id,
                coordinate_tolerance_km=self.coordinate_tolerance_km,
            )
            process.report = report
            if report.consistent:
                self._transition(process, ProcessState.READY_TO_ISSUE)
            else:
                self._transition(process, ProcessState.RECONCILIATION_FAILED)
            return process

    def _apply_correction(self, process: Process, issuer_did: str, corr: dict) -> None:
        try:
            doc_id = str(corr["doc_id"])
            label = str(corr["label"])
            new_value = str(corr["new_value"])
            old_value = str(corr.get("old_value", ""))
        except KeyError as exc:
            raise CodedError("MALFORMED", f"correction missing {exc}") from exc
        result = process.extraction_results.get(doc_id)
        if result is None:
            raise CodedError("UNKNOWN_DOC", f"no extraction for doc {doc_id!r}")
        try:
            field_schema(result.kind, label)
        except KeyError:
            raise CodedError("UNKNOWN_LABEL",
                             f"label {label!r} not in {result.kind.value} schema")

        values = list(result.fields.get(label, ()))
        if old_value:
            index = next((i for i, v in enumerate(values) if v.value == old_value), None)
            if index is None:
                raise CodedError("CORRECTION_MISMATCH",
                                 f"{label} has no value {old_value!r} to correct")
            if new_value:
                values[index] = ExtractedValue(new_value, 1.0)
            else:
                del values[index]
        else:
            if new_value:
                values.append(ExtractedValue(new_value, 1.0))
        fields = dict(result.fields)
        if values:
            fields[label] = tuple(values)
        else:
            fields.pop(label, None)
        process.extraction_results[doc_id] = ExtractionResult(
            kind=result.kind, fields=fields
        )
        process.corrections.append(CorrectionEvent(
            doc_id=doc_id, label=label, old_value=old_value, new_value=new_value,
            issuer_did=issuer_did, timestamp=_format_ts(self.clock()),
        ))

    def claims_for(self, process: Process, doc_id: str) -> dict[str, Any]:
        """Subject claims for one document: label -> value (or list when
        the schema marks the label repeatable)."""
        result = process.extraction_results[doc_id]
        submission = next(s for s in process.submissions if s.doc_id == doc_id)
        claims: dict[str, Any] = {"kind": result.kind.value, "docId": doc_id}
        for fs in schema_for(result.kind):
            values = result.values_for(fs.label)
            if not values:
                continue
            claims[fs.label] = list(values) if fs.repeatable else values[0]
        if submission.pre_validated:
            claims["preValidated"] = True
        return claims

    def issue_for_process(self, process_id: str, validity_days: int = 365) -> dict:
        with self._lock(process_id):
            process = self._load(process_id)
            self._require_operation(process, "issue_for_process")
            assert process.report is not None

            now = self.clock()
            credentials: list[VerifiableCredential] = []
            for submission in process.submissions:
                claims = self.claims_for(process, submission.doc_id)
                claims["processId"] = process.process_id
                claims["holder"] = process.holder_did
                vc = self.issuer.issue(
                    claims,
                    validity_days=validity_days,
                    types=("VerifiableCredential", f"{submission.kind.value}Credential"),
                    now=now,
                )
                credentials.append(vc)
            composite_claims = {
                "processId": process.process_id,
                "holder": process.holder_did,
                "consistent": process.report.consistent,
                "documents": [vc.id for vc in credentials],
            }
            composite = self.issuer.issue(
                composite_claims,
                validity_days=validity_days,
                types=("VerifiableCredential", "RealEstateProcess"),
                now=now,
            )
            credentials.append(composite)

            for vc in credentials:
                self.store.save_credential(
                    vc.id, process.process_id, self.issuer.slots[vc.id],
                    vc.to_json_dict(),
                )
            self._persist_status_list()

            offer_id = f"offer-{uuid.uuid4().hex[:12]}"
            expires = now + timedelta(seconds=self.offer_ttl_seconds)
            self.store.save_offer(
                offer_id, process.process_id, [vc.id for vc in credentials],
                _format_ts(expires),
            )
            process.issued = [vc.id for vc in credentials]
            process.offer_id = offer_id
            self._transition(process, ProcessState.ISSUED)
            return {"offer_id": offer_id, "redeem_url": f"/offers/{offer_id}/redeem"}

    def redeem_offer(self, offer_id: str) -> list[dict]:
        offer = self.store.load_offer(offer_id)
        if offer is None:
            raise CodedError("UNKNOWN_OFFER", f"no offer {offer_id!r}")
        if offer["consumed"]:
            raise CodedError("OFFER_CONSUMED", "offer was already redeemed")
        if self.clock() > _parse_ts(offer["expires_at"]):
            raise CodedError("OFFER_EXPIRED", "offer expired")
        if not self.store.consume_offer(offer_id):
            raise CodedError("OFFER_CONSUMED", "offer was already redeemed")
        credentials = []
        for cid in offer["credential_ids"]:
            data = self.store.load_credential(cid)
            if data is not None:
                credentials.append(data)
        return credentials

    def revoke_credential(self, credential_id: str) -> None:
        if self.store.load_credential(credential_id) is None:
            raise CodedError("UNKNOWN_CREDENTIAL", f"no credential {credential_id!r}")
        self.issuer.revoke(credential_id)
        self._persist_status_list()

    def revoke_for_process(
        self,
        process_id: str,
        scope: RevocationScope,
        credential_id: Optional[str] = None,
    ) -> Process:
        with self._lock(process_id):
            process = self._load(process_id)
            self._require_operation(process, "revoke_for_process")
            if scope is RevocationScope.ONE:
                if credential_id is None:
                    raise CodedError("MALFORMED", "scope One requires a credential id")
                if credential_id not in process.issued:
                    raise CodedError("UNKNOWN_CREDENTIAL",
                                     f"{credential_id!r} not issued by this process")
                self.revoke_credential(credential_id)
                self._save(process)
                return process
            for cid in process.issued:
                self.revoke_credential(cid)
            self._transition(process, ProcessState.REVOKED)
            return process

    def status_list_credential(self, list_id: str) -> Optional[dict]:
        loaded = self.store.load_status_list(list_id)
        if loaded is None:
            return None
        return loaded[3]
