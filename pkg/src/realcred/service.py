"""HTTP/JSON API over the process engine.

Configuration comes from environment variables:

    CREDSVC_BIND                    host:port to serve on (default 127.0.0.1:8470)
    CREDSVC_DATA_DIR                directory for the SQLite store and uploads
    CREDSVC_COORDINATE_TOLERANCE_KM reconciliation distance tolerance
    CREDSVC_OFFER_TTL_SECONDS       credential offer lifetime

Errors are returned as {"error": "<CODE>", "detail": "<text>"}.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional, Union

from fastapi import BackgroundTasks, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .credential import VerifiableCredential, b64url_encode
from .errors import CodedError
from .process import (
    DEFAULT_OFFER_TTL_SECONDS,
    Process,
    ProcessEngine,
    ProcessState,
    RevocationScope,
    ValidationDecision,
    process_to_json,
)
from .reconcile import DEFAULT_COORDINATE_TOLERANCE_KM
from .store import Store

_STATUS_CODES = {
    "UNKNOWN_PROCESS": 404,
    "UNKNOWN_CREDENTIAL": 404,
    "UNKNOWN_OFFER": 404,
    "UNKNOWN_DID": 404,
    "UNKNOWN_DOC": 404,
    "UNKNOWN_LABEL": 400,
    "INVALID_STATE": 409,
    "DUPLICATE_KIND": 409,
    "DUPLICATE_DOC_ID": 409,
    "DID_CONFLICT": 409,
    "OFFER_CONSUMED": 410,
    "OFFER_EXPIRED": 410,
    "VC_INVALID": 400,
    "MALFORMED": 400,
    "CORRECTION_MISMATCH": 400,
    "LIST_FULL": 507,
    "IO_ERROR": 400,
}


def _error_response(code: str, detail: str) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS_CODES.get(code, 400),
        content={"error": code, "detail": detail},
    )


def create_app(
    data_dir: Optional[Union[str, Path]] = None,
    coordinate_tolerance_km: Optional[float] = None,
    offer_ttl_seconds: Optional[int] = None,
    engine: Optional[ProcessEngine] = None,
) -> FastAPI:
    if engine is None:
        data_dir = Path(data_dir or os.environ.get("CREDSVC_DATA_DIR", "./credsvc-data"))
        store = Store(data_dir / "credsvc.sqlite3")
        engine = ProcessEngine(
            store,
            coordinate_tolerance_km=coordinate_tolerance_km
            if coordinate_tolerance_km is not None
            else float(os.environ.get("CREDSVC_COORDINATE_TOLERANCE_KM",
                                      DEFAULT_COORDINATE_TOLERANCE_KM)),
            offer_ttl_seconds=offer_ttl_seconds
            if offer_ttl_seconds is not None
            else int(os.environ.get("CREDSVC_OFFER_TTL_SECONDS",
                                    DEFAULT_OFFER_TTL_SECONDS)),
            document_root=data_dir,
        )

    app = FastAPI(title="Real-estate credentialing service")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )

    @app.exception_handler(CodedError)
    async def coded_error_handler(_: Request, exc: CodedError) -> JSONResponse:
        return _error_response(exc.code, exc.detail)

    @app.exception_handler(ValueError)
    async def value_error_handler(_: Request, exc: ValueError) -> JSONResponse:
        return _error_response("MALFORMED", str(exc))

    def view(process: Process) -> dict:
        return process_to_json(process)

    @app.post("/dids")
    def create_did() -> dict:
        did = engine.create_holder_did()
        return {"uri": did.uri, "publicKey": b64url_encode(did.public_key)}

    @app.get("/dids/{uri:path}")
    def get_did(uri: str) -> dict:
        did = engine.resolve_did(uri)
        if did is None:
            raise CodedError("UNKNOWN_DID", f"no DID {uri!r}")
        return {"uri": did.uri, "publicKey": b64url_encode(did.public_key)}

    @app.post("/processes", status_code=201)
    def create_process(body: dict) -> dict:
        holder = body.get("holder_did")
        if not holder:
            raise CodedError("MALFORMED", "body must carry holder_did")
        return view(engine.create_process(holder))

    @app.get("/processes")
    def list_processes() -> list[dict]:
        return [view(p) for p in engine.list_processes()]

    @app.get("/processes/{process_id}")
    def get_process(process_id: str) -> dict:
        return view(engine.get_process(process_id))

    @app.post("/processes/{process_id}/documents")
    def submit_documents(process_id: str, body: dict,
                         background: BackgroundTasks) -> dict:
        payloads = body["documents"] if "documents" in body else [body]
        if not isinstance(payloads, list) or not payloads:
            raise CodedError("MALFORMED", "no documents in submission")
        process = engine.get_process(process_id)
        for payload in payloads:
            submission = engine.parse_submission(payload)
            process = engine.submit_document(process_id, submission)
        if process.state is ProcessState.EXTRACTING:
            # Extraction is asynchronous: the response reports Extracting and
            # clients poll GET /processes/{id} until it completes.
            background.add_task(_run_extraction_silently, engine, process_id)
        return view(process)

    @app.post("/processes/{process_id}/validation")
    def record_validation(process_id: str, body: dict) -> dict:
        decision_name = str(body.get("decision", "")).strip().lower()
        decisions = {"approve": ValidationDecision.APPROVE,
                     "reject": ValidationDecision.REJECT}
        if decision_name not in decisions:
            raise CodedError("MALFORMED", "decision must be Approve or Reject")
        issuer_did = body.get("issuer_did")
        if not issuer_did:
            raise CodedError("MALFORMED", "body must carry issuer_did")
        process = engine.record_validation(
            process_id, issuer_did, decisions[decision_name],
            body.get("corrections", []),
        )
        return view(process)

    @app.post("/processes/{process_id}/issue")
    def issue(process_id: str, body: Optional[dict] = None) -> dict:
        validity_days = int((body or {}).get("validity_days", 365))
        return engine.issue_for_process(process_id, validity_days=validity_days)

    @app.post("/offers/{offer_id}/redeem")
    def redeem(offer_id: str) -> dict:
        return {"credentials": engine.redeem_offer(offer_id)}

    @app.post("/credentials/{credential_id:path}/revoke")
    def revoke_credential(credential_id: str) -> dict:
        engine.revoke_credential(credential_id)
        return {"credential_id": credential_id, "status": "Revoked"}

    @app.post("/processes/{process_id}/revoke")
    def revoke_process(process_id: str) -> dict:
        return view(engine.revoke_for_process(process_id, RevocationScope.ALL))

    @app.post("/verify")
    def verify(body: dict) -> dict:
        vc = VerifiableCredential.from_json_dict(body)
        result = engine.verify(vc)
        return result.to_json_dict()

    @app.get("/status-lists/{list_id}")
    def status_list(list_id: str) -> dict:
        credential = engine.status_list_credential(list_id)
        if credential is None:
            raise CodedError("UNKNOWN_CREDENTIAL", f"no status list {list_id!r}")
        return credential

    return app


def _run_extraction_silently(engine: ProcessEngine, process_id: str) -> None:
    try:
        engine.run_extraction(process_id)
    except CodedError:
        # Another submission already advanced the process; nothing to do.
        pass


def __getattr__(name: str):
    # Lazy module attribute so `uvicorn realcred.service:app` works without
    # importing the module creating a data directory as a side effect.
    if name == "app":
        return create_app()
    raise AttributeError(name)


def main() -> None:
    import uvicorn

    bind = os.environ.get("CREDSVC_BIND", "127.0.0.1:8470")
    host, _, port = bind.partition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port or 8470))


if __name__ == "__main__":
    main()
