"""Embedded SQLite persistence for the credentialing service.

Schema (one writer per process; every mutation is a single transaction so a
restart always resumes from the last committed state):

    processes(process_id TEXT PRIMARY KEY, state TEXT, data TEXT)
    credentials(credential_id TEXT PRIMARY KEY, process_id TEXT,
                slot INTEGER, data TEXT)
    status_lists(list_id TEXT PRIMARY KEY, capacity INTEGER,
                 version INTEGER, bits BLOB, credential TEXT)
    dids(seq INTEGER PRIMARY KEY AUTOINCREMENT, uri TEXT UNIQUE,
         public_key TEXT, prev_hash TEXT, entry_hash TEXT)
    offers(offer_id TEXT PRIMARY KEY, process_id TEXT, credential_ids TEXT,
           expires_at TEXT, consumed INTEGER)
    issuer_keys(did TEXT PRIMARY KEY, secret TEXT)

`data` columns hold JSON documents; keys and layouts are produced by the
process module's serializers.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path
from typing import Optional, Union

from .credential import RegistryEntry

_SCHEMA = """
CREATE TABLE IF NOT EXISTS processes (
    process_id TEXT PRIMARY KEY,
    state TEXT NOT NULL,
    data TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS credentials (
    credential_id TEXT PRIMARY KEY,
    process_id TEXT,
    slot INTEGER,
    data TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS status_lists (
    list_id TEXT PRIMARY KEY,
    capacity INTEGER NOT NULL,
    version INTEGER NOT NULL,
    bits BLOB NOT NULL,
    credential TEXT
);
CREATE TABLE IF NOT EXISTS dids (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    uri TEXT UNIQUE NOT NULL,
    public_key TEXT NOT NULL,
    prev_hash TEXT NOT NULL,
    entry_hash TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS offers (
    offer_id TEXT PRIMARY KEY,
    process_id TEXT NOT NULL,
    credential_ids TEXT NOT NULL,
    expires_at TEXT NOT NULL,
    consumed INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS issuer_keys (
    did TEXT PRIMARY KEY,
    secret TEXT NOT NULL
);
"""


class Store:
    def __init__(self, path: Union[str, Path] = ":memory:") -> None:
        if path != ":memory:":
            Path(path).parent.mkdir(parents=True, exist_ok=True)
        # one shared connection; the lock serializes the threads the HTTP
        # layer and background extraction run on
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.RLock()
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    # -- processes ----------------------------------------------------------

    def save_process(self, process_id: str, state: str, data: dict) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO processes(process_id, state, data) VALUES(?,?,?) "
                "ON CONFLICT(process_id) DO UPDATE SET state=excluded.state, "
                "data=excluded.data",
                (process_id, state, json.dumps(data, ensure_ascii=False)),
            )

    def load_process(self, process_id: str) -> Optional[dict]:
        with self._lock:
            row = self._conn.execute(
                "SELECT data FROM processes WHERE process_id=?", (process_id,)
            ).fetchone()
        return json.loads(row[0]) if row else None

    def list_processes(self) -> list[dict]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT data FROM processes ORDER BY process_id"
            ).fetchall()
        return [json.loads(r[0]) for r in rows]

    # -- credentials --------------------------------------------------------

    def save_credential(self, credential_id: str, process_id: str,
                        slot: int, data: dict) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO credentials(credential_id, process_id, slot, data) "
                "VALUES(?,?,?,?)",
                (credential_id, process_id, slot, json.dumps(data, ensure_ascii=False)),
            )

    def load_credential(self, credential_id: str) -> Optional[dict]:
        with self._lock:
            row = self._conn.execute(
                "SELECT data FROM credentials WHERE credential_id=?", (credential_id,)
            ).fetchone()
        return json.loads(row[0]) if row else None

    def credential_rows(self) -> list[tuple[str, str, int, dict]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT credential_id, process_id, slot, data FROM credentials ORDER BY slot"
            ).fetchall()
        return [(r[0], r[1], r[2], json.loads(r[3])) for r in rows]

    # -- status lists -------------------------------------------------------

    def save_status_list(self, list_id: str, capacity: int, version: int,
                         bits: bytes, credential: Optional[dict]) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO status_lists(list_id, capacity, version, bits, credential) "
                "VALUES(?,?,?,?,?)",
                (list_id, capacity, version, bits,
                 json.dumps(credential, ensure_ascii=False) if credential else None),
            )

    def load_status_list(self, list_id: str) -> Optional[tuple[int, int, bytes, Optional[dict]]]:
        with self._lock:
            row = self._conn.execute(
                "SELECT capacity, version, bits, credential FROM status_lists WHERE list_id=?",
                (list_id,),
            ).fetchone()
        if row is None:
            return None
        credential = json.loads(row[3]) if row[3] else None
        return int(row[0]), int(row[1]), bytes(row[2]), credential

    def status_list_ids(self) -> list[str]:
        with self._lock:
            rows = self._conn.execute("SELECT list_id FROM status_lists").fetchall()
        return [r[0] for r in rows]

    # -- DID registry -------------------------------------------------------

    def append_did(self, entry: RegistryEntry) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR IGNORE INTO dids(uri, public_key, prev_hash, entry_hash) "
                "VALUES(?,?,?,?)",
                (entry.uri, entry.public_key.hex(), entry.prev_hash, entry.entry_hash),
            )

    def did_entries(self) -> list[RegistryEntry]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT uri, public_key, prev_hash, entry_hash FROM dids ORDER BY seq"
            ).fetchall()
        return [
            RegistryEntry(uri=r[0], public_key=bytes.fromhex(r[1]),
                          prev_hash=r[2], entry_hash=r[3])
            for r in rows
        ]

    # -- offers -------------------------------------------------------------

    def save_offer(self, offer_id: str, process_id: str, credential_ids: list[str],
                   expires_at: str, consumed: bool = False) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO offers(offer_id, process_id, credential_ids, "
                "expires_at, consumed) VALUES(?,?,?,?,?)",
                (offer_id, process_id, json.dumps(credential_ids), expires_at,
                 int(consumed)),
            )

    def load_offer(self, offer_id: str) -> Optional[dict]:
        with self._lock:
            row = self._conn.execute(
                "SELECT process_id, credential_ids, expires_at, consumed FROM offers "
                "WHERE offer_id=?",
                (offer_id,),
            ).fetchone()
        if row is None:
            return None
        return {
            "process_id": row[0],
            "credential_ids": json.loads(row[1]),
            "expires_at": row[2],
            "consumed": bool(row[3]),
        }

    def consume_offer(self, offer_id: str) -> bool:
        """Atomically mark an offer consumed; False if already consumed."""
        with self._lock, self._conn:
            cur = self._conn.execute(
                "UPDATE offers SET consumed=1 WHERE offer_id=? AND consumed=0",
                (offer_id,),
            )
            return cur.rowcount == 1

    # -- issuer keys --------------------------------------------------------

    def save_issuer_key(self, did: str, secret_hex: str) -> None:
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO issuer_keys(did, secret) VALUES(?,?)",
                (did, secret_hex),
            )

    def load_issuer_key(self) -> Optional[tuple[str, str]]:
        with self._lock:
            row = self._conn.execute(
                "SELECT did, secret FROM issuer_keys LIMIT 1"
            ).fetchone()
        return (row[0], row[1]) if row else None
