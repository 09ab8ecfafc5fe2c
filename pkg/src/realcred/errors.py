"""Shared exception type carrying stable machine-readable error codes."""

from __future__ import annotations


class CodedError(Exception):
    """Error with a stable code; the HTTP layer maps codes to status codes.

    Codes are SCREAMING_SNAKE strings such as ``INVALID_STATE`` or
    ``DUPLICATE_KIND`` and are part of the wire contract.
    """

    def __init__(self, code: str, detail: str = ""):
        super().__init__(detail or code)
        self.code = code
        self.detail = detail or code
