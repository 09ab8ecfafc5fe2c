"""Document kinds, field schemas, geometry, annotations, and reading order.

Everything here is immutable and pure: documents live in a virtual page
coordinate system (no images anywhere), and the reading-order sort is the
deterministic row-then-column ordering applied before field assembly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence, Union

# Virtual page dimensions; all boxes are clamped to this rectangle.
PAGE_WIDTH = 1000
PAGE_HEIGHT = 700

#: Default vertical-center tolerance (pixels) for grouping tokens into rows.
DEFAULT_ROW_TOLERANCE = 12

#: Label used for tokens that belong to no field.
UNLABELED = "O"


class DocumentKind(str, Enum):
    CITIZEN_CARD = "CitizenCard"
    ENERGY_CERTIFICATE = "EnergyCertificate"
    PROPERTY_RECORD = "PropertyRecord"

    @property
    def cli_name(self) -> str:
        return {
            DocumentKind.CITIZEN_CARD: "citizen-card",
            DocumentKind.ENERGY_CERTIFICATE: "energy-certificate",
            DocumentKind.PROPERTY_RECORD: "property-record",
        }[self]

    @classmethod
    def from_cli_name(cls, name: str) -> "DocumentKind":
        for kind in cls:
            if kind.cli_name == name:
                return kind
        raise ValueError(f"unknown document kind {name!r}")


class ValueKind(Enum):
    PERSON_NAME = "PersonName"
    NIF_NUMBER = "NifNumber"
    DATE = "Date"
    SEX = "Sex"
    ADDRESS = "Address"
    REGISTRY_NUMBER = "RegistryNumber"
    ENERGY_CLASS = "EnergyClass"
    GEO_COORDINATE = "GeoCoordinate"
    FREE_TEXT = "FreeText"


@dataclass(frozen=True)
class FieldSchema:
    label: str
    value_kind: ValueKind
    required: bool = True
    repeatable: bool = False


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in virtual page pixels; x0 < x1 and y0 < y1."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if not (0 <= self.x0 < self.x1 and 0 <= self.y0 < self.y1):
            raise ValueError(f"invalid box ({self.x0},{self.y0},{self.x1},{self.y1})")

    @property
    def area(self) -> int:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    @property
    def vertical_center(self) -> float:
        return (self.y0 + self.y1) / 2

    def as_list(self) -> list[int]:
        return [self.x0, self.y0, self.x1, self.y1]


@dataclass(frozen=True)
class Annotation:
    """A labeled text region; label is a schema label or "O"."""

    label: str
    text: str
    box: BoundingBox


@dataclass(frozen=True)
class GoldField:
    """One ground-truth field instance: label, value, and its page box."""

    label: str
    value: str
    box: BoundingBox


@dataclass(frozen=True)
class GroundTruthDocument:
    kind: DocumentKind
    doc_id: str
    fields: tuple[GoldField, ...]
    seed: int

    def values_for(self, label: str) -> list[str]:
        return [f.value for f in self.fields if f.label == label]


@dataclass(frozen=True)
class ExtractedValue:
    value: str
    confidence: float


@dataclass(frozen=True)
class ExtractionResult:
    """Observed field values keyed by label; repeated entities become lists."""

    kind: DocumentKind
    fields: dict[str, tuple[ExtractedValue, ...]] = field(default_factory=dict)

    def values_for(self, label: str) -> list[str]:
        return [v.value for v in self.fields.get(label, ())]


@dataclass(frozen=True)
class Token:
    text: str
    box: BoundingBox
    confidence: float

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("token text must be non-empty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


_SCHEMAS: dict[DocumentKind, tuple[FieldSchema, ...]] = {
    DocumentKind.CITIZEN_CARD: (
        FieldSchema("FIRST_NAME", ValueKind.PERSON_NAME),
        FieldSchema("LAST_NAME", ValueKind.PERSON_NAME),
        FieldSchema("SEX", ValueKind.SEX),
        FieldSchema("DATE_OF_BIRTH", ValueKind.DATE),
        FieldSchema("NIF", ValueKind.NIF_NUMBER),
        FieldSchema("DOC_NUMBER", ValueKind.REGISTRY_NUMBER),
    ),
    DocumentKind.ENERGY_CERTIFICATE: (
        FieldSchema("CERT_NUMBER", ValueKind.REGISTRY_NUMBER),
        FieldSchema("ENERGY_CLASS", ValueKind.ENERGY_CLASS),
        FieldSchema("ADDRESS", ValueKind.ADDRESS),
        FieldSchema("LATITUDE", ValueKind.GEO_COORDINATE),
        FieldSchema("LONGITUDE", ValueKind.GEO_COORDINATE),
        FieldSchema("HOLDER_NAME", ValueKind.PERSON_NAME),
        FieldSchema("HOLDER_NIF", ValueKind.NIF_NUMBER),
    ),
    DocumentKind.PROPERTY_RECORD: (
        FieldSchema("REGISTRY_NUMBER", ValueKind.REGISTRY_NUMBER),
        FieldSchema("ADDRESS", ValueKind.ADDRESS),
        FieldSchema("LATITUDE", ValueKind.GEO_COORDINATE),
        FieldSchema("LONGITUDE", ValueKind.GEO_COORDINATE),
        FieldSchema("OWNER_NAME", ValueKind.PERSON_NAME, repeatable=True),
        FieldSchema("OWNER_NIF", ValueKind.NIF_NUMBER, repeatable=True),
    ),
}


def schema_for(kind: DocumentKind) -> list[FieldSchema]:
    """Return the fixed field schema of a document kind."""
    return list(_SCHEMAS[kind])


def schema_index(kind: DocumentKind, label: str) -> int:
    for i, fs in enumerate(_SCHEMAS[kind]):
        if fs.label == label:
            return i
    raise KeyError(f"label {label!r} not in {kind.value} schema")


def field_schema(kind: DocumentKind, label: str) -> FieldSchema:
    return _SCHEMAS[kind][schema_index(kind, label)]


@dataclass(frozen=True)
class Violation:
    code: str  # MISSING_REQUIRED | UNKNOWN_LABEL | NOT_REPEATABLE
    label: str

    def __str__(self) -> str:
        return f"{self.code}({self.label})"


def validate_document(doc: Union[GroundTruthDocument, ExtractionResult]) -> list[Violation]:
    """Check a document against its kind's schema.

    Empty report iff all required fields are present, every label is in the
    schema, and non-repeatable labels carry at most one value.
    """
    schema = {fs.label: fs for fs in _SCHEMAS[doc.kind]}
    counts: dict[str, int] = {}
    if isinstance(doc, GroundTruthDocument):
        for f in doc.fields:
            counts[f.label] = counts.get(f.label, 0) + 1
    else:
        for label, values in doc.fields.items():
            counts[label] = len(values)

    violations: list[Violation] = []
    for label in counts:
        if label not in schema:
            violations.append(Violation("UNKNOWN_LABEL", label))
    for label, fs in schema.items():
        n = counts.get(label, 0)
        if fs.required and n == 0:
            violations.append(Violation("MISSING_REQUIRED", label))
        if not fs.repeatable and n > 1:
            violations.append(Violation("NOT_REPEATABLE", label))
    return violations


def _row_groups(tokens: Sequence[Token], row_tolerance: int) -> list[list[int]]:
    """Group token indices into rows by vertical-center proximity.

    Two tokens share a row iff their vertical centers differ by at most
    ``row_tolerance``, transitively closed. On a 1-D axis the transitive
    closure equals chaining consecutive tokens of the center-sorted order.
    """
    order = sorted(range(len(tokens)), key=lambda i: (tokens[i].box.vertical_center, i))
    rows: list[list[int]] = []
    for i in order:
        center = tokens[i].box.vertical_center
        if rows and center - tokens[rows[-1][-1]].box.vertical_center <= row_tolerance:
            rows[-1].append(i)
        else:
            rows.append([i])
    return rows


def reading_order_indices(tokens: Sequence[Token], row_tolerance: int) -> list[int]:
    """Index permutation realizing the reading order (rows top-down, then x)."""
    if row_tolerance < 0:
        raise ValueError("row_tolerance must be >= 0")
    ordered: list[int] = []
    for row in _row_groups(tokens, row_tolerance):
        ordered.extend(sorted(row, key=lambda i: (tokens[i].box.x0, i)))
    return ordered


def reading_order_sort(tokens: Sequence[Token], row_tolerance: int) -> list[Token]:
    """Sort tokens into reading order.

    Rows are ordered by mean vertical center ascending; within a row tokens
    are ordered by x0 ascending, stably with respect to the input order.
    The result is always a permutation of the input.
    """
    return [tokens[i] for i in reading_order_indices(tokens, row_tolerance)]


def compute_iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes, in [0, 1]."""
    ix = min(a.x1, b.x1) - max(a.x0, b.x0)
    iy = min(a.y1, b.y1) - max(a.y0, b.y0)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    return inter / union


def assemble_extraction(
    labeled_tokens: Sequence[tuple[Token, str]],
    kind: DocumentKind,
    row_tolerance: int = DEFAULT_ROW_TOLERANCE,
) -> ExtractionResult:
    """Assemble field values from a labeled token stream.

    Tokens are put into reading order, then consecutive runs with the same
    non-"O" label are joined into one value (mean token confidence). For
    repeatable labels each run becomes a separate value; for non-repeatable
    labels all runs merge into a single value in reading order.
    """
    tokens = [t for t, _ in labeled_tokens]
    order = reading_order_indices(tokens, row_tolerance)
    fields: dict[str, list[ExtractedValue]] = {}
    run_label: str | None = None
    run_tokens: list[Token] = []

    def flush() -> None:
        nonlocal run_label, run_tokens
        if run_label is None or not run_tokens:
            run_label, run_tokens = None, []
            return
        value = " ".join(t.text for t in run_tokens)
        conf = sum(t.confidence for t in run_tokens) / len(run_tokens)
        fields.setdefault(run_label, []).append(ExtractedValue(value, conf))
        run_label, run_tokens = None, []

    for i in order:
        token, label = labeled_tokens[i]
        if label == UNLABELED:
            flush()
            continue
        if label != run_label:
            flush()
            run_label = label
        run_tokens.append(token)
    flush()

    merged: dict[str, tuple[ExtractedValue, ...]] = {}
    for label, values in fields.items():
        try:
            repeatable = field_schema(kind, label).repeatable
        except KeyError:
            repeatable = True  # unknown labels are kept as-is; validation flags them
        if repeatable or len(values) == 1:
            merged[label] = tuple(values)
        else:
            text = " ".join(v.value for v in values)
            conf = sum(v.confidence for v in values) / len(values)
            merged[label] = (ExtractedValue(text, conf),)
    return ExtractionResult(kind=kind, fields=merged)


# ---------------------------------------------------------------------------
# Annotation file format
# ---------------------------------------------------------------------------
# { "kind": "<DocumentKind>", "doc_id": "<string>",
#   "entities": [ { "label": "<LABEL|O>", "text": "...", "box": [x0,y0,x1,y1] } ] }


def annotation_payload(kind: DocumentKind, doc_id: str, entities: Iterable[Annotation]) -> dict:
    return {
        "kind": kind.value,
        "doc_id": doc_id,
        "entities": [
            {"label": e.label, "text": e.text, "box": e.box.as_list()} for e in entities
        ],
    }


def parse_annotation_payload(payload: dict) -> tuple[DocumentKind, str, list[Annotation]]:
    try:
        kind = DocumentKind(payload["kind"])
        doc_id = str(payload["doc_id"])
        entities = [
            Annotation(
                label=str(e["label"]),
                text=str(e["text"]),
                box=BoundingBox(*(int(v) for v in e["box"])),
            )
            for e in payload["entities"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed annotation payload: {exc}") from exc
    return kind, doc_id, entities


def write_annotation(path: Union[str, Path], kind: DocumentKind, doc_id: str,
                     entities: Iterable[Annotation]) -> None:
    payload = annotation_payload(kind, doc_id, entities)
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def read_annotation(path: Union[str, Path]) -> tuple[DocumentKind, str, list[Annotation]]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return parse_annotation_payload(payload)
