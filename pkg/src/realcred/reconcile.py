"""Normalization, similarity measures, domain validators, and reconciliation.

Matching happens under a three-mode lattice (exact < tolerant < super
tolerant) whose predicates are nested by construction: anything that matches
exactly also matches tolerantly, and anything tolerant also matches under the
super-tolerant rules.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Mapping, Optional

from .docmodel import DocumentKind, ExtractionResult, ValueKind, schema_for
from .errors import CodedError

EARTH_RADIUS_KM = 6371.0

#: Default maximum distance between Energy Certificate and Property Record
#: coordinates before reconciliation flags a mismatch.
DEFAULT_COORDINATE_TOLERANCE_KM = 1.0


class MatchMode(IntEnum):
    EXACT = 1
    TOLERANT = 2
    SUPER_TOLERANT = 3

    @classmethod
    def from_name(cls, name: str) -> "MatchMode":
        key = name.strip().lower().replace("-", "_")
        aliases = {
            "exact": cls.EXACT,
            "tolerant": cls.TOLERANT,
            "super": cls.SUPER_TOLERANT,
            "super_tolerant": cls.SUPER_TOLERANT,
            "supertolerant": cls.SUPER_TOLERANT,
        }
        if key not in aliases:
            raise ValueError(f"unknown match mode {name!r}")
        return aliases[key]

    @property
    def short_name(self) -> str:
        return {
            MatchMode.EXACT: "exact",
            MatchMode.TOLERANT: "tolerant",
            MatchMode.SUPER_TOLERANT: "super_tolerant",
        }[self]


class MatchReason(Enum):
    EXACT_EQUAL = "ExactEqual"
    NORMALIZED_EQUAL = "NormalizedEqual"
    EDIT_WITHIN_THRESHOLD = "EditWithinThreshold"
    DOMAIN_EQUAL = "DomainEqual"
    NO_MATCH = "NoMatch"


@dataclass(frozen=True)
class MatchVerdict:
    matched: bool
    mode_used: MatchMode
    score: float
    reason: MatchReason


# Punctuation removed by tolerant normalization (replaced by spaces so that
# token boundaries survive).
_PUNCT = set(".,;:-/")

# Portuguese street/title abbreviations expanded by super-tolerant
# normalization. Keys are matched against casefolded whitespace tokens.
_ABBREVIATIONS = {
    "r.": "rua",
    "av.": "avenida",
    "lg.": "largo",
    "nº": "numero",
    "no.": "numero",
    "dr.": "doutor",
    "sto.": "santo",
    "sta.": "santa",
}


def _strip_diacritics(s: str) -> str:
    decomposed = unicodedata.normalize("NFD", s)
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def normalize(s: str, mode: MatchMode) -> str:
    """Normalize a string for matching under the given mode.

    Exact is the identity. Tolerant casefolds, strips diacritics, turns the
    punctuation characters ``.,;:-/`` into spaces, and collapses whitespace.
    Super tolerant additionally expands common Portuguese abbreviations,
    drops every remaining non-alphanumeric character, and strips leading
    zeros from pure-digit tokens. All modes are idempotent.
    """
    if mode is MatchMode.EXACT:
        return s
    t = _strip_diacritics(s.casefold())
    if mode is MatchMode.TOLERANT:
        t = "".join(" " if c in _PUNCT else c for c in t)
        return " ".join(t.split())
    # super tolerant
    tokens = [_ABBREVIATIONS.get(tok, tok) for tok in t.split()]
    t = " ".join(tokens)
    t = "".join(c if (c.isalnum() or c == " ") else " " for c in t)
    out = []
    for tok in t.split():
        if tok.isdigit():
            tok = tok.lstrip("0") or "0"
        out.append(tok)
    return " ".join(out)


def levenshtein(a: str, b: str) -> int:
    """Minimum number of unit-cost edits (insert/delete/substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, 1):
            append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _grams(s: str, n: int) -> frozenset[str]:
    if not s:
        return frozenset()
    if len(s) < n:
        return frozenset((s,))
    return frozenset(s[i : i + n] for i in range(len(s) - n + 1))


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union if union else 1.0


def ngram_jaccard(a: str, b: str, n: int) -> float:
    """Jaccard similarity of character n-gram sets."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _jaccard(_grams(a, n), _grams(b, n))


def token_jaccard(a: str, b: str) -> float:
    """Jaccard similarity of whitespace-token sets (tolerant-normalized)."""
    ta = frozenset(normalize(a, MatchMode.TOLERANT).split())
    tb = frozenset(normalize(b, MatchMode.TOLERANT).split())
    return _jaccard(ta, tb)


_SOUNDEX_CODES = {}
for _letters, _digit in (("bfpv", "1"), ("cgjkqsxz", "2"), ("dt", "3"),
                         ("l", "4"), ("mn", "5"), ("r", "6")):
    for _c in _letters:
        _SOUNDEX_CODES[_c] = _digit


def _soundex(word: str) -> str:
    code = word[0].upper()
    last = _SOUNDEX_CODES.get(word[0], "")
    for c in word[1:]:
        if c in "hw":
            continue  # same-coded letters separated by h/w collapse
        digit = _SOUNDEX_CODES.get(c)
        if digit is None:
            last = ""  # vowels separate repeated codes
            continue
        if digit != last:
            code += digit
            last = digit
        if len(code) == 4:
            break
    return (code + "000")[:4]


def phonetic_encode(s: str) -> str:
    """Classic 4-character Soundex code of the first whitespace token."""
    tokens = normalize(s, MatchMode.TOLERANT).split()
    first = tokens[0] if tokens else ""
    letters = "".join(c for c in first if "a" <= c <= "z")
    if not letters:
        raise CodedError("NOT_ENCODABLE", f"no letters to encode in {s!r}")
    return _soundex(letters)


class NifStatus(Enum):
    VALID = "valid"
    INVALID = "invalid"
    MALFORMED = "malformed"


def validate_nif(s: str) -> NifStatus:
    """Check a Portuguese taxpayer number (9 digits, mod-11 check digit)."""
    if len(s) != 9 or not s.isascii() or not s.isdigit():
        return NifStatus.MALFORMED
    digits = [int(c) for c in s]
    weighted = sum(d * (10 - i) for i, d in enumerate(digits[:8], start=1))
    check = (11 - weighted % 11) % 11
    if check == 10:
        check = 0
    return NifStatus.VALID if digits[8] == check else NifStatus.INVALID


def make_valid_nif(first_eight: str) -> str:
    """Append the mod-11 check digit to an 8-digit prefix."""
    if len(first_eight) != 8 or not first_eight.isdigit():
        raise ValueError("prefix must be exactly 8 digits")
    digits = [int(c) for c in first_eight]
    check = (11 - sum(d * (10 - i) for i, d in enumerate(digits, start=1)) % 11) % 11
    if check == 10:
        check = 0
    return first_eight + str(check)


def haversine_km(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in kilometers between (lat, lon) points."""
    for lat, lon in (a, b):
        if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
            raise ValueError(f"coordinate out of range: ({lat}, {lon})")
    lat1, lon1 = map(math.radians, a)
    lat2, lon2 = map(math.radians, b)
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def _edit_threshold(max_len: int) -> int:
    return max(1, math.ceil(0.1 * max_len))


def _phonetic_names_equal(a: str, b: str) -> bool:
    ta = normalize(a, MatchMode.TOLERANT).split()
    tb = normalize(b, MatchMode.TOLERANT).split()
    if not ta or len(ta) != len(tb):
        return False
    for wa, wb in zip(ta, tb):
        try:
            ca, cb = phonetic_encode(wa), phonetic_encode(wb)
        except CodedError:
            if wa != wb:
                return False
            continue
        if ca != cb:
            return False
    return True


def field_match(a: str, b: str, mode: MatchMode,
                value_kind: ValueKind = ValueKind.FREE_TEXT) -> MatchVerdict:
    """Compare two field values under a match mode.

    The predicates nest: an exact match is a tolerant match is a
    super-tolerant match, for every pair of strings and every value kind.
    """
    def verdict(matched: bool, score: float, reason: MatchReason) -> MatchVerdict:
        return MatchVerdict(matched=matched, mode_used=mode, score=score, reason=reason)

    if a == b:
        return verdict(True, 1.0, MatchReason.EXACT_EQUAL)
    if mode is MatchMode.EXACT:
        return verdict(False, 0.0, MatchReason.NO_MATCH)

    na, nb = normalize(a, MatchMode.TOLERANT), normalize(b, MatchMode.TOLERANT)
    if na == nb:
        return verdict(True, 1.0, MatchReason.NORMALIZED_EQUAL)
    if mode is MatchMode.SUPER_TOLERANT:
        if normalize(a, MatchMode.SUPER_TOLERANT) == normalize(b, MatchMode.SUPER_TOLERANT):
            return verdict(True, 1.0, MatchReason.DOMAIN_EQUAL)
    max_len = max(len(na), len(nb))
    dist = levenshtein(na, nb)
    if dist <= _edit_threshold(max_len):
        return verdict(True, 1.0 - dist / max_len, MatchReason.EDIT_WITHIN_THRESHOLD)
    if mode is MatchMode.TOLERANT:
        return verdict(False, 0.0, MatchReason.NO_MATCH)

    if (value_kind is ValueKind.PERSON_NAME and _phonetic_names_equal(a, b)
            and token_jaccard(a, b) >= 0.5):
        return verdict(True, 1.0, MatchReason.DOMAIN_EQUAL)
    return verdict(False, 0.0, MatchReason.NO_MATCH)


# ---------------------------------------------------------------------------
# Cross-document reconciliation
# ---------------------------------------------------------------------------


class Rule(Enum):
    NIF_MISMATCH = "NIF_MISMATCH"
    NIF_INVALID = "NIF_INVALID"
    NAME_MISMATCH = "NAME_MISMATCH"
    COORDINATE_MISMATCH = "COORDINATE_MISMATCH"
    MISSING_REFERENCE = "MISSING_REFERENCE"


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class Discrepancy:
    rule: Rule
    severity: Severity
    detail: str
    involved: tuple[tuple[str, str], ...]  # (doc_id, label) pairs, non-empty

    def __post_init__(self) -> None:
        if not self.involved:
            raise ValueError("discrepancy must involve at least one (doc_id, label)")


@dataclass(frozen=True)
class ReconciliationReport:
    process_id: str
    discrepancies: tuple[Discrepancy, ...]
    consistent: bool

    def to_json_dict(self) -> dict:
        return {
            "process_id": self.process_id,
            "consistent": self.consistent,
            "discrepancies": [
                {
                    "rule": d.rule.value,
                    "severity": d.severity.value,
                    "detail": d.detail,
                    "involved": [[doc_id, label] for doc_id, label in d.involved],
                }
                for d in self.discrepancies
            ],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ReconciliationReport":
        discrepancies = tuple(
            Discrepancy(
                rule=Rule(d["rule"]),
                severity=Severity(d["severity"]),
                detail=d["detail"],
                involved=tuple((pair[0], pair[1]) for pair in d["involved"]),
            )
            for d in payload["discrepancies"]
        )
        return cls(
            process_id=payload["process_id"],
            discrepancies=discrepancies,
            consistent=payload["consistent"],
        )


_KIND_ORDER = (
    DocumentKind.CITIZEN_CARD,
    DocumentKind.ENERGY_CERTIFICATE,
    DocumentKind.PROPERTY_RECORD,
)


def _first_value(result: Optional[ExtractionResult], label: str) -> Optional[str]:
    if result is None:
        return None
    values = result.values_for(label)
    return values[0] if values else None


def reconcile_documents(
    docs: Mapping[str, ExtractionResult],
    process_id: str = "",
    coordinate_tolerance_km: float = DEFAULT_COORDINATE_TOLERANCE_KM,
) -> ReconciliationReport:
    """Cross-check extracted documents for consistency.

    Rules, applied in order:
      R1  every NIF-kind value carries a valid check digit;
      R2  NIFs naming the same person agree exactly across documents, and the
          holder appears among the property owners;
      R3  holder/owner names agree under super-tolerant matching;
      R4  Energy Certificate and Property Record coordinates lie within the
          tolerance distance;
      R5  a document kind needed by a cross-check but absent yields a warning.

    The outcome is independent of the order in which documents are supplied.
    """
    if not docs:
        raise ValueError("reconcile_documents requires at least one document")

    by_kind: dict[DocumentKind, tuple[str, ExtractionResult]] = {}
    for doc_id, result in docs.items():
        if result.kind in by_kind:
            raise ValueError(f"more than one {result.kind.value} document supplied")
        by_kind[result.kind] = (doc_id, result)

    found: list[Discrepancy] = []

    def doc(kind: DocumentKind) -> Optional[tuple[str, ExtractionResult]]:
        return by_kind.get(kind)

    # R1: check-digit validity of every NIF-kind value.
    for kind in _KIND_ORDER:
        entry = doc(kind)
        if entry is None:
            continue
        doc_id, result = entry
        for fs in schema_for(kind):
            if fs.value_kind is not ValueKind.NIF_NUMBER:
                continue
            for value in result.values_for(fs.label):
                status = validate_nif(value)
                if status is not NifStatus.VALID:
                    found.append(Discrepancy(
                        rule=Rule.NIF_INVALID,
                        severity=Severity.ERROR,
                        detail=f"{fs.label} value {value!r} is {status.value}",
                        involved=((doc_id, fs.label),),
                    ))

    cc = doc(DocumentKind.CITIZEN_CARD)
    ec = doc(DocumentKind.ENERGY_CERTIFICATE)
    pr = doc(DocumentKind.PROPERTY_RECORD)

    # Subject identity as stated by each document.
    subject_nifs: list[tuple[str, str, str]] = []  # (doc_id, label, value)
    if cc is not None:
        v = _first_value(cc[1], "NIF")
        if v is not None:
            subject_nifs.append((cc[0], "NIF", v))
    if ec is not None:
        v = _first_value(ec[1], "HOLDER_NIF")
        if v is not None:
            subject_nifs.append((ec[0], "HOLDER_NIF", v))

    # R2: same-person NIFs must agree exactly.
    for i in range(len(subject_nifs) - 1):
        (id_a, label_a, val_a), (id_b, label_b, val_b) = subject_nifs[i], subject_nifs[i + 1]
        if not field_match(val_a, val_b, MatchMode.EXACT, ValueKind.NIF_NUMBER).matched:
            found.append(Discrepancy(
                rule=Rule.NIF_MISMATCH,
                severity=Severity.ERROR,
                detail=f"{label_a} {val_a!r} != {label_b} {val_b!r}",
                involved=((id_a, label_a), (id_b, label_b)),
            ))
    if pr is not None and subject_nifs:
        id_s, label_s, val_s = subject_nifs[0]
        owner_nifs = pr[1].values_for("OWNER_NIF")
        if owner_nifs and not any(
            field_match(val_s, v, MatchMode.EXACT, ValueKind.NIF_NUMBER).matched
            for v in owner_nifs
        ):
            found.append(Discrepancy(
                rule=Rule.NIF_MISMATCH,
                severity=Severity.ERROR,
                detail=f"holder NIF {val_s!r} not among property owners",
                involved=((id_s, label_s), (pr[0], "OWNER_NIF")),
            ))

    # R3: holder/owner names match under super-tolerant rules.
    subject_names: list[tuple[str, str, str]] = []
    if cc is not None:
        first = _first_value(cc[1], "FIRST_NAME")
        last = _first_value(cc[1], "LAST_NAME")
        if first is not None or last is not None:
            full = " ".join(v for v in (first, last) if v)
            subject_names.append((cc[0], "FIRST_NAME", full))
    if ec is not None:
        v = _first_value(ec[1], "HOLDER_NAME")
        if v is not None:
            subject_names.append((ec[0], "HOLDER_NAME", v))

    for i in range(len(subject_names) - 1):
        (id_a, label_a, val_a), (id_b, label_b, val_b) = subject_names[i], subject_names[i + 1]
        if not field_match(val_a, val_b, MatchMode.SUPER_TOLERANT, ValueKind.PERSON_NAME).matched:
            found.append(Discrepancy(
                rule=Rule.NAME_MISMATCH,
                severity=Severity.ERROR,
                detail=f"{val_a!r} does not match {val_b!r}",
                involved=((id_a, label_a), (id_b, label_b)),
            ))
    if pr is not None and subject_names:
        id_s, label_s, val_s = subject_names[0]
        owner_names = pr[1].values_for("OWNER_NAME")
        if owner_names and not any(
            field_match(val_s, v, MatchMode.SUPER_TOLERANT, ValueKind.PERSON_NAME).matched
            for v in owner_names
        ):
            found.append(Discrepancy(
                rule=Rule.NAME_MISMATCH,
                severity=Severity.ERROR,
                detail=f"holder name {val_s!r} not among property owners",
                involved=((id_s, label_s), (pr[0], "OWNER_NAME")),
            ))

    # R4: Energy Certificate coordinates against Property Record coordinates.
    if ec is not None and pr is not None:
        coords: list[tuple[float, float]] = []
        parse_failed = False
        for entry in (ec, pr):
            lat_s = _first_value(entry[1], "LATITUDE")
            lon_s = _first_value(entry[1], "LONGITUDE")
            if lat_s is None or lon_s is None:
                found.append(Discrepancy(
                    rule=Rule.MISSING_REFERENCE,
                    severity=Severity.WARNING,
                    detail=f"coordinates missing from {entry[1].kind.value}",
                    involved=((entry[0], "LATITUDE"),),
                ))
                parse_failed = True
                continue
            try:
                lat, lon = float(lat_s), float(lon_s)
                if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
                    raise ValueError
                coords.append((lat, lon))
            except ValueError:
                found.append(Discrepancy(
                    rule=Rule.COORDINATE_MISMATCH,
                    severity=Severity.ERROR,
                    detail=f"unparseable coordinates {lat_s!r}, {lon_s!r}",
                    involved=((entry[0], "LATITUDE"), (entry[0], "LONGITUDE")),
                ))
                parse_failed = True
        if not parse_failed and len(coords) == 2:
            distance = haversine_km(coords[0], coords[1])
            if distance > coordinate_tolerance_km:
                found.append(Discrepancy(
                    rule=Rule.COORDINATE_MISMATCH,
                    severity=Severity.ERROR,
                    detail=(f"coordinates {distance:.2f} km apart "
                            f"(tolerance {coordinate_tolerance_km:g} km)"),
                    involved=((ec[0], "LATITUDE"), (pr[0], "LATITUDE")),
                ))

    # R5: cross-checks that could not run because a document kind is absent.
    cross_checks = (
        (DocumentKind.CITIZEN_CARD, DocumentKind.ENERGY_CERTIFICATE, "holder identity"),
        (DocumentKind.CITIZEN_CARD, DocumentKind.PROPERTY_RECORD, "ownership"),
        (DocumentKind.ENERGY_CERTIFICATE, DocumentKind.PROPERTY_RECORD, "coordinates"),
    )
    for kind_a, kind_b, what in cross_checks:
        a, b = doc(kind_a), doc(kind_b)
        if (a is None) == (b is None):
            continue
        present = a if a is not None else b
        absent_kind = kind_a if a is None else kind_b
        assert present is not None
        found.append(Discrepancy(
            rule=Rule.MISSING_REFERENCE,
            severity=Severity.WARNING,
            detail=f"{absent_kind.value} absent; {what} cross-check skipped",
            involved=((present[0], "*"),),
        ))

    consistent = not any(d.severity is Severity.ERROR for d in found)
    return ReconciliationReport(
        process_id=process_id, discrepancies=tuple(found), consistent=consistent
    )
