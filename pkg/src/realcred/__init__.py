"""Real-estate document credentialing pipeline.

Synthetic documents pass through a simulated noisy extraction channel, are
reconciled across documents under three matching tolerances, and are issued
as signed verifiable credentials with bitstring status-list revocation,
managed by a staged workflow service.
"""

from .docmodel import (
    BoundingBox,
    DocumentKind,
    ExtractionResult,
    FieldSchema,
    GroundTruthDocument,
    Token,
    ValueKind,
    compute_iou,
    reading_order_sort,
    schema_for,
    validate_document,
)
from .errors import CodedError
from .reconcile import (
    MatchMode,
    MatchVerdict,
    ReconciliationReport,
    field_match,
    haversine_km,
    levenshtein,
    ngram_jaccard,
    normalize,
    phonetic_encode,
    reconcile_documents,
    token_jaccard,
    validate_nif,
)
from .synthgen import (
    DEFAULT_PROFILE,
    ZERO_PROFILE,
    LabeledTokenStream,
    NoiseProfile,
    align_labels,
    apply_noise,
    generate_ground_truth,
    read_dataset,
    write_dataset,
)
from .credential import (
    CredentialState,
    DidRegistry,
    Issuer,
    StatusEntry,
    StatusList,
    Verdict,
    VerifiableCredential,
    canonicalize,
    decode_status_list,
    encode_status_list,
    issue_credential,
    verify_credential,
)
from .process import Process, ProcessEngine, ProcessState
from .evaluation import (
    BenchmarkReport,
    EntitySpan,
    FieldLevelMetrics,
    compare_human,
    entity_prf,
    field_level_compare,
    run_benchmark,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport", "BoundingBox", "CodedError", "CredentialState",
    "DEFAULT_PROFILE", "DidRegistry", "DocumentKind", "EntitySpan",
    "ExtractionResult", "FieldLevelMetrics", "FieldSchema",
    "GroundTruthDocument", "Issuer", "LabeledTokenStream", "MatchMode",
    "MatchVerdict", "NoiseProfile", "Process", "ProcessEngine",
    "ProcessState", "ReconciliationReport", "StatusEntry", "StatusList",
    "Token", "ValueKind", "Verdict", "VerifiableCredential", "ZERO_PROFILE",
    "align_labels", "apply_noise", "canonicalize", "compare_human",
    "compute_iou", "decode_status_list", "encode_status_list", "entity_prf",
    "field_level_compare", "field_match", "generate_ground_truth",
    "haversine_km", "issue_credential", "levenshtein", "ngram_jaccard",
    "normalize", "phonetic_encode", "read_dataset", "reading_order_sort",
    "reconcile_documents", "run_benchmark", "schema_for", "token_jaccard",
    "validate_document", "validate_nif", "verify_credential", "write_dataset",
]
