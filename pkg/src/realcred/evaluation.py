"""Metrics and benchmark harness for the extraction pipeline.

Entity-level spans are scored by strict one-to-one matching; field-level
scoring matches extracted values against gold values under one of the three
match modes, so the reported F1 grows with matcher tolerance.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Optional, Sequence

from .docmodel import (
    DEFAULT_ROW_TOLERANCE,
    DocumentKind,
    ExtractionResult,
    GroundTruthDocument,
    ValueKind,
    assemble_extraction,
    schema_for,
)
from .reconcile import MatchMode, field_match
from .synthgen import (
    DEFAULT_IOU_THRESHOLD,
    DEFAULT_PROFILE,
    NoiseProfile,
    align_labels,
    apply_noise,
    generate_ground_truth,
)

ALL_MODES = (MatchMode.EXACT, MatchMode.TOLERANT, MatchMode.SUPER_TOLERANT)


@dataclass(frozen=True)
class EntitySpan:
    label: str
    start_token: int
    end_token: int  # exclusive

    def __post_init__(self) -> None:
        if self.start_token >= self.end_token:
            raise ValueError("span must satisfy start < end")
        if self.label == "O":
            raise ValueError("spans carry real labels, not 'O'")


@dataclass
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        denom = self.tp + self.fp
        return self.tp / denom if denom else 0.0

    @property
    def recall(self) -> float:
        denom = self.tp + self.fn
        return self.tp / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    @property
    def accuracy(self) -> float:
        denom = self.tp + self.fp + self.fn
        return self.tp / denom if denom else 0.0

    def add(self, other: "Counts") -> None:
        self.tp += other.tp
        self.fp += other.fp
        self.fn += other.fn

    def to_json_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall,
            "f1": self.f1, "accuracy": self.accuracy,
        }


@dataclass
class FieldLevelMetrics:
    per_label: dict[str, Counts] = field(default_factory=dict)

    @property
    def total(self) -> Counts:
        agg = Counts()
        for counts in self.per_label.values():
            agg.add(counts)
        return agg

    def label(self, name: str) -> Counts:
        return self.per_label.setdefault(name, Counts())

    def merge(self, other: "FieldLevelMetrics") -> None:
        for name, counts in other.per_label.items():
            self.label(name).add(counts)

    def to_json_dict(self) -> dict:
        return {
            "per_label": {k: v.to_json_dict() for k, v in sorted(self.per_label.items())},
            "total": self.total.to_json_dict(),
        }


def entity_prf(predicted: Sequence[EntitySpan], gold: Sequence[EntitySpan]) -> FieldLevelMetrics:
    """Strict entity-level scoring: a predicted span counts as a true
    positive iff an unmatched gold span has the identical (label, start,
    end); matching is one-to-one."""
    metrics = FieldLevelMetrics()
    remaining: dict[EntitySpan, int] = {}
    for span in gold:
        remaining[span] = remaining.get(span, 0) + 1
    for span in predicted:
        counts = metrics.label(span.label)
        if remaining.get(span, 0) > 0:
            remaining[span] -= 1
            counts.tp += 1
        else:
            counts.fp += 1
    for span, left in remaining.items():
        metrics.label(span.label).fn += left
    return metrics


def field_level_compare(extracted: ExtractionResult, gold: GroundTruthDocument,
                        mode: MatchMode) -> FieldLevelMetrics:
    """Score extracted values against gold values for one document.

    Per label, extracted values are matched one-to-one to gold values
    greedily in order; a matched pair is a TP, an unmatched extracted value
    a FP, and an unmatched gold value a FN.
    """
    if extracted.kind != gold.kind:
        raise ValueError(f"kind mismatch: {extracted.kind.value} vs {gold.kind.value}")
    metrics = FieldLevelMetrics()
    labels = [fs.label for fs in schema_for(gold.kind)]
    for extra in extracted.fields:
        if extra not in labels:
            labels.append(extra)
    for label in labels:
        counts = metrics.label(label)
        value_kind = next((fs.value_kind for fs in schema_for(gold.kind)
                           if fs.label == label), ValueKind.FREE_TEXT)
        gold_values = gold.values_for(label)
        taken = [False] * len(gold_values)
        for value in extracted.values_for(label):
            matched = False
            for i, gv in enumerate(gold_values):
                if taken[i]:
                    continue
                if field_match(value, gv, mode, value_kind).matched:
                    taken[i] = True
                    matched = True
                    break
            if matched:
                counts.tp += 1
            else:
                counts.fp += 1
        counts.fn += sum(1 for t in taken if not t)
    return metrics


@dataclass
class BenchmarkReport:
    config: dict
    metrics: dict[DocumentKind, dict[MatchMode, FieldLevelMetrics]]
    mean_latency_seconds: dict[DocumentKind, float]

    def f1(self, kind: DocumentKind, mode: MatchMode) -> float:
        return self.metrics[kind][mode].total.f1

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "kinds": {
                kind.value: {
                    "modes": {
                        mode.short_name: m.to_json_dict()
                        for mode, m in self.metrics[kind].items()
                    },
                    "mean_latency_seconds": self.mean_latency_seconds[kind],
                }
                for kind in self.metrics
            },
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "BenchmarkReport":
        metrics: dict[DocumentKind, dict[MatchMode, FieldLevelMetrics]] = {}
        latency: dict[DocumentKind, float] = {}
        for kind_name, entry in payload["kinds"].items():
            kind = DocumentKind(kind_name)
            metrics[kind] = {}
            for mode_name, m in entry["modes"].items():
                mode = MatchMode.from_name(mode_name)
                flm = FieldLevelMetrics()
                for label, c in m["per_label"].items():
                    flm.per_label[label] = Counts(tp=c["tp"], fp=c["fp"], fn=c["fn"])
                metrics[kind][mode] = flm
            latency[kind] = float(entry["mean_latency_seconds"])
        return cls(config=payload.get("config", {}), metrics=metrics,
                   mean_latency_seconds=latency)


def run_pipeline_once(
    kind: DocumentKind,
    seed: int,
    profile: NoiseProfile,
    modes: Sequence[MatchMode],
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
    row_tolerance: int = DEFAULT_ROW_TOLERANCE,
) -> tuple[dict[MatchMode, FieldLevelMetrics], float]:
    """Generate -> noise -> align -> sort -> extract -> compare, timed."""
    start = time.perf_counter()
    gold = generate_ground_truth(kind, seed)
    tokens = apply_noise(gold, profile, seed)
    stream = align_labels(gold, tokens, iou_threshold)
    extracted = assemble_extraction(stream.tokens, kind, row_tolerance)
    per_mode = {mode: field_level_compare(extracted, gold, mode) for mode in modes}
    return per_mode, time.perf_counter() - start


def run_benchmark(
    kinds: Sequence[DocumentKind],
    n_docs: int,
    profile: NoiseProfile = DEFAULT_PROFILE,
    base_seed: int = 0,
    modes: Sequence[MatchMode] = ALL_MODES,
    iou_threshold: float = DEFAULT_IOU_THRESHOLD,
    row_tolerance: int = DEFAULT_ROW_TOLERANCE,
) -> BenchmarkReport:
    """Run the end-to-end pipeline over n documents per kind.

    Metrics are deterministic for fixed seeds; latency is wall clock and
    excluded from determinism guarantees.
    """
    if n_docs < 1:
        raise ValueError("n_docs must be >= 1")
    metrics: dict[DocumentKind, dict[MatchMode, FieldLevelMetrics]] = {}
    latency: dict[DocumentKind, float] = {}
    for kind in kinds:
        per_mode = {mode: FieldLevelMetrics() for mode in modes}
        elapsed = 0.0
        for i in range(n_docs):
            doc_metrics, seconds = run_pipeline_once(
                kind, base_seed + i, profile, modes, iou_threshold, row_tolerance
            )
            for mode in modes:
                per_mode[mode].merge(doc_metrics[mode])
            elapsed += seconds
        metrics[kind] = per_mode
        latency[kind] = elapsed / n_docs
    config = {
        "profile": profile.to_json_dict(),
        "base_seed": base_seed,
        "count": n_docs,
        "modes": [m.short_name for m in modes],
        "iou_threshold": iou_threshold,
        "row_tolerance": row_tolerance,
        "kinds": [k.value for k in kinds],
    }
    return BenchmarkReport(config=config, metrics=metrics, mean_latency_seconds=latency)


# ---------------------------------------------------------------------------
# Human baseline comparison
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("kind", "mode", "f1", "human_f1", "pipeline_s", "human_s", "reduction_pct")


def load_human_baseline(path: Optional[str] = None) -> dict[str, dict]:
    """Load the bundled (or a custom) human baseline table."""
    if path is None:
        text = resources.files("realcred.data").joinpath("human_baseline.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def compare_human(report: BenchmarkReport,
                  human_baseline: Mapping[str, Mapping[str, float]]) -> list[dict]:
    """Compare pipeline timing and F1 against the human baseline.

    reduction = 1 - pipeline_seconds / human_seconds, reported per kind and
    mode; negative reductions are reported as-is.
    """
    rows: list[dict] = []
    for kind in report.metrics:
        if kind.value not in human_baseline:
            raise ValueError(f"human baseline missing kind {kind.value}")
        human = human_baseline[kind.value]
        human_s = float(human["human_seconds"])
        human_f1 = float(human["human_f1"])
        pipeline_s = report.mean_latency_seconds[kind]
        for mode, metrics in report.metrics[kind].items():
            f1 = metrics.total.f1
            rows.append({
                "kind": kind.value,
                "mode": mode.short_name,
                "f1": f1,
                "human_f1": human_f1,
                "pipeline_s": pipeline_s,
                "human_s": human_s,
                "reduction_pct": (1.0 - pipeline_s / human_s) * 100.0,
                "delta_f1": f1 - human_f1,
            })
    return rows


def comparison_csv(rows: Iterable[Mapping]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[col]) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
