"""Metrics: entity spans, field-level comparison, benchmarks, human baseline."""

from __future__ import annotations

import itertools

import pytest

from realcred.docmodel import (
    DocumentKind,
    ExtractedValue,
    ExtractionResult,
    assemble_extraction,
)
from realcred.evaluation import (
    ALL_MODES,
    BenchmarkReport,
    Counts,
    EntitySpan,
    FieldLevelMetrics,
    compare_human,
    comparison_csv,
    entity_prf,
    field_level_compare,
    load_human_baseline,
    run_benchmark,
)
from realcred.reconcile import MatchMode
from realcred.synthgen import (
    DEFAULT_PROFILE,
    ZERO_PROFILE,
    align_labels,
    apply_noise,
    generate_ground_truth,
)


def _brute_force_prf(predicted, gold):
    """Optimal one-to-one strict matching by trying every assignment."""
    best_tp = 0
    indices = range(len(gold))
    for k in range(min(len(predicted), len(gold)), -1, -1):
        if k <= best_tp:
            break
        for pred_subset in itertools.combinations(range(len(predicted)), k):
            for gold_perm in itertools.permutations(indices, k):
                if all(predicted[p] == gold[g] for p, g in zip(pred_subset, gold_perm)):
                    best_tp = max(best_tp, k)
                    break
            if best_tp == k:
                break
    tp = best_tp
    return tp, len(predicted) - tp, len(gold) - tp


class TestEntityPrf:
    def test_identical_spans(self):
        spans = [EntitySpan("FIRST_NAME", 0, 2), EntitySpan("NIF", 4, 5)]
        metrics = entity_prf(spans, list(spans))
        total = metrics.total
        assert (total.precision, total.recall, total.f1) == (1.0, 1.0, 1.0)

    def test_counts_formula(self):
        gold = [EntitySpan("A", i, i + 1) for i in range(10)]
        predicted = gold[:8] + [EntitySpan("B", 90, 91), EntitySpan("B", 92, 93)]
        total = entity_prf(predicted, gold).total
        assert (total.tp, total.fp, total.fn) == (8, 2, 2)
        assert total.precision == pytest.approx(0.8)
        assert total.recall == pytest.approx(0.8)
        assert total.f1 == pytest.approx(0.8)

    def test_empty_prediction(self):
        gold = [EntitySpan("A", 0, 1)]
        total = entity_prf([], gold).total
        assert (total.precision, total.recall, total.f1) == (0.0, 0.0, 0.0)

    def test_against_brute_force_on_all_small_sets(self):
        # exhaustive over every multiset of size <= 4 drawn from a span pool
        pool = [
            EntitySpan("A", 0, 1), EntitySpan("A", 1, 2), EntitySpan("B", 0, 1),
            EntitySpan("B", 2, 4), EntitySpan("A", 0, 2),
        ]
        multisets = [
            list(combo)
            for k in range(5)
            for combo in itertools.combinations_with_replacement(pool, k)
        ]
        for predicted in multisets:
            for gold in multisets:
                total = entity_prf(predicted, gold).total
                assert (total.tp, total.fp, total.fn) == \
                    _brute_force_prf(predicted, gold)

    def test_span_validation(self):
        with pytest.raises(ValueError):
            EntitySpan("A", 2, 2)
        with pytest.raises(ValueError):
            EntitySpan("O", 0, 1)

    def test_micro_aggregate_equals_label_sum(self):
        predicted = [EntitySpan("A", 0, 1), EntitySpan("B", 1, 2), EntitySpan("B", 5, 6)]
        gold = [EntitySpan("A", 0, 1), EntitySpan("B", 2, 3)]
        metrics = entity_prf(predicted, gold)
        total = metrics.total
        assert total.tp == sum(c.tp for c in metrics.per_label.values())
        assert total.fp == sum(c.fp for c in metrics.per_label.values())
        assert total.fn == sum(c.fn for c in metrics.per_label.values())


def _extraction_for(gold, overrides=None):
    fields = {}
    for field in gold.fields:
        fields.setdefault(field.label, []).append(ExtractedValue(field.value, 1.0))
    if overrides:
        for label, values in overrides.items():
            fields[label] = [ExtractedValue(v, 1.0) for v in values]
    return ExtractionResult(kind=gold.kind, fields={k: tuple(v) for k, v in fields.items()})


class TestFieldLevelCompare:
    def test_identity_extraction_scores_one(self):
        gold = generate_ground_truth(DocumentKind.CITIZEN_CARD, 12)
        metrics = field_level_compare(_extraction_for(gold), gold, MatchMode.EXACT)
        assert metrics.total.f1 == 1.0
        assert all(c.f1 == 1.0 for c in metrics.per_label.values() if c.tp + c.fn)

    def test_case_difference_by_mode(self):
        gold = generate_ground_truth(DocumentKind.CITIZEN_CARD, 12)
        first = gold.values_for("FIRST_NAME")[0]
        extraction = _extraction_for(gold, {"FIRST_NAME": [first.upper()]})
        if first == first.upper():
            pytest.skip("seed produced an all-uppercase name")
        exact = field_level_compare(extraction, gold, MatchMode.EXACT)
        assert exact.per_label["FIRST_NAME"].fp == 1
        assert exact.per_label["FIRST_NAME"].fn == 1
        tolerant = field_level_compare(extraction, gold, MatchMode.TOLERANT)
        assert tolerant.per_label["FIRST_NAME"].tp == 1

    def test_kind_mismatch_rejected(self):
        gold = generate_ground_truth(DocumentKind.CITIZEN_CARD, 1)
        other = ExtractionResult(kind=DocumentKind.PROPERTY_RECORD, fields={})
        with pytest.raises(ValueError):
            field_level_compare(other, gold, MatchMode.EXACT)

    def test_missing_value_counts_fn_only(self):
        gold = generate_ground_truth(DocumentKind.CITIZEN_CARD, 3)
        extraction = _extraction_for(gold, {"NIF": []})
        metrics = field_level_compare(extraction, gold, MatchMode.EXACT)
        assert metrics.per_label["NIF"].fn == 1
        assert metrics.per_label["NIF"].fp == 0

    def test_repeated_owner_values_matched_in_order(self):
        gold = generate_ground_truth(DocumentKind.PROPERTY_RECORD, 2)
        owners = gold.values_for("OWNER_NAME")
        metrics = field_level_compare(_extraction_for(gold), gold, MatchMode.EXACT)
        assert metrics.per_label["OWNER_NAME"].tp == len(owners)


class TestBenchmark:
    def test_zero_noise_is_perfect_everywhere(self):
        report = run_benchmark(list(DocumentKind), 10, ZERO_PROFILE, base_seed=500)
        for kind in DocumentKind:
            for mode in ALL_MODES:
                assert report.f1(kind, mode) == 1.0, (kind, mode)

    def test_default_profile_produces_errors_at_exact(self):
        report = run_benchmark([DocumentKind.CITIZEN_CARD], 50, DEFAULT_PROFILE,
                               base_seed=0, modes=[MatchMode.EXACT])
        total = report.metrics[DocumentKind.CITIZEN_CARD][MatchMode.EXACT].total
        assert total.fp + total.fn > 0

    def test_metrics_deterministic_for_fixed_seeds(self):
        a = run_benchmark([DocumentKind.CITIZEN_CARD], 10, DEFAULT_PROFILE, base_seed=7)
        b = run_benchmark([DocumentKind.CITIZEN_CARD], 10, DEFAULT_PROFILE, base_seed=7)
        for mode in ALL_MODES:
            assert a.f1(DocumentKind.CITIZEN_CARD, mode) == b.f1(DocumentKind.CITIZEN_CARD, mode)

    def test_report_echoes_config(self):
        report = run_benchmark([DocumentKind.CITIZEN_CARD], 3, DEFAULT_PROFILE,
                               base_seed=11)
        assert report.config["profile"] == DEFAULT_PROFILE.to_json_dict()
        assert report.config["base_seed"] == 11
        assert report.config["count"] == 3

    def test_report_json_round_trip(self):
        report = run_benchmark([DocumentKind.CITIZEN_CARD], 5, DEFAULT_PROFILE)
        payload = report.to_json_dict()
        loaded = BenchmarkReport.from_json_dict(payload)
        for mode in ALL_MODES:
            assert loaded.f1(DocumentKind.CITIZEN_CARD, mode) == \
                report.f1(DocumentKind.CITIZEN_CARD, mode)

    def test_metrics_permutation_invariant_in_document_order(self):
        docs = [(generate_ground_truth(DocumentKind.CITIZEN_CARD, s)) for s in range(8)]
        def aggregate(order):
            agg = FieldLevelMetrics()
            for gold in order:
                stream = align_labels(gold, apply_noise(gold, DEFAULT_PROFILE, gold.seed))
                extraction = assemble_extraction(stream.tokens, gold.kind)
                agg.merge(field_level_compare(extraction, gold, MatchMode.TOLERANT))
            return agg.total
        forward = aggregate(docs)
        backward = aggregate(list(reversed(docs)))
        assert (forward.tp, forward.fp, forward.fn) == \
            (backward.tp, backward.fp, backward.fn)


class TestCompareHuman:
    def _report_with_latency(self, latency):
        report = run_benchmark([DocumentKind.CITIZEN_CARD], 2, ZERO_PROFILE)
        report.mean_latency_seconds[DocumentKind.CITIZEN_CARD] = latency
        return report

    def test_direct_formula(self):
        report = self._report_with_latency(5.0)
        rows = compare_human(report, {"CitizenCard": {"human_seconds": 150.0,
                                                      "human_f1": 0.95}})
        assert rows[0]["reduction_pct"] == pytest.approx(96.666666, abs=1e-4)

    def test_negative_reduction_reported_as_is(self):
        report = self._report_with_latency(200.0)
        rows = compare_human(report, {"CitizenCard": {"human_seconds": 150.0,
                                                      "human_f1": 0.95}})
        assert rows[0]["reduction_pct"] < 0

    def test_missing_kind_rejected(self):
        report = self._report_with_latency(5.0)
        with pytest.raises(ValueError):
            compare_human(report, {"EnergyCertificate": {"human_seconds": 100,
                                                         "human_f1": 0.9}})

    def test_bundled_baseline_covers_all_kinds(self):
        baseline = load_human_baseline()
        assert set(baseline) == {k.value for k in DocumentKind}
        for entry in baseline.values():
            assert 124.0 <= entry["human_seconds"] <= 239.0

    def test_csv_columns(self):
        report = self._report_with_latency(5.0)
        rows = compare_human(report, load_human_baseline())
        csv_text = comparison_csv(rows)
        header = csv_text.splitlines()[0]
        assert header == "kind,mode,f1,human_f1,pipeline_s,human_s,reduction_pct"
        assert len(csv_text.splitlines()) == 1 + len(rows)


class TestCounts:
    def test_f1_definition(self):
        c = Counts(tp=8, fp=2, fn=2)
        assert c.f1 == pytest.approx(2 * 0.8 * 0.8 / 1.6)
        assert Counts().f1 == 0.0

    def test_accuracy_definition(self):
        c = Counts(tp=6, fp=2, fn=2)
        assert c.accuracy == pytest.approx(0.6)
