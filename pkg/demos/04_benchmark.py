"""
End-to-end pipeline benchmark
=============================

Run generate -> noise -> align -> sort -> extract -> compare over synthetic
documents, report field-level F1 under the three match modes, and compare
pipeline timing against the bundled human baseline.
"""

from realcred import DocumentKind, run_benchmark
from realcred.evaluation import ALL_MODES, compare_human, comparison_csv, load_human_baseline
from realcred.synthgen import DEFAULT_PROFILE

report = run_benchmark(list(DocumentKind), n_docs=50, profile=DEFAULT_PROFILE,
                       base_seed=0)

print(f"{'kind':20s} {'exact':>8s} {'tolerant':>9s} {'super':>8s} {'ms/doc':>8s}")
for kind in DocumentKind:
    f1s = [report.f1(kind, mode) for mode in ALL_MODES]
    ms = report.mean_latency_seconds[kind] * 1000
    print(f"{kind.value:20s} {f1s[0]:8.4f} {f1s[1]:9.4f} {f1s[2]:8.4f} {ms:8.2f}")

# F1 grows with tolerance on every kind: the match predicates nest, so a
# stricter mode can never score higher than a looser one.

rows = compare_human(report, load_human_baseline())
print("\nhuman baseline comparison:")
print(comparison_csv(rows))
