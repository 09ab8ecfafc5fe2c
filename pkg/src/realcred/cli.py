"""Command-line entry points: ``synthgen`` and ``eval``.

    synthgen --kind citizen-card --count 50 --seed 7 --profile default --out DIR
    eval run --kind citizen-card --count 50 --profile default --seed 7 \
             --modes exact,tolerant,super --out report.json
    eval compare --report report.json --human human_baseline.json
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .docmodel import DocumentKind
from .evaluation import (
    BenchmarkReport,
    compare_human,
    comparison_csv,
    load_human_baseline,
    run_benchmark,
)
from .reconcile import MatchMode
from .synthgen import (
    DEFAULT_IOU_THRESHOLD,
    DEFAULT_PROFILE,
    NoiseProfile,
    generate_dataset,
    write_dataset,
)

_KIND_CHOICES = [k.cli_name for k in DocumentKind]


def _load_profile(selector: str) -> NoiseProfile:
    if selector == "default":
        return DEFAULT_PROFILE
    if selector == "zero":
        return NoiseProfile()
    with open(selector, encoding="utf-8") as fh:
        return NoiseProfile.from_json_dict(json.load(fh))


def synthgen_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="synthgen",
        description="Generate a synthetic labeled document dataset.",
    )
    parser.add_argument("--kind", required=True, choices=_KIND_CHOICES)
    parser.add_argument("--count", required=True, type=int)
    parser.add_argument("--seed", required=True, type=int)
    parser.add_argument("--profile", default="default",
                        help="noise profile JSON path, or 'default'/'zero'")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--iou-threshold", type=float, default=DEFAULT_IOU_THRESHOLD)
    args = parser.parse_args(argv)

    kind = DocumentKind.from_cli_name(args.kind)
    profile = _load_profile(args.profile)
    docs = generate_dataset(kind, args.count, args.seed, profile, args.iou_threshold)
    manifest = write_dataset(docs, args.out, profile, args.iou_threshold)
    print(f"wrote {len(manifest['documents'])} documents to {args.out}")
    return 0


def eval_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="eval", description="Benchmark the extraction pipeline."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a benchmark and write a report")
    run.add_argument("--kind", action="append", choices=_KIND_CHOICES + ["all"],
                     default=None, help="repeatable; defaults to all kinds")
    run.add_argument("--count", type=int, default=50)
    run.add_argument("--profile", default="default")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--modes", default="exact,tolerant,super")
    run.add_argument("--out", default="-", help="report path, or '-' for stdout")

    compare = sub.add_parser("compare", help="compare a report to a human baseline")
    compare.add_argument("--report", required=True)
    compare.add_argument("--human", default=None,
                         help="baseline JSON path (bundled table when omitted)")
    compare.add_argument("--out", default="-", help="CSV path, or '-' for stdout")

    args = parser.parse_args(argv)

    if args.command == "run":
        kind_names = args.kind or ["all"]
        if "all" in kind_names:
            kinds = list(DocumentKind)
        else:
            kinds = [DocumentKind.from_cli_name(n) for n in kind_names]
        modes = [MatchMode.from_name(m) for m in args.modes.split(",") if m]
        report = run_benchmark(
            kinds, args.count, _load_profile(args.profile), args.seed, modes
        )
        text = json.dumps(report.to_json_dict(), indent=2, ensure_ascii=False)
        if args.out == "-":
            print(text)
        else:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
            print(f"wrote report to {args.out}")
        return 0

    report = BenchmarkReport.from_json_dict(
        json.loads(Path(args.report).read_text(encoding="utf-8"))
    )
    baseline = load_human_baseline(args.human)
    csv_text = comparison_csv(compare_human(report, baseline))
    if args.out == "-":
        sys.stdout.write(csv_text)
    else:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"wrote comparison to {args.out}")
    return 0


if __name__ == "__main__":
    # `python -m realcred.cli synthgen ...` / `python -m realcred.cli eval ...`
    if len(sys.argv) > 1 and sys.argv[1] == "synthgen":
        raise SystemExit(synthgen_main(sys.argv[2:]))
    if len(sys.argv) > 1 and sys.argv[1] == "eval":
        raise SystemExit(eval_main(sys.argv[2:]))
    print("usage: python -m realcred.cli {synthgen|eval} ...", file=sys.stderr)
    raise SystemExit(2)
