"""Rendering of the two-run comparison: aligned text table, JSON body,
TSV rows, and figures written next to them. Also the docmap-eval CLI."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from .evaluation import (
    DEFAULT_CUTOFFS,
    RECALL_LEVELS,
    ComparisonReport,
    ComparisonRow,
    comparison_report,
    load_qrels,
    load_run,
)


def _fmt_pct(pct: int | None) -> str:
    return "n/a" if pct is None else str(pct)


def format_text(report: ComparisonReport, name_a: str = "Run A", name_b: str = "Run B") -> str:
    """Aligned table: recall levels with the average row, cutoff precision,
    and mean normalized recall."""
    width = max(14, len(name_a) + 2, len(name_b) + 2)
    header = f"{'Recall level':<14}{name_a:>{width}}{name_b:>{width}}{'% increase':>12}"
    lines = [header, "-" * len(header)]
    for row in report.levels:
        lines.append(
            f"{row.label:<14}{row.a:>{width}.4f}{row.b:>{width}.4f}{_fmt_pct(row.pct):>12}"
        )
    avg = report.average
    lines.append(
        f"{avg.label:<14}{avg.a:>{width}.4f}{avg.b:>{width}.4f}{_fmt_pct(avg.pct):>12}"
    )
    lines.append("")
    lines.append(f"{'Cutoff':<14}{name_a:>{width}}{name_b:>{width}}{'% increase':>12}")
    lines.append("-" * len(header))
    for row in report.cutoffs:
        lines.append(
            f"{row.label:<14}{row.a:>{width}.4f}{row.b:>{width}.4f}{_fmt_pct(row.pct):>12}"
        )
    lines.append("")
    if report.norm_recall is not None:
        nr = report.norm_recall
        lines.append(
            f"{'Norm. recall':<14}{nr.a:>{width}.4f}{nr.b:>{width}.4f}{_fmt_pct(nr.pct):>12}"
        )
    else:
        lines.append("Norm. recall   undefined for every query")
    lines.append(f"Queries evaluated: {len(report.queries)}")
    for message in report.warnings:
        lines.append(f"warning: {message}")
    return "\n".join(lines) + "\n"


def _row_dict(row: ComparisonRow) -> dict:
    return {"label": row.label, "a": row.a, "b": row.b, "pct": row.pct}


def report_json(report: ComparisonReport) -> dict:
    return {
        "recall_levels": [_row_dict(row) for row in report.levels],
        "average": _row_dict(report.average),
        "cutoffs": [_row_dict(row) for row in report.cutoffs],
        "normalized_recall": _row_dict(report.norm_recall) if report.norm_recall else None,
        "queries": list(report.queries),
        "warnings": list(report.warnings),
    }


def format_tsv(report: ComparisonReport) -> str:
    lines = ["section\tlabel\ta\tb\tpct"]
    for row in report.levels:
        lines.append(f"recall_level\t{row.label}\t{row.a:.6f}\t{row.b:.6f}\t{_fmt_pct(row.pct)}")
    avg = report.average
    lines.append(f"average\t{avg.label}\t{avg.a:.6f}\t{avg.b:.6f}\t{_fmt_pct(avg.pct)}")
    for row in report.cutoffs:
        lines.append(f"cutoff\t{row.label}\t{row.a:.6f}\t{row.b:.6f}\t{_fmt_pct(row.pct)}")
    if report.norm_recall is not None:
        nr = report.norm_recall
        lines.append(f"norm_recall\t{nr.label}\t{nr.a:.6f}\t{nr.b:.6f}\t{_fmt_pct(nr.pct)}")
    return "\n".join(lines) + "\n"


def render_figures(
    report: ComparisonReport,
    out_dir: Path,
    name_a: str = "Run A",
    name_b: str = "Run B",
) -> list[Path]:
    """Write the recall-precision curve and the cutoff chart as PNG files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(RECALL_LEVELS, [row.a for row in report.levels], marker="o", label=name_a)
    ax.plot(RECALL_LEVELS, [row.b for row in report.levels], marker="s", label=name_b)
    ax.set_xlabel("Recall level")
    ax.set_ylabel("Interpolated precision")
    ax.set_ylim(bottom=0)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path = out_dir / "recall_precision.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    if report.cutoffs:
        fig, ax = plt.subplots(figsize=(6, 4))
        ks = [row.label for row in report.cutoffs]
        positions = range(len(ks))
        bar_width = 0.38
        ax.bar([p - bar_width / 2 for p in positions], [r.a for r in report.cutoffs],
               bar_width, label=name_a)
        ax.bar([p + bar_width / 2 for p in positions], [r.b for r in report.cutoffs],
               bar_width, label=name_b)
        ax.set_xticks(list(positions), ks)
        ax.set_xlabel("Cutoff")
        ax.set_ylabel("Precision")
        ax.legend()
        ax.grid(True, axis="y", alpha=0.3)
        fig.tight_layout()
        path = out_dir / "cutoff_precision.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    return written


def write_report(
    report: ComparisonReport,
    out_dir: str | Path,
    name_a: str = "Run A",
    name_b: str = "Run B",
) -> list[Path]:
    """Write report.txt, report.json, report.tsv, and figures into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    text_path = out / "report.txt"
    text_path.write_text(format_text(report, name_a, name_b), encoding="utf-8")
    written.append(text_path)
    json_path = out / "report.json"
    json_path.write_text(
        json.dumps(report_json(report), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(json_path)
    tsv_path = out / "report.tsv"
    tsv_path.write_text(format_tsv(report), encoding="utf-8")
    written.append(tsv_path)
    written.extend(render_figures(report, out, name_a, name_b))
    return written


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docmap-eval",
        description="Compare two retrieval runs against relevance judgments.",
    )
    parser.add_argument("--qrels", required=True, help="qrels file: query_id doc_id rel")
    parser.add_argument("--run-a", required=True, help="run file: query_id rank doc_id score")
    parser.add_argument("--run-b", required=True, help="run file: query_id rank doc_id score")
    parser.add_argument(
        "--cutoffs",
        default=",".join(str(k) for k in DEFAULT_CUTOFFS),
        help="comma-separated precision cutoffs",
    )
    parser.add_argument(
        "--out",
        help="directory for report.txt / report.json / report.tsv and figures",
    )
    return parser


def main(argv: list[str] | None = None) -> None:
    args = make_parser().parse_args(argv)
    try:
        cutoffs = tuple(int(part) for part in args.cutoffs.split(",") if part.strip())
    except ValueError:
        raise SystemExit(f"bad --cutoffs value {args.cutoffs!r}")

    qrels = load_qrels(args.qrels)
    run_a = load_run(args.run_a)
    run_b = load_run(args.run_b)
    report = comparison_report(run_a, run_b, qrels, cutoffs)

    name_a = Path(args.run_a).stem
    name_b = Path(args.run_b).stem
    print(format_text(report, name_a, name_b), end="")
    if args.out:
        for path in write_report(report, args.out, name_a, name_b):
            print(f"wrote {path}")
    else:
        print()
        print(json.dumps(report_json(report), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
