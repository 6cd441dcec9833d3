"""Render log-log convergence figures from experiment CSV curves.

Consumes the runner's CSV schema (`n,error,log10_n,log10_error,cum_work,
storage`) and draws error-vs-n figures with straight reference-slope guide
lines, anchored at the last checkpoint of the first curve and extended left.
Each render writes PNG and SVG images plus a small metadata JSON.
"""

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_HEADER = ["n", "error", "log10_n", "log10_error", "cum_work", "storage"]

# stable SVG ids so rerendering the same spec yields the same document
matplotlib.rcParams["svg.hashsalt"] = "tkplots"


class CurveFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Curve:
    label: str
    ns: tuple
    errors: tuple


@dataclass(frozen=True)
class PlotSpec:
    curves: tuple  # of (csv path, label)
    slopes: tuple = ()
    y_column: str = "error"  # error | cum_work
    title: str = ""
    xlabel: str = "log10(n)"
    ylabel: str = "log10(error)"
    out: str = "figure"

    @classmethod
    def from_dict(cls, doc: dict) -> "PlotSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise CurveFormatError(f"unknown spec fields: {sorted(unknown)}")
        doc = dict(doc)
        if "curves" in doc:
            doc["curves"] = tuple(
                (c["path"], c.get("label", Path(c["path"]).stem)) for c in doc["curves"]
            )
        if "slopes" in doc:
            doc["slopes"] = tuple(float(s) for s in doc["slopes"])
        return cls(**doc)


def read_curve_csv(path, label=None, y_column="error") -> Curve:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != EXPECTED_HEADER:
        raise CurveFormatError(f"{path}: row 1: expected header {','.join(EXPECTED_HEADER)}")
    col = EXPECTED_HEADER.index(y_column)
    ns, errs = [], []
    for i, row in enumerate(rows[1:], start=2):
        try:
            n = int(row[0])
            err = float(row[col])
        except (IndexError, ValueError) as e:
            raise CurveFormatError(f"{path}: row {i}: {e}")
        if n <= 0 or err <= 0:
            raise CurveFormatError(f"{path}: row {i}: need positive n and {y_column} for log axes")
        ns.append(n)
        errs.append(err)
    if not ns:
        raise CurveFormatError(f"{path}: no data rows")
    return Curve(label or path.stem, tuple(ns), tuple(errs))


def build_figure(spec: PlotSpec):
    """Figure plus guide-line metadata; pure in its inputs (deterministic layout)."""
    curves = [read_curve_csv(p, label, spec.y_column) for p, label in spec.curves]
    if not curves:
        raise CurveFormatError("spec lists no input curves")
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for curve in curves:
        ax.plot(curve.ns, curve.errors, marker="o", markersize=3, label=curve.label)
    guides = []
    anchor = curves[0]
    n_last, e_last = anchor.ns[-1], anchor.errors[-1]
    n_left = min(min(c.ns) for c in curves)
    for slope in spec.slopes:
        # straight line in log-log space through the last checkpoint, extended left
        e_left = e_last * (n_left / n_last) ** slope
        ax.plot(
            [n_left, n_last], [e_left, e_last], "k--", linewidth=1,
            label=f"slope {slope:g}",
        )
        guides.append({"slope": slope, "anchor_n": n_last, "anchor_value": e_last})
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="lower left", fontsize=8)
    meta = {
        "curves": [{"label": c.label, "checkpoints": len(c.ns)} for c in curves],
        "guides": guides,
        "slopes": [g["slope"] for g in guides],
        "y_column": spec.y_column,
    }
    return fig, meta


def render(spec: PlotSpec) -> dict:
    """Write <out>.png, <out>.svg, and <out>.meta.json; returns the metadata."""
    fig, meta = build_figure(spec)  # raises before any file is touched
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out.with_suffix(".png"), dpi=150)
        fig.savefig(out.with_suffix(".svg"), metadata={"Date": None})
    finally:
        plt.close(fig)
    meta["outputs"] = [str(out.with_suffix(".png")), str(out.with_suffix(".svg"))]
    out.with_suffix(".meta.json").write_text(
        json.dumps(meta, indent=2) + "\n", encoding="utf-8"
    )
    return meta


def spec_from_args(args) -> PlotSpec:
    if args.spec:
        doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        if args.out:
            doc["out"] = args.out
        return PlotSpec.from_dict(doc)
    if not args.csvs:
        raise CurveFormatError("provide --spec or at least one CSV path")
    return PlotSpec(
        curves=tuple((p, Path(p).stem) for p in args.csvs),
        slopes=tuple(args.slope or ()),
        out=args.out or "figure",
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tkplots", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("csvs", nargs="*", help="input curve CSVs")
    p.add_argument("--spec", help="JSON plot spec")
    p.add_argument("--slope", action="append", type=float, help="reference slope guide line")
    p.add_argument("--out", help="output path base (writes .png/.svg/.meta.json)")
    args = parser.parse_args(argv)
    try:
        meta = render(spec_from_args(args))
    except (CurveFormatError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(", ".join(meta["outputs"]))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
