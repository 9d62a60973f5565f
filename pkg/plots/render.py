#!/usr/bin/env python3
"""Render figures from the laboratory's CSV outputs.

    render.py --kind K --in FILE [--in FILE2] --out IMG

Kinds: interface_hist, wetting_profile, field_profile, gap_curve, bound_check.
Output format follows the --out extension (.png or .svg).  Figures are pure
views of the CSV contents: nothing is recomputed, and identical inputs render
byte-identical images (fixed style, no timestamps).

Exit codes: 0 success (including header-only input, which renders a "no data"
placeholder), 2 usage or schema error (schema errors name the missing
columns).
"""

from __future__ import annotations

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("interface_hist", "wetting_profile", "field_profile",
         "gap_curve", "bound_check")

SCHEMAS = {
    "interface_hist": ("theta", "probability", "std_error"),
    "wetting_profile": ("site", "mean", "std_error", "region"),
    "field_profile": ("x", "h_minus_annulus", "h_plus_annulus"),
    "gap_curve": ("n", "value_plus", "value_minus", "gap"),
    "bound_check": ("N", "remainder", "bound"),
}

_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "svg.hashsalt": "render",
    "axes.grid": True,
    "grid.alpha": 0.3,
}


class SchemaError(Exception):
    pass


def load_table(path: str, kind: str) -> list[dict]:
    """Rows of the CSV as dicts keyed by the kind's schema columns."""
    expected = SCHEMAS[kind]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file (missing header)") from None
        missing = [c for c in expected if c not in header]
        if missing:
            raise SchemaError(
                f"{path}: missing column(s) {', '.join(missing)} for kind {kind}"
            )
        idx = {c: header.index(c) for c in expected}
        rows = []
        for raw in reader:
            row = {}
            for c in expected:
                value = raw[idx[c]]
                row[c] = value if c == "region" else float(value)
            rows.append(row)
    return rows


def region_spans(rows: list[dict], region: str) -> list[tuple[float, float]]:
    """Maximal contiguous [lo, hi] site spans carrying the given region label."""
    sites = sorted(r["site"] for r in rows if r["region"] == region)
    spans: list[tuple[float, float]] = []
    for s in sites:
        if spans and s == spans[-1][1] + 1:
            spans[-1] = (spans[-1][0], s)
        else:
            spans.append((s, s))
    return spans


def wet_windows(rows: list[dict]) -> list[tuple[float, float]]:
    """The two predicted wet windows, left-to-right."""
    return region_spans(rows, "wet_left") + region_spans(rows, "wet_right")


def _no_data(ax, path: str) -> None:
    ax.text(0.5, 0.5, "no data", ha="center", va="center",
            transform=ax.transAxes, fontsize=14, color="gray")
    ax.set_title(path)


def _draw_interface_hist(ax, rows):
    thetas = [r["theta"] for r in rows]
    probs = [r["probability"] for r in rows]
    errs = [r["std_error"] for r in rows]
    width = 0.8 * min(
        (b - a for a, b in zip(thetas, thetas[1:])), default=1.0
    )
    ax.bar(thetas, probs, width=width, yerr=errs, color="tab:blue",
           edgecolor="black", linewidth=0.5, capsize=2)
    ax.set_xlabel("interface location / L")
    ax.set_ylabel("probability")
    ax.set_title("interface location histogram")


def _draw_wetting_profile(ax, rows):
    rows = sorted(rows, key=lambda r: r["site"])
    sites = [r["site"] for r in rows]
    means = [r["mean"] for r in rows]
    errs = [r["std_error"] for r in rows]
    ax.errorbar(sites, means, yerr=errs, fmt="-o", ms=2.5, lw=1,
                color="tab:blue", ecolor="tab:blue", elinewidth=0.7)
    for lo, hi in region_spans(rows, "frozen"):
        ax.axvspan(lo - 0.5, hi + 0.5, color="tab:red", alpha=0.15,
                   label="frozen")
    for lo, hi in wet_windows(rows):
        ax.axvspan(lo - 0.5, hi + 0.5, color="tab:green", alpha=0.2,
                   label="wet window")
    ax.axhline(0.0, color="black", lw=0.8)
    # Deduplicate span labels.
    handles, labels = ax.get_legend_handles_labels()
    seen = dict(zip(labels, handles))
    ax.legend(seen.values(), seen.keys(), loc="lower right")
    ax.set_xlabel("site")
    ax.set_ylabel("magnetization")
    ax.set_title("conditioned magnetization profile")


def _draw_field_profile(ax, rows):
    rows = sorted(rows, key=lambda r: r["x"])
    xs = [r["x"] for r in rows]
    ax.plot(xs, [r["h_minus_annulus"] for r in rows], color="tab:red",
            lw=1.2, label="minus annulus")
    ax.plot(xs, [r["h_plus_annulus"] for r in rows], color="tab:blue",
            lw=1.2, label="plus annulus")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.legend()
    ax.set_xlabel("x")
    ax.set_ylabel("boundary field h(x)")
    ax.set_title("one-sided field profiles")


def _draw_gap_curve(ax, rows):
    rows = sorted(rows, key=lambda r: r["n"])
    ns = [r["n"] for r in rows]
    ax.plot(ns, [r["value_plus"] for r in rows], "-o", color="tab:blue",
            label="plus-annulus past")
    ax.plot(ns, [r["value_minus"] for r in rows], "-o", color="tab:red",
            label="minus-annulus past")
    ax.plot(ns, [r["gap"] for r in rows], "-s", color="tab:green",
            label="gap")
    ax.legend()
    ax.set_xlabel("future volume size n")
    ax.set_ylabel("conditional magnetization at the origin")
    ax.set_title("one-sided conditional gap")


def _draw_bound_check(ax, rows):
    rows = sorted(rows, key=lambda r: r["N"])
    ns = [r["N"] for r in rows]
    ax.semilogy(ns, [abs(r["remainder"]) for r in rows], "-", color="tab:blue",
                label="|remainder|")
    ax.semilogy(ns, [r["bound"] for r in rows], "--", color="tab:red",
                label="bound")
    ax.legend()
    ax.set_xlabel("N")
    ax.set_ylabel("value")
    ax.set_title("alternating remainder vs bound")


_DRAWERS = {
    "interface_hist": _draw_interface_hist,
    "wetting_profile": _draw_wetting_profile,
    "field_profile": _draw_field_profile,
    "gap_curve": _draw_gap_curve,
    "bound_check": _draw_bound_check,
}


def build_figure(kind: str, paths: list[str]):
    """Figure for the given kind; extra inputs get stacked axes."""
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(len(paths), 1, squeeze=False,
                                 figsize=(6.4, 4.0 * len(paths)))
        for ax, path in zip(axes[:, 0], paths):
            rows = load_table(path, kind)
            if not rows:
                _no_data(ax, path)
            else:
                _DRAWERS[kind](ax, rows)
        fig.tight_layout()
    return fig


def save_figure(fig, out: str) -> None:
    # The style context matters at save time too: svg.hashsalt keeps the
    # generated element ids deterministic.
    with plt.rc_context(_STYLE):
        if out.endswith(".svg"):
            fig.savefig(out, format="svg", metadata={"Date": None})
        elif out.endswith(".png"):
            fig.savefig(out, format="png")
        else:
            raise SchemaError(f"{out}: output must end in .png or .svg")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render.py", description="Render figures from laboratory CSVs.",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="FILE", help="input CSV (repeatable)")
    parser.add_argument("--out", required=True, metavar="IMG",
                        help="output image (.png or .svg)")
    ns = parser.parse_args(argv)
    try:
        fig = build_figure(ns.kind, ns.inputs)
        save_figure(fig, ns.out)
        plt.close(fig)
    except (OSError, SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(ns.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
