"""Dot-plot rendering of match fragments and chains.

Fragments arrive in original coordinates of both sequences; forward-strand
fragments are drawn as red segments with ascending y, reverse-strand ones as
green segments with descending y.  The primary output is a small SVG subset
(line, text, rect) built with a fixed linear viewport transform so tests can
parse segment endpoints back out; a gnuplot script plus companion data file
reproduce the same picture with the classic toolchain.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from xml.sax.saxutils import escape

from .errors import BadParams, OutOfBounds
from .mems import original_coords

# viewport transform: data (x, y) maps to
#   px = MARGIN_L + (x - 0.5) * PLOT_W / x_len
#   py = MARGIN_T + PLOT_H - (y - 0.5) * PLOT_H / y_len
MARGIN_L = 80
MARGIN_T = 40
MARGIN_R = 30
MARGIN_B = 60
PLOT_W = 640
PLOT_H = 640

FWD_COLOR = "red"
REV_COLOR = "green"


class PlotKind(Enum):
    SVG = "svg"
    GNUPLOT = "gnuplot"


@dataclass(frozen=True)
class PlotSpec:
    """Fragment rows are (x1, x2, y1, y2, length) with ascending 1-based
    inclusive coordinates; strand is carried by which list a row is in."""

    x_len: int
    y_len: int
    fwd: tuple = ()
    rev: tuple = ()
    title: str = ""
    x_label: str = "seq1"
    y_label: str = "seq2"
    kind: PlotKind = PlotKind.SVG

    def __post_init__(self):
        if self.x_len < 1 or self.y_len < 1:
            raise BadParams("plot axes need positive sequence lengths")
        object.__setattr__(self, "fwd", tuple(tuple(r) for r in self.fwd))
        object.__setattr__(self, "rev", tuple(tuple(r) for r in self.rev))
        for row in self.fwd + self.rev:
            x1, x2, y1, y2 = row[:4]
            if not (1 <= x1 <= x2 <= self.x_len
                    and 1 <= y1 <= y2 <= self.y_len):
                raise OutOfBounds(
                    f"fragment {row} outside [1, {self.x_len}] x "
                    f"[1, {self.y_len}]"
                )


def spec_from_fragments(fwd_frags, rev_frags, x_len: int, y_len: int,
                        title: str = "", x_label: str = "seq1",
                        y_label: str = "seq2",
                        kind: PlotKind = PlotKind.SVG) -> PlotSpec:
    """Build a PlotSpec from Fragment objects, mapping reverse-strand
    fragments back to original second-sequence coordinates."""
    rows_f = sorted(
        (f.beg.x, f.end.x, f.beg.y, f.end.y, f.length) for f in fwd_frags
    )
    rows_r = sorted(
        original_coords(f, y_len) + (f.length,) for f in rev_frags
    )
    return PlotSpec(x_len, y_len, tuple(rows_f), tuple(rows_r),
                    title, x_label, y_label, kind)


def x_to_px(x: float, x_len: int) -> float:
    return MARGIN_L + (x - 0.5) * PLOT_W / x_len


def y_to_px(y: float, y_len: int) -> float:
    return MARGIN_T + PLOT_H - (y - 0.5) * PLOT_H / y_len


def px_to_x(px: float, x_len: int) -> float:
    return (px - MARGIN_L) * x_len / PLOT_W + 0.5


def px_to_y(py: float, y_len: int) -> float:
    return (MARGIN_T + PLOT_H - py) * y_len / PLOT_H + 0.5


def _line(xa, ya, xb, yb, color) -> str:
    return (
        f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}" '
        f'stroke="{color}" stroke-width="1.5"/>'
    )


def render(spec: PlotSpec) -> bytes:
    """Deterministic SVG document; one <line> element per fragment."""
    if spec.kind is not PlotKind.SVG:
        raise BadParams(f"render emits SVG, spec asks for {spec.kind.value}")
    width = MARGIN_L + PLOT_W + MARGIN_R
    height = MARGIN_T + PLOT_H + MARGIN_B
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{PLOT_W}" '
        f'height="{PLOT_H}" fill="none" stroke="black"/>',
    ]
    if spec.title:
        parts.append(
            f'<text x="{MARGIN_L + PLOT_W / 2:.1f}" y="{MARGIN_T - 12}" '
            f'text-anchor="middle" font-size="16">{escape(spec.title)}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_L + PLOT_W / 2:.1f}" y="{MARGIN_T + PLOT_H + 40}" '
        f'text-anchor="middle" font-size="13">'
        f'{escape(spec.x_label)} (1..{spec.x_len})</text>'
    )
    parts.append(
        f'<text x="24" y="{MARGIN_T + PLOT_H / 2:.1f}" text-anchor="middle" '
        f'font-size="13" transform="rotate(-90 24 {MARGIN_T + PLOT_H / 2:.1f})">'
        f'{escape(spec.y_label)} (1..{spec.y_len})</text>'
    )
    for x1, x2, y1, y2, *_ in spec.fwd:
        parts.append(_line(
            x_to_px(x1, spec.x_len), y_to_px(y1, spec.y_len),
            x_to_px(x2, spec.x_len), y_to_px(y2, spec.y_len),
            FWD_COLOR,
        ))
    for x1, x2, y1, y2, *_ in spec.rev:
        parts.append(_line(
            x_to_px(x1, spec.x_len), y_to_px(y2, spec.y_len),
            x_to_px(x2, spec.x_len), y_to_px(y1, spec.y_len),
            REV_COLOR,
        ))
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8") + b"\n"


def _gp_quote(s: str) -> str:
    return s.replace("'", "''")


def emit_gnuplot(spec: PlotSpec, data_name: str = "dotplot.dat"):
    """Gnuplot 5 script plus companion data file.

    The data file uses the same tab-separated rows as the match list format
    (x1 x2 y1 y2 length strand); the script draws forward rows red and
    reverse rows green with descending y.
    """
    rows = []
    for x1, x2, y1, y2, w in spec.fwd:
        rows.append(f"{x1}\t{x2}\t{y1}\t{y2}\t{w}\tF")
    for x1, x2, y1, y2, w in spec.rev:
        rows.append(f"{x1}\t{x2}\t{y1}\t{y2}\t{w}\tR")
    data = "".join(r + "\n" for r in rows)
    script = "\n".join([
        "set terminal svg size 800,800",
        f"set title '{_gp_quote(spec.title)}'",
        f"set xlabel '{_gp_quote(spec.x_label)} (1..{spec.x_len})'",
        f"set ylabel '{_gp_quote(spec.y_label)} (1..{spec.y_len})'",
        f"set xrange [0:{spec.x_len + 1}]",
        f"set yrange [0:{spec.y_len + 1}]",
        f"plot '{data_name}' using "
        '(strcol(6) eq "F" ? $1 : NaN):3:($2-$1):($4-$3) '
        'with vectors nohead lc rgb "red" title "forward", \\',
        f"     '{data_name}' using "
        '(strcol(6) eq "R" ? $1 : NaN):4:($2-$1):($3-$4) '
        'with vectors nohead lc rgb "green" title "reverse"',
    ]) + "\n"
    return script, data
