"""Tests for dot-plot SVG and gnuplot emission."""

import random
import re

import pytest

from seqgrid.dotplot import (
    FWD_COLOR,
    REV_COLOR,
    PlotKind,
    PlotSpec,
    emit_gnuplot,
    px_to_x,
    px_to_y,
    render,
    spec_from_fragments,
)
from seqgrid.errors import BadParams, OutOfBounds
from seqgrid.mems import FORWARD, REVERSE, Fragment, Point

LINE_RE = re.compile(
    rb'<line x1="([0-9.]+)" y1="([0-9.]+)" x2="([0-9.]+)" y2="([0-9.]+)" '
    rb'stroke="(red|green)"'
)


def parse_segments(svg: bytes):
    out = []
    for xa, ya, xb, yb, color in LINE_RE.findall(svg):
        out.append((float(xa), float(ya), float(xb), float(yb),
                    color.decode()))
    return out


def test_axes_only_document():
    svg = render(PlotSpec(100, 80, title="empty", x_label="a", y_label="b"))
    assert svg.startswith(b"<?xml")
    assert b"<svg " in svg and svg.rstrip().endswith(b"</svg>")
    assert parse_segments(svg) == []
    assert b"a (1..100)" in svg
    assert b"b (1..80)" in svg
    assert b"empty" in svg


def test_single_forward_fragment_endpoints():
    svg = render(PlotSpec(10, 10, fwd=[(1, 4, 1, 4, 4)]))
    segs = parse_segments(svg)
    assert len(segs) == 1
    xa, ya, xb, yb, color = segs[0]
    assert color == FWD_COLOR
    assert round(px_to_x(xa, 10)) == 1
    assert round(px_to_y(ya, 10)) == 1
    assert round(px_to_x(xb, 10)) == 4
    assert round(px_to_y(yb, 10)) == 4


def test_reverse_fragment_descends():
    svg = render(PlotSpec(10, 10, rev=[(2, 5, 3, 6, 4)]))
    ((xa, ya, xb, yb, color),) = parse_segments(svg)
    assert color == REV_COLOR
    # pixel y grows downward, so descending data y means ya < yb
    assert round(px_to_x(xa, 10)) == 2 and round(px_to_y(ya, 10)) == 6
    assert round(px_to_x(xb, 10)) == 5 and round(px_to_y(yb, 10)) == 3


def test_render_is_byte_deterministic():
    spec = PlotSpec(500, 400, fwd=[(1, 100, 1, 100, 100)],
                    rev=[(200, 300, 50, 150, 101)], title="t")
    assert render(spec) == render(spec)


def test_segment_count_and_colors():
    rng = random.Random(17)
    for _ in range(20):
        x_len = rng.randint(50, 50000)
        y_len = rng.randint(50, 50000)

        def rows(count):
            out = []
            for _ in range(count):
                x1 = rng.randint(1, x_len - 1)
                y1 = rng.randint(1, y_len - 1)
                w = rng.randint(1, min(x_len - x1, y_len - y1))
                out.append((x1, x1 + w, y1, y1 + w, w + 1))
            return out

        nf, nr = rng.randint(0, 6), rng.randint(0, 6)
        spec = PlotSpec(x_len, y_len, rows(nf), rows(nr))
        segs = parse_segments(render(spec))
        assert len(segs) == nf + nr
        assert sum(1 for s in segs if s[4] == FWD_COLOR) == nf
        assert sum(1 for s in segs if s[4] == REV_COLOR) == nr


def test_coordinate_round_trip():
    rng = random.Random(23)
    x_len, y_len = 50000, 43210
    fwd, rev = [], []
    for _ in range(8):
        x1 = rng.randint(1, x_len - 600)
        y1 = rng.randint(1, y_len - 600)
        w = rng.randint(1, 500)
        (fwd if rng.random() < 0.5 else rev).append(
            (x1, x1 + w, y1, y1 + w, w + 1))
    spec = PlotSpec(x_len, y_len, fwd, rev)
    segs = parse_segments(render(spec))
    got_fwd, got_rev = [], []
    for xa, ya, xb, yb, color in segs:
        pa = (round(px_to_x(xa, x_len)), round(px_to_y(ya, y_len)))
        pb = (round(px_to_x(xb, x_len)), round(px_to_y(yb, y_len)))
        if color == FWD_COLOR:
            got_fwd.append((pa[0], pb[0], pa[1], pb[1]))
        else:
            got_rev.append((pa[0], pb[0], pb[1], pa[1]))
    assert got_fwd == [r[:4] for r in spec.fwd]
    assert got_rev == [r[:4] for r in spec.rev]


def test_out_of_bounds_fragments_rejected():
    with pytest.raises(OutOfBounds):
        PlotSpec(10, 10, fwd=[(0, 4, 1, 4, 4)])
    with pytest.raises(OutOfBounds):
        PlotSpec(10, 10, fwd=[(1, 11, 1, 4, 4)])
    with pytest.raises(OutOfBounds):
        PlotSpec(10, 10, rev=[(1, 4, 5, 12, 4)])
    with pytest.raises(OutOfBounds):
        PlotSpec(10, 10, fwd=[(4, 1, 1, 4, 4)])


def test_bad_axis_lengths_rejected():
    with pytest.raises(BadParams):
        PlotSpec(0, 10)
    with pytest.raises(BadParams):
        render(PlotSpec(10, 10, kind=PlotKind.GNUPLOT))


def test_spec_from_fragments_maps_reverse_coords():
    f = Fragment(Point(2, 3), Point(4, 5), 3, FORWARD)
    r = Fragment(Point(1, 2), Point(2, 3), 2, REVERSE)
    spec = spec_from_fragments([f], [r], 10, 5)
    assert spec.fwd == ((2, 4, 3, 5, 3),)
    assert spec.rev == ((1, 2, 3, 4, 2),)


def test_gnuplot_data_matches_match_list_format():
    spec = PlotSpec(20, 20, fwd=[(1, 4, 1, 4, 4)], rev=[(5, 8, 2, 5, 4)],
                    title="a'b")
    script, data = emit_gnuplot(spec, data_name="cmp.dat")
    assert data == "1\t4\t1\t4\t4\tF\n5\t8\t2\t5\t4\tR\n"
    assert "'cmp.dat'" in script
    assert "with vectors" in script
    assert '"red"' in script and '"green"' in script
    assert "a''b" in script


def test_gnuplot_script_deterministic():
    spec = PlotSpec(20, 20, fwd=[(1, 4, 1, 4, 4)])
    assert emit_gnuplot(spec) == emit_gnuplot(spec)
