"""Highest-scoring chains of collinear fragments.

A chain is a sequence of fragments where each strictly precedes the next in
both coordinates; its score is the sum of fragment lengths (no gap costs).
global_chain runs a line sweep: fragments are processed by start coordinate
while finished fragments are activated in a prefix-maximum structure keyed
by end y, which answers the required two-dimensional dominance query.  A
general dynamic variant of that query, RangeMaxStructure, is provided as
well for callers that cannot batch their points into a sweep.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .errors import BadParams, StrandMismatch
from .mems import (
    FORWARD,
    REVERSE,
    Fragment,
    build_index,
    enumerate_mems,
    enumerate_mems_both_strands,
    original_coords,
)
from .seqio import DNA, Sequence


def precedes(f1: Fragment, f2: Fragment) -> bool:
    """True iff f1 ends strictly before f2 begins in both coordinates."""
    if f1.strand != f2.strand:
        raise StrandMismatch(
            f"cannot order {f1.strand} fragment against {f2.strand}"
        )
    return f1.end.x < f2.beg.x and f1.end.y < f2.beg.y


class RangeMaxStructure:
    """Dynamic 2-D dominance maximum over valued points.

    query_max(q) returns (value, point) for the best value among inserted
    points strictly dominated by q in both coordinates, ties resolved to the
    smallest point in (x, y) order, or None when nothing is dominated.
    Implemented as an unbalanced kd-tree with subtree-maximum pruning.
    """

    def __init__(self):
        self._x = []
        self._y = []
        self._val = []
        self._left = []
        self._right = []
        self._submax = []

    def __len__(self) -> int:
        return len(self._x)

    def insert_point(self, p, v: int) -> None:
        x, y = p
        if x < 1 or y < 1:
            raise BadParams(f"point coordinates must be >= 1, got {p}")
        idx = len(self._x)
        self._x.append(x)
        self._y.append(y)
        self._val.append(v)
        self._left.append(-1)
        self._right.append(-1)
        self._submax.append(v)
        if idx == 0:
            return
        node = 0
        depth = 0
        while True:
            if v > self._submax[node]:
                self._submax[node] = v
            key, nkey = (x, self._x[node]) if depth % 2 == 0 else (y, self._y[node])
            side = self._left if key < nkey else self._right
            if side[node] == -1:
                side[node] = idx
                return
            node = side[node]
            depth += 1

    def query_max(self, q):
        if not self._x:
            return None
        qx, qy = q
        best_val = None
        best_point = None
        stack = [(0, 0)]
        while stack:
            node, depth = stack.pop()
            if best_val is not None and self._submax[node] < best_val:
                continue
            x, y, v = self._x[node], self._y[node], self._val[node]
            if x < qx and y < qy:
                point = (x, y)
                if (
                    best_val is None
                    or v > best_val
                    or (v == best_val and point < best_point)
                ):
                    best_val = v
                    best_point = point
            axis_key, axis_q = (x, qx) if depth % 2 == 0 else (y, qy)
            if self._left[node] != -1:
                stack.append((self._left[node], depth + 1))
            # right subtree holds keys >= the node's; skip it when the node's
            # key already fails the strict dominance bound
            if self._right[node] != -1 and axis_key < axis_q:
                stack.append((self._right[node], depth + 1))
        if best_val is None:
            return None
        return best_val, best_point


@dataclass(frozen=True)
class Chain:
    fragments: tuple
    score: int
    strand: str = FORWARD


class _PrefixMax:
    """Fenwick tree over [1..n] answering max of a prefix under point raises."""

    def __init__(self, n: int):
        self._n = n
        self._t = [-1] * (n + 1)

    def raise_at(self, i: int, v: int) -> None:
        while i <= self._n:
            if v > self._t[i]:
                self._t[i] = v
            i += i & -i

    def query(self, i: int) -> int:
        best = -1
        while i > 0:
            if self._t[i] > best:
                best = self._t[i]
            i -= i & -i
        return best


def _tuple_precedes(a, b) -> bool:
    return a[2] < b[0] and a[3] < b[1]


def _ending_scores(tup):
    """E[i] = best score of a chain ending with fragment i.

    tup rows are (beg_x, beg_y, end_x, end_y, weight).  Line sweep over
    start points in x order; a fragment's end point is activated once the
    sweep has passed it, so the structure only ever answers the y part of
    the dominance test.
    """
    n = len(tup)
    starts = sorted(range(n), key=lambda i: (tup[i][0], tup[i][1], i))
    acts = sorted(range(n), key=lambda i: tup[i][2])
    ys = sorted({t[3] for t in tup})
    fen = _PrefixMax(len(ys))
    scores = [0] * n
    ai = 0
    for i in starts:
        bx, by = tup[i][0], tup[i][1]
        while ai < n and tup[acts[ai]][2] < bx:
            j = acts[ai]
            fen.raise_at(bisect_left(ys, tup[j][3]) + 1, scores[j])
            ai += 1
        best = fen.query(bisect_left(ys, by))
        scores[i] = tup[i][4] + (best if best > 0 else 0)
    return scores


def global_chain(frags) -> Chain:
    """Maximum-score chain, deterministic under the index tie-break.

    Fragments are indexed in sorted (beg.x, beg.y) order; among equal-score
    chains the lexicographically smallest index sequence wins.  That chain
    is built front to back from S[i], the best score of any chain starting
    at fragment i, computed by running the sweep on reflected coordinates.
    """
    frags = list(frags)
    if not frags:
        return Chain((), 0, FORWARD)
    strand = frags[0].strand
    if any(f.strand != strand for f in frags):
        raise StrandMismatch("chain fragments must share a strand")
    order = sorted(
        range(len(frags)),
        key=lambda i: (
            frags[i].beg.x, frags[i].beg.y,
            frags[i].end.x, frags[i].end.y, frags[i].length,
        ),
    )
    sf = [frags[i] for i in order]
    tup = [(f.beg.x, f.beg.y, f.end.x, f.end.y, f.length) for f in sf]
    reflected = [(-e[2], -e[3], -e[0], -e[1], e[4]) for e in tup]
    starting = _ending_scores(reflected)
    opt = max(starting)
    cur = min(i for i in range(len(tup)) if starting[i] == opt)
    picked = [cur]
    while True:
        rest = starting[cur] - tup[cur][4]
        if rest == 0:
            break
        for j in range(cur + 1, len(tup)):
            if starting[j] == rest and _tuple_precedes(tup[cur], tup[j]):
                picked.append(j)
                cur = j
                break
        else:
            raise AssertionError("inconsistent chain scores")
    return Chain(tuple(sf[i] for i in picked), opt, strand)


def chain_pipeline(s1: Sequence, s2: Sequence, l: int):
    """(forward chain, reverse chain) for a sequence pair.

    Reverse-strand fragments exist only for DNA; for protein the reverse
    chain is empty by definition.
    """
    if s1.alphabet is DNA and s2.alphabet is DNA:
        fwd_frags, rev_frags = enumerate_mems_both_strands(s1, s2, l)
    else:
        fwd_frags = enumerate_mems(build_index(s1, s2), l)
        rev_frags = []
    fwd = global_chain(fwd_frags)
    if rev_frags:
        rev = global_chain(rev_frags)
    else:
        rev = Chain((), 0, REVERSE)
    return fwd, rev


def write_chain(chain: Chain, s2_len: int) -> str:
    """Chain header plus its fragments as MEM-format rows in chain order."""
    lines = [
        f"chain score={chain.score} strand={chain.strand} "
        f"nfrags={len(chain.fragments)}"
    ]
    for f in chain.fragments:
        x1, x2, y1, y2 = original_coords(f, s2_len)
        lines.append(f"{x1}\t{x2}\t{y1}\t{y2}\t{f.length}\t{f.strand}")
    return "\n".join(lines) + "\n"
