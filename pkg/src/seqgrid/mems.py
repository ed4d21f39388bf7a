"""Maximal exact match enumeration over a generalized suffix array.

Both sequences are packed into one integer text separated by a sentinel; a
prefix-doubling suffix array plus the Kasai LCP array gives the longest
common extension structure.  MEM candidates are suffix pairs from different
documents whose LCP-interval depth is the exact extension length; a pair is
left-maximal when the preceding characters differ.  Wildcards are encoded as
per-position unique codes, so they never match anything (not even another
wildcard) and all maximality checks fall out of plain code comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import AlphabetMismatch, BadParams, EmptySequence, WrongAlphabet
from .seqio import DNA, Sequence, reverse_complement

FORWARD = "F"
REVERSE = "R"

_TERM = 0
_SEP = 1


class Point(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Fragment:
    """A maximal exact match in 1-based inclusive match coordinates.

    For reverse-strand fragments y coordinates refer to reverse_complement(S2);
    original_coords maps them back.
    """

    beg: Point
    end: Point
    length: int
    strand: str = FORWARD

    def diagonal(self) -> int:
        return self.beg.x - self.beg.y


def original_coords(frag: Fragment, s2_len: int):
    """(x_lo, x_hi, y_lo, y_hi) with y in original S2 coordinates, ascending."""
    if frag.strand == FORWARD:
        return frag.beg.x, frag.end.x, frag.beg.y, frag.end.y
    return (
        frag.beg.x,
        frag.end.x,
        s2_len - frag.end.y + 1,
        s2_len - frag.beg.y + 1,
    )


def suffix_array(text: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling with numpy lexsort rounds."""
    n = len(text)
    rank = np.unique(text, return_inverse=True)[1].astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[:-k] = rank[k:]
        order = np.lexsort((second, rank))
        ro, so = rank[order], second[order]
        changed = (ro[1:] != ro[:-1]) | (so[1:] != so[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order[0]] = 0
        if n > 1:
            new_rank[order[1:]] = np.cumsum(changed)
        rank = new_rank
        if rank[order[-1]] == n - 1:
            return order
        k *= 2


@njit(cache=True)
def _kasai(text, sa):
    n = sa.shape[0]
    rank = np.empty(n, dtype=np.int64)
    for k in range(n):
        rank[sa[k]] = k
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and text[i + h] == text[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


def lcp_array(text: np.ndarray, sa: np.ndarray) -> np.ndarray:
    """lcp[k] = longest common prefix of the rank k-1 and rank k suffixes."""
    return _kasai(text, sa)


@dataclass
class MatchIndex:
    """Immutable suffix/LCP index over S1 + separator + S2 + terminator."""

    text: np.ndarray
    sa: np.ndarray
    lcp: np.ndarray
    n1: int
    n2: int


def _encode_text(s1: Sequence, s2: Sequence) -> np.ndarray:
    order = s1.alphabet.order
    lut = np.zeros(128, dtype=np.int64)
    for i, c in enumerate(order):
        lut[ord(c)] = 2 + i
    a1 = lut[np.frombuffer(s1.residues.encode("ascii"), dtype=np.uint8)]
    a2 = lut[np.frombuffer(s2.residues.encode("ascii"), dtype=np.uint8)]
    text = np.concatenate(
        [a1, [_SEP], a2, [_TERM]]
    ).astype(np.int64)
    wild_code = 2 + order.index(s1.alphabet.wildcard)
    wild = np.flatnonzero(text == wild_code)
    text[wild] = -(wild + 1)  # unique per position: wildcards match nothing
    return text


def build_index(s1: Sequence, s2: Sequence) -> MatchIndex:
    """Generalized suffix array and LCP array for the pair."""
    if s1.alphabet != s2.alphabet:
        raise AlphabetMismatch(
            f"cannot index {s1.alphabet.name} against {s2.alphabet.name}"
        )
    if not s1.residues or not s2.residues:
        raise EmptySequence("both sequences must be non-empty")
    text = _encode_text(s1, s2)
    sa = suffix_array(text)
    return MatchIndex(text, sa, lcp_array(text, sa), len(s1.residues),
                      len(s2.residues))


def _position_info(p: int, text: np.ndarray, n1: int):
    """(document, offset) for a text position, or None for sentinels."""
    if p < n1:
        return 0, p
    if p == n1 or p == len(text) - 1:
        return None
    return 1, p - n1 - 1


def enumerate_mems(idx: MatchIndex, l: int):
    """All maximal exact matches of length >= l, sorted by (beg.x, beg.y).

    Bottom-up walk over LCP intervals.  Each stack node carries the suffixes
    of its subtree grouped by (document, preceding-character class); when a
    subtree folds into a shallower node, cross-document groups with differing
    classes pair off at exactly that node's depth.  Nodes shallower than l
    discard their groups since they can never reach the length threshold.
    """
    if l < 1:
        raise BadParams(f"minimum MEM length must be >= 1, got {l}")
    text, sa, lcp, n1 = idx.text, idx.sa, idx.lcp, idx.n1
    n = len(text)
    found = []

    def fold(target, child_groups):
        depth, groups = target
        if depth >= l:
            for (doc_c, cls_c), pos_c in child_groups.items():
                for (doc_t, cls_t), pos_t in groups.items():
                    if doc_c == doc_t or cls_c == cls_t:
                        continue
                    for a in pos_c:
                        for b in pos_t:
                            s1_off, s2_off = (a, b) if doc_c == 0 else (b, a)
                            found.append((s1_off, s2_off, depth))
            for key, pos in child_groups.items():
                groups.setdefault(key, []).extend(pos)

    stack = [(0, {})]
    for k in range(n):
        d = 0 if k == 0 else int(lcp[k])
        while stack[-1][0] > d:
            child = stack.pop()
            if stack[-1][0] < d:
                stack.append((d, {}))
            fold(stack[-1], child[1])
        p = int(sa[k])
        info = _position_info(p, text, n1)
        if info is None:
            continue
        doc, off = info
        cls = int(text[p - 1]) if p > 0 and text[p - 1] >= 2 else -(p + 1)
        stack.append((n - p, {(doc, cls): [off]}))
    while len(stack) > 1:
        child = stack.pop()
        fold(stack[-1], child[1])

    frags = [
        Fragment(Point(x + 1, y + 1), Point(x + w, y + w), w, FORWARD)
        for x, y, w in found
    ]
    frags.sort(key=lambda f: (f.beg.x, f.beg.y))
    return frags


def mems_bruteforce(s1: Sequence, s2: Sequence, l: int):
    """Documented fallback: walk every diagonal of the comparison grid and
    cut maximal equal runs.  Quadratic, but independent of the index path;
    output contract identical to enumerate_mems."""
    if s1.alphabet != s2.alphabet:
        raise AlphabetMismatch("sequences must share an alphabet")
    if not s1.residues or not s2.residues:
        raise EmptySequence("both sequences must be non-empty")
    if l < 1:
        raise BadParams(f"minimum MEM length must be >= 1, got {l}")
    a, b = s1.residues, s2.residues
    wild = s1.alphabet.wildcard
    n1, n2 = len(a), len(b)
    frags = []
    for diag in range(-(n2 - 1), n1):
        i = max(diag, 0)
        j = i - diag
        run = 0
        while i <= n1 and j <= n2:
            inside = i < n1 and j < n2
            if inside and a[i] == b[j] and a[i] != wild:
                run += 1
            else:
                if run >= l:
                    frags.append(Fragment(
                        Point(i - run + 1, j - run + 1), Point(i, j), run,
                        FORWARD,
                    ))
                run = 0
            i += 1
            j += 1
    frags.sort(key=lambda f: (f.beg.x, f.beg.y))
    return frags


def enumerate_mems_both_strands(s1: Sequence, s2: Sequence, l: int,
                                method: str = "index"):
    """(forward, reverse) MEM lists for a DNA pair.

    Reverse-strand fragments are computed against reverse_complement(s2) and
    keep those y coordinates; use original_coords for plotting or output.
    """
    if s1.alphabet is not DNA or s2.alphabet is not DNA:
        raise WrongAlphabet("strand-aware enumeration needs DNA input")
    if method == "index":
        fwd = enumerate_mems(build_index(s1, s2), l)
        rev = enumerate_mems(build_index(s1, reverse_complement(s2)), l)
    elif method == "brute":
        fwd = mems_bruteforce(s1, s2, l)
        rev = mems_bruteforce(s1, reverse_complement(s2), l)
    else:
        raise BadParams(f"unknown method {method!r}")
    rev = [Fragment(f.beg, f.end, f.length, REVERSE) for f in rev]
    return fwd, rev


def write_mems(fwd, rev, s2_len: int) -> str:
    """Tab-separated MEM rows: s1_start s1_end s2_start s2_end length strand.

    1-based inclusive; reverse rows report the original S2 interval
    (ascending).  Rows are sorted on the numeric columns, then strand.
    """
    rows = []
    for frag in list(fwd) + list(rev):
        x1, x2, y1, y2 = original_coords(frag, s2_len)
        rows.append((x1, x2, y1, y2, frag.length, frag.strand))
    rows.sort()
    return "".join(
        f"{x1}\t{x2}\t{y1}\t{y2}\t{w}\t{st}\n"
        for x1, x2, y1, y2, w, st in rows
    )


def parse_mems(text: str):
    """Rows of (s1_start, s1_end, s2_start, s2_end, length, strand)."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        rows.append(tuple(int(v) for v in parts[:5]) + (parts[5],))
    return rows
