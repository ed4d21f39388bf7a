"""Serial Needleman-Wunsch global alignment: matrix fill, traceback, rescoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import AlphabetMismatch, BadParams, InvalidAlignment, ScoreOverflow
from .seqio import Alphabet, Sequence

GAP = "-"


@dataclass(frozen=True)
class ScoringScheme:
    """Signed per-column scores: match added for equal residues, mismatch for
    unequal ones, gap for a residue aligned against '-'."""

    match: int = 1
    mismatch: int = -1
    gap: int = -1

    def __post_init__(self):
        if self.match <= 0:
            raise BadParams(f"match score must be > 0, got {self.match}")
        if self.mismatch > 0:
            raise BadParams(f"mismatch score must be <= 0, got {self.mismatch}")
        if self.gap >= 0:
            raise BadParams(f"gap score must be < 0, got {self.gap}")

    def column(self, a: str, b: str) -> int:
        if a == GAP or b == GAP:
            return self.gap
        return self.match if a == b else self.mismatch


@dataclass
class AlignmentMatrix:
    n: int
    m: int
    cells: np.ndarray  # (n+1, m+1) int32

    def __getitem__(self, ij) -> int:
        return int(self.cells[ij])

    @property
    def score(self) -> int:
        return int(self.cells[self.n, self.m])


@dataclass
class AlignmentResult:
    score: int
    aligned_s: str
    aligned_r: str


def encode(residues: str, alphabet: Alphabet) -> np.ndarray:
    """Map residues to their index in the alphabet order as uint8 codes."""
    lut = np.zeros(128, dtype=np.uint8)
    for i, c in enumerate(alphabet.order):
        lut[ord(c)] = i
    return lut[np.frombuffer(residues.encode("ascii"), dtype=np.uint8)]


def check_pair(s: Sequence, r: Sequence) -> None:
    if s.alphabet != r.alphabet:
        raise AlphabetMismatch(
            f"cannot align {s.alphabet.name} against {r.alphabet.name}"
        )


def check_overflow(n: int, m: int, w: ScoringScheme) -> None:
    # worst-case |score| over any path is (n+m) * max coefficient magnitude
    bound = (n + m) * max(w.match, -w.mismatch, -w.gap)
    if bound >= 2 ** 31:
        raise ScoreOverflow(
            f"score bound {bound} exceeds 32-bit range for {n}x{m} matrix"
        )


@njit(nogil=True, cache=True)
def _fill_serial(cells, s_codes, r_codes, match, mismatch, gap):
    n = s_codes.shape[0]
    m = r_codes.shape[0]
    for i in range(n + 1):
        cells[i, 0] = i * gap
    for j in range(1, m + 1):
        cells[0, j] = j * gap
    for i in range(1, n + 1):
        si = s_codes[i - 1]
        for j in range(1, m + 1):
            best = cells[i - 1, j - 1] + (match if si == r_codes[j - 1] else mismatch)
            v = cells[i - 1, j] + gap
            if v > best:
                best = v
            v = cells[i, j - 1] + gap
            if v > best:
                best = v
            cells[i, j] = best


def nw_matrix(s: Sequence, r: Sequence, w: ScoringScheme) -> AlignmentMatrix:
    """Fill the full (n+1) x (m+1) score matrix.

    Boundary cells hold i*gap and j*gap; each interior cell is the max over
    the diagonal (match or mismatch), upper (gap in r), and left (gap in s)
    moves.  The bottom-right cell is the optimal global alignment score.
    """
    check_pair(s, r)
    n, m = len(s.residues), len(r.residues)
    check_overflow(n, m, w)
    cells = np.empty((n + 1, m + 1), dtype=np.int32)
    _fill_serial(
        cells,
        encode(s.residues, s.alphabet),
        encode(r.residues, r.alphabet),
        w.match,
        w.mismatch,
        w.gap,
    )
    return AlignmentMatrix(n, m, cells)


def traceback(cells: np.ndarray, s_res: str, r_res: str, w: ScoringScheme):
    """Walk from the bottom-right corner to (0,0), preferring diagonal over
    up (gap in r) over left (gap in s) on ties."""
    i, j = len(s_res), len(r_res)
    out_s = []
    out_r = []
    while i > 0 or j > 0:
        here = cells[i, j]
        if i > 0 and j > 0:
            sub = w.match if s_res[i - 1] == r_res[j - 1] else w.mismatch
            if here == cells[i - 1, j - 1] + sub:
                out_s.append(s_res[i - 1])
                out_r.append(r_res[j - 1])
                i -= 1
                j -= 1
                continue
        if i > 0 and here == cells[i - 1, j] + w.gap:
            out_s.append(s_res[i - 1])
            out_r.append(GAP)
            i -= 1
            continue
        out_s.append(GAP)
        out_r.append(r_res[j - 1])
        j -= 1
    return "".join(reversed(out_s)), "".join(reversed(out_r))


def nw_align(s: Sequence, r: Sequence, w: ScoringScheme) -> AlignmentResult:
    """Optimal global alignment with deterministic traceback."""
    matrix = nw_matrix(s, r, w)
    aligned_s, aligned_r = traceback(matrix.cells, s.residues, r.residues, w)
    return AlignmentResult(matrix.score, aligned_s, aligned_r)


def rescore(result: AlignmentResult, w: ScoringScheme) -> int:
    """Recompute the score column by column from the aligned strings."""
    if len(result.aligned_s) != len(result.aligned_r):
        raise InvalidAlignment("aligned strings differ in length")
    total = 0
    for a, b in zip(result.aligned_s, result.aligned_r):
        if a == GAP and b == GAP:
            raise InvalidAlignment("column aligns gap against gap")
        total += w.column(a, b)
    return total


def format_alignment(result: AlignmentResult) -> str:
    """Three-line rendering plus the score.

    The midline marks matches with '|', mismatches with 'x', and leaves a
    space under gap columns.
    """
    mid = []
    for a, b in zip(result.aligned_s, result.aligned_r):
        if a == GAP or b == GAP:
            mid.append(" ")
        elif a == b:
            mid.append("|")
        else:
            mid.append("x")
    return "\n".join(
        [result.aligned_s, "".join(mid), result.aligned_r, f"score={result.score}"]
    )
