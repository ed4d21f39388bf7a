"""Independent brute-force reference implementations used to pin expected
values in the test suite.  These deliberately avoid sharing code or algorithmic
structure with the package: the alignment oracle enumerates every global
alignment, the match oracle checks the maximality definition position by
position, and the chain oracle walks every chain."""

WILD = frozenset("NX")


def oracle_align_score(s: str, r: str, match: int, mismatch: int, gap: int) -> int:
    """Max column-score sum over every global alignment of s and r.

    Exponential: alignments correspond to monotone lattice paths, all of
    which are visited.  Keep inputs at length <= 8 or so.
    """
    n, m = len(s), len(r)
    best = [None]

    def go(i, j, acc):
        if i == n and j == m:
            if best[0] is None or acc > best[0]:
                best[0] = acc
            return
        if i < n and j < m:
            go(i + 1, j + 1, acc + (match if s[i] == r[j] else mismatch))
        if i < n:
            go(i + 1, j, acc + gap)
        if j < m:
            go(i, j + 1, acc + gap)

    go(0, 0, 0)
    return best[0]


def _eq(a: str, b: str) -> bool:
    return a == b and a not in WILD


def oracle_mems(s1: str, s2: str, l: int):
    """Maximal exact matches of length >= l by direct definition check.

    Returns sorted (i, j, length) triples with 0-based start positions.  A
    pair qualifies when the preceding residues do not match (or a string
    boundary blocks extension) and the run of matching residues starting at
    (i, j) has length >= l.  Wildcards never match, including against
    themselves.
    """
    out = []
    for i in range(len(s1)):
        for j in range(len(s2)):
            if i > 0 and j > 0 and _eq(s1[i - 1], s2[j - 1]):
                continue
            k = 0
            while i + k < len(s1) and j + k < len(s2) and _eq(s1[i + k], s2[j + k]):
                k += 1
            if k >= l:
                out.append((i, j, k))
    out.sort()
    return out


def _walk_drop(cols, x_drop: int):
    """Best prefix sum over cols under the X-dropoff stop rule.

    Returns (gain, span): the running sum is tracked left to right, the
    earliest maximum wins, and the walk stops once the running sum falls
    more than x_drop below the best seen.
    """
    best, span, run = 0, 0, 0
    for t, c in enumerate(cols):
        run += c
        if run > best:
            best, span = run, t + 1
        elif run < best - x_drop:
            break
    return best, span


def oracle_hits(q: str, subjects, k: int, match: int, mismatch: int,
                min_score: int, x_drop: int, wild=frozenset("N")):
    """Seed-and-extend hits by direct definition, without an index.

    subjects is a list of (subject_id, residues).  Every position pair whose
    k-mers are equal and wildcard-free is extended in both directions with
    the X-dropoff rule; identical intervals are reported once.  wild holds
    the symbols that never match (pass {"X"} for protein).  Returns
    (subject_id, q_start, q_end, s_start, s_end, score) tuples with 1-based
    inclusive coordinates, ranked like the engine output.
    """

    def col(a, b):
        return match if (a == b and a not in wild) else mismatch

    found = {}
    for sid, s in subjects:
        for i in range(len(q) - k + 1):
            word = q[i:i + k]
            if set(word) & wild:
                continue
            for j in range(len(s) - k + 1):
                if s[j:j + k] != word:
                    continue
                right = [
                    col(q[i + k + t], s[j + k + t])
                    for t in range(min(len(q) - i - k, len(s) - j - k))
                ]
                left = [
                    col(q[i - 1 - t], s[j - 1 - t])
                    for t in range(min(i, j))
                ]
                gain_r, span_r = _walk_drop(right, x_drop)
                gain_l, span_l = _walk_drop(left, x_drop)
                score = k * match + gain_l + gain_r
                if score < min_score:
                    continue
                key = (sid, i - span_l + 1, i + k + span_r,
                       j - span_l + 1, j + k + span_r)
                found[key] = score
    rows = [key + (score,) for key, score in found.items()]
    rows.sort(key=lambda r: (-r[5], r[0], r[3], r[1], r[2], r[4]))
    return rows


def oracle_best_chain(frags):
    """Best chain over (beg_x, beg_y, end_x, end_y, length) tuples.

    Enumerates every chain (sequences where each fragment strictly precedes
    the next in both coordinates) and returns (score, index_list) with the
    highest total length, ties broken by the lexicographically smallest
    index sequence.  Exponential; keep fragment counts small.
    """
    best_score = [0]
    best_seq = [[]]

    def precedes(a, b):
        return frags[a][2] < frags[b][0] and frags[a][3] < frags[b][1]

    def go(last, seq, score):
        if score > best_score[0] or (
            score == best_score[0] and seq < best_seq[0]
        ):
            best_score[0] = score
            best_seq[0] = list(seq)
        for i in range(len(frags)):
            if last is None or precedes(last, i):
                seq.append(i)
                go(i, seq, score + frags[i][4])
                seq.pop()

    go(None, [], 0)
    return best_score[0], best_seq[0]
