"""Command-line front end: one binary, four subcommands.

align runs the (optionally parallel) global aligner on two FASTA files,
compare runs the match-chain-plot pipeline, search runs the scatter-gather
database search, and bench emits timing CSVs for the align and search
workloads.  Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .align import ScoringScheme, format_alignment
from .chaining import Chain, global_chain, write_chain
from .dotplot import PlotKind, emit_gnuplot, render, spec_from_fragments
from .dbsearch import Database, SearchParams, scatter_gather, write_hits
from .errors import SeqGridError
from .harness import BenchRow, ClusterConfig, Mode, bench_report
from .mems import (
    REVERSE,
    build_index,
    enumerate_mems,
    enumerate_mems_both_strands,
    write_mems,
)
from .seqio import DNA, Sequence, parse_fasta
from .wavefront import parallel_nw


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


class _DataError(SeqGridError):
    pass


def _load_fasta(path: str, alphabet=None):
    try:
        with open(path, "r", encoding="ascii") as fh:
            return parse_fasta(fh, alphabet)
    except SeqGridError as exc:
        raise _DataError(f"{path}: {exc}") from exc


def _load_one(path: str) -> Sequence:
    return _load_fasta(path)[0]


def _write_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cluster(args) -> ClusterConfig:
    return ClusterConfig(workers=args.workers, mode=Mode(args.mode))


def _scheme(args) -> ScoringScheme:
    return ScoringScheme(args.match, args.mismatch, args.gap)


def _add_scheme_flags(p) -> None:
    p.add_argument("--match", type=int, default=1,
                   help="match score, must be positive (default 1)")
    p.add_argument("--mismatch", type=int, default=-1,
                   help="mismatch score, must be <= 0 (default -1)")
    p.add_argument("--gap", type=int, default=-1,
                   help="gap score, must be negative (default -1)")


def build_parser() -> _Parser:
    parser = _Parser(prog="seqgrid", allow_abbrev=False,
                     description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="cmd", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("align", allow_abbrev=False,
                       help="global alignment of two sequences")
    p.add_argument("--a", required=True, help="first FASTA file (first record)")
    p.add_argument("--b", required=True, help="second FASTA file (first record)")
    _add_scheme_flags(p)
    p.add_argument("--workers", type=int, default=1,
                   help="worker count for the wavefront aligner (default 1)")
    p.add_argument("--tile", type=int, default=64,
                   help="band height in rows per boundary message (default 64)")
    p.add_argument("--mode", choices=["sim", "threads"], default="sim",
                   help="execution mode (default sim)")
    p.add_argument("--out", help="alignment output path (default stdout)")
    p.add_argument("--timing-csv", help="also write a one-row timing CSV here")
    p.add_argument("--label", help="row label for --timing-csv")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("compare", allow_abbrev=False,
                       help="match, chain, and plot two sequences")
    p.add_argument("--a", required=True, help="first FASTA file (first record)")
    p.add_argument("--b", required=True, help="second FASTA file (first record)")
    p.add_argument("--minlen", type=int, default=20,
                   help="minimum exact match length (default 20)")
    p.add_argument("--out", default="compare",
                   help="output prefix for match and chain files "
                        "(default 'compare')")
    p.add_argument("--plot", help="SVG output path (default <prefix>.svg)")
    p.add_argument("--gnuplot", action="store_true",
                   help="also write a gnuplot script and data file")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("search", allow_abbrev=False,
                       help="search queries against a sequence database")
    p.add_argument("--db", required=True, help="database FASTA file")
    p.add_argument("--queries", required=True, help="query FASTA file")
    p.add_argument("--k", type=int,
                   help="seed length (default 11 for DNA, 4 for protein)")
    _add_scheme_flags(p)
    p.add_argument("--min-score", type=int, default=16,
                   help="minimum hit score (default 16)")
    p.add_argument("--x-drop", type=int, default=20,
                   help="extension dropoff (default 20)")
    p.add_argument("--topk", type=int, default=10,
                   help="hits reported per query (default 10)")
    p.add_argument("--workers", type=int, default=1,
                   help="database partitions searched in parallel (default 1)")
    p.add_argument("--mode", choices=["sim", "threads"], default="sim",
                   help="execution mode (default sim)")
    p.add_argument("--out", help="hit table output path (default stdout)")
    p.add_argument("--timing-csv", help="also write a one-row timing CSV here")
    p.add_argument("--label", help="row label for --timing-csv")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bench", allow_abbrev=False,
                       help="time a synthetic workload and emit a CSV row")
    p.add_argument("--pipeline", choices=["align", "search"], required=True,
                   help="workload to benchmark")
    p.add_argument("--size", type=int, default=2000,
                   help="sequence length (align) or database residues "
                        "(search) (default 2000)")
    p.add_argument("--workers", type=int, default=2,
                   help="worker count for the parallel run (default 2)")
    p.add_argument("--tile", type=int, default=64,
                   help="band height for the align workload (default 64)")
    p.add_argument("--mode", choices=["sim", "threads"], default="threads",
                   help="execution mode (default threads)")
    p.add_argument("--seed", type=int, default=0,
                   help="workload generator seed (default 0)")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--label", help="row label (default '<pipeline> <size>')")
    p.set_defaults(func=cmd_bench)

    return parser


def cmd_align(args) -> int:
    s = _load_one(args.a)
    r = _load_one(args.b)
    w = _scheme(args)
    result, report = parallel_nw(s, r, w, _cluster(args), tile=args.tile)
    _write_text(args.out, format_alignment(result) + "\n")
    if args.timing_csv:
        if args.workers == 1:
            one_node = report.total_time
        else:
            base = ClusterConfig(workers=1, mode=Mode(args.mode))
            one_node = parallel_nw(s, r, w, base, tile=args.tile)[1].total_time
        label = args.label or f"align {len(s.residues)}x{len(r.residues)}"
        row = BenchRow(label, one_node, report.total_time,
                       report.compute_time, report.comm_time)
        _write_text(args.timing_csv, bench_report([row]))
    return 0


def _compare_pipeline(s1: Sequence, s2: Sequence, minlen: int):
    if s1.alphabet is DNA and s2.alphabet is DNA:
        fwd_mems, rev_mems = enumerate_mems_both_strands(s1, s2, minlen)
    else:
        fwd_mems = enumerate_mems(build_index(s1, s2), minlen)
        rev_mems = []
    fwd_chain = global_chain(fwd_mems)
    rev_chain = global_chain(rev_mems) if rev_mems else Chain((), 0, REVERSE)
    return fwd_mems, rev_mems, fwd_chain, rev_chain


def cmd_compare(args) -> int:
    s1 = _load_one(args.a)
    s2 = _load_one(args.b)
    fwd_mems, rev_mems, fwd_chain, rev_chain = _compare_pipeline(
        s1, s2, args.minlen)
    prefix = args.out
    _write_text(f"{prefix}.mems.tsv",
                write_mems(fwd_mems, rev_mems, len(s2.residues)))
    _write_text(
        f"{prefix}.chains.txt",
        write_chain(fwd_chain, len(s2.residues))
        + write_chain(rev_chain, len(s2.residues)),
    )
    spec = spec_from_fragments(
        fwd_chain.fragments, rev_chain.fragments,
        len(s1.residues), len(s2.residues),
        title=f"{s1.id} vs {s2.id}", x_label=s1.id, y_label=s2.id,
    )
    plot_path = args.plot or f"{prefix}.svg"
    with open(plot_path, "wb") as fh:
        fh.write(render(spec))
    if args.gnuplot:
        data_name = f"{prefix}.dat"
        script, data = emit_gnuplot(spec, data_name=data_name)
        _write_text(f"{prefix}.gp", script)
        _write_text(data_name, data)
    print(
        f"{len(fwd_mems)} forward and {len(rev_mems)} reverse matches; "
        f"chain scores {fwd_chain.score} (F) and {rev_chain.score} (R); "
        f"plot written to {plot_path}"
    )
    return 0


def cmd_search(args) -> int:
    db_seqs = _load_fasta(args.db)
    queries = _load_fasta(args.queries)
    db = Database(db_seqs)
    alphabet = db_seqs[0].alphabet
    k = args.k if args.k is not None else (11 if alphabet is DNA else 4)
    params = SearchParams(k=k, scheme=_scheme(args),
                          min_score=args.min_score, x_drop=args.x_drop)
    results, report = scatter_gather(
        queries, db, _cluster(args), params, topk=args.topk)
    _write_text(args.out, write_hits(results))
    if args.timing_csv:
        if args.workers == 1:
            one_node = report.total_time
        else:
            base = ClusterConfig(workers=1, mode=Mode(args.mode))
            one_node = scatter_gather(
                queries, db, base, params, topk=args.topk)[1].total_time
        label = args.label or f"search {db.total_residues}"
        row = BenchRow(label, one_node, report.total_time,
                       report.compute_time, report.comm_time)
        _write_text(args.timing_csv, bench_report([row]))
    return 0


def _random_dna(rng: random.Random, n: int) -> str:
    return "".join(rng.choice("ACGT") for _ in range(n))


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    mode = Mode(args.mode)
    label = args.label or f"{args.pipeline} {args.size}"
    if args.pipeline == "align":
        s = Sequence("bench_a", _random_dna(rng, args.size), DNA)
        r = Sequence("bench_b", _random_dna(rng, args.size), DNA)
        w = ScoringScheme()
        one = parallel_nw(s, r, w, ClusterConfig(workers=1, mode=mode),
                          tile=args.tile)[1]
        par = parallel_nw(s, r, w,
                          ClusterConfig(workers=args.workers, mode=mode),
                          tile=args.tile)[1]
    else:
        nseq = max(1, args.size // 5000)
        per = max(1, args.size // nseq)
        seqs = [
            Sequence(f"bench_s{i + 1}", _random_dna(rng, per), DNA)
            for i in range(nseq)
        ]
        db = Database(seqs)
        qlen = min(100, per)
        queries = []
        for i in range(20):
            src = rng.choice(seqs)
            lo = rng.randint(0, len(src.residues) - qlen)
            queries.append(Sequence(f"bench_q{i + 1}",
                                    src.residues[lo:lo + qlen], DNA))
        params = SearchParams(k=min(11, qlen))
        one = scatter_gather(queries, db,
                             ClusterConfig(workers=1, mode=mode), params)[1]
        par = scatter_gather(
            queries, db, ClusterConfig(workers=args.workers, mode=mode),
            params)[1]
    row = BenchRow(label, one.total_time, par.total_time,
                   par.compute_time, par.comm_time)
    _write_text(args.out, bench_report([row]))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SeqGridError as exc:
        print(f"seqgrid: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"seqgrid: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
