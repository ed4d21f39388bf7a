"""End-to-end tests for the command-line interface."""

import random
import re
import shutil
import subprocess

import pytest

from seqgrid import cli
from seqgrid.align import ScoringScheme, nw_align
from seqgrid.mems import parse_mems
from seqgrid.seqio import DNA, Sequence, reverse_complement

LINE_RE = re.compile(rb'<line [^>]*stroke="(red|green)"')


def run_cli(args):
    try:
        return cli.main(args)
    except SystemExit as exc:
        return exc.code


def write_fasta(path, records):
    with open(path, "w") as fh:
        for name, residues in records:
            fh.write(f">{name}\n{residues}\n")
    return str(path)


def rand_dna(rng, n):
    return "".join(rng.choice("ACGT") for _ in range(n))


def test_align_matches_serial_and_writes_csv(tmp_path, capsys):
    rng = random.Random(5)
    a_res, b_res = rand_dna(rng, 70), rand_dna(rng, 64)
    a = write_fasta(tmp_path / "a.fa", [("a", a_res)])
    b = write_fasta(tmp_path / "b.fa", [("b", b_res)])
    out = tmp_path / "aln.txt"
    csv = tmp_path / "times.csv"
    code = run_cli([
        "align", "--a", a, "--b", b, "--match", "1", "--mismatch", "-1",
        "--gap", "-1", "--workers", "4", "--out", str(out),
        "--timing-csv", str(csv),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    want = nw_align(Sequence("a", a_res, DNA), Sequence("b", b_res, DNA),
                    ScoringScheme()).score
    assert lines[-1] == f"score={want}"
    got_csv = csv.read_text().splitlines()
    assert got_csv[0] == "label,one_node,nodes_with_comm,nodes_without_comm,comm_time"
    assert got_csv[1].startswith("align 70x64,")


def test_align_defaults_to_stdout(tmp_path, capsys):
    rng = random.Random(6)
    a = write_fasta(tmp_path / "a.fa", [("a", rand_dna(rng, 30))])
    b = write_fasta(tmp_path / "b.fa", [("b", rand_dna(rng, 30))])
    assert run_cli(["align", "--a", a, "--b", b]) == 0
    assert "score=" in capsys.readouterr().out


def make_compare_pair(tmp_path, rng):
    seg_f = rand_dna(rng, 80)
    seg_r = rand_dna(rng, 60)
    rc = reverse_complement(Sequence("t", seg_r, DNA)).residues
    s1 = rand_dna(rng, 150) + seg_f + rand_dna(rng, 150) + seg_r + rand_dna(rng, 100)
    s2 = rand_dna(rng, 120) + seg_f + rand_dna(rng, 180) + rc + rand_dna(rng, 90)
    a = write_fasta(tmp_path / "a.fa", [("s1", s1)])
    b = write_fasta(tmp_path / "b.fa", [("s2", s2)])
    return a, b


def test_compare_writes_mems_chains_and_svg(tmp_path, capsys):
    rng = random.Random(8)
    a, b = make_compare_pair(tmp_path, rng)
    prefix = str(tmp_path / "cmp")
    code = run_cli([
        "compare", "--a", a, "--b", b, "--minlen", "20",
        "--out", prefix, "--plot", str(tmp_path / "plot.svg"), "--gnuplot",
    ])
    assert code == 0
    rows = parse_mems((tmp_path / "cmp.mems.tsv").read_text())
    assert rows
    strands = {r[5] for r in rows}
    assert strands == {"F", "R"}
    chain_text = (tmp_path / "cmp.chains.txt").read_text()
    headers = [l for l in chain_text.splitlines() if l.startswith("chain ")]
    assert len(headers) == 2
    nfrags = sum(int(h.rsplit("nfrags=", 1)[1]) for h in headers)
    svg = (tmp_path / "plot.svg").read_bytes()
    assert len(LINE_RE.findall(svg)) == nfrags
    assert (tmp_path / "cmp.gp").exists()
    data_rows = (tmp_path / "cmp.dat").read_text().splitlines()
    assert len(data_rows) == nfrags


def test_compare_is_deterministic(tmp_path, capsys):
    rng = random.Random(9)
    a, b = make_compare_pair(tmp_path, rng)
    p1, p2 = str(tmp_path / "one"), str(tmp_path / "two")
    assert run_cli(["compare", "--a", a, "--b", b, "--out", p1]) == 0
    assert run_cli(["compare", "--a", a, "--b", b, "--out", p2]) == 0
    assert (tmp_path / "one.svg").read_bytes() == (tmp_path / "two.svg").read_bytes()
    assert (tmp_path / "one.mems.tsv").read_text() == (tmp_path / "two.mems.tsv").read_text()


def test_search_workers_do_not_change_hits(tmp_path, capsys):
    rng = random.Random(12)
    seqs = [(f"s{i + 1}", rand_dna(rng, 300)) for i in range(5)]
    queries = []
    for i in range(3):
        name, res = seqs[rng.randrange(len(seqs))]
        lo = rng.randint(0, len(res) - 50)
        queries.append((f"q{i + 1}", res[lo:lo + 50]))
    db = write_fasta(tmp_path / "db.fa", seqs)
    qf = write_fasta(tmp_path / "q.fa", queries)
    out1, out4 = tmp_path / "h1.tsv", tmp_path / "h4.tsv"
    assert run_cli(["search", "--db", db, "--queries", qf,
                    "--workers", "1", "--topk", "5", "--out", str(out1)]) == 0
    assert run_cli(["search", "--db", db, "--queries", qf,
                    "--workers", "4", "--topk", "5", "--out", str(out4)]) == 0
    assert out1.read_text() == out4.read_text()
    assert out1.read_text().count("\n") >= 3


def test_search_protein_defaults(tmp_path, capsys):
    res = "MKVLATTKGGDEWQRNPLYHSCFIMKVLAT"
    db = write_fasta(tmp_path / "db.fa", [("p1", res)])
    qf = write_fasta(tmp_path / "q.fa", [("q1", "KGGDEWQRNPLYH")])
    out = tmp_path / "hits.tsv"
    assert run_cli(["search", "--db", db, "--queries", qf,
                    "--min-score", "6", "--out", str(out)]) == 0
    first = out.read_text().splitlines()[0].split("\t")
    assert first[0] == "q1" and first[1] == "p1"


def test_bench_align_sim_row(tmp_path, capsys):
    csv = tmp_path / "bench.csv"
    code = run_cli(["bench", "--pipeline", "align", "--size", "120",
                    "--workers", "2", "--mode", "sim", "--out", str(csv)])
    assert code == 0
    header, row = csv.read_text().splitlines()
    assert header == "label,one_node,nodes_with_comm,nodes_without_comm,comm_time"
    label, one, with_c, without_c, comm = row.split(",")
    assert label == "align 120"
    assert float(with_c) - float(without_c) == pytest.approx(float(comm), rel=1e-4)


def test_bench_search_smoke(tmp_path, capsys):
    csv = tmp_path / "bench.csv"
    assert run_cli(["bench", "--pipeline", "search", "--size", "4000",
                    "--workers", "2", "--mode", "sim", "--seed", "3",
                    "--out", str(csv)]) == 0
    assert csv.read_text().splitlines()[1].startswith("search 4000,")


def test_usage_errors_exit_one(tmp_path, capsys):
    assert run_cli([]) == 1
    assert run_cli(["frobnicate"]) == 1
    assert run_cli(["align", "--a", "x.fa"]) == 1
    assert run_cli(["align", "--a", "x.fa", "--b", "y.fa", "--sideways"]) == 1
    assert run_cli(["bench", "--pipeline", "nope"]) == 1


def test_data_errors_exit_two(tmp_path, capsys):
    a = write_fasta(tmp_path / "a.fa", [("a", "ACGT")])
    assert run_cli(["align", "--a", str(tmp_path / "no.fa"), "--b", a]) == 2
    bad = tmp_path / "bad.fa"
    bad.write_text("ACGT\nno header\n")
    assert run_cli(["align", "--a", str(bad), "--b", a]) == 2
    err = capsys.readouterr().err
    assert "bad.fa" in err and "error" in err


def test_illegal_symbol_reported_with_context(tmp_path, capsys):
    a = write_fasta(tmp_path / "a.fa", [("a", "ACGT")])
    bad = tmp_path / "bad.fa"
    bad.write_text(">x\nAC!T\n")
    assert run_cli(["align", "--a", a, "--b", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "bad.fa" in err and "!" in err


def test_help_lists_flags(capsys):
    assert run_cli(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("align", "compare", "search", "bench"):
        assert name in out
    assert run_cli(["align", "--help"]) == 0
    out = capsys.readouterr().out
    for flag in ("--a", "--b", "--match", "--mismatch", "--gap",
                 "--workers", "--tile", "--mode", "--out", "--timing-csv"):
        assert flag in out


def test_console_script_installed():
    exe = shutil.which("seqgrid")
    if exe is None:
        pytest.skip("console script not on PATH")
    done = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert done.returncode == 0
    assert "compare" in done.stdout
