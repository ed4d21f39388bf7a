"""FASTA parsing and serialization, alphabet handling, reverse complement."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .errors import EmptyInput, IllegalSymbol, MalformedHeader, WrongAlphabet


@dataclass(frozen=True)
class Alphabet:
    """A residue alphabet with a wildcard symbol.

    The wildcard (N for DNA, X for protein) is accepted on input but never
    participates in an exact match.
    """

    name: str
    order: str  # canonical symbol order, wildcard last
    wildcard: str

    @property
    def symbols(self) -> frozenset:
        return frozenset(self.order)


DNA = Alphabet("DNA", "ACGTN", "N")
PROTEIN = Alphabet("Protein", "ACDEFGHIKLMNPQRSTVWYX", "X")

_COMPLEMENT = str.maketrans("ACGTN", "TGCAN")


@dataclass
class Sequence:
    """A validated residue string with an identifier and alphabet tag."""

    id: str
    residues: str
    alphabet: Alphabet = DNA
    description: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("sequence id must be non-empty")
        if not set(self.residues) <= self.alphabet.symbols:
            bad = next(
                i for i, c in enumerate(self.residues)
                if c not in self.alphabet.symbols
            )
            raise IllegalSymbol(self.id, self.residues[bad], bad)

    def __len__(self) -> int:
        return len(self.residues)


def detect_alphabet(residues: str) -> Alphabet:
    """DNA if every residue fits the DNA alphabet, protein otherwise."""
    return DNA if set(residues) <= DNA.symbols else PROTEIN


def validate(residues: str, alphabet: Alphabet, record_id: str = "?") -> None:
    """Raise IllegalSymbol (with 0-based position) unless all residues fit.

    The wildcard counts as a member of the alphabet.
    """
    if set(residues) <= alphabet.symbols:
        return
    for i, c in enumerate(residues):
        if c not in alphabet.symbols:
            raise IllegalSymbol(record_id, c, i)


def parse_fasta(source, alphabet: Alphabet | None = None) -> list[Sequence]:
    """Parse FASTA text into a list of Sequence records.

    ``source`` may be a string, bytes, or a line-iterable handle.  Residues
    are uppercased and whitespace inside sequence lines is stripped.  The id
    is the first whitespace-delimited token after '>'; the remainder of the
    header is kept as the description.  With ``alphabet=None`` each record is
    classified as DNA when all residues fit the DNA alphabet, protein
    otherwise.

    Raises EmptyInput when no records are present, MalformedHeader when
    sequence data precedes the first header, and IllegalSymbol (with record
    id, line number, and offending character) on out-of-alphabet residues.
    """
    if isinstance(source, bytes):
        source = source.decode("ascii")
    if isinstance(source, str):
        source = io.StringIO(source)

    records = []  # (id, description, [(line_no, cleaned_text)])
    current = None
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        if line.startswith(">"):
            header = line[1:].strip()
            if not header:
                raise MalformedHeader(f"empty header at line {line_no}")
            name, _, desc = header.partition(" ")
            current = (name, desc.strip(), [])
            records.append(current)
        else:
            if current is None:
                raise MalformedHeader(
                    f"sequence data before first '>' at line {line_no}"
                )
            cleaned = "".join(line.split()).upper()
            if cleaned:
                current[2].append((line_no, cleaned))

    if not records:
        raise EmptyInput("no FASTA records in input")

    out = []
    for name, desc, segments in records:
        residues = "".join(text for _, text in segments)
        ab = alphabet or detect_alphabet(residues)
        if not set(residues) <= ab.symbols:
            offset = 0
            for line_no, text in segments:
                for i, c in enumerate(text):
                    if c not in ab.symbols:
                        raise IllegalSymbol(name, c, offset + i, line=line_no)
                offset += len(text)
        out.append(Sequence(name, residues, ab, desc))
    return out


def write_fasta(sequences, width: int = 60) -> str:
    """Serialize sequences as FASTA text, wrapping residue lines at ``width``."""
    parts = []
    for seq in sequences:
        header = f">{seq.id}"
        if seq.description:
            header += f" {seq.description}"
        parts.append(header)
        for i in range(0, len(seq.residues), width):
            parts.append(seq.residues[i:i + width])
        if not seq.residues:
            parts.append("")
    return "\n".join(parts) + "\n"


def reverse_complement(seq: Sequence) -> Sequence:
    """Reverse complement of a DNA sequence (A<->T, C<->G, N fixed).

    Applying it twice returns the original sequence.
    """
    if seq.alphabet is not DNA:
        raise WrongAlphabet(
            f"reverse complement needs DNA input, got {seq.alphabet.name}"
        )
    rc = seq.residues.translate(_COMPLEMENT)[::-1]
    return Sequence(seq.id, rc, DNA, seq.description)
