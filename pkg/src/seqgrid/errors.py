"""Exception types shared across the toolkit."""


class SeqGridError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(SeqGridError):
    """FASTA input contained no records."""


class MalformedHeader(SeqGridError):
    """Sequence data appeared before the first '>' header line."""


class IllegalSymbol(SeqGridError):
    """A residue is not part of the declared alphabet.

    Attributes carry enough context to point at the offending input:
    ``record_id``, ``line`` (1-based line number in the source, or None for
    in-memory sequences), ``symbol`` and ``position`` (0-based index into
    the residue string).
    """

    def __init__(self, record_id, symbol, position, line=None):
        self.record_id = record_id
        self.symbol = symbol
        self.position = position
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(
            f"illegal symbol {symbol!r} in record {record_id!r} "
            f"({where}position {position})"
        )


class WrongAlphabet(SeqGridError):
    """Operation requires a different alphabet (e.g. reverse complement of protein)."""


class AlphabetMismatch(SeqGridError):
    """The two sequences do not share an alphabet."""


class InvalidAlignment(SeqGridError):
    """Aligned strings are inconsistent (length mismatch or gap-over-gap column)."""


class InvalidPartition(SeqGridError):
    """Worker count or tile height is incompatible with the matrix dimensions."""


class EmptySequence(SeqGridError):
    """An operation that needs non-empty sequences received an empty one."""


class StrandMismatch(SeqGridError):
    """Fragments of different strands were combined."""


class EmptyDatabase(SeqGridError):
    """The sequence database contains no sequences."""


class DuplicateSequenceId(SeqGridError):
    """Database sequence ids must be unique."""


class BadParams(SeqGridError):
    """Search parameters violate their preconditions (e.g. seed longer than query)."""


class ChannelClosed(SeqGridError):
    """Send or receive on a closed channel."""


class BlockedChannel(SeqGridError):
    """Deterministic-mode receive found the channel empty and no producer to step."""


class ExecutorFailure(SeqGridError):
    """A job's executor raised; recorded per job in the run report."""

    def __init__(self, job_id, cause):
        self.job_id = job_id
        self.cause = cause
        super().__init__(f"job {job_id!r} failed: {cause}")


class OutOfBounds(SeqGridError):
    """A fragment lies outside the plot area."""


class ScoreOverflow(SeqGridError):
    """Sequences too long for the fixed-width score arithmetic."""
