"""seqgrid: parallel sequence comparison over an in-process cluster harness.

Three pipelines share one worker substrate: a wavefront-parallel global
aligner, an exact-match chaining comparator with dot-plot output, and a
scatter-gather database search.  The harness runs either as a deterministic
simulation with an explicit communication cost model or on real threads.
"""

from .align import (
    AlignmentResult,
    ScoringScheme,
    format_alignment,
    nw_align,
    nw_matrix,
    rescore,
)
from .chaining import (
    Chain,
    RangeMaxStructure,
    chain_pipeline,
    global_chain,
    precedes,
    write_chain,
)
from .dbsearch import (
    Database,
    Hit,
    Partition,
    SearchParams,
    scatter_gather,
    search_partition,
    segment,
    write_hits,
)
from .dotplot import PlotKind, PlotSpec, emit_gnuplot, render, spec_from_fragments
from .harness import (
    BenchRow,
    ClusterConfig,
    Job,
    Mode,
    TimingReport,
    bench_report,
    run_job_queue,
)
from .mems import (
    FORWARD,
    REVERSE,
    Fragment,
    Point,
    build_index,
    enumerate_mems,
    enumerate_mems_both_strands,
    parse_mems,
    write_mems,
)
from .seqio import (
    DNA,
    PROTEIN,
    Alphabet,
    Sequence,
    detect_alphabet,
    parse_fasta,
    reverse_complement,
    write_fasta,
)
from .wavefront import count_boundary_messages, parallel_nw

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "Alphabet",
    "BenchRow",
    "Chain",
    "ClusterConfig",
    "DNA",
    "Database",
    "FORWARD",
    "Fragment",
    "Hit",
    "Job",
    "Mode",
    "PROTEIN",
    "Partition",
    "PlotKind",
    "PlotSpec",
    "Point",
    "RangeMaxStructure",
    "REVERSE",
    "ScoringScheme",
    "SearchParams",
    "Sequence",
    "TimingReport",
    "bench_report",
    "build_index",
    "chain_pipeline",
    "count_boundary_messages",
    "detect_alphabet",
    "emit_gnuplot",
    "enumerate_mems",
    "enumerate_mems_both_strands",
    "format_alignment",
    "global_chain",
    "nw_align",
    "nw_matrix",
    "parallel_nw",
    "parse_fasta",
    "parse_mems",
    "precedes",
    "render",
    "rescore",
    "reverse_complement",
    "run_job_queue",
    "scatter_gather",
    "search_partition",
    "segment",
    "spec_from_fragments",
    "write_chain",
    "write_fasta",
    "write_hits",
    "write_mems",
]
