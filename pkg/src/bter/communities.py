"""BTER preprocessing: affinity blocks, per-block connectivity, excess degrees.

Nodes of degree 2+ are packed greedily (ascending degree) into blocks of
size bar_d + 1, where bar_d is the degree of the block's first node; each
block is later wired internally as an ER graph with probability rho_k, and
whatever degree the block cannot supply is carried into the Chung-Lu
interconnect phase as per-node excess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .degrees import DegreeSequence

VARIANTS = ("standard", "cubic")

# Connectivity parameters fitted by hand in prior experiments, per dataset.
DATASET_FITS = {
    "ca-AstroPh": ("standard", 0.95, 0.05),
    "soc-Epinions1": ("standard", 0.70, 1.25),
    "ca-CondMat": ("standard", 0.95, 0.95),
    "cit-HepPh": ("cubic", 0.70, 0.60),
}


@dataclass(frozen=True)
class ConnectivityFormula:
    """Block edge probability as a function of the block's minimum degree.

    The standard variant evaluates rho * (1 - eta * x**2) and the cubic
    variant fixes rho=0.7, eta=0.6 with exponent 3, where
    x = log(bar_d + 1) / log(d_max + 1). Values are clamped to [0, 1].
    """

    variant: str = "standard"
    rho: float = 0.95
    eta: float = 0.05

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.variant == "cubic":
            object.__setattr__(self, "rho", 0.7)
            object.__setattr__(self, "eta", 0.6)
        if not 0.0 < self.rho <= 1.0:
            raise ValueError("rho must be in (0, 1]")
        if self.eta < 0.0:
            raise ValueError("eta must be >= 0")

    @property
    def exponent(self) -> int:
        return 3 if self.variant == "cubic" else 2


def community_rho(bar_d: int, d_max: int, f: ConnectivityFormula) -> float:
    """Edge probability for a block with minimum degree bar_d."""
    if not 1 <= bar_d <= d_max:
        raise ValueError(f"need 1 <= bar_d <= d_max, got bar_d={bar_d} d_max={d_max}")
    ratio = math.log(bar_d + 1) / math.log(d_max + 1)
    value = f.rho * (1.0 - f.eta * ratio**f.exponent)
    return min(1.0, max(0.0, value))


def partition_communities(seq: DegreeSequence) -> list[np.ndarray]:
    """Greedy block formation over the sorted degree sequence.

    Scanning nodes with degree >= 2 in ascending order, each block takes
    bar_d + 1 consecutive nodes where bar_d is its first node's degree; the
    final block takes whatever nodes remain. Degree-1 nodes are unassigned.
    """
    degrees = seq.degrees
    start = int(np.searchsorted(degrees, 2))
    blocks: list[np.ndarray] = []
    i = start
    n = seq.n
    while i < n:
        size = int(degrees[i]) + 1
        blocks.append(np.arange(i, min(i + size, n), dtype=np.int64))
        i += size
    return blocks


def excess_degrees(
    seq: DegreeSequence, blocks: list[np.ndarray], rho_values: np.ndarray
) -> np.ndarray:
    """Per-node excess degree: the Chung-Lu weight left after block wiring.

    Degree-1 nodes get excess 1; block members get d_i - rho_k*(size-1),
    clamped at 0 (the clamp cannot trigger under the size = bar_d + 1 rule
    but guards any partition fed in externally).
    """
    e = np.zeros(seq.n, dtype=np.float64)
    e[seq.degrees == 1] = 1.0
    for block, rho in zip(blocks, rho_values):
        expected_internal = rho * (len(block) - 1)
        e[block] = np.maximum(0.0, seq.degrees[block] - expected_internal)
    return e


@dataclass(frozen=True)
class CommunityPartition:
    """Full preprocessing result for one degree sequence."""

    blocks: list[np.ndarray]
    assignment: np.ndarray  # node -> block id, -1 for unassigned degree-1 nodes
    bar_d: np.ndarray  # per-block minimum target degree
    rho: np.ndarray  # per-block ER probability
    excess: np.ndarray  # per-node excess degree

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> np.ndarray:
        return np.array([len(b) for b in self.blocks], dtype=np.int64)


def preprocess(seq: DegreeSequence, f: ConnectivityFormula) -> CommunityPartition:
    """Partition, assign rho_k per block, and compute excess degrees.

    A short final block (fewer than bar_d + 1 nodes, because the sequence
    ran out) gets rho = 0, so its members carry their full degree as excess.
    """
    blocks = partition_communities(seq)
    d_max = seq.d_max
    bar_d = np.array([int(seq.degrees[b[0]]) for b in blocks], dtype=np.int64)
    rho = np.zeros(len(blocks), dtype=np.float64)
    for k, block in enumerate(blocks):
        last_and_short = k == len(blocks) - 1 and len(block) < bar_d[k] + 1
        rho[k] = 0.0 if last_and_short else community_rho(int(bar_d[k]), d_max, f)
    assignment = np.full(seq.n, -1, dtype=np.int64)
    for k, block in enumerate(blocks):
        assignment[block] = k
    excess = excess_degrees(seq, blocks, rho)
    return CommunityPartition(blocks, assignment, bar_d, rho, excess)


def write_partition_csv(part: CommunityPartition, seq: DegreeSequence, path) -> None:
    """Dump "node,block,bar_d,rho,excess" rows (block -1 for unassigned)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("node,block,bar_d,rho,excess\n")
        for node in range(seq.n):
            k = int(part.assignment[node])
            bar = int(part.bar_d[k]) if k >= 0 else 0
            rho = part.rho[k] if k >= 0 else 0.0
            fh.write(f"{node},{k},{bar},{rho:.12g},{part.excess[node]:.12g}\n")


def read_partition_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a partition dump; returns (assignment, excess) arrays.

    Rows may appear in any node order but must cover 0..n-1 exactly once.
    """
    nodes: list[int] = []
    blocks: list[int] = []
    excess: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "node,block,bar_d,rho,excess":
            raise ValueError(f"{path}: unexpected partition header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ValueError(f"{path}: bad partition row {line!r}")
            nodes.append(int(parts[0]))
            blocks.append(int(parts[1]))
            excess.append(float(parts[4]))
    n = len(nodes)
    if sorted(nodes) != list(range(n)):
        raise ValueError(f"{path}: node column must cover 0..{n - 1} exactly once")
    assignment = np.empty(n, dtype=np.int64)
    exc = np.empty(n, dtype=np.float64)
    for node, k, e in zip(nodes, blocks, excess):
        assignment[node] = k
        exc[node] = e
    return assignment, exc
