"""Measurement suite: degree histogram, triangles and clustering, spectrum.

Triangle counts are exact, via an edge iterator that intersects sorted
neighbor lists (each triangle found once, at its lexicographically first
edge). The leading adjacency eigenvalues come from a Lanczos iteration with
full reorthogonalization and explicit deflation, using only sparse
matrix-vector products.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .graph import Graph
from .rng import substream

_SPECTRUM_STREAM = 9


@dataclass(frozen=True)
class TriangleWedgeCounts:
    """Exact triangle/wedge totals and per-node breakdown.

    per_node_triangles[i] counts triangles containing node i, so its sum is
    3 * triangles; per_node_wedges[i] = C(degree(i), 2).
    """

    triangles: int
    wedges: int
    per_node_triangles: np.ndarray
    per_node_wedges: np.ndarray


@dataclass(frozen=True)
class ClusteringProfile:
    """Global, per-node, and by-degree clustering coefficients.

    global_c is 3*triangles/wedges (0.0 for wedge-free graphs); per_node is
    NaN where a node centers no wedge, and such nodes are excluded from the
    by-degree means.
    """

    global_c: float
    per_node: np.ndarray
    by_degree: dict[int, tuple[float, int]]  # degree -> (mean C_i, node count)


@dataclass(frozen=True)
class SpectrumReport:
    """Leading adjacency eigenvalues, largest first, with residual norms.

    Every reported pair satisfies ||A v - lambda v|| <= tolerance for the
    unit Ritz vector v.
    """

    eigenvalues: np.ndarray
    residuals: np.ndarray
    k: int
    tolerance: float
    iterations: int


class SpectrumConvergenceError(RuntimeError):
    """Lanczos failed to reach the residual tolerance within its budget."""

    def __init__(self, message: str, partial: SpectrumReport):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class MetricsReport:
    """Bundle of the measurement views computed for one graph."""

    n_nodes: int
    n_edges: int
    degree_hist: dict[int, int] | None = None
    triangles: int | None = None
    wedges: int | None = None
    global_c: float | None = None
    by_degree_cc: dict[int, tuple[float, int]] | None = None
    eigenvalues: np.ndarray | None = None
    spectrum_residuals: np.ndarray | None = None

    def metric_set(self) -> frozenset[str]:
        present = set()
        if self.degree_hist is not None:
            present.add("degree")
        if self.triangles is not None:
            present.add("triangles")
        if self.global_c is not None:
            present.add("cc")
        if self.eigenvalues is not None:
            present.add("spectrum")
        return frozenset(present)


@dataclass(frozen=True)
class DivergenceSummary:
    """Per-metric distances between two reports."""

    degree_tv: float | None
    global_c_gap: float | None
    by_degree_cc_gap: float | None
    shared_cc_degrees: int | None
    eigen_rel_gaps: np.ndarray | None

    @property
    def eigen_max_rel_gap(self) -> float | None:
        if self.eigen_rel_gaps is None or len(self.eigen_rel_gaps) == 0:
            return None
        return float(np.max(self.eigen_rel_gaps))

    @property
    def eigen_mean_rel_gap(self) -> float | None:
        if self.eigen_rel_gaps is None or len(self.eigen_rel_gaps) == 0:
            return None
        return float(np.mean(self.eigen_rel_gaps))


# ---------------------------------------------------------------------------
# Triangles and clustering
# ---------------------------------------------------------------------------


def _count_chunk(
    edges: np.ndarray,
    nbr_lists: list[list[int]],
    nbr_sets: list[set[int]],
    degrees: np.ndarray,
    n: int,
) -> tuple[int, np.ndarray]:
    from bisect import bisect_right

    deg = degrees.tolist()
    tri_at = [0] * n
    total = 0
    for u, v in edges.tolist():
        # iterate the smaller neighborhood, restricted to ids above v so
        # each triangle {u < v < w} is found exactly once
        if deg[u] <= deg[v]:
            cand, other = nbr_lists[u], nbr_sets[v]
        else:
            cand, other = nbr_lists[v], nbr_sets[u]
        for w in cand[bisect_right(cand, v) :]:
            if w in other:
                total += 1
                tri_at[u] += 1
                tri_at[v] += 1
                tri_at[w] += 1
    return total, np.asarray(tri_at, dtype=np.int64)


def count_triangles_wedges(g: Graph, threads: int = 1) -> TriangleWedgeCounts:
    """Exact triangle and wedge counts.

    The edge list may be split across worker threads; per-chunk integer
    accumulators are merged at the end, so the result is independent of
    thread count.
    """
    n = g.n
    degrees = g.degrees
    nbr_lists = [g.neighbors(u).tolist() for u in range(n)]
    nbr_sets = [set(lst) for lst in nbr_lists]

    threads = max(1, threads)
    if threads == 1 or g.edge_count < 4 * threads:
        total, tri_at = _count_chunk(g.edges, nbr_lists, nbr_sets, degrees, n)
    else:
        chunks = np.array_split(g.edges, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(
                    lambda c: _count_chunk(c, nbr_lists, nbr_sets, degrees, n), chunks
                )
            )
        total = sum(r[0] for r in results)
        tri_at = np.sum([r[1] for r in results], axis=0)

    wedge_at = degrees.astype(np.int64) * (degrees.astype(np.int64) - 1) // 2
    return TriangleWedgeCounts(
        triangles=int(total),
        wedges=int(wedge_at.sum()),
        per_node_triangles=tri_at,
        per_node_wedges=wedge_at,
    )


def clustering_profile(
    g: Graph, counts: TriangleWedgeCounts | None = None, threads: int = 1
) -> ClusteringProfile:
    """Global C, per-node C_i, and mean C_i per degree.

    Nodes centering no wedge (degree < 2) have undefined C_i and are left
    out of the by-degree means.
    """
    if counts is None:
        counts = count_triangles_wedges(g, threads=threads)
    per_node = np.full(g.n, np.nan)
    defined = counts.per_node_wedges > 0
    per_node[defined] = (
        counts.per_node_triangles[defined] / counts.per_node_wedges[defined]
    )
    global_c = 3.0 * counts.triangles / counts.wedges if counts.wedges else 0.0

    by_degree: dict[int, tuple[float, int]] = {}
    degs = g.degrees[defined]
    vals = per_node[defined]
    for d in np.unique(degs):
        sel = vals[degs == d]
        by_degree[int(d)] = (float(sel.mean()), int(sel.size))
    return ClusteringProfile(global_c=global_c, per_node=per_node, by_degree=by_degree)


def degree_histogram(g: Graph) -> dict[int, int]:
    """Realized degree counts, including a degree-0 entry for isolated nodes."""
    values, counts = np.unique(g.degrees, return_counts=True)
    return {int(d): int(c) for d, c in zip(values, counts)}


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

DEFAULT_TOP_K = 25


def _lanczos_extreme(
    matvec,
    n: int,
    deflate: np.ndarray,
    rng: np.random.Generator,
    tol: float,
    max_dim: int,
):
    """Largest Ritz pair of the operator restricted to span(deflate)^perp.

    Full reorthogonalization against both the Krylov basis and the deflated
    vectors keeps the basis numerically orthogonal; the run stops once the
    explicit residual of the top Ritz pair is below tol, or fails after
    max_dim steps.
    """

    def project_out(x):
        if deflate.shape[1]:
            x -= deflate @ (deflate.T @ x)
        return x

    best = (None, None, math.inf)  # (theta, y, residual)
    for _attempt in range(3):
        q = project_out(rng.standard_normal(n))
        nq = np.linalg.norm(q)
        if nq < 1e-12:
            continue
        q /= nq
        Q = np.empty((n, max_dim))
        Q[:, 0] = q
        alphas: list[float] = []
        betas: list[float] = []
        check_at = 1e-1 * tol
        breakdown = False
        for j in range(max_dim):
            w = matvec(Q[:, j])
            if j > 0:
                w -= betas[-1] * Q[:, j - 1]
            a = float(Q[:, j] @ w)
            alphas.append(a)
            w -= a * Q[:, j]
            for _ in range(2):
                w = project_out(w)
                w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
            b = float(np.linalg.norm(w))

            if j == 0:
                theta, u = alphas[0], np.ones(1)
            else:
                vals, vecs = eigh_tridiagonal(
                    np.asarray(alphas), np.asarray(betas), select="i", select_range=(j, j)
                )
                theta, u = float(vals[0]), vecs[:, 0]
            est = b * abs(u[-1])
            breakdown = b < 1e-13
            exhausted = breakdown or j + 1 == max_dim
            if est <= check_at or exhausted:
                y = Q[:, : j + 1] @ u
                y = project_out(y)
                ny = np.linalg.norm(y)
                if ny > 1e-12:
                    y /= ny
                    res = float(np.linalg.norm(matvec(y) - theta * y))
                    if res <= tol:
                        return float(theta), y, res, j + 1
                    if res < best[2]:
                        best = (float(theta), y, res)
                check_at *= 0.5  # verify less eagerly next time
            if exhausted:
                break
            betas.append(b)
            Q[:, j + 1] = w / b
        if not breakdown:
            break  # full budget spent; a fresh start vector will not help
        # breakdown without convergence: the start vector lived in a poor
        # invariant subspace, retry with a new one
    return best[0], best[1], best[2], max_dim


def top_eigenvalues(
    g: Graph,
    k: int = DEFAULT_TOP_K,
    tol: float = 1e-8,
    seed: int = 0,
    max_dim: int = 300,
) -> SpectrumReport:
    """Top-k adjacency eigenvalues by an iterative Krylov scheme.

    Eigenpairs are extracted one at a time, deflating converged vectors, so
    repeated eigenvalues are recovered with their multiplicity. The whole
    computation touches the matrix only through sparse matvecs and is
    deterministic for a fixed starting-vector seed.

    Raises SpectrumConvergenceError (carrying the pairs found so far) if an
    eigenpair fails to meet tol within the iteration budget.
    """
    n = g.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if tol <= 0:
        raise ValueError("tol must be positive")

    if g.edge_count == 0:
        return SpectrumReport(
            eigenvalues=np.zeros(k),
            residuals=np.zeros(k),
            k=k,
            tolerance=tol,
            iterations=0,
        )

    A = g.adjacency_csr()
    matvec = A.dot
    rng = substream(seed, _SPECTRUM_STREAM)
    vals: list[float] = []
    residuals: list[float] = []
    basis = np.empty((n, 0))
    iterations = 0
    for j in range(k):
        budget = min(n - j, max_dim)
        theta, y, res, used = _lanczos_extreme(matvec, n, basis, rng, tol, budget)
        iterations += used
        if theta is None or res > tol:
            partial = SpectrumReport(
                eigenvalues=np.asarray(vals),
                residuals=np.asarray(residuals),
                k=k,
                tolerance=tol,
                iterations=iterations,
            )
            raise SpectrumConvergenceError(
                f"eigenpair {j + 1}/{k} stalled at residual {res:.3e} > tol {tol:.3e}",
                partial,
            )
        vals.append(theta)
        residuals.append(res)
        basis = np.column_stack([basis, y])

    order = np.argsort(-np.asarray(vals), kind="stable")
    return SpectrumReport(
        eigenvalues=np.asarray(vals)[order],
        residuals=np.asarray(residuals)[order],
        k=k,
        tolerance=tol,
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Report assembly and comparison
# ---------------------------------------------------------------------------

ALL_METRICS = ("degree", "cc", "triangles", "spectrum")


def compute_report(
    g: Graph,
    metrics=("degree", "cc", "triangles"),
    top_k: int = DEFAULT_TOP_K,
    tol: float = 1e-8,
    seed: int = 0,
    threads: int = 1,
) -> MetricsReport:
    """Compute the requested measurement views for one graph."""
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        raise ValueError(f"unknown metrics: {sorted(unknown)}")
    degree_hist = degree_histogram(g) if "degree" in metrics else None
    triangles = wedges = None
    global_c = None
    by_degree = None
    if "cc" in metrics or "triangles" in metrics:
        counts = count_triangles_wedges(g, threads=threads)
        triangles, wedges = counts.triangles, counts.wedges
        if "cc" in metrics:
            prof = clustering_profile(g, counts)
            global_c, by_degree = prof.global_c, prof.by_degree
        if "triangles" not in metrics:
            triangles = wedges = None
    eigenvalues = residuals = None
    if "spectrum" in metrics:
        spec = top_eigenvalues(g, k=min(top_k, g.n), tol=tol, seed=seed)
        eigenvalues, residuals = spec.eigenvalues, spec.residuals
    return MetricsReport(
        n_nodes=g.n,
        n_edges=g.edge_count,
        degree_hist=degree_hist,
        triangles=triangles,
        wedges=wedges,
        global_c=global_c,
        by_degree_cc=by_degree,
        eigenvalues=eigenvalues,
        spectrum_residuals=residuals,
    )


def degree_tv_distance(hist_a: dict[int, int], hist_b: dict[int, int]) -> float:
    """Total-variation distance between two degree histograms.

    Each histogram is normalized by its own node total; the distance is
    half the L1 gap over the union of degrees (1 when supports are
    disjoint, 0 when the normalized histograms agree).
    """
    na = sum(hist_a.values())
    nb = sum(hist_b.values())
    if na == 0 or nb == 0:
        raise ValueError("empty histogram")
    gap = 0.0
    for d in set(hist_a) | set(hist_b):
        gap += abs(hist_a.get(d, 0) / na - hist_b.get(d, 0) / nb)
    return 0.5 * gap


def compare_reports(
    a: MetricsReport, b: MetricsReport, cc_count_floor: int = 1
) -> DivergenceSummary:
    """Per-metric divergences between two reports on the same metric set.

    The by-degree clustering gap is the largest absolute difference of mean
    C_i over degrees present in both reports with at least cc_count_floor
    nodes on each side (0 when no degree qualifies). Eigenvalue gaps are
    per-rank relative differences and require equal k.
    """
    if a.metric_set() != b.metric_set():
        raise ValueError(
            f"reports computed different metrics: {sorted(a.metric_set())} "
            f"vs {sorted(b.metric_set())}"
        )

    degree_tv = None
    if a.degree_hist is not None:
        degree_tv = degree_tv_distance(a.degree_hist, b.degree_hist)

    global_gap = None
    cc_gap = None
    shared = None
    if a.global_c is not None:
        global_gap = abs(a.global_c - b.global_c)
        common = [
            d
            for d in set(a.by_degree_cc) & set(b.by_degree_cc)
            if a.by_degree_cc[d][1] >= cc_count_floor
            and b.by_degree_cc[d][1] >= cc_count_floor
        ]
        shared = len(common)
        cc_gap = max(
            (abs(a.by_degree_cc[d][0] - b.by_degree_cc[d][0]) for d in common),
            default=0.0,
        )

    rel_gaps = None
    if a.eigenvalues is not None:
        if len(a.eigenvalues) != len(b.eigenvalues):
            raise ValueError(
                f"mismatched spectrum lengths: {len(a.eigenvalues)} vs {len(b.eigenvalues)}"
            )
        denom = np.maximum(
            np.maximum(np.abs(a.eigenvalues), np.abs(b.eigenvalues)), 1e-12
        )
        rel_gaps = np.abs(a.eigenvalues - b.eigenvalues) / denom

    return DivergenceSummary(
        degree_tv=degree_tv,
        global_c_gap=global_gap,
        by_degree_cc_gap=cc_gap,
        shared_cc_degrees=shared,
        eigen_rel_gaps=rel_gaps,
    )
