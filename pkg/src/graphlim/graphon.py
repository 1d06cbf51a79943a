"""The two limit graphons, graphon sampling, and exact clique densities.

A latent point is a pair (a, b) in [0,1]^2.  For the permutation-family
graphon the pair is read as two independent uniform coordinates and two
points are adjacent iff their coordinates are anti-ordered; for the
circle-family graphon the pair is read as the two endpoints of a chord at
angles 2*pi*a, 2*pi*b and two points are adjacent iff the chords cross.
Both evaluators are {0,1}-valued and symmetric; coincident coordinates
(a null event under Lebesgue sampling) evaluate to 0.

Clique densities are exact rationals (:class:`fractions.Fraction`); floats
appear only at reporting edges.  Step graphons hold a float cell matrix in
[0, 1] so that averages of adjacency matrices can be housed by the same
type as single graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graphs import UGraph, canonical_form

__all__ = [
    "LatentPoint",
    "LimitGraphon",
    "StepGraphon",
    "PERM_GRAPHON",
    "CIRCLE_GRAPHON",
    "eval_graphon",
    "sample_latent",
    "sample_graph",
    "clique_density",
    "step_graphon",
    "density_distance_proxy",
    "write_pgm",
    "write_matrix_csv",
]

_FAMILIES = ("perm", "circle")


@dataclass(frozen=True)
class LatentPoint:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.a <= 1.0 and 0.0 <= self.b <= 1.0):
            raise ValueError("latent coordinates must lie in [0, 1]")


@dataclass(frozen=True)
class LimitGraphon:
    """One of the two limit graphons, identified by its seed family."""

    family: str

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"family must be one of {_FAMILIES}")


PERM_GRAPHON = LimitGraphon("perm")
CIRCLE_GRAPHON = LimitGraphon("circle")


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """Step graphon of a labeled graph: cell (i, j) is the adjacency of
    vertices i, j (or an average of such indicators, in [0, 1])."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.cells, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("cells must be a square matrix")
        if c.size and (np.any(c != c.T) or c.min() < 0.0 or c.max() > 1.0):
            raise ValueError("cells must be symmetric with entries in [0, 1]")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    @property
    def n(self) -> int:
        return self.cells.shape[0]


def _circular_inside(t: float, lo: float, hi: float) -> bool:
    """Whether t lies strictly inside the arc from lo to hi (increasing direction)."""
    if lo < hi:
        return lo < t < hi
    return t > lo or t < hi


def eval_graphon(w: LimitGraphon, p: LatentPoint, q: LatentPoint) -> int:
    """Evaluate the {0,1}-valued graphon at two latent points.

    perm: 1 iff (p.a - q.a)(p.b - q.b) < 0.  circle: 1 iff the chords with
    endpoints at circle positions {p.a, p.b} and {q.a, q.b} cross.  Any
    coincidence among the relevant coordinates gives 0.
    """
    if w.family == "perm":
        return 1 if (p.a - q.a) * (p.b - q.b) < 0 else 0
    if p.a == p.b or q.a == q.b or {p.a, p.b} & {q.a, q.b}:
        return 0
    return 1 if _circular_inside(q.a, p.a, p.b) != _circular_inside(q.b, p.a, p.b) else 0


def sample_latent(k: int, rng: np.random.Generator) -> list[LatentPoint]:
    pts = rng.random((k, 2))
    return [LatentPoint(float(a), float(b)) for a, b in pts]


def sample_graph(w: LimitGraphon, k: int, rng: np.random.Generator) -> UGraph:
    """Graph on k vertices drawn from the graphon with uniform latent points."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pts = sample_latent(k, rng)
    adj = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(i + 1, k):
            if eval_graphon(w, pts[i], pts[j]):
                adj[i, j] = adj[j, i] = True
    return UGraph(adj)


def clique_density(family: str, k: int) -> Fraction:
    """Exact limit density of k-cliques: 1/k! (perm), 2^k k!/(2k)! (circle)."""
    if family not in _FAMILIES:
        raise ValueError(f"family must be one of {_FAMILIES}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if family == "perm":
        return Fraction(1, math.factorial(k))
    return Fraction(2**k * math.factorial(k), math.factorial(2 * k))


def step_graphon(g: UGraph, vertex_order: Sequence[int]) -> StepGraphon:
    """Step graphon of g with rows/columns arranged by the given vertex order.

    vertex_order is a permutation of 1..n; cell (i, j) is the adjacency of
    the i-th and j-th vertices in that order.
    """
    order = list(vertex_order)
    if sorted(order) != list(range(1, g.n + 1)):
        raise ValueError("vertex_order must be a permutation of 1..n")
    idx = np.asarray(order, dtype=np.int64) - 1
    return StepGraphon(g.adj[np.ix_(idx, idx)].astype(np.float64))


def _sample_from_cells(cells: np.ndarray, k: int, rng: np.random.Generator) -> UGraph:
    """Sample_k of a step graphon: uniform latent cells, Bernoulli cell edges."""
    n = cells.shape[0]
    vs = rng.integers(0, n, size=k)
    probs = cells[np.ix_(vs, vs)]
    coin = rng.random((k, k))
    upper = np.triu(coin < probs, 1)
    adj = upper | upper.T
    np.fill_diagonal(adj, False)
    return UGraph(adj)


def density_distance_proxy(
    g: UGraph,
    w: LimitGraphon,
    test_sizes: Sequence[int],
    mc_samples: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Largest gap between sampled subgraph-class frequencies of W_g and w.

    For each size s in test_sizes (s <= 5), draws mc_samples graphs from the
    step graphon of g and from w, tabulates empirical isomorphism-class
    frequencies via canonical forms, and reports the largest absolute
    frequency difference over all classes and sizes, together with a normal
    standard-error estimate for that worst cell.  This is a documented proxy
    observable for graphon distance, not the cut metric.
    """
    if not test_sizes:
        raise ValueError("test_sizes must be nonempty")
    if max(test_sizes) > 5:
        raise ValueError("test sizes are limited to 5")
    if mc_samples < 1:
        raise ValueError("mc_samples must be >= 1")
    cells = g.adj.astype(np.float64)
    worst = 0.0
    worst_se = 0.0
    for s in test_sizes:
        counts_g: dict[str, int] = {}
        counts_w: dict[str, int] = {}
        for _ in range(mc_samples):
            cg = canonical_form(_sample_from_cells(cells, s, rng)).code
            counts_g[cg] = counts_g.get(cg, 0) + 1
            cw = canonical_form(sample_graph(w, s, rng)).code
            counts_w[cw] = counts_w.get(cw, 0) + 1
        for code in set(counts_g) | set(counts_w):
            p1 = counts_g.get(code, 0) / mc_samples
            p2 = counts_w.get(code, 0) / mc_samples
            gap = abs(p1 - p2)
            if gap > worst:
                worst = gap
                worst_se = math.sqrt(
                    (p1 * (1 - p1) + p2 * (1 - p2)) / mc_samples
                )
    return worst, worst_se


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------


def write_pgm(matrix: np.ndarray, path) -> None:
    """8-bit binary PGM (P5) heatmap: value round(255 * (1 - cell)).

    Cells in [0, 1]; 0 maps to white (255), 1 to black (0), means to gray.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    if m.size and (m.min() < 0.0 or m.max() > 1.0):
        raise ValueError("cells must lie in [0, 1]")
    gray = np.round(255.0 * (1.0 - m)).astype(np.uint8)
    header = f"P5\n{m.shape[1]} {m.shape[0]}\n255\n".encode("ascii")
    if hasattr(path, "write"):
        path.write(header + gray.tobytes())
    else:
        with open(path, "wb") as fh:
            fh.write(header + gray.tobytes())


def write_matrix_csv(matrix: np.ndarray, path) -> None:
    m = np.asarray(matrix)
    if np.issubdtype(m.dtype, np.bool_) or np.issubdtype(m.dtype, np.integer):
        np.savetxt(path, m.astype(np.int64), fmt="%d", delimiter=",")
    else:
        np.savetxt(path, m, fmt="%.10g", delimiter=",")
