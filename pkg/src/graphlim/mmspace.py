"""Finite metric measure spaces, discretized excursions, and box-distance
estimation for unit interval graphs.

A finite mm-space is a distance matrix plus a probability vector; points are
indexed 0..n-1 (plain numpy indexing — unlike graph vertices, they carry no
seed labels).  Excursions live on the uniform grid t_i = i/m as m+1
nonnegative values pinned to 0 at both ends; the excursion metric
d_e(x, y) = integral of 1/e over [x, y] diverges at the endpoints, so every
evaluation carries a mandatory truncation level delta and requests touching
[0, delta) or (1-delta, 1] are rejected.

Quadrature is trapezoidal with linear interpolation inside partial cells:
O(1/m) accuracy, exact for constant integrands, and exactly additive in the
integration bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinat import DyckPath, _heights_arrays
from .graphs import UGraph, _distances_from, all_pairs_distances

__all__ = [
    "FiniteMmSpace",
    "ExcursionGrid",
    "from_graph",
    "sample_excursion",
    "excursion_distance",
    "excursion_integral",
    "box_discrepancy",
    "gp_box_estimate_unit",
    "sampled_distance_matrix",
]

_TRIANGLE_TOL = 1e-9
_WEIGHT_TOL = 1e-12
_FULL_TRIANGLE_LIMIT = 200
_SPOT_CHECK_TRIPLES = 2000


@dataclass(frozen=True, eq=False)
class FiniteMmSpace:
    """Metric measure space on n points: distances and a probability vector.

    The triangle inequality is verified on construction up to 1e-9 — in full
    for n <= 200, on random triples (fixed internal seed) above that.
    """

    dist: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.dist, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("dist must be a square matrix")
        n = d.shape[0]
        if w.shape != (n,):
            raise ValueError("weights must have one entry per point")
        if n:
            if np.any(np.diag(d) != 0.0):
                raise ValueError("diagonal distances must be zero")
            if np.any(d < 0.0):
                raise ValueError("distances must be nonnegative")
            if np.any(d != d.T):
                raise ValueError("dist must be symmetric")
            if np.any(w < 0.0) or abs(float(w.sum()) - 1.0) > _WEIGHT_TOL:
                raise ValueError("weights must be a probability vector")
            _check_triangle(d)
        d = d.copy()
        d.setflags(write=False)
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.dist.shape[0]


def _check_triangle(d: np.ndarray) -> None:
    n = d.shape[0]
    if n <= _FULL_TRIANGLE_LIMIT:
        slack = d[:, :, None] + d[None, :, :] - d[:, None, :]
        if float(slack.min()) < -_TRIANGLE_TOL:
            raise ValueError("triangle inequality violated")
        return
    check_rng = np.random.default_rng(0xD15C)
    i, j, k = check_rng.integers(0, n, size=(3, _SPOT_CHECK_TRIPLES))
    if float((d[i, j] + d[j, k] - d[i, k]).min()) < -_TRIANGLE_TOL:
        raise ValueError("triangle inequality violated (spot check)")


@dataclass(frozen=True, eq=False)
class ExcursionGrid:
    """Nonnegative values on the grid t_i = i/m, zero at both ends."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 3:
            raise ValueError("values must be a 1-d array of length m+1, m >= 2")
        if v[0] != 0.0 or v[-1] != 0.0:
            raise ValueError("excursion must start and end at 0")
        if v.min() < 0.0:
            raise ValueError("excursion values must be nonnegative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.size - 1


def from_graph(g: UGraph, scale: float) -> FiniteMmSpace:
    """(V, scale * d_G, uniform) for a connected graph g."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    dist = all_pairs_distances(g)
    if np.isinf(dist).any():
        raise ValueError("graph must be connected")
    n = g.n
    return FiniteMmSpace(dist * scale, np.full(n, 1.0 / n))


def sample_excursion(m: int, rng: np.random.Generator) -> ExcursionGrid:
    """Discrete excursion: Gaussian bridge of m steps, cyclically shifted so
    its minimum sits at the origin (Vervaat construction)."""
    if m < 2:
        raise ValueError("grid size m must be >= 2")
    walk = np.cumsum(rng.normal(0.0, math.sqrt(1.0 / m), size=m))
    bridge = np.concatenate(([0.0], walk)) - np.arange(m + 1) / m * walk[-1]
    j = int(np.argmin(bridge[:m]))
    exc = np.concatenate((bridge[j:m], bridge[: j + 1])) - bridge[j]
    exc[0] = exc[-1] = 0.0
    np.maximum(exc, 0.0, out=exc)
    return ExcursionGrid(exc)


def _interp_integrand(values: np.ndarray, x: float) -> float:
    """Linear interpolation of 1/e at x (may be inf next to the endpoints)."""
    m = values.size - 1
    pos = x * m
    i = min(int(math.floor(pos)), m - 1)
    theta = pos - i
    with np.errstate(divide="ignore"):
        g0 = np.divide(1.0, values[i]) if values[i] else math.inf
        g1 = np.divide(1.0, values[i + 1]) if values[i + 1] else math.inf
    if theta == 0.0:
        return float(g0)
    if theta == 1.0:
        return float(g1)
    return float((1.0 - theta) * g0 + theta * g1)


def excursion_distance(e: ExcursionGrid, x: float, y: float, delta: float) -> float:
    """Truncated excursion metric: integral of 1/e over [x, y].

    Requires 0 < delta <= x <= y <= 1 - delta; the integrand diverges at the
    endpoints of the excursion, so untruncated requests are rejected.
    Trapezoidal quadrature with interpolated partial cells — exactly
    additive: d(x, z) = d(x, y) + d(y, z).
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if not (delta <= x <= y <= 1.0 - delta):
        raise ValueError("need delta <= x <= y <= 1 - delta")
    if x == y:
        return 0.0
    v = e.values
    m = e.m
    with np.errstate(divide="ignore"):
        g = np.where(v > 0.0, 1.0 / np.where(v > 0.0, v, 1.0), math.inf)
    i0 = int(math.ceil(x * m - 1e-12))
    i1 = int(math.floor(y * m + 1e-12))
    if i1 < i0:  # both ends inside one cell
        return 0.5 * (y - x) * (_interp_integrand(v, x) + _interp_integrand(v, y))
    total = 0.0
    lead = i0 / m - x
    if lead > 0.0:
        total += 0.5 * lead * (_interp_integrand(v, x) + float(g[i0]))
    if i1 > i0:
        total += float(np.sum(0.5 * (g[i0 : i1] + g[i0 + 1 : i1 + 1]))) / m
    tail = y - i1 / m
    if tail > 0.0:
        total += 0.5 * tail * (float(g[i1]) + _interp_integrand(v, y))
    return total


def excursion_integral(e: ExcursionGrid, k: int) -> float:
    """Trapezoidal integral of e(t)^k over [0, 1]."""
    if k < 1:
        raise ValueError("power k must be >= 1")
    v = e.values**k
    return float((v.sum() - 0.5 * (v[0] + v[-1])) / e.m)


def box_discrepancy(
    s1: FiniteMmSpace, s2: FiniteMmSpace, relation: Sequence[tuple[int, int]]
) -> float:
    """Largest distance distortion of a relation between two spaces.

    relation is a list of index pairs (i, j); the discrepancy is the
    supremum over pairs of related pairs of |d1(i, i') - d2(j, j')|.
    """
    if len(relation) == 0:
        raise ValueError("relation must be nonempty")
    idx1 = np.fromiter((p[0] for p in relation), dtype=np.int64, count=len(relation))
    idx2 = np.fromiter((p[1] for p in relation), dtype=np.int64, count=len(relation))
    if idx1.min() < 0 or idx1.max() >= s1.n or idx2.min() < 0 or idx2.max() >= s2.n:
        raise ValueError("relation indices out of range")
    d1 = s1.dist[np.ix_(idx1, idx1)]
    d2 = s2.dist[np.ix_(idx2, idx2)]
    return float(np.abs(d1 - d2).max())


def _truncated_grid(delta: float, m: int) -> np.ndarray:
    """Grid points delta, delta + 1/m, ..., up to 1 - delta."""
    count = int(math.floor((1.0 - 2.0 * delta) * m + 1e-9)) + 1
    return delta + np.arange(count) / m


def _grid_metric_from_cumulative(values: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Pairwise excursion distances between grid points via one cumulative pass.

    Requires every grid point to lie at least one cell away from the ends
    (the first and last cells touch the divergent boundary).
    """
    m = values.size - 1
    pos = xs * m
    cell = np.clip(np.floor(pos + 1e-12).astype(np.int64), 0, m - 1)
    if cell.min() < 1 or cell.max() > m - 2:
        raise ValueError("truncation level must keep the grid off the boundary cells")
    interior = values[1:m]
    if interior.min() <= 0.0:
        raise ValueError("excursion vanishes inside the truncated window")
    g = np.zeros(m + 1)
    g[1:m] = 1.0 / interior
    prefix = np.zeros(m)  # prefix[i] = integral from t_1 to t_i, 1 <= i <= m-1
    prefix[2:m] = np.cumsum(0.5 * (g[1 : m - 1] + g[2:m])) / m
    prefix[1] = 0.0
    theta = pos - cell
    g_at = (1.0 - theta) * g[cell] + theta * g[cell + 1]
    cum = prefix[cell] + 0.5 * theta / m * (g[cell] + g_at)
    return np.abs(cum[:, None] - cum[None, :])


def gp_box_estimate_unit(
    w: DyckPath, e_from_w: bool, delta: float, m: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Box-distance upper-bound data for a unit interval graph vs the excursion
    metric, via the coupling on the common truncated grid.

    The relation pairs vertex v_{1+floor(xn)} (graph metric scaled by
    1/sqrt(n)) with grid point x (excursion metric (1/sqrt(2)) d_e) for
    x = delta, delta + 1/m, ..., 1 - delta.  With e_from_w the continuum
    side is the path's own rescaled height profile h_w / sqrt(2n) (the
    coupled regime); otherwise an independent sampled excursion.  Returns
    (discrepancy, mass defect 2*delta); the box distance is bounded by the
    max of the two.
    """
    if not w.is_irreducible():
        raise ValueError("Dyck path must be irreducible")
    if not 0.0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 0.5]")
    n = w.size
    h, f = _heights_arrays(w.steps)
    xs = _truncated_grid(delta, m)
    verts = np.minimum(1 + np.floor(xs * n).astype(np.int64), n)

    k = xs.size
    dist_g = np.zeros((k, k))
    for a in range(k - 1):
        dist_g[a, a + 1 :] = _distances_from(f, int(verts[a]), verts[a + 1 :])
    same = verts[:, None] == verts[None, :]
    dist_g = np.where(same, 0.0, dist_g + dist_g.T) / math.sqrt(n)

    if e_from_w:
        mid = np.minimum(1 + np.floor(np.arange(1, m) / m * n).astype(np.int64), n)
        vals = np.zeros(m + 1)
        vals[1:m] = h[mid - 1] / math.sqrt(2.0 * n)
        exc = ExcursionGrid(vals)
    else:
        exc = sample_excursion(m, rng)
    dist_e = _grid_metric_from_cumulative(exc.values, xs) / math.sqrt(2.0)

    weights = np.full(k, 1.0 / k)
    space_g = FiniteMmSpace(dist_g, weights)
    space_e = FiniteMmSpace(dist_e, weights)
    disc = box_discrepancy(space_g, space_e, [(i, i) for i in range(k)])
    return disc, 2.0 * delta


def sampled_distance_matrix(s: FiniteMmSpace, k: int, rng: np.random.Generator) -> np.ndarray:
    """Distance matrix of k i.i.d. weight-distributed points of s."""
    if k < 2:
        raise ValueError("k must be >= 2")
    idx = rng.choice(s.n, size=k, p=s.weights)
    return s.dist[np.ix_(idx, idx)]
