"""Undirected graphs built from permutations, matchings, and Dyck paths.

Vertices are labelled ``1..n`` in every public interface, matching the seed
conventions of :mod:`graphlim.combinat` (vertex i of an inversion graph is
position i of the permutation; vertex i of a circle graph is the chord with
the i-th smallest left endpoint; vertex i of a unit interval graph is the
i-th up step).  Adjacency matrices are plain boolean numpy arrays whose row
``t`` corresponds to vertex ``t + 1``.

The exhaustive predicates (modular/split primality, canonical forms,
realizer scans) are verification tools: they enumerate subsets or
relabelings outright and carry hard size guards.  They exist to check
structural equivalences at small n, not to scale.

Text formats: an edge list ``"n=5; 1-2 2-3"`` (1-based, edges sorted) and an
adjacency-matrix CSV of 0/1 entries.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from .combinat import (
    DyckPath,
    Matching,
    Permutation,
    _heights_arrays,
    heights,
    iter_matchings,
)

__all__ = [
    "UGraph",
    "CanonicalForm",
    "inversion_graph",
    "circle_graph",
    "chords_cross",
    "unit_interval_graph",
    "bfs_distance",
    "all_pairs_distances",
    "unit_distance_formula",
    "count_cliques",
    "count_cliques_unit",
    "clique_count_inversion",
    "clique_count_circle",
    "is_module",
    "is_modular_prime",
    "is_split",
    "is_split_prime",
    "canonical_form",
    "enumerate_realizers_perm",
    "enumerate_realizers_matching",
    "connected_components",
    "largest_component_size",
    "parse_graph",
    "format_graph",
    "write_adjacency_csv",
    "read_adjacency_csv",
]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UGraph:
    """Simple undirected graph: symmetric boolean adjacency, false diagonal."""

    adj: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.adj, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if a.shape[0] and np.any(a != a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("diagonal must be false (no loops)")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "adj", a)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def edge_count(self) -> int:
        return int(np.count_nonzero(self.adj)) // 2

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1).astype(np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        _check_vertex(self, u)
        _check_vertex(self, v)
        return bool(self.adj[u - 1, v - 1])

    @classmethod
    def complete(cls, n: int) -> "UGraph":
        adj = np.ones((n, n), dtype=bool)
        np.fill_diagonal(adj, False)
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "UGraph":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UGraph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"loop {u}-{v} not allowed")
            adj[u - 1, v - 1] = adj[v - 1, u - 1] = True
        return cls(adj)

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adj, 1))
        return [(int(i) + 1, int(j) + 1) for i, j in zip(iu, ju)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UGraph):
            return NotImplemented
        return self.adj.shape == other.adj.shape and bool(np.all(self.adj == other.adj))

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:  # pragma: no cover - debugging nicety
        return f"UGraph(n={self.n}, edges={self.edge_count()})"


@dataclass(frozen=True)
class CanonicalForm:
    """Lexicographically minimal upper-triangle bit string over relabelings.

    Two graphs on the same vertex count are isomorphic iff their codes are
    equal.  The code has length n(n-1)/2, rows of the upper triangle
    concatenated.
    """

    code: str


def _check_vertex(g: UGraph, v: int) -> None:
    if not (1 <= v <= g.n):
        raise ValueError(f"vertex {v} out of range 1..{g.n}")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def inversion_graph(p: Permutation) -> UGraph:
    """Graph on positions 1..n with an edge at every inversion of p.

    Edge {i, j} for i < j iff sigma(i) > sigma(j).
    """
    s = np.asarray(p.mapping, dtype=np.int64)
    n = s.size
    idx = np.arange(n)
    adj = (idx[:, None] < idx[None, :]) & (s[:, None] > s[None, :])
    return UGraph(adj | adj.T)


def _chord_endpoints(m: Matching) -> tuple[np.ndarray, np.ndarray]:
    """Left and right endpoints of the chords, sorted by left endpoint."""
    pairs = m.pairs()
    left = np.fromiter((a for a, _ in pairs), dtype=np.int64, count=len(pairs))
    right = np.fromiter((b for _, b in pairs), dtype=np.int64, count=len(pairs))
    return left, right


def circle_graph(m: Matching) -> UGraph:
    """Intersection graph of the chords of m; vertex i is the i-th chord.

    Chords are ranked by smaller endpoint; two chords are adjacent iff they
    cross, i.e. exactly one endpoint of one lies between the endpoints of
    the other.
    """
    left, right = _chord_endpoints(m)
    l_in = (left[:, None] < left[None, :]) & (left[None, :] < right[:, None])
    r_in = (left[:, None] < right[None, :]) & (right[None, :] < right[:, None])
    adj = l_in ^ r_in
    return UGraph(adj)


def chords_cross(m: Matching, a: int, b: int) -> bool:
    """Whether chords a and b of m cross (chord indices 1..n by left endpoint)."""
    n = m.size
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"chord index out of range 1..{n}")
    if a == b:
        return False
    pairs = m.pairs()
    la, ra = pairs[a - 1]
    lb, rb = pairs[b - 1]
    return (la < lb < ra) != (la < rb < ra)


def unit_interval_graph(w: DyckPath) -> UGraph:
    """Unit interval graph of a Dyck path: edge {v_i, v_j}, i < j, iff j <= i + f(i).

    Reducible words are accepted and produce disconnected graphs, one
    component per irreducible factor.
    """
    _, f = _heights_arrays(w.steps)
    n = f.size
    idx = np.arange(n)
    gap = idx[None, :] - idx[:, None]
    adj = (gap > 0) & (gap <= f[:, None])
    return UGraph(adj | adj.T)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def bfs_distance(g: UGraph, u: int, v: int) -> float:
    """Shortest-path edge count between u and v; math.inf if disconnected."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return 0
    adj = g.adj
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[u - 1] = 0
    queue = deque([u - 1])
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        for nb in np.flatnonzero(adj[cur]):
            if dist[nb] < 0:
                if nb == v - 1:
                    return int(d)
                dist[nb] = d
                queue.append(nb)
    return math.inf


def all_pairs_distances(g: UGraph) -> np.ndarray:
    """Matrix of BFS distances (float, np.inf for disconnected pairs)."""
    if g.n == 0:
        return np.zeros((0, 0))
    sparse = scipy.sparse.csr_matrix(g.adj)
    return scipy.sparse.csgraph.shortest_path(sparse, method="D", unweighted=True)


def _require_irreducible(w: DyckPath) -> None:
    if not w.is_irreducible():
        raise ValueError("Dyck path must be irreducible (graph connected)")


def unit_distance_formula(w: DyckPath, i: int, j: int) -> int:
    """Graph distance in the unit interval graph of w, by the jump recursion.

    With i_0 = i and i_{m+1} = i_m + f(i_m), the distance from v_i to v_j
    (i < j) is ceil(sum_{k=i}^{j-1} 1 / f(max jump <= k)).  Each full window
    [i_m, i_{m+1}) contributes exactly 1 to the sum and the final partial
    window contributes a value in (0, 1], so the ceiling equals the number
    of jumps needed to reach or pass j.  The jump count is what is computed
    here: summing the fractions in floating point can cross a ceiling
    boundary (five terms of 1/5 already exceed 1.0), so no floats are used.

    Arguments may be given in either order; i == j gives 0.
    """
    _require_irreducible(w)
    n = w.size
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"vertex out of range 1..{n}")
    if i == j:
        return 0
    if i > j:
        i, j = j, i
    _, f = _heights_arrays(w.steps)
    cur = i
    hops = 1
    while cur + f[cur - 1] < j:
        cur += int(f[cur - 1])
        hops += 1
    return hops


def _jump_sequence(f: np.ndarray, i: int) -> np.ndarray:
    """Jump points i_0 = i, i_{m+1} = i_m + f(i_m), up to the last vertex."""
    jumps = [i]
    cur = i
    n = f.size
    while cur < n and f[cur - 1] > 0:
        cur += int(f[cur - 1])
        jumps.append(min(cur, n))
        if cur >= n:
            break
    return np.asarray(jumps, dtype=np.int64)


def _distances_from(f: np.ndarray, i: int, targets: np.ndarray) -> np.ndarray:
    """Distances from v_i to each v_j with j > i, via one jump walk.

    The distance to j is the index of the first jump >= j.
    """
    jumps = _jump_sequence(f, i)
    return np.searchsorted(jumps, targets, side="left")


# ---------------------------------------------------------------------------
# Cliques
# ---------------------------------------------------------------------------


def count_cliques(g: UGraph, k: int) -> int:
    """Number of k-subsets of vertices inducing a complete subgraph.

    Exponential-time oracle (neighborhood-intersection recursion over
    bitmask candidate sets); intended for n <= 30, k <= 6.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    if k == 1:
        return n
    if k > n:
        return 0
    nb = [0] * n
    for u in range(n):
        row = 0
        for v in np.flatnonzero(g.adj[u]):
            row |= 1 << int(v)
        nb[u] = row

    def rec(cand: int, need: int) -> int:
        if need == 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            nxt = cand & nb[v]
            if nxt.bit_count() >= need - 1:
                total += rec(nxt, need - 1)
        return total

    return rec((1 << n) - 1, k)


def count_cliques_unit(w: DyckPath, k: int) -> int:
    """Cliques of size k in the unit interval graph of w: sum_i binom(f(i), k-1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _, f = _heights_arrays(w.steps)
    return sum(math.comb(int(fi), k - 1) for fi in f)


_EXACT_FLOAT = 2**53


def _check_exact_count(n: int, k: int) -> None:
    # counts and all partial sums in the chain DP are bounded by binom(n, k),
    # so they stay exactly representable in float64 under this guard
    if math.comb(n, k) > _EXACT_FLOAT:
        raise ValueError(f"binom({n},{k}) exceeds exact float64 range")


def clique_count_inversion(p: Permutation, k: int) -> int:
    """Cliques of size k in the inversion graph, counted as decreasing chains.

    A k-clique is a k-term decreasing subsequence; pairwise inversion is
    transitive, so chains under the relation i < j, sigma(i) > sigma(j) are
    exactly cliques.  Counted by k-1 integer matrix-vector products (carried
    in float64, exact below 2^53 — guarded).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = p.size
    if k == 1:
        return n
    if k > n:
        return 0
    _check_exact_count(n, k)
    s = np.asarray(p.mapping, dtype=np.int64)
    idx = np.arange(n)
    dom = ((idx[:, None] < idx[None, :]) & (s[:, None] > s[None, :])).astype(np.float64)
    v = np.ones(n)
    for _ in range(k - 1):
        v = dom.T @ v
    return int(round(v.sum()))


def clique_count_circle(m: Matching, k: int) -> int:
    """Cliques of size k in the circle graph, counted as dominance chains.

    Sorting chords by left endpoint, a set of chords is pairwise crossing
    iff both endpoint sequences increase together and the largest left
    endpoint precedes the smallest right endpoint.  Chains in the dominance
    order (l and r both increasing) are counted by matrix powers and the
    boundary condition is applied to the (first, last) pair.  Float64
    arithmetic is exact below 2^53 (guarded).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = m.size
    if k == 1:
        return n
    if k > n:
        return 0
    _check_exact_count(n, k)
    left, right = _chord_endpoints(m)
    dom = (left[:, None] < left[None, :]) & (right[:, None] < right[None, :])
    boundary = left[None, :] < right[:, None]  # l_last < r_first
    if k == 2:
        return int(np.count_nonzero(dom & boundary))
    power = dom.astype(np.float64)
    dom_f = dom.astype(np.float64)
    for _ in range(k - 3):
        power = power @ dom_f
    power = power @ dom_f  # dom^(k-1)
    return int(round((power * boundary).sum()))


# ---------------------------------------------------------------------------
# Modules and splits
# ---------------------------------------------------------------------------

_SUBSET_SCAN_LIMIT = 16


def _neighborhood_masks(g: UGraph) -> list[int]:
    return [int.from_bytes(np.packbits(g.adj[u], bitorder="little").tobytes(), "little") for u in range(g.n)]


def is_module(g: UGraph, subset: Iterable[int]) -> bool:
    """Whether the vertex set is a module: outside vertices cannot tell members apart."""
    members = sorted(set(subset))
    for v in members:
        _check_vertex(g, v)
    if len(members) <= 1 or len(members) == g.n:
        return True
    inside = np.zeros(g.n, dtype=bool)
    inside[[v - 1 for v in members]] = True
    cols = g.adj[np.ix_(inside, ~inside)]
    return bool(np.all(cols == cols[0]))


def is_modular_prime(g: UGraph) -> bool:
    """No module M with 2 <= |M| <= n-1 exists (subset scan, n <= 16)."""
    n = g.n
    if n > _SUBSET_SCAN_LIMIT:
        raise ValueError(f"modular-primality scan is limited to n <= {_SUBSET_SCAN_LIMIT} (got n={n})")
    nb = _neighborhood_masks(g)
    full = (1 << n) - 1
    for mask in range(3, full):
        pc = mask.bit_count()
        if pc < 2 or pc > n - 1:
            continue
        outside = full ^ mask
        ok = True
        mm = outside
        while mm:
            low = mm & -mm
            u = low.bit_length() - 1
            mm ^= low
            t = nb[u] & mask
            if t and t != mask:
                ok = False
                break
        if ok:
            return False
    return True


def _split_sides(g: UGraph, side1: Iterable[int], side2: Iterable[int]) -> tuple[int, int]:
    s1 = sorted(set(side1))
    s2 = sorted(set(side2))
    for v in itertools.chain(s1, s2):
        _check_vertex(g, v)
    if not s1 or not s2:
        raise ValueError("both sides of a cut must be nonempty")
    if set(s1) & set(s2) or len(s1) + len(s2) != g.n:
        raise ValueError("sides must partition the vertex set")
    m1 = sum(1 << (v - 1) for v in s1)
    m2 = sum(1 << (v - 1) for v in s2)
    return m1, m2


def _is_split_masks(nb: Sequence[int], side1: int, side2: int) -> bool:
    crossings = []
    mm = side1
    while mm:
        low = mm & -mm
        a = low.bit_length() - 1
        mm ^= low
        c = nb[a] & side2
        if c:
            crossings.append(c)
    if not crossings:
        return True  # empty cut-set is complete bipartite
    union = 0
    for c in crossings:
        union |= c
    return all(c == union for c in crossings)


def is_split(g: UGraph, side1: Iterable[int], side2: Iterable[int]) -> bool:
    """Whether (side1, side2) is a split: the cut-set is complete bipartite.

    Both sides must be nonempty and partition the vertices.  A cut with no
    crossing edges qualifies (the empty complete bipartite graph).
    """
    m1, m2 = _split_sides(g, side1, side2)
    return _is_split_masks(_neighborhood_masks(g), m1, m2)


def is_split_prime(g: UGraph) -> bool:
    """No split with both sides of size >= 2 exists (cut scan, n <= 16)."""
    n = g.n
    if n > _SUBSET_SCAN_LIMIT:
        raise ValueError(f"split-primality scan is limited to n <= {_SUBSET_SCAN_LIMIT} (got n={n})")
    if n < 4:
        return True
    nb = _neighborhood_masks(g)
    full = (1 << n) - 1
    # vertex 1 stays on side1 so each cut is visited once
    for rest in range(1 << (n - 1)):
        side1 = (rest << 1) | 1
        pc = side1.bit_count()
        if pc < 2 or pc > n - 2:
            continue
        if _is_split_masks(nb, side1, full ^ side1):
            return False
    return True


# ---------------------------------------------------------------------------
# Canonical forms and realizer enumeration
# ---------------------------------------------------------------------------

_CANONICAL_LIMIT = 8


def canonical_form(g: UGraph) -> CanonicalForm:
    """Lexicographically minimal upper-triangle code over all relabelings.

    Factorial-time scan, n <= 8.  Only vertices of minimum degree can open
    the minimal code (the first row of the code is smallest when it has the
    fewest ones, pushed right), so the scan is restricted to those first
    vertices; this prune is exact.
    """
    n = g.n
    if n > _CANONICAL_LIMIT:
        raise ValueError(f"canonical_form is limited to n <= {_CANONICAL_LIMIT} (got n={n})")
    if n <= 1:
        return CanonicalForm("")
    deg = g.degrees()
    starts = np.flatnonzero(deg == deg.min())
    perms = []
    others = list(range(n))
    for v0 in starts:
        rest = [u for u in others if u != v0]
        for tail in itertools.permutations(rest):
            perms.append((v0, *tail))
    order = np.asarray(perms, dtype=np.int64)
    iu, ju = np.triu_indices(n, 1)
    bits = g.adj[order[:, iu], order[:, ju]]
    length = iu.size
    weights = (1 << np.arange(length - 1, -1, -1, dtype=np.uint64)).astype(np.uint64)
    codes = bits.astype(np.uint64) @ weights
    best = int(codes.min())
    return CanonicalForm(format(best, f"0{length}b"))


_REALIZER_PERM_LIMIT = 7
_REALIZER_MATCHING_LIMIT = 6


def enumerate_realizers_perm(g: UGraph) -> list[Permutation]:
    """All permutations whose inversion graph is isomorphic to g (scan of S_n, n <= 7)."""
    n = g.n
    if n > _REALIZER_PERM_LIMIT:
        raise ValueError(f"permutation realizer scan is limited to n <= {_REALIZER_PERM_LIMIT} (got n={n})")
    target = canonical_form(g).code
    out = []
    for mapping in itertools.permutations(range(1, n + 1)):
        p = Permutation(mapping)
        if canonical_form(inversion_graph(p)).code == target:
            out.append(p)
    return out


def enumerate_realizers_matching(g: UGraph) -> list[Matching]:
    """All matchings whose circle graph is isomorphic to g (scan of M_n, n <= 6)."""
    n = g.n
    if n > _REALIZER_MATCHING_LIMIT:
        raise ValueError(f"matching realizer scan is limited to n <= {_REALIZER_MATCHING_LIMIT} (got n={n})")
    target = canonical_form(g).code
    out = []
    for m in iter_matchings(n):
        if canonical_form(circle_graph(m)).code == target:
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# Components
# ---------------------------------------------------------------------------


def connected_components(g: UGraph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum vertex."""
    if g.n == 0:
        return []
    n_comp, labels = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(g.adj), directed=False
    )
    comps: list[list[int]] = [[] for _ in range(n_comp)]
    for v, lab in enumerate(labels):
        comps[lab].append(v + 1)
    comps.sort(key=lambda c: c[0])
    return comps


def largest_component_size(g: UGraph) -> int:
    if g.n == 0:
        return 0
    return max(len(c) for c in connected_components(g))


# ---------------------------------------------------------------------------
# Text and CSV formats
# ---------------------------------------------------------------------------


def format_graph(g: UGraph) -> str:
    """One-line edge list, e.g. ``"n=4; 1-2 2-3"``; isolated vertices implied by n."""
    edges = " ".join(f"{u}-{v}" for u, v in g.edges())
    return f"n={g.n};" + (f" {edges}" if edges else "")


def parse_graph(text: str) -> UGraph:
    head, _, tail = text.strip().partition(";")
    head = head.strip()
    if not head.startswith("n="):
        raise ValueError(f"expected 'n=<count>;' prefix, got {head!r}")
    try:
        n = int(head[2:])
    except ValueError as exc:
        raise ValueError(f"bad vertex count in {head!r}") from exc
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    edges = []
    for token in tail.split():
        a, _, b = token.partition("-")
        try:
            edges.append((int(a), int(b)))
        except ValueError as exc:
            raise ValueError(f"bad edge token {token!r}") from exc
    return UGraph.from_edges(n, edges)


def write_adjacency_csv(g: UGraph, path) -> None:
    np.savetxt(path, g.adj.astype(np.int8), fmt="%d", delimiter=",")


def read_adjacency_csv(path) -> UGraph:
    mat = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
    return UGraph(mat.astype(bool))
