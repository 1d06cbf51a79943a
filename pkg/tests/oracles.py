"""Independent brute-force oracles used to freeze expected test values.

Everything here is written directly from definitions, deliberately not
sharing algorithms or helper code with the package: subset scans, string
filters and itertools enumeration only.  Oracles are slow and meant for
tiny sizes.
"""

from __future__ import annotations

import itertools
from collections import deque


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------


def brute_is_simple(mapping: tuple[int, ...]) -> bool:
    """No interval of length 2..n-1 maps onto an interval."""
    n = len(mapping)
    if n <= 2:
        return True
    for start in range(n):
        for length in range(2, n):
            if start + length > n:
                break
            image = sorted(mapping[start : start + length])
            if image[-1] - image[0] == length - 1:
                return False
    return True


def inversion_edges(mapping: tuple[int, ...]) -> set[frozenset[int]]:
    n = len(mapping)
    return {
        frozenset((i + 1, j + 1))
        for i in range(n)
        for j in range(i + 1, n)
        if mapping[i] > mapping[j]
    }


# ---------------------------------------------------------------------------
# matchings (as partner tuples, 1-based points)
# ---------------------------------------------------------------------------


def all_matchings(n: int) -> list[tuple[int, ...]]:
    """All fixed-point-free involutions of [2n], by pairing the largest
    unused point each time (different construction from the package)."""
    out: list[tuple[int, ...]] = []

    def rec(free: list[int], partner: dict[int, int]) -> None:
        if not free:
            out.append(tuple(partner[i] for i in range(1, 2 * n + 1)))
            return
        a = free[-1]
        for idx in range(len(free) - 1):
            b = free[idx]
            partner[a], partner[b] = b, a
            rec([p for p in free if p not in (a, b)], partner)
            del partner[a], partner[b]

    rec(list(range(1, 2 * n + 1)), {})
    return out


def chords(partner: tuple[int, ...]) -> list[tuple[int, int]]:
    """Chords as (left, right) sorted by left endpoint."""
    seen = set()
    cs = []
    for i, p in enumerate(partner, start=1):
        a, b = min(i, p), max(i, p)
        if (a, b) not in seen:
            seen.add((a, b))
            cs.append((a, b))
    return sorted(cs)


def brute_cross(c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    a, b = c1
    c, d = c2
    return a < c < b < d or c < a < d < b


def circle_edges(partner: tuple[int, ...]) -> set[frozenset[int]]:
    cs = chords(partner)
    return {
        frozenset((i + 1, j + 1))
        for i in range(len(cs))
        for j in range(i + 1, len(cs))
        if brute_cross(cs[i], cs[j])
    }


# ---------------------------------------------------------------------------
# Dyck paths (strings of U/D)
# ---------------------------------------------------------------------------


def all_dyck_words(n: int) -> list[str]:
    words = []
    for bits in itertools.product("UD", repeat=2 * n):
        h = 0
        ok = True
        for c in bits:
            h += 1 if c == "U" else -1
            if h < 0:
                ok = False
                break
        if ok and h == 0:
            words.append("".join(bits))
    return words


def brute_irreducible(word: str) -> bool:
    h = 0
    for c in word[:-1]:
        h += 1 if c == "U" else -1
        if h == 0:
            return False
    return True


def unit_interval_edges(word: str) -> set[frozenset[int]]:
    """Edges straight from the definition: i ~ j (i < j) iff fewer than
    f(i) := #ups strictly between up_i and down_i separate them."""
    ups, downs = [], []
    for pos, c in enumerate(word):
        (ups if c == "U" else downs).append(pos)
    n = len(ups)
    edges = set()
    for i in range(n):
        f_i = sum(1 for u in ups if ups[i] < u < downs[i])
        for j in range(i + 1, min(i + f_i, n - 1) + 1):
            edges.add(frozenset((i + 1, j + 1)))
    return edges


# ---------------------------------------------------------------------------
# graphs from edge sets over vertices 1..n
# ---------------------------------------------------------------------------


def brute_bfs_all(n: int, edges: set[frozenset[int]]) -> list[list[float]]:
    adj = {v: set() for v in range(1, n + 1)}
    for e in edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    dist = []
    for s in range(1, n + 1):
        d = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in d:
                    d[u] = d[v] + 1
                    queue.append(u)
        dist.append([d.get(v, float("inf")) for v in range(1, n + 1)])
    return dist


def brute_clique_count(n: int, edges: set[frozenset[int]], k: int) -> int:
    if k == 1:
        return n
    count = 0
    for sub in itertools.combinations(range(1, n + 1), k):
        if all(frozenset(p) in edges for p in itertools.combinations(sub, 2)):
            count += 1
    return count


def brute_is_module(n: int, edges: set[frozenset[int]], block: set[int]) -> bool:
    outside = [v for v in range(1, n + 1) if v not in block]
    for v in outside:
        links = {frozenset((v, u)) in edges for u in block}
        if len(links) > 1:
            return False
    return True


def brute_modular_prime(n: int, edges: set[frozenset[int]]) -> bool:
    for size in range(2, n):
        for block in itertools.combinations(range(1, n + 1), size):
            if brute_is_module(n, edges, set(block)):
                return False
    return True


def brute_is_split(n: int, edges: set[frozenset[int]], side: set[int]) -> bool:
    other = set(range(1, n + 1)) - side
    cut1 = {a for a in side if any(frozenset((a, b)) in edges for b in other)}
    cut2 = {b for b in other if any(frozenset((a, b)) in edges for a in side)}
    return all(frozenset((a, b)) in edges for a in cut1 for b in cut2)


def brute_split_prime(n: int, edges: set[frozenset[int]]) -> bool:
    if n < 4:
        return True
    verts = list(range(1, n + 1))
    for size in range(2, n - 1):
        for rest in itertools.combinations(verts[1:], size - 1):
            side = {verts[0], *rest}
            if brute_is_split(n, edges, side):
                return False
    return True


def brute_canonical_code(n: int, edges: set[frozenset[int]]) -> str:
    """Lexicographically least upper-triangle adjacency string over all
    vertex orderings, by full enumeration."""
    best = None
    for order in itertools.permutations(range(1, n + 1)):
        bits = "".join(
            "1" if frozenset((order[i], order[j])) in edges else "0"
            for i in range(n)
            for j in range(i + 1, n)
        )
        if best is None or bits < best:
            best = bits
    return best if best is not None else ""


def connected_component_count(n: int, edges: set[frozenset[int]]) -> int:
    dist = brute_bfs_all(n, edges)
    reps = set()
    for v in range(n):
        reps.add(min(u for u in range(n) if dist[v][u] != float("inf")))
    return len(reps)
