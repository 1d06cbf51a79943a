"""Seed objects for the three graph families: permutations, chord-diagram
matchings, and Dyck paths.

Conventions
-----------
* All labels are 1-based, matching the combinatorics literature.  A
  permutation is given by its one-line notation ``mapping[i-1] = sigma(i)``.
  A matching of size n is a fixed-point-free involution on ``{1, ..., 2n}``,
  pictured as n chords of a circle whose points are labelled clockwise.
  A Dyck path of size n is a word of n ``U`` and n ``D`` steps in which every
  prefix has at least as many ``U`` as ``D``.
* Text formats: ``"7 1 4 6 5 2 3"`` (permutation), ``"1-3 2-4"`` (matching,
  chords sorted by smaller endpoint), ``"UUDUDD"`` (Dyck path).  Parsers
  reject malformed input with a 1-based position diagnostic.
* Samplers take an explicit :class:`numpy.random.Generator`.  Parallel
  callers must use independently derived child streams (seed derivation:
  ``SeedSequence(master).spawn(...)`` or master seed + task index).
* Counting functions return exact Python integers; no floats anywhere in the
  counting layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Permutation",
    "Matching",
    "DyckPath",
    "Decomposition",
    "parse_permutation",
    "parse_matching",
    "parse_dyck",
    "format_permutation",
    "format_matching",
    "format_dyck",
    "sample_permutation",
    "sample_matching",
    "sample_dyck",
    "sample_irreducible_dyck",
    "is_simple",
    "k_decomposition",
    "is_indecomposable",
    "validate_decomposition",
    "xyz_stats",
    "phi",
    "phi_inverse",
    "count_matchings",
    "count_decomposed",
    "count_irreducible_dyck",
    "count_palindromic_irreducible",
    "count_symmetric_matchings",
    "mirror",
    "is_palindromic",
    "shift",
    "reversal",
    "heights",
    "has_nontrivial_symmetry",
    "iter_matchings",
    "iter_dyck_paths",
    "iter_irreducible_dyck",
]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n} in one-line notation: ``mapping[i-1] = sigma(i)``."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.mapping)
        if n == 0:
            raise ValueError("permutation must have size >= 1")
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of {{1..{n}}}: {self.mapping}")

    @property
    def size(self) -> int:
        return len(self.mapping)

    def of(self, i: int) -> int:
        """sigma(i), 1-based."""
        return self.mapping[i - 1]


@dataclass(frozen=True)
class Matching:
    """A fixed-point-free involution on {1..2n}: ``partner[i-1] = m(i)``.

    Point i sits at angle 2*pi*i/(2n) on the circle; chord {i, m(i)}.
    """

    partner: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.partner
        if len(p) == 0 or len(p) % 2:
            raise ValueError("matching needs an even, positive number of points")
        for i, j in enumerate(p, start=1):
            if not 1 <= j <= len(p):
                raise ValueError(f"point {i}: partner {j} out of range 1..{len(p)}")
            if j == i:
                raise ValueError(f"point {i} is a fixed point")
            if p[j - 1] != i:
                raise ValueError(f"not an involution at point {i}")

    @property
    def size(self) -> int:
        return len(self.partner) // 2

    def of(self, i: int) -> int:
        """m(i), 1-based."""
        return self.partner[i - 1]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Chords as (smaller, larger) pairs, sorted by smaller endpoint."""
        return tuple(
            (i, j) for i, j in enumerate(self.partner, start=1) if i < j
        )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        pairs = list(pairs)
        partner = [0] * (2 * len(pairs))
        for a, b in pairs:
            partner[a - 1] = b
            partner[b - 1] = a
        return cls(tuple(partner))


@dataclass(frozen=True)
class DyckPath:
    """A Dyck word over {U, D}: balanced, with every prefix U-dominant."""

    steps: str

    def __post_init__(self) -> None:
        height = 0
        for pos, c in enumerate(self.steps, start=1):
            if c == "U":
                height += 1
            elif c == "D":
                height -= 1
            else:
                raise ValueError(f"position {pos}: expected 'U' or 'D', got {c!r}")
            if height < 0:
                raise ValueError(f"position {pos}: prefix has more D than U")
        if height != 0:
            raise ValueError("unbalanced word: number of U and D steps differ")
        if not self.steps:
            raise ValueError("Dyck path must have size >= 1")

    @property
    def size(self) -> int:
        return len(self.steps) // 2

    def is_irreducible(self) -> bool:
        """True iff every proper prefix has strictly more U than D."""
        height = 0
        for c in self.steps[:-1]:
            height += 1 if c == "U" else -1
            if height == 0:
                return False
        return True


@dataclass(frozen=True)
class Decomposition:
    """Four circular intervals (c1, c2, c3, c4) of {1..2n} witnessing that a
    matching is k-decomposable: the parts appear in this circular order,
    1 in c1, every chord inside c1+c3 or inside c2+c4, and c2+c4 carries
    exactly k chords with 2 <= k <= n-2.

    c1 is stored in circular run order (it may wrap past 2n); c2, c3, c4 are
    plain increasing runs (the complement of c1 never wraps).  Empty slots
    among c2/c3/c4 are allowed and meaningful: (s, (), ()) and ((), (), s)
    are different decompositions of the same chord set.
    """

    c1: tuple[int, ...]
    c2: tuple[int, ...]
    c3: tuple[int, ...]
    c4: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        points = (*self.c1, *self.c2, *self.c3, *self.c4)
        two_n = len(points)
        if sorted(points) != list(range(1, two_n + 1)):
            raise ValueError("parts do not partition {1..2n}")
        if 1 not in self.c1:
            raise ValueError("1 must lie in c1")
        n = two_n // 2
        if not 2 <= self.k <= n - 2:
            raise ValueError(f"k={self.k} outside [2, {n - 2}]")
        for name, part in (("c1", self.c1), ("c2", self.c2), ("c3", self.c3), ("c4", self.c4)):
            if part and not _is_circular_run(part, two_n):
                raise ValueError(f"{name} is not a circular interval: {part}")

    @property
    def size(self) -> int:
        return (len(self.c1) + len(self.c2) + len(self.c3) + len(self.c4)) // 2


def _is_circular_run(part: Sequence[int], two_n: int) -> bool:
    return all(part[t + 1] == part[t] % two_n + 1 for t in range(len(part) - 1))


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------


def parse_permutation(text: str) -> Permutation:
    values = []
    for pos, tok in enumerate(text.split(), start=1):
        try:
            values.append(int(tok))
        except ValueError:
            raise ValueError(f"token {pos}: expected an integer, got {tok!r}") from None
    return Permutation(tuple(values))


def format_permutation(p: Permutation) -> str:
    return " ".join(str(v) for v in p.mapping)


def parse_matching(text: str) -> Matching:
    pairs = []
    for pos, tok in enumerate(text.split(), start=1):
        a, sep, b = tok.partition("-")
        if not sep or not a or not b:
            raise ValueError(f"pair {pos}: expected 'a-b', got {tok!r}")
        try:
            pairs.append((int(a), int(b)))
        except ValueError:
            raise ValueError(f"pair {pos}: non-integer endpoint in {tok!r}") from None
    return Matching.from_pairs(pairs)


def format_matching(m: Matching) -> str:
    return " ".join(f"{a}-{b}" for a, b in m.pairs())


def parse_dyck(text: str) -> DyckPath:
    return DyckPath(text.strip())


def format_dyck(w: DyckPath) -> str:
    return w.steps


# ---------------------------------------------------------------------------
# Uniform samplers
# ---------------------------------------------------------------------------


def sample_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform permutation of {1..n} (Fisher-Yates via the generator)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(tuple(int(v) + 1 for v in rng.permutation(n)))


def sample_matching(n: int, rng: np.random.Generator) -> Matching:
    """Uniform matching of size n by sequential pairing.

    Repeatedly match the smallest free point with a uniform choice among the
    remaining free points; every matching arises with probability
    1/(2n-1)!! since the chord of the current smallest point is uniform
    among 2r-1 options when 2r points remain.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    free = list(range(1, 2 * n + 1))
    partner = [0] * (2 * n)
    while free:
        r = int(rng.integers(1, len(free)))  # len(free) is even, >= 2
        i = free[0]
        j = free.pop(r)
        free.pop(0)
        partner[i - 1] = j
        partner[j - 1] = i
    return Matching(tuple(partner))


def sample_dyck(n: int, rng: np.random.Generator) -> DyckPath:
    """Uniform Dyck path of size n via the cycle lemma.

    Shuffle a word with n up steps and n+1 down steps (total sum -1) and
    rotate it to begin just after the first position attaining the minimal
    prefix sum; dropping the final down step leaves a Dyck word.  Every
    Dyck word corresponds to exactly 2n+1 of the shuffled words (a word of
    sum -1 has no cyclic symmetry), so the output is exactly uniform over
    the Catalan(n) paths.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    word = np.concatenate([np.ones(n, dtype=np.int8), -np.ones(n + 1, dtype=np.int8)])
    word = rng.permutation(word)
    cut = int(np.argmin(np.cumsum(word))) + 1  # first prefix-sum minimum
    rotated = np.concatenate([word[cut:], word[:cut]])[:-1]
    return DyckPath("".join("U" if s > 0 else "D" for s in rotated))


def sample_irreducible_dyck(n: int, rng: np.random.Generator) -> DyckPath:
    """Uniform irreducible Dyck path: U + (uniform path of size n-1) + D."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return DyckPath("UD")
    inner = sample_dyck(n - 1, rng)
    return DyckPath("U" + inner.steps + "D")


# ---------------------------------------------------------------------------
# Permutation structure
# ---------------------------------------------------------------------------


def is_simple(p: Permutation) -> bool:
    """True iff p has no interval I with 2 <= |I| <= n-1 and contiguous image.

    >>> is_simple(parse_permutation("2 4 1 3"))
    True
    >>> is_simple(parse_permutation("7 1 4 6 5 2 3"))
    False
    """
    m = p.mapping
    n = len(m)
    for i in range(n - 1):
        lo = hi = m[i]
        for j in range(i + 1, n):
            v = m[j]
            if v < lo:
                lo = v
            elif v > hi:
                hi = v
            if hi - lo == j - i and j - i + 1 < n:
                return False
    return True


# ---------------------------------------------------------------------------
# Matching transforms and statistics
# ---------------------------------------------------------------------------


def shift(m: Matching) -> Matching:
    """Rotate the circular picture: chord (i, j) becomes (i+1, j+1) mod 2n."""
    two_n = 2 * m.size
    partner = [0] * two_n
    for i, j in enumerate(m.partner, start=1):
        partner[i % two_n] = j % two_n + 1
    return Matching(tuple(partner))


def reversal(m: Matching) -> Matching:
    """Reflect the circular picture: chord (i, j) becomes (2n+1-i, 2n+1-j)."""
    two_n = 2 * m.size
    partner = [0] * two_n
    for i, j in enumerate(m.partner, start=1):
        partner[two_n - i] = two_n + 1 - j
    return Matching(tuple(partner))


def xyz_stats(m: Matching) -> tuple[int, int, int]:
    """The adjacency statistics (x, y, z) of a matching.

    x counts points with m(i) = i+1 (mod 2n), y those with m(j) = j+2, and
    z counts index pairs k < l <= 2n with l-k != +-1 (mod 2n) such that
    {m(k), m(k+1)} = {l, l+1} (mod 2n): two consecutive points matched onto
    two consecutive points.
    """
    p = m.partner
    two_n = len(p)
    x = sum(1 for i in range(1, two_n + 1) if (p[i - 1] - i - 1) % two_n == 0)
    y = sum(1 for j in range(1, two_n + 1) if (p[j - 1] - j - 2) % two_n == 0)
    z = 0
    for k in range(1, two_n):
        a = p[k - 1]
        b = p[k % two_n]  # m(k+1), wrapping not needed since k < 2n
        if (b - a - 1) % two_n == 0:
            ell = a
        elif (a - b - 1) % two_n == 0:
            ell = b
        else:
            continue
        if k < ell <= two_n and (ell - k) % two_n not in (1, two_n - 1):
            z += 1
    return x, y, z


def mirror(w: DyckPath) -> DyckPath:
    """Read the word right to left and swap U <-> D."""
    swapped = "".join("D" if c == "U" else "U" for c in reversed(w.steps))
    return DyckPath(swapped)


def is_palindromic(w: DyckPath) -> bool:
    return w == mirror(w)


def _heights_arrays(steps: str) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (h, f) for a balanced word; see :func:`heights`."""
    ups = np.frombuffer(steps.encode("ascii"), dtype=np.uint8) == ord("U")
    walk = np.cumsum(np.where(ups, 1, -1))
    h = walk[ups]
    # number of up steps at or before the i-th down step, minus i
    cum_ups = np.cumsum(ups)
    f = cum_ups[~ups] - np.arange(1, h.size + 1)
    return h.astype(np.int64), f.astype(np.int64)


def heights(w: DyckPath) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The height and forward-degree sequences (h, f) of a Dyck path.

    h[i-1] is the arrival height of the i-th up step; f[i-1] is the number
    of up steps strictly between the i-th up step and the i-th down step.

    >>> heights(parse_dyck("UUDUDD"))
    ((1, 2, 2), (1, 1, 0))
    """
    h, f = _heights_arrays(w.steps)
    return tuple(int(v) for v in h), tuple(int(v) for v in f)


def has_nontrivial_symmetry(m: Matching) -> bool:
    """True iff some nontrivial symmetry of the 2n-gon fixes the matching.

    Tests every nontrivial rotation (i -> i+r) and every reflection
    (i -> c-i) of the circle of 2n points.
    """
    p = m.partner
    two_n = len(p)
    for r in range(1, two_n):
        if all(p[(i + r) % two_n] == (p[i] + r - 1) % two_n + 1 for i in range(two_n)):
            return True
    for c in range(two_n):
        # reflection i -> (c - i) mod 2n, with labels shifted to 1..2n
        if all(p[(c - i - 1) % two_n] == (c - p[i] - 1) % two_n + 1 for i in range(two_n)):
            return True
    return False


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def count_matchings(n: int) -> int:
    """m_n = (2n-1)!!, the number of matchings of size n.

    >>> count_matchings(3)
    15
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1
    for t in range(1, 2 * n, 2):
        out *= t
    return out


def count_decomposed(n: int, k: int) -> int:
    """d_n^k = (n-k) * m_{k+1} * m_{n-k+1}: matchings *with* a chosen
    k-decomposition (the same chord set may be counted several times)."""
    if not 2 <= k <= n - 2:
        raise ValueError(f"k={k} outside [2, n-2] for n={n}")
    return (n - k) * count_matchings(k + 1) * count_matchings(n - k + 1)


def _catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def count_irreducible_dyck(n: int) -> int:
    """Number of irreducible Dyck paths of size n: Catalan(n-1).

    >>> count_irreducible_dyck(3)
    2
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _catalan(n - 1)


def count_palindromic_irreducible(n: int) -> int:
    """Number of palindromic irreducible Dyck paths of size n.

    Equals the central-ish binomial binom(n-1, floor((n-1)/2)), the number of
    balanced-or-nearly-balanced prefixes of length n-1.

    >>> count_palindromic_irreducible(4)
    3
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.comb(n - 1, (n - 1) // 2)


def count_symmetric_matchings(n: int, d: int) -> int:
    """Matchings of size n fixed by a rotation of order d (d >= 2, d | 2n).

    Exact evaluation of k! [z^k] exp(z*[d even] + d z^2/2) with k = 2n/d via
    the recurrence a_k = [d even] a_{k-1} + d (k-1) a_{k-2}.

    >>> count_symmetric_matchings(2, 2)
    3
    """
    if d < 2:
        raise ValueError("rotation order d must be >= 2")
    if (2 * n) % d:
        raise ValueError(f"d={d} does not divide 2n={2 * n}")
    k = 2 * n // d
    even = 1 if d % 2 == 0 else 0
    prev2, prev1 = 1, even  # a_0, a_1
    if k == 0:
        return 1
    for t in range(2, k + 1):
        prev2, prev1 = prev1, even * prev1 + d * (t - 1) * prev2
    return prev1 if k >= 1 else prev2


# ---------------------------------------------------------------------------
# Exhaustive enumeration (verification at small sizes)
# ---------------------------------------------------------------------------


def iter_matchings(n: int) -> Iterator[Matching]:
    """All (2n-1)!! matchings of size n, smallest free point paired first.

    >>> sum(1 for _ in iter_matchings(3))
    15
    """

    def rec(points: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
        if not points:
            yield []
            return
        first = points[0]
        for t in range(1, len(points)):
            rest = points[1:t] + points[t + 1 :]
            for tail in rec(rest):
                yield [(first, points[t])] + tail

    for pairs in rec(tuple(range(1, 2 * n + 1))):
        yield Matching.from_pairs(pairs)


def iter_dyck_paths(n: int) -> Iterator[DyckPath]:
    """All Catalan(n) Dyck paths of semilength n, lexicographic (D < U).

    >>> [w.steps for w in iter_dyck_paths(2)]
    ['UDUD', 'UUDD']
    """

    def rec(ups_left: int, downs_left: int) -> Iterator[str]:
        if ups_left == 0:
            yield "D" * downs_left
            return
        if downs_left > ups_left:
            for tail in rec(ups_left, downs_left - 1):
                yield "D" + tail
        for tail in rec(ups_left - 1, downs_left):
            yield "U" + tail

    for word in rec(n, n):
        yield DyckPath(word)


def iter_irreducible_dyck(n: int) -> Iterator[DyckPath]:
    """All Catalan(n-1) irreducible Dyck paths of semilength n."""
    if n == 1:
        yield DyckPath("UD")
        return
    for inner in iter_dyck_paths(n - 1):
        yield DyckPath("U" + inner.steps + "D")


# ---------------------------------------------------------------------------
# Decomposability
#
# A decomposition is a choice of four cut gaps on the circle (gap g lies
# between points g and g+1; gap 0 before point 1).  The four arcs between
# consecutive cuts alternate between the two sides c1+c3 / c2+c4, and every
# chord must stay on one side.  Writing v(g) for the GF(2) vector indexed by
# chords with v(g)_c = [chord c separates gap g from gap 0], a cut multiset
# {g1, g2, g3, g4} is side-consistent iff v(g1)^v(g2)^v(g3)^v(g4) = 0, and
# the side not containing point 1 must carry k chords with 2 <= k <= n-2.
# Coincident cuts encode empty arcs, so the search reduces to:
#   * pairs a < b with v(a) = v(b), or
#   * four distinct gaps whose vectors XOR to zero,
# with the arithmetic side-size condition.  The vectors are summarised by
# 64-bit random projections (fixed internal seed, so results are
# deterministic); every candidate collision is verified exactly before use.
# ---------------------------------------------------------------------------

_PROJECTION_SEED = 0x5EED_CAFE_F00D


def _chord_ids(partner: Sequence[int]) -> np.ndarray:
    """0-based chord index for each 0-based point, chords ranked by left endpoint."""
    two_n = len(partner)
    cid = np.empty(two_n, dtype=np.int64)
    nxt = 0
    for i in range(two_n):
        j = partner[i] - 1
        if i < j:
            cid[i] = cid[j] = nxt
            nxt += 1
    return cid


def _gap_hashes(partner: Sequence[int]) -> np.ndarray:
    """64-bit projections h(g) of the gap vectors v(g), g = 0..2n-1."""
    two_n = len(partner)
    n = two_n // 2
    cid = _chord_ids(partner)
    proj = np.random.Generator(np.random.PCG64(_PROJECTION_SEED)).integers(
        0, 2**64, size=n, dtype=np.uint64
    )
    h = np.zeros(two_n, dtype=np.uint64)
    # crossing point g flips the bit of that point's chord
    np.bitwise_xor.accumulate(proj[cid[: two_n - 1]], out=h[1:])
    return h


def _exact_side_ok(partner: Sequence[int], in_side: np.ndarray) -> bool:
    """Every chord entirely inside or outside the boolean point mask?"""
    idx = np.asarray(partner, dtype=np.int64) - 1
    return bool(np.all(in_side[idx] == in_side))


def _side_mask(two_n: int, cuts: tuple[int, ...]) -> np.ndarray:
    """Point mask of the arc union (g1..g2] + (g3..g4] for sorted cuts."""
    g1, g2, g3, g4 = cuts
    mask = np.zeros(two_n, dtype=bool)
    mask[g1:g2] = True  # points g1+1 .. g2 are 0-based g1 .. g2-1
    mask[g3:g4] = True
    return mask


def _iter_cut_candidates(partner: Sequence[int]):
    """Yield exact side-consistent cut tuples (g1<=g2<=g3<=g4), pairs first.

    Only candidates surviving the exact XOR verification are yielded; the
    64-bit projections merely narrow the search.
    """
    two_n = len(partner)
    h = _gap_hashes(partner)

    order = np.argsort(h, kind="stable")
    hs = h[order]
    run_starts = np.flatnonzero(np.concatenate([[True], hs[1:] != hs[:-1]]))
    run_ends = np.concatenate([run_starts[1:], [two_n]])
    for s, e in zip(run_starts, run_ends):
        if e - s < 2:
            continue
        gaps = np.sort(order[s:e])
        for ai in range(len(gaps)):
            for bi in range(ai + 1, len(gaps)):
                a, b = int(gaps[ai]), int(gaps[bi])
                cuts = (a, a, a, b)
                if _exact_side_ok(partner, _side_mask(two_n, cuts)):
                    yield cuts

    # four distinct gaps: equal pairwise XORs among all gap pairs
    iu0, iu1 = np.triu_indices(two_n, k=1)
    px = h[iu0] ^ h[iu1]
    order = np.argsort(px, kind="stable")
    pxs = px[order]
    starts = np.flatnonzero(np.concatenate([[True], pxs[1:] != pxs[:-1]]))
    ends = np.concatenate([starts[1:], [len(pxs)]])
    for s, e in zip(starts, ends):
        if e - s < 2:
            continue
        members = order[s:e]
        for ai in range(len(members)):
            a1, b1 = int(iu0[members[ai]]), int(iu1[members[ai]])
            for bi in range(ai + 1, len(members)):
                a2, b2 = int(iu0[members[bi]]), int(iu1[members[bi]])
                quad = {a1, b1, a2, b2}
                if len(quad) < 4:
                    continue
                cuts = tuple(sorted(quad))
                if _exact_side_ok(partner, _side_mask(two_n, cuts)):
                    yield cuts


def _decomposition_from_cuts(m: Matching, cuts: tuple[int, ...]) -> Decomposition:
    """Assemble the labelled Decomposition for exact side-consistent cuts.

    The arc containing point 1 becomes c1 and the remaining arcs follow in
    circular order; coincident cuts encode empty slots, so pair candidates
    put the entire opposite arc into a single slot.
    """
    two_n = 2 * m.size
    g1, g2, g3, g4 = cuts
    arcs = [
        list(range(g1 + 1, g2 + 1)),
        list(range(g2 + 1, g3 + 1)),
        list(range(g3 + 1, g4 + 1)),
        [p % two_n + 1 for p in range(g4, g1 + two_n)],
    ]
    at = next(t for t, arc in enumerate(arcs) if 1 in arc)
    ordered = [arcs[(at + d) % 4] for d in range(4)]
    mask = np.zeros(two_n, dtype=bool)
    for pt in ordered[1] + ordered[3]:
        mask[pt - 1] = True
    k = int(mask.sum()) // 2
    return Decomposition(
        c1=tuple(ordered[0]),
        c2=tuple(ordered[1]),
        c3=tuple(ordered[2]),
        c4=tuple(ordered[3]),
        k=k,
    )


def validate_decomposition(m: Matching, dec: Decomposition) -> None:
    """Raise ValueError unless dec is a valid decomposition of m."""
    two_n = 2 * m.size
    if dec.size != m.size:
        raise ValueError("decomposition and matching sizes differ")
    mask = np.zeros(two_n, dtype=bool)
    for pt in dec.c2 + dec.c4:
        mask[pt - 1] = True
    if not _exact_side_ok(m.partner, mask):
        raise ValueError("a chord crosses between the c1+c3 and c2+c4 sides")
    if int(mask.sum()) != 2 * dec.k:
        raise ValueError(f"c2+c4 carries {int(mask.sum()) // 2} chords, not k={dec.k}")
    # circular order: walking clockwise from the start of c1 must traverse
    # c1, c2, c3, c4 in this order
    walk = list(dec.c1) + list(dec.c2) + list(dec.c3) + list(dec.c4)
    if not _is_circular_run(walk, two_n):
        raise ValueError("parts are not in circular order c1, c2, c3, c4")


def k_decomposition(m: Matching, k: int) -> Decomposition | None:
    """A witness k-decomposition of m, or None when none exists."""
    n = m.size
    if not 2 <= k <= n - 2:
        raise ValueError(f"k={k} outside [2, n-2] for n={n}")
    for cuts in _iter_cut_candidates(m.partner):
        if _cut_side_k(m, cuts) == k:
            return _decomposition_from_cuts(m, cuts)
    return None


def is_indecomposable(m: Matching) -> bool:
    """True iff m is not k-decomposable for any k in [2, n-2].

    Fast path: for n >= 4, any of x, y, z > 0 already forces a 2- or
    (n-2)-decomposition, so only matchings with x = y = z = 0 reach the
    cut-vector search.
    """
    n = m.size
    if n <= 3:
        return True
    if any(xyz_stats(m)):
        return False
    for cuts in _iter_cut_candidates(m.partner):
        dec_k = _cut_side_k(m, cuts)
        if 2 <= dec_k <= n - 2:
            return False
    return True


def _cut_side_k(m: Matching, cuts: tuple[int, ...]) -> int:
    """Chord count of the side away from point 1 for side-consistent cuts."""
    two_n = 2 * m.size
    mask = _side_mask(two_n, cuts)
    if mask[0]:  # point 1 must land on the c1+c3 side
        mask = ~mask
    return int(mask.sum()) // 2


# ---------------------------------------------------------------------------
# The decomposition bijection
# ---------------------------------------------------------------------------


def phi(dm: tuple[Matching, Decomposition]) -> tuple[tuple[Matching, int], Matching]:
    """Split a k-decomposed matching of size n into a marked matching of size
    n-k+1 and a plain matching of size k+1.

    The big part glues c1 and c3 with a fresh marked chord in the two cut
    positions, relabelled so that the original point 1 keeps label 1; the
    marked chord is reported by its smaller endpoint.  The small part glues
    c2 and c4 with a fresh chord whose endpoint next to min(c2) is labelled
    1 (the chord is {1, 2} when c2 is empty).
    """
    m, dec = dm
    validate_decomposition(m, dec)

    # --- big part: [c1 run] P [c3 run] Q, then labels starting at old 1
    seq: list[object] = list(dec.c1) + ["P"] + list(dec.c3) + ["Q"]
    start = seq.index(1)
    label_of: dict[object, int] = {}
    for t in range(len(seq)):
        label_of[seq[(start + t) % len(seq)]] = t + 1
    pairs = [
        (label_of[a], label_of[b])
        for a, b in m.pairs()
        if a in label_of and b in label_of
    ]
    mark_chord = (label_of["P"], label_of["Q"])
    pairs.append(mark_chord)
    big = Matching.from_pairs(pairs)
    mark = min(mark_chord)

    # --- small part: [c2 run] R [c4 run] S with label 1 on S
    seq2: list[object] = list(dec.c2) + ["R"] + list(dec.c4) + ["S"]
    start2 = seq2.index("S")
    label2: dict[object, int] = {}
    for t in range(len(seq2)):
        label2[seq2[(start2 + t) % len(seq2)]] = t + 1
    pairs2 = [
        (label2[a], label2[b])
        for a, b in m.pairs()
        if a in label2 and b in label2
    ]
    pairs2.append((label2["R"], label2["S"]))
    small = Matching.from_pairs(pairs2)
    return (big, mark), small


def phi_inverse(marked: tuple[Matching, int], small: Matching) -> tuple[Matching, Decomposition]:
    """Inverse of :func:`phi`; rebuilds the matching and its decomposition."""
    big, mark = marked
    two_big = 2 * big.size
    if not 1 <= mark <= two_big:
        raise ValueError("mark out of range")
    a, b = sorted((mark, big.of(mark)))
    if a == 1 or b == 1:
        raise ValueError("the marked chord may not contain point 1")
    k = small.size - 1
    n = big.size - 1 + k
    if not 2 <= k <= n - 2:
        raise ValueError(f"sizes give k={k} outside [2, n-2] for n={n}")

    # cut the big part at the marked chord {a, b}: c1 holds 1
    c1_tokens = [("b", p % two_big + 1) for p in range(b, a + two_big - 1)]
    c3_tokens = [("b", p) for p in range(a + 1, b)]
    # cut the small part at the chord of 1
    t = small.of(1)
    two_small = 2 * small.size
    arc_low = [("s", p) for p in range(2, t)]
    arc_high = [("s", p) for p in range(t + 1, two_small + 1)]
    if t == 2:
        c2_tokens: list[tuple[str, int]] = []
        c4_tokens = arc_high
    else:
        c2_tokens, c4_tokens = arc_low, arc_high

    ring = c1_tokens + c2_tokens + c3_tokens + c4_tokens
    start = ring.index(("b", 1))
    label_of: dict[tuple[str, int], int] = {}
    for d in range(len(ring)):
        label_of[ring[(start + d) % len(ring)]] = d + 1

    pairs = [
        (label_of[("b", x)], label_of[("b", y)])
        for x, y in big.pairs()
        if (x, y) != (a, b)
    ]
    pairs += [
        (label_of[("s", x)], label_of[("s", y)])
        for x, y in small.pairs()
        if x != 1 and y != 1
    ]
    m = Matching.from_pairs(pairs)
    dec = Decomposition(
        c1=tuple(label_of[tok] for tok in c1_tokens),
        c2=tuple(label_of[tok] for tok in c2_tokens),
        c3=tuple(label_of[tok] for tok in c3_tokens),
        c4=tuple(label_of[tok] for tok in c4_tokens),
        k=k,
    )
    validate_decomposition(m, dec)
    return m, dec
