"""Limit graphons: evaluation, sampling laws, exact clique densities,
step graphons and exports."""

from __future__ import annotations

import io
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
import scipy.stats

from graphlim import combinat as C
from graphlim import graphon as W
from graphlim import graphs as G


def test_latent_point_validation():
    with pytest.raises(ValueError):
        W.LatentPoint(-0.1, 0.5)
    with pytest.raises(ValueError):
        W.LatentPoint(0.1, 1.5)


def test_eval_perm_graphon():
    p, q = W.LatentPoint(0.1, 0.9), W.LatentPoint(0.2, 0.3)
    assert W.eval_graphon(W.PERM_GRAPHON, p, q) == 1
    assert W.eval_graphon(W.PERM_GRAPHON, q, p) == 1
    assert W.eval_graphon(W.PERM_GRAPHON, p, p) == 0
    r = W.LatentPoint(0.2, 0.95)
    assert W.eval_graphon(W.PERM_GRAPHON, p, r) == 0  # concordant pair


def test_eval_circle_graphon():
    a, b = W.LatentPoint(0.0, 0.5), W.LatentPoint(0.25, 0.75)
    assert W.eval_graphon(W.CIRCLE_GRAPHON, a, b) == 1
    nested = W.LatentPoint(0.1, 0.2)
    assert W.eval_graphon(W.CIRCLE_GRAPHON, a, nested) == 0
    # wraparound arc
    wrap = W.LatentPoint(0.9, 0.2)
    assert W.eval_graphon(W.CIRCLE_GRAPHON, wrap, W.LatentPoint(0.1, 0.5)) == 1
    # shared endpoint => no edge (ties resolve to 0)
    assert W.eval_graphon(W.CIRCLE_GRAPHON, a, W.LatentPoint(0.5, 0.9)) == 0


def test_clique_density_exact():
    for k in range(1, 6):
        assert W.clique_density("perm", k) == Fraction(1, math.factorial(k))
        assert W.clique_density("circle", k) == Fraction(
            2**k * math.factorial(k), math.factorial(2 * k)
        )
    assert W.clique_density("perm", 1) == 1
    assert W.clique_density("circle", 2) == Fraction(1, 3)
    with pytest.raises(ValueError):
        W.clique_density("other", 2)


def test_sample_graph_shape_and_symmetry():
    rng = np.random.default_rng(0)
    g = W.sample_graph(W.PERM_GRAPHON, 6, rng)
    assert g.n == 6
    g1 = W.sample_graph(W.CIRCLE_GRAPHON, 1, rng)
    assert g1.n == 1 and g1.edge_count() == 0


def test_sample_graph_edge_probability():
    rng = np.random.default_rng(1)
    reps = 20000
    perm_edges = sum(W.sample_graph(W.PERM_GRAPHON, 2, rng).edge_count() for _ in range(reps))
    assert abs(perm_edges / reps - 0.5) < 0.02
    circ_edges = sum(W.sample_graph(W.CIRCLE_GRAPHON, 2, rng).edge_count() for _ in range(reps))
    assert abs(circ_edges / reps - 1 / 3) < 0.02


def test_sample_graph_triangle_law_matches_exhaustive():
    # on 3 vertices the isomorphism class is the edge count; compare with
    # the exhaustive law of uniform seeds of size 3
    rng = np.random.default_rng(2)
    reps = 30000
    for family, seeds in (
        ("perm", [G.inversion_graph(p) for p in map(C.Permutation, __import__("itertools").permutations((1, 2, 3)))]),
        ("circle", [G.circle_graph(m) for m in C.iter_matchings(3)]),
    ):
        expected = np.zeros(4)
        for g in seeds:
            expected[g.edge_count()] += 1
        expected = expected / expected.sum() * reps
        w = W.PERM_GRAPHON if family == "perm" else W.CIRCLE_GRAPHON
        observed = np.zeros(4)
        for _ in range(reps):
            observed[W.sample_graph(w, 3, rng).edge_count()] += 1
        _, p = scipy.stats.chisquare(observed, expected)
        assert p > 1e-3, (family, observed, expected)


def test_step_graphon_reorders_adjacency():
    g = G.inversion_graph(C.Permutation((2, 4, 1, 3)))
    s = W.step_graphon(g, (1, 2, 3, 4))
    assert s.cells[0, 2] == 1.0 and s.cells[0, 1] == 0.0
    s2 = W.step_graphon(g, (4, 3, 2, 1))
    assert s2.cells[3, 1] == 1.0
    with pytest.raises(ValueError):
        W.step_graphon(g, (1, 1, 2, 3))


def test_step_graphon_validation():
    with pytest.raises(ValueError):
        W.StepGraphon(np.array([[0.0, 0.5], [0.4, 0.0]]))  # asymmetric
    with pytest.raises(ValueError):
        W.StepGraphon(np.array([[0.0, 1.5], [1.5, 0.0]]))  # out of range


def test_density_distance_proxy_discriminates():
    rng = np.random.default_rng(3)
    empty = G.UGraph.empty(4)
    far, se = W.density_distance_proxy(empty, W.PERM_GRAPHON, (2,), 4000, rng)
    assert abs(far - 0.5) < 0.05
    assert se > 0
    # a large random inversion graph should be close to its own limit
    g = G.inversion_graph(C.sample_permutation(300, rng))
    near, _ = W.density_distance_proxy(g, W.PERM_GRAPHON, (2, 3), 4000, rng)
    assert near < 0.1


def test_write_pgm_golden_bytes():
    buf = io.BytesIO()
    W.write_pgm(np.array([[0.0, 1.0], [1.0, 0.5]]), buf)
    data = buf.getvalue()
    assert data == b"P5\n2 2\n255\n" + bytes([255, 0, 0, 128])


def test_write_pgm_to_path(tmp_path):
    path = tmp_path / "x.pgm"
    W.write_pgm(np.zeros((3, 3)), path)
    assert path.read_bytes().startswith(b"P5\n3 3\n255\n")


def test_write_matrix_csv_roundtrip(tmp_path):
    mat = np.array([[0.0, 1.25], [3.5, 2.0]])
    path = tmp_path / "m.csv"
    W.write_matrix_csv(mat, path)
    back = np.loadtxt(path, delimiter=",")
    assert np.allclose(back, mat)
