"""Experiment harnesses: exact counting sequences, the uniform unit interval
graph sampler, Monte Carlo drivers, report schema, and determinism."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
import scipy.stats

from graphlim import combinat as C
from graphlim import experiments as X
from graphlim import graphs as G

from oracles import all_dyck_words, brute_irreducible


def _mirror_word(word: str) -> str:
    return word[::-1].translate(str.maketrans("UD", "DU"))


# ---------------------------------------------------------------------------
# counting sequences
# ---------------------------------------------------------------------------


def test_connected_counts_frozen():
    assert [X.count_connected_unit_interval_graphs(n) for n in range(1, 7)] == [
        1,
        1,
        2,
        4,
        10,
        26,
    ]


def test_connected_counts_match_word_classes():
    # C_n is the number of irreducible Dyck words of size n up to mirror image
    for n in range(1, 8):
        words = [w for w in all_dyck_words(n) if brute_irreducible(w)]
        classes = {min(w, _mirror_word(w)) for w in words}
        assert X.count_connected_unit_interval_graphs(n) == len(classes)


def test_unit_interval_counts_frozen():
    assert [X.count_unit_interval_graphs(n) for n in range(0, 11)] == [
        1,
        1,
        2,
        4,
        9,
        21,
        55,
        151,
        447,
        1389,
        4502,
    ]


def test_unit_interval_counts_match_multiset_product():
    # independent route: coefficients of prod_d (1 - x^d)^{-C_d}
    n_max = 12
    coeffs = [1] + [0] * n_max
    for d in range(1, n_max + 1):
        c = X.count_connected_unit_interval_graphs(d)
        new = [0] * (n_max + 1)
        for i, a in enumerate(coeffs):
            if a:
                j = 0
                while i + d * j <= n_max:
                    new[i + d * j] += a * math.comb(c + j - 1, j)
                    j += 1
        coeffs = new
    for n in range(n_max + 1):
        assert X.count_unit_interval_graphs(n) == coeffs[n]


def test_count_validation():
    with pytest.raises(ValueError):
        X.count_connected_unit_interval_graphs(0)
    with pytest.raises(ValueError):
        X.count_unit_interval_graphs(-1)


def test_log_tables_match_exact_counts():
    X._ensure_log_tables(300)
    for n in (1, 2, 10, 57, 137, 300):
        exact = math.log(X.count_unit_interval_graphs(n))
        assert X._log_u_cache[n] == pytest.approx(exact, rel=1e-12)


# ---------------------------------------------------------------------------
# uniform samplers
# ---------------------------------------------------------------------------


def test_sample_connected_uig_is_canonical_word():
    rng = np.random.default_rng(0)
    for _ in range(50):
        w = X.sample_connected_unit_interval_graph(9, rng)
        assert w.is_irreducible()
        assert w.steps <= _mirror_word(w.steps)


def test_sample_connected_uig_uniform_over_classes():
    rng = np.random.default_rng(1)
    n, draws = 5, 12000
    counts: dict[str, int] = {}
    for _ in range(draws):
        w = X.sample_connected_unit_interval_graph(n, rng)
        counts[w.steps] = counts.get(w.steps, 0) + 1
    assert len(counts) == X.count_connected_unit_interval_graphs(n)  # 10 classes
    _, p = scipy.stats.chisquare(list(counts.values()))
    assert p > 1e-3


def test_sample_uig_uniform_over_isomorphism_classes():
    # the multiset of canonical component words determines the class exactly
    rng = np.random.default_rng(2)
    n, draws = 5, 10500
    counts: dict[tuple, int] = {}
    for _ in range(draws):
        key = tuple(sorted(w.steps for w in X._sample_uig_words(n, rng)))
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == X.count_unit_interval_graphs(n)  # 21 classes
    _, p = scipy.stats.chisquare(list(counts.values()))
    assert p > 1e-3


def test_sample_uig_components_are_consecutive_blocks():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        g = X.sample_unit_interval_graph(n, rng)
        assert g.n == n
        comps = G.connected_components(g)
        assert sum(len(c) for c in comps) == n
        for comp in comps:
            vs = sorted(comp)
            assert vs == list(range(vs[0], vs[-1] + 1))


def test_log_path_sampler_runs_above_exact_cutoff():
    rng = np.random.default_rng(4)
    n = X._EXACT_SAMPLING_LIMIT + 37
    g = X.sample_unit_interval_graph(n, rng)
    assert g.n == n
    w = X.sample_connected_unit_interval_graph(n, rng)
    assert w.size == n and w.is_irreducible()


def test_draw_block_distribution_small_n():
    # P(d, j) = d * C_d * U_{n-jd} / (n * U_n), checked empirically at n = 4
    rng = np.random.default_rng(5)
    n = 4
    u = X.count_unit_interval_graphs
    c = X.count_connected_unit_interval_graphs
    expected = {}
    for d in range(1, n + 1):
        for j in range(1, n // d + 1):
            expected[(d, j)] = d * c(d) * u(n - j * d) / (n * u(n))
    draws = 20000
    seen: dict[tuple[int, int], int] = {}
    for _ in range(draws):
        key = X._draw_block(n, rng)
        seen[key] = seen.get(key, 0) + 1
    assert set(seen) <= set(expected)
    keys = sorted(expected)
    _, p = scipy.stats.chisquare(
        [seen.get(k, 0) for k in keys], [expected[k] * draws for k in keys]
    )
    assert p > 1e-3


# ---------------------------------------------------------------------------
# xyz batch statistics
# ---------------------------------------------------------------------------


def test_xyz_batch_matches_per_matching_stats():
    rng = np.random.default_rng(6)
    for n in (2, 3, 5, 8):
        batch = X._sample_matchings_batch(n, 300, rng)
        xs, ys, zs = X._xyz_batch(batch)
        for row, x, y, z in zip(batch, xs, ys, zs):
            m = C.Matching(tuple(int(v) + 1 for v in row))
            assert C.xyz_stats(m) == (int(x), int(y), int(z))


def test_batch_sampler_is_uniform():
    rng = np.random.default_rng(7)
    batch = X._sample_matchings_batch(3, 15000, rng)
    keys = [tuple(int(v) for v in row) for row in batch]
    counts: dict[tuple, int] = {}
    for k in keys:
        counts[k] = counts.get(k, 0) + 1
    assert len(counts) == C.count_matchings(3)  # 15
    _, p = scipy.stats.chisquare(list(counts.values()))
    assert p > 1e-3


# ---------------------------------------------------------------------------
# report schema and determinism
# ---------------------------------------------------------------------------


def test_report_schema():
    rng = np.random.default_rng(8)
    rep = X.mc_clique_density("perm", 40, 2, 30, rng)
    d = rep.to_dict()
    assert set(d) >= {"name", "params", "seed", "estimates", "pass", "threshold"}
    assert d["name"] == "mc_clique_density"
    assert all(set(e) == {"label", "value", "stderr"} for e in d["estimates"])
    parsed = json.loads(rep.to_json())
    assert parsed["pass"] == rep.passed
    assert rep.get("density_mean").value == pytest.approx(
        [e.value for e in rep.estimates if e.label == "density_mean"][0]
    )
    with pytest.raises(KeyError):
        rep.get("no_such_label")


def test_reports_deterministic_across_threads():
    r1 = X.mc_poisson_xyz(40, 500, 2, np.random.default_rng(9), threads=1)
    r2 = X.mc_poisson_xyz(40, 500, 2, np.random.default_rng(9), threads=3)
    assert r1.to_json() == r2.to_json()
    r3 = X.mc_clique_density("circle", 30, 2, 24, np.random.default_rng(10), threads=1)
    r4 = X.mc_clique_density("circle", 30, 2, 24, np.random.default_rng(10), threads=2)
    assert r3.to_json() == r4.to_json()
    r5 = X.mc_clique_density("circle", 30, 2, 24, np.random.default_rng(11))
    assert r5.to_json() != r3.to_json()  # fresh seed, fresh draws


def test_seed_recorded_and_reused():
    rng = np.random.default_rng(12)
    master = int(np.random.default_rng(12).integers(2**63))
    rep = X.mc_indecomposable_rate(20, 50, rng)
    assert rep.seed == master


# ---------------------------------------------------------------------------
# harness smoke runs (small but real)
# ---------------------------------------------------------------------------


def test_mc_clique_density_perm_edges():
    rep = X.mc_clique_density("perm", 300, 2, 60, np.random.default_rng(13), tol=0.02)
    assert rep.passed
    assert rep.get("limit_density").value == 0.5
    assert abs(rep.get("density_mean").value - 0.5) < 0.02


def test_mc_clique_density_circle_triangles():
    rep = X.mc_clique_density("circle", 240, 3, 60, np.random.default_rng(14), tol=0.02)
    assert rep.passed
    assert rep.get("limit_density").value == pytest.approx(1 / 15)


def test_mc_clique_density_validation():
    rng = np.random.default_rng(15)
    with pytest.raises(ValueError):
        X.mc_clique_density("tree", 10, 2, 5, rng)
    with pytest.raises(ValueError):
        X.mc_clique_density("perm", 10, 6, 5, rng)
    with pytest.raises(ValueError):
        X.mc_clique_density("perm", 4000, 2, 5, rng)
    with pytest.raises(ValueError):
        X.mc_clique_density("perm", 10, 2, 0, rng)


def test_mc_poisson_xyz_small():
    rep = X.mc_poisson_xyz(150, 4000, 2, np.random.default_rng(16))
    for label in ("mean_x", "mean_y", "mean_z"):
        assert abs(rep.get(label).value - 1.0) < 0.1
    assert abs(rep.get("p_xyz_zero").value - math.exp(-3)) < 0.03
    assert rep.get("fmom_110").stderr is not None
    with pytest.raises(ValueError):
        X.mc_poisson_xyz(3, 100, 2, np.random.default_rng(0))


def test_mc_indecomposable_rate_small():
    rep = X.mc_indecomposable_rate(150, 800, np.random.default_rng(17))
    assert 0.01 < rep.get("indecomposable_rate").value < 0.12
    assert rep.get("indecomposable_rate").stderr < 0.02


def test_verify_sample_laws():
    rep = X.verify_sample_laws(4000, np.random.default_rng(18))
    assert rep.passed
    assert rep.get("chisq_p_perm").value > 1e-3
    assert rep.get("chisq_p_circle").value > 1e-3


def test_exact_enumeration_suite_small():
    rep = X.exact_enumeration_suite(4)
    assert rep.passed
    labels = {e.label for e in rep.estimates}
    assert "simple_iff_modular_prime" in labels
    assert "split_prime_iff_indecomposable" in labels
    assert all(e.value == 1.0 for e in rep.estimates)
    with pytest.raises(ValueError):
        X.exact_enumeration_suite(7)


def test_verify_distance_formula_small():
    rep = X.verify_distance_formula(40, 25, np.random.default_rng(19))
    assert rep.passed
    assert rep.get("mismatches").value == 0.0
    assert rep.get("pairs_checked").value > 0


def test_verify_clique_formula_small():
    rep = X.verify_clique_formula(12, 4, 20, np.random.default_rng(20))
    assert rep.passed
    assert rep.get("mismatches").value == 0.0


def test_largest_component_stats_small():
    rep = X.largest_component_stats(150, 400, np.random.default_rng(21))
    val = rep.get("p_deficiency_le_10").value
    assert 0.0 <= val <= 1.0
    hist = rep.details["histogram"]
    assert sum(hist.values()) == 400
    assert all(int(k) >= 0 for k in hist)


def test_mc_unit_clique_scaling_structure():
    rep = X.mc_unit_clique_scaling(300, 3, 80, 512, np.random.default_rng(22))
    for label in ("ks_k2", "ks_k3", "graph_mean_k2", "excursion_mean_k2"):
        assert rep.get(label) is not None
    assert 0.0 <= rep.get("ks_k2").value <= 1.0
    assert -1.0 <= rep.get("corr_edges_triangles").value <= 1.0
    # edges and triangles of one graph are strongly positively correlated
    assert rep.get("corr_edges_triangles").value > 0.5
    with pytest.raises(ValueError):
        X.mc_unit_clique_scaling(300, 7, 80, 512, np.random.default_rng(0))
    with pytest.raises(ValueError):
        X.mc_unit_clique_scaling(300, 3, 5, 512, np.random.default_rng(0))


def test_heatmap_experiment_shape_and_range():
    hm = X.heatmap_experiment("perm", 12, 6, np.random.default_rng(23))
    assert hm.cells.shape == (12, 12)
    assert hm.cells.min() >= 0.0 and hm.cells.max() <= 1.0
    assert np.allclose(hm.cells, hm.cells.T)


def test_verify_gp_structure_small():
    rep = X.verify_gp(
        (150, 400),
        delta=0.1,
        m_grid=256,
        seeds_per_n=4,
        draws=300,
        rng=np.random.default_rng(24),
        two_point_n=400,
    )
    assert rep.get("two_point_ks").value <= 1.0
    assert rep.get("median_disc_n150").value > rep.get("median_disc_n400").value
    assert rep.params["two_point_n"] == 400
