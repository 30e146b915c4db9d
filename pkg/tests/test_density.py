"""Tests for the density engine: plain, flag, colored, weighted densities."""

import itertools

import numpy as np
import pytest

from sidlab.bigraph import Bigraph, ColoredBigraph, Flag, cycle4, left_labeled, rho
from sidlab.bigraphon import BigraphonTuple, StepBigraphon, random_step_bigraphon
from sidlab.density import (
    colored_density,
    density,
    density_brute_force,
    exponent_balance,
    flag_density,
    weighted_density,
)

DIAG = StepBigraphon.uniform([[1.0, 0.0], [0.0, 1.0]])


def random_bigraph(rng, max_side=5, max_total=10):
    v1 = int(rng.integers(1, max_side + 1))
    v2 = int(rng.integers(1, min(max_side, max_total - v1) + 1))
    left = [f"l{i}" for i in range(v1)]
    right = [f"r{i}" for i in range(v2)]
    edges = [(l, r) for l in left for r in right if rng.random() < 0.5]
    return Bigraph(left, right, edges)


def loop_density_oracle(g, w):
    """Tiny independent oracle: explicit nested loops over assignments."""
    total = 0.0
    left, right = list(g.left), list(g.right)
    for xs in itertools.product(range(w.rows), repeat=len(left)):
        for ys in itertools.product(range(w.cols), repeat=len(right)):
            x = dict(zip(left, xs))
            y = dict(zip(right, ys))
            term = 1.0
            for v in left:
                term *= w.row_weights[x[v]]
            for u in right:
                term *= w.col_weights[y[u]]
            for l, r in g.edges:
                term *= w.values[x[l], y[r]]
            total += term
    return total


# ---------------------------------------------------------------------------
# plain density


def test_density_edge_diag():
    assert density(rho(), DIAG) == pytest.approx(0.5, abs=1e-15)


def test_density_c4_diag():
    assert density(cycle4(), DIAG) == pytest.approx(0.125, abs=1e-15)
    assert density_brute_force(cycle4(), DIAG) == pytest.approx(0.125, abs=1e-15)


def test_density_empty_graph():
    g = Bigraph(["a"], ["b"], [])
    assert density(g, DIAG) == 1.0
    assert density(Bigraph([], [], []), DIAG) == 1.0


def test_density_constant_power_rule():
    w = StepBigraphon.constant(0.7, 3, 2)
    for g in (rho(), cycle4(), Bigraph(["a", "b"], ["c"], [("a", "c")])):
        assert density(g, w) == pytest.approx(0.7 ** g.e, rel=1e-14)


def test_density_matches_brute_force_and_oracle():
    rng = np.random.default_rng(7)
    for trial in range(40):
        g = random_bigraph(rng, max_side=3, max_total=6)
        w = random_step_bigraphon(int(rng.integers(1, 4)), int(rng.integers(1, 4)),
                                  seed=1000 + trial)
        ve = density(g, w)
        bf = density_brute_force(g, w)
        oracle = loop_density_oracle(g, w)
        assert ve == pytest.approx(bf, rel=1e-12)
        assert ve == pytest.approx(oracle, rel=1e-11)


def test_density_scaling_law():
    rng = np.random.default_rng(11)
    for trial in range(20):
        g = random_bigraph(rng, max_side=3, max_total=6)
        w = random_step_bigraphon(3, 3, seed=2000 + trial)
        lam = float(rng.uniform(0.2, 2.5))
        assert density(g, w.scaled(lam)) == pytest.approx(
            lam ** g.e * density(g, w), rel=1e-12)


def test_density_disjoint_union_multiplicative():
    rng = np.random.default_rng(13)
    for trial in range(20):
        g1 = random_bigraph(rng, max_side=2, max_total=4)
        g2 = random_bigraph(rng, max_side=2, max_total=4)
        union = Bigraph(
            [f"A{v}" for v in g1.left] + [f"B{v}" for v in g2.left],
            [f"A{v}" for v in g1.right] + [f"B{v}" for v in g2.right],
            [(f"A{l}", f"A{r}") for l, r in g1.edges]
            + [(f"B{l}", f"B{r}") for l, r in g2.edges])
        w = random_step_bigraphon(3, 2, seed=3000 + trial)
        assert density(union, w) == pytest.approx(
            density(g1, w) * density(g2, w), rel=1e-12)


def test_density_non_uniform_weights():
    w = StepBigraphon([0.25, 0.75], [0.1, 0.9], [[1.0, 2.0], [3.0, 4.0]])
    expect = sum(mu * nu * v
                 for mu, row in zip([0.25, 0.75], [[1.0, 2.0], [3.0, 4.0]])
                 for nu, v in zip([0.1, 0.9], row))
    assert density(rho(), w) == pytest.approx(expect, rel=1e-14)
    assert density(cycle4(), w) == pytest.approx(loop_density_oracle(cycle4(), w),
                                                 rel=1e-12)


# ---------------------------------------------------------------------------
# flag density


def test_flag_density_left_labeled_edge():
    e1 = Flag(rho(), ("1",))
    assert flag_density(e1, DIAG, {"1": 0}) == pytest.approx(0.5, abs=1e-15)


def test_flag_density_fully_labeled_edge():
    full = Flag(rho(), ("1", "2"))
    assert flag_density(full, DIAG, {"1": 0, "2": 0}) == 1.0
    assert flag_density(full, DIAG, {"1": 0, "2": 1}) == 0.0


def test_flag_density_no_labels_is_density():
    f = Flag(cycle4(), ())
    assert flag_density(f, DIAG, {}) == pytest.approx(density(cycle4(), DIAG))


def test_flag_density_validation():
    e1 = Flag(rho(), ("1",))
    with pytest.raises(ValueError):
        flag_density(e1, DIAG, {"2": 0})
    with pytest.raises(ValueError):
        flag_density(e1, DIAG, {"1": 5})


def test_flag_density_oracle_on_dual_star():
    w = random_step_bigraphon(3, 4, seed=99)
    g = Bigraph(["x1", "x2"], ["y"], [("x1", "y"), ("x2", "y")])
    f = left_labeled(g)
    for i, j in itertools.product(range(3), repeat=2):
        expect = sum(w.col_weights[y] * w.values[i, y] * w.values[j, y]
                     for y in range(4))
        assert flag_density(f, w, {"x1": i, "x2": j}) == pytest.approx(expect, rel=1e-12)


# ---------------------------------------------------------------------------
# colored density


def test_colored_density_constant_tuple_collapses():
    g = cycle4()
    mono = ColoredBigraph(g, {e: 1 for e in g.edges})
    ws = BigraphonTuple({1: DIAG})
    assert colored_density(mono, ws) == pytest.approx(density(g, DIAG))


def test_colored_density_rainbow_star_constant():
    star_graph = Bigraph(["1"], ["c1", "c2"], [("1", "c1"), ("1", "c2")])
    h = ColoredBigraph(star_graph, {("1", "c1"): 1, ("1", "c2"): 2})
    c = 0.6
    ws = BigraphonTuple({1: StepBigraphon.constant(c), 2: StepBigraphon.constant(c)})
    assert colored_density(h, ws) == pytest.approx(c * c, rel=1e-14)


def test_colored_density_two_colored_c4_oracle():
    g = cycle4()
    coloring = {("a", "c"): 1, ("b", "d"): 1, ("a", "d"): 2, ("b", "c"): 2}
    h = ColoredBigraph(g, coloring)
    anti = StepBigraphon.uniform([[0.0, 1.0], [1.0, 0.0]])
    ws = BigraphonTuple({1: DIAG, 2: anti})
    # brute force over the 2^4 assignments
    total = 0.0
    for xa, xb, yc, yd in itertools.product(range(2), repeat=4):
        term = (DIAG.values[xa, yc] * anti.values[xa, yd]
                * anti.values[xb, yc] * DIAG.values[xb, yd]) / 16.0
        total += term
    assert colored_density(h, ws) == pytest.approx(total, rel=1e-14)
    assert total == pytest.approx(0.125)


def test_colored_density_missing_color():
    g = cycle4()
    h = ColoredBigraph(g, {e: 3 for e in g.edges})
    with pytest.raises(ValueError):
        colored_density(h, BigraphonTuple({1: DIAG}))


# ---------------------------------------------------------------------------
# weighted density


def test_weighted_density_edge_identity():
    w = random_step_bigraphon(3, 2, seed=5)
    f = {"1": np.array([0.5, 1.0, 2.0])}
    g = {"2": np.array([1.5, 0.25])}
    expect = sum(w.row_weights[x] * w.col_weights[y]
                 * f["1"][x] * g["2"][y] * w.values[x, y]
                 for x in range(3) for y in range(2))
    assert weighted_density(rho(), w, f, g) == pytest.approx(expect, rel=1e-13)


def test_weighted_density_all_ones_is_density():
    w = random_step_bigraphon(3, 3, seed=6)
    g = cycle4()
    fv = {v: np.ones(3) for v in g.left}
    gw = {u: np.ones(3) for u in g.right}
    assert weighted_density(g, w, fv, gw) == pytest.approx(density(g, w), rel=1e-13)


def test_weighted_density_validation():
    w = random_step_bigraphon(2, 2, seed=7)
    with pytest.raises(ValueError):
        weighted_density(rho(), w, {}, {"2": np.ones(2)})
    with pytest.raises(ValueError):
        weighted_density(rho(), w, {"1": np.ones(3)}, {"2": np.ones(2)})


# ---------------------------------------------------------------------------
# randomized loop-oracle cross-checks for the non-plain variants


def loop_weighted_oracle(g, w, fs, gs):
    total = 0.0
    left, right = list(g.left), list(g.right)
    for xs in itertools.product(range(w.rows), repeat=len(left)):
        for ys in itertools.product(range(w.cols), repeat=len(right)):
            x = dict(zip(left, xs))
            y = dict(zip(right, ys))
            term = 1.0
            for v in left:
                term *= w.row_weights[x[v]] * fs[v][x[v]]
            for u in right:
                term *= w.col_weights[y[u]] * gs[u][y[u]]
            for l, r in g.edges:
                term *= w.values[x[l], y[r]]
            total += term
    return total


def loop_flag_oracle(f, w, assignment):
    g = f.graph
    free_left = [v for v in g.left if v not in assignment]
    free_right = [u for u in g.right if u not in assignment]
    total = 0.0
    for xs in itertools.product(range(w.rows), repeat=len(free_left)):
        for ys in itertools.product(range(w.cols), repeat=len(free_right)):
            pos = dict(assignment)
            pos |= dict(zip(free_left, xs))
            pos |= dict(zip(free_right, ys))
            term = 1.0
            for v in free_left:
                term *= w.row_weights[pos[v]]
            for u in free_right:
                term *= w.col_weights[pos[u]]
            for l, r in g.edges:
                term *= w.values[pos[l], pos[r]]
            total += term
    return total


def loop_colored_oracle(h, ws):
    g = h.graph
    colors = h.colors
    mu, nu = ws.row_weights, ws.col_weights
    total = 0.0
    left, right = list(g.left), list(g.right)
    for xs in itertools.product(range(mu.size), repeat=len(left)):
        for ys in itertools.product(range(nu.size), repeat=len(right)):
            x = dict(zip(left, xs))
            y = dict(zip(right, ys))
            term = 1.0
            for v in left:
                term *= mu[x[v]]
            for u in right:
                term *= nu[y[u]]
            for e in g.edges:
                term *= ws[colors[e]].values[x[e[0]], y[e[1]]]
            total += term
    return total


def test_weighted_density_random_against_oracle():
    rng = np.random.default_rng(21)
    for trial in range(15):
        g = random_bigraph(rng, max_side=3, max_total=5)
        w = random_step_bigraphon(2, 3, seed=4000 + trial)
        fs = {v: rng.uniform(0.1, 2.0, size=2) for v in g.left}
        gs = {u: rng.uniform(0.1, 2.0, size=3) for u in g.right}
        assert weighted_density(g, w, fs, gs) == pytest.approx(
            loop_weighted_oracle(g, w, fs, gs), rel=1e-12)


def test_flag_density_random_against_oracle():
    rng = np.random.default_rng(22)
    for trial in range(15):
        g = random_bigraph(rng, max_side=3, max_total=5)
        w = random_step_bigraphon(3, 2, seed=5000 + trial)
        verts = list(g.vertices())
        labeled = [v for v in verts if rng.random() < 0.5]
        assignment = {v: int(rng.integers(0, w.rows if v in set(g.left) else w.cols))
                      for v in labeled}
        f = Flag(g, tuple(labeled))
        assert flag_density(f, w, assignment) == pytest.approx(
            loop_flag_oracle(f, w, assignment), rel=1e-12)


def test_colored_density_random_against_oracle():
    rng = np.random.default_rng(23)
    for trial in range(15):
        g = random_bigraph(rng, max_side=3, max_total=5)
        if g.e == 0:
            continue
        coloring = {e: int(rng.integers(1, 3)) for e in g.sorted_edges()}
        h = ColoredBigraph(g, coloring)
        ws = BigraphonTuple({c: random_step_bigraphon(2, 2, seed=6000 + trial * 3 + c)
                             for c in (1, 2)})
        assert colored_density(h, ws) == pytest.approx(
            loop_colored_oracle(h, ws), rel=1e-12)


# ---------------------------------------------------------------------------
# exponent balance


def test_exponent_balance():
    assert exponent_balance([(cycle4(), 1.0), (rho(), -4.0)]) == 0.0
    assert exponent_balance([(rho(), 1.0)]) == 1.0
    assert exponent_balance([]) == 0.0
