"""Exact homomorphism densities over step bigraphons.

The primary evaluator runs variable elimination along a greedy min-degree
ordering; a direct sum-over-all-assignments evaluator is kept as an
independent oracle, and the two are required to agree to 1e-12 relative.
"""

from __future__ import annotations

import math
from typing import Mapping, Optional, Sequence

import numpy as np

from .bigraph import Bigraph, ColoredBigraph, Flag
from .bigraphon import BigraphonTuple, StepBigraphon
from .fractional import ColoredFractionalBigraph

__all__ = [
    "density",
    "density_brute_force",
    "flag_density",
    "colored_density",
    "weighted_density",
    "left_regularize_tuple",
    "exponent_balance",
]

BRUTE_FORCE_CAP = 8_000_000


# ---------------------------------------------------------------------------
# variable elimination engine

Factor = tuple[tuple[str, ...], np.ndarray]


def _align(factors: Sequence[Factor], sizes: Mapping[str, int]) -> Factor:
    allvars = sorted(set().union(*(set(vs) for vs, _ in factors)))
    out = np.ones([sizes[v] for v in allvars])
    for vs, arr in factors:
        order = sorted(range(len(vs)), key=lambda i: vs[i])
        arr = np.transpose(arr, order)
        vset = set(vs)
        shape = [sizes[v] if v in vset else 1 for v in allvars]
        out = out * arr.reshape(shape)
    return tuple(allvars), out


def _eliminate_all(sizes: dict[str, int], factors: list[Factor],
                   weights: dict[str, np.ndarray]) -> float:
    """Integrate out every variable in `weights`; min-degree greedy order."""
    scalar = 1.0
    live = [f for f in factors if f[0]]
    for vs, arr in factors:
        if not vs:
            scalar *= float(arr)

    remaining = set(weights)
    while remaining:
        neighbor_count = {}
        for v in remaining:
            others = set()
            for vs, _ in live:
                if v in vs:
                    others |= set(vs)
            others.discard(v)
            neighbor_count[v] = len(others)
        v = min(sorted(remaining), key=lambda u: (neighbor_count[u], u))
        remaining.discard(v)

        touching = [f for f in live if v in f[0]]
        live = [f for f in live if v not in f[0]]
        if not touching:
            continue  # isolated variable: its weight sums to 1
        vs, arr = _align(touching, sizes)
        axis = vs.index(v)
        wvec = weights[v].reshape([-1 if i == axis else 1 for i in range(len(vs))])
        arr = (arr * wvec).sum(axis=axis)
        new_vs = tuple(u for u in vs if u != v)
        if new_vs:
            live.append((new_vs, arr))
        else:
            scalar *= float(arr)

    for vs, arr in live:  # factors over fixed-only variables were pre-sliced
        scalar *= float(arr)
    return scalar


def _edge_factors(g: Bigraph, matrix_for_edge, fixed: Mapping[str, int]) -> list[Factor]:
    factors: list[Factor] = []
    for l, r in g.sorted_edges():
        mat = matrix_for_edge((l, r))
        if l in fixed and r in fixed:
            factors.append(((), np.asarray(mat[fixed[l], fixed[r]])))
        elif l in fixed:
            factors.append(((r,), mat[fixed[l], :]))
        elif r in fixed:
            factors.append(((l,), mat[:, fixed[r]]))
        else:
            factors.append(((l, r), mat))
    return factors


def _evaluate(g: Bigraph, matrix_for_edge, mu: np.ndarray, nu: np.ndarray,
              fixed: Optional[Mapping[str, int]] = None,
              potentials: Optional[Mapping[str, np.ndarray]] = None) -> float:
    fixed = dict(fixed or {})
    sizes = {v: mu.size for v in g.left} | {w: nu.size for w in g.right}
    factors = _edge_factors(g, matrix_for_edge, fixed)
    scalar = 1.0
    if potentials:
        for v, vec in potentials.items():
            if v in fixed:
                scalar *= float(vec[fixed[v]])
            else:
                factors.append(((v,), np.asarray(vec, dtype=float)))
    weights = {v: mu for v in g.left if v not in fixed}
    weights |= {w: nu for w in g.right if w not in fixed}
    return scalar * _eliminate_all(sizes, factors, weights)


# ---------------------------------------------------------------------------
# public densities


def density(g: Bigraph, w: StepBigraphon) -> float:
    """t(G, W) by variable elimination; empty graphs give 1."""
    return _evaluate(g, lambda e: w.values, w.row_weights, w.col_weights)


def density_brute_force(g: Bigraph, w: StepBigraphon) -> float:
    """t(G, W) as the literal weighted sum over all side-respecting assignments."""
    order = list(g.left) + list(g.right)
    sizes = [w.rows] * g.v1 + [w.cols] * g.v2
    total = math.prod(sizes) if sizes else 1
    if total > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force over {total} assignments exceeds cap")
    flat = np.arange(total)
    idx: dict[str, np.ndarray] = {}
    stride = total
    for vertex, size in zip(order, sizes):
        stride //= size
        idx[vertex] = (flat // stride) % size
    prod = np.ones(total)
    for v in g.left:
        prod *= w.row_weights[idx[v]]
    for u in g.right:
        prod *= w.col_weights[idx[u]]
    for l, r in g.edges:
        prod *= w.values[idx[l], idx[r]]
    return float(prod.sum())


def flag_density(f: Flag, w: StepBigraphon, assignment: Mapping[str, int]) -> float:
    """t(F, W) at a point: labeled vertices pinned, unlabeled integrated out."""
    g = f.graph
    if set(assignment) != set(f.labels):
        raise ValueError("assignment must cover exactly the labeled vertices")
    for v, i in assignment.items():
        size = w.rows if g.side(v) == 1 else w.cols
        if not 0 <= int(i) < size:
            raise ValueError(f"index {i} out of range for vertex {v!r}")
    fixed = {v: int(i) for v, i in assignment.items()}
    return _evaluate(g, lambda e: w.values, w.row_weights, w.col_weights, fixed=fixed)


def colored_density(h: ColoredBigraph, ws: BigraphonTuple) -> float:
    """t(H, W): each edge reads the bigraphon of its color."""
    colors = h.colors
    for c in h.color_set():
        if c not in ws:
            raise ValueError(f"tuple missing bigraphon for color {c}")
    return _evaluate(h.graph, lambda e: ws[colors[e]].values,
                     ws.row_weights, ws.col_weights)


def weighted_density(g: Bigraph, w: StepBigraphon,
                     left_weights: Mapping[str, Sequence[float]],
                     right_weights: Mapping[str, Sequence[float]]) -> float:
    """t(G; f, g; W): density with a nonnegative step function at every vertex."""
    if set(left_weights) != set(g.left) or set(right_weights) != set(g.right):
        raise ValueError("need one weight function per vertex")
    pots = {v: np.asarray(vec, dtype=float) for v, vec in left_weights.items()}
    pots |= {u: np.asarray(vec, dtype=float) for u, vec in right_weights.items()}
    for v, vec in pots.items():
        size = w.rows if g.side(v) == 1 else w.cols
        if vec.shape != (size,) or np.any(vec < 0):
            raise ValueError(f"weight function at {v!r} has wrong shape or sign")
    return _evaluate(g, lambda e: w.values, w.row_weights, w.col_weights,
                     potentials=pots)


# ---------------------------------------------------------------------------
# tuple transforms and diagnostics


def left_regularize_tuple(h: ColoredFractionalBigraph, ws: BigraphonTuple,
                          pivot_color: int) -> BigraphonTuple:
    """Divide each non-pivot color by its row marginal and load the
    compensation onto the pivot with exponents e_j(h)/e_pivot(h).

    Requires h color-regular and strictly positive bigraphons. Preserves
    t(h, .) and t(rho_h, .); all non-pivot colors come out left-regular.
    """
    if pivot_color not in h.colors:
        raise ValueError("pivot color must be a color of h")
    if not h.is_color_regular():
        raise ValueError("h must be color-regular")
    e_pivot = h.edge_mass(pivot_color)
    if e_pivot == 0:
        raise ValueError("pivot color has zero edge mass")
    for c in h.colors:
        if c not in ws:
            raise ValueError(f"tuple missing bigraphon for color {c}")
        if np.any(ws[c].values <= 0):
            raise ValueError("bigraphons must be strictly positive")

    out = dict(ws.as_dict())
    compensation = np.ones(ws.row_weights.size)
    for c in h.colors:
        if c == pivot_color:
            continue
        marg = out[c].row_marginals()
        compensation = compensation * marg ** (h.edge_mass(c) / e_pivot)
        out[c] = out[c].with_values(out[c].values / marg[:, None])
    pivot = out[pivot_color]
    out[pivot_color] = pivot.with_values(pivot.values * compensation[:, None])
    return BigraphonTuple(out)


def exponent_balance(terms: Sequence[tuple[Bigraph, float]]) -> float:
    """Sum of r_i * e(G_i): zero is necessary for any scale-invariant
    product inequality prod t(G_i, W)^{r_i} >= 1 to hold for all scalings."""
    return float(sum(r * g.e for g, r in terms))
