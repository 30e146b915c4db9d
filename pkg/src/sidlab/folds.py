"""Cut-involutions and folds.

A fold is a pair (phi, L): phi is an involutive automorphism whose fixed
set is a vertex cut, and L is a union of connected components of
G - Fix(phi) such that (L, Fix(phi), phi(L)) partitions V(G). The derived
left/right folding maps phi_L and phi_L* are endomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .bigraph import Bigraph, automorphisms

__all__ = [
    "Fold",
    "is_cut_involution",
    "complete_to_fold",
    "folding_maps",
    "enumerate_folds",
    "check_fold",
    "fold_to_json",
    "fold_from_json",
]


@dataclass(frozen=True)
class Fold:
    """A cut-involution together with its chosen left side L."""

    phi_items: tuple[tuple[str, str], ...]
    left: frozenset[str]

    def __init__(self, phi: Mapping[str, str], left: Iterable[str]):
        object.__setattr__(self, "phi_items", tuple(sorted(phi.items())))
        object.__setattr__(self, "left", frozenset(left))

    @property
    def phi(self) -> dict[str, str]:
        return dict(self.phi_items)

    @property
    def fixed(self) -> frozenset[str]:
        return frozenset(v for v, w in self.phi_items if v == w)

    def left_map(self) -> dict[str, str]:
        """phi_L: identity on L, phi elsewhere."""
        return {v: (v if v in self.left else w) for v, w in self.phi_items}

    def right_map(self) -> dict[str, str]:
        """phi_L*: phi on L, identity elsewhere."""
        return {v: (w if v in self.left else v) for v, w in self.phi_items}


def _check_total_bijection(g: Bigraph, phi: Mapping[str, str]) -> None:
    verts = g.vertex_set()
    if set(phi) != verts:
        raise ValueError("phi must be defined on exactly V(G)")
    if set(phi.values()) != verts:
        raise ValueError("phi must be a bijection of V(G)")


def _is_automorphism(g: Bigraph, phi: Mapping[str, str]) -> bool:
    lset = set(g.left)
    if any((v in lset) != (phi[v] in lset) for v in phi):
        return False
    return all((phi[l], phi[r]) in g.edges for l, r in g.edges)


def is_cut_involution(g: Bigraph, phi: Mapping[str, str]) -> bool:
    """True iff phi is an involutive automorphism whose fixed set is a vertex cut."""
    _check_total_bijection(g, phi)
    if not _is_automorphism(g, phi):
        return False
    if any(phi[phi[v]] != v for v in phi):
        return False
    fixed = {v for v in phi if phi[v] == v}
    rest = g.without_vertices(fixed)
    return len(rest.components()) >= 2


def complete_to_fold(g: Bigraph, phi: Mapping[str, str]) -> Optional[Fold]:
    """Complete a cut-involution to a fold, or return None when impossible.

    A completion exists iff no connected component of G - Fix(phi) is fixed
    by phi as a set; L is canonicalized by choosing, out of each pair of
    phi-swapped components, the one containing the smallest vertex id.
    """
    if not is_cut_involution(g, phi):
        raise ValueError("phi is not a cut-involution of g")
    fixed = {v for v in phi if phi[v] == v}
    comps = g.without_vertices(fixed).components()
    images = [frozenset(phi[v] for v in comp) for comp in comps]
    if any(img == comp for comp, img in zip(comps, images)):
        return None
    left: set[str] = set()
    taken: set[frozenset[str]] = set()
    for comp, img in zip(comps, images):
        if comp in taken or img in taken:
            continue
        chosen = comp if min(comp) <= min(img) else img
        left |= chosen
        taken |= {comp, img}
    return Fold(phi, left)


def check_fold(g: Bigraph, fold: Fold) -> None:
    """Validate every fold axiom against g; raises ValueError on failure."""
    phi = fold.phi
    _check_total_bijection(g, phi)
    if not _is_automorphism(g, phi):
        raise ValueError("phi is not an automorphism")
    if any(phi[phi[v]] != v for v in phi):
        raise ValueError("phi is not an involution")
    fixed = fold.fixed
    rest = g.without_vertices(fixed)
    if len(rest.components()) < 2:
        raise ValueError("Fix(phi) is not a vertex cut")
    left = fold.left
    phi_left = frozenset(phi[v] for v in left)
    if left & fixed or left & phi_left:
        raise ValueError("(L, Fix, phi(L)) must be disjoint")
    if left | fixed | phi_left != g.vertex_set():
        raise ValueError("(L, Fix, phi(L)) must cover V(G)")
    for comp in rest.components():
        if comp & left and not comp <= left:
            raise ValueError("L must be a union of components of G - Fix(phi)")


def folding_maps(g: Bigraph, fold: Fold) -> tuple[dict[str, str], dict[str, str]]:
    """The left- and right-folding maps (phi_L, phi_L*), both endomorphisms of g."""
    check_fold(g, fold)
    return fold.left_map(), fold.right_map()


def enumerate_folds(g: Bigraph) -> list[Fold]:
    """All folds of g up to the canonical choice of L, in deterministic order.

    Iterates the involutive automorphisms; inherits the automorphism
    enumeration's vertex cap.
    """
    folds: list[Fold] = []
    for a in automorphisms(g):
        if any(a[a[v]] != v for v in a):
            continue
        fixed = {v for v in a if a[v] == v}
        if len(g.without_vertices(fixed).components()) < 2:
            continue
        fold = complete_to_fold(g, a)
        if fold is not None:
            folds.append(fold)
    return folds


# ---------------------------------------------------------------------------
# JSON: {"phi": {vertex: vertex, ...}, "left": [ids]}


def fold_to_json(f: Fold) -> dict:
    return {"phi": dict(f.phi_items), "left": sorted(f.left)}


def fold_from_json(d: Mapping) -> Fold:
    return Fold(dict(d["phi"]), d["left"])
