"""Bipartite graphs with a fixed (left, right) bipartition.

Vertices are opaque string ids, edges are ordered (left, right) pairs. All
types are immutable value objects; operations are pure functions. Vertex
lists are kept sorted so every emitted artifact is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

__all__ = [
    "Bigraph",
    "Flag",
    "ColoredBigraph",
    "GraphTooLargeError",
    "rho",
    "star",
    "dual_star",
    "cycle4",
    "book",
    "left_labeled",
    "induced_subgraph",
    "amalgamate_left",
    "two_core",
    "two_core_flag",
    "automorphisms",
    "colored_automorphisms",
    "is_color_edge_transitive",
    "find_isomorphism",
    "graphs_isomorphic",
    "flags_isomorphic",
    "to_json_dict",
    "from_json_dict",
]

AUTOMORPHISM_VERTEX_CAP = 24


class GraphTooLargeError(ValueError):
    """Raised when an exhaustive operation exceeds its documented size cap."""


@dataclass(frozen=True)
class Bigraph:
    """A bigraph (V1, V2, E) with E a set of (left id, right id) pairs."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __init__(self, left: Iterable[str], right: Iterable[str],
                 edges: Iterable[tuple[str, str]] = ()):
        left_t = tuple(sorted(left))
        right_t = tuple(sorted(right))
        if len(set(left_t)) != len(left_t) or len(set(right_t)) != len(right_t):
            raise ValueError("duplicate vertex ids within a side")
        if set(left_t) & set(right_t):
            raise ValueError("left and right vertex ids must be disjoint")
        edge_set = frozenset((str(l), str(r)) for l, r in edges)
        lset, rset = set(left_t), set(right_t)
        for l, r in edge_set:
            if l not in lset or r not in rset:
                raise ValueError(f"edge ({l!r}, {r!r}) has an undeclared endpoint")
        object.__setattr__(self, "left", left_t)
        object.__setattr__(self, "right", right_t)
        object.__setattr__(self, "edges", edge_set)

    # -- counts of the standard shorthand -------------------------------
    @property
    def v1(self) -> int:
        return len(self.left)

    @property
    def v2(self) -> int:
        return len(self.right)

    @property
    def v(self) -> int:
        return self.v1 + self.v2

    @property
    def e(self) -> int:
        return len(self.edges)

    def vertices(self) -> tuple[str, ...]:
        return self.left + self.right

    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.left) | frozenset(self.right)

    def side(self, v: str) -> int:
        """1 for left vertices, 2 for right vertices."""
        if v in set(self.left):
            return 1
        if v in set(self.right):
            return 2
        raise ValueError(f"unknown vertex {v!r}")

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)

    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {u: set() for u in self.vertices()}
        for l, r in self.edges:
            adj[l].add(r)
            adj[r].add(l)
        return {u: frozenset(ns) for u, ns in adj.items()}

    def neighbors(self, v: str) -> frozenset[str]:
        if v in set(self.left):
            return frozenset(r for l, r in self.edges if l == v)
        if v in set(self.right):
            return frozenset(l for l, r in self.edges if r == v)
        raise ValueError(f"unknown vertex {v!r}")

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def isolated_vertices(self) -> frozenset[str]:
        touched = {u for e in self.edges for u in e}
        return frozenset(u for u in self.vertices() if u not in touched)

    def components(self) -> list[frozenset[str]]:
        """Connected components, sorted by smallest member id."""
        adj = self.adjacency()
        seen: set[str] = set()
        comps = []
        for start in self.vertices():
            if start in seen:
                continue
            comp = {start}
            frontier = [start]
            while frontier:
                u = frontier.pop()
                for w in adj[u]:
                    if w not in comp:
                        comp.add(w)
                        frontier.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return sorted(comps, key=lambda c: min(c))

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def without_vertices(self, u: Iterable[str]) -> "Bigraph":
        drop = set(u)
        return induced_subgraph(self, self.vertex_set() - drop)

    def spanning_subgraph(self, keep_edges: Iterable[tuple[str, str]]) -> "Bigraph":
        keep = frozenset(keep_edges)
        if not keep <= self.edges:
            raise ValueError("spanning subgraph edges must be edges of the host graph")
        return Bigraph(self.left, self.right, keep)

    def is_spanning_subgraph_of(self, host: "Bigraph") -> bool:
        return (self.left == host.left and self.right == host.right
                and self.edges <= host.edges)

    def left_regular_degree(self) -> Optional[int]:
        degs = {self.degree(v) for v in self.left}
        return degs.pop() if len(degs) == 1 else None

    def right_regular_degree(self) -> Optional[int]:
        degs = {self.degree(w) for w in self.right}
        return degs.pop() if len(degs) == 1 else None

    def is_biregular(self) -> bool:
        """Left- and right-regular; vacuously regular sides count."""
        return (self.v1 == 0 or self.left_regular_degree() is not None) and \
               (self.v2 == 0 or self.right_regular_degree() is not None)

    def is_endomorphism(self, phi: Mapping[str, str]) -> bool:
        verts = self.vertex_set()
        if set(phi) != verts:
            return False
        lset, rset = set(self.left), set(self.right)
        for u in self.left:
            if phi[u] not in lset:
                return False
        for w in self.right:
            if phi[w] not in rset:
                return False
        return all((phi[l], phi[r]) in self.edges for l, r in self.edges)


@dataclass(frozen=True)
class Flag:
    """A partially labeled bigraph: labels are an injective id sequence."""

    graph: Bigraph
    labels: tuple[str, ...]

    def __init__(self, graph: Bigraph, labels: Sequence[str]):
        labels_t = tuple(labels)
        if len(set(labels_t)) != len(labels_t):
            raise ValueError("labels must be distinct")
        if not set(labels_t) <= graph.vertex_set():
            raise ValueError("labels must be vertices of the underlying graph")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "labels", labels_t)

    @property
    def labeled(self) -> frozenset[str]:
        return frozenset(self.labels)


@dataclass(frozen=True)
class ColoredBigraph:
    """A bigraph together with a total edge coloring (color ids are ints)."""

    graph: Bigraph
    edge_colors: tuple[tuple[tuple[str, str], int], ...]

    def __init__(self, graph: Bigraph, edge_colors: Mapping[tuple[str, str], int]):
        items = {(str(l), str(r)): int(c) for (l, r), c in edge_colors.items()}
        if set(items) != graph.edges:
            raise ValueError("edge_colors must be defined on exactly the edge set")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "edge_colors", tuple(sorted(items.items())))

    @property
    def colors(self) -> dict[tuple[str, str], int]:
        return dict(self.edge_colors)

    def color_of(self, edge: tuple[str, str]) -> int:
        return self.colors[edge]

    def color_set(self) -> tuple[int, ...]:
        return tuple(sorted({c for _, c in self.edge_colors}))

    def edge_count(self, color: int) -> int:
        return sum(1 for _, c in self.edge_colors if c == color)

    def color_degree(self, v: str, color: int) -> int:
        return sum(1 for (l, r), c in self.edge_colors if c == color and v in (l, r))

    def is_right_uniform(self) -> bool:
        """All edges at a right vertex share one color."""
        seen: dict[str, int] = {}
        for (_, r), c in self.edge_colors:
            if seen.setdefault(r, c) != c:
                return False
        return True

    def is_left_color_regular(self) -> bool:
        """Each color degree is constant across the left side."""
        for c in self.color_set():
            degs = {self.color_degree(v, c) for v in self.graph.left}
            if len(degs) > 1:
                return False
        return True

    def restrict_colors(self, keep: Iterable[int]) -> "ColoredBigraph":
        keepset = set(keep)
        kept = {e: c for e, c in self.edge_colors if c in keepset}
        g = Bigraph(self.graph.left, self.graph.right, kept.keys())
        return ColoredBigraph(g, kept)

    def induced(self, u: Iterable[str]) -> "ColoredBigraph":
        g = induced_subgraph(self.graph, u)
        return ColoredBigraph(g, {e: self.colors[e] for e in g.edges})

    def recolor(self, mapping: Mapping[tuple[str, str], int]) -> "ColoredBigraph":
        return ColoredBigraph(self.graph, mapping)


# ---------------------------------------------------------------------------
# named small graphs


def rho() -> Bigraph:
    """The single-edge bigraph ({1},{2},{(1,2)})."""
    return Bigraph(["1"], ["2"], [("1", "2")])


def star(d: int) -> Bigraph:
    """K_{1,d}: one left center '0' with d right leaves."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    leaves = [str(i) for i in range(1, d + 1)]
    return Bigraph(["0"], leaves, [("0", leaf) for leaf in leaves])


def dual_star(d: int) -> Bigraph:
    """K_{d,1}: d left vertices joined to one right center '0'."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    tips = [str(i) for i in range(1, d + 1)]
    return Bigraph(tips, ["0"], [(t, "0") for t in tips])


def cycle4() -> Bigraph:
    """The 4-cycle as a bigraph: left {a,b}, right {c,d}, all four edges."""
    return Bigraph(["a", "b"], ["c", "d"],
                   [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def book(k: int) -> Bigraph:
    """The k-book: k four-cycle pages amalgamated along the edge (p, q)."""
    if k < 1:
        raise ValueError("k must be positive")
    left = ["p"] + [f"u{i}" for i in range(1, k + 1)]
    right = ["q"] + [f"w{i}" for i in range(1, k + 1)]
    edges = [("p", "q")]
    for i in range(1, k + 1):
        edges += [("p", f"w{i}"), (f"u{i}", "q"), (f"u{i}", f"w{i}")]
    return Bigraph(left, right, edges)


def left_labeled(g: Bigraph) -> Flag:
    """The flag with all left vertices labeled, in sorted order."""
    return Flag(g, g.left)


# ---------------------------------------------------------------------------
# subgraph and amalgamation operations


def induced_subgraph(g: Bigraph, u: Iterable[str]) -> Bigraph:
    """Subgraph induced by the vertex set u."""
    uset = set(u)
    unknown = uset - g.vertex_set()
    if unknown:
        raise ValueError(f"unknown vertex ids: {sorted(unknown)}")
    left = [v for v in g.left if v in uset]
    right = [w for w in g.right if w in uset]
    edges = [(l, r) for l, r in g.edges if l in uset and r in uset]
    return Bigraph(left, right, edges)


def amalgamate_left(gs: Sequence[Bigraph]) -> Bigraph:
    """Amalgamation over the left side: shared V1, disjoint unions of V2 and E."""
    if not gs:
        raise ValueError("need at least one graph")
    base_left = gs[0].left
    for g in gs[1:]:
        if g.left != base_left:
            raise ValueError("all graphs must share the same left vertex set")
    right: list[str] = []
    seen: set[str] = set()
    for g in gs:
        for w in g.right:
            if w in seen:
                raise ValueError(f"right-side id collision: {w!r}")
            seen.add(w)
            right.append(w)
    edges = [e for g in gs for e in g.edges]
    return Bigraph(base_left, right, edges)


def two_core(g: Bigraph) -> Bigraph:
    """Fixed point of deleting degree-<2 vertices (componentwise on disconnected input)."""
    return _strip(g, protected=frozenset())


def two_core_flag(f: Flag) -> Flag:
    """Flag 2-core: unlabeled degree-<2 vertices are deleted, labels survive."""
    core = _strip(f.graph, protected=f.labeled)
    return Flag(core, f.labels)


def _strip(g: Bigraph, protected: frozenset[str]) -> Bigraph:
    cur = g
    while True:
        doomed = [v for v in cur.vertices()
                  if v not in protected and cur.degree(v) < 2]
        if not doomed:
            return cur
        cur = cur.without_vertices(doomed)


# ---------------------------------------------------------------------------
# automorphisms and isomorphism search


def _refine_classes(g: Bigraph) -> dict[str, tuple]:
    """Iterated neighbor-class refinement starting from (side, degree)."""
    adj = g.adjacency()
    color: dict[str, tuple] = {
        v: (g.side(v), g.degree(v)) for v in g.vertices()
    }
    for _ in range(g.v):
        nxt = {v: (color[v], tuple(sorted(color[w] for w in adj[v])))
               for v in g.vertices()}
        # compress to keep keys small and comparable across graphs
        if len(set(nxt.values())) == len(set(color.values())):
            break
        color = nxt
    return color


def _search_maps(g1: Bigraph, g2: Bigraph, prescribed: Mapping[str, str],
                 find_all: bool) -> list[dict[str, str]]:
    """Backtracking search for side/edge-preserving bijections g1 -> g2."""
    if g1.v1 != g2.v1 or g1.v2 != g2.v2 or g1.e != g2.e:
        return []
    c1, c2 = _refine_classes(g1), _refine_classes(g2)
    by_color: dict[tuple, list[str]] = {}
    for u in g2.vertices():
        by_color.setdefault(c2[u], []).append(u)
    for us in by_color.values():
        us.sort()
    adj1, adj2 = g1.adjacency(), g2.adjacency()

    order = sorted(g1.vertices(),
                   key=lambda v: (len(by_color.get(c1[v], ())), c1[v], v))
    img: dict[str, str] = {}
    used: set[str] = set()
    out: list[dict[str, str]] = []

    for v, u in prescribed.items():
        if c1.get(v) != c2.get(u):
            return []

    def consistent(v: str, u: str) -> bool:
        if v in prescribed and prescribed[v] != u:
            return False
        for w, wu in img.items():
            if (w in adj1[v]) != (wu in adj2[u]):
                return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            out.append(dict(img))
            return not find_all
        v = order[i]
        for u in by_color.get(c1[v], ()):
            if u in used or not consistent(v, u):
                continue
            img[v] = u
            used.add(u)
            if extend(i + 1):
                return True
            del img[v]
            used.discard(u)
        return False

    extend(0)
    return out


def automorphisms(g: Bigraph) -> list[dict[str, str]]:
    """All side-preserving edge-preserving vertex bijections, in canonical order.

    Exhaustive enumeration; graphs above the documented cap of
    24 vertices raise GraphTooLargeError.
    """
    if g.v > AUTOMORPHISM_VERTEX_CAP:
        raise GraphTooLargeError(
            f"automorphism enumeration capped at {AUTOMORPHISM_VERTEX_CAP} vertices "
            f"(got {g.v})")
    maps = _search_maps(g, g, {}, find_all=True)
    verts = g.vertices()
    maps.sort(key=lambda m: tuple(m[v] for v in verts))
    return maps


def colored_automorphisms(h: ColoredBigraph) -> list[dict[str, str]]:
    """Automorphisms of the underlying graph that also preserve edge colors."""
    colors = h.colors
    out = []
    for a in automorphisms(h.graph):
        if all(colors[(a[l], a[r])] == c for (l, r), c in h.edge_colors):
            out.append(a)
    return out


def is_color_edge_transitive(h: ColoredBigraph) -> bool:
    """Each color class of edges is a single orbit of Aut(h) acting pointwise."""
    auts = colored_automorphisms(h)
    orbit_of: dict[tuple[str, str], int] = {}
    for idx, (edge, _) in enumerate(h.edge_colors):
        if edge in orbit_of:
            continue
        for a in auts:
            orbit_of.setdefault((a[edge[0]], a[edge[1]]), idx)
    by_color: dict[int, set[int]] = {}
    for edge, c in h.edge_colors:
        by_color.setdefault(c, set()).add(orbit_of[edge])
    return all(len(orbits) == 1 for orbits in by_color.values())


def find_isomorphism(g1: Bigraph, g2: Bigraph,
                     prescribed: Optional[Mapping[str, str]] = None
                     ) -> Optional[dict[str, str]]:
    """One isomorphism g1 -> g2 extending `prescribed`, or None."""
    if max(g1.v, g2.v) > AUTOMORPHISM_VERTEX_CAP:
        raise GraphTooLargeError("isomorphism search capped at 24 vertices")
    maps = _search_maps(g1, g2, dict(prescribed or {}), find_all=False)
    return maps[0] if maps else None


def graphs_isomorphic(g1: Bigraph, g2: Bigraph) -> bool:
    return find_isomorphism(g1, g2) is not None


def flags_isomorphic(f1: Flag, f2: Flag) -> bool:
    """Isomorphism of underlying graphs sending the i-th label to the i-th label."""
    if len(f1.labels) != len(f2.labels):
        return False
    prescribed = dict(zip(f1.labels, f2.labels))
    if len(set(prescribed.values())) != len(prescribed):
        return False
    return find_isomorphism(f1.graph, f2.graph, prescribed) is not None


# ---------------------------------------------------------------------------
# JSON round trip
#
# Schema: {"v1": [ids], "v2": [ids], "edges": [[l, r], ...],
#          "edge_colors": [int, ...]  (optional, parallel to edges)}


def to_json_dict(g: Bigraph | ColoredBigraph) -> dict:
    if isinstance(g, ColoredBigraph):
        base = g.graph
        edges = base.sorted_edges()
        colors = g.colors
        return {
            "v1": list(base.left),
            "v2": list(base.right),
            "edges": [list(e) for e in edges],
            "edge_colors": [colors[e] for e in edges],
        }
    edges = g.sorted_edges()
    return {"v1": list(g.left), "v2": list(g.right),
            "edges": [list(e) for e in edges]}


def from_json_dict(d: Mapping) -> Bigraph | ColoredBigraph:
    edges = [tuple(e) for e in d.get("edges", [])]
    g = Bigraph(d["v1"], d["v2"], edges)
    if "edge_colors" in d and d["edge_colors"] is not None:
        colors = d["edge_colors"]
        if len(colors) != len(edges):
            raise ValueError("edge_colors must parallel edges")
        return ColoredBigraph(g, dict(zip(edges, colors)))
    return g
