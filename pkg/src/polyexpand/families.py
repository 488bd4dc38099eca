"""Generators for structured 0/1-polytope families, with combinatorial adjacency rules.

Coordinates follow the input order of graph nodes (stable sets) or graph
edges (matchings, spanning trees).  Vertices are emitted in lexicographic
order of their characteristic vectors.
"""
from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .core import AdjacencyRule, Bits, ZeroOnePolytope
from .errors import LimitExceeded
from .graph import Graph

VERTEX_LIMIT = 1 << 16


def _sorted(d: int, verts) -> ZeroOnePolytope:
    return ZeroOnePolytope(d, tuple(sorted(set(verts))))


def cube(d: int) -> ZeroOnePolytope:
    if d < 0:
        raise ValueError("d must be nonnegative")
    return ZeroOnePolytope(d, tuple(product((0, 1), repeat=d)))


def cube_minus_vertex(d: int) -> ZeroOnePolytope:
    """All points of {0,1}^d except the all-ones vector."""
    if d < 2:
        raise ValueError("d must be at least 2")
    ones = (1,) * d
    return ZeroOnePolytope(d, tuple(v for v in product((0, 1), repeat=d) if v != ones))


def hypersimplex(d: int, rho: int) -> ZeroOnePolytope:
    if not 0 <= rho <= d:
        raise ValueError("rho out of range")
    return ZeroOnePolytope(d, tuple(v for v in product((0, 1), repeat=d) if sum(v) == rho))


def knapsack_polytope(weights: Sequence[int], capacity: int) -> ZeroOnePolytope:
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    d = len(weights)
    return ZeroOnePolytope(d, tuple(v for v in product((0, 1), repeat=d)
                                    if sum(w * b for w, b in zip(weights, v)) <= capacity))


def stable_sets(G: Graph) -> list[frozenset[int]]:
    """All stable sets (including the empty set) by backtracking over nodes."""
    out: list[frozenset[int]] = []
    adj = G.adjacency

    def extend(i: int, chosen: list[int], blocked: set[int]):
        if len(out) > VERTEX_LIMIT:
            raise LimitExceeded(f"more than {VERTEX_LIMIT} stable sets")
        if i == G.n:
            out.append(frozenset(chosen))
            return
        extend(i + 1, chosen, blocked)
        if i not in blocked:
            chosen.append(i)
            extend(i + 1, chosen, blocked | set(adj[i]))
            chosen.pop()

    extend(0, [], set())
    return out


def characteristic(S, n: int) -> Bits:
    return tuple(int(i in S) for i in range(n))


def stable_set_polytope(G: Graph) -> ZeroOnePolytope:
    return _sorted(G.n, (characteristic(S, G.n) for S in stable_sets(G)))


def line_graph(G: Graph) -> Graph:
    """Nodes are the edges of G in order; two are adjacent when they share an end node."""
    edges = [(i, j) for (i, e), (j, f) in combinations(enumerate(G.edges), 2) if set(e) & set(f)]
    return Graph.from_edges(G.m, edges)


def matching_polytope(G: Graph) -> ZeroOnePolytope:
    return stable_set_polytope(line_graph(G))


def perfect_matching_polytope(G: Graph) -> ZeroOnePolytope:
    if G.n % 2:
        raise ValueError("empty polytope")
    full = G.n // 2
    verts = [v for v in matching_polytope(G).vertices if sum(v) == full]
    if not verts:
        raise ValueError("empty polytope")
    return _sorted(G.m, verts)


def spanning_trees(G: Graph) -> list[tuple[int, ...]]:
    """Edge-index sets of all spanning trees, in lexicographic order of index tuples."""
    if G.n == 0 or not G.is_connected():
        raise ValueError("graph must be connected")
    trees = []
    for combo in combinations(range(G.m), G.n - 1):
        parent = list(range(G.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for k in combo:
            u, v = G.edges[k]
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            trees.append(combo)
        if len(trees) > VERTEX_LIMIT:
            raise LimitExceeded(f"more than {VERTEX_LIMIT} spanning trees")
    return trees


def spanning_tree_polytope(G: Graph) -> ZeroOnePolytope:
    return _sorted(G.m, (characteristic(T, G.m) for T in spanning_trees(G)))


# --- combinatorial adjacency rules ----------------------------------------------

def chvatal_rule(G: Graph) -> AdjacencyRule:
    """Stable sets are adjacent iff their symmetric difference induces a connected subgraph."""
    def rule(a: Bits, b: Bits) -> bool:
        sym = [i for i in range(G.n) if a[i] != b[i]]
        return bool(sym) and G.induced(sym).is_connected()
    return rule


def matching_rule(G: Graph) -> AdjacencyRule:
    """Matchings (and perfect matchings) are adjacent iff their symmetric difference is connected."""
    return chvatal_rule(line_graph(G))


def tree_rule() -> AdjacencyRule:
    """Bases of a matroid are adjacent iff their symmetric difference has two elements."""
    def rule(a: Bits, b: Bits) -> bool:
        return sum(x != y for x, y in zip(a, b)) == 2
    return rule


def hypersimplex_rule() -> AdjacencyRule:
    return tree_rule()


FAMILIES = ("cube", "cube_minus_vertex", "hypersimplex", "stable_set", "matching",
            "perfect_matching", "spanning_tree", "knapsack")
