"""Shared polytope and graph collections for the test modules."""
from __future__ import annotations

import random
from functools import lru_cache

import networkx as nx

from polyexpand import families as fam
from polyexpand.enumeration import classify
from polyexpand.graph import Graph


def from_nx(H: nx.Graph) -> Graph:
    nodes = sorted(H.nodes())
    pos = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(pos[u], pos[v]) for u, v in H.edges()])


@lru_cache(maxsize=None)
def atlas(max_nodes: int) -> tuple[Graph, ...]:
    """All graphs up to isomorphism with 1..max_nodes nodes (max_nodes <= 7)."""
    return tuple(from_nx(H) for H in nx.graph_atlas_g() if 1 <= H.number_of_nodes() <= max_nodes)


@lru_cache(maxsize=None)
def graphs_with_few_edges(max_edges: int) -> tuple[Graph, ...]:
    """Graphs without isolated nodes and 1..max_edges edges, up to isomorphism."""
    level = [nx.Graph([(0, 1)])]
    out = list(level)
    for _ in range(max_edges - 1):
        nxt: list[nx.Graph] = []
        for H in level:
            n = H.number_of_nodes()
            cands = [(u, v) for u in range(n) for v in range(u + 1, n) if not H.has_edge(u, v)]
            cands += [(u, n) for u in range(n)] + [(n, n + 1)]
            for e in cands:
                K = H.copy()
                K.add_edge(*e)
                if not any(nx.is_isomorphic(K, L) for L in nxt):
                    nxt.append(K)
        out.extend(nxt)
        level = nxt
    return tuple(from_nx(H) for H in out)


def connected_graphs(max_nodes: int) -> list[Graph]:
    return [G for G in atlas(max_nodes) if G.is_connected()]


def has_perfect_matching(G: Graph) -> bool:
    if G.n % 2:
        return False
    H = nx.Graph(list(G.edges))
    H.add_nodes_from(range(G.n))
    return len(nx.max_weight_matching(H, maxcardinality=True)) * 2 == G.n


@lru_cache(maxsize=None)
def eight_node_graphs() -> tuple[Graph, ...]:
    """Named 8-node graphs plus a seeded random sample, all with a perfect matching."""
    named = [
        nx.complete_graph(8),
        nx.complete_bipartite_graph(4, 4),
        nx.hypercube_graph(3),
        nx.cycle_graph(8),
        nx.circulant_graph(8, [1, 4]),  # Moebius ladder
        nx.Graph([(0, 1), (2, 3), (4, 5), (6, 7)]),
        nx.ladder_graph(4),
        nx.path_graph(8),
    ]
    rng = random.Random(20240901)
    sample = []
    while len(sample) < 24:
        H = nx.gnp_random_graph(8, rng.choice([0.3, 0.45, 0.6]), seed=rng.randrange(1 << 30))
        G = from_nx(nx.convert_node_labels_to_integers(H))
        if G.n == 8 and has_perfect_matching(G):
            sample.append(G)
    return tuple(from_nx(nx.convert_node_labels_to_integers(H)) for H in named) + tuple(sample)


@lru_cache(maxsize=None)
def classes(d: int):
    return tuple(classify(d))


@lru_cache(maxsize=None)
def all_classes():
    return tuple(r for d in range(1, 5) for r in classes(d))


@lru_cache(maxsize=None)
def hypersimplices(max_d: int = 6):
    return tuple(((d, rho), fam.hypersimplex(d, rho)) for d in range(1, max_d + 1) for rho in range(d + 1))


@lru_cache(maxsize=None)
def family_polytopes():
    """Named family members used by the generic property tests (dimension <= 10)."""
    out = [(f"cube({d})", fam.cube(d)) for d in range(1, 6)]
    out += [(f"cube_minus_vertex({d})", fam.cube_minus_vertex(d)) for d in range(2, 5)]
    out += [(f"hypersimplex{key}", P) for key, P in hypersimplices(6)]
    out += [(f"stable_set[{i}]", fam.stable_set_polytope(G)) for i, G in enumerate(atlas(5))]
    out += [(f"matching[{i}]", fam.matching_polytope(G)) for i, G in enumerate(graphs_with_few_edges(5))]
    out += [(f"perfect_matching[{i}]", fam.perfect_matching_polytope(G))
            for i, G in enumerate(atlas(6)) if has_perfect_matching(G)]
    out += [(f"spanning_tree[{i}]", fam.spanning_tree_polytope(G)) for i, G in enumerate(connected_graphs(5))]
    out += [(f"knapsack{w},{c}", fam.knapsack_polytope(w, c))
            for w, c in [((1, 2, 3), 3), ((2, 3, 4, 5), 7), ((1, 1, 2, 2, 3), 4), ((3, 5, 7, 9), 12)]]
    return tuple(out)
