import random
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from polyexpand.core import skeleton
from polyexpand.errors import LimitExceeded
from polyexpand.expansion import (FlowField, certified_bound, cut_size, diameter, edge_expansion_exact,
                                  maxcut_bruteforce, np_reduction, validate_target_flow)
from polyexpand.families import cube, hypersimplex
from polyexpand.graph import Graph

import suite


def oracle_expansion(G):
    """Plain itertools enumeration, independent of the vectorized search."""
    best = None
    for k in range(1, G.n // 2 + 1):
        for S in combinations(range(G.n), k):
            s = set(S)
            c = sum((u in s) != (v in s) for u, v in G.edges)
            r = Fraction(c, k)
            if best is None or r < best:
                best = r
    return best


def oracle_maxcut(G):
    best = 0
    for mask in range(1 << G.n):
        best = max(best, sum((mask >> u & 1) != (mask >> v & 1) for u, v in G.edges))
    return best


@st.composite
def graphs(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def test_cut_size_examples():
    Q3 = skeleton(cube(3))
    facet = [i for i, v in enumerate(cube(3).vertices) if v[0] == 0]
    assert cut_size(Q3, facet) == 4
    assert cut_size(Graph.complete(4), [2]) == 3
    assert cut_size(Graph.path(3), [1]) == 2
    with pytest.raises(ValueError, match="improper cut"):
        cut_size(Graph.path(3), [])
    with pytest.raises(ValueError, match="improper cut"):
        cut_size(Graph.path(3), [0, 1, 2])


def test_expansion_examples():
    assert edge_expansion_exact(Graph.complete(2))[0] == 1
    h, cert = edge_expansion_exact(skeleton(cube(3)))
    assert h == 1 and len(cert.subset) == 4
    P = cube(3)
    assert any(len({P.vertices[i][k] for i in cert.subset}) == 1 for k in range(3))


def test_octahedron_expansion():
    # a triangular face has 3 nodes and 6 outgoing edges
    G = skeleton(hypersimplex(4, 2))
    h, cert = edge_expansion_exact(G)
    assert h == 2 == oracle_expansion(G)
    assert len(cert.subset) == 3 and cut_size(G, cert.subset) == 6


def test_expansion_errors_and_disconnected():
    with pytest.raises(ValueError, match="expansion undefined"):
        edge_expansion_exact(Graph(1, ()))
    with pytest.raises(LimitExceeded, match="instance too large"):
        edge_expansion_exact(Graph.path(25))
    h, cert = edge_expansion_exact(Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)]))
    assert h == 0 and cert.subset == (3, 4)


def test_tie_break_smallest_then_lexicographic():
    # on C4 the best ratio 1 is attained only by two adjacent nodes
    h, cert = edge_expansion_exact(Graph.cycle(4))
    assert h == 1 and cert.subset == (0, 1)
    # star with centre 0: every leaf set has ratio 1, the smallest is {1}
    h, cert = edge_expansion_exact(Graph.from_edges(5, [(0, i) for i in range(1, 5)]))
    assert h == 1 and cert.subset == (1,)


@settings(max_examples=120, deadline=None)
@given(graphs())
def test_expansion_matches_oracle(G):
    h, cert = edge_expansion_exact(G)
    assert h == oracle_expansion(G)
    assert cert.check(G) and cert.ratio == h
    k = min(len(cert.subset), G.n - len(cert.subset))
    # the witness has the smallest size among optimal cuts
    for j in range(1, k):
        for S in combinations(range(G.n), j):
            assert Fraction(cut_size(G, S), j) > h


def test_diameter():
    assert diameter(skeleton(cube(3))) == 3
    assert diameter(skeleton(hypersimplex(4, 2))) == 2
    assert diameter(Graph.complete(2)) == 1
    with pytest.raises(ValueError, match="infinite diameter"):
        diameter(Graph(3, ((0, 1),)))


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_diameter_matches_networkx(G):
    H = nx.Graph(list(G.edges))
    H.add_nodes_from(range(G.n))
    if nx.is_connected(H):
        assert diameter(G) == nx.diameter(H)


def test_maxcut_examples():
    assert maxcut_bruteforce(Graph.complete(3))[0] == 2
    assert maxcut_bruteforce(Graph.cycle(4))[0] == 4
    assert maxcut_bruteforce(Graph(4, ()))[0] == 0


@settings(max_examples=100, deadline=None)
@given(graphs(min_n=1))
def test_maxcut_matches_oracle(G):
    value, S = maxcut_bruteforce(G)
    assert value == oracle_maxcut(G)
    assert sum((u in S) != (v in S) for u, v in G.edges) == value


def test_reduction_examples():
    out = np_reduction(Graph.complete(3))
    assert out.g_prime.n == 6 and out.g_prime.m == 15 - 3
    assert np_reduction(Graph(2, ())).g_prime.edge_set == Graph.complete(4).edge_set
    g = np_reduction(Graph.complete(2)).g_prime
    assert g.m == 5 and not g.has_edge(0, 1)
    assert edge_expansion_exact(np_reduction(Graph.complete(3)).g_prime)[0] == Fraction(7, 3)
    assert edge_expansion_exact(np_reduction(Graph.complete(2)).g_prime)[0] == Fraction(3, 2)
    assert edge_expansion_exact(np_reduction(Graph(2, ())).g_prime)[0] == 2


@pytest.mark.parametrize("G", suite.atlas(5)[1:], ids=lambda G: f"n{G.n}m{G.m}")
def test_reduction_quotient_formula(G):
    """For S in V, T in W with k = |S| + |T| <= n the cut ratio is 2n - k - |d_G(S)|/k."""
    n = G.n
    Gp = np_reduction(G).g_prime
    rng = random.Random(n * 100 + G.m)
    for _ in range(40):
        S = set(rng.sample(range(n), rng.randint(0, n)))
        T = set(rng.sample(range(n, 2 * n), rng.randint(0, n - len(S))))
        k = len(S) + len(T)
        if k == 0:
            continue
        dS = sum((u in S) != (v in S) for u, v in G.edges)
        assert Fraction(cut_size(Gp, S | T), k) == 2 * n - k - Fraction(dS, k)


def test_certified_bound():
    assert certified_bound(8, 4) == 1
    assert certified_bound(2, 1) == 1
    assert certified_bound(5, Fraction(5, 2)) == 1
    with pytest.raises(ValueError):
        certified_bound(3, 0)


def test_validate_target_flow():
    K2 = Graph.complete(2)
    f = FlowField()
    f.add(0, 1, 1)
    assert validate_target_flow(K2, f, 1)
    assert not validate_target_flow(K2, f, 0)
    bad = FlowField({(0, 2): Fraction(1)})
    assert not validate_target_flow(Graph.path(3), bad, 2)


def test_flow_dump_format():
    f = FlowField()
    f.add(1, 0, Fraction(1, 3))
    f.add(0, 1, 2)
    assert f.dump() == "0 1 2/1\n1 0 1/3\n"
