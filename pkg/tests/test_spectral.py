import math
from fractions import Fraction

import numpy as np
import pytest

from polyexpand.core import skeleton
from polyexpand.errors import NoConvergence
from polyexpand.expansion import edge_expansion_exact
from polyexpand.families import cube, hypersimplex
from polyexpand.graph import Graph
from polyexpand.spectral import (build_walk_matrix, expansion_bounds, second_eigenvalue,
                                 spectral_report, walk_distribution)

import suite

F = Fraction


def test_walk_matrix_examples():
    assert build_walk_matrix(Graph.complete(2)).entries == ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
    M = build_walk_matrix(Graph.path(3))
    assert [M.entries[i][i] for i in range(3)] == [F(3, 4), F(1, 2), F(3, 4)]
    assert M.entries[0][1] == M.entries[1][2] == F(1, 4) and M.entries[0][2] == 0
    G = skeleton(cube(3))
    M = build_walk_matrix(G)
    for u in range(8):
        for v in range(8):
            expect = F(1, 2) if u == v else (F(1, 6) if G.has_edge(u, v) else 0)
            assert M.entries[u][v] == expect
    with pytest.raises(ValueError, match="walk undefined"):
        build_walk_matrix(Graph(3, ()))


@pytest.mark.parametrize("rec", suite.classes(3), ids=lambda r: r.signature)
def test_walk_matrix_doubly_stochastic_symmetric_lazy(rec):
    M = build_walk_matrix(skeleton(rec.representative))
    n = M.n
    for i in range(n):
        assert sum(M.entries[i]) == 1
        assert sum(M.entries[j][i] for j in range(n)) == 1
        assert M.entries[i][i] >= F(1, 2)
        for j in range(n):
            assert M.entries[i][j] == M.entries[j][i]


@pytest.mark.parametrize("G,lam", [
    (Graph.complete(2), 0.0),
    (Graph.cycle(4), 0.5),
    (skeleton(cube(3)), 2 / 3),
])
def test_second_eigenvalue_closed_forms(G, lam):
    M = build_walk_matrix(G)
    assert second_eigenvalue(M, method="dense") == pytest.approx(lam, abs=1e-9)
    assert second_eigenvalue(M, method="power") == pytest.approx(lam, abs=1e-6)


def test_hypercube_spectrum_formula():
    # lambda2 of the lazy walk on Q_d is 1 - 1/d
    for d in range(2, 7):
        M = build_walk_matrix(skeleton(cube(d)))
        assert second_eigenvalue(M) == pytest.approx(1 - 1 / d, abs=1e-9)


def test_power_iteration_agrees_with_dense_on_suite():
    for rec in suite.classes(4)[::7]:
        M = build_walk_matrix(skeleton(rec.representative))
        assert second_eigenvalue(M, 1e-10, method="power") == pytest.approx(
            second_eigenvalue(M, method="dense"), abs=1e-6)


def test_power_iteration_reports_nonconvergence():
    M = build_walk_matrix(skeleton(cube(4)))
    with pytest.raises(NoConvergence) as err:
        second_eigenvalue(M, 1e-15, method="power", max_iter=3)
    assert 0 <= err.value.estimate <= 1


def test_bad_arguments():
    M = build_walk_matrix(Graph.complete(2))
    with pytest.raises(ValueError):
        second_eigenvalue(M, 0)
    with pytest.raises(ValueError):
        second_eigenvalue(M, method="qr")


@pytest.mark.parametrize("lam,delta,low,up", [
    (2 / 3, 3, 1.0, math.sqrt(8 / 3) * 3),
    (0.0, 1, 1.0, math.sqrt(8)),
    (0.5, 2, 1.0, 4.0),
])
def test_expansion_bounds(lam, delta, low, up):
    rep = expansion_bounds(lam, delta)
    assert rep.lower_bound == pytest.approx(low) and rep.upper_bound == pytest.approx(up)


def test_expansion_bounds_reject_degenerate():
    with pytest.raises(ValueError, match="disconnected or numerically degenerate"):
        expansion_bounds(1.0, 3)


def test_report_for_disconnected_graph():
    rep = spectral_report(Graph.from_edges(4, [(0, 1), (2, 3)]))
    assert rep.lambda2 == 1.0 and rep.lower_bound == 0 and rep.upper_bound == 0
    assert set(rep.to_json().strip("{}").replace('"', "").split(", ")) >= {"n: 4"}


def test_walk_distribution_examples():
    M = build_walk_matrix(Graph.complete(2))
    assert walk_distribution(M, [1, 0], 0) == (1, 0)
    assert walk_distribution(M, [1, 0], 1) == (F(1, 2), F(1, 2))
    Q = build_walk_matrix(skeleton(cube(3)))
    pi = walk_distribution(Q, [1] + [0] * 7, 40)
    assert all(abs(x - F(1, 8)) < F(1, 10**6) for x in pi)
    with pytest.raises(ValueError):
        walk_distribution(M, [F(1, 2), F(1, 3)], 1)


@pytest.mark.parametrize("rec", suite.classes(2) + suite.classes(3), ids=lambda r: r.signature)
def test_mixing_envelope_and_monotone_decay(rec):
    G = skeleton(rec.representative)
    M = build_walk_matrix(G)
    lam = spectral_report(G).lambda2
    u = F(1, G.n)
    pi = [F(1)] + [F(0)] * (G.n - 1)
    prev = None
    for i in range(25):
        dist = float(sum(abs(x - u) for x in pi))
        assert dist <= math.sqrt(G.n) * lam ** i + 1e-9
        if prev is not None:
            assert dist <= prev + 1e-12
        prev = dist
        pi = list(walk_distribution(M, pi, 1))


def test_sandwich_on_small_named_graphs():
    for G in [Graph.complete(5), Graph.cycle(7), Graph.path(6), skeleton(hypersimplex(5, 2))]:
        rep = spectral_report(G)
        h = float(edge_expansion_exact(G)[0])
        assert rep.lower_bound - 1e-6 <= h <= rep.upper_bound + 1e-6


def test_report_json_fields():
    import json
    rep = json.loads(spectral_report(Graph.cycle(4)).to_json())
    assert set(rep) == {"n", "delta_max", "lambda2", "lower_bound", "upper_bound", "tol"}
