from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regclique.graph import Graph, complete_graph, empty_graph, random_graph
from regclique.oracle import (
    BudgetExceeded,
    all_cliques,
    enumerate_maximal_cliques,
    max_clique_exact,
    motzkin_straus_value,
)


def brute_force_maximal(g):
    """Maximal cliques by checking every vertex subset (independent of the library)."""
    adj = g.adj
    cliques = []
    for k in range(1, g.n + 1):
        for s in combinations(range(g.n), k):
            if all(adj[i, j] for i, j in combinations(s, 2)):
                cliques.append(frozenset(s))
    maximal = [c for c in cliques if not any(c < d for d in cliques)]
    return sorted(tuple(sorted(c)) for c in maximal)


def test_figure1_enumeration(fig1):
    got = [c.vertices for c in enumerate_maximal_cliques(fig1)]
    assert got == [(0, 1), (0, 2, 3), (1, 4), (2, 3, 4)]
    assert got == brute_force_maximal(fig1)


def test_small_cases(k3):
    assert [c.vertices for c in enumerate_maximal_cliques(k3)] == [(0, 1, 2)]
    assert [c.vertices for c in enumerate_maximal_cliques(empty_graph(4))] == [(0,), (1,), (2,), (3,)]


def test_max_clique_tie_break(fig1, k3):
    c, omega = max_clique_exact(fig1)
    assert omega == 3 and c.vertices == (0, 2, 3)
    assert max_clique_exact(k3)[1] == 3


def test_all_cliques_flags(fig1):
    cl = all_cliques(fig1)
    assert len(cl) == 5 + 7 + 2
    assert {c.vertices for c in cl if c.maximal} == set(brute_force_maximal(fig1))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.sampled_from([0.3, 0.5, 0.7]), st.integers(0, 2**32 - 1))
def test_enumeration_matches_brute_force(n, p, seed):
    g = random_graph(n, p, np.random.default_rng(seed))
    cliques = enumerate_maximal_cliques(g)
    assert [c.vertices for c in cliques] == brute_force_maximal(g)
    assert max_clique_exact(g)[1] == max(len(c) for c in cliques)


@pytest.mark.parametrize("seed", range(3))
def test_branch_and_bound_agrees_with_enumeration(seed):
    # 70 vertices forces the branch-and-bound path
    rng = np.random.default_rng(seed)
    g = random_graph(70, 0.5, rng)
    c, omega = max_clique_exact(g)
    assert len(c) == omega
    assert omega == max(len(k) for k in enumerate_maximal_cliques(g))
    assert all(g.adj[i, j] for i, j in combinations(c.vertices, 2))


def test_budget_exceeded():
    g = random_graph(200, 0.9, np.random.default_rng(0))
    with pytest.raises(BudgetExceeded) as info:
        max_clique_exact(g, time_budget=0.0)
    assert info.value.best.size >= 1


def test_motzkin_straus_values():
    assert motzkin_straus_value(3) == pytest.approx(2 / 3, abs=1e-15)
    assert motzkin_straus_value(1) == 0.0
    assert motzkin_straus_value(34) == pytest.approx(33 / 34, abs=1e-15)
    with pytest.raises(ValueError):
        motzkin_straus_value(0)


def test_complete_graph_omega():
    assert max_clique_exact(complete_graph(80))[1] == 80
    assert max_clique_exact(Graph(65))[1] == 1
