import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_specs, builtin_specs, random_simplex
from regclique.graph import characteristic_vector, is_clique, random_graph
from regclique.objective import f_value, hessian_quadform
from regclique.optimality import (
    certify_characteristic_vector,
    certify_point,
    disprove_local_max,
    extract_clique,
    first_order_check,
    greedy_extend,
    purify,
)
from regclique.oracle import all_cliques, enumerate_maximal_cliques
from regclique.regularizer import RegularizerSpec

NONE = RegularizerSpec.none()


def test_first_order_figure1(fig1):
    r = first_order_check(fig1, NONE, characteristic_vector(fig1, [0, 1]))
    assert r.first_order_ok and r.worst_generator_slope == 0.0
    assert (2, 0) in r.tight_generators and (4, 1) in r.tight_generators


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: s.kind)
def test_first_order_at_characteristic_vectors(spec):
    rng = np.random.default_rng(2)
    for _ in range(10):
        g = random_graph(9, 0.5, rng)
        for c in enumerate_maximal_cliques(g):
            assert first_order_check(g, spec, characteristic_vector(g, c.vertices)).first_order_ok


def test_regularizer_slopes_nonpositive_at_subset_vectors():
    rng = np.random.default_rng(4)
    for spec in builtin_specs():
        for n in range(2, 9):
            s = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
            x = np.zeros(n)
            x[s] = 1 / len(s)
            grad = spec.gradient(x)
            for j in s:
                assert np.all(grad - grad[j] <= 1e-15)


def test_certify_figure1_counterexample(fig1):
    for spec in builtin_specs():
        assert certify_characteristic_vector(fig1, spec, [0, 1]).certified
    x = characteristic_vector(fig1, [0, 1])
    d = disprove_local_max(fig1, NONE, x)
    np.testing.assert_allclose(d, characteristic_vector(fig1, [2, 3, 4]) - x, atol=1e-15)
    assert hessian_quadform(fig1, NONE, x, d) == pytest.approx(1 / 3, abs=1e-15)
    for spec in builtin_specs():
        assert disprove_local_max(fig1, spec, x) is None


def test_k3_non_maximal_fails(k3):
    r = certify_characteristic_vector(k3, RegularizerSpec.bomze(), [0, 1])
    assert not r.first_order_ok and not r.certified
    assert r.ascent_direction[2] == 1.0


def test_k3_barycenter_not_disproved(k3):
    assert disprove_local_max(k3, NONE, np.full(3, 1 / 3)) is None


def test_certify_rejects_bad_input(fig1):
    with pytest.raises(ValueError):
        certify_characteristic_vector(fig1, NONE, [0, 1])
    with pytest.raises(ValueError):
        certify_characteristic_vector(fig1, RegularizerSpec.bomze(), [0, 4])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.sampled_from([0.3, 0.5, 0.7]), st.integers(0, 2**32 - 1))
def test_local_equivalence(n, p, seed):
    g = random_graph(n, p, np.random.default_rng(seed))
    for spec in builtin_specs():
        for c in all_cliques(g):
            r = certify_characteristic_vector(g, spec, c.vertices)
            if c.maximal:
                assert r.certified
            else:
                assert not r.first_order_ok


def test_purify_examples(fig1):
    x = np.array([0, 0.5, 0.5, 0, 0])
    y = purify(fig1, NONE, x)
    assert np.count_nonzero(y) == 1 and f_value(fig1, NONE, y) == 0.0
    c = characteristic_vector(fig1, [2, 3, 4])
    np.testing.assert_array_equal(purify(fig1, NONE, c), c)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.floats(0.0, 1.0), st.integers(0, 2**32 - 1), st.integers(0, 3))
def test_purify_monotone(n, p, seed, k):
    rng = np.random.default_rng(seed)
    g = random_graph(n, p, rng)
    spec = all_specs()[k]
    x = random_simplex(rng, n)
    trace = []
    y = purify(g, spec, x, trace)
    sizes = [s for s, _ in trace]
    values = [v for _, v in trace]
    assert all(a > b for a, b in zip(sizes, sizes[1:]))
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert f_value(g, spec, y) >= f_value(g, spec, x) - 1e-12
    assert is_clique(g, np.flatnonzero(y))
    assert abs(y.sum() - 1) <= 1e-12 and np.all(y >= 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_generator_sufficiency(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(n, 0.5, rng)
    x = random_simplex(rng, n)
    x[rng.random(n) < 0.3] = 0.0
    if x.sum() == 0:
        x[0] = 1.0
    x /= x.sum()
    grad = 2 * g.matvec(x)
    active = np.flatnonzero(x > 0)
    d = np.zeros(n)
    worst = -np.inf
    for _ in range(5):
        i, j = int(rng.integers(n)), int(rng.choice(active))
        if i == j:
            continue
        w = rng.random()
        d[i] += w
        d[j] -= w
        worst = max(worst, grad[i] - grad[j])
    if worst <= 0:
        assert grad @ d <= 1e-12


def test_extract_clique(fig1, k3):
    assert extract_clique(fig1, NONE, characteristic_vector(fig1, [2, 3, 4])).vertices == (2, 3, 4)
    assert extract_clique(k3, NONE, [0.5, 0.5, 0]).vertices == (0, 1, 2)
    assert greedy_extend(fig1, [2]) == (0, 2, 3)


def test_certify_point_cases(fig1, k3):
    bomze = RegularizerSpec.bomze()
    assert certify_point(fig1, bomze, characteristic_vector(fig1, [0, 1])).certified
    r = certify_point(fig1, NONE, characteristic_vector(fig1, [0, 1]))
    assert not r.certified and r.ascent_direction is not None
    r = certify_point(k3, bomze, [0.5, 0.5, 0])
    assert r.reason == "clique is not maximal"
    r = certify_point(fig1, bomze, [0, 0.5, 0.5, 0, 0])
    assert r.reason == "support is not a clique"
    x = characteristic_vector(fig1, [0, 1]) + np.array([1e-3, -1e-3, 0, 0, 0])
    assert certify_point(fig1, bomze, x).reason == "iterate not converged to x(C)"
