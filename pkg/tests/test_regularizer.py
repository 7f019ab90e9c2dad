import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import builtin_specs, central_diff, random_simplex
from regclique.regularizer import (
    ParameterError,
    RegularizerSpec,
    max_alpha1,
    max_alpha2,
    phi_gradient,
    phi_hessian_diag,
    phi_value,
    verify_conditions,
)


def test_values():
    assert phi_value(RegularizerSpec.bomze(), [0.5, 0.5, 0, 0, 0]) == 0.25
    s = RegularizerSpec.exp(beta=5.0)
    assert phi_value(s, [1.0]) == pytest.approx(s.alpha2 * (math.exp(-5) - 1), rel=1e-15)
    s = RegularizerSpec.pnorm(p=3, epsilon=0.0, alpha1=1.0, strict=False)
    assert phi_value(s, [1.0, 0.0]) == 1.0
    assert phi_value(RegularizerSpec.none(), [0.3, 0.7]) == 0.0


def test_hessian_diagonals():
    x = np.array([0.2, 0.3, 0.5])
    np.testing.assert_array_equal(phi_hessian_diag(RegularizerSpec.bomze(), x), [1, 1, 1])
    s = RegularizerSpec.exp()
    np.testing.assert_allclose(phi_hessian_diag(s, np.zeros(4)), s.alpha2 * 25.0, rtol=1e-15)


def test_bounds():
    assert max_alpha1(3, 1e-300) == pytest.approx(1 / 3, rel=1e-15)
    assert max_alpha2(5) == pytest.approx(0.08, rel=1e-15)
    assert max_alpha2(1) == 2.0
    for bad in [(2, 1e-9), (3, 0.0)]:
        with pytest.raises(ParameterError):
            max_alpha1(*bad)
    with pytest.raises(ParameterError):
        max_alpha2(0)


def test_auto_weights():
    assert RegularizerSpec.pnorm().alpha1 == pytest.approx(0.99 * max_alpha1(3, 1e-9))
    assert RegularizerSpec.exp().alpha2 == pytest.approx(0.99 * 0.08)


def test_bound_violation_messages():
    with pytest.raises(ParameterError, match="2/beta\\^2 = 0.08"):
        RegularizerSpec.exp(beta=5, alpha2=0.09)
    with pytest.raises(ParameterError, match="alpha1"):
        RegularizerSpec.pnorm(alpha1=0.5)
    with pytest.raises(ParameterError):
        RegularizerSpec.pnorm(alpha1=-1.0)
    with pytest.raises(ParameterError):
        RegularizerSpec("l1")


@pytest.mark.parametrize("spec", builtin_specs(), ids=lambda s: s.kind)
def test_finite_differences(spec):
    rng = np.random.default_rng(1)
    for _ in range(100):
        x = random_simplex(rng, 6)
        g = phi_gradient(spec, x)
        fd = central_diff(lambda y: phi_value(spec, y), x)
        assert np.max(np.abs(g - fd)) <= 1e-6 * max(1.0, np.max(np.abs(g)))
        h = phi_hessian_diag(spec, x)
        fdh = central_diff(lambda y: phi_gradient(spec, y), x)
        assert np.max(np.abs(h - fdh)) <= 1e-6 * max(1.0, np.max(np.abs(h)))


def test_verify_conditions_examples():
    r = verify_conditions(RegularizerSpec.bomze(), 100, samples=1000)
    assert r.ok and r.c2_max_spectral_norm == 1.0
    r = verify_conditions(RegularizerSpec.exp(), 100, samples=1000)
    assert r.ok and r.c2_max_spectral_norm <= 1.98 * (1 + 1e-12)
    r = verify_conditions(RegularizerSpec.pnorm().scaled(1.5), 100, samples=100)
    assert r.passed == (True, False, True)
    assert r.c2_max_spectral_norm == pytest.approx(1.5 * 0.99 * 2, rel=1e-6)


@pytest.mark.parametrize("spec", builtin_specs(), ids=lambda s: s.kind)
def test_sampled_curvature_below_closed_form(spec):
    r = verify_conditions(spec, 50, samples=2000, seed=3)
    bound = {"bomze": 1.0, "pnorm": 0.99 * 2, "exp": 0.99 * 2}[spec.kind]
    assert r.c2_max_spectral_norm <= bound * (1 + 1e-12)
    # the vertex sample reaches the bound up to the epsilon shift
    assert r.c2_max_spectral_norm >= bound * (1 - 1e-6)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 50), st.integers(0, 2**32 - 1), st.sampled_from(["bomze", "pnorm", "exp"]))
def test_permutation_invariance_bit_exact(n, seed, kind):
    spec = RegularizerSpec(kind)
    rng = np.random.default_rng(seed)
    x = random_simplex(rng, n)
    assert phi_value(spec, x) == phi_value(spec, x[rng.permutation(n)])


@pytest.mark.parametrize("spec", builtin_specs() + [RegularizerSpec.none()], ids=lambda s: s.kind)
def test_json_roundtrip(spec):
    assert RegularizerSpec.from_json(spec.to_json()) == spec


def test_json_null_means_auto():
    s = RegularizerSpec.from_json({"kind": "pnorm", "p": 3, "epsilon": 1e-9, "alpha1": None})
    assert s == RegularizerSpec.pnorm()
