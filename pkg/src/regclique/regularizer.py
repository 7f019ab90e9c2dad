"""Separable regularizers added to the Motzkin-Straus objective.

Built-in kinds, all functions of the form sum_i phi(x_i):

* ``none``  -- phi = 0
* ``bomze`` -- phi(t) = t^2 / 2
* ``pnorm`` -- phi(t) = alpha1 * (t + epsilon)^p, p > 2, epsilon > 0
* ``exp``   -- phi(t) = alpha2 * (exp(-beta t) - 1), beta > 0

Each has a diagonal Hessian. The curvature bound ``||Hess|| < 2`` on the
simplex holds when alpha1 < 2 / (p (p-1) (1+epsilon)^(p-2)) and
alpha2 < 2 / beta^2; a weight of ``None`` means "use 0.99 times that bound".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

KINDS = ("none", "bomze", "pnorm", "exp")
AUTO_FRACTION = 0.99

DEFAULT_P = 3.0
DEFAULT_EPSILON = 1e-9
DEFAULT_BETA = 5.0


class ParameterError(ValueError):
    """A regularizer parameter violates its admissible range."""


def max_alpha1(p: float, epsilon: float) -> float:
    """Open upper bound on the p-norm weight."""
    if not p > 2:
        raise ParameterError(f"p must exceed 2, got {p}")
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    return 2.0 / (p * (p - 1) * (1 + epsilon) ** (p - 2))


def max_alpha2(beta: float) -> float:
    """Open upper bound on the exponential weight."""
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    return 2.0 / beta**2


@dataclass(frozen=True)
class RegularizerSpec:
    """Immutable description of a regularizer.

    Use the constructors :meth:`none`, :meth:`bomze`, :meth:`pnorm` and
    :meth:`exp`. Passing ``strict=False`` skips the bound checks, which is
    only meant for tests that probe what happens outside the admissible range.
    """

    kind: str = "none"
    alpha1: float | None = None
    p: float | None = None
    epsilon: float | None = None
    alpha2: float | None = None
    beta: float | None = None
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown regularizer kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "pnorm":
            p = DEFAULT_P if self.p is None else float(self.p)
            eps = DEFAULT_EPSILON if self.epsilon is None else float(self.epsilon)
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "epsilon", eps)
            if self.strict:
                bound = max_alpha1(p, eps)
            elif self.alpha1 is None:
                bound = 2.0 / (p * (p - 1) * (1 + eps) ** (p - 2))
            if self.alpha1 is None:
                object.__setattr__(self, "alpha1", AUTO_FRACTION * bound)
            elif self.strict and not 0 < self.alpha1 < bound:
                raise ParameterError(
                    f"alpha1={self.alpha1} violates 0 < alpha1 < 2/(p(p-1)(1+epsilon)^(p-2)) = {bound:.6g}"
                )
            object.__setattr__(self, "alpha1", float(self.alpha1))
        elif self.kind == "exp":
            beta = DEFAULT_BETA if self.beta is None else float(self.beta)
            object.__setattr__(self, "beta", beta)
            bound = max_alpha2(beta) if self.strict else 2.0 / beta**2
            if self.alpha2 is None:
                object.__setattr__(self, "alpha2", AUTO_FRACTION * bound)
            elif self.strict and not 0 < self.alpha2 < bound:
                raise ParameterError(f"alpha2={self.alpha2} violates 0 < alpha2 < 2/beta^2 = {bound:.6g}")
            object.__setattr__(self, "alpha2", float(self.alpha2))

    @classmethod
    def none(cls) -> RegularizerSpec:
        return cls("none")

    @classmethod
    def bomze(cls) -> RegularizerSpec:
        return cls("bomze")

    @classmethod
    def pnorm(cls, p=DEFAULT_P, epsilon=DEFAULT_EPSILON, alpha1=None, strict=True) -> RegularizerSpec:
        return cls("pnorm", alpha1=alpha1, p=p, epsilon=epsilon, strict=strict)

    @classmethod
    def exp(cls, beta=DEFAULT_BETA, alpha2=None, strict=True) -> RegularizerSpec:
        return cls("exp", alpha2=alpha2, beta=beta, strict=strict)

    @property
    def strictly_convex(self) -> bool:
        return self.kind != "none"

    @property
    def quadratic(self) -> bool:
        """True when the regularizer is (at most) quadratic, so line restrictions are exact quadratics."""
        return self.kind in ("none", "bomze")

    def scaled(self, factor: float) -> RegularizerSpec:
        """Copy with the weight multiplied by ``factor``, bounds unchecked."""
        if self.kind == "pnorm":
            return replace(self, alpha1=self.alpha1 * factor, strict=False)
        if self.kind == "exp":
            return replace(self, alpha2=self.alpha2 * factor, strict=False)
        raise ParameterError(f"regularizer {self.kind!r} has no weight to scale")

    # elementwise pieces; ``terms`` sums to the value
    def terms(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "none":
            return np.zeros_like(x)
        if self.kind == "bomze":
            return 0.5 * x * x
        if self.kind == "pnorm":
            return self.alpha1 * np.power(x + self.epsilon, self.p)
        return self.alpha2 * np.expm1(-self.beta * x)

    def value(self, x) -> float:
        # fsum is correctly rounded, hence exactly invariant under permutations
        return math.fsum(self.terms(x))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "none":
            return np.zeros_like(x)
        if self.kind == "bomze":
            return x.copy()
        if self.kind == "pnorm":
            return self.alpha1 * self.p * np.power(x + self.epsilon, self.p - 1)
        return -self.alpha2 * self.beta * np.exp(-self.beta * x)

    def hessian_diag(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "none":
            return np.zeros_like(x)
        if self.kind == "bomze":
            return np.ones_like(x)
        if self.kind == "pnorm":
            return self.alpha1 * self.p * (self.p - 1) * np.power(x + self.epsilon, self.p - 2)
        return self.alpha2 * self.beta**2 * np.exp(-self.beta * x)

    def hessian_quadform(self, x, d) -> float:
        """d^T Hess(x) d. Non-separable regularizers would override this."""
        d = np.asarray(d, dtype=float)
        return float(np.dot(self.hessian_diag(x) * d, d))

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "pnorm":
            out.update(p=self.p, epsilon=self.epsilon, alpha1=self.alpha1)
        elif self.kind == "exp":
            out.update(beta=self.beta, alpha2=self.alpha2)
        return out

    @classmethod
    def from_json(cls, data: dict) -> RegularizerSpec:
        kind = data.get("kind", "none")
        if kind == "pnorm":
            return cls.pnorm(
                p=data.get("p", DEFAULT_P), epsilon=data.get("epsilon", DEFAULT_EPSILON), alpha1=data.get("alpha1")
            )
        if kind == "exp":
            return cls.exp(beta=data.get("beta", DEFAULT_BETA), alpha2=data.get("alpha2"))
        return cls(kind)

    def label(self) -> str:
        return {"none": "none", "bomze": "Phi_B", "pnorm": "Phi_1", "exp": "Phi_2"}[self.kind]


def phi_value(spec: RegularizerSpec, x) -> float:
    return spec.value(x)


def phi_gradient(spec: RegularizerSpec, x) -> np.ndarray:
    return spec.gradient(x)


def phi_hessian_diag(spec: RegularizerSpec, x) -> np.ndarray:
    return spec.hessian_diag(x)


@dataclass
class ConditionReport:
    c1_min_hessian_entry: float
    c2_max_spectral_norm: float
    c3_max_permutation_deviation: float
    samples: int
    passed: tuple[bool, bool, bool]

    @property
    def ok(self) -> bool:
        return all(self.passed)

    def to_json(self) -> dict:
        return {
            "c1_min_hessian_entry": self.c1_min_hessian_entry,
            "c2_max_spectral_norm": self.c2_max_spectral_norm,
            "c3_max_permutation_deviation": self.c3_max_permutation_deviation,
            "samples": self.samples,
            "passed": {"c1": self.passed[0], "c2": self.passed[1], "c3": self.passed[2]},
        }


def condition_sample_points(n: int, samples: int, rng: np.random.Generator):
    """Yield ``samples`` simplex points: vertices first, then mixed Dirichlet draws.

    A third of the random draws are flat (uniform on the simplex); the rest
    come from sparse Dirichlet laws that put points near the vertices, where
    the curvature of the built-in regularizers peaks.
    """
    n_vertices = min(samples, 1)
    for k in range(n_vertices):
        e = np.zeros(n)
        e[k] = 1.0
        yield e
    concentrations = (1.0, 0.1, 0.01)
    for k in range(samples - n_vertices):
        gamma = concentrations[k % 3]
        x = rng.gamma(gamma, size=n)
        total = x.sum()
        if total == 0.0:
            x = np.zeros(n)
            x[rng.integers(n)] = 1.0
        else:
            x /= total
        yield x


def verify_conditions(spec: RegularizerSpec, n: int, samples: int = 10_000, seed: int = 0) -> ConditionReport:
    """Check convexity, curvature and permutation symmetry at sampled simplex points.

    Valid for the built-in regularizers, whose Hessians are diagonal: the
    smallest diagonal entry decides (C1) and the largest is the spectral norm.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    c1 = math.inf
    c2 = 0.0
    c3 = 0.0
    for x in condition_sample_points(n, samples, rng):
        h = spec.hessian_diag(x)
        c1 = min(c1, float(h.min()))
        c2 = max(c2, float(np.abs(h).max()))
        perm = rng.permutation(n)
        c3 = max(c3, abs(spec.value(x) - spec.value(x[perm])))
    return ConditionReport(c1, c2, c3, samples, (c1 >= 0.0, c2 < 2.0, c3 == 0.0))
