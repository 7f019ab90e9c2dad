"""The regularized Motzkin-Straus objective f(x) = x^T A x + Phi(x)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Clique, Graph, is_clique
from .regularizer import RegularizerSpec


@dataclass
class ObjectiveEval:
    value: float
    gradient: np.ndarray
    fw_gap: float = math.nan


def _check_dim(g: Graph, *vectors) -> None:
    for v in vectors:
        if np.shape(v) != (g.n,):
            raise ValueError(f"dimension mismatch: expected ({g.n},), got {np.shape(v)}")


def quadratic_part(g: Graph, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ g.matvec(x))


def f_value(g: Graph, spec: RegularizerSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    _check_dim(g, x)
    return quadratic_part(g, x) + spec.value(x)


def f_eval(g: Graph, spec: RegularizerSpec, x) -> ObjectiveEval:
    x = np.asarray(x, dtype=float)
    _check_dim(g, x)
    ax = g.matvec(x)
    return ObjectiveEval(float(x @ ax) + spec.value(x), 2.0 * ax + spec.gradient(x))


def hessian_quadform(g: Graph, spec: RegularizerSpec, x, d) -> float:
    """d^T (2A + Hess Phi(x)) d."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    _check_dim(g, x, d)
    return 2.0 * float(d @ g.matvec(d)) + spec.hessian_quadform(x, d)


def clique_objective(g: Graph, spec: RegularizerSpec, c) -> float:
    """f at the characteristic vector of clique ``c``, via 1 - 1/|C| + Phi(x(C))."""
    vs = list(c.vertices if isinstance(c, Clique) else c)
    if not is_clique(g, vs):
        raise ValueError("input is not a clique")
    k = len(set(vs))
    x = np.zeros(g.n)
    x[vs] = 1.0 / k
    return 1.0 - 1.0 / k + spec.value(x)
