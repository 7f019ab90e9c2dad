"""Optimality certificates on the simplex, purification, and clique extraction.

First-order conditions are checked on the edge generators e_i - e_j (with
x_j > 0), whose nonnegative span is the whole cone of feasible directions.
Second-order certification is done only at characteristic vectors, where
the critical cone reduces to directions supported on the clique.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .graph import Clique, Graph, characteristic_vector, is_clique, is_maximal_clique
from .objective import hessian_quadform
from .oracle import enumerate_maximal_cliques
from .regularizer import RegularizerSpec
from .tolerances import TOL

# graphs up to this size get oracle clique directions in disprove_local_max
DISPROVE_ORACLE_LIMIT = 32


@dataclass
class OptimalityReport:
    first_order_ok: bool
    worst_generator_slope: float
    tight_generators: list[tuple[int, int]]
    second_order_ok: bool | None = None
    ascent_direction: np.ndarray | None = field(default=None, repr=False)
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.first_order_ok and self.second_order_ok is True

    def to_json(self) -> dict:
        if self.second_order_ok is None:
            second = "not-checked"
        else:
            second = self.second_order_ok
        out = {
            "first_order_ok": self.first_order_ok,
            "worst_generator_slope": self.worst_generator_slope,
            "tight_generators": [[i + 1, j + 1] for i, j in self.tight_generators],
            "second_order_ok": second,
            "certified": self.certified,
            "ascent_direction": None if self.ascent_direction is None else self.ascent_direction.tolist(),
        }
        if self.note:
            out["note"] = self.note
        return out


def gradient(g: Graph, spec: RegularizerSpec, x: np.ndarray) -> np.ndarray:
    return 2.0 * g.matvec(x) + spec.gradient(x)


def generator_slopes(grad: np.ndarray, x: np.ndarray):
    """Slopes grad_i - grad_j for all i != j with x_j > 0, as (matrix, active index array)."""
    active = np.flatnonzero(x > 0)
    slopes = grad[:, None] - grad[active][None, :]
    slopes[active, np.arange(active.size)] = -np.inf
    return slopes, active


def first_order_check(g: Graph, spec: RegularizerSpec, x, tol: float = TOL.tight) -> OptimalityReport:
    x = np.asarray(x, dtype=float)
    grad = gradient(g, spec, x)
    slopes, active = generator_slopes(grad, x)
    if slopes.shape[0] < 2:
        return OptimalityReport(True, 0.0, [])
    worst = float(slopes.max())
    ii, kk = np.nonzero(np.abs(slopes) <= tol)
    tight = sorted(zip(ii.tolist(), active[kk].tolist()))
    report = OptimalityReport(worst <= tol, worst, tight)
    if not report.first_order_ok:
        i, k = np.unravel_index(np.argmax(slopes), slopes.shape)
        d = np.zeros_like(x)
        d[i] += 1.0
        d[active[k]] -= 1.0
        report.ascent_direction = d
    return report


def _projected_curvature(g: Graph, spec: RegularizerSpec, x: np.ndarray, vertices) -> float:
    """Largest eigenvalue of 2A + Hess Phi restricted to {d : supp d in vertices, sum d = 0}."""
    vs = list(vertices)
    if len(vs) < 2:
        return -np.inf
    h = 2.0 * g.matrix[np.ix_(vs, vs)] + np.diag(spec.hessian_diag(x)[vs])
    z = null_space(np.ones((1, len(vs))))
    return float(np.linalg.eigvalsh(z.T @ h @ z).max())


def certify_characteristic_vector(
    g: Graph, spec: RegularizerSpec, c, tol: float = TOL.tight
) -> OptimalityReport:
    """Second-order sufficient check at x(C) for a strictly convex regularizer."""
    if not spec.strictly_convex:
        raise ValueError(
            "certification needs a strictly convex regularizer; use disprove_local_max for kind 'none'"
        )
    vs = list(c.vertices if isinstance(c, Clique) else c)
    if not is_clique(g, vs):
        raise ValueError("input is not a clique")
    members = set(vs)
    x = characteristic_vector(g, vs)
    report = first_order_check(g, spec, x, tol)
    if not report.first_order_ok:
        report.second_order_ok = False
        report.note = "first-order condition fails"
        return report
    outside = [(i, j) for i, j in report.tight_generators if i not in members]
    if outside:
        report.second_order_ok = False
        report.note = f"critical generator leaves the clique: {outside[0][0] + 1} <- {outside[0][1] + 1}"
        return report
    curvature = _projected_curvature(g, spec, x, vs)
    report.second_order_ok = curvature < -tol
    if not report.second_order_ok:
        report.note = f"projected Hessian not negative definite (max eigenvalue {curvature:.3g})"
    return report


def _is_feasible_direction(x: np.ndarray, d: np.ndarray) -> bool:
    return abs(d.sum()) <= 1e-12 and not np.any(d[x <= 0] < -1e-15)


def disprove_local_max(g: Graph, spec: RegularizerSpec, x, candidate_dirs=None, tol: float = TOL.tight):
    """Search candidate critical directions for positive curvature.

    Default candidates are the tight generators at ``x`` plus, on graphs of
    at most ``DISPROVE_ORACLE_LIMIT`` vertices, x(C) - x for every maximal
    clique C. Returns the direction with the largest quadratic form (ties go
    to the longer direction), or None when no witness is found.
    """
    x = np.asarray(x, dtype=float)
    grad = gradient(g, spec, x)
    if candidate_dirs is None:
        candidate_dirs = []
        for i, j in first_order_check(g, spec, x, tol).tight_generators:
            d = np.zeros(g.n)
            d[i], d[j] = 1.0, -1.0
            candidate_dirs.append(d)
        if g.n <= DISPROVE_ORACLE_LIMIT:
            for c in enumerate_maximal_cliques(g):
                candidate_dirs.append(characteristic_vector(g, c.vertices) - x)
    best, best_key = None, None
    for d in candidate_dirs:
        d = np.asarray(d, dtype=float)
        if not d.any() or not _is_feasible_direction(x, d):
            continue
        if abs(float(grad @ d)) > tol:
            continue
        q = hessian_quadform(g, spec, x, d)
        if q <= tol:
            continue
        key = (round(q, 12), float(d @ d))
        if best_key is None or key > best_key:
            best, best_key = d, key
    return best


def _first_nonadjacent_pair(g: Graph, in_support: np.ndarray, start: int):
    for i in range(start, g.n):
        if not in_support[i]:
            continue
        cand = in_support & ~g.adj[i]
        cand[: i + 1] = False
        if cand.any():
            return i, int(np.argmax(cand))
    return None


def _pair_endpoints(spec: RegularizerSpec, x: np.ndarray, ax: np.ndarray, xax: float, i: int, j: int):
    """Objective at both ends of x + t(e_i - e_j), t in [-x_i, x_j], for non-adjacent i, j."""
    out = []
    for t in (-x[i], x[j]):
        y = x.copy()
        y[i] += t
        y[j] -= t
        if t < 0:
            y[i] = 0.0
        else:
            y[j] = 0.0
        out.append(xax + 2.0 * t * (ax[i] - ax[j]) + float(np.sum(spec.terms(y))))
    return out


def purify(g: Graph, spec: RegularizerSpec, x, trace: list | None = None) -> np.ndarray:
    """Shrink the support of ``x`` to a clique without decreasing f.

    Repeatedly takes the lexicographically first non-adjacent pair (i, j) in
    the support and moves all mass of one onto the other, whichever end of
    the segment has the larger objective (ties zero out j). Along such a
    segment f is convex, so the better end is never worse than ``x``. When
    ``trace`` is a list, (support size, f) is appended before each move and
    after the last one.
    """
    x = np.array(x, dtype=float)
    in_support = x > 0
    ax = g.matvec(x)
    xax = float(x @ ax)
    start = 0
    while True:
        pair = _first_nonadjacent_pair(g, in_support, start)
        if trace is not None:
            trace.append((int(in_support.sum()), xax + float(np.sum(spec.terms(x)))))
        if pair is None:
            return x
        i, j = pair
        start = i
        f_zero_i, f_zero_j = _pair_endpoints(spec, x, ax, xax, i, j)
        if f_zero_j >= f_zero_i:
            keep, drop = i, j
        else:
            keep, drop = j, i
        moved = x[drop]
        x[keep] += moved
        x[drop] = 0.0
        in_support[drop] = False
        ax += moved * (g.matrix[keep] - g.matrix[drop])
        xax = float(x @ ax)


def greedy_extend(g: Graph, vertices) -> tuple[int, ...]:
    """Extend a clique to a maximal one, adding vertices in ascending id order."""
    vs = sorted(vertices)
    common = g.adj[vs].all(axis=0)
    common[vs] = False
    for v in range(g.n):
        if common[v]:
            vs.append(v)
            common &= g.adj[v]
    return tuple(sorted(vs))


def extract_clique(g: Graph, spec: RegularizerSpec, x, support_tol: float = TOL.support) -> Clique:
    """Purify, threshold the support, and greedily extend to a maximal clique."""
    y = purify(g, spec, x)
    vs = np.flatnonzero(y > support_tol).tolist()
    if not vs:
        raise ValueError("empty support after thresholding")
    return Clique(greedy_extend(g, vs), True)


@dataclass
class PointCertificate:
    """Classification of a final iterate."""

    certified: bool
    reason: str
    clique: Clique | None = None
    report: OptimalityReport | None = None
    ascent_direction: np.ndarray | None = field(default=None, repr=False)


def certify_point(
    g: Graph,
    spec: RegularizerSpec,
    x,
    tol: float = TOL.tight,
    support_tol: float = TOL.support,
    distance_tol: float = TOL.converged_distance,
) -> PointCertificate:
    """Decide whether ``x`` is (numerically) a local maximizer x(C).

    ``x`` is accepted when its thresholded support C is a maximal clique,
    ``x`` lies within ``distance_tol`` of x(C) in the max-norm, and x(C)
    passes :func:`certify_characteristic_vector` (or, for ``none``, passes the
    first-order check with no disproving direction found). Otherwise an
    ascent direction is proposed when one is known.
    """
    x = np.asarray(x, dtype=float)
    vs = np.flatnonzero(x > support_tol).tolist()
    if not is_clique(g, vs):
        in_support = x > support_tol
        i, j = _first_nonadjacent_pair(g, in_support, 0)
        y = np.where(in_support, x, 0.0)
        ax = g.matvec(y)
        f_zero_i, f_zero_j = _pair_endpoints(spec, y, ax, float(y @ ax), i, j)
        d = np.zeros(g.n)
        if f_zero_j >= f_zero_i:
            d[i], d[j] = 1.0, -1.0
        else:
            d[i], d[j] = -1.0, 1.0
        return PointCertificate(False, "support is not a clique", ascent_direction=d)

    clique = Clique(tuple(vs), is_maximal_clique(g, vs))
    xc = characteristic_vector(g, vs)
    if not clique.maximal:
        v = int(np.argmax(g.adj[vs].all(axis=0)))
        d = characteristic_vector(g, vs + [v]) - x
        return PointCertificate(False, "clique is not maximal", clique, ascent_direction=d)

    if spec.strictly_convex:
        report = certify_characteristic_vector(g, spec, clique, tol)
    else:
        report = first_order_check(g, spec, xc, tol)
        if report.first_order_ok:
            witness = disprove_local_max(g, spec, xc, tol=tol)
            if witness is not None:
                report.second_order_ok = False
                report.ascent_direction = witness
                report.note = "positive curvature along a critical direction"
    if np.max(np.abs(x - xc)) > distance_tol:
        return PointCertificate(False, "iterate not converged to x(C)", clique, report, report.ascent_direction)
    if spec.strictly_convex:
        ok = report.certified
    else:
        ok = report.first_order_ok and report.second_order_ok is not False
    reason = "certified" if ok else (report.note or "certification failed")
    return PointCertificate(ok, reason, clique, report, report.ascent_direction)
