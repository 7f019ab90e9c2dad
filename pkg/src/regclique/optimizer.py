"""Frank-Wolfe local maximization on the simplex and the multistart driver."""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import Clique, Graph, check_simplex
from .optimality import certify_point, extract_clique
from .regularizer import RegularizerSpec
from .tolerances import TOL

SCHEMA_VERSION = 1
ARMIJO_C = 1e-4
STEP_FLOOR = 1e-12
RESYNC_EVERY = 64
STATUSES = ("converged", "iter_limit", "escaped_then_converged")


@dataclass(frozen=True)
class SolveOptions:
    max_iters: int = 10_000
    fw_gap_tol: float = TOL.fw_gap
    starts: int = 100
    seed: int = 0
    parallel: bool = False
    escape_saddles: bool = True
    max_escapes: int = 5
    away_steps: bool = True
    workers: int | None = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.fw_gap_tol > 0:
            raise ValueError("fw_gap_tol must be positive")
        if self.starts < 1:
            raise ValueError("starts must be >= 1")


@dataclass
class TrialResult:
    x_final: np.ndarray = field(repr=False)
    f_final: float
    fw_gap: float
    iters: int
    status: str
    clique: Clique | None
    is_certified_local_max: bool
    wall_time: float = 0.0
    cpu_time: float = 0.0
    escapes: int = 0
    reason: str = ""

    def to_json(self, include_timing: bool = True) -> dict:
        out = {
            "f_final": self.f_final,
            "fw_gap": self.fw_gap,
            "iters": self.iters,
            "status": self.status,
            "escapes": self.escapes,
            "clique_size": None if self.clique is None else self.clique.size,
            "clique": None if self.clique is None else self.clique.one_based(),
            "certified": self.is_certified_local_max,
            "reason": self.reason,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
            out["cpu_time"] = self.cpu_time
        return out


@dataclass
class RunReport:
    instance: str
    regularizer: RegularizerSpec
    max: int | None
    mean: float | None
    std: float | None
    cpu_time_mean: float
    trials: list[TrialResult]
    omitted_count: int
    seed: int = 0

    @classmethod
    def from_trials(cls, instance: str, spec: RegularizerSpec, trials: list[TrialResult], seed: int = 0):
        sizes = [t.clique.size for t in trials if t.is_certified_local_max and t.clique is not None]
        cpu = float(np.mean([t.cpu_time for t in trials])) if trials else 0.0
        if sizes:
            # sample standard deviation, as MATLAB's std
            std = float(np.std(sizes, ddof=1)) if len(sizes) > 1 else 0.0
            return cls(instance, spec, max(sizes), float(np.mean(sizes)), std, cpu, trials, len(trials) - len(sizes), seed)
        return cls(instance, spec, None, None, None, cpu, trials, len(trials), seed)

    def to_json(self, include_timing: bool = True, include_trials: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "instance": self.instance,
            "regularizer": self.regularizer.to_json(),
            "seed": self.seed,
            "starts": len(self.trials),
            "max": self.max,
            "mean": self.mean,
            "std": self.std,
            "omitted_count": self.omitted_count,
        }
        if include_timing:
            out["cpu_time_mean"] = self.cpu_time_mean
        if include_trials:
            out["trials"] = [t.to_json(include_timing) for t in self.trials]
        return out

    def csv_row(self, include_timing: bool = True) -> list[str]:
        """instance, max, mean, std, cpu_time (the layout of the results table)."""
        return [
            self.instance,
            _fmt(self.max),
            _fmt(self.mean, 2),
            _fmt(self.std, 2),
            _fmt(self.cpu_time_mean if include_timing else None, 2),
        ]

    def to_csv(self, include_timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance", "max", "mean", "std", "cpu_time"])
        w.writerow(self.csv_row(include_timing))
        return buf.getvalue()


def _fmt(v, digits=None) -> str:
    if v is None:
        return ""
    if digits is None:
        return str(v)
    return f"{v:.{digits}f}"


def sample_simplex(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point of the simplex (flat Dirichlet via normalized exponentials)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e = rng.standard_exponential(n)
    return e / e.sum()


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index``; depends only on (seed, index)."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])


class _Line:
    """Restriction of f to x + t d, with the quadratic part in closed form."""

    def __init__(self, spec: RegularizerSpec, x, d, xax: float, xad: float, dad: float):
        self.spec = spec
        self.x = x
        self.d = d
        self.xax = xax
        self.xad = xad
        self.dad = dad

    def __call__(self, t: float) -> float:
        y = self.x + t * self.d
        np.maximum(y, 0.0, out=y)
        return self.xax + 2 * t * self.xad + t * t * self.dad + float(np.sum(self.spec.terms(y)))


def _step_length(line: _Line, slope: float, t_max: float) -> float:
    spec = line.spec
    if spec.quadratic:
        curv = line.dad + (0.5 * float(line.d @ line.d) if spec.kind == "bomze" else 0.0)
        if curv < 0:
            return min(t_max, max(0.0, -slope / (2 * curv)))
        return t_max
    f0 = line(0.0)
    # first trial: maximizer of the second-order model, if it is concave
    curv = line.dad + 0.5 * float(spec.hessian_diag(line.x) @ (line.d * line.d))
    t = t_max if curv >= 0 else min(t_max, -slope / (2 * curv))
    while t > STEP_FLOOR:
        if line(t) >= f0 + ARMIJO_C * t * slope:
            return t
        t *= 0.5
    return STEP_FLOOR


def line_search(g: Graph, spec: RegularizerSpec, x, s, grad_dot_dir: float, t_max: float = 1.0) -> float:
    """Step t in [0, t_max] along d = s - x.

    Exact maximizer of the 1-D quadratic for ``none``/``bomze``; otherwise
    Armijo backtracking f(x + t d) >= f(x) + c t grad_dot_dir, halving from
    ``t_max`` down to a floor of 1e-12.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(s, dtype=float) - x
    ax = g.matvec(x)
    ad = g.matvec(d)
    line = _Line(spec, x, d, float(x @ ax), float(x @ ad), float(d @ ad))
    return _step_length(line, grad_dot_dir, t_max)


@dataclass
class _FWState:
    x: np.ndarray
    ax: np.ndarray
    f: float
    iters: int = 0
    gap: float = math.inf
    converged: bool = False


def _resync(g: Graph, spec: RegularizerSpec, st: _FWState) -> None:
    np.maximum(st.x, 0.0, out=st.x)
    s = st.x.sum()
    if abs(s - 1.0) > TOL.simplex_sum:
        st.x /= s
    st.ax = g.matvec(st.x)
    st.f = float(st.x @ st.ax) + float(np.sum(spec.terms(st.x)))


def _fw_run(g: Graph, spec: RegularizerSpec, st: _FWState, opts: SolveOptions, budget: int, monitor=None) -> None:
    """Frank-Wolfe iterations (with optional away steps) until the gap closes or ``budget`` runs out."""
    a = g.matrix
    st.converged = False
    for _ in range(budget):
        x, ax = st.x, st.ax
        grad = 2.0 * ax + spec.gradient(x)
        gx = float(grad @ x)
        i = int(np.argmax(grad))
        fw_gap = float(grad[i]) - gx
        away_gap = 0.0
        if opts.away_steps:
            active = np.flatnonzero(x > 0)
            v = int(active[np.argmin(grad[active])])
            away_gap = gx - float(grad[v])
        st.gap = fw_gap
        if max(fw_gap, away_gap) <= opts.fw_gap_tol:
            st.converged = True
            return
        xax = float(x @ ax)
        if fw_gap >= away_gap:
            d = -x.copy()
            d[i] += 1.0
            line = _Line(spec, x, d, xax, float(ax[i]) - xax, xax - 2.0 * float(ax[i]))
            t = _step_length(line, fw_gap, 1.0)
            new_x = (1.0 - t) * x
            new_x[i] += t
            new_ax = (1.0 - t) * ax + t * a[i]
        else:
            xv = float(x[v])
            t_max = xv / (1.0 - xv)
            d = x.copy()
            d[v] -= 1.0
            line = _Line(spec, x, d, xax, xax - float(ax[v]), xax - 2.0 * float(ax[v]))
            t = _step_length(line, away_gap, t_max)
            new_x = (1.0 + t) * x
            new_x[v] -= t
            if t >= t_max:
                new_x[v] = 0.0
            new_ax = (1.0 + t) * ax - t * a[v]
        np.maximum(new_x, 0.0, out=new_x)
        new_f = float(new_x @ new_ax) + float(np.sum(spec.terms(new_x)))
        st.iters += 1
        if new_f < st.f - TOL.ascent:
            # numerical stall: rounding ate the step
            _resync(g, spec, st)
            return
        st.x, st.ax, st.f = new_x, new_ax, new_f
        if st.iters % RESYNC_EVERY == 0:
            _resync(g, spec, st)
        if monitor is not None:
            monitor(st.x, st.f)
    _resync(g, spec, st)


def _escape(g: Graph, spec: RegularizerSpec, st: _FWState, d: np.ndarray) -> bool:
    """Move along ascent direction ``d`` with the longest feasible step, halved until f does not drop."""
    neg = d < 0
    if not neg.any():
        return False
    t = float(np.min(st.x[neg] / -d[neg]))
    f0 = st.f
    while t > STEP_FLOOR:
        y = st.x + t * d
        y[np.abs(y) < 1e-15] = 0.0
        np.maximum(y, 0.0, out=y)
        y /= y.sum()
        ay = g.matvec(y)
        fy = float(y @ ay) + float(np.sum(spec.terms(y)))
        if fy >= f0 - TOL.ascent and not np.array_equal(y, st.x):
            st.x, st.ax, st.f = y, ay, fy
            return True
        t *= 0.5
    return False


def frank_wolfe(g: Graph, spec: RegularizerSpec, x0, opts: SolveOptions = SolveOptions(), monitor=None) -> TrialResult:
    """Local maximization of x^T A x + Phi(x) over the simplex from ``x0``.

    Toward steps x + t (e_i - x) with i = argmax of the gradient; with
    ``opts.away_steps`` also away steps x + t (x - e_v) from the worst active
    vertex, which let coordinates reach exactly zero. On stopping, the iterate
    is checked by :func:`certify_point`; if it is not a certified local
    maximizer and an ascent direction is known, the iterate is moved along it
    and the iteration resumes (at most ``opts.max_escapes`` times).
    ``monitor(x, f)`` is called after every accepted step.
    """
    wall0, cpu0 = time.perf_counter(), time.process_time()
    try:
        x = check_simplex(x0).copy()
    except ValueError as exc:
        raise ValueError(f"x0 is not on the simplex: {exc}") from None
    if x.shape != (g.n,):
        raise ValueError(f"dimension mismatch: expected ({g.n},), got {x.shape}")
    ax = g.matvec(x)
    st = _FWState(x, ax, float(x @ ax) + float(np.sum(spec.terms(x))))
    escapes = 0
    while True:
        _fw_run(g, spec, st, opts, opts.max_iters - st.iters, monitor)
        cert = certify_point(g, spec, st.x)
        if cert.certified or not opts.escape_saddles or escapes >= opts.max_escapes:
            break
        if cert.ascent_direction is None or st.iters >= opts.max_iters:
            break
        if not _escape(g, spec, st, cert.ascent_direction):
            break
        escapes += 1
        if monitor is not None:
            monitor(st.x, st.f)

    if st.converged:
        status = "escaped_then_converged" if escapes else "converged"
    else:
        status = "iter_limit"
    clique = extract_clique(g, spec, st.x)
    return TrialResult(
        x_final=st.x,
        f_final=st.f,
        fw_gap=st.gap,
        iters=st.iters,
        status=status,
        clique=clique,
        is_certified_local_max=cert.certified,
        wall_time=time.perf_counter() - wall0,
        cpu_time=time.process_time() - cpu0,
        escapes=escapes,
        reason=cert.reason,
    )


def _run_trial(args) -> TrialResult:
    g, spec, opts, index = args
    x0 = sample_simplex(g.n, trial_rng(opts.seed, index))
    return frank_wolfe(g, spec, x0, opts)


def multistart(g: Graph, spec: RegularizerSpec, opts: SolveOptions = SolveOptions(), instance: str | None = None) -> RunReport:
    """Run ``opts.starts`` independent trials from uniform random starts.

    Trial k draws its start from a generator seeded by (seed, k), so the
    report does not depend on whether trials run serially or in parallel.
    """
    jobs = [(g, spec, opts, k) for k in range(opts.starts)]
    if opts.parallel and opts.starts > 1:
        workers = opts.workers or os.cpu_count() or 1
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_run_trial, jobs, chunksize=max(1, opts.starts // (4 * workers))))
    else:
        trials = [_run_trial(job) for job in jobs]
    return RunReport.from_trials(instance or g.name or "graph", spec, trials, opts.seed)
