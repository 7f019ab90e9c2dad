"""Exact ground truth for small graphs: maximal cliques, omega, and the Motzkin-Straus value."""

from __future__ import annotations

import time

from .graph import Clique, Graph

ENUMERATION_LIMIT = 64


class BudgetExceeded(RuntimeError):
    """Exact search ran out of time; ``best`` holds the largest clique found."""

    def __init__(self, best: Clique):
        super().__init__(f"time budget exceeded; best clique found has size {best.size}")
        self.best = best


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def enumerate_maximal_cliques(g: Graph) -> list[Clique]:
    """All maximal cliques, each once, sorted lexicographically.

    Bron-Kerbosch with the pivot maximizing |P & N(u)| over u in P | X.
    """
    rows = g.rows
    found: list[tuple[int, ...]] = []

    def expand(r: list[int], p: int, x: int) -> None:
        if not p:
            if not x:
                found.append(tuple(sorted(r)))
            return
        pivot, best = -1, -1
        for u in _bits(p | x):
            c = (p & rows[u]).bit_count()
            if c > best:
                pivot, best = u, c
        for v in _bits(p & ~rows[pivot]):
            bit = 1 << v
            r.append(v)
            expand(r, p & rows[v], x & rows[v])
            r.pop()
            p &= ~bit
            x |= bit

    expand([], (1 << g.n) - 1, 0)
    found.sort()
    return [Clique(c, True) for c in found]


def all_cliques(g: Graph) -> list[Clique]:
    """Every nonempty clique (exponential; for tiny test graphs only)."""
    rows = g.rows
    out: list[tuple[int, ...]] = []

    def grow(r: list[int], cand: int) -> None:
        for v in _bits(cand):
            r.append(v)
            out.append(tuple(r))
            grow(r, cand & rows[v] & ~((1 << (v + 1)) - 1))
            r.pop()

    grow([], (1 << g.n) - 1)
    out.sort()
    maximal = {c.vertices for c in enumerate_maximal_cliques(g)}
    return [Clique(c, c in maximal) for c in out]


def max_clique_exact(g: Graph, time_budget: float | None = None) -> tuple[Clique, int]:
    """A maximum clique and omega(G).

    Up to ``ENUMERATION_LIMIT`` vertices the answer comes from full
    enumeration and ties are broken lexicographically. Larger graphs use a
    bitset branch and bound with a greedy-coloring bound; there the returned
    clique is some maximum clique, and :class:`BudgetExceeded` is raised when
    ``time_budget`` seconds elapse first.
    """
    if g.n <= ENUMERATION_LIMIT:
        cliques = enumerate_maximal_cliques(g)
        omega = max(c.size for c in cliques)
        best = min(c.vertices for c in cliques if c.size == omega)
        return Clique(best, True), omega
    best = _branch_and_bound(g, time_budget)
    return best, best.size


def _branch_and_bound(g: Graph, time_budget: float | None) -> Clique:
    deadline = None if time_budget is None else time.monotonic() + time_budget
    # relabel so that bit order is by non-increasing degree
    order = sorted(range(g.n), key=lambda v: (-int(g.degrees[v]), v))
    pos = {v: k for k, v in enumerate(order)}
    rows = []
    for v in order:
        mask = 0
        for u in _bits(g.rows[v]):
            mask |= 1 << pos[u]
        rows.append(mask)

    best: list[int] = []
    # greedy start: repeatedly take the lowest (highest-degree) candidate
    cand = (1 << g.n) - 1
    while cand:
        v = (cand & -cand).bit_length() - 1
        best.append(v)
        cand &= rows[v]
    counter = 0

    def color_sort(p: int) -> list[tuple[int, int]]:
        out = []
        uncolored = p
        color = 0
        while uncolored:
            color += 1
            q = uncolored
            while q:
                v = (q & -q).bit_length() - 1
                bit = 1 << v
                uncolored &= ~bit
                q &= ~bit & ~rows[v]
                out.append((v, color))
        return out

    def expand(r: list[int], p: int) -> None:
        nonlocal best, counter
        counter += 1
        if deadline is not None and counter % 256 == 0 and time.monotonic() > deadline:
            raise _Stop
        for v, color in reversed(color_sort(p)):
            if len(r) + color <= len(best):
                return
            r.append(v)
            newp = p & rows[v]
            if newp:
                expand(r, newp)
            elif len(r) > len(best):
                best = list(r)
            r.pop()
            p &= ~(1 << v)

    try:
        expand([], (1 << g.n) - 1)
    except _Stop:
        raise BudgetExceeded(Clique(tuple(sorted(order[k] for k in best)), None)) from None
    return Clique(tuple(sorted(order[k] for k in best)), True)


class _Stop(Exception):
    pass


def motzkin_straus_value(omega: int) -> float:
    """Optimal value 1 - 1/omega of max x^T A x over the simplex."""
    if omega < 1:
        raise ValueError(f"omega must be >= 1, got {omega}")
    return 1.0 - 1.0 / omega
