"""Simple undirected graphs, DIMACS ingestion and clique predicates.

Vertex ids are 0-based everywhere inside the package; DIMACS and JSON files
use 1-based ids and are translated at the boundary.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

JSON_SCHEMA_VERSION = 1


class DimacsError(ValueError):
    """Malformed DIMACS clq input."""


class Graph:
    """Immutable simple undirected graph.

    The adjacency matrix is held as a read-only boolean array; adjacency rows
    are also available as Python integer bitsets for the combinatorial
    routines.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), name: str | None = None):
        if n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={n}")
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            adj[i, j] = adj[j, i] = True
        self._init(adj, name)

    def _init(self, adj: np.ndarray, name: str | None) -> None:
        adj.setflags(write=False)
        self.adj = adj
        self.n = adj.shape[0]
        self.edge_count = int(adj.sum()) // 2
        self.name = name

    @classmethod
    def from_adjacency(cls, matrix, name: str | None = None) -> Graph:
        adj = np.array(matrix, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        if adj.diagonal().any():
            raise ValueError("adjacency matrix must have a zero diagonal")
        g = cls.__new__(cls)
        g._init(adj, name)
        return g

    @cached_property
    def rows(self) -> tuple[int, ...]:
        """Adjacency rows as integer bitsets (bit j of rows[i] set iff i~j)."""
        out = []
        for row in self.adj:
            packed = np.packbits(row, bitorder="little")
            out.append(int.from_bytes(packed.tobytes(), "little"))
        return tuple(out)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adj.sum(axis=1)
        d.setflags(write=False)
        return d

    @cached_property
    def matrix(self) -> np.ndarray:
        """Adjacency as a read-only float64 matrix, for matrix-vector work."""
        a = self.adj.astype(np.float64)
        a.setflags(write=False)
        return a

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i, j])

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adj[i])

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adj, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x

    def to_dimacs(self) -> str:
        buf = io.StringIO()
        if self.name:
            buf.write(f"c {self.name}\n")
        buf.write(f"p edge {self.n} {self.edge_count}\n")
        for i, j in self.edges():
            buf.write(f"e {i + 1} {j + 1}\n")
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "schema_version": JSON_SCHEMA_VERSION,
            "name": self.name,
            "n": self.n,
            "index_base": 1,
            "edges": [[i + 1, j + 1] for i, j in self.edges()],
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, self.edge_count, self.rows))

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"Graph({label}n={self.n}, edges={self.edge_count})"


def parse_dimacs(text, name: str | None = None) -> Graph:
    """Parse DIMACS clq text (str, bytes or a binary/text stream)."""
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise DimacsError(f"DIMACS input is not ASCII: {exc}") from None

    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: duplicate 'p' line")
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: expected 'p edge <n> <m>', got {line!r}")
            n = _int_token(tokens[2], lineno)
            _int_token(tokens[3], lineno)
            if n < 1:
                raise DimacsError(f"line {lineno}: vertex count must be positive")
        elif tag == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge line before 'p' line")
            if len(tokens) != 3:
                raise DimacsError(f"line {lineno}: expected 'e <i> <j>', got {line!r}")
            i, j = _int_token(tokens[1], lineno), _int_token(tokens[2], lineno)
            for v in (i, j):
                if not 1 <= v <= n:
                    raise DimacsError(f"line {lineno}: vertex {v} outside [1, {n}]")
            if i == j:
                raise DimacsError(f"line {lineno}: self-loop on vertex {i}")
            edges.append((i - 1, j - 1))
        else:
            raise DimacsError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise DimacsError("missing 'p edge <n> <m>' line")

    adj = np.zeros((n, n), dtype=bool)
    if edges:
        e = np.asarray(edges)
        adj[e[:, 0], e[:, 1]] = True
        adj[e[:, 1], e[:, 0]] = True
    return Graph.from_adjacency(adj, name=name)


def _int_token(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DimacsError(f"line {lineno}: non-integer token {token!r}") from None


def graph_from_json(data: dict | str, name: str | None = None) -> Graph:
    """Build a graph from the adjacency-list JSON fixture schema.

    Schema: ``{"n": int, "edges": [[i, j], ...], "index_base": 1}`` with
    optional ``"name"`` and ``"schema_version"``. ``index_base`` defaults to 1.
    """
    if isinstance(data, str):
        data = json.loads(data)
    base = int(data.get("index_base", 1))
    n = int(data["n"])
    edges = [(int(i) - base, int(j) - base) for i, j in data.get("edges", [])]
    return Graph(n, edges, name=name or data.get("name"))


def read_graph(path) -> Graph:
    path = Path(path)
    name = path.name
    for suffix in (".clq", ".json", ".txt", ".col"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    if path.suffix == ".json":
        return graph_from_json(path.read_text(), name=name)
    return parse_dimacs(path.read_bytes(), name=name)


@dataclass(frozen=True)
class Clique:
    """Sorted 0-based vertex tuple; ``maximal`` is None when not yet known."""

    vertices: tuple[int, ...]
    maximal: bool | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    def one_based(self) -> list[int]:
        return [v + 1 for v in self.vertices]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def make_clique(g: Graph, vertices: Iterable[int], check_maximal: bool = True) -> Clique:
    """Validate ``vertices`` as a clique of ``g`` and wrap it."""
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if not is_clique(g, vs):
        raise ValueError(f"vertices {[v + 1 for v in vs]} do not form a clique")
    c = Clique(vs)
    if check_maximal:
        c = Clique(vs, is_maximal_clique(g, c))
    return c


def _check_ids(g: Graph, vertices) -> None:
    for v in vertices:
        if not 0 <= v < g.n:
            raise IndexError(f"vertex id {v} out of range for n={g.n}")


def is_clique(g: Graph, vertices) -> bool:
    vs = list(vertices)
    if not vs:
        raise ValueError("vertex set must be nonempty")
    _check_ids(g, vs)
    vs = sorted(set(vs))
    sub = g.adj[np.ix_(vs, vs)]
    return bool(sub.sum() == len(vs) * (len(vs) - 1))


def is_maximal_clique(g: Graph, c) -> bool:
    vs = list(c.vertices if isinstance(c, Clique) else c)
    if not is_clique(g, vs):
        raise ValueError("input is not a clique")
    common = g.adj[vs].all(axis=0)
    return not common.any()


def characteristic_vector(g: Graph, c) -> np.ndarray:
    vs = list(c.vertices if isinstance(c, Clique) else c)
    if not is_clique(g, vs):
        raise ValueError("input is not a clique")
    x = np.zeros(g.n)
    x[vs] = 1.0 / len(set(vs))
    return x


def check_simplex(x, tol: float = 1e-12) -> np.ndarray:
    """Return ``x`` as a float array, raising if it is not a point of the simplex."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("simplex vector must be a nonempty 1-d array")
    slack = max(tol, x.size * np.finfo(float).eps)
    if np.any(x < 0) or np.any(x > 1 + slack) or abs(x.sum() - 1.0) > slack:
        raise ValueError(f"vector is not on the simplex (min={x.min():.3g}, sum-1={x.sum() - 1:.3g})")
    return x


def support(x, tol: float = 0.0) -> list[int]:
    return np.flatnonzero(np.asarray(x) > tol).tolist()


class DegreeStats(NamedTuple):
    median: float
    iqr: float


def degree_stats(g: Graph, subset=None) -> DegreeStats:
    """Median and interquartile range of vertex degrees.

    Quartiles use the midpoint ("hazen") plotting positions, the convention of
    MATLAB's ``prctile``/``iqr``.
    """
    if subset is None:
        d = g.degrees
    else:
        subset = list(subset)
        if not subset:
            raise ValueError("subset must be nonempty")
        _check_ids(g, subset)
        d = g.degrees[subset]
    if d.size == 0:
        raise ValueError("empty graph")
    q1, med, q3 = np.percentile(d, [25, 50, 75], method="hazen")
    return DegreeStats(float(med), float(q3 - q1))


def figure1_graph() -> Graph:
    """Five-vertex graph with maximal cliques {1,2}, {1,3,4}, {2,5}, {3,4,5} (1-based)."""
    edges = [(1, 2), (1, 3), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
    return Graph(5, [(i - 1, j - 1) for i, j in edges], name="figure1")


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2), name=f"K{n}")


def empty_graph(n: int) -> Graph:
    return Graph(n, (), name=f"empty{n}")


def hamming_graph(bits: int, distance: int) -> Graph:
    """Words of ``bits`` bits, adjacent iff their Hamming distance is >= ``distance``."""
    words = np.arange(1 << bits)
    xor = words[:, None] ^ words[None, :]
    popcount = np.zeros_like(xor)
    for b in range(bits):
        popcount += (xor >> b) & 1
    return Graph.from_adjacency(popcount >= distance, name=f"hamming{bits}-{distance}")


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_adjacency(upper | upper.T, name=f"gnp{n}_{p}")
