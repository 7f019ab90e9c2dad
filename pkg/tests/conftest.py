import numpy as np
import pytest

from regclique.graph import complete_graph, figure1_graph
from regclique.regularizer import RegularizerSpec


@pytest.fixture
def fig1():
    return figure1_graph()


@pytest.fixture
def k3():
    return complete_graph(3)


def builtin_specs():
    return [RegularizerSpec.bomze(), RegularizerSpec.pnorm(), RegularizerSpec.exp()]


def all_specs():
    return [RegularizerSpec.none()] + builtin_specs()


def random_simplex(rng, n):
    x = rng.standard_exponential(n)
    return x / x.sum()


def central_diff(fun, x, h=1e-6):
    """Central differences of fun along each axis; for vector-valued fun, entry i of the i-th difference."""
    out = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        diff = (np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2 * h)
        out[i] = diff[i] if diff.ndim else diff
    return out


ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""

    def record(number, title, ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
