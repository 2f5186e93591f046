import os

import pytest
from hypothesis import settings, strategies as st

from treeinc import _kernels
from treeinc.tree import LabeledTree

settings.register_profile("default", deadline=None, max_examples=150)
settings.register_profile("ci", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def trees(draw, min_nodes=1, max_nodes=8, labels="abc"):
    n = draw(st.integers(min_nodes, max_nodes))
    parents = [-1] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    names = [draw(st.sampled_from(labels)) for _ in range(n)]
    return LabeledTree.from_parents(names, parents)


@st.composite
def unique_leaf_trees(draw, min_nodes=1, max_nodes=8, inner="xy", leaf_pool="abcdefghij"):
    n = draw(st.integers(min_nodes, max_nodes))
    parents = [-1] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    has_kid = {p for p in parents if p >= 0}
    leaf_ids = [v for v in range(n) if v not in has_kid]
    pool = draw(st.permutations(list(leaf_pool)))
    names = [draw(st.sampled_from(inner)) for _ in range(n)]
    for v, lab in zip(leaf_ids, pool):
        names[v] = lab
    return LabeledTree.from_parents(names, parents)


@pytest.fixture(params=_kernels.BACKENDS)
def backend(request):
    old = _kernels.get_backend()
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(old)


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line; the lines are printed again at the end of the run."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else "")
        _VERDICTS.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
