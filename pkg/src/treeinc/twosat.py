"""2-SAT by strongly connected components of the implication graph.

Literals are signed 1-based variable numbers: ``3`` is x3, ``-3`` is not x3.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TwoSatInstance:
    n_vars: int
    clauses: list[tuple[int, int]] = field(default_factory=list)

    def add(self, a: int, b: int) -> None:
        for lit in (a, b):
            if lit == 0 or abs(lit) > self.n_vars:
                raise ValueError(f"literal {lit} out of range")
        self.clauses.append((a, b))

    def unit(self, a: int) -> None:
        self.add(a, a)


def _node(lit: int) -> int:
    return 2 * (abs(lit) - 1) + (lit < 0)


def _components(n_nodes: int, adj: list[list[int]]) -> list[int]:
    """Tarjan's algorithm, iterative. Components are numbered in reverse
    topological order of the condensation."""
    index = [-1] * n_nodes
    low = [0] * n_nodes
    comp = [-1] * n_nodes
    on_stack = [False] * n_nodes
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for start in range(n_nodes):
        if index[start] >= 0:
            continue
        work = [(start, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            edges = adj[v]
            while i < len(edges):
                w = edges[i]
                i += 1
                if index[w] < 0:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def two_sat_solve(inst: TwoSatInstance) -> list[bool] | None:
    """A satisfying assignment (index i is variable i+1), or None."""
    n_nodes = 2 * inst.n_vars
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for a, b in inst.clauses:
        adj[_node(-a)].append(_node(b))
        adj[_node(-b)].append(_node(a))
    comp = _components(n_nodes, adj)
    out = []
    for i in range(inst.n_vars):
        pos, neg = comp[2 * i], comp[2 * i + 1]
        if pos == neg:
            return None
        # the literal whose component comes later topologically is true
        out.append(pos < neg)
    return out
