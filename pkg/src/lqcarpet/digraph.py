"""Small directed-graph helpers: Tarjan SCC on integer-indexed nodes."""

from __future__ import annotations

from typing import Sequence


def strongly_connected_components(n: int, successors: Sequence[Sequence[int]]):
    """Tarjan's algorithm, iterative to avoid recursion limits.

    Nodes are 0..n-1; successors[i] lists out-neighbours of i.
    Returns a list of components (each a sorted list of nodes) in
    reverse topological order of the condensation.
    """
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        # each work item: (node, iterator position into successors)
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pos, len(successors[v])):
                w = successors[v][i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def is_strongly_connected(n: int, successors) -> bool:
    return len(strongly_connected_components(n, successors)) == 1
