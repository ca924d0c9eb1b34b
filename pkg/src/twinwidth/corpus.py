"""Deterministic random instance generators for tests and benchmarks."""

from __future__ import annotations

import random

from .trigraph import Trigraph, new_trigraph


def random_tree(n: int, rng: random.Random) -> Trigraph:
    """Random recursive tree: vertex i attaches to a uniform earlier vertex."""
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return new_trigraph(n, edges)


def random_connected_graph(n: int, extra_edges: int, rng: random.Random) -> Trigraph:
    """Random tree plus ``extra_edges`` distinct non-tree edges; the result is
    connected with feedback edge number exactly ``extra_edges``."""
    base = [(rng.randrange(i), i) for i in range(1, n)]
    present = {tuple(sorted(e)) for e in base}
    limit = n * (n - 1) // 2
    if len(present) + extra_edges > limit:
        raise ValueError(f"cannot fit {extra_edges} extra edges on {n} vertices")
    while len(present) < n - 1 + extra_edges:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            present.add((min(u, v), max(u, v)))
    return new_trigraph(n, sorted(present))


def random_with_dangling_trees(
    core_n: int, extra_edges: int, tree_vertices: int, rng: random.Random
) -> Trigraph:
    """A small connected core plus random trees hanging off core vertices."""
    core = random_connected_graph(core_n, extra_edges, rng)
    edges = list(core.black_edges())
    n = core_n
    for _ in range(tree_vertices):
        anchor = rng.randrange(n)
        edges.append((anchor, n))
        n += 1
    return new_trigraph(n, edges)


def cycle_with_trees(cycle_n: int, tree_vertices: int, rng: random.Random) -> Trigraph:
    """A cycle (twin-width 2 once cycle_n >= 5) with random trees attached;
    feedback edge number 1 regardless of the trees.  Attachments extend the
    previous tree vertex half of the time, so deep dangling trees are common.
    """
    edges = [(i, (i + 1) % cycle_n) for i in range(cycle_n)]
    n = cycle_n
    for _ in range(tree_vertices):
        if n > cycle_n and rng.random() < 0.5:
            anchor = n - 1
        else:
            anchor = rng.randrange(n)
        edges.append((anchor, n))
        n += 1
    return new_trigraph(n, edges)
