"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's optimized code paths:
``contract_oracle`` rebuilds a contraction from scratch by classifying every
third vertex by its color pair, and ``naive_optimal_width`` enumerates every
contraction sequence with no memoization or pruning.
"""

import itertools

import pytest

from twinwidth.trigraph import EdgeColor, Trigraph, is_connected, new_trigraph
from twinwidth.solver import canonical_key


# -- fixed instances -----------------------------------------------------------


def make_fig2():
    """Six-vertex graph contracted at width 2 by the worked example:
    vertices A..F = 0..5, black edges AB, AC, BC, BD, CE, CF, DE, EF."""
    return new_trigraph(6, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (4, 5)])


FIG2_PAIRS = [(4, 5), (0, 1), (2, 3), (8, 6), (7, 9)]  # (E,F),(A,B),(C,D),(CD,EF),(AB,CDEF)


def make_fig3():
    """54-vertex graph with feedback edge number 2: two triangles joined by a
    17-vertex path, with eleven dangling trees of assorted shapes.

    Layout: 0..5 core (A, B, C, D, E, F), 6..22 the path, 23..53 tree
    vertices.  Pruning cuts the trees down to: black stump + half at 0,
    red stump at 3, black stump + half at 6, red stumps at 10, 16, 22, and a
    half stump at 18.
    """
    edges = [(0, 1), (2, 3), (0, 4), (3, 5), (1, 4), (2, 5)]
    edges += [(4, 6)] + [(i, i + 1) for i in range(6, 22)] + [(22, 5)]
    edges += [(0, 23)] + [(23, x) for x in (24, 25, 26, 27, 28)]
    edges += [(0, 29)]
    edges += [(3, 30), (30, 31), (31, 32), (31, 33), (32, 34), (34, 35), (30, 36)]
    edges += [(6, 37), (37, 38), (37, 39), (6, 40)]
    edges += [(10, 41), (10, 42), (42, 43), (43, 44), (44, 45)]
    edges += [(16, 46), (46, 47), (16, 48), (48, 49)]
    edges += [(18, 50)]
    edges += [(22, 51), (51, 52), (52, 53)]
    return new_trigraph(54, edges)


def make_fig3_middle():
    """The trigraph left after all of fig3's dangling trees are cut down."""
    black = [(0, 1), (2, 3), (0, 4), (3, 5), (1, 4), (2, 5)]
    black += [(4, 6)] + [(i, i + 1) for i in range(6, 22)] + [(22, 5)]
    black += [(0, 23), (23, 24), (0, 25)]  # black stump + half at 0
    black += [(3, 26)]  # red stump root at 3
    black += [(6, 28), (28, 29), (6, 30)]  # black stump + half at 6
    black += [(10, 31), (16, 33), (18, 35), (22, 36)]
    red = [(26, 27), (31, 32), (33, 34), (36, 37)]
    return new_trigraph(38, black, red)


def make_fig3_tidy():
    """The trigraph after additionally tidying the long pseudo-path: interior
    stumps are gone and the edges u2..u16 of the path are red."""
    black = [(0, 1), (2, 3), (0, 4), (3, 5), (1, 4), (2, 5)]
    black += [(4, 6), (6, 7), (21, 22), (22, 5)]
    black += [(0, 23), (23, 24), (0, 25)]
    black += [(3, 26)]
    black += [(6, 28), (28, 29), (6, 30)]
    black += [(22, 36)]
    red = [(i, i + 1) for i in range(7, 21)]  # u2..u16 of the 17-path
    red += [(26, 27), (36, 37)]
    verts = sorted(
        set(range(0, 6))
        | set(range(6, 23))
        | {23, 24, 25, 26, 27, 28, 29, 30, 36, 37}
    )
    badj = {v: set() for v in verts}
    radj = {v: set() for v in verts}
    for a, b in black:
        badj[a].add(b)
        badj[b].add(a)
    for a, b in red:
        radj[a].add(b)
        radj[b].add(a)
    return Trigraph._make(verts, badj, radj, max(verts) + 1)


@pytest.fixture
def fig2():
    return make_fig2()


@pytest.fixture
def fig3():
    return make_fig3()


# -- independent oracles ----------------------------------------------------------


def contract_oracle(g: Trigraph, u, v) -> Trigraph:
    """From-scratch contraction: classify each third vertex by its
    (color to u, color to v) pair."""
    verts = [x for x in g.vertices if x not in (u, v)]
    w = g.next_label
    extra_black, extra_red = [], []
    for x in verts:
        cu, cv = g.color(x, u), g.color(x, v)
        if cu is EdgeColor.BLACK and cv is EdgeColor.BLACK:
            extra_black.append((x, w))
        elif cu is not None or cv is not None:
            extra_red.append((x, w))
    keep = set(verts)
    blacks = [e for e in g.black_edges() if e[0] in keep and e[1] in keep]
    reds = [e for e in g.red_edges() if e[0] in keep and e[1] in keep]
    badj = {x: set() for x in verts + [w]}
    radj = {x: set() for x in verts + [w]}
    for a, b in blacks + extra_black:
        badj[a].add(b)
        badj[b].add(a)
    for a, b in reds + extra_red:
        radj[a].add(b)
        radj[b].add(a)
    return Trigraph._make(verts + [w], badj, radj, w + 1)


def naive_optimal_width(g: Trigraph) -> int:
    """Exhaustive minimum width over all contraction sequences; no pruning,
    no memoization, independent of the solver."""

    def rec(cur, running):
        verts = sorted(cur.vertices)
        if len(verts) == 1:
            return running
        best = None
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                child = cur.contract(verts[i], verts[j])
                r = rec(child, max(running, child.max_red_degree()))
                if best is None or r < best:
                    best = r
        return best

    return rec(g, g.max_red_degree())


def all_labeled_graphs(n):
    """Every graph on n labeled vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield new_trigraph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def connected_graphs_up_to_iso(max_n):
    """One representative per isomorphism class of connected graphs."""
    reps = []
    for n in range(1, max_n + 1):
        seen = set()
        for g in all_labeled_graphs(n):
            if not is_connected(g):
                continue
            key = canonical_key(g)
            if key not in seen:
                seen.add(key)
                reps.append(g)
    return reps


def all_trigraphs(n):
    """Every trigraph on n labeled vertices (3 colors per pair)."""
    pairs = list(itertools.combinations(range(n), 2))
    for colors in itertools.product((0, 1, 2), repeat=len(pairs)):
        blacks = [pairs[i] for i in range(len(pairs)) if colors[i] == 1]
        reds = [pairs[i] for i in range(len(pairs)) if colors[i] == 2]
        yield new_trigraph(n, blacks, reds)
