"""Structural analysis: feedback edges, bridges, dangling trees and paths,
stump recognition, and the core/path decomposition bookkeeping.

A stump is the 1- or 2-vertex remnant left behind when a dangling tree is cut
down: a half stump is a pendant vertex behind a black edge, a black (red)
stump is a pendant path of two vertices whose outer edge is black (red).  The
core/path decomposition splits a reduced trigraph into a small core and a set
of dangling pseudo-paths, i.e. degree-2 chains whose vertices may carry
stumps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import Disconnected, PreconditionViolated
from .trigraph import EdgeColor, Trigraph, is_connected


@dataclass(frozen=True)
class FeedbackEdgeSet:
    edges: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def feedback_edge_set(g: Trigraph, ignore_red=False) -> FeedbackEdgeSet:
    """Minimum feedback edge set: all non-tree edges of a BFS spanning forest
    rooted at the smallest label, neighbors visited in label order.

    Works on the black relation; red edges must be absent unless
    ``ignore_red`` is set.
    """
    if not ignore_red and g.has_red():
        raise PreconditionViolated("input has red edges; pass ignore_red=True")
    visited = set()
    tree = set()
    for root in g.vertices:
        if root in visited:
            continue
        visited.add(root)
        queue = [root]
        while queue:
            nxt = []
            for v in queue:
                for u in sorted(g.black_neighbors(v)):
                    if u not in visited:
                        visited.add(u)
                        tree.add((min(u, v), max(u, v)))
                        nxt.append(u)
            queue = nxt
    fes = [e for e in g.black_edges() if e not in tree]
    return FeedbackEdgeSet(tuple(sorted(fes)))


def feedback_edge_number(g: Trigraph, ignore_red=False) -> int:
    return len(feedback_edge_set(g, ignore_red=ignore_red))


def find_bridges(g: Trigraph) -> tuple[tuple[int, int], ...]:
    """All bridges (both edge colors count), by iterative low-link."""
    if not is_connected(g):
        raise Disconnected("bridge computation expects a connected graph")
    preorder = {}
    low = {}
    bridges = []
    counter = 0
    for root in g.vertices:
        if root in preorder:
            continue
        stack = [(root, None, iter(sorted(g.neighbors(root))))]
        preorder[root] = low[root] = counter
        counter += 1
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u not in preorder:
                    preorder[u] = low[u] = counter
                    counter += 1
                    stack.append((u, v, iter(sorted(g.neighbors(u)))))
                    advanced = True
                    break
                elif u != parent:
                    low[v] = min(low[v], preorder[u])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] == preorder[v]:
                        bridges.append((min(p, v), max(p, v)))
    return tuple(sorted(bridges))


def two_core(g: Trigraph) -> frozenset[int]:
    """Vertices surviving repeated removal of degree <= 1 vertices."""
    deg = {v: g.degree(v) for v in g.vertices}
    removed = set()
    stack = [v for v in g.vertices if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v in removed:
            continue
        removed.add(v)
        for u in g.neighbors(v):
            if u not in removed:
                deg[u] -= 1
                if deg[u] <= 1:
                    stack.append(u)
    return frozenset(v for v in g.vertices if v not in removed)


@dataclass(frozen=True)
class DanglingTree:
    bridge: tuple[int, int]  # (core vertex, tree root)
    vertices: frozenset[int]
    all_black: bool


def find_dangling_trees(g: Trigraph) -> tuple[DanglingTree, ...]:
    """Maximal trees hanging off the 2-core, each with its attachment bridge.

    Every peeled component attaches to the core by exactly one edge.  Empty
    when the graph is acyclic (a tree has no proper "rest" to dangle from).
    """
    if not is_connected(g):
        raise Disconnected("dangling-tree detection expects a connected graph")
    core = two_core(g)
    if not core:
        return ()
    outside = [v for v in g.vertices if v not in core]
    seen = set()
    trees = []
    for start in outside:
        if start in seen:
            continue
        comp = []
        attach = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.neighbors(v):
                if u in core:
                    attach.append((u, v))
                elif u not in seen:
                    seen.add(u)
                    stack.append(u)
        assert len(attach) == 1, "peeled component with multiple core edges"
        u, root = attach[0]
        compset = frozenset(comp)
        black = g.color(u, root) is EdgeColor.BLACK and all(
            g.color(a, b) is EdgeColor.BLACK
            for a in comp
            for b in g.neighbors(a)
            if b in compset and a < b
        )
        trees.append(DanglingTree((u, root), compset, black))
    trees.sort(key=lambda t: (t.bridge[0], min(t.vertices)))
    return tuple(trees)


class StumpKind(Enum):
    HALF = "half"
    BLACK = "black"
    RED = "red"


@dataclass(frozen=True)
class Stump:
    kind: StumpKind
    owner: int
    vertices: tuple[int, ...]  # (pendant,) or (inner, outer)


def classify_stumps(g: Trigraph) -> dict[int, tuple[Stump, ...]]:
    """Exhaustive stump classification, owner by owner.

    Two-vertex stumps are claimed first (ascending owner label, then inner
    vertex), then half stumps over the unclaimed pendants, so reported stump
    vertex sets never overlap.
    """
    claimed = set()
    found: dict[int, list[Stump]] = {}
    for u in g.vertices:
        for v in sorted(g.black_neighbors(u)):
            if v in claimed or g.degree(v) != 2:
                continue
            others = [w for w in g.neighbors(v) if w != u]
            if len(others) != 1:
                continue
            w = others[0]
            if w == u or g.degree(w) != 1 or w in claimed:
                continue
            kind = (
                StumpKind.RED if g.color(v, w) is EdgeColor.RED else StumpKind.BLACK
            )
            claimed.update((v, w))
            found.setdefault(u, []).append(Stump(kind, u, (v, w)))
    for u in g.vertices:
        for v in sorted(g.black_neighbors(u)):
            if v in claimed or g.degree(v) != 1:
                continue
            claimed.add(v)
            found.setdefault(u, []).append(Stump(StumpKind.HALF, u, (v,)))
    return {
        u: tuple(sorted(stumps, key=lambda s: s.vertices))
        for u, stumps in sorted(found.items())
    }


def stump_vertices(stumps) -> set[int]:
    out = set()
    for s in stumps:
        out.update(s.vertices)
    return out


def red_stump_count(g: Trigraph) -> int:
    return sum(
        1
        for stumps in classify_stumps(g).values()
        for s in stumps
        if s.kind is StumpKind.RED
    )


def find_dangling_paths(g: Trigraph) -> tuple[tuple[int, ...], ...]:
    """Maximal runs of degree-2 vertices between vertices of other degree.

    Each run is reported once, oriented away from its smaller-labeled anchor.
    Components that are pure cycles (everything degree 2) yield nothing.
    """
    used = set()
    paths = []
    anchors = [v for v in g.vertices if g.degree(v) != 2]
    for a in anchors:
        for b in sorted(g.neighbors(a)):
            if g.degree(b) != 2 or b in used:
                continue
            run = [b]
            used.add(b)
            prev, cur = a, b
            while True:
                nxt = [x for x in g.neighbors(cur) if x != prev]
                if len(nxt) != 1:
                    break
                nxt = nxt[0]
                if g.degree(nxt) != 2 or nxt in used:
                    break
                run.append(nxt)
                used.add(nxt)
                prev, cur = cur, nxt
            paths.append(tuple(run))
    return tuple(paths)


# -- core/path decomposition -------------------------------------------------------

ORIGINAL = "original"
TIDY = "tidy"


@dataclass
class PseudoPath:
    vertices: tuple[int, ...]
    stumps: dict[int, tuple[Stump, ...]] = field(default_factory=dict)
    flavor: str = ORIGINAL

    def all_vertices(self) -> set[int]:
        out = set(self.vertices)
        for stumps in self.stumps.values():
            for s in stumps:
                out.update(s.vertices)
        return out

    def __len__(self):
        return len(self.vertices)


@dataclass
class HPGraph:
    """A trigraph split into a small core and dangling pseudo-paths.

    ``core`` holds the core vertices including the stump vertices attached to
    them; every other vertex belongs to exactly one pseudo-path (or to a stump
    annotated on one).  ``tww2_certified`` records whether the producing rule
    established that the twin-width is at least 2 (by a failed width-1
    decision or by the presence of two red stumps); constructions stay valid
    without it, but optimality claims depend on it.
    """

    g: Trigraph
    core: frozenset[int]
    paths: list[PseudoPath]
    tww2_certified: bool = False


def _legal_stump_set(stumps) -> bool:
    kinds = [s.kind for s in stumps]
    if kinds.count(StumpKind.RED) == 1 and len(kinds) == 1:
        return True
    return (
        kinds.count(StumpKind.RED) == 0
        and kinds.count(StumpKind.BLACK) <= 1
        and kinds.count(StumpKind.HALF) <= 1
    )


def validate_hp(hp: HPGraph) -> None:
    """Re-derive the decomposition invariants from scratch; raises on failure."""
    g = hp.g
    covered = set(hp.core)
    for path in hp.paths:
        pv = path.all_vertices()
        assert covered.isdisjoint(pv), "path overlaps core or another path"
        covered.update(pv)
    assert covered == set(g.vertices), "core and paths do not partition V"

    all_stumps = classify_stumps(g)
    for path in hp.paths:
        verts = path.vertices
        inner = set(verts)
        for v in verts:
            declared = path.stumps.get(v, ())
            assert tuple(all_stumps.get(v, ())) == tuple(declared), (
                f"stump annotation mismatch at {v}"
            )
        if path.flavor == ORIGINAL:
            for v in verts:
                assert _legal_stump_set(path.stumps.get(v, ())), (
                    f"illegal stump set at {v}"
                )
            for a, b in zip(verts, verts[1:]):
                assert g.color(a, b) is EdgeColor.BLACK, "original path edge not black"
            for end in (verts[0], verts[-1]):
                for u in g.neighbors(end):
                    if u in hp.core:
                        assert g.color(end, u) is EdgeColor.BLACK, (
                            "original connector edge not black"
                        )
        elif path.flavor == TIDY:
            assert not path.stumps or all(not v for v in path.stumps.values()), (
                "tidy path carries stumps"
            )
            for a, b in zip(verts, verts[1:]):
                assert g.color(a, b) is EdgeColor.RED, "tidy path edge not red"
            for end in (verts[0], verts[-1]):
                connectors = [u for u in g.neighbors(end) if u in hp.core]
                for u in connectors:
                    assert g.black_degree(u) == 0, "tidy connector has black edges"
                    nbrs_outside = [
                        x for x in g.neighbors(u) if x not in hp.core
                    ]
                    assert nbrs_outside == [end] or set(nbrs_outside) == {end}, (
                        "tidy connector touches more than one path vertex"
                    )
                    in_core = [x for x in g.neighbors(u) if x in hp.core]
                    assert len(in_core) == 1, "tidy connector needs one core neighbor"
                    assert g.black_degree(in_core[0]) > 0, (
                        "tidy connector's core neighbor has no black edge"
                    )
        else:
            raise AssertionError(f"unknown path flavor {path.flavor}")
