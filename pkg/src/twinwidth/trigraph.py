"""Immutable trigraphs: vertices joined by black or red edges, plus contraction.

A trigraph is a graph whose edge set is split into two disjoint symmetric
relations, black and red.  Contracting two vertices ``u`` and ``v`` replaces
them by a fresh vertex ``w``; a third vertex ``x`` ends up black-adjacent to
``w`` exactly when it was black-adjacent to both ``u`` and ``v``, and
red-adjacent when it was adjacent to either but the pair was not black-black.
Vertex labels of retired vertices are never reused: every trigraph carries a
monotone counter and the contraction result always gets a fresh label.

All operations are pure and return new values, so trigraphs can be shared
freely between concurrent workers.
"""

from __future__ import annotations

from enum import Enum

from .errors import (
    BadEndpoint,
    BadVertexSet,
    DeadVertex,
    DuplicateEdge,
    IllegalRecolor,
    SameVertex,
    SelfLoop,
)

VertexId = int


class EdgeColor(Enum):
    BLACK = "black"
    RED = "red"


class Trigraph:
    """A trigraph value.  Use :func:`new_trigraph` or the classmethods to build one."""

    __slots__ = ("_black", "_red", "_next_label")

    def __init__(self, black, red, next_label):
        # Private: callers go through new_trigraph / contract / induce / recolor.
        # Maps vertex -> frozenset of neighbors, one map per color; keys are kept
        # in ascending insertion order so iteration is deterministic.
        self._black = black
        self._red = red
        self._next_label = next_label

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_edges(cls, n, black_edges=(), red_edges=()):
        """Build a trigraph on vertices ``0..n-1`` from two edge lists."""
        black = {v: set() for v in range(n)}
        red = {v: set() for v in range(n)}
        seen = set()
        for edges, adj in ((black_edges, black), (red_edges, red)):
            for u, v in edges:
                if not (0 <= u < n and 0 <= v < n):
                    raise BadEndpoint(f"edge ({u}, {v}) outside 0..{n - 1}")
                if u == v:
                    raise SelfLoop(f"self-loop at {u}")
                key = (min(u, v), max(u, v))
                if key in seen:
                    raise DuplicateEdge(f"edge {key} listed twice or in both colors")
                seen.add(key)
                adj[u].add(v)
                adj[v].add(u)
        return cls(
            {v: frozenset(black[v]) for v in range(n)},
            {v: frozenset(red[v]) for v in range(n)},
            n,
        )

    @classmethod
    def _make(cls, vertices, black_adj, red_adj, next_label):
        """Assemble a trigraph from prebuilt adjacency maps (internal use)."""
        order = sorted(vertices)
        return cls(
            {v: frozenset(black_adj.get(v, ())) for v in order},
            {v: frozenset(red_adj.get(v, ())) for v in order},
            next_label,
        )

    # -- basic queries ----------------------------------------------------------

    @property
    def n(self):
        return len(self._black)

    @property
    def next_label(self):
        return self._next_label

    @property
    def vertices(self):
        return tuple(self._black)

    def __contains__(self, v):
        return v in self._black

    def black_neighbors(self, u):
        self._require_live(u)
        return self._black[u]

    def red_neighbors(self, u):
        self._require_live(u)
        return self._red[u]

    def neighbors(self, u):
        self._require_live(u)
        return self._black[u] | self._red[u]

    def color(self, u, v):
        """Color of the edge ``uv``, or None if the pair is a non-edge."""
        self._require_live(u)
        self._require_live(v)
        if v in self._black[u]:
            return EdgeColor.BLACK
        if v in self._red[u]:
            return EdgeColor.RED
        return None

    def degree(self, u):
        self._require_live(u)
        return len(self._black[u]) + len(self._red[u])

    def black_degree(self, u):
        self._require_live(u)
        return len(self._black[u])

    def red_degree(self, u):
        self._require_live(u)
        return len(self._red[u])

    def max_red_degree(self):
        return max((len(s) for s in self._red.values()), default=0)

    def black_edge_count(self):
        return sum(len(s) for s in self._black.values()) // 2

    def red_edge_count(self):
        return sum(len(s) for s in self._red.values()) // 2

    def edge_count(self):
        return self.black_edge_count() + self.red_edge_count()

    def has_red(self):
        return any(self._red.values())

    def black_edges(self):
        """Sorted (u, v) pairs with u < v."""
        return [(u, v) for u in self._black for v in sorted(self._black[u]) if u < v]

    def red_edges(self):
        return [(u, v) for u in self._red for v in sorted(self._red[u]) if u < v]

    def _require_live(self, u):
        if u not in self._black:
            raise DeadVertex(f"vertex {u} is not live")

    # -- operations ---------------------------------------------------------------

    def contract(self, u, v):
        """Merge ``u`` and ``v`` into a fresh vertex; returns the new trigraph.

        The fresh vertex's label is ``self.next_label``.
        """
        if u == v:
            raise SameVertex(f"cannot contract {u} with itself")
        self._require_live(u)
        self._require_live(v)
        bu = self._black[u] - {v}
        bv = self._black[v] - {u}
        ru = self._red[u] - {v}
        rv = self._red[v] - {u}
        w = self._next_label
        black_w = bu & bv
        red_w = (bu | bv | ru | rv) - black_w
        drop = {u, v}
        black = {}
        red = {}
        for x, bx in self._black.items():
            if x == u or x == v:
                continue
            rx = self._red[x]
            if x in black_w:
                bx = (bx - drop) | {w}
            elif x in red_w:
                if not bx.isdisjoint(drop):
                    bx = bx - drop
                rx = (rx - drop) | {w}
            black[x] = bx
            red[x] = rx
        black[w] = frozenset(black_w)
        red[w] = frozenset(red_w)
        return Trigraph(black, red, w + 1)

    def induce(self, subset):
        """Induced subtrigraph on ``subset``, preserving labels and the counter."""
        keep = frozenset(subset)
        if not keep <= set(self._black):
            raise BadVertexSet(f"{sorted(keep - set(self._black))} not live")
        black = {}
        red = {}
        for v in self._black:
            if v in keep:
                black[v] = self._black[v] & keep
                red[v] = self._red[v] & keep
        return Trigraph(black, red, self._next_label)

    def recolor(self, changes, unchecked=False):
        """Return a copy with edge colors rewritten.

        ``changes`` maps an edge ``(u, v)`` to ``EdgeColor.BLACK``,
        ``EdgeColor.RED`` or ``None`` (remove the edge).  In checked mode only
        the directions that yield a pseudoinduced subtrigraph are allowed:
        dropping a red edge or turning it black.  ``unchecked=True`` lifts that
        restriction for internal constructions.
        """
        black = {v: set(s) for v, s in self._black.items()}
        red = {v: set(s) for v, s in self._red.items()}
        for (u, v), new in changes.items():
            self._require_live(u)
            self._require_live(v)
            cur = self.color(u, v)
            if cur is None:
                raise IllegalRecolor(f"({u}, {v}) is not an edge")
            if not unchecked and not (
                cur is EdgeColor.RED and new in (EdgeColor.BLACK, None)
            ):
                raise IllegalRecolor(
                    f"({u}, {v}): {cur} -> {new} is not a pseudoinduced direction"
                )
            src = black if cur is EdgeColor.BLACK else red
            src[u].discard(v)
            src[v].discard(u)
            if new is EdgeColor.BLACK:
                black[u].add(v)
                black[v].add(u)
            elif new is EdgeColor.RED:
                red[u].add(v)
                red[v].add(u)
        return Trigraph(
            {v: frozenset(black[v]) for v in self._black},
            {v: frozenset(red[v]) for v in self._black},
            self._next_label,
        )

    def is_pseudoinduced_of(self, other):
        """True if this trigraph is obtained from an induced subtrigraph of
        ``other`` by dropping red edges or turning them black."""
        mine = set(self._black)
        if not mine <= set(other._black):
            return False
        for u in mine:
            ob = other._black[u] & mine
            orr = other._red[u] & mine
            if not self._black[u] <= (ob | orr) or not ob <= self._black[u]:
                return False
            if not self._red[u] <= orr:
                return False
        return True

    # -- value semantics --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Trigraph):
            return NotImplemented
        return (
            self._next_label == other._next_label
            and self._black == other._black
            and self._red == other._red
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def same_structure(self, other):
        """Structural equality ignoring the fresh-label counter."""
        return self._black == other._black and self._red == other._red

    def __repr__(self):
        return (
            f"Trigraph(n={self.n}, black={self.black_edge_count()}, "
            f"red={self.red_edge_count()})"
        )

    def validate(self):
        """Check internal invariants; raises AssertionError on violation."""
        assert set(self._black) == set(self._red)
        for u in self._black:
            assert u not in self._black[u] and u not in self._red[u], "self-loop"
            assert self._black[u].isdisjoint(self._red[u]), "color overlap"
            for v in self._black[u]:
                assert v in self._black and u in self._black[v], "asymmetric black"
            for v in self._red[u]:
                assert v in self._red and u in self._red[v], "asymmetric red"
            assert u < self._next_label, "label above counter"
        return True


def new_trigraph(n, black_edges=(), red_edges=()) -> Trigraph:
    """Create a trigraph with vertices ``0..n-1`` and the given edges.

    A plain graph is a trigraph with no red edges.
    """
    return Trigraph.from_edges(n, black_edges, red_edges)


def connected_components(g: Trigraph) -> list[list[VertexId]]:
    """Components in discovery order (smallest-label first), each sorted."""
    seen = set()
    comps = []
    for start in g.vertices:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Trigraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1
