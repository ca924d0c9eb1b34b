"""Contraction sequences, the width verifier, bag bookkeeping, and lifts.

A contraction sequence lists (a, b) pairs to merge, in order, against a fixed
base trigraph.  Its width is the maximum red degree seen in any intermediate
trigraph, the base included.  Fresh labels are deterministic: step ``i``
produces vertex ``base.next_label + i``, so sequences can be spliced without
replaying any graph.

A :class:`Lift` turns a full sequence of a reduced instance back into a full
sequence of the instance it was derived from, with a certified width bound.
Every lift here is of prefix form: the reduced instance is reachable from the
parent by playing ``prefix``, after which the reduced instance's own steps
apply verbatim (the reduced instance may have some of those edges recolored
red, which never invalidates a step).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import (
    DeadVertexAtStep,
    IncompleteSequence,
    InstanceMismatch,
)
from .trigraph import Trigraph, connected_components


@dataclass(frozen=True)
class ContractionStep:
    a: int
    b: int
    result: int


class ContractionSequence:
    """An ordered list of contractions against a specific base trigraph."""

    __slots__ = ("base", "steps", "partial")

    def __init__(self, base: Trigraph, steps: tuple[ContractionStep, ...], partial: bool):
        self.base = base
        self.steps = steps
        self.partial = partial

    @classmethod
    def build(cls, base: Trigraph, pairs: Iterable[tuple[int, int]], partial=False):
        nxt = base.next_label
        steps = tuple(
            ContractionStep(a, b, nxt + i) for i, (a, b) in enumerate(pairs)
        )
        return cls(base, steps, partial)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def pairs(self):
        return [(s.a, s.b) for s in self.steps]

    def __eq__(self, other):
        if not isinstance(other, ContractionSequence):
            return NotImplemented
        return (
            self.base == other.base
            and self.steps == other.steps
            and self.partial == other.partial
        )

    __hash__ = None

    def __repr__(self):
        kind = "partial" if self.partial else "full"
        return f"ContractionSequence({kind}, {len(self.steps)} steps)"

    def final_trigraph(self) -> Trigraph:
        cur = self.base
        for s in self.steps:
            cur = cur.contract(s.a, s.b)
        return cur


def _check_base(g: Trigraph, seq: ContractionSequence):
    if seq.base != g:
        raise InstanceMismatch("sequence was built against a different trigraph")


def verify(g: Trigraph, seq: ContractionSequence, require_full=None) -> int:
    """Replay ``seq`` on ``g`` and return its exact width.

    The width is the maximum red degree over all vertices of all intermediate
    trigraphs, including ``g`` itself.  ``require_full`` defaults to the
    sequence's own flag; a full sequence must end with one live vertex per
    connected component of ``g``, or a single vertex overall.
    """
    _check_base(g, seq)
    if require_full is None:
        require_full = not seq.partial
    black = {v: set(g.black_neighbors(v)) for v in g.vertices}
    red = {v: set(g.red_neighbors(v)) for v in g.vertices}
    width = max((len(s) for s in red.values()), default=0)
    for i, step in enumerate(seq.steps):
        u, v, w = step.a, step.b, step.result
        if u not in black or v not in black or u == v:
            raise DeadVertexAtStep(i, v if u in black else u)
        bu = black.pop(u)
        bv = black.pop(v)
        ru = red.pop(u)
        rv = red.pop(v)
        bu.discard(v)
        bv.discard(u)
        ru.discard(v)
        rv.discard(u)
        black_w = bu & bv
        red_w = (bu | bv | ru | rv) - black_w
        for x in black_w:
            bx = black[x]
            bx.discard(u)
            bx.discard(v)
            bx.add(w)
        for x in red_w:
            bx = black[x]
            bx.discard(u)
            bx.discard(v)
            rx = red[x]
            rx.discard(u)
            rx.discard(v)
            rx.add(w)
            if len(rx) > width:
                width = len(rx)
        black[w] = black_w
        red[w] = red_w
        if len(red_w) > width:
            width = len(red_w)
    if require_full:
        remaining = len(black)
        if remaining > 1 and remaining != len(connected_components(g)):
            raise IncompleteSequence(
                f"{remaining} vertices remain after a supposedly full sequence"
            )
    return width


class BagForest:
    """Maps every vertex that ever existed to its bag of original vertices."""

    def __init__(self, bags: dict[int, frozenset[int]]):
        self._bags = bags

    def bag(self, u) -> frozenset[int]:
        return self._bags[u]

    def __getitem__(self, u):
        return self._bags[u]

    def __contains__(self, u):
        return u in self._bags

    def __len__(self):
        return len(self._bags)

    def is_ancestor_of(self, u, v) -> bool:
        return self._bags[u] <= self._bags[v]


def bags(g: Trigraph, seq: ContractionSequence) -> BagForest:
    """Full bag mapping for ``seq``: originals map to singletons, every
    contraction result to the union of its parents' bags."""
    _check_base(g, seq)
    forest = {v: frozenset((v,)) for v in g.vertices}
    alive = set(g.vertices)
    for i, step in enumerate(seq.steps):
        if step.a not in alive or step.b not in alive or step.a == step.b:
            raise DeadVertexAtStep(i, step.b if step.a in alive else step.a)
        forest[step.result] = forest[step.a] | forest[step.b]
        alive.discard(step.a)
        alive.discard(step.b)
        alive.add(step.result)
    return BagForest(forest)


def restrict(g: Trigraph, seq: ContractionSequence, subset) -> ContractionSequence:
    """Project a full sequence of ``g`` onto ``g.induce(subset)``.

    A contraction contributes a step exactly when both merged bags intersect
    ``subset``; when only one does, the surviving projected bag is unchanged
    and the step is skipped.  The result has ``len(subset) - 1`` steps and
    never exceeds the width of ``seq``.
    """
    _check_base(g, seq)
    keep = frozenset(subset)
    induced = g.induce(keep)
    # live projected vertex for every base vertex whose bag meets the subset
    proj = {v: v for v in keep}
    pairs = []
    count = 0
    for step in seq.steps:
        pa = proj.get(step.a)
        pb = proj.get(step.b)
        if pa is not None and pb is not None:
            pairs.append((pa, pb))
            proj[step.result] = induced.next_label + count
            count += 1
        elif pa is not None:
            proj[step.result] = pa
        elif pb is not None:
            proj[step.result] = pb
    return ContractionSequence.build(induced, pairs, partial=seq.partial)


# -- lifts ---------------------------------------------------------------------


def bound_identity(w: int) -> int:
    return w


def bound_at_least_two(w: int) -> int:
    return max(w, 2)


@dataclass(frozen=True)
class Lift:
    """Maps full sequences of ``child`` to full sequences of ``parent``.

    ``apply`` plays ``prefix`` on the parent and then the child sequence's
    steps verbatim; this is valid because ``child`` has the same vertices and
    fresh-label counter as the parent after the prefix (its edges may differ
    only by recoloring).  ``bound`` certifies the resulting width in terms of
    the input width; it is validated dynamically wherever lifts are tested.
    """

    parent: Trigraph
    child: Trigraph
    prefix: tuple[tuple[int, int], ...]
    bound: Callable[[int], int] = bound_identity

    def __post_init__(self):
        expect = self.parent.next_label + len(self.prefix)
        if self.child.next_label != expect:
            raise InstanceMismatch(
                f"child counter {self.child.next_label} != parent counter after "
                f"prefix {expect}"
            )

    def apply(self, seq: ContractionSequence) -> ContractionSequence:
        if seq.base != self.child:
            raise InstanceMismatch("lift input was built against a different instance")
        return ContractionSequence.build(
            self.parent, list(self.prefix) + seq.pairs(), partial=seq.partial
        )


def identity_lift(g: Trigraph) -> Lift:
    return Lift(parent=g, child=g, prefix=())


def compose(inner: Lift, outer: Lift) -> Lift:
    """Chain two lifts: ``inner`` maps kernel to intermediate, ``outer`` maps
    intermediate to parent; ``inner.parent`` must equal ``outer.child``."""
    if inner.parent != outer.child:
        raise InstanceMismatch("lifts do not chain: inner.parent != outer.child")
    ib, ob = inner.bound, outer.bound
    return Lift(
        parent=outer.parent,
        child=inner.child,
        prefix=outer.prefix + inner.prefix,
        bound=lambda w: ob(ib(w)),
    )
