"""Reduction rules for graphs with few feedback edges.

Each rule either solves the instance outright with a width-2 sequence or
returns a smaller instance together with a :class:`~twinwidth.sequence.Lift`
that turns any full sequence of the smaller instance back into one of the
original, within a certified width bound:

* dangling black stars are cut down to a black stump,
* deeper dangling black trees are cut down to a red stump,
* stump clusters on one vertex are merged until at most one stump (or a
  black-and-half pair) remains,
* pseudo-paths are cleaned into stump-free red paths ("tidied"),

``prune`` runs the tree rules exhaustively and assembles the core/path
decomposition.  ``fen1_sequence`` builds a width-2 sequence for any connected
graph with at most one feedback edge on top of that.

Rules that are only safe when the instance has twin-width at least 2 perform
a width-1 decision as due diligence while the instance carries fewer than two
red stumps; from two red stumps on, the lower bound is structural and free.
When the instance is too large for the decision budget the reduction still
runs, but the outcome is marked uncertified and downstream reports avoid
optimality claims.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadStumpConfig,
    BudgetExceeded,
    Disconnected,
    FenTooLarge,
    NoMultipleStumps,
    NotAStar,
    NotATree,
    NotOriginal,
    PreconditionViolated,
)
from .sequence import (
    ContractionSequence,
    Lift,
    bound_at_least_two,
    bound_identity,
    compose,
    identity_lift,
)
from .solver import DEFAULT_CONFIG, SolverConfig, decide_width_at_most
from .structure import (
    HPGraph,
    ORIGINAL,
    PseudoPath,
    StumpKind,
    TIDY,
    classify_stumps,
    feedback_edge_set,
    find_dangling_trees,
    red_stump_count,
    two_core,
    validate_hp,
)
from .trigraph import EdgeColor, Trigraph, is_connected


@dataclass
class RuleOutcome:
    """Either ``solved`` holds a full width<=2 sequence of the rule's input,
    or ``instance``/``lift`` describe the reduced instance."""

    solved: ContractionSequence | None = None
    instance: object = None  # Trigraph or HPGraph
    lift: Lift | None = None
    certified: bool = False

    @property
    def is_solved(self):
        return self.solved is not None


# -- tree contraction ----------------------------------------------------------


def _tree_children(g: Trigraph, root, allowed=None):
    """Rooted child lists (ascending labels) over black edges."""
    children = {root: []}
    seen = {root}
    queue = [root]
    while queue:
        nxt = []
        for v in queue:
            for u in sorted(g.black_neighbors(v)):
                if allowed is not None and u not in allowed:
                    continue
                if u in seen:
                    continue
                seen.add(u)
                children[v].append(u)
                children[u] = []
                nxt.append(u)
        queue = nxt
    return children, seen


def _fold_subtree_pairs(children, root, fresh0):
    """Contract everything strictly below ``root`` into a single vertex.

    Children are folded in label order; siblings' remnants are merged as soon
    as both exist, which keeps every red degree at 2 or below.  Returns the
    contraction pairs and the label of the final merged child (None if the
    root is a leaf).
    """
    pairs = []
    fresh = fresh0

    def emit(a, b):
        nonlocal fresh
        pairs.append((a, b))
        fresh += 1
        return fresh - 1

    frames = [[root, 0, None]]
    ret = None
    root_acc = None
    while frames:
        frame = frames[-1]
        v, idx, acc = frame
        if ret is not None:
            acc = ret if acc is None else emit(acc, ret)
            frame[2] = acc
            ret = None
        kids = children[v]
        if idx < len(kids):
            frame[1] += 1
            frames.append([kids[idx], 0, None])
            continue
        frames.pop()
        if v == root:
            root_acc = acc
        elif acc is None:
            ret = v
        else:
            ret = emit(acc, v)
    return pairs, root_acc


def tree_sequence(t: Trigraph, root) -> ContractionSequence:
    """Full width<=2 sequence of a black tree where the root is touched only
    by the very last contraction."""
    if t.has_red():
        raise NotATree("tree contraction expects a black trigraph")
    children, seen = _tree_children(t, root)
    if len(seen) != t.n or t.black_edge_count() != t.n - 1:
        raise NotATree("input is not a connected acyclic black graph")
    pairs, acc = _fold_subtree_pairs(children, root, t.next_label)
    if acc is not None:
        pairs.append((root, acc))
    return ContractionSequence.build(t, pairs)


# -- individual rules -------------------------------------------------------------


def _apply_pairs(g: Trigraph, pairs):
    cur = g
    for a, b in pairs:
        cur = cur.contract(a, b)
    return cur


def reduce_star(g: Trigraph, tree) -> RuleOutcome:
    """Replace a dangling black star (>= 2 leaves) by a black stump on its
    attachment vertex.  Lift: contract the leaves (pairwise twins) first, then
    follow the reduced instance's sequence."""
    u, v = tree.bridge
    leaves = sorted(tree.vertices - {v})
    if len(leaves) < 2:
        raise NotAStar("star must have at least two leaves beyond its center")
    for leaf in leaves:
        if g.neighbors(leaf) != frozenset((v,)) or g.color(leaf, v) is not EdgeColor.BLACK:
            raise NotAStar(f"{leaf} is not a black pendant of {v}")
    if not tree.all_black:
        raise NotAStar("star contains a red edge")
    pairs = []
    acc = leaves[0]
    nxt = g.next_label
    for leaf in leaves[1:]:
        pairs.append((acc, leaf))
        acc = nxt
        nxt += 1
    reduced = _apply_pairs(g, pairs)
    lift = Lift(parent=g, child=reduced, prefix=tuple(pairs), bound=bound_identity)
    return RuleOutcome(instance=reduced, lift=lift, certified=False)


def _certify_at_least_two(candidate: Trigraph, config: SolverConfig):
    """('certified', None) | ('solved', width<=1 sequence) | ('assumed', None)."""
    if red_stump_count(candidate) >= 2:
        return "certified", None
    if candidate.n <= config.max_vertices:
        try:
            seq = decide_width_at_most(candidate, 1, config)
        except BudgetExceeded:
            return "assumed", None
        if seq is None:
            return "certified", None
        return "solved", seq
    return "assumed", None


def reduce_tree(g: Trigraph, tree, config: SolverConfig = DEFAULT_CONFIG) -> RuleOutcome:
    """Cut a dangling black tree with depth >= 2 down to a red stump.

    If the candidate trigraph turns out to have twin-width below 2, the rule
    instead solves the input: contract the tree onto its root, then follow the
    candidate's width-1 sequence.
    """
    u, v = tree.bridge
    if not tree.all_black:
        raise PreconditionViolated("dangling tree must be black")
    children, seen = _tree_children(g, v, allowed=tree.vertices)
    if seen != tree.vertices:
        raise PreconditionViolated("tree vertices are not a dangling black tree")
    if all(not children[c] for c in children[v]):
        raise PreconditionViolated("tree has no vertex at distance 2 from its root")
    pairs, acc = _fold_subtree_pairs(children, v, g.next_label)
    candidate = _apply_pairs(g, pairs)
    assert candidate.color(v, acc) is EdgeColor.RED, "folded tree must hang red"
    status, onewide = _certify_at_least_two(candidate, config)
    if status == "solved":
        return RuleOutcome(
            solved=ContractionSequence.build(g, pairs + onewide.pairs())
        )
    lift = Lift(parent=g, child=candidate, prefix=tuple(pairs), bound=bound_at_least_two)
    return RuleOutcome(instance=candidate, lift=lift, certified=status == "certified")


def merge_stumps(g: Trigraph, u, config: SolverConfig = DEFAULT_CONFIG) -> RuleOutcome:
    """Merge one excess stump on ``u``: beside a red stump any other stump is
    absorbed into it; half stumps merge pairwise as twins; two black stumps
    become one red stump.  A black-and-half pair is a legal terminal state."""
    stumps = classify_stumps(g).get(u, ())
    if len(stumps) < 2:
        raise NoMultipleStumps(f"{u} owns {len(stumps)} stump(s)")
    reds = [s for s in stumps if s.kind is StumpKind.RED]
    blacks = [s for s in stumps if s.kind is StumpKind.BLACK]
    halves = [s for s in stumps if s.kind is StumpKind.HALF]
    if reds:
        keeper = reds[0]
        others = sorted(
            (s for s in stumps if s is not keeper), key=lambda s: s.vertices
        )
        victim = others[0]
        rv, rw = keeper.vertices
        if victim.kind is StumpKind.HALF:
            pairs = [(victim.vertices[0], rv)]
        else:
            v0, w0 = victim.vertices
            pairs = [(w0, rw), (v0, rv)]
        candidate = _apply_pairs(g, pairs)
        status, onewide = _certify_at_least_two(candidate, config)
        if status == "solved":
            return RuleOutcome(
                solved=ContractionSequence.build(g, pairs + onewide.pairs())
            )
        lift = Lift(parent=g, child=candidate, prefix=tuple(pairs), bound=bound_at_least_two)
        return RuleOutcome(
            instance=candidate, lift=lift, certified=status == "certified"
        )
    if len(halves) >= 2:
        pairs = []
        acc = halves[0].vertices[0]
        nxt = g.next_label
        for s in halves[1:]:
            pairs.append((acc, s.vertices[0]))
            acc = nxt
            nxt += 1
        reduced = _apply_pairs(g, pairs)
        lift = Lift(parent=g, child=reduced, prefix=tuple(pairs), bound=bound_identity)
        return RuleOutcome(instance=reduced, lift=lift, certified=False)
    if len(blacks) >= 2:
        (v1, w1), (v2, w2) = blacks[0].vertices, blacks[1].vertices
        pairs = [(w1, w2), (v1, v2)]
        candidate = _apply_pairs(g, pairs)
        status, onewide = _certify_at_least_two(candidate, config)
        if status == "solved":
            return RuleOutcome(
                solved=ContractionSequence.build(g, pairs + onewide.pairs())
            )
        lift = Lift(parent=g, child=candidate, prefix=tuple(pairs), bound=bound_at_least_two)
        return RuleOutcome(
            instance=candidate, lift=lift, certified=status == "certified"
        )
    raise NoMultipleStumps(f"{u} owns only the allowed black-and-half pair")


def _kill_pairs(stumps, owner, emit):
    """Pairs that contract ``owner``'s stumps down to a single extra neighbor,
    then merge that neighbor into ``owner``.  Returns the merged owner id."""
    kinds = sorted(s.kind.value for s in stumps)
    if kinds == [StumpKind.HALF.value]:
        return emit(owner, stumps[0].vertices[0])
    if kinds in ([StumpKind.BLACK.value], [StumpKind.RED.value]):
        v, w = stumps[0].vertices
        x = emit(v, w)
        return emit(owner, x)
    if kinds == sorted([StumpKind.BLACK.value, StumpKind.HALF.value]):
        half = next(s for s in stumps if s.kind is StumpKind.HALF)
        black = next(s for s in stumps if s.kind is StumpKind.BLACK)
        v, w = black.vertices
        z = emit(half.vertices[0], v)
        x = emit(z, w)
        return emit(owner, x)
    return None


def kill_stumps_prefix(g: Trigraph, u) -> ContractionSequence:
    """Partial sequence that removes ``u``'s stumps and turns all edges at
    ``u`` red; width is max(red_degree(u) + 1, max red degree afterwards)."""
    stumps = classify_stumps(g).get(u, ())
    if not stumps:
        raise BadStumpConfig(f"{u} owns no stumps")
    pairs = []
    nxt = g.next_label

    def emit(a, b):
        nonlocal nxt
        pairs.append((a, b))
        nxt += 1
        return nxt - 1

    if _kill_pairs(stumps, u, emit) is None:
        raise BadStumpConfig(
            f"{u} must own a single stump or a black-and-half pair"
        )
    return ContractionSequence.build(g, pairs, partial=True)


# -- tidying pseudo-paths ----------------------------------------------------------


def _tidy_one_path(cur: Trigraph, path: PseudoPath):
    """Turn one original pseudo-path into a stump-free red path.

    Returns (pairs, reduced, new_path_vertices, moved_to_core, descendants).
    Interior stumps are contracted onto their path vertex from the leftmost
    stumped vertex outward; the two vertices next to the endpoints instead
    push their last stump remnant onto their inner neighbor, which keeps the
    endpoint edges black.
    """
    verts = path.vertices
    n = len(verts)
    pairs = []
    nxt = cur.next_label
    desc = {v: v for v in verts}

    def emit(a, b):
        nonlocal nxt
        pairs.append((a, b))
        nxt += 1
        return nxt - 1

    for idx in range(2, n - 2):
        stumps = path.stumps.get(verts[idx], ())
        if stumps:
            desc[verts[idx]] = _kill_pairs(stumps, desc[verts[idx]], emit)
    for idx, inner in ((1, 2), (n - 2, n - 3)):
        stumps = path.stumps.get(verts[idx], ())
        if not stumps:
            continue
        kinds = sorted(s.kind.value for s in stumps)
        if kinds == [StumpKind.HALF.value]:
            x = stumps[0].vertices[0]
        elif kinds in ([StumpKind.BLACK.value], [StumpKind.RED.value]):
            v, w = stumps[0].vertices
            x = emit(v, w)
        else:
            half = next(s for s in stumps if s.kind is StumpKind.HALF)
            black = next(s for s in stumps if s.kind is StumpKind.BLACK)
            v, w = black.vertices
            z = emit(half.vertices[0], v)
            x = emit(z, w)
        desc[verts[inner]] = emit(x, desc[verts[inner]])
    final = _apply_pairs(cur, pairs)
    redden = {}
    for i in range(1, n - 2):
        a, b = desc[verts[i]], desc[verts[i + 1]]
        if final.color(a, b) is EdgeColor.BLACK:
            redden[(a, b)] = EdgeColor.RED
    reduced = final.recolor(redden, unchecked=True)
    new_path = tuple(desc[verts[i]] for i in range(3, n - 3))
    moved = {verts[0], verts[n - 1]}
    moved.update(desc[verts[i]] for i in (1, 2, n - 3, n - 2))
    for endpoint in (verts[0], verts[n - 1]):
        for s in path.stumps.get(endpoint, ()):
            moved.update(s.vertices)
    return pairs, reduced, new_path, moved


def tidy(hp: HPGraph, trace=None):
    """Clean every original pseudo-path: paths of up to 6 vertices are
    absorbed into the core with their stumps (at most 24 vertices each);
    longer ones become red dangling paths whose 3+3 boundary vertices and
    endpoint stumps move into the core.  Returns the tidy decomposition and
    the composed lift."""
    for path in hp.paths:
        if path.flavor not in (ORIGINAL, TIDY):
            raise NotOriginal(f"unknown path flavor {path.flavor}")
    cur = hp.g
    core = set(hp.core)
    lift_total = identity_lift(cur)
    new_paths = []
    for path in hp.paths:
        if path.flavor == TIDY:
            new_paths.append(path)
            continue
        if len(path.vertices) <= 6:
            core.update(path.all_vertices())
            if trace is not None:
                trace.append(
                    {"rule": "absorb_path", "site": list(path.vertices)}
                )
            continue
        pairs, reduced, new_path, moved = _tidy_one_path(cur, path)
        lift = Lift(parent=cur, child=reduced, prefix=tuple(pairs), bound=bound_identity)
        lift_total = compose(lift, lift_total)
        cur = reduced
        core.update(moved)
        new_paths.append(PseudoPath(new_path, {}, TIDY))
        if trace is not None:
            trace.append(
                {
                    "rule": "tidy_path",
                    "site": list(path.vertices),
                    "kept": list(new_path),
                }
            )
    out = HPGraph(cur, frozenset(core), new_paths, hp.tww2_certified)
    return out, lift_total


# -- the pruning pipeline ------------------------------------------------------------


def _is_star_at_root(g: Trigraph, tree) -> bool:
    _, v = tree.bridge
    return all(
        g.neighbors(x) == frozenset((v,)) for x in tree.vertices if x != v
    )


def _component_paths(g: Trigraph, core, hubs):
    """Split core-minus-hubs into ordered degree-2 runs between hub vertices."""
    inner = core - hubs
    seen = set()
    comps = []
    for start in sorted(inner):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in g.neighbors(v):
                if u in inner and u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(comp)
    paths = []
    for comp in comps:
        compset = set(comp)
        if len(comp) == 1:
            paths.append((comp[0],))
            continue
        ends = []
        for v in comp:
            inside = [u for u in g.neighbors(v) if u in compset]
            if len(inside) == 1:
                ends.append(v)
        assert len(ends) == 2, "core leftover is not a path"

        def connector(v):
            hubs_near = [u for u in g.neighbors(v) if u in hubs]
            return min(hubs_near) if hubs_near else v

        start = min(ends, key=lambda v: (connector(v), v))
        run = [start]
        prev = None
        curv = start
        while len(run) < len(comp):
            nxt = [
                u for u in g.neighbors(curv) if u in compset and u != prev
            ]
            assert len(nxt) == 1
            prev, curv = curv, nxt[0]
            run.append(curv)
        paths.append(tuple(run))
    paths.sort(key=lambda p: p[0])
    return paths


def prune(
    g: Trigraph,
    config: SolverConfig = DEFAULT_CONFIG,
    trace=None,
    _checked=False,
    observer=None,
) -> RuleOutcome:
    """Exhaustively cut dangling trees down to stumps and assemble the
    core/path decomposition.

    Returns either a solved width<=2 sequence of ``g`` (always for acyclic
    inputs, and whenever a width<=1 decision succeeds along the way) or the
    decomposition plus the composed lift.  With ``k`` feedback edges the core
    has at most ``16k`` vertices and there are at most ``4k`` pseudo-paths.
    ``_checked=True`` promises the caller already ruled out width <= 1.
    """
    if not is_connected(g):
        raise Disconnected("pruning expects a connected graph")
    if g.has_red():
        raise PreconditionViolated("pruning expects a plain (all-black) graph")

    def note(event):
        if trace is not None:
            trace.append(event)

    fes = feedback_edge_set(g)
    k = len(fes)
    certified = _checked
    if not _checked and g.n <= config.max_vertices:
        try:
            for d in (0, 1):
                seq = decide_width_at_most(g, d, config)
                if seq is not None:
                    note({"rule": "solved_by_decision", "width": d})
                    return RuleOutcome(solved=seq, certified=True)
            certified = True
        except BudgetExceeded:
            certified = False
    if k == 0:
        root = min(g.vertices)
        note({"rule": "tree_input", "root": root})
        return RuleOutcome(solved=tree_sequence(g, root), certified=certified)

    cur = g
    lift_total = identity_lift(g)

    def merge_in(outcome, rule, site, before):
        nonlocal cur, lift_total, certified
        if observer is not None:
            observer(rule, before, outcome)
        cur = outcome.instance
        lift_total = compose(outcome.lift, lift_total)
        certified = certified or outcome.certified or red_stump_count(cur) >= 2
        note({"rule": rule, "site": site})

    chunks = find_dangling_trees(cur)
    stars = []
    trees = []
    for chunk in chunks:
        if len(chunk.vertices) <= 2:
            continue  # already a stump
        (stars if _is_star_at_root(cur, chunk) else trees).append(chunk)
    for chunk in stars:
        before = cur
        outcome = reduce_star(cur, chunk)
        merge_in(outcome, "reduce_star", chunk.bridge[0], before)
    for chunk in trees:
        before = cur
        outcome = reduce_tree(cur, chunk, config)
        if outcome.is_solved:
            if observer is not None:
                observer("reduce_tree", before, outcome)
            note({"rule": "reduce_tree_solved", "site": chunk.bridge[0]})
            return RuleOutcome(
                solved=lift_total.apply(outcome.solved), certified=certified
            )
        merge_in(outcome, "reduce_tree", chunk.bridge[0], before)

    while True:
        owners = classify_stumps(cur)
        target = None
        for u in sorted(owners):
            stumps = owners[u]
            if len(stumps) < 2:
                continue
            kinds = sorted(s.kind.value for s in stumps)
            if kinds == sorted([StumpKind.BLACK.value, StumpKind.HALF.value]):
                continue  # legal pair
            target = u
            break
        if target is None:
            break
        before = cur
        outcome = merge_stumps(cur, target, config)
        if outcome.is_solved:
            if observer is not None:
                observer("merge_stumps", before, outcome)
            note({"rule": "merge_stumps_solved", "site": target})
            return RuleOutcome(
                solved=lift_total.apply(outcome.solved), certified=certified
            )
        merge_in(outcome, "merge_stumps", target, before)

    # assemble the decomposition
    core = two_core(cur)
    stumps_map = classify_stumps(cur)
    hubs = set()
    for a, b in fes:
        hubs.add(a)
        hubs.add(b)
    assert hubs <= core
    fes_set = {tuple(sorted(e)) for e in fes}
    for v in core:
        deg = sum(
            1
            for u in cur.neighbors(v)
            if u in core and tuple(sorted((u, v))) not in fes_set
        )
        if deg > 2:
            hubs.add(v)
    assert len(hubs) <= 4 * k, "hub bound violated"
    h_vertices = set(hubs)
    for u in hubs:
        for s in stumps_map.get(u, ()):
            h_vertices.update(s.vertices)
    assert len(h_vertices) <= 16 * k, "core size bound violated"

    runs = _component_paths(cur, core, hubs)
    assert len(runs) <= 4 * k, "path count bound violated"
    paths = [
        PseudoPath(
            run,
            {v: stumps_map[v] for v in run if v in stumps_map},
            ORIGINAL,
        )
        for run in runs
    ]
    hp = HPGraph(cur, frozenset(h_vertices), paths, certified)
    validate_hp(hp)
    note({"rule": "decomposed", "core": len(h_vertices), "paths": len(paths)})
    return RuleOutcome(instance=hp, lift=lift_total, certified=certified)


# -- feedback edge number one ---------------------------------------------------------


def _cycle_order(g: Trigraph, cycle):
    start = min(cycle)
    nbrs = sorted(u for u in g.neighbors(start) if u in cycle)
    order = [start, nbrs[0]]
    while len(order) < len(cycle):
        prev, curv = order[-2], order[-1]
        nxt = [u for u in g.neighbors(curv) if u in cycle and u != prev]
        assert len(nxt) == 1, "not a simple cycle"
        order.append(nxt[0])
    return order


def fen1_sequence(
    g: Trigraph,
    config: SolverConfig = DEFAULT_CONFIG,
    _checked=False,
) -> ContractionSequence:
    """Full width<=2 sequence for a connected graph with at most one feedback
    edge: prune and tidy down to a single cycle with stumps, merge each
    vertex's stumps into one pendant, then fold pendants and cycle with a
    walker that sweeps around once."""
    if not is_connected(g):
        raise Disconnected("expected a connected graph")
    k = len(feedback_edge_set(g, ignore_red=True))
    if k > 1:
        raise FenTooLarge(f"feedback edge number {k} > 1")
    outcome = prune(g, config, _checked=_checked)
    if outcome.is_solved:
        return outcome.solved
    hp, lift1 = outcome.instance, outcome.lift
    hp2, lift2 = tidy(hp)
    cyc_g = hp2.g
    cycle = two_core(cyc_g)
    assert cycle, "feedback edge number 1 leaves a cycle"
    stumps_map = classify_stumps(cyc_g)
    pairs = []
    nxt = cyc_g.next_label

    def emit(a, b):
        nonlocal nxt
        pairs.append((a, b))
        nxt += 1
        return nxt - 1

    pendant = {}
    for v in sorted(cycle):
        stumps = stumps_map.get(v, ())
        if not stumps:
            continue
        kinds = sorted(s.kind.value for s in stumps)
        if kinds == [StumpKind.HALF.value]:
            pendant[v] = stumps[0].vertices[0]
        elif kinds in ([StumpKind.BLACK.value], [StumpKind.RED.value]):
            a, b = stumps[0].vertices
            pendant[v] = emit(a, b)
        else:
            half = next(s for s in stumps if s.kind is StumpKind.HALF)
            black = next(s for s in stumps if s.kind is StumpKind.BLACK)
            a, b = black.vertices
            z = emit(half.vertices[0], a)
            pendant[v] = emit(z, b)
    order = _cycle_order(cyc_g, cycle)
    walker = order[0]
    if order[0] in pendant:
        walker = emit(pendant[order[0]], order[0])
    for v in order[1:]:
        if v in pendant:
            walker = emit(pendant[v], walker)
        walker = emit(walker, v)
    seq = ContractionSequence.build(cyc_g, pairs)
    return compose(lift2, lift1).apply(seq)
