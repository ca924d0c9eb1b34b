"""Command-line front end with bit-exact graph and certificate formats.

Graph files follow the PACE text layout: optional ``c`` comment lines, a
header ``p tww <n> <m>``, then exactly m edge lines ``<u> <v>`` with 1-based
indices; a third token ``r`` marks a red edge (an extension, never emitted
for plain graphs).  Sequence files hold one ``<u> <v>`` line per contraction,
meaning "contract v into u; u stays the live label of the merged vertex".

Exit codes: 0 success, 1 usage or file-format problems, 2 verification
failure, 3 budget exceeded.  Machine-readable output goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    BudgetExceeded,
    GraphSyntaxError,
    HeaderMismatch,
    IndexOutOfRange,
    TwinWidthError,
)
from .kernel import Practical, Theory, general_kernel, solve, tww2_bikernel
from .sequence import ContractionSequence, verify
from .solver import SolverConfig
from .structure import (
    classify_stumps,
    feedback_edge_set,
    find_bridges,
    find_dangling_paths,
    find_dangling_trees,
)
from .trigraph import Trigraph, new_trigraph


# -- graph files -----------------------------------------------------------------


def parse_graph(text: str) -> Trigraph:
    n = m = None
    black = []
    red = []
    edge_lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise HeaderMismatch("second header line", line=lineno)
            if len(parts) != 4 or parts[1] != "tww":
                raise HeaderMismatch(f"bad header {line!r}", line=lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise HeaderMismatch(f"bad header {line!r}", line=lineno)
            continue
        if n is None:
            raise GraphSyntaxError("edge line before header", line=lineno)
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "r"):
            raise GraphSyntaxError(f"bad edge line {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphSyntaxError(f"bad edge line {line!r}", line=lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise IndexOutOfRange(f"endpoint outside 1..{n}", line=lineno)
        (red if len(parts) == 3 else black).append((u - 1, v - 1))
        edge_lines += 1
    if n is None:
        raise HeaderMismatch("missing 'p tww <n> <m>' header")
    if edge_lines != m:
        raise HeaderMismatch(f"header declares {m} edges, found {edge_lines}")
    return new_trigraph(n, black, red)


def emit_graph(g: Trigraph) -> str:
    index = {v: i + 1 for i, v in enumerate(sorted(g.vertices))}
    lines = [f"p tww {g.n} {g.edge_count()}"]
    pairs = []
    for u, v in g.black_edges():
        pairs.append((index[u], index[v], ""))
    for u, v in g.red_edges():
        pairs.append((index[u], index[v], " r"))
    for a, b, mark in sorted(pairs):
        lines.append(f"{a} {b}{mark}")
    return "\n".join(lines) + "\n"


# -- sequence files ----------------------------------------------------------------


def parse_sequence(g: Trigraph, text: str) -> ContractionSequence:
    """Read survivor-keeps-label steps against ``g`` (1-based labels)."""
    live = {i + 1: v for i, v in enumerate(sorted(g.vertices))}
    pairs = []
    fresh = g.next_label
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphSyntaxError(f"bad step line {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphSyntaxError(f"bad step line {line!r}", line=lineno)
        if u not in live or v not in live or u == v:
            raise GraphSyntaxError(f"step {u} {v} references a dead label", line=lineno)
        pairs.append((live[u], live[v]))
        live[u] = fresh
        fresh += 1
        del live[v]
    partial = len(pairs) < g.n - 1
    return ContractionSequence.build(g, pairs, partial=partial)


def emit_sequence(g: Trigraph, seq: ContractionSequence) -> str:
    """Write steps in survivor-keeps-label form: the merged vertex inherits
    the first listed endpoint's external label."""
    ext = {v: i + 1 for i, v in enumerate(sorted(g.vertices))}
    lines = []
    for step in seq.steps:
        lines.append(f"{ext[step.a]} {ext[step.b]}")
        ext[step.result] = ext[step.a]
    return "\n".join(lines) + ("\n" if lines else "")


# -- subcommands ------------------------------------------------------------------


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _config(args) -> SolverConfig:
    return SolverConfig(
        max_vertices=getattr(args, "budget", 20),
        threads=getattr(args, "threads", 1),
    )


def _policy(args):
    text = getattr(args, "policy", "practical:12")
    if text == "theory":
        return Theory()
    if text.startswith("practical:"):
        return Practical(int(text.split(":", 1)[1]))
    if text == "practical":
        return Practical()
    raise argparse.ArgumentTypeError(f"bad policy {text!r}")


def _cmd_solve(args) -> int:
    g = parse_graph(_read(args.graph))
    seq, report = solve(g, _policy(args), _config(args))
    width = report["width"]
    if args.cap is not None and width > args.cap:
        print(f"width {width} exceeds cap {args.cap}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_sequence(g, seq))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"width {width}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    g = parse_graph(_read(args.graph))
    try:
        seq = parse_sequence(g, _read(args.sequence))
        width = verify(g, seq, require_full=True)
    except TwinWidthError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 2
    print(f"width {width}")
    return 0


def _cmd_kernelize(args) -> int:
    g = parse_graph(_read(args.graph))
    trace = []
    if args.target == "tww2":
        outcome = tww2_bikernel(g, _config(args), trace)
    else:
        outcome = general_kernel(g, _policy(args), _config(args), trace)
    if outcome.is_solved:
        width = verify(g, outcome.solved)
        sys.stdout.write(f"c solved width={width}\np tww 1 0\n")
        payload = {
            "solved": True,
            "width": width,
            "sequence": emit_sequence(g, outcome.solved).splitlines(),
            "rules": trace,
        }
    else:
        sys.stdout.write(emit_graph(outcome.kernel))
        payload = {"solved": False, "meta": outcome.meta, "rules": trace}
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_fes(args) -> int:
    g = parse_graph(_read(args.graph))
    index = {v: i + 1 for i, v in enumerate(sorted(g.vertices))}
    fes = feedback_edge_set(g, ignore_red=True)
    out = {
        "feedback_edge_number": len(fes),
        "edges": [[index[u], index[v]] for u, v in fes],
    }
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_info(args) -> int:
    g = parse_graph(_read(args.graph))
    index = {v: i + 1 for i, v in enumerate(sorted(g.vertices))}
    fes = feedback_edge_set(g, ignore_red=True)
    trees = find_dangling_trees(g)
    stumps = classify_stumps(g)
    out = {
        "n": g.n,
        "black_edges": g.black_edge_count(),
        "red_edges": g.red_edge_count(),
        "feedback_edge_number": len(fes),
        "bridges": [[index[u], index[v]] for u, v in find_bridges(g)],
        "dangling_trees": [
            {
                "bridge": [index[t.bridge[0]], index[t.bridge[1]]],
                "size": len(t.vertices),
                "black": t.all_black,
            }
            for t in trees
        ],
        "dangling_paths": [len(p) for p in find_dangling_paths(g)],
        "stumps": {
            str(index[u]): [s.kind.value for s in ss] for u, ss in stumps.items()
        },
    }
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="twinwidth")
    sub = top.add_subparsers(dest="command", required=True)

    solve_p = sub.add_parser("solve", help="compute a contraction sequence")
    solve_p.add_argument("graph")
    solve_p.add_argument("--policy", default="practical:12")
    solve_p.add_argument("--cap", type=int, default=None)
    solve_p.add_argument("--threads", type=int, default=1)
    solve_p.add_argument("--seed", type=int, default=None,
                         help="reserved for corpus tooling; ignored by solve")
    solve_p.add_argument("--budget", type=int, default=20,
                         help="max vertex count for the exact endgame")
    solve_p.add_argument("--report", default=None)
    solve_p.set_defaults(func=_cmd_solve)

    verify_p = sub.add_parser("verify", help="check a sequence and print its width")
    verify_p.add_argument("graph")
    verify_p.add_argument("sequence")
    verify_p.set_defaults(func=_cmd_verify)

    kern_p = sub.add_parser("kernelize", help="write the reduced instance")
    kern_p.add_argument("graph")
    kern_p.add_argument("--target", choices=("tww2", "general"), default="tww2")
    kern_p.add_argument("--policy", default="practical:12")
    kern_p.add_argument("--threads", type=int, default=1)
    kern_p.add_argument("--budget", type=int, default=20)
    kern_p.add_argument("--trace", default=None)
    kern_p.set_defaults(func=_cmd_kernelize)

    fes_p = sub.add_parser("fes", help="minimum feedback edge set")
    fes_p.add_argument("graph")
    fes_p.set_defaults(func=_cmd_fes)

    info_p = sub.add_parser("info", help="structural summary")
    info_p.add_argument("graph")
    info_p.set_defaults(func=_cmd_info)
    return top


def run(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (TwinWidthError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
