"""Command-line front end over the whole toolkit.

One machine-readable document per invocation on stdout: JSON for every
subcommand except lp-dump, which emits LP text for other tools to ingest.
Human-facing chatter (summaries, timing) goes to stderr, so stdout is
byte-identical across repeated runs on the same input.  Exit status: 0 for
success, 1 when a verification suite fails its assertions, 2 for usage
errors, unreadable inputs, or cap violations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .bounds import (
    build_fractional_cover_lp,
    build_shannon_lp,
    clique_cover_number,
    entropy_bracket,
    fractional_clique_cover_number,
    max_matching,
    shannon_theta,
    transversal_number,
)
from .graphs import CapExceededError, FormatError, GraphError, bits_of, parse_graph, render_graph
from .guessing import max_guessing
from .lp import LinearProgram
from .rationals import Rational, rat_str
from .structure import certify_entropy_minimal_candidate, find_reducible_set
from .enumeration import (
    survey_entropy_values,
    verify_g_family,
    verify_small_theorems,
    verify_wheel_lemma,
)


class UsageFault(Exception):
    """Input problem with a remediation hint; reported on stderr, exit 2."""


def _jsonify(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Rational):
        return rat_str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _jsonify_witness(witness):
    tag, payload = witness
    out = {"tag": tag}
    for key, value in payload.items():
        if key == "inner":
            if isinstance(value, list):
                out[key] = [_jsonify_witness(w) for w in value]
            else:
                out[key] = _jsonify_witness(value)
        else:
            out[key] = _jsonify(value)
    return out


def _load_graph(source: str, fmt: str):
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageFault(f"cannot read graph file {source!r}: {exc}; "
                             "pass a readable path or '-' for stdin") from exc
    try:
        return parse_graph(text, fmt)
    except (FormatError, GraphError) as exc:
        raise UsageFault(f"cannot parse graph input: {exc}; expected graph6, "
                         "'n; u-v,...' edge list, or 'n; u->v,...' arc list") from exc


def _echo_graph(g) -> dict:
    if g.is_simple():
        return {"n": g.n, "format": "graph6", "text": render_graph(g, "graph6")}
    return {"n": g.n, "format": "arc-list", "text": render_graph(g, "arc-list")}


def _bracket_dict(bracket) -> dict:
    return {
        "lower": rat_str(bracket.lower),
        "upper": rat_str(bracket.upper),
        "exact": bracket.exact,
    }


# -- subcommands ----------------------------------------------------------------


def _cmd_bounds(args) -> tuple[dict, int]:
    g = _load_graph(args.graph, args.format)
    bracket = entropy_bracket(g, shannon_cap=args.shannon_cap, lazy_theta=args.lazy)
    nu = max_matching(g).size
    cc, _ = clique_cover_number(g)
    kappa_f, _ = fractional_clique_cover_number(g)
    tau, _ = transversal_number(g)
    theta = None if args.lazy else shannon_theta(g, cap=args.shannon_cap)
    result = {
        "graph": _echo_graph(g)["text"],
        "nu": nu,
        "cc": cc,
        "kappa_f": rat_str(kappa_f),
        "tau": tau,
        "theta": None if theta is None else rat_str(theta),
        "bracket": _bracket_dict(bracket),
        "witnesses": {
            "lower": _jsonify_witness(bracket.lower_witness),
            "upper": _jsonify_witness(bracket.upper_witness),
        },
    }
    _note(f"bracket [{bracket.lower}, {bracket.upper}]"
          f"{' exact' if bracket.exact else ''}")
    return {"input": _echo_graph(g), "result": result}, 0


def _cmd_guess(args) -> tuple[dict, int]:
    g = _load_graph(args.graph, args.format)
    value, code = max_guessing(g, args.q, cap=args.cap)
    code.validate()
    result = {
        "q": value.q,
        "code_size": value.code_size,
        "guessing_number": value.log_string(),
        "code": code.word_strings(),
        "optimal": True,
    }
    _note(f"guessing number {value.log_string()} ~ {value.as_float():.4f}")
    return {"input": _echo_graph(g), "result": result}, 0


def _cmd_reduce(args) -> tuple[dict, int]:
    g = _load_graph(args.graph, args.format)
    d = find_reducible_set(g, cap=args.cap)
    if d is None:
        result = {"reducible": False, "S": None, "matching": None, "remainder_graph6": None}
        _note("no reducible set")
    else:
        result = {
            "reducible": True,
            "S": sorted(bits_of(d.s)),
            "matching": [list(p) for p in d.matching],
            "remainder_graph6": render_graph(d.remainder, "graph6"),
        }
        _note(f"S = {sorted(bits_of(d.s))}, remainder on {d.remainder.n} vertices")
    return {"input": _echo_graph(g), "result": result}, 0


def _cmd_minimal_check(args) -> tuple[dict, int]:
    g = _load_graph(args.graph, args.format)
    report = certify_entropy_minimal_candidate(g, cap=args.cap)
    _note("candidate" if report.candidate else "not a candidate")
    return {"input": _echo_graph(g), "result": _jsonify(report.as_dict())}, 0


def _cmd_survey(args) -> tuple[dict, int]:
    cache = args.cache or os.environ.get("GRAPH_ENTROPY_CACHE") or None
    survey = survey_entropy_values(
        args.n,
        cache_dir=cache,
        jobs=args.jobs,
        shannon_cap=args.shannon_cap,
        connected_only=args.connected,
    )
    records = [
        {
            "graph6": r.graph6(),
            "n": r.graph.n,
            "connected": r.connected,
            "lower": rat_str(r.bracket.lower),
            "upper": rat_str(r.bracket.upper),
            "exact": r.exact,
        }
        for r in survey.records
    ]
    result = {
        "n_max": survey.n_max,
        "connected_only": args.connected,
        "classes": len(records),
        "collapsed_values": [rat_str(v) for v in survey.values],
        "collapsed_values_le_4": [rat_str(v) for v in survey.values_up_to(4)],
        "unresolved": [rec for rec in records if not rec["exact"]],
        "records": records,
    }
    _note(f"{len(records)} classes, {len(survey.unresolved)} unresolved")
    return {"input": {"n": args.n, "connected": args.connected}, "result": result}, 0


def _cmd_verify(args) -> tuple[dict, int]:
    if args.suite == "wheel":
        report = verify_wheel_lemma(shannon_cap=args.shannon_cap)
    elif args.suite == "gfamily":
        report = verify_g_family(shannon_cap=args.shannon_cap)
    else:
        cache = args.cache or os.environ.get("GRAPH_ENTROPY_CACHE") or None
        report = verify_small_theorems(
            cache_dir=cache, jobs=args.jobs, shannon_cap=args.shannon_cap
        )
    _note(f"suite {args.suite}: {'ok' if report.ok else 'FAILED'}")
    return {"input": {"suite": args.suite}, "result": _jsonify(report.as_dict())}, (
        0 if report.ok else 1
    )


def _var_name(mask: int) -> str:
    if mask == 0:
        return "h_empty"
    return "h_" + "".join(str(v) for v in bits_of(mask))


def _lp_terms(pairs, names) -> str:
    parts = []
    for j, c in pairs:
        if c == 0:
            continue
        mag = c if c > 0 else -c
        coeff = "" if mag == 1 else f"{rat_str(mag)} "
        term = f"{coeff}{names(j)}"
        if not parts:
            parts.append(term if c > 0 else f"- {term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts) if parts else "0"


def _lp_text(lp: LinearProgram, names, header: list[str]) -> str:
    lines = [f"\\ {line}" for line in header]
    lines.append("Maximize" if lp.sense == "max" else "Minimize")
    objective = [(j, c) for j, c in enumerate(lp.objective) if c != 0]
    lines.append(f" obj: {_lp_terms(objective, names)}")
    lines.append("Subject To")
    for i, (coeffs, rel, rhs) in enumerate(lp.rows):
        lines.append(f" r{i}: {_lp_terms(coeffs, names)} {rel} {rat_str(rhs)}")
    if lp.free_vars:
        lines.append("Bounds")
        for j in sorted(lp.free_vars):
            lines.append(f" {names(j)} free")
    lines.append("End")
    return "\n".join(lines) + "\n"


def _cmd_lp_dump(args) -> tuple[str, int]:
    g = _load_graph(args.graph, args.format)
    key = _echo_graph(g)["text"]
    if args.which == "shannon":
        if g.n > args.shannon_cap:
            raise UsageFault(
                f"{g.n} vertices exceed the subset-entropy cap {args.shannon_cap}; "
                "raise --shannon-cap if you mean it"
            )
        lp = build_shannon_lp(g)
        header = [
            f"subset-entropy LP for {key}",
            f"{lp.num_vars} variables, one per vertex subset; objective is the full set",
        ]
        return _lp_text(lp, _var_name, header), 0
    lp, cliques = build_fractional_cover_lp(g)
    header = [f"fractional clique cover LP for {key}"]
    for i, c in enumerate(cliques):
        header.append(f"w_{i} weights clique {sorted(bits_of(c))}")
    return _lp_text(lp, lambda j: f"w_{j}", header), 0


def _note(message: str) -> None:
    if sys.stderr.isatty():
        print(message, file=sys.stderr)


# -- argument parsing -------------------------------------------------------------


def _add_graph_arg(sub) -> None:
    sub.add_argument("--graph", required=True,
                     help="graph file (graph6, edge list, or arc list); '-' reads stdin")
    sub.add_argument("--format", default="auto",
                     choices=["auto", "graph6", "edge-list", "arc-list"],
                     help="input format (default: sniff)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphentropy",
        description="Certified entropy bounds and guessing numbers for small graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("bounds", help="entropy bracket with all bound values")
    _add_graph_arg(p)
    p.add_argument("--shannon-cap", type=int, default=10,
                   help="largest component size the subset-entropy LP will take")
    p.add_argument("--lazy", action="store_true",
                   help="skip the LP when the transversal already collapses the bracket")
    p.set_defaults(run=_cmd_bounds)

    p = subs.add_parser("guess", help="exact guessing number over q symbols")
    _add_graph_arg(p)
    p.add_argument("--q", type=int, required=True, help="alphabet size (>= 2)")
    p.add_argument("--cap", type=int, default=4096, help="largest q**n word space")
    p.set_defaults(run=_cmd_guess)

    p = subs.add_parser("reduce", help="find a vertex set S with an S-saturating matching")
    _add_graph_arg(p)
    p.add_argument("--cap", type=int, default=16, help="largest vertex count to search")
    p.set_defaults(run=_cmd_reduce)

    p = subs.add_parser("minimal-check", help="necessary conditions for entropy minimality")
    _add_graph_arg(p)
    p.add_argument("--cap", type=int, default=16, help="largest vertex count to check")
    p.set_defaults(run=_cmd_minimal_check)

    p = subs.add_parser("survey", help="entropy landscape over all small graphs")
    p.add_argument("--n", type=int, required=True, help="largest vertex count (<= 7)")
    p.add_argument("--connected", action="store_true", help="connected classes only")
    p.add_argument("--cache", default=None,
                   help="bracket cache directory (default: $GRAPH_ENTROPY_CACHE)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--shannon-cap", type=int, default=10)
    p.set_defaults(run=_cmd_survey)

    p = subs.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=["wheel", "gfamily", "theorem2"])
    p.add_argument("--cache", default=None,
                   help="bracket cache directory (default: $GRAPH_ENTROPY_CACHE)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--shannon-cap", type=int, default=10)
    p.set_defaults(run=_cmd_verify)

    p = subs.add_parser("lp-dump", help="print an LP exactly as the solver sees it")
    _add_graph_arg(p)
    p.add_argument("--which", required=True, choices=["shannon", "fractional-cover"])
    p.add_argument("--shannon-cap", type=int, default=10)
    p.set_defaults(run=_cmd_lp_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        payload, status = args.run(args)
    except UsageFault as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}; raise the relevant --cap flag to proceed", file=sys.stderr)
        return 2
    except (FormatError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    if isinstance(payload, str):
        sys.stdout.write(payload)
    else:
        report = {
            "command": args.command,
            "version": __version__,
            "input": payload["input"],
            "result": payload["result"],
        }
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    print(f"timing: {elapsed:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
