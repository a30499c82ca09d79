"""Command-line driver.

Exit codes: 0 success, 2 usage or input error, 3 bridge level refused,
4 audit failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .audit.report import format_table
from .audit.suites import run_suite, suite_names
from .exceptions import BridgeUnsupported, GradualPrivacyError
from .mechanism import GradualLaplaceMechanism, Response, tighten_for_third_party
from .rng import RandomSource
from .social import read_edge_list, run_social_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BRIDGE = 3
EXIT_AUDIT_FAILED = 4


class UsageError(Exception):
    pass


def _floats(text):
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    return values


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _dump_line(record):
    return json.dumps(record, sort_keys=True) + "\n"


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _load_state(path):
    with open(path, encoding="utf-8") as fh:
        return GradualLaplaceMechanism.loads(fh.read())


def _new_mechanism(args):
    if args.data is None:
        raise UsageError("--data is required to initialise a mechanism")
    return GradualLaplaceMechanism(epsilon=args.eps or 1.0, alpha=args.alpha, random_state=args.seed).fit(
        np.asarray(args.data)
    )


def cmd_init(args):
    if os.path.exists(args.state) and not args.force:
        raise UsageError(f"{args.state} already exists; pass --force to overwrite")
    mech = _new_mechanism(args)
    _write_text(args.state, mech.dumps())
    return EXIT_OK


def cmd_release(args):
    if os.path.exists(args.state):
        mech = _load_state(args.state)
    else:
        mech = _new_mechanism(args)
    response = mech.release(args.eps)
    _write_text(args.state, mech.dumps())
    _write_text(args.out, _dump_line({"kind": "response", **response.to_record()}))
    return EXIT_OK


def cmd_tighten(args):
    with open(args.input, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    if len(lines) != 1:
        raise UsageError(f"{args.input} must hold exactly one response record")
    response = Response.from_record(json.loads(lines[0]))
    rng = RandomSource(args.seed).next_generator()
    tightened = tighten_for_third_party(response, args.eps, args.alpha, rng)
    _write_text(args.out, _dump_line({"kind": "response", **tightened.to_record()}))
    return EXIT_OK


def cmd_audit(args):
    reports = run_suite(args.suite, seed=args.seed, n=args.n)
    _write_text(args.out, "".join(r.to_json() + "\n" for r in reports))
    print(format_table(reports), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_AUDIT_FAILED


def cmd_scenario_social(args):
    if args.data is None:
        raise UsageError("--data is required for the scenario")
    graph = read_edge_list(args.graph)
    result = run_social_scenario(
        graph, args.owner, np.asarray(args.data), alpha=args.alpha, seed=args.seed, subset=args.subset or ()
    )
    lines = []
    for item in result.per_node:
        resp = Response(eps_dp=item.eps, eps_lipschitz=item.eps / args.alpha, values=item.values)
        lines.append(_dump_line({"kind": "node", "node": item.node, "distance": item.distance, **resp.to_record()}))
    for node in result.unreachable:
        lines.append(_dump_line({"kind": "node", "node": node, "distance": None, "response": None}))
    lines.append(
        _dump_line(
            {
                "kind": "summary",
                "owner": args.owner,
                "collusion_bound": result.collusion_bound,
                "subset": result.subset,
                "subset_bound": result.subset_bound,
            }
        )
    )
    _write_text(args.out, "".join(lines))
    return EXIT_OK


def cmd_inspect(args):
    mech = _load_state(args.state)
    summary = {
        "n": int(mech.data_.size),
        "shape": list(mech.data_.shape),
        "alpha": float(mech.alpha),
        "seed": mech.seed_,
        "released_levels": mech.released_levels_,
        "stored_lipschitz_levels": [] if mech.chain_ is None else list(mech.chain_.levels),
    }
    _write_text(args.out, json.dumps(summary, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gradual-privacy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, state=False, out=True):
        if state:
            p.add_argument("--state", required=True, help="mechanism state file")
        if out:
            p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("init", help="create a mechanism state file")
    common(p, state=True, out=False)
    p.add_argument("--data", type=_floats, required=True, help="private vector, comma separated")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=None, help="default release level")
    p.add_argument("--force", action="store_true", help="overwrite an existing state file")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("release", help="release (or re-read) the response at a DP level")
    common(p, state=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--data", type=_floats, default=None, help="initialise if the state file is missing")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("tighten", help="derive a more private response from a released one")
    common(p)
    p.add_argument("--in", dest="input", required=True, help="response file to tighten")
    p.add_argument("--eps", type=float, required=True, help="target (lower) DP level")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tighten)

    p = sub.add_parser("audit", help="run a statistical audit suite")
    common(p)
    p.add_argument("suite", choices=suite_names())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1_000_000)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("scenario-social", help="distance-based releases over a social graph")
    common(p)
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--owner", type=int, required=True)
    p.add_argument("--data", type=_floats, default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subset", type=_ints, default=None, help="colluding users, comma separated")
    p.set_defaults(func=cmd_scenario_social)

    p = sub.add_parser("inspect", help="summarise a state file")
    common(p, state=True)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BridgeUnsupported as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BRIDGE
    except (UsageError, GradualPrivacyError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
