"""Command-line front end.

    hyperforest poly --input G.json --mode unrooted
    hyperforest verify partition-function --trials 50 --seed 7

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from . import hypergraph as hg
from . import integrals, potts
from .errors import CapExceeded, HyperforestError, ParseError, SizeCap, UnknownIdentity
from .hypergraph import Hypergraph
from .matrixtree import general_action as ga
from .matrixtree import laplacian as lap
from .ring import Polynomial, as_poly, var
from .suites import SUITES, Params, run_suite

SCHEMA = "hyperforest/1"
MODES = ("unrooted", "rooted", "general", "trees", "potts-fk")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(HyperforestError):
    pass


# -- input --------------------------------------------------------------


def _value(x) -> Polynomial:
    if isinstance(x, dict):
        try:
            return Polynomial.from_json(x)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad polynomial value: {exc}") from exc
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise ParseError(f"bad value {x!r}")
    if isinstance(x, float):
        raise ParseError("floating-point values are not accepted; use a rational string like '1/2'")
    return as_poly(x)


def _values(obj, key: str, count: int):
    """A scalar applies to every slot; a list gives one value per slot."""
    if key not in obj:
        return None
    raw = obj[key]
    if isinstance(raw, list):
        if len(raw) != count:
            raise ParseError(f"{key!r} needs {count} values, got {len(raw)}")
        return [_value(x) for x in raw]
    return [_value(raw)] * count


def read_input(path: Optional[str]) -> dict:
    if path is None:
        raise UsageError("--input is required")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError("input must be a JSON object")
    return obj


def _graph_of(obj: dict) -> Hypergraph:
    return Hypergraph.from_json(obj.get("hypergraph", obj))


# -- poly ---------------------------------------------------------------


def _check_caps(G: Hypergraph, args) -> None:
    if args.max_n is not None and G.n > args.max_n:
        raise CapExceeded("vertex", G.n, args.max_n)
    if args.max_edges is not None and G.m > args.max_edges:
        raise CapExceeded("edge", G.m, args.max_edges)


def compute_poly(obj: dict, mode: str, crosscheck: bool = True, max_edges: Optional[int] = None):
    """(polynomial, cross-check result or None)."""
    G = _graph_of(obj)
    w = _values(obj, "w", G.m)
    t = _values(obj, "t", G.n)
    lam = _value(obj["lambda"]) if "lambda" in obj else var("lambda")
    edge_cap = 24 if max_edges is None else max_edges
    if G.m > edge_cap:
        raise CapExceeded("edge", G.m, edge_cap)
    if mode == "unrooted":
        spec = integrals.ActionSpec.build(G, lam, w, lam, lam)
        p = integrals.z_partition(spec)
        check = (lambda: p == hg.constrained_forest_sum(G, list(spec.w), lam, ())) if crosscheck else None
    elif mode == "rooted":
        # each root carries its own t_i unless values are given
        t = t if t is not None else [var(f"t_{i}") for i in range(G.n)]
        spec = integrals.ActionSpec.build(G, t, w, 0, lam)
        p = integrals.z_partition(spec)
        check = (lambda: p == hg.forest_weight_sum(G, list(spec.w), list(spec.t), 0)) if crosscheck else None
    elif mode == "general":
        act = ga.GeneralAction.symbolic(G)
        p = ga.general_action_integral(act)
        check = (lambda: p == ga.oriented_config_sum(act, max_edges=edge_cap)) if crosscheck else None
    elif mode == "trees":
        # hypertrees are the one-component terms of the unrooted sum
        spec = integrals.ActionSpec.build(G, var("lambda"), w, var("lambda"))
        p = integrals.z_partition(spec).coefficient("lambda", 1) if G.n else Polynomial.const(0)
        check = (lambda: p == _tree_oracle(G, list(spec.w), edge_cap)) if crosscheck else None
    elif mode == "potts-fk":
        q = obj.get("q", "q")
        if not isinstance(q, int) or isinstance(q, bool):
            q = _value(q)
        spec = potts.PottsSpec.build(G, q, w)
        p = potts.fk_polynomial(spec, edge_cap)
        check = (lambda: _fk_oracle(G, spec, p)) if crosscheck else None
    else:
        raise UsageError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    return p, (check() if check else None)


def _tree_oracle(G: Hypergraph, w, max_edges: int) -> Polynomial:
    total = sum((hg._forest_monomial(w, r.edge_mask) for r in hg.spanning_hypertrees(G, max_edges)), Polynomial.const(0))
    if G.is_graph() and G.n:
        by_det = lap.principal_minor_trees(G, (0,), w)
        if by_det != total:
            return by_det
    return total


def _fk_oracle(G: Hypergraph, spec: potts.PottsSpec, p: Polynomial) -> bool:
    """Spin sums at q = 1, 2, 3 for symbolic q, or at the given integer q."""
    q = spec.q_value
    if isinstance(q, int):
        cases = [(q, p)]
    elif q == potts.Q:
        cases = [(k, p.substitute({"q": k})) for k in (1, 2, 3)]
    else:
        raise UsageError("q must be a positive integer or the symbol q")
    for qv, expect in cases:
        if G.n > potts.SPIN_VERTEX_CAP or qv ** G.n > potts.SPIN_CAP:
            continue
        if potts.potts_bruteforce(potts.PottsSpec(G, qv, spec.v)) != expect:
            return False
    return True


def cmd_poly(args) -> tuple:
    obj = read_input(args.input)
    G = _graph_of(obj)
    _check_caps(G, args)
    p, ok = compute_poly(obj, args.mode, not args.skip_crosscheck, args.max_edges)
    out = {
        "schema": SCHEMA,
        "command": "poly",
        "mode": args.mode,
        "hypergraph": G.to_json(),
        "polynomial": p.to_json(),
        "text": str(p),
        "crosscheck": "skipped" if ok is None else ok,
    }
    code = EXIT_FAIL if ok is False else EXIT_OK
    if args.format == "text":
        note = "" if ok is None else ("  [cross-check ok]" if ok else "  [CROSS-CHECK FAILED]")
        return f"{p}{note}\n", code
    return out, code


# -- verify -------------------------------------------------------------


def cmd_verify(args) -> tuple:
    name = args.identity_pos or args.identity
    if not name:
        raise UsageError("an identity name is required")
    if name not in SUITES:
        raise UnknownIdentity(f"unknown identity {name!r}; known: {', '.join(SUITES)}")
    if args.input is not None:
        return _verify_instance(name, args)
    params = Params(args.n, args.max_n, args.max_edges)
    start = time.perf_counter()
    reports = run_suite(name, args.trials, args.seed, params)
    ok = all(r["equal"] for r in reports)
    out = {
        "schema": SCHEMA,
        "command": "verify",
        "identity": name,
        "seed": args.seed,
        "trials": args.trials,
        "params": {"n": args.n, "max_n": args.max_n, "max_edges": args.max_edges},
        "all_equal": ok,
        "failures": [r["trial"] for r in reports if not r["equal"]],
        "reports": reports,
    }
    if args.timings:
        out["millis"] = int((time.perf_counter() - start) * 1000)
    code = EXIT_OK if ok else EXIT_FAIL
    if args.format == "text":
        lines = [f"trial {r['trial']}: {'ok' if r['equal'] else 'FAIL'}" for r in reports]
        lines.append(f"{name}: {sum(r['equal'] for r in reports)}/{len(reports)} equal")
        return "\n".join(lines) + "\n", code
    return out, code


def _verify_instance(name: str, args) -> tuple:
    if name not in integrals.IDENTITIES:
        raise UsageError(f"--input replay is supported for: {', '.join(integrals.IDENTITIES)}")
    obj = read_input(args.input)
    try:
        inst = integrals.Instance.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad instance: {exc}") from exc
    rep = integrals.verify_identity(name, inst, args.max_n)
    if not args.timings:
        rep.pop("millis")
    out = {"schema": SCHEMA, "command": "verify", **rep}
    code = EXIT_OK if rep["equal"] else EXIT_FAIL
    if args.format == "text":
        return f"{name}: {'ok' if rep['equal'] else 'FAIL'}\n", code
    return out, code


# -- entry point --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="JSON file, or - for stdin")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-n", type=int, dest="max_n", help="vertex cap")
    common.add_argument("--max-edges", type=int, dest="max_edges", help="hyperedge cap")

    parser = _Parser(prog="hyperforest", description="Exact Grassmann integrals and hyperforest expansions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("poly", parents=[common], help="generating polynomial of a hypergraph")
    p.add_argument("--mode", choices=MODES, default="unrooted")
    p.add_argument("--skip-crosscheck", action="store_true", help="skip the combinatorial cross-check")

    v = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    v.add_argument("identity_pos", nargs="?", metavar="identity", help=", ".join(SUITES))
    v.add_argument("--identity")
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int, help="fixed vertex count for generated instances")
    v.add_argument("--timings", action="store_true", help="include wall-clock millis (breaks byte-determinism)")

    sub.add_parser("list", help="list verification suites")
    return parser


def _emit(result, stream) -> None:
    if isinstance(result, str):
        stream.write(result)
    else:
        stream.write(json.dumps(result, indent=2, ensure_ascii=False) + "\n")


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "poly":
            result, code = cmd_poly(args)
        elif args.command == "verify":
            result, code = cmd_verify(args)
        elif args.command == "list":
            result, code = "".join(f"{name}\n" for name in SUITES), EXIT_OK
        else:
            raise UsageError("expected a command: poly, verify or list")
    except (CapExceeded, SizeCap) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_CAP
    except (UsageError, ParseError, UnknownIdentity) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except HyperforestError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _emit(result, stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
