"""Command-line entry point.

Exit codes: 0 every assertion passed, 1 some assertion failed, 2 usage
error, 3 bad input (malformed files, unknown labels, unmet preconditions).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .errors import GradedNetsError
from .graded_algebra import adjoint, conditional_expectation, multiply, norm_estimate
from .homotopy import abelianization, loop_group_presentation
from .io import digest, element_to_dict, load_element, load_morphism, load_net, load_poset
from .net_algebras import (AlgebraNet, build_corona, corona_morphism, example_scenario,
                           induced_algebra_morphism, induced_group_map, validate_hilbert_morphism,
                           verify_corona, verify_corona_morphism, verify_isotony)
from .net_hilbert import verify_chi_laws
from .paths import check_confluence, equivalent, parse_path, reduce
from .poset import is_path_connected, is_upward_directed, maximal_directed_subsets
from .report import Report, _jsonable


class RunReport:
    def __init__(self, command: str):
        self.command = command
        self.inputs: dict[str, str] = {}
        self.report = Report(command)
        self.started = time.perf_counter()

    def track(self, paths) -> None:
        for p in paths:
            self.inputs[str(p)] = digest(p)

    def to_dict(self) -> dict:
        out = self.report.to_dict()
        out.pop("title")
        return {"command": self.command, "inputs": self.inputs, **out,
                "elapsed_ms": round(1000 * (time.perf_counter() - self.started), 3)}


# -- subcommands -------------------------------------------------------------

def cmd_poset(args, run: RunReport) -> None:
    P, used = load_poset(args.poset)
    run.track(used)
    run.report.data.update({
        "elements": [str(e) for e in P.elements],
        "covers": [[str(a), str(b)] for a, b in P.cover_pairs()],
        "maximal": [str(m) for m in P.maximal_elements()],
        "path_connected": is_path_connected(P),
        "upward_directed": is_upward_directed(P),
        "directed_blocks": maximal_directed_subsets(P, args.bound).as_lists(),
        "confluence_certified": P.certified,
    })


def cmd_paths(args, run: RunReport) -> None:
    P, used = load_poset(args.poset)
    run.track(used)
    if args.action == "reduce":
        if len(args.path) != 1:
            raise UsageError("paths reduce takes exactly one --path")
        p = parse_path(P, args.path[0])
        run.report.data.update({"input": str(p), "reduced": str(reduce(P, p))})
    elif args.action == "equiv":
        if len(args.path) != 2:
            raise UsageError("paths equiv takes exactly two --path")
        p, q = (parse_path(P, t) for t in args.path)
        v = equivalent(P, p, q, budget=args.budget)
        run.report.data.update({"left": str(p), "right": str(q), "verdict": str(v),
                                "left_reduced": str(reduce(P, p)), "right_reduced": str(reduce(P, q))})
    else:
        cert = check_confluence(P)
        run.report.check("all critical pairs joinable", cert.certified, len(cert.critical_pairs),
                         [f"{c.peak} -> {c.left} | {c.right}" for c in cert.witnesses[:5]])
        run.report.data.update({"critical_pairs": len(cert.critical_pairs),
                                "certified": cert.certified})


def cmd_pi1(args, run: RunReport) -> None:
    P, used = load_poset(args.poset)
    run.track(used)
    base = args.base if args.base is not None else P.elements[0]
    G = loop_group_presentation(P, base)
    if args.action == "present":
        run.report.data.update(G.to_dict())
    else:
        run.report.data.update(abelianization(G).to_dict())


def cmd_net(args, run: RunReport) -> None:
    N, used = load_net(args.net)
    run.track(used)
    run.report.extend(verify_chi_laws(N), "chi: ")
    run.report.extend(verify_isotony(AlgebraNet(N), max_letters=2), "alpha: ")
    run.report.data.update({"dims": {str(k): v for k, v in N.dims.items()}, "L": N.L,
                            "gammas_bijective": N.all_gammas_bijective})


def cmd_algebra(args, run: RunReport) -> None:
    N, used = load_net(args.net)
    run.track(used)
    elems = []
    for e in args.elem:
        x, u = load_element(e, N, args.base)
        run.track(u)
        elems.append(x)
    if args.action == "mul":
        if len(elems) != 2:
            raise UsageError("algebra mul takes exactly two --elem")
        out = multiply(*elems)
    elif len(elems) != 1:
        raise UsageError(f"algebra {args.action} takes exactly one --elem")
    elif args.action == "adj":
        out = adjoint(elems[0])
    else:
        x = elems[0]
        out = conditional_expectation(x)
        lhs, rhs = norm_estimate(out, args.tol), norm_estimate(x, args.tol)
        run.report.check("||E(x)|| <= ||x|| + tol", lhs <= rhs + args.tol, 1, [lhs, rhs])
        run.report.check("E idempotent", conditional_expectation(out) == out, 1)
        run.report.data["norms"] = {"expectation": lhs, "element": rhs}
    run.report.data["result"] = element_to_dict(out)


def cmd_corona(args, run: RunReport) -> None:
    N, used = load_net(args.net)
    run.track(used)
    C = build_corona(AlgebraNet(N), args.bound)
    run.report.extend(verify_corona(C, max_letters=1))
    run.report.data.update(C.to_dict())


def cmd_morphism(args, run: RunReport) -> None:
    K, u1 = load_net(args.src)
    L, u2 = load_net(args.dst)
    M, u3 = load_morphism(args.map, K, L)
    run.track(u1 + u2 + u3)
    valid = validate_hilbert_morphism(M)
    run.report.extend(valid, "net: ")
    if not valid.ok:
        return
    for a in K.poset.elements:
        _, sub = induced_algebra_morphism(M, a)
        run.report.extend(sub, f"{a}: ")
    CK, CL = build_corona(AlgebraNet(K)), build_corona(AlgebraNet(L))
    run.report.extend(verify_corona_morphism(corona_morphism(M, CK, CL), CK, CL), "corona: ")
    if is_path_connected(K.poset) and is_path_connected(L.poset):
        base = args.base if args.base is not None else K.poset.elements[0]
        run.report.data["group map"] = induced_group_map(M, base).to_dict()


def cmd_example(args, run: RunReport) -> None:
    rep = example_scenario()
    run.report.extend(rep)
    run.report.data.update(rep.data)


def cmd_suite(args, run: RunReport) -> None:
    from .suite import CRITERIA

    for name, fn in CRITERIA:
        t = time.perf_counter()
        rep = fn()
        run.report.extend(rep, f"{name}: ")
        run.report.data[name] = {"ok": rep.ok, "assertions": len(rep.assertions),
                                 "seconds": round(time.perf_counter() - t, 3)}


# -- parser ------------------------------------------------------------------

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the run report as JSON")
    common.add_argument("--quiet", action="store_true", help="print nothing; rely on the exit code")
    common.add_argument("--tol", type=float, default=1e-9, help="slack for floating-point checks")
    common.add_argument("--budget", type=int, default=2000, help="search budget for equivalence")
    common.add_argument("--bound", type=int, default=20, help="largest poset for block enumeration")
    common.add_argument("--base", help="basepoint")

    p = _Parser(prog="gradednets", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("poset", parents=[common], help="summarize a poset")
    s.add_argument("--poset", required=True)
    s.set_defaults(func=cmd_poset)

    s = sub.add_parser("paths", parents=[common], help="reduce paths and decide equivalence")
    s.add_argument("action", choices=["reduce", "equiv", "confluence"])
    s.add_argument("--poset", required=True)
    s.add_argument("--path", action="append", default=[])
    s.set_defaults(func=cmd_paths)

    s = sub.add_parser("pi1", parents=[common], help="loop group presentation and abelianization")
    s.add_argument("action", choices=["present", "abelianize"])
    s.add_argument("--poset", required=True)
    s.set_defaults(func=cmd_pi1)

    s = sub.add_parser("net", parents=[common], help="verify a truncated net")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--net", required=True)
    s.set_defaults(func=cmd_net)

    s = sub.add_parser("algebra", parents=[common], help="operate on graded elements")
    s.add_argument("action", choices=["mul", "adj", "expect"])
    s.add_argument("--net", required=True)
    s.add_argument("--elem", action="append", default=[])
    s.set_defaults(func=cmd_algebra)

    s = sub.add_parser("corona", parents=[common], help="build the corona of a net")
    s.add_argument("action", choices=["build"])
    s.add_argument("--net", required=True)
    s.set_defaults(func=cmd_corona)

    s = sub.add_parser("morphism", parents=[common], help="verify a morphism of nets")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--src", required=True)
    s.add_argument("--dst", required=True)
    s.add_argument("--map", required=True)
    s.set_defaults(func=cmd_morphism)

    s = sub.add_parser("example", parents=[common], help="run the crown-into-cone scenario")
    s.add_argument("action", choices=["run"])
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    s.set_defaults(func=cmd_suite)
    return p


def _print_text(run: RunReport) -> None:
    for line in run.report.lines():
        print(line)
    for key, value in run.report.data.items():
        if isinstance(value, (str, int, float, bool)):
            print(f"{key}: {value}")
        else:
            print(f"{key}: {json.dumps(_jsonable(value), sort_keys=True)}")
    status = "ok" if run.report.ok else f"{len(run.report.failures())} assertion(s) failed"
    print(f"{run.command}: {status}")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    command = " ".join([args.command] + ([args.action] if hasattr(args, "action") else []))
    run = RunReport(command)
    try:
        args.func(args, run)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GradedNetsError as exc:
        if args.json:
            print(json.dumps({"command": command, "error": type(exc).__name__, "message": str(exc)}))
        elif not args.quiet:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.json:
        print(json.dumps(run.to_dict(), indent=2, sort_keys=True))
    elif not args.quiet:
        _print_text(run)
    return 0 if run.report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
