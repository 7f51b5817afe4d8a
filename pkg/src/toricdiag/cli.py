"""Command-line front end. Every subcommand prints one JSON document on stdout."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import cacti
from . import constructions as cons
from . import ehrhart as eh
from . import equivalence as eq
from .errors import NotInFamilyError, ToricError
from .polytope import Polytope

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


@dataclass
class CommandResult:
    status: str
    payload: dict
    elapsed: float
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload,
                "elapsed_ms": round(self.elapsed * 1000, 3)}


class UsageError(Exception):
    code = "usage"


class ParseError(UsageError):
    code = "parse"


def _read_text(path: str, stdin=None) -> str:
    if path == "-":
        return (stdin or sys.stdin).read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str, stdin=None):
    text = _read_text(path, stdin)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(doc, dict) and "payload" in doc and "status" in doc:
        doc = doc["payload"]
    return doc


def _load_polytope(path: str, stdin=None) -> Polytope:
    doc = _load_json(path, stdin)
    if isinstance(doc, dict) and "diagram" in doc and "vertices" not in doc:
        doc = doc["diagram"]
    try:
        return Polytope.from_json(doc)
    except ToricError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def _load_preq_input(path: str, stdin=None):
    doc = _load_json(path, stdin)
    if isinstance(doc, dict) and "halfspaces" in doc:
        try:
            return [(tuple(int(x) for x in h["normal"]), int(h["offset"])) for h in doc["halfspaces"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad halfspace entry ({exc})") from None
    try:
        return Polytope.from_json(doc)
    except ToricError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from None


# ------------------------------------------------------------------ handlers
def _cmd_ehrhart(a, io):
    P = _load_polytope(a.file, io)
    L = eh.ehrhart(P, a.threads)
    n = P.dim
    return {"dim": n,
            "hstar": L.hstar.to_json(),
            "ehrhart": L.to_json(),
            "values": {str(t): str(L(t)) for t in range(n + 3)},
            "betti": eh.contact_betti(L.hstar).to_json()}


def _cmd_hstar(a, io):
    P = _load_polytope(a.file, io)
    return {"hstar": eh.hstar(P, a.threads).to_json()}


def _cmd_betti(a, io):
    P = _load_polytope(a.file, io)
    h = eh.hstar(P, a.threads)
    out = {"betti": eh.contact_betti(h).to_json()}
    if a.quotient:
        out["quotient"] = {"r": a.quotient,
                           "cb": {str(2 * i): str(eh.betti_from_quotient(h, a.quotient, i))
                                  for i in range(P.dim + 3)}}
    return out


def _cmd_dual(a, io):
    return _load_polytope(a.file, io).polar_dual().to_json()


def _cmd_preq(a, io):
    return cons.prequantize(_load_preq_input(a.file, io)).to_json()


def _cmd_family(a, io):
    kind, n, k = a.kind, a.n, a.k
    needs_k = kind in ("Pk", "Pkhalf", "Tk", "Dk")
    if needs_k and k is None:
        raise UsageError(f"--k is required for --kind {kind}")
    if kind == "bott":
        if a.bott_matrix is None:
            raise UsageError("--bott-matrix is required for --kind bott")
        L = cons.BottMatrix(tuple(map(tuple, _load_json(a.bott_matrix, io))))
        P = cons.bott_moment_polytope(L) if a.moment else cons.bott_diagram(L)
        return P.to_json()
    if n is None:
        raise UsageError("--n is required")
    builders = {
        "cube": lambda: cons.cube(n, a.lo, a.hi),
        "cross": lambda: cons.cross_polytope(n),
        "smallcross": lambda: cons.small_cross_polytope(n),
        "simplex": lambda: cons.simplex(n),
        "Pk": lambda: cons.family_Pk(n, k),
        "Pkhalf": lambda: cons.family_Pk_half(n, k),
        "Tk": lambda: cons.family_Tk(n, k),
        "Dk": lambda: cons.family_Dk(n, k),
    }
    return builders[kind]().to_json()


def _cmd_enumerate(a, io):
    n = a.n
    if a.count_only:
        if a.method == "enumerate":
            c = len(cacti.enumerate_cacti(n))
        else:
            c = cacti.count_cacti(n)
        return {"n": n, "count": str(c)}
    items = []
    for C in cacti.enumerate_cacti(n):
        item = {"code": C.code.decode(), "cactus": C.to_json()}
        if a.realize:
            item["diagram"] = cacti.realize(C).to_json()
        items.append(item)
    return {"n": n, "count": str(len(items)), "cacti": items}


def _cmd_realize(a, io):
    doc = _load_json(a.file, io)
    if isinstance(doc, dict) and "cactus" in doc:
        doc = doc["cactus"]
    try:
        C = cacti.RootedCactus.from_json(doc)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{a.file}: {exc}") from None
    return cacti.realize(C).to_json()


def _cmd_extract(a, io):
    C = cacti.extract_cactus(_load_polytope(a.file, io))
    return {"code": C.code.decode(), "cactus": C.to_json(), "triangles": C.size}


def _cmd_equiv(a, io):
    if a.a == "-" and a.b == "-":
        raise UsageError("only one of the two inputs can be stdin")
    return eq.unimodular_equivalent(_load_polytope(a.a, io), _load_polytope(a.b, io)).to_json()


def _cmd_identify(a, io):
    S = _load_polytope(a.file, io)
    try:
        return eq.identify_Dk(S).to_json()
    except NotInFamilyError as exc:
        reason = str(exc)
    w = eq.is_small_cross(S)
    if w.equivalent:
        return {"family": "small_cross", "n": S.dim, "map": w.map.to_json()}
    return {"family": "none", "reason": reason, "small_cross_failed_step": w.reason}


def _cmd_roots(a, io):
    if a.hstar:
        L = eh.ehrhart_from_hstar([int(x) for x in a.hstar.split(",")])
    elif a.file:
        L = eh.ehrhart(_load_polytope(a.file, io), a.threads)
    else:
        raise UsageError("give a polytope file or --hstar")
    return eh.root_real_parts(L, a.target, a.tol).to_json()


def _cmd_verify(a, io):
    from .verify import SUITES, run_suite
    names = list(SUITES) if a.suite == "all" else [a.suite]
    if a.suite != "all" and a.suite not in SUITES:
        raise UsageError(f"unknown suite {a.suite!r}; choose from all, {', '.join(SUITES)}")
    results = [run_suite(name) for name in names]
    return {"passed": all(r.passed for r in results), "suites": [r.to_json() for r in results]}


def build_parser(parser_class=argparse.ArgumentParser) -> argparse.ArgumentParser:
    p = parser_class(prog="toricdiag", description="Lattice polytopes and toric diagrams")
    p.add_argument("--threads", type=int, default=1, help="worker processes for point counting")
    p.add_argument("--envelope", action="store_true", help="wrap output with status and timing")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("ehrhart", _cmd_ehrhart, "h*, Ehrhart polynomial and Betti table"),
                            ("hstar", _cmd_hstar, "h*-vector"),
                            ("dual", _cmd_dual, "polar dual"),
                            ("preq", _cmd_preq, "prequantization of a Delzant polytope"),
                            ("extract", _cmd_extract, "cactus of a diagram"),
                            ("identify", _cmd_identify, "recognize D_k or the small cross-polytope")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file", help="polytope JSON, - for stdin")
        s.set_defaults(fn=fn)

    s = sub.add_parser("betti", help="contact Betti numbers from h*")
    s.add_argument("file")
    s.add_argument("--quotient", type=int, default=None, help="also the index-r quotient table")
    s.set_defaults(fn=_cmd_betti)

    s = sub.add_parser("family", help="emit a built-in polytope")
    s.add_argument("--kind", required=True,
                   choices=["cube", "cross", "smallcross", "simplex", "Pk", "Pkhalf", "Tk", "Dk", "bott"])
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--lo", type=int, default=-1)
    s.add_argument("--hi", type=int, default=1)
    s.add_argument("--bott-matrix", dest="bott_matrix")
    s.add_argument("--moment", action="store_true", help="moment polytope instead of the diagram")
    s.set_defaults(fn=_cmd_family)

    s = sub.add_parser("enumerate-cacti", help="rooted 3-cacti with n triangles")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--realize", action="store_true")
    s.add_argument("--count-only", action="store_true", dest="count_only")
    s.add_argument("--method", choices=["recurrence", "enumerate"], default="recurrence")
    s.set_defaults(fn=_cmd_enumerate)

    s = sub.add_parser("realize", help="diagram of a cactus")
    s.add_argument("file", help="cactus JSON (nested arrays)")
    s.set_defaults(fn=_cmd_realize)

    s = sub.add_parser("equiv", help="decide unimodular equivalence")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=_cmd_equiv)

    s = sub.add_parser("roots", help="complex roots of the Ehrhart polynomial")
    s.add_argument("file", nargs="?")
    s.add_argument("--hstar", help="comma-separated h* instead of a polytope")
    s.add_argument("--target", type=float, default=-1.0)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(fn=_cmd_roots)

    s = sub.add_parser("verify", help="replay an acceptance suite")
    s.add_argument("--suite", default="all")
    s.set_defaults(fn=_cmd_verify)
    return p


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def run(argv, stdin=None) -> CommandResult:
    t0 = time.perf_counter()
    parser = build_parser(_Parser)
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        payload = args.fn(args, stdin)
        status, code = "ok", EXIT_OK
        if args.command == "verify" and not payload["passed"]:
            status, code = "error", EXIT_VERIFY
    except (_ArgError, UsageError) as exc:
        kind = getattr(exc, "code", "usage")
        payload = {"error": {"code": kind, "message": str(exc)}}
        status, code = "error", EXIT_USAGE
    except ToricError as exc:
        payload = {"error": {"code": exc.code, "message": str(exc)}}
        status, code = "error", EXIT_DOMAIN
    return CommandResult(status, payload, time.perf_counter() - t0, code)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        build_parser().print_help(sys.stderr)
        return EXIT_USAGE
    if "-h" in argv or "--help" in argv:
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return exc.code or EXIT_OK
    res = run(argv)
    doc = res.to_json() if "--envelope" in argv else res.payload
    sys.stdout.write(json.dumps(doc) + "\n")
    if res.status == "error" and "error" in res.payload:
        sys.stderr.write(f"toricdiag: {res.payload['error']['message']}\n")
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
