"""Command-line front end.

Exit codes: 0 success, 1 internal invariant violation, 2 invalid input,
3 valid input outside rule or theorem coverage.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Callable, Mapping, Sequence

from . import __version__
from .cdim_engine import CdimQuery, CdimResult, cdim, explain
from .errors import InvalidInput, InvariantViolation, OutsideHypotheses
from .flag_varieties import (
    Factor,
    FlagSpec,
    ReductionTrace,
    VarietyExpr,
    decompose_primary_variety,
    reduce_flag,
)
from .index_arithmetic import AlgebraClass
from .motive import (
    ChowSummand,
    MotiveDecomposition,
    RankIdentityReport,
    decompose_square,
    middle_chow_decomposition,
    verify_rank_identity,
)
from .parity import IncompressibilityVerdict, certify_incompressible
from .weyl import (
    CosetSummand,
    RootSubset,
    brute_force_ceiling,
    double_cosets_brute,
    double_cosets_matrix,
    square_cosets,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_UNCOVERED = 0, 1, 2, 3
WEYL_MAX_E = 32
SCHEMA_VERSION = 1

_FLAGS_RE = re.compile(r"^[0-9]+(,[0-9]+)*$")


class UsageError(InvalidInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def parse_flags(text: str) -> list[int]:
    if not _FLAGS_RE.match(text):
        raise InvalidInput(f"--flags must be comma-separated integers without spaces, got {text!r}")
    dims = [int(x) for x in text.split(",")]
    if any(a >= b for a, b in zip(dims, dims[1:])):
        raise InvalidInput(f"--flags must be strictly increasing, got {text}")
    return dims


def _flags_arg(text: str) -> list[int]:
    try:
        return parse_flags(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _algebra(index: int, minimum: int = 1) -> AlgebraClass:
    if index < minimum:
        raise InvalidInput(f"--index must be >= {minimum}, got {index}")
    return AlgebraClass.of_index(index)


def document(name: str, args: Mapping[str, Any], result: Mapping[str, Any],
             trace: Sequence[str] | None = None) -> dict:
    return {
        "command": {"name": name, "args": dict(args)},
        "result": dict(result),
        "trace": list(trace) if trace is not None else None,
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
    }


def cmd_reduce(index: int, flags: Sequence[int]) -> dict:
    A = _algebra(index, minimum=2)
    spec = FlagSpec(index, flags)
    reduced, trace = reduce_flag(A, spec)
    d = reduced.factors[0].flag.dims[0]
    decomposed = None
    if d < index:
        decomposed, more = decompose_primary_variety(A, d)
        trace = trace.then(more)
    result = {
        "input": VarietyExpr((Factor(A, spec),)).to_dict(),
        "d": d,
        "reduced": reduced.to_dict(),
        "decomposed": decomposed.to_dict() if decomposed else None,
        "split": d == index,
        "reduction_trace": trace.to_dict(),
    }
    return document("reduce", {"index": index, "flags": list(flags)}, result,
                    [str(s) for s in trace.steps])


def cmd_cdim(index: int, flags: Sequence[int], p: int, char0: bool = False) -> tuple[dict, CdimResult]:
    if p < 0:
        raise InvalidInput(f"--p must be >= 0, got {p}")
    A = _algebra(index)
    res = cdim(CdimQuery(A, FlagSpec(index, flags), p, char0))
    doc = document("cdim", {"index": index, "flags": list(flags), "p": p, "char0": char0},
                   res.to_dict(), explain(res).splitlines())
    return doc, res


def cmd_weyl(e: int, verify: bool = False) -> dict:
    if not 1 <= e <= WEYL_MAX_E:
        raise InvalidInput(f"--e must lie in 1..{WEYL_MAX_E}, got {e}")
    n = 2 * e
    S = RootSubset.without(n, {e})
    cosets = square_cosets(e, "matrix")
    verification = None
    if verify:
        ceiling = brute_force_ceiling()
        if n > ceiling:
            raise OutsideHypotheses(
                f"--verify needs n = 2e <= {ceiling} (brute-force ceiling), got n = {n}")
        brute = double_cosets_brute(n, S)
        verification = {
            "backend": "brute",
            "n": n,
            "count": len(brute),
            "agrees": brute == double_cosets_matrix(n, S),
        }
        if not verification["agrees"]:
            raise InvariantViolation("brute-force and contingency-matrix cosets disagree")
    result = {
        "e": e,
        "n": n,
        "parabolic": S.to_dict(),
        "count": len(cosets),
        "cosets": [c.to_dict() for c in cosets],
        "verification": verification,
    }
    trace = [f"l={c.index_l}: w={c.representative} length={c.length} subset={c.subset} "
             f"flag=({c.flag_type.label()})" for c in cosets]
    return document("weyl", {"e": e, "verify": verify}, result, trace)


def cmd_motive(e: int, verify_ranks: bool = False) -> dict:
    if e < 1:
        raise InvalidInput(f"--e must be >= 1, got {e}")
    dec = decompose_square(e)
    chow = middle_chow_decomposition(e)
    report = verify_rank_identity(e) if verify_ranks else None
    result = {
        "decomposition": dec.to_dict(),
        "middle_chow": [c.to_dict() for c in chow],
        "rank_identity": report.to_dict() if report else None,
    }
    trace = [str(dec), f"CH_{e * e}(X_{e} x X_{e}) = " + " + ".join(map(str, chow))]
    if report:
        trace.append(f"rank identity holds: {report.lhs.total()} = {report.rhs.total()}; "
                     f"middle ranks {'+'.join(map(str, report.middle_ranks))} = "
                     f"{sum(report.middle_ranks)}")
    return document("motive", {"e": e, "verify_ranks": verify_ranks}, result, trace)


def cmd_certify(index: int, e: int) -> dict:
    if index < 1:
        raise InvalidInput(f"--index must be >= 1, got {index}")
    verdict = certify_incompressible(AlgebraClass.of_index(index), e)
    trace = []
    for c in verdict.certificates:
        trace.append(f"{c.summand_kind} {c.chow}: {c.verdict.value}")
        trace.extend(f"  [{s.kind.value}] {s.claim}" for s in c.steps)
    return document("certify", {"index": index, "e": e}, verdict.to_dict(), trace)


LOADERS: dict[str, Callable[[Mapping], Any]] = {
    "reduce": lambda r: {
        "input": VarietyExpr.from_dict(r["input"]),
        "reduced": VarietyExpr.from_dict(r["reduced"]),
        "decomposed": VarietyExpr.from_dict(r["decomposed"]) if r["decomposed"] else None,
        "trace": ReductionTrace.from_dict(r["reduction_trace"]),
    },
    "cdim": CdimResult.from_dict,
    "weyl": lambda r: [CosetSummand.from_dict(c) for c in r["cosets"]],
    "motive": lambda r: {
        "decomposition": MotiveDecomposition.from_dict(r["decomposition"]),
        "middle_chow": [ChowSummand.from_dict(c) for c in r["middle_chow"]],
        "rank_identity": (RankIdentityReport.from_dict(r["rank_identity"])
                          if r["rank_identity"] else None),
    },
    "certify": IncompressibilityVerdict.from_dict,
}


def load_result(doc: Mapping) -> Any:
    """Rebuild library objects from a JSON output document."""
    return LOADERS[doc["command"]["name"]](doc["result"])


def render_json(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def render_text(doc: Mapping) -> str:
    name, r = doc["command"]["name"], doc["result"]
    if name == "reduce":
        head = [f"{r['input']['display']} ~ {r['reduced']['display']}"]
        if r["decomposed"]:
            head.append(f"  ~ {r['decomposed']['display']}")
        else:
            head.append("  split: the variety has a rational point")
    elif name == "cdim":
        head = []
    elif name == "weyl":
        head = [f"{r['count']} double cosets for n = {r['n']}, S = Pi\\{{a{r['e']}}}"]
        if r["verification"]:
            v = r["verification"]
            head.append(f"verified by brute force over S_{v['n']}: {v['count']} cosets, "
                        f"agree={v['agrees']}")
    elif name == "motive":
        head = []
    else:
        chain = r["cdim_chain"]
        head = [f"X_{r['e']}(A), ind A = {r['index']['value']}: "
                + ("2-incompressible" if r["incompressible_2"] else "not certified"),
                f"cdim_2 = cdim = dim = {chain['dim']}" if chain else "",
                f"{len(r['certificates'])} certificates"]
    return "\n".join([h for h in head if h] + list(doc["trace"] or []))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = _Parser(prog="sbcdim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sbcdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", parents=[common], help="reduce a flag variety to X_d and split it")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--flags", type=_flags_arg, required=True)

    p = sub.add_parser("cdim", parents=[common], help="canonical p-dimension with provenance")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--flags", type=_flags_arg, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--char0", action="store_true", help="base field has characteristic 0")
    p.add_argument("--require-exact", action="store_true", help="exit 3 on an interval result")

    p = sub.add_parser("weyl", parents=[common], help="double cosets for X_e x X_e")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="cross-check by brute force over S_2e")

    p = sub.add_parser("motive", parents=[common], help="motivic decomposition of X_e x X_e")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--verify-ranks", action="store_true")

    p = sub.add_parser("certify", parents=[common], help="certify 2-incompressibility of X_e")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, dict, str]:
    """Parse and execute; returns (exit code, output document, format)."""
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    if args.command == "reduce":
        doc = cmd_reduce(args.index, args.flags)
    elif args.command == "cdim":
        doc, res = cmd_cdim(args.index, args.flags, args.p, args.char0)
        if args.require_exact and not res.exact:
            code = EXIT_UNCOVERED
    elif args.command == "weyl":
        doc = cmd_weyl(args.e, args.verify)
    elif args.command == "motive":
        doc = cmd_motive(args.e, args.verify_ranks)
    else:
        doc = cmd_certify(args.index, args.e)
    return code, doc, args.format


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, doc, fmt = run(argv)
    except InvalidInput as exc:
        print(f"sbcdim: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OutsideHypotheses as exc:
        print(f"sbcdim: not covered: {exc}", file=sys.stderr)
        return EXIT_UNCOVERED
    except InvariantViolation as exc:
        print(f"sbcdim: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(render_json(doc) if fmt == "json" else render_text(doc))
    if code == EXIT_UNCOVERED:
        print("sbcdim: result is an interval and --require-exact was given", file=sys.stderr)
    return code
