"""Parity certificates for 2-incompressibility of X_e(A), ind A = 2e, e = 2^a.

X is 2-incompressible once mult(delta) = mult(delta^t) mod 2 for every
degree-zero self-correspondence delta. The middle Chow group CH_{e^2}(X_e x X_e) splits
into summands (see :mod:`sbcdim.motive`) and each summand gets its own
certificate:

* the diagonal summand: the two multiplicities agree by symmetry;
* the middle summands CH(X_{e-l,e,e+l}): both multiplicities are even,
  because an odd-degree point of the flag variety over F(X_e) would force
  ind A down to gcd(e, l) < e;
* the twisted diagonal CH_0(X_e): every 0-cycle has even degree, since an
  odd-degree point would force ind A | e.

Multiplicities are never computed. A certificate is a chain of index
computations that :func:`check_certificate` can redo from the inputs.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Union

from .errors import InvalidInput, OutsideHypotheses
from .flag_varieties import FlagSpec, flag_dimension
from .index_arithmetic import (
    AlgebraClass,
    FactoredIndex,
    factor,
    function_field_index_extrapolated,
    index_after_odd_extension_lower_bound,
    index_over_function_field,
)
from .motive import ChowSummand, middle_chow_decomposition

Fact = Union[int, FactoredIndex]


class Verdict(str, enum.Enum):
    SYMMETRY = "congruent-by-symmetry"
    BOTH_EVEN = "both-even"
    INCONCLUSIVE = "inconclusive"


class StepKind(str, enum.Enum):
    ASSUME = "assume"
    FACT = "fact"
    DEDUCE = "deduce"
    CONTRADICTION = "contradiction"
    CONCLUDE = "conclude"


# Citation strings attached to steps.
KMRT_117 = "KMRT Th./Prop. 1.17: X_d(A) has a K-point iff ind A_K divides d"
S99_315A = "Saltman Th. 3.15a: an extension of degree prime to ind A does not reduce the index"
SV92_25 = "Schofield-Van den Bergh Th. 2.5: ind A over F(X_e(A)) is gcd(2e, e) = e"
FLAG_REDUCTION = "flag reduction: X_{d_1,...,d_k}(A) ~ X_d(A), d = gcd(ind A, d_i)"
DIAGONAL = "the summand is the image of the diagonal X_e -> X_e x X_e; transposition fixes it"
TRANSFER = ("over a splitting field CH_0 is Z generated by a degree-1 point, so an even-degree "
            "class maps to 2·CH_0 and its image in CH_{e^2}(X x X) is divisible by 2; "
            "multiplicity is invariant under field extension")
CRITERION = "mult(delta) = mult(delta^t) mod 2 for all degree-zero correspondences delta: X ~> X"


@dataclass(frozen=True)
class ParityStep:
    kind: StepKind
    claim: str
    justification: str
    numeric_facts: tuple[tuple[str, Fact], ...] = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "claim": self.claim,
            "justification": self.justification,
            "numeric_facts": [_fact_to_dict(k, v) for k, v in self.numeric_facts],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ParityStep:
        return cls(StepKind(data["kind"]), data["claim"], data["justification"],
                   tuple(_fact_from_dict(f) for f in data["numeric_facts"]))


def _fact_to_dict(name: str, value: Fact) -> dict:
    if isinstance(value, FactoredIndex):
        return {"name": name, "value": value.value, "factors": value.to_dict()["factors"]}
    return {"name": name, "value": value}


def _fact_from_dict(data: Mapping) -> tuple[str, Fact]:
    if "factors" in data:
        return data["name"], FactoredIndex.from_dict(data)
    return data["name"], data["value"]


@dataclass(frozen=True)
class ParityCertificate:
    """``summand_kind`` is one of "diagonal", "middle", "twisted-diagonal"
    (inside a verdict) or "ch0", "flag" (standalone)."""

    summand_kind: str
    flag: FlagSpec
    verdict: Verdict
    steps: tuple[ParityStep, ...]
    index: int
    e: int
    chow: ChowSummand | None = None
    extrapolated: bool = False

    def __post_init__(self) -> None:
        if self.verdict is Verdict.BOTH_EVEN and not any(
                s.kind is StepKind.CONTRADICTION for s in self.steps):
            raise InvalidInput("a both-even verdict needs a step chain ending in a contradiction")

    def to_dict(self) -> dict:
        return {
            "summand": {
                "kind": self.summand_kind,
                "flag": self.flag.to_dict(),
                "chow": self.chow.to_dict() if self.chow else None,
            },
            "index": self.index,
            "e": self.e,
            "verdict": self.verdict.value,
            "extrapolated": self.extrapolated,
            "steps": [s.to_dict() for s in self.steps],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ParityCertificate:
        s = data["summand"]
        return cls(s["kind"], FlagSpec.from_dict(s["flag"]), Verdict(data["verdict"]),
                   tuple(ParityStep.from_dict(x) for x in data["steps"]),
                   data["index"], data["e"],
                   ChowSummand.from_dict(s["chow"]) if s["chow"] else None,
                   data["extrapolated"])


@dataclass(frozen=True)
class IncompressibilityVerdict:
    e: int
    index: FactoredIndex
    incompressible_2: bool
    certificates: tuple[ParityCertificate, ...]
    cdim_chain: tuple[int, int, int] | None
    criterion: str = field(default=CRITERION)

    def __post_init__(self) -> None:
        ok = all(c.verdict in (Verdict.SYMMETRY, Verdict.BOTH_EVEN) for c in self.certificates)
        if ok != self.incompressible_2:
            raise InvalidInput("incompressible_2 must match the certificate verdicts")

    def to_dict(self) -> dict:
        return {
            "e": self.e,
            "index": self.index.to_dict(),
            "incompressible_2": self.incompressible_2,
            "criterion": self.criterion,
            "cdim_chain": (dict(zip(("cdim_2", "cdim", "dim"), self.cdim_chain))
                           if self.cdim_chain else None),
            "certificates": [c.to_dict() for c in self.certificates],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> IncompressibilityVerdict:
        chain = data["cdim_chain"]
        return cls(data["e"], FactoredIndex.from_dict(data["index"]), data["incompressible_2"],
                   tuple(ParityCertificate.from_dict(c) for c in data["certificates"]),
                   (chain["cdim_2"], chain["cdim"], chain["dim"]) if chain else None,
                   data["criterion"])


def _is_two_power(e: int) -> bool:
    return e >= 1 and e & (e - 1) == 0


def even_degree_ch0(A: AlgebraClass, e: int) -> ParityCertificate:
    """Every 0-cycle on X_e(A) has even degree, when the 2-part of ind A
    does not divide e. Otherwise the verdict is inconclusive."""
    n = A.index.value
    if e < 1 or n % e:
        raise InvalidInput(f"e={e} must divide ind A={n}")
    two_part = index_after_odd_extension_lower_bound(A)
    xe = FlagSpec(n, [e])
    base = [
        ParityStep(StepKind.FACT, "index data", "input",
                   (("ind A", A.index), ("e", e), ("2-part of ind A", two_part))),
    ]
    if two_part.divides(e):
        steps = base + [ParityStep(
            StepKind.CONCLUDE,
            f"2-part {two_part.value} of ind A divides e={e}: the odd-degree argument does "
            "not apply (no claim that an odd-degree point exists)",
            S99_315A, (("2-part of ind A", two_part), ("e", e)))]
        return ParityCertificate("ch0", xe, Verdict.INCONCLUSIVE, tuple(steps), n, e)
    steps = base + [
        ParityStep(StepKind.ASSUME,
                   "suppose CH_0(X_e) has an element of odd degree; then X_e has a point over "
                   "some K/F of odd degree, so ind A_K divides e",
                   KMRT_117, (("e", e),)),
        ParityStep(StepKind.DEDUCE,
                   f"[K:F] is odd, so the 2-part of ind A_K is still {two_part.value}",
                   S99_315A, (("2-part of ind A", two_part),)),
        ParityStep(StepKind.CONTRADICTION,
                   f"{two_part.value} divides ind A_K, which divides e={e}, "
                   f"but {two_part.value} does not divide {e}",
                   "divisibility", (("2-part of ind A", two_part), ("e", e))),
    ]
    return ParityCertificate("ch0", xe, Verdict.BOTH_EVEN, tuple(steps), n, e)


def _check_theorem_shape(n: int, e: int) -> None:
    if n != 2 * e:
        raise OutsideHypotheses(f"outside theorem hypotheses: ind A = {n} != 2e = {2 * e}")
    if not _is_two_power(e):
        raise OutsideHypotheses(f"outside theorem hypotheses: e = {e} is not a power of 2")


def _middle_l(e: int, flag: FlagSpec) -> int | None:
    """l if flag = (e-l, e, e+l) with 1 <= l <= e-1."""
    if len(flag.dims) == 3 and flag.dims[1] == e and flag.dims[0] + flag.dims[2] == 2 * e:
        return e - flag.dims[0]
    return None


def flag_summand_parity(A: AlgebraClass, e: int, flag: FlagSpec) -> ParityCertificate:
    """Both multiplicities are even on the image of CH(Fl) for a flag variety
    Fl = X_{d_1,...,d_k}(A) with gcd(e, d_1, ..., d_k) < e."""
    n = A.index.value
    _check_theorem_shape(n, e)
    if flag.n != n:
        raise InvalidInput(f"flag is over n={flag.n}, ind A = {n}")
    d = math.gcd(e, *flag.dims)
    if d == e:
        raise OutsideHypotheses(
            f"outside theorem hypotheses: d = gcd(e, {flag.label()}) = {d} is not < e = {e}")
    k = index_over_function_field(A, e)
    gcd_facts: tuple[tuple[str, Fact], ...] = (("d", d),)
    gcd_claim = f"d = gcd(e, {flag.label()}) = {d} < e = {e}"
    l = _middle_l(e, flag)
    if l is not None:
        gcd_facts = (("d", d), ("l", l), ("gcd(e, l)", math.gcd(e, l)))
        gcd_claim += f"; for the flag (e-l, e, e+l) this is gcd(e, l) with l = {l}"
    steps = (
        ParityStep(StepKind.FACT, f"ind A over F(X_e) is {k.value}", SV92_25,
                   (("ind A", A.index), ("e", e), ("ind A over F(X_e)", k))),
        ParityStep(StepKind.FACT, gcd_claim, "arithmetic", gcd_facts),
        ParityStep(StepKind.ASSUME,
                   "suppose CH_0(Fl over F(X_e)) has an element of odd degree; then Fl has a "
                   "point over some odd-degree K/F(X_e), hence so does X_d, so ind A_K divides d",
                   f"{FLAG_REDUCTION}; {KMRT_117}", (("d", d),)),
        ParityStep(StepKind.DEDUCE,
                   f"[K:F(X_e)] is odd and ind A over F(X_e) = {k.value} is a power of 2, "
                   f"so ind A_K = {k.value}",
                   S99_315A, (("ind A over F(X_e)", k),)),
        ParityStep(StepKind.CONTRADICTION,
                   f"{k.value} divides {d} is false since {d} < {k.value}",
                   "divisibility", (("ind A over F(X_e)", k), ("d", d))),
        ParityStep(StepKind.CONCLUDE,
                   "mult(delta) and mult(delta^t) both lie in deg CH_0(Fl over F(X_e)), which is even; "
                   "mult(delta) = 0 = mult(delta^t) mod 2",
                   "projections X_e x X_e -> X_e factor through the generic fiber", ()),
    )
    return ParityCertificate("flag", flag, Verdict.BOTH_EVEN, steps, n, e,
                             extrapolated=function_field_index_extrapolated(A, e))


def certify_incompressible(A: AlgebraClass, e: int, backend: str = "auto") -> IncompressibilityVerdict:
    n = A.index.value
    _check_theorem_shape(n, e)
    if e == 1:
        raise OutsideHypotheses("outside theorem hypotheses: e = 2^a needs a >= 1, got e = 1")
    chow = middle_chow_decomposition(e, backend)
    certs = []
    diag = chow[0]
    certs.append(ParityCertificate(
        "diagonal", diag.flag_type, Verdict.SYMMETRY,
        (ParityStep(StepKind.CONCLUDE, "mult(delta) = mult(delta^t)", DIAGONAL, ()),),
        n, e, chow=diag))
    for summand in chow[1:-1]:
        cert = flag_summand_parity(A, e, summand.flag_type)
        certs.append(replace(cert, summand_kind="middle", chow=summand))
    last = chow[-1]
    ch0 = even_degree_ch0(A, e)
    transfer = ParityStep(StepKind.CONCLUDE,
                          "mult(delta) = 0 = mult(delta^t) mod 2 for delta in the image of CH_0(X_e)",
                          TRANSFER, ())
    certs.append(replace(ch0, summand_kind="twisted-diagonal", chow=last,
                         steps=ch0.steps + (transfer,)))
    ok = all(c.verdict in (Verdict.SYMMETRY, Verdict.BOTH_EVEN) for c in certs)
    dim = flag_dimension(FlagSpec(n, [e]))
    return IncompressibilityVerdict(e, A.index, ok, tuple(certs), (dim, dim, dim) if ok else None)


def _recompute(name: str, cert: ParityCertificate) -> Fact:
    A = AlgebraClass.of_index(cert.index)
    dims = cert.flag.dims
    if name == "ind A":
        return A.index
    if name == "e":
        return cert.e
    if name == "2-part of ind A":
        return index_after_odd_extension_lower_bound(A)
    if name == "ind A over F(X_e)":
        return index_over_function_field(A, cert.e)
    if name == "d":
        return math.gcd(cert.e, *dims)
    if name == "l":
        return cert.e - dims[0]
    if name == "gcd(e, l)":
        return math.gcd(cert.e, cert.e - dims[0])
    raise InvalidInput(f"unknown numeric fact {name!r}")


def check_certificate(cert: ParityCertificate) -> list[str]:
    """Independently re-derive every numeric fact and the verdict logic.

    Returns a list of problems; empty means the certificate checks out.
    """
    problems = []
    for step in cert.steps:
        for name, value in step.numeric_facts:
            try:
                expected = _recompute(name, cert)
            except InvalidInput as exc:
                problems.append(str(exc))
                continue
            if expected != value:
                problems.append(f"{name}: certificate says {value}, recomputed {expected}")
    A = AlgebraClass.of_index(cert.index)
    if cert.verdict is Verdict.BOTH_EVEN:
        if cert.summand_kind in ("ch0", "twisted-diagonal"):
            if index_after_odd_extension_lower_bound(A).divides(cert.e):
                problems.append("2-part of ind A divides e; no contradiction available")
        else:
            k = factor(math.gcd(cert.index, cert.e)).value
            if math.gcd(cert.e, *cert.flag.dims) % k == 0:
                problems.append("ind over F(X_e) divides d; no contradiction available")
            if cert.index != 2 * cert.e or not _is_two_power(cert.e):
                problems.append("index and e outside the ind A = 2e, e = 2^a regime")
    return problems
