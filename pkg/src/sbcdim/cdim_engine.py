"""Rule database for canonical p-dimension of flag varieties of a central
division algebra.

Rules are tried in a fixed order and every value carries the rule that
produced it. Where no rule gives a lower bound the lower bound is 0; no
bound is invented.

    R0   reduce the flag to X_d(A), split into primary factors, drop
         factors with e_j = q_j (they have a rational point)
    p prime:
    Rp   keep only the p-primary factor (a p-coprime extension splits the rest)
    R1   nothing left                         -> 0
    R2   e_s = 1                              -> q_s - 1
    R3   p = 2, q_s = 2 e_s, e_s = 2^a, a>=1  -> e_s^2
    R4   otherwise                            -> [0, e_s (q_s - e_s)]
    p = 0:
    upper = sum e_j (q_j - e_j), lower = max of exact cdim_{p_j}
    R5   lower = upper                        -> exact
    R6   ind A = 6, d = 1, char F = 0         -> 3
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidInput
from .flag_varieties import (
    FlagSpec,
    ReductionStep,
    ReductionTrace,
    VarietyExpr,
    decompose_primary_variety,
    flag_dimension,
    reduce_flag,
    upper_bound_cdim,
)
from .index_arithmetic import AlgebraClass, is_prime

RULES: dict[str, str] = {
    "R0-flag": "flag reduction: cdim_p(X_{d_1,...,d_k}(A)) = cdim_p(X_d(A)), d = gcd(ind A, d_i)",
    "R0-primary": "primary decomposition: X_d(A) ~ prod X_{e_j}(A_j), e_j = gcd(d, q_j)",
    "R0-drop-split": "factors with e_j = q_j have a rational point and contribute 0",
    "Rp": "p-coprime splitting: a finite extension of degree prime to p splits every A_j "
          "with p_j != p and leaves cdim_p unchanged",
    "R1": "split: cdim = 0",
    "R2": "Severi-Brauer: cdim_{p_j}(X_1(A_j)) = q_j - 1 (Bryant-Reichstein Th. 11.4, "
          "after Karpenko Th. 2.1)",
    "R3": "Theorem: X_e 2-incompressible for ind A = 2e, e = 2^a, a >= 1; "
          "cdim_2(X_e) = dim X_e = e^2",
    "R4": "no lower-bound rule applies; upper bound e_s(q_s - e_s) = dim X_{e_s}(A_s)",
    "R5": "cdim(X) >= cdim_p(X) for every prime p meets the dimension upper bound",
    "R6": "ind A = 6, d = 1, char F = 0: equality in the Severi-Brauer bound "
          "(Chernousov-Karpenko-Merkurjev Th. 1.3)",
    "R-upper": "upper bound: cdim(X_d(A)) <= sum e_j (q_j - e_j)",
    "R-lower": "lower bound: cdim(X) >= cdim_p(X) for every prime p",
}

CKM_CONJECTURE_NOTE = (
    "note: equality in the Severi-Brauer bound is conjectured for every A when p = 0, d = 1; "
    "not used as a rule"
)


@dataclass(frozen=True)
class CdimQuery:
    algebra: AlgebraClass
    flag: FlagSpec
    p: int = 0
    char_zero: bool = False

    def __post_init__(self) -> None:
        if self.p != 0 and not is_prime(self.p):
            raise InvalidInput(f"p must be 0 or a prime, got {self.p}")
        if self.flag.n != self.algebra.index.value:
            raise InvalidInput(
                f"flag is over n={self.flag.n} but ind A = {self.algebra.index.value}")


@dataclass(frozen=True)
class CdimResult:
    lower: int
    upper: int
    exact: bool
    rules_applied: tuple[tuple[str, str], ...]
    trace: ReductionTrace
    query: CdimQuery
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not 0 <= self.lower <= self.upper:
            raise InvalidInput(f"bad interval [{self.lower}, {self.upper}]")
        if self.exact and self.lower != self.upper:
            raise InvalidInput("exact result must have lower == upper")

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    @property
    def rule_ids(self) -> tuple[str, ...]:
        return tuple(r for r, _ in self.rules_applied)

    def to_dict(self) -> dict:
        q = self.query
        return {
            "query": {"algebra": q.algebra.to_dict(), "flag": q.flag.to_dict(),
                      "p": q.p, "char_zero": q.char_zero},
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "rules_applied": [{"rule": r, "citation": c} for r, c in self.rules_applied],
            "trace": self.trace.to_dict(),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CdimResult:
        q = data["query"]
        query = CdimQuery(AlgebraClass.from_dict(q["algebra"]), FlagSpec.from_dict(q["flag"]),
                          q["p"], q["char_zero"])
        return cls(data["lower"], data["upper"], data["exact"],
                   tuple((r["rule"], r["citation"]) for r in data["rules_applied"]),
                   ReductionTrace.from_dict(data["trace"]), query, tuple(data["notes"]))


def _rule(rid: str) -> tuple[str, str]:
    return rid, RULES[rid]


def _prime_rules(p: int, q: int, e: int) -> tuple[int, int, str]:
    """cdim_p of X_e(A_s) with ind A_s = q a power of p, 1 <= e < q."""
    if e == 1:
        return q - 1, q - 1, "R2"
    if p == 2 and q == 2 * e:
        # e is a power of 2 because q is
        return e * e, e * e, "R3"
    return 0, e * (q - e), "R4"


def cdim(query: CdimQuery) -> CdimResult:
    A, p = query.algebra, query.p
    n = A.index.value
    rules = [_rule("R0-flag")]
    notes: list[str] = []

    reduced, trace = reduce_flag(A, query.flag)
    d = reduced.factors[0].flag.dims[0]
    if d == n:
        return CdimResult(0, 0, True, tuple(rules + [_rule("R1")]), trace, query)

    product, trace2 = decompose_primary_variety(A, d)
    trace = trace.then(trace2)
    rules.append(_rule("R0-primary"))
    kept = VarietyExpr(tuple(f for f in product.factors if f.flag.dims[0] != f.flag.n))
    if kept != product:
        trace = trace.then(ReductionTrace((
            ReductionStep("drop-split", product, kept, RULES["R0-drop-split"]),)))
        rules.append(_rule("R0-drop-split"))

    if p:
        rules.append(_rule("Rp"))
        local = [f for f in kept.factors if f.algebra.index.primes == (p,)]
        if not local:
            return CdimResult(0, 0, True, tuple(rules + [_rule("R1")]), trace, query)
        (f,) = local
        lo, hi, rid = _prime_rules(p, f.flag.n, f.flag.dims[0])
        rules.append(_rule(rid))
        return CdimResult(lo, hi, lo == hi, tuple(rules), trace, query)

    if not kept.factors:
        return CdimResult(0, 0, True, tuple(rules + [_rule("R1")]), trace, query)
    upper = upper_bound_cdim(kept)
    rules.append(_rule("R-upper"))
    lower = 0
    for f in kept.factors:
        lo, hi, rid = _prime_rules(f.algebra.index.primes[0], f.flag.n, f.flag.dims[0])
        if lo == hi and lo > lower:
            lower = lo
    if lower:
        rules.append(_rule("R-lower"))
    if d == 1:
        notes.append(CKM_CONJECTURE_NOTE)
    if lower == upper:
        rules.append(_rule("R5"))
        return CdimResult(lower, upper, True, tuple(rules), trace, query, tuple(notes))
    if n == 6 and d == 1:
        if query.char_zero:
            rules.append(_rule("R6"))
            return CdimResult(3, 3, True, tuple(rules), trace, query, tuple(notes))
        notes.append("R6 skipped: requires char F = 0 (pass char_zero)")
    return CdimResult(lower, upper, False, tuple(rules), trace, query, tuple(notes))


def reduced_dimension(result: CdimResult) -> int:
    """dim of X_d(A) after the flag reduction."""
    return flag_dimension(result.trace.steps[0].after.factors[0].flag)


def explain(result: CdimResult) -> str:
    q = result.query
    name = f"cdim_{q.p}" if q.p else "cdim"
    head = (f"{name}(X_{{{q.flag.label()}}}(A)), ind A = {q.algebra.index.value}"
            + (", char F = 0" if q.char_zero else ""))
    lines = [head]
    for step in result.trace.steps:
        lines.append(f"  {step.before} ~ {step.after}")
    for rid, citation in result.rules_applied:
        lines.append(f"  [{rid}] {citation}")
    for note in result.notes:
        lines.append(f"  {note}")
    if result.exact:
        lines.append(f"  => cdim = {result.lower}")
    else:
        lines.append(f"  => {result.lower} <= cdim <= {result.upper}")
    return "\n".join(lines)
