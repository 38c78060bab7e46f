"""Flag varieties X_{d_1,...,d_k}(A): dimensions, the splitting predicate,
the two equivalence reductions, and a brute-force equivalence check in
the FieldState model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidInput
from .index_arithmetic import (
    AlgebraClass,
    FieldState,
    PrimaryFactor,
    field_states,
    is_prime_power,
    primary_decomposition,
)


@dataclass(frozen=True)
class FlagSpec:
    """Signature (d_1 < ... < d_k) of a flag of right ideals in an algebra of
    degree ``n``. Input order is canonicalized; repeated d_i are rejected.
    ``d_k == n`` is allowed and denotes the point variety."""

    n: int
    dims: tuple[int, ...]

    def __init__(self, n: int, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if n < 1:
            raise InvalidInput(f"n must be >= 1, got {n}")
        if not dims:
            raise InvalidInput("a flag needs at least one dimension")
        if len(set(dims)) != len(dims):
            raise InvalidInput(f"repeated dimensions in {list(dims)}")
        dims = tuple(sorted(dims))
        if dims[0] < 1 or dims[-1] > n:
            raise InvalidInput(f"dimensions {list(dims)} must lie in 1..{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dims", dims)

    @property
    def gcd(self) -> int:
        return math.gcd(*self.dims)

    @property
    def is_point(self) -> bool:
        return self.dims[-1] == self.n and len(self.dims) == 1

    def blocks(self) -> tuple[int, ...]:
        """Composition of n cut out by the flag: (d_1, d_2-d_1, ..., n-d_k)."""
        cuts = (0,) + self.dims + ((self.n,) if self.dims[-1] != self.n else ())
        return tuple(b - a for a, b in zip(cuts, cuts[1:]))

    def to_dict(self) -> dict:
        return {"n": self.n, "dims": list(self.dims)}

    @classmethod
    def from_dict(cls, data: Mapping) -> FlagSpec:
        return cls(data["n"], data["dims"])

    def label(self) -> str:
        return ",".join(map(str, self.dims))


@dataclass(frozen=True)
class Factor:
    algebra: AlgebraClass
    flag: FlagSpec
    name: str = "A"

    def __post_init__(self) -> None:
        if self.flag.n != self.algebra.index.value:
            raise InvalidInput(
                f"flag ambient n={self.flag.n} differs from ind {self.algebra.index.value}")

    def __str__(self) -> str:
        return f"X_{{{self.flag.label()}}}({self.name})"

    def to_dict(self) -> dict:
        return {"algebra": self.algebra.to_dict(), "flag": self.flag.to_dict(), "name": self.name}

    @classmethod
    def from_dict(cls, data: Mapping) -> Factor:
        return cls(AlgebraClass.from_dict(data["algebra"]), FlagSpec.from_dict(data["flag"]),
                   data["name"])


@dataclass(frozen=True)
class VarietyExpr:
    """Formal product of flag varieties; the empty product is the point."""

    factors: tuple[Factor, ...] = ()

    def __str__(self) -> str:
        return " × ".join(map(str, self.factors)) or "pt"

    def to_dict(self) -> dict:
        return {"factors": [f.to_dict() for f in self.factors], "display": str(self)}

    @classmethod
    def from_dict(cls, data: Mapping) -> VarietyExpr:
        return cls(tuple(Factor.from_dict(f) for f in data["factors"]))


@dataclass(frozen=True)
class ReductionStep:
    rule: str
    before: VarietyExpr
    after: VarietyExpr
    justification: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "before": self.before.to_dict(),
                "after": self.after.to_dict(), "justification": self.justification}

    @classmethod
    def from_dict(cls, data: Mapping) -> ReductionStep:
        return cls(data["rule"], VarietyExpr.from_dict(data["before"]),
                   VarietyExpr.from_dict(data["after"]), data["justification"])

    def __str__(self) -> str:
        return f"{self.rule}: {self.before} ~ {self.after}  [{self.justification}]"


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.steps, self.steps[1:]):
            if a.after != b.before:
                raise InvalidInput(f"trace does not chain: {a.after} then {b.before}")

    def then(self, other: ReductionTrace) -> ReductionTrace:
        return ReductionTrace(self.steps + other.steps)

    def to_dict(self) -> list:
        return [s.to_dict() for s in self.steps]

    @classmethod
    def from_dict(cls, data: list) -> ReductionTrace:
        return cls(tuple(ReductionStep.from_dict(s) for s in data))


FLAG_REDUCTION = "flag-gcd"
FLAG_REDUCTION_REF = ("X_{d_1,...,d_k}(A) ~ X_d(A) with d = gcd(ind A, d_1, ..., d_k); "
                      "ideals of reduced dimension d exist over K iff ind A_K | d")
PRIMARY_DECOMPOSITION = "primary-decomposition"
PRIMARY_DECOMPOSITION_REF = ("X_d(A) ~ X_{e_1}(A_1) × ... × X_{e_r}(A_r) with e_j = gcd(d, q_j); "
                             "ind A_K = ind (A_1)_K ··· ind (A_r)_K")


def flag_dimension(spec: FlagSpec) -> int:
    """sum d_i (d_{i+1} - d_i) with d_{k+1} = n."""
    dims = spec.dims + (spec.n,)
    return sum(a * (b - a) for a, b in zip(dims, dims[1:]))


def has_point(spec: FlagSpec, residual_index: int) -> bool:
    if residual_index < 1 or spec.n % residual_index:
        raise InvalidInput(f"residual index {residual_index} must divide n={spec.n}")
    return all(d % residual_index == 0 for d in spec.dims)


def reduce_flag(A: AlgebraClass, spec: FlagSpec) -> tuple[VarietyExpr, ReductionTrace]:
    n = A.index.value
    before = VarietyExpr((Factor(A, spec),))
    d = math.gcd(n, *spec.dims)
    after = VarietyExpr((Factor(A, FlagSpec(n, [d])),))
    step = ReductionStep(FLAG_REDUCTION, before, after, FLAG_REDUCTION_REF)
    return after, ReductionTrace((step,))


def decompose_primary_variety(A: AlgebraClass, d: int) -> tuple[VarietyExpr, ReductionTrace]:
    n = A.index.value
    if not 1 <= d <= n - 1:
        raise InvalidInput(f"d={d} must satisfy 1 <= d <= ind A - 1 = {n - 1}")
    factors = []
    for j, pf in enumerate(primary_decomposition(A), start=1):
        e = math.gcd(d, pf.power)
        factors.append(Factor(AlgebraClass.of_index(pf.power), FlagSpec(pf.power, [e]), f"A_{j}"))
    before = VarietyExpr((Factor(A, FlagSpec(n, [d])),))
    after = VarietyExpr(tuple(factors))
    step = ReductionStep(PRIMARY_DECOMPOSITION, before, after, PRIMARY_DECOMPOSITION_REF)
    return after, ReductionTrace((step,))


def _ambient(*exprs: VarietyExpr) -> tuple[PrimaryFactor, ...]:
    powers: dict[int, int] = {}
    for expr in exprs:
        for f in expr.factors:
            for pf in primary_decomposition(f.algebra):
                if powers.setdefault(pf.prime, pf.power) != pf.power:
                    raise InvalidInput(
                        f"incompatible primary decompositions: {pf.prime}-part "
                        f"{powers[pf.prime]} vs {pf.power}")
    return tuple(PrimaryFactor(p, q) for p, q in sorted(powers.items()))


def expr_has_point(expr: VarietyExpr, state: FieldState) -> bool:
    """A product has a point iff every factor does."""
    return all(
        has_point(f.flag, state.residual_index(f.algebra.index.primes))
        for f in expr.factors
    )


def distinguishing_state(V: VarietyExpr, W: VarietyExpr) -> FieldState | None:
    """A FieldState where exactly one of V, W has a point, or None."""
    for state in field_states(_ambient(V, W)):
        if expr_has_point(V, state) != expr_has_point(W, state):
            return state
    return None


def equivalent(V: VarietyExpr, W: VarietyExpr) -> bool:
    return distinguishing_state(V, W) is None


def is_decomposed(V: VarietyExpr) -> bool:
    return all(
        len(f.flag.dims) == 1 and is_prime_power(f.flag.n) and f.flag.n % f.flag.dims[0] == 0
        for f in V.factors
    )


def upper_bound_cdim(V: VarietyExpr) -> int:
    """sum e_j (q_j - e_j) over a decomposed product."""
    if not is_decomposed(V):
        raise InvalidInput(f"{V} is not a product of X_e(A_j) with e | q_j, q_j a prime power")
    return sum(e * (f.flag.n - e) for f in V.factors for e in f.flag.dims)


def single_factor_index(V: VarietyExpr) -> int:
    """Helper for callers that know V = X_d(A): returns d."""
    if len(V.factors) != 1 or len(V.factors[0].flag.dims) != 1:
        raise InvalidInput(f"{V} is not a single generalized Severi-Brauer variety")
    return V.factors[0].flag.dims[0]

