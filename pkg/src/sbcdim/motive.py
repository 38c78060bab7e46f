"""Motivic decomposition of X_e x X_e (ind A = 2e) and its numerical shadow
over a splitting field.

Summands come from the double cosets in :mod:`sbcdim.weyl`: the coset with
representative w contributes M(X_T)(length(w)), where X_T is the flag
variety of the subset associated to w. Ranks are checked with Poincaré
polynomials of split flag varieties (Gaussian multinomials).
"""
from __future__ import annotations

import collections
import functools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidInput, InvariantViolation
from .flag_varieties import FlagSpec, flag_dimension
from .weyl import square_cosets


@dataclass(frozen=True)
class IntegerPolynomial:
    """Polynomial in t with exact integer coefficients, lowest degree first."""

    coefficients: tuple[int, ...] = ()

    def __init__(self, coefficients: Iterable[int] = ()):
        c = [int(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> IntegerPolynomial:
        return cls([0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def total(self) -> int:
        """Value at t = 1."""
        return sum(self.coefficients)

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def __add__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        size = max(len(self.coefficients), len(other.coefficients))
        return IntegerPolynomial(self.coefficient(k) + other.coefficient(k) for k in range(size))

    def __mul__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        if not self.coefficients or not other.coefficients:
            return IntegerPolynomial()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntegerPolynomial(out)

    def shift(self, k: int) -> IntegerPolynomial:
        """Multiply by t^k."""
        return IntegerPolynomial((0,) * k + self.coefficients) if self.coefficients else self

    def divmod(self, divisor: IntegerPolynomial) -> tuple[IntegerPolynomial, IntegerPolynomial]:
        """Long division; the divisor must be monic in its leading term."""
        if not divisor.coefficients or divisor.coefficients[-1] != 1:
            raise InvalidInput("divisor must have leading coefficient 1")
        rem = list(self.coefficients)
        dd = divisor.degree
        quot = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            c = rem[k + dd]
            quot[k] = c
            if c:
                for j, b in enumerate(divisor.coefficients):
                    rem[k + j] -= c * b
        return IntegerPolynomial(quot), IntegerPolynomial(rem)

    def exact_div(self, divisor: IntegerPolynomial) -> IntegerPolynomial:
        q, r = self.divmod(divisor)
        if r.coefficients:
            raise InvariantViolation(f"non-zero remainder {r.coefficients} in exact division")
        return q

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if k == 0 else "t" if k == 1 else f"t^{k}"
            coeff = str(c) if (c != 1 or k == 0) else ""
            terms.append(coeff + mono)
        return " + ".join(terms) or "0"


def q_integer(k: int) -> IntegerPolynomial:
    return IntegerPolynomial([1] * k)


def q_factorial(k: int) -> IntegerPolynomial:
    out = IntegerPolynomial([1])
    for j in range(1, k + 1):
        out = out * q_integer(j)
    return out


def _times_q_integer(c: list[int], k: int) -> list[int]:
    # c * (1 + t + ... + t^{k-1}) as a sliding-window sum
    out = [0] * (len(c) + k - 1)
    run = 0
    for i in range(len(out)):
        if i < len(c):
            run += c[i]
        if i >= k:
            run -= c[i - k]
        out[i] = run
    return out


def _over_q_integer(c: list[int], k: int) -> list[int]:
    # c / (1 + t + ... + t^{k-1}) = c (1 - t) / (1 - t^k), checked exact
    a = [x - (c[i - 1] if i else 0) for i, x in enumerate(c)] + [-c[-1]]
    q = [0] * (len(a) - k)
    for i in range(len(q)):
        q[i] = a[i] + (q[i - k] if i >= k else 0)
    for i in range(len(q), len(a)):
        if a[i] + (q[i - k] if 0 <= i - k < len(q) else 0) != 0:
            raise InvariantViolation(f"q-integer [{k}] does not divide the polynomial")
    return q


@functools.lru_cache(maxsize=4096)
def poincare_polynomial(spec: FlagSpec) -> IntegerPolynomial:
    """[n]_t! / ([d_1]_t! [d_2-d_1]_t! ... [n-d_k]_t!).

    Common q-integer factors of numerator and denominator cancel first;
    the rest is multiplied and divided one q-integer at a time.
    """
    num = collections.Counter(range(2, spec.n + 1))
    den: collections.Counter = collections.Counter()
    for b in spec.blocks():
        den.update(range(2, b + 1))
    num, den = num - den, den - num
    c = [1]
    for k in sorted(num.elements()):
        c = _times_q_integer(c, k)
    for k in sorted(den.elements()):
        c = _over_q_integer(c, k)
    return IntegerPolynomial(c)


@dataclass(frozen=True)
class MotiveSummand:
    flag_type: FlagSpec
    shift: int

    def __str__(self) -> str:
        twist = f"({self.shift})" if self.shift else ""
        return f"M(X_{{{self.flag_type.label()}}}){twist}"

    def to_dict(self) -> dict:
        return {"flag_type": self.flag_type.to_dict(), "shift": self.shift}

    @classmethod
    def from_dict(cls, data: Mapping) -> MotiveSummand:
        return cls(FlagSpec.from_dict(data["flag_type"]), data["shift"])


@dataclass(frozen=True)
class MotiveDecomposition:
    e: int
    summands: tuple[MotiveSummand, ...]

    def __post_init__(self) -> None:
        xe = FlagSpec(2 * self.e, [self.e])
        if len(self.summands) != self.e + 1:
            raise InvariantViolation(f"expected {self.e + 1} summands, got {len(self.summands)}")
        if self.summands[0] != MotiveSummand(xe, 0) or \
                self.summands[-1] != MotiveSummand(xe, self.e ** 2):
            raise InvariantViolation("first/last summands must be M(X_e) and M(X_e)(e^2)")
        bound = 2 * 2 * flag_dimension(xe)
        if any(s.shift > bound for s in self.summands):
            raise InvariantViolation("Tate shift exceeds twice dim(X_e x X_e)")

    def __str__(self) -> str:
        return f"M(X_{self.e} x X_{self.e}) = " + " + ".join(map(str, self.summands))

    def to_dict(self) -> dict:
        return {"e": self.e, "summands": [s.to_dict() for s in self.summands],
                "display": str(self)}

    @classmethod
    def from_dict(cls, data: Mapping) -> MotiveDecomposition:
        return cls(data["e"], tuple(MotiveSummand.from_dict(s) for s in data["summands"]))


@dataclass(frozen=True)
class ChowSummand:
    flag_type: FlagSpec
    homological_degree: int
    split_rank: int

    def __str__(self) -> str:
        return f"CH_{self.homological_degree}(X_{{{self.flag_type.label()}}})"

    def to_dict(self) -> dict:
        return {"flag_type": self.flag_type.to_dict(),
                "homological_degree": self.homological_degree,
                "split_rank": self.split_rank}

    @classmethod
    def from_dict(cls, data: Mapping) -> ChowSummand:
        return cls(FlagSpec.from_dict(data["flag_type"]), data["homological_degree"],
                   data["split_rank"])


def decompose_square(e: int, backend: str = "auto") -> MotiveDecomposition:
    """M(X_e x X_e) = M(X_e) + sum_{l=1}^{e-1} M(X_{e-l,e,e+l})(l^2) + M(X_e)(e^2)."""
    if e < 1:
        raise InvalidInput(f"e must be >= 1, got {e}")
    cosets = square_cosets(e, backend)
    return MotiveDecomposition(e, tuple(MotiveSummand(c.flag_type, c.length) for c in cosets))


def middle_chow_decomposition(e: int, backend: str = "auto") -> list[ChowSummand]:
    """Summands of CH_{e^2}(X_e x X_e): M(Y)(s) contributes CH_{e^2 - s}(Y)."""
    out = []
    for s in decompose_square(e, backend).summands:
        deg = e * e - s.shift
        out.append(ChowSummand(s.flag_type, deg,
                               poincare_polynomial(s.flag_type).coefficient(deg)))
    return out


@dataclass(frozen=True)
class RankIdentityReport:
    e: int
    lhs: IntegerPolynomial
    rhs: IntegerPolynomial
    middle_ranks: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def rows(self) -> list[tuple[int, int, int]]:
        return [(k, self.lhs.coefficient(k), self.rhs.coefficient(k))
                for k in range(max(self.lhs.degree, self.rhs.degree) + 1)]

    def to_dict(self) -> dict:
        return {
            "e": self.e,
            "holds": self.holds,
            "lhs": list(self.lhs.coefficients),
            "rhs": list(self.rhs.coefficients),
            "lhs_total": self.lhs.total(),
            "rhs_total": self.rhs.total(),
            "middle_degree": self.e * self.e,
            "middle_ranks": list(self.middle_ranks),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> RankIdentityReport:
        return cls(data["e"], IntegerPolynomial(data["lhs"]), IntegerPolynomial(data["rhs"]),
                   tuple(data["middle_ranks"]))


def verify_rank_identity(e: int, backend: str = "auto") -> RankIdentityReport:
    """Check P(X_e)^2 = sum over summands of t^shift P(Y) coefficient-wise.

    Raises InvariantViolation if the two sides differ.
    """
    decomposition = decompose_square(e, backend)
    p = poincare_polynomial(FlagSpec(2 * e, [e]))
    rhs = IntegerPolynomial()
    for s in decomposition.summands:
        rhs = rhs + poincare_polynomial(s.flag_type).shift(s.shift)
    ranks = tuple(c.split_rank for c in middle_chow_decomposition(e, backend))
    report = RankIdentityReport(e, p * p, rhs, ranks)
    if not report.holds:
        raise InvariantViolation(
            f"rank identity fails for e={e}: {report.lhs.coefficients} != {report.rhs.coefficients}")
    if sum(ranks) != report.lhs.coefficient(e * e):
        raise InvariantViolation(f"middle ranks {ranks} do not sum to the t^{e * e} coefficient")
    return report
