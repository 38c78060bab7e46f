"""Factored indices of central division algebras and how they behave
under the field extensions used in the reductions.

An algebra is modelled by its index alone. A field extension K/F is
modelled by a :class:`FieldState`, which records for each primary
component A_j the index of (A_j)_K, a divisor of q_j.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import InvalidInput

MAX_INDEX = 2**63 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidInput(f"{p!r} is not a prime")


@dataclass(frozen=True)
class FactoredIndex:
    """A positive integer stored as its prime factorization.

    ``factors`` is a tuple of ``(prime, exponent)`` pairs sorted by prime;
    the empty tuple is 1.
    """

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise InvalidInput(f"primes must be distinct and ascending: {primes}")
        for p, k in self.factors:
            _check_prime(p)
            if not isinstance(k, int) or k < 1:
                raise InvalidInput(f"exponent of {p} must be >= 1, got {k!r}")

    @classmethod
    def _trusted(cls, factors: tuple[tuple[int, int], ...]) -> FactoredIndex:
        # skips validation; only for output of factor()
        obj = object.__new__(cls)
        object.__setattr__(obj, "factors", factors)
        return obj

    @classmethod
    def from_mapping(cls, factors: Mapping[int, int]) -> FactoredIndex:
        return cls(tuple(sorted((int(p), int(k)) for p, k in factors.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def value(self) -> int:
        return math.prod(p**k for p, k in self.factors)

    def __int__(self) -> int:
        return self.value

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        return self.as_dict().get(p, 0)

    def part(self, p: int) -> FactoredIndex:
        """The p-primary part."""
        k = self.exponent(p)
        return FactoredIndex(((p, k),)) if k else FactoredIndex()

    def divides(self, other: int | FactoredIndex) -> bool:
        return int(other) % self.value == 0

    def to_dict(self) -> dict:
        return {"value": self.value, "factors": {str(p): k for p, k in self.factors}}

    @classmethod
    def from_dict(cls, data: Mapping) -> FactoredIndex:
        fi = cls.from_mapping({int(p): k for p, k in data["factors"].items()})
        if "value" in data and data["value"] != fi.value:
            raise InvalidInput(f"value {data['value']} disagrees with factors {data['factors']}")
        return fi

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "·".join(f"{p}^{k}" if k > 1 else str(p) for p, k in self.factors)


def factor(n: int) -> FactoredIndex:
    """Prime factorization by trial division."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInput(f"expected an integer, got {n!r}")
    if n < 1:
        raise InvalidInput(f"cannot factor {n}: must be >= 1")
    if n > MAX_INDEX:
        raise InvalidInput(f"{n} exceeds the supported range (< 2^63)")
    out: list[tuple[int, int]] = []
    m = n
    for f in itertools.chain((2,), itertools.count(3, 2)):
        if f * f > m:
            break
        if m % f == 0:
            k = 0
            while m % f == 0:
                m //= f
                k += 1
            out.append((f, k))
    if m > 1:
        out.append((m, 1))
    return FactoredIndex._trusted(tuple(out))


def is_prime_power(n: int) -> bool:
    return n >= 1 and len(factor(n).factors) <= 1


@dataclass(frozen=True)
class PrimaryFactor:
    prime: int
    power: int

    def __post_init__(self) -> None:
        _check_prime(self.prime)
        f = factor(self.power)
        if f.primes != (self.prime,):
            raise InvalidInput(f"{self.power} is not a positive power of {self.prime}")


@dataclass(frozen=True)
class AlgebraClass:
    """A central division algebra, remembered only through its index
    (which equals its degree)."""

    index: FactoredIndex

    @classmethod
    def of_index(cls, n: int) -> AlgebraClass:
        return cls(factor(n))

    @property
    def degree(self) -> int:
        return self.index.value

    def to_dict(self) -> dict:
        return {"index": self.index.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping) -> AlgebraClass:
        return cls(FactoredIndex.from_dict(data["index"]))

    def __str__(self) -> str:
        return f"A[ind {self.index.value}]"


def primary_decomposition(A: AlgebraClass) -> list[PrimaryFactor]:
    return [PrimaryFactor(p, p**k) for p, k in A.index.factors]


def p_primary_part(A: AlgebraClass, p: int) -> FactoredIndex:
    _check_prime(p)
    return A.index.part(p)


def index_after_odd_extension_lower_bound(A: AlgebraClass) -> FactoredIndex:
    """2-primary part of ind A.

    An odd-degree extension cannot lower the 2-primary part of the index,
    so ind A_K is divisible by this for every such K.
    """
    return A.index.part(2)


def index_over_function_field(A: AlgebraClass, e: int) -> FactoredIndex:
    """ind A over the function field of X_e(A), as gcd(ind A, e).

    Only the case ind A = 2e with e a power of 2 is backed by a theorem;
    see :func:`function_field_index_extrapolated`.
    """
    n = A.index.value
    if e < 1 or n % e:
        raise InvalidInput(f"e={e} must divide ind A={n}")
    return factor(math.gcd(n, e))


def function_field_index_extrapolated(A: AlgebraClass, e: int) -> bool:
    return not (A.index.value == 2 * e and e & (e - 1) == 0)


@dataclass(frozen=True)
class FieldState:
    """Residual index m_j = ind (A_j)_K for each primary factor A_j."""

    components: tuple[PrimaryFactor, ...]
    residual: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.components) != len(self.residual):
            raise InvalidInput("one residual index per primary factor required")
        for pf, m in zip(self.components, self.residual):
            if m < 1 or pf.power % m:
                raise InvalidInput(f"residual index {m} does not divide q={pf.power}")

    def residual_index(self, primes: tuple[int, ...] | None = None) -> int:
        """ind A_K restricted to the components over ``primes`` (all if None)."""
        return math.prod(
            m for pf, m in zip(self.components, self.residual)
            if primes is None or pf.prime in primes
        )


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def field_states(components: tuple[PrimaryFactor, ...] | list[PrimaryFactor]) -> Iterator[FieldState]:
    """Every divisor tuple (m_1, ..., m_r), each read as an achievable extension."""
    components = tuple(components)
    choices = [[pf.prime**k for k in range(int(factor(pf.power).exponent(pf.prime)) + 1)]
               for pf in components]
    for residual in itertools.product(*choices):
        yield FieldState(components, residual)
