"""Type A_{n-1} Weyl group combinatorics.

W = S_n acts on the basis labels 1..n, and the simple root
alpha_k = eps_k - eps_{k+1} is identified with k. Permutations are stored in
one-line notation; ``w * v`` is composition, ``(w * v)(j) = w(v(j))``.

Double cosets W_P \\ W / W_P for the maximal parabolic P of type
Pi \\ {alpha_d} are computed either by an exhaustive scan of S_n (orbits
under left and right multiplication by the generators of W_P) or from the
contingency-matrix description, where the coset with off-diagonal entry l
has minimal representative the swap of the blocks (d-l+1..d) and
(d+1..d+l).
"""
from __future__ import annotations

import functools
import itertools
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput, InvariantViolation
from .flag_varieties import FlagSpec

BRUTE_FORCE_ENV = "SBCDIM_BRUTE_MAX_N"
DEFAULT_BRUTE_MAX_N = 8


def brute_force_ceiling() -> int:
    raw = os.environ.get(BRUTE_FORCE_ENV)
    if raw is None:
        return DEFAULT_BRUTE_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise InvalidInput(f"{BRUTE_FORCE_ENV}={raw!r} is not an integer") from None


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise InvalidInput(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.n != self.n:
            raise InvalidInput("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for j, wj in enumerate(self.images, start=1):
            inv[wj - 1] = j
        return Permutation(tuple(inv))

    def is_involution(self) -> bool:
        return self * self == Permutation.identity(self.n)

    def to_list(self) -> list[int]:
        return list(self.images)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.images)) + ")"


@dataclass(frozen=True)
class RootSubset:
    """A subset of the simple roots {alpha_1, ..., alpha_{n-1}}."""

    n: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        if any(not 1 <= k <= self.n - 1 for k in self.members):
            raise InvalidInput(f"simple roots {sorted(self.members)} out of range 1..{self.n - 1}")

    @classmethod
    def all(cls, n: int) -> RootSubset:
        return cls(n, frozenset(range(1, n)))

    @classmethod
    def without(cls, n: int, removed: Iterable[int]) -> RootSubset:
        """Pi \\ {alpha_k : k in removed}; indices outside 1..n-1 are ignored."""
        return cls(n, frozenset(range(1, n)) - set(removed))

    @property
    def removed(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n) if k not in self.members)

    def flag_type(self) -> FlagSpec:
        """Parabolic of type Pi \\ {alpha_{d_1},...} <-> flag (d_1, ...)."""
        return FlagSpec(self.n, self.removed or (self.n,))

    def to_dict(self) -> dict:
        return {"n": self.n, "members": sorted(self.members), "removed": list(self.removed)}

    @classmethod
    def from_dict(cls, data: Mapping) -> RootSubset:
        return cls(data["n"], frozenset(data["members"]))

    def __str__(self) -> str:
        if not self.removed:
            return "Pi"
        return "Pi\\{" + ",".join(f"a{k}" for k in self.removed) + "}"


@dataclass(frozen=True)
class CosetSummand:
    index_l: int
    representative: Permutation
    length: int
    subset: RootSubset
    flag_type: FlagSpec

    def to_dict(self) -> dict:
        return {
            "l": self.index_l,
            "representative": self.representative.to_list(),
            "length": self.length,
            "subset": self.subset.to_dict(),
            "flag_type": self.flag_type.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CosetSummand:
        return cls(data["l"], Permutation(tuple(data["representative"])), data["length"],
                   RootSubset.from_dict(data["subset"]), FlagSpec.from_dict(data["flag_type"]))


def simple_reflection(n: int, k: int) -> Permutation:
    if not 1 <= k <= n - 1:
        raise InvalidInput(f"simple reflection index k={k} out of range 1..{n - 1}")
    images = list(range(1, n + 1))
    images[k - 1], images[k] = images[k], images[k - 1]
    return Permutation(tuple(images))


def word_product(n: int, word: Sequence[int]) -> Permutation:
    w = Permutation.identity(n)
    for k in word:
        w = w * simple_reflection(n, k)
    return w


def representative_word(e: int, i: int) -> list[int]:
    """(s_e ... s_{e-i})(s_{e+1} ... s_{e+1-i}) ... (s_{e+i} ... s_e) as a list of k."""
    if e < 1 or not 0 <= i <= e - 1:
        raise InvalidInput(f"need e >= 1 and 0 <= i <= e-1, got e={e}, i={i}")
    return [k for j in range(i + 1) for k in range(e + j, e + j - i - 1, -1)]


def coset_representative(e: int, i: int) -> Permutation:
    return word_product(2 * e, representative_word(e, i))


def block_swap(n: int, d: int, l: int) -> Permutation:
    """Exchange the blocks (d-l+1, ..., d) and (d+1, ..., d+l), fixing the rest."""
    if not 0 <= l <= min(d, n - d):
        raise InvalidInput(f"block size l={l} out of range for d={d}, n={n}")
    images = list(range(1, n + 1))
    for t in range(l):
        a, b = d - l + 1 + t, d + 1 + t
        images[a - 1], images[b - 1] = b, a
    return Permutation(tuple(images))


def _inversions(images: tuple[int, ...]) -> int:
    return sum(1 for a, b in itertools.combinations(images, 2) if a > b)


def length(w: Permutation) -> int:
    """Number of inversions."""
    return _inversions(w.images)


def associated_subset(w: Permutation, S: RootSubset) -> RootSubset:
    """{alpha in S : w(alpha) is a simple root in S}, with
    w(eps_j - eps_{j+1}) = eps_{w(j)} - eps_{w(j+1)}."""
    if w.n != S.n:
        raise InvalidInput("permutation and root subset have different rank")
    return RootSubset(S.n, frozenset(
        k for k in S.members if w(k + 1) == w(k) + 1 and w(k) in S.members
    ))


def maximal_parabolic_cut(S: RootSubset) -> int:
    """d with S = Pi \\ {alpha_d}."""
    if len(S.removed) != 1:
        raise InvalidInput(f"{S} is not of the form Pi\\{{alpha_d}}")
    return S.removed[0]


def _summand(l: int, rep: Permutation, S: RootSubset) -> CosetSummand:
    sub = associated_subset(rep, S)
    return CosetSummand(l, rep, length(rep), sub, sub.flag_type())


def _double_cosets_brute(n: int, S: RootSubset) -> list[list[tuple[int, ...]]]:
    # raw tuples in the inner loop; Permutation validation is too slow for 8!
    swaps = sorted(S.members)
    seen: set[tuple[int, ...]] = set()
    cosets = []
    for start in itertools.permutations(range(1, n + 1)):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for k in swaps:
                # w * s_k swaps positions k, k+1; s_k * w swaps the values k, k+1
                right = w[:k - 1] + (w[k], w[k - 1]) + w[k + 1:]
                left = tuple(k + 1 if x == k else k if x == k + 1 else x for x in w)
                for v in (right, left):
                    if v not in seen:
                        seen.add(v)
                        orbit.append(v)
                        queue.append(v)
        cosets.append(orbit)
    return cosets


def double_cosets_brute(n: int, S: RootSubset) -> list[CosetSummand]:
    return list(_double_cosets_brute_cached(n, S))


@functools.lru_cache(maxsize=32)
def _double_cosets_brute_cached(n: int, S: RootSubset) -> tuple[CosetSummand, ...]:
    """Exhaustive scan of S_n. The representative of each double coset is its
    unique element of minimal length; l is the number of labels 1..d sent
    past d."""
    d = maximal_parabolic_cut(S)
    out = []
    for orbit in _double_cosets_brute(n, S):
        rep = Permutation(min(orbit, key=lambda w: (_inversions(w), w)))
        l = sum(1 for j in range(1, d + 1) if rep(j) > d)
        out.append(_summand(l, rep, S))
    return tuple(sorted(out, key=lambda c: c.index_l))


def double_cosets_matrix(n: int, S: RootSubset) -> list[CosetSummand]:
    d = maximal_parabolic_cut(S)
    return [_summand(l, block_swap(n, d, l), S) for l in range(min(d, n - d) + 1)]


def enumerate_double_cosets(n: int, S: RootSubset, backend: str = "auto") -> list[CosetSummand]:
    """Double cosets W_P \\ S_n / W_P for P of type S = Pi \\ {alpha_d}, l ascending.

    ``backend`` is "brute", "matrix" or "auto" (brute force when n is at most
    the ceiling from SBCDIM_BRUTE_MAX_N, default 8).
    """
    if n != S.n:
        raise InvalidInput(f"root subset has rank {S.n}, expected {n}")
    if backend == "auto":
        backend = "brute" if n <= brute_force_ceiling() else "matrix"
    if backend == "brute":
        return double_cosets_brute(n, S)
    if backend == "matrix":
        return double_cosets_matrix(n, S)
    raise InvalidInput(f"unknown backend {backend!r}")


def expected_subset(e: int, l: int) -> RootSubset:
    """Closed form: Pi \\ {alpha_{e-l}, alpha_e, alpha_{e+l}} (out-of-range roots dropped)."""
    n = 2 * e
    return RootSubset.without(n, {e - l, e, e + l} if l else {e})


def square_cosets(e: int, backend: str = "auto") -> list[CosetSummand]:
    """The e+1 double cosets for X_e x X_e, n = 2e, checked against the
    explicit block-swap representatives and the closed-form associated subsets."""
    if e < 1:
        raise InvalidInput(f"e must be >= 1, got {e}")
    n = 2 * e
    S = RootSubset.without(n, {e})
    cosets = enumerate_double_cosets(n, S, backend)
    if [c.index_l for c in cosets] != list(range(e + 1)):
        raise InvariantViolation(f"expected cosets l = 0..{e}, got {[c.index_l for c in cosets]}")
    for c in cosets:
        if c.index_l and c.representative != coset_representative(e, c.index_l - 1):
            raise InvariantViolation(f"representative mismatch at l={c.index_l}")
        if c.subset != expected_subset(e, c.index_l):
            raise InvariantViolation(
                f"associated subset {c.subset} differs from closed form at l={c.index_l}")
    return cosets
