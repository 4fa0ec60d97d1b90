"""Free-group separation via truncated noncommutative power series.

The classical substitution x_i -> 1 + t_i embeds a free group into the unit
group of the polynomial ring in noncommuting variables truncated past a
degree bound.  Over Z/p that unit group is a finite p-group; over Z it is a
finitely generated torsion-free nilpotent group.  A nontrivial freely
reduced word acquires a nonzero coefficient at some finite degree, which
yields a checkable separation certificate for either kind of target.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .certificates import SeparationCertificate, SeparationFailure
from .rootclass import RootClassSpec, SOLVABLE, finite_p

__all__ = [
    "TruncatedSeries",
    "FreeWord",
    "SeparationFailure",
    "series_one",
    "series_generator",
    "series_mul",
    "series_inv_unit",
    "magnus_eval",
    "separate_free_word",
]

DEFAULT_RANK_CAP = 4
DEFAULT_DEGREE_CAP = 8


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _reduce_terms(terms: Mapping[tuple[int, ...], int], modulus: int) -> dict[tuple[int, ...], int]:
    out = {}
    for mono, coeff in terms.items():
        if modulus:
            coeff %= modulus
        if coeff:
            out[mono] = coeff
    return out


@dataclass(frozen=True)
class TruncatedSeries:
    """Polynomial in noncommuting variables t_1..t_rank, truncated past a bound.

    Coefficients live in Z when ``modulus`` is 0 and in Z/modulus otherwise;
    zero coefficients are never stored.  Monomials are tuples of 1-based
    variable indices.
    """

    rank: int
    degree_bound: int
    modulus: int
    terms: Mapping[tuple[int, ...], int]

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        if self.degree_bound < 1:
            raise ValueError("degree bound must be at least 1")
        if self.modulus and not _is_prime(self.modulus):
            raise ValueError(f"modulus must be 0 or a prime, got {self.modulus}")
        for mono, coeff in self.terms.items():
            if len(mono) > self.degree_bound:
                raise ValueError(f"monomial {mono} exceeds the degree bound")
            if any(not 1 <= v <= self.rank for v in mono):
                raise ValueError(f"monomial {mono} uses variables outside 1..{self.rank}")
            if coeff == 0 or (self.modulus and not 0 < coeff < self.modulus):
                raise ValueError("coefficients must be nonzero and reduced")

    def is_one(self) -> bool:
        return dict(self.terms) == {(): 1}

    def coefficient(self, mono: tuple[int, ...]) -> int:
        return self.terms.get(tuple(mono), 0)

    def _compatible(self, other: "TruncatedSeries") -> None:
        if (self.rank, self.degree_bound, self.modulus) != (
            other.rank,
            other.degree_bound,
            other.modulus,
        ):
            raise ValueError("series parameters differ")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.degree_bound == other.degree_bound
            and self.modulus == other.modulus
            and dict(self.terms) == dict(other.terms)
        )


def series_one(rank: int, degree_bound: int, modulus: int) -> TruncatedSeries:
    return TruncatedSeries(rank, degree_bound, modulus, {(): 1})


def series_generator(rank: int, degree_bound: int, modulus: int, i: int) -> TruncatedSeries:
    """The series 1 + t_i."""
    if not 1 <= i <= rank:
        raise ValueError(f"variable index {i} outside 1..{rank}")
    return TruncatedSeries(rank, degree_bound, modulus, {(): 1, (i,): 1})


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product truncated past the degree bound."""
    a._compatible(b)
    out: dict[tuple[int, ...], int] = {}
    bound = a.degree_bound
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            if len(m1) + len(m2) > bound:
                continue
            mono = m1 + m2
            out[mono] = out.get(mono, 0) + c1 * c2
    return TruncatedSeries(a.rank, bound, a.modulus, _reduce_terms(out, a.modulus))


def series_inv_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a unit with constant term 1, exact in the truncated ring.

    With u the augmentation part of a, the inverse is the finite geometric
    series 1 - u + u^2 - ... up to the degree bound.
    """
    if a.coefficient(()) != 1:
        raise ValueError("can only invert units with constant term 1")
    u = TruncatedSeries(
        a.rank,
        a.degree_bound,
        a.modulus,
        {m: c for m, c in a.terms.items() if m != ()},
    )
    acc: dict[tuple[int, ...], int] = {(): 1}
    power = series_one(a.rank, a.degree_bound, a.modulus)
    sign = 1
    for _ in range(a.degree_bound):
        power = series_mul(power, u)
        if not power.terms:
            break
        sign = -sign
        for mono, coeff in power.terms.items():
            acc[mono] = acc.get(mono, 0) + sign * coeff
    return TruncatedSeries(a.rank, a.degree_bound, a.modulus, _reduce_terms(acc, a.modulus))


_TOKEN = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class FreeWord:
    """A word in a free group, as a sequence of signed 1-based generator indices."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(v == 0 for v in self.letters):
            raise ValueError("letters must be nonzero signed indices")

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        """Parse words like ``x1 x2^-1 x1^2``."""
        letters: list[int] = []
        for token in text.split():
            m = _TOKEN.match(token)
            if not m:
                raise ValueError(f"bad free-word token {token!r}")
            idx = int(m.group(1))
            if idx < 1:
                raise ValueError(f"generator index must be positive in {token!r}")
            power = int(m.group(2)) if m.group(2) else 1
            letters.extend([idx if power > 0 else -idx] * abs(power))
        return cls(tuple(letters))

    def __str__(self) -> str:
        return " ".join(f"x{v}" if v > 0 else f"x{-v}^-1" for v in self.letters)

    def free_reduce(self) -> "FreeWord":
        stack: list[int] = []
        for v in self.letters:
            if stack and stack[-1] == -v:
                stack.pop()
            else:
                stack.append(v)
        return FreeWord(tuple(stack))

    def is_trivial(self) -> bool:
        return not self.free_reduce().letters

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-v for v in reversed(self.letters)))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    @property
    def max_index(self) -> int:
        return max((abs(v) for v in self.letters), default=0)


def magnus_eval(w: FreeWord, rank: int, degree_bound: int, modulus: int) -> TruncatedSeries:
    """Image of a free word under x_i -> 1 + t_i in the truncated ring."""
    if w.max_index > rank:
        raise ValueError(f"word uses generator x{w.max_index} beyond rank {rank}")
    gens: dict[int, TruncatedSeries] = {}
    invs: dict[int, TruncatedSeries] = {}
    acc = series_one(rank, degree_bound, modulus)
    for v in w.letters:
        i = abs(v)
        if v > 0:
            s = gens.get(i)
            if s is None:
                s = gens[i] = series_generator(rank, degree_bound, modulus, i)
        else:
            s = invs.get(i)
            if s is None:
                s = invs[i] = series_inv_unit(
                    series_generator(rank, degree_bound, modulus, i)
                )
        acc = series_mul(acc, s)
    return acc


def _canonical_witness(series: TruncatedSeries) -> tuple[tuple[int, ...], int]:
    candidates = [m for m in series.terms if m != ()]
    mono = min(candidates, key=lambda m: (len(m), m))
    return mono, series.terms[mono]


def _default_class(modulus: int) -> RootClassSpec:
    # Modulus p targets a finite p-group; modulus 0 targets a torsion-free
    # nilpotent unit group, the branch relevant for classes containing an
    # infinite cyclic group (solvable being the standing example).
    return finite_p(modulus) if modulus else SOLVABLE


def separate_free_word(
    w: FreeWord,
    modulus: int,
    d_max: int = DEFAULT_DEGREE_CAP,
    klass: RootClassSpec | None = None,
    rank_cap: int = DEFAULT_RANK_CAP,
) -> SeparationCertificate:
    """Certificate that a nontrivial free word survives a truncated-series map.

    Searches degrees 1..d_max incrementally and records the least degree at
    which the image differs from 1, together with the canonical (shortest,
    then lexicographically least) witness monomial and its coefficient.
    Freely trivial words are rejected up front; exhausting ``d_max`` raises
    :class:`SeparationFailure` without claiming triviality.
    """
    if modulus and not _is_prime(modulus):
        raise ValueError(f"modulus must be 0 or a prime, got {modulus}")
    reduced = w.free_reduce()
    if not reduced.letters:
        raise ValueError("word is freely trivial")
    rank = reduced.max_index
    if rank > rank_cap:
        raise ValueError(f"rank {rank} exceeds the configured cap {rank_cap}")
    if klass is None:
        klass = _default_class(modulus)
    for d in range(1, d_max + 1):
        image = magnus_eval(reduced, rank, d, modulus)
        if not image.is_one():
            mono, coeff = _canonical_witness(image)
            return SeparationCertificate(
                kind="free_word",
                klass=klass,
                inputs={"word": str(w)},
                data={
                    "rank": rank,
                    "d": d,
                    "modulus": modulus,
                    "monomial": list(mono),
                    "coefficient": coeff,
                },
                claims={
                    "freely_nontrivial": True,
                    "separated_at_degree": d,
                    "trivial_below_degree": True,
                    "canonical_witness": True,
                },
                notes=(
                    "target is the unit group of the truncated polynomial ring: "
                    "a finite p-group for modulus p, a finitely generated "
                    "torsion-free nilpotent group for modulus 0",
                ),
            )
    raise SeparationFailure(
        f"no separating degree up to {d_max}; the word was not shown trivial"
    )
