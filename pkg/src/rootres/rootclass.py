"""Root classes of finite groups, residual cores, and axiom verification.

A root class is a class of groups closed under subgroups (axiom 1) and
finite direct products (axiom 2) that satisfies the root property (axiom 3):
for every subnormal chain C normal in B normal in A with A/B and B/C in the
class, some D normal in A lies inside C with A/D in the class.  Three
decidable instances on finite groups are provided: all finite groups,
finite p-groups for a prime p, and finite solvable groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .perms import (
    PermGroup,
    Subgroup,
    all_subgroups,
    classify,
    direct_product,
    intersect,
    normal_subgroups,
    perfect_core,
    quotient,
)

__all__ = [
    "RootClassSpec",
    "ResidualCore",
    "InconsistencyError",
    "member",
    "quotient_in_class",
    "k_quotient_normals",
    "residual_core",
    "axiom3_witness",
    "check_intersection_quotient",
    "extension_closure_check",
    "axiom_sweep",
    "AxiomSweepReport",
]

_KINDS = ("finite", "p", "solvable")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RootClassSpec:
    """One of the three decidable root classes: finite, p-groups, solvable."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind == "p":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"{self.p!r} is not a prime")
        elif self.p is not None:
            raise ValueError(f"kind {self.kind!r} takes no prime")

    @classmethod
    def parse(cls, text: str) -> "RootClassSpec":
        """Parse the textual form used on the CLI: finite, p:<prime>, solvable."""
        text = text.strip()
        if text == "finite":
            return cls("finite")
        if text == "solvable":
            return cls("solvable")
        if text.startswith("p:"):
            try:
                p = int(text[2:])
            except ValueError:
                raise ValueError(f"bad prime in class spec {text!r}") from None
            return cls("p", p)
        raise ValueError(f"unknown class spec {text!r}")

    def __str__(self) -> str:
        return f"p:{self.p}" if self.kind == "p" else self.kind


FINITE = RootClassSpec("finite")
SOLVABLE = RootClassSpec("solvable")


def finite_p(p: int) -> RootClassSpec:
    return RootClassSpec("p", p)


class InconsistencyError(RuntimeError):
    """A mathematically guaranteed property failed; indicates a bug."""


def member(G: PermGroup, K: RootClassSpec) -> bool:
    """Whether the group belongs to the class."""
    if K.kind == "finite":
        return True
    c = classify(G)
    if K.kind == "p":
        return c.is_p_group(K.p)
    return c.is_solvable


def quotient_in_class(G: PermGroup, N: Subgroup, K: RootClassSpec) -> bool:
    """Whether G/N lies in the class, without building the quotient.

    Index arithmetic settles the finite and p-group kinds; G/N is solvable
    exactly when the stable derived term of G lies inside N.
    """
    if K.kind == "finite":
        return True
    if K.kind == "p":
        index = G.order // N.order
        while index % K.p == 0:
            index //= K.p
        return index == 1
    return perfect_core(G) <= N.elements


def k_quotient_normals(G: PermGroup, K: RootClassSpec) -> tuple[Subgroup, ...]:
    """Normal subgroups with quotient in the class, in canonical order."""
    return tuple(N for N in normal_subgroups(G) if quotient_in_class(G, N, K))


@dataclass(frozen=True)
class ResidualCore:
    """Intersection of all normal subgroups whose quotient lies in the class.

    A finite group is residual in the class exactly when the core is trivial.
    """

    group: PermGroup
    klass: RootClassSpec
    core: Subgroup

    @property
    def is_residual(self) -> bool:
        return self.core.order == 1


def residual_core(G: PermGroup, K: RootClassSpec) -> ResidualCore:
    qualifying = k_quotient_normals(G, K)
    core_elements = frozenset(G.elements)
    for N in qualifying:
        core_elements &= N.elements
    return ResidualCore(G, K, Subgroup.from_elements(G, core_elements))


def _check_subgroup_of(outer: PermGroup, inner: Subgroup, what: str) -> None:
    if inner.parent.degree != outer.degree or not inner.elements <= outer.elements:
        raise ValueError(f"{what} is not a subgroup of the given group")


def _normal_in(sub: Subgroup, over_generators) -> bool:
    for g in over_generators:
        gi = g.inverse()
        for n in sub.elements:
            if gi * n * g not in sub.elements:
                return False
    return True


def axiom3_witness(A: PermGroup, B: Subgroup, C: Subgroup, K: RootClassSpec) -> Subgroup:
    """Normal subgroup D of A with D <= C and A/D in the class.

    Requires the subnormal chain C normal in B normal in A with both factors
    A/B and B/C in the class; the root property guarantees a witness exists,
    and the search returns the first one in canonical order.  Exhaustion
    would falsify the axiom and raises :class:`InconsistencyError`.
    """
    _check_subgroup_of(A, B, "B")
    _check_subgroup_of(A, C, "C")
    if not C.elements <= B.elements:
        raise ValueError("C is not contained in B")
    if not _normal_in(B, A.generators):
        raise ValueError("B is not normal in A")
    if not _normal_in(C, B.generators):
        raise ValueError("C is not normal in B")
    if not quotient_in_class(A, B, K):
        raise ValueError("A/B is not in the class")
    Bg = B.as_group()
    if not quotient_in_class(Bg, Subgroup(Bg, C.generators), K):
        raise ValueError("B/C is not in the class")
    for D in normal_subgroups(A):
        if D.elements <= C.elements and quotient_in_class(A, D, K):
            return D
    raise InconsistencyError("root axiom witness search exhausted")


class IntersectionQuotient(NamedTuple):
    quotient: PermGroup
    in_class: bool


def check_intersection_quotient(
    G: PermGroup, A: Subgroup, B: Subgroup, K: RootClassSpec
) -> IntersectionQuotient:
    """Quotient by the intersection of two class-conormal normal subgroups.

    For A, B normal in G with G/A and G/B in the class, G/(A n B) must be in
    the class as well (it embeds in the product of the two quotients); the
    quotient is returned together with the confirming verdict.  A negative
    verdict would falsify a closure property of root classes and raises
    :class:`InconsistencyError`.
    """
    _check_subgroup_of(G, A, "A")
    _check_subgroup_of(G, B, "B")
    for name, sub in (("A", A), ("B", B)):
        if not _normal_in(sub, G.generators):
            raise ValueError(f"{name} is not normal in G")
        if not quotient_in_class(G, sub, K):
            raise ValueError(f"G/{name} is not in the class")
    meet = intersect(Subgroup.from_elements(G, A.elements), Subgroup.from_elements(G, B.elements))
    Q, _ = quotient(G, meet)
    if not member(Q, K):
        raise InconsistencyError("intersection quotient left the class")
    return IntersectionQuotient(Q, True)


def extension_closure_check(chain: Sequence[Subgroup], K: RootClassSpec) -> bool:
    """Verify extension closure along a subnormal chain ending at the parent.

    ``chain`` lists subgroups of one parent group, each normal in the next,
    the last being the parent itself.  The first term and every successive
    factor must lie in the class; the parent is then confirmed to lie in the
    class too (failure raises :class:`InconsistencyError`).
    """
    chain = list(chain)
    if not chain:
        raise ValueError("empty chain")
    G = chain[0].parent
    for sub in chain:
        _check_subgroup_of(G, sub, "chain term")
    if chain[-1].elements != G.elements:
        raise ValueError("chain must end at the full group")
    for lower, upper in zip(chain, chain[1:]):
        if not lower.elements <= upper.elements:
            raise ValueError("chain is not ascending")
        if not _normal_in(lower, upper.generators):
            raise ValueError("chain is not subnormal")
    if not member(chain[0].as_group(), K):
        raise ValueError("first chain term is outside the class")
    for lower, upper in zip(chain, chain[1:]):
        upper_g = upper.as_group()
        if not quotient_in_class(upper_g, Subgroup(upper_g, lower.generators), K):
            raise ValueError("a chain factor is outside the class")
    if not member(G, K):
        raise InconsistencyError("extension closure failed")
    return True


@dataclass
class AxiomSweepReport:
    """Tally of axiom checks over a collection of groups."""

    klass: RootClassSpec
    subgroup_checks: int = 0
    product_checks: int = 0
    witness_checks: int = 0
    intersection_checks: int = 0
    extension_checks: int = 0
    failures: list[str] = None

    def __post_init__(self) -> None:
        if self.failures is None:
            self.failures = []

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def total_checks(self) -> int:
        return (
            self.subgroup_checks
            + self.product_checks
            + self.witness_checks
            + self.intersection_checks
            + self.extension_checks
        )


def axiom_sweep(
    groups: Sequence[PermGroup],
    K: RootClassSpec,
    max_order: int = 48,
    products: Iterable[tuple[PermGroup, PermGroup, PermGroup]] | None = None,
) -> AxiomSweepReport:
    """Check the root-class axioms and closure properties on concrete groups.

    Covers subgroup closure, direct-product closure, the root-property
    witness on every qualifying subnormal triple, intersection quotients for
    every qualifying pair of normal subgroups, and extension closure on the
    qualifying triples.  ``products`` may supply precomputed direct products
    as (left, right, product) triples to avoid rebuilding them per class.
    """
    report = AxiomSweepReport(K)
    groups = [G for G in groups if G.order <= max_order]

    for G in groups:
        if member(G, K):
            for S in all_subgroups(G):
                report.subgroup_checks += 1
                if not member(S.as_group(), K):
                    report.failures.append(f"subgroup closure failed in group of order {G.order}")

    if products is None:
        products = [
            (a, b, direct_product(a, b))
            for i, a in enumerate(groups)
            for b in groups[i:]
        ]
    for a, b, prod in products:
        if a.order > max_order or b.order > max_order:
            continue
        if member(a, K) and member(b, K):
            report.product_checks += 1
            if not member(prod, K):
                report.failures.append(
                    f"product closure failed for orders {a.order} x {b.order}"
                )

    for G in groups:
        for B in normal_subgroups(G):
            if not quotient_in_class(G, B, K):
                continue
            Bg = B.as_group()
            for C in normal_subgroups(Bg):
                if not quotient_in_class(Bg, C, K):
                    continue
                C_in_G = Subgroup(G, C.generators)
                report.witness_checks += 1
                try:
                    D = axiom3_witness(G, B, C_in_G, K)
                except InconsistencyError:
                    report.failures.append(
                        f"no root-property witness in group of order {G.order}"
                    )
                    continue
                if not (D.elements <= C_in_G.elements and quotient_in_class(G, D, K)):
                    report.failures.append("root-property witness failed its contract")
                if member(C_in_G.as_group(), K):
                    report.extension_checks += 1
                    full = Subgroup.from_elements(G, G.elements)
                    try:
                        extension_closure_check([C_in_G, B, full], K)
                    except InconsistencyError:
                        report.failures.append(
                            f"extension closure failed in group of order {G.order}"
                        )

        qualifying = k_quotient_normals(G, K)
        for i, A in enumerate(qualifying):
            for B in qualifying[i:]:
                report.intersection_checks += 1
                try:
                    check_intersection_quotient(G, A, B, K)
                except InconsistencyError:
                    report.failures.append(
                        f"intersection quotient left the class in group of order {G.order}"
                    )
    return report
