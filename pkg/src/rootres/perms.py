"""Exact arithmetic for finite permutation groups.

Elements are permutations of {1..degree} in image-array form.  The canonical
element order used for every deterministic choice (coset representatives,
normalized generators, enumeration and tie-breaking) is the lexicographic
order on image arrays; the identity is always the minimum.  All objects are
immutable after construction, caches included, so shared instances are safe
to read concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

DEFAULT_ORDER_CAP = 10_000

__all__ = [
    "DEFAULT_ORDER_CAP",
    "CapExceeded",
    "Perm",
    "PermGroup",
    "Subgroup",
    "Homomorphism",
    "Classification",
    "generate",
    "normal_subgroups",
    "all_subgroups",
    "conjugacy_classes",
    "quotient",
    "intersect",
    "classify",
    "hom",
    "direct_product",
    "transversal",
    "juxtapose",
    "derived_subgroup",
    "perfect_core",
]


class CapExceeded(RuntimeError):
    """A closure grew past the configured group-order cap."""

    def __init__(self, cap: int, partial_count: int) -> None:
        super().__init__(
            f"group-order cap {cap} exceeded; at least {partial_count} elements"
        )
        self.cap = cap
        self.partial_count = partial_count


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation of {1..n} stored as its image array.

    ``images[i-1]`` is the image of point ``i``.  Products compose left to
    right: ``(p * q)(i) == q(p(i))``, matching the order in which group
    words are read.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images!r}")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        """Build a permutation from disjoint cycles of 1-based points."""
        images = list(range(1, degree + 1))
        for cycle in cycles:
            pts = list(cycle)
            for i, pt in enumerate(pts):
                if not 1 <= pt <= degree:
                    raise ValueError(f"point {pt} outside 1..{degree}")
                images[pt - 1] = pts[(i + 1) % len(pts)]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch in product")
        return Perm(tuple(other.images[i - 1] for i in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img - 1] = i + 1
        return Perm(tuple(inv))

    def conj(self, g: "Perm") -> "Perm":
        """Conjugate of self by g, i.e. g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i + 1 == v for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest moved point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cyc)


def juxtapose(a: Perm, b: Perm) -> Perm:
    """Permutation acting as ``a`` on the first block and ``b`` on the next."""
    return Perm(a.images + tuple(v + a.degree for v in b.images))


def _close(degree: int, gens: Sequence[Perm], cap: int) -> frozenset[Perm]:
    """Closure of the generators under products, capped at ``cap`` elements."""
    ident = Perm.identity(degree)
    els = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in els:
                    if len(els) >= cap:
                        raise CapExceeded(cap, len(els))
                    els.add(y)
                    new.append(y)
        frontier = new
    return frozenset(els)


class PermGroup:
    """A finite permutation group given by generators.

    The full element set is computed on first use and cached; ``cap`` bounds
    the closure size (exceeding it raises :class:`CapExceeded`, never a
    silent truncation).
    """

    def __init__(self, degree: int, generators: Iterable[Perm] = (), cap: int = DEFAULT_ORDER_CAP):
        generators = tuple(generators)
        if degree < 1:
            raise ValueError("degree must be at least 1")
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"generator degree {g.degree} != group degree {degree}")
        self.degree = degree
        self.generators = generators
        self.cap = cap

    @cached_property
    def elements(self) -> frozenset[Perm]:
        return _close(self.degree, self.generators, self.cap)

    @cached_property
    def sorted_elements(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.elements))

    @cached_property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, generators={len(self.generators)})"


def generate(degree: int, gens: Iterable[Perm], cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Generate a group and force its element set (surfacing cap errors now)."""
    group = PermGroup(degree, gens, cap=cap)
    group.elements
    return group


def same_group(a: PermGroup, b: PermGroup) -> bool:
    return a.degree == b.degree and a.elements == b.elements


class Subgroup:
    """A subgroup of a parent group, with its own generators and element set."""

    def __init__(self, parent: PermGroup, generators: Iterable[Perm] = ()):
        generators = tuple(generators)
        for g in generators:
            if g.degree != parent.degree:
                raise ValueError("subgroup generator degree mismatch")
            if g not in parent.elements:
                raise ValueError(f"generator {g} outside the parent group")
        self.parent = parent
        self.generators = generators

    @classmethod
    def from_elements(cls, parent: PermGroup, elements: Iterable[Perm]) -> "Subgroup":
        """Subgroup with canonical generators chosen greedily in element order."""
        elements = frozenset(elements)
        sub = cls(parent, canonical_generators(parent.degree, elements, parent.cap))
        sub.__dict__["elements"] = elements
        return sub

    @cached_property
    def elements(self) -> frozenset[Perm]:
        return _close(self.parent.degree, self.generators, self.parent.cap)

    @cached_property
    def sorted_elements(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.elements))

    @cached_property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def as_group(self) -> PermGroup:
        """The same subgroup as a standalone group on the parent's points."""
        return generate(self.parent.degree, self.generators, cap=self.parent.cap)

    def is_normal(self) -> bool:
        """Whether the subgroup is normal in its parent."""
        return _normal_under(self.elements, self.parent.generators)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent.degree == other.parent.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.parent.degree, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, generators={[str(g) for g in self.generators]})"


def canonical_generators(degree: int, elements: frozenset[Perm], cap: int) -> tuple[Perm, ...]:
    """Greedy minimal generating sequence in canonical element order."""
    gens: list[Perm] = []
    have: frozenset[Perm] = frozenset({Perm.identity(degree)})
    if len(elements) == 1:
        return ()
    for x in sorted(elements):
        if x not in have:
            gens.append(x)
            have = _close(degree, gens, cap)
            if len(have) == len(elements):
                break
    return tuple(gens)


def _normal_under(elements: frozenset[Perm], conjugators: Sequence[Perm]) -> bool:
    for g in conjugators:
        gi = g.inverse()
        for n in elements:
            if gi * n * g not in elements:
                return False
    return True


def _memo(group: PermGroup, key: str, compute):
    value = group.__dict__.get(key)
    if value is None:
        value = compute()
        group.__dict__[key] = value
    return value


def conjugacy_classes(G: PermGroup) -> tuple[frozenset[Perm], ...]:
    """Conjugacy classes ordered by their minimal element."""

    def build() -> tuple[frozenset[Perm], ...]:
        remaining = set(G.elements)
        classes = []
        for x in G.sorted_elements:
            if x not in remaining:
                continue
            orbit = {x}
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for g in G.generators:
                        z = y.conj(g)
                        if z not in orbit:
                            orbit.add(z)
                            nxt.append(z)
                frontier = nxt
            classes.append(frozenset(orbit))
            remaining -= orbit
        return tuple(classes)

    return _memo(G, "_conjugacy_classes", build)


def _subgroup_sort_key(elements: frozenset[Perm]) -> tuple:
    return (len(elements), tuple(sorted(elements)))


def normal_subgroups(G: PermGroup) -> tuple[Subgroup, ...]:
    """Every normal subgroup of G, in canonical order (by order, then elements).

    The lattice is generated by the normal closures of the conjugacy classes
    and closed under join and intersection; every normal subgroup is a join
    of class closures, so nothing is missed.
    """

    def build() -> tuple[Subgroup, ...]:
        ident = G.identity
        trivial = frozenset({ident})
        lattice: dict[frozenset[Perm], tuple[Perm, ...]] = {trivial: ()}
        for cls_ in conjugacy_classes(G):
            gens = canonical_generators(G.degree, frozenset(cls_ | {ident}), G.cap)
            closure = _close(G.degree, gens, G.cap)
            lattice.setdefault(closure, gens)
        changed = True
        while changed:
            changed = False
            items = list(lattice.items())
            for (ea, ga), (eb, gb) in itertools.combinations(items, 2):
                meet = ea & eb
                if meet not in lattice:
                    lattice[meet] = canonical_generators(G.degree, meet, G.cap)
                    changed = True
                join = _close(G.degree, ga + gb, G.cap)
                if join not in lattice:
                    lattice[join] = canonical_generators(G.degree, join, G.cap)
                    changed = True
        subs = [Subgroup.from_elements(G, els) for els in lattice]
        subs.sort(key=lambda s: _subgroup_sort_key(s.elements))
        return tuple(subs)

    return _memo(G, "_normal_subgroups", build)


def all_subgroups(G: PermGroup) -> tuple[Subgroup, ...]:
    """Every subgroup of G, in canonical order.

    Computed as the join closure of the cyclic subgroups; intended for the
    desk-scale catalog, not for large groups.
    """

    def build() -> tuple[Subgroup, ...]:
        ident = G.identity
        lattice: dict[frozenset[Perm], tuple[Perm, ...]] = {frozenset({ident}): ()}
        for x in G.sorted_elements:
            if x == ident:
                continue
            cyc = _close(G.degree, (x,), G.cap)
            lattice.setdefault(cyc, canonical_generators(G.degree, cyc, G.cap))
        frontier = list(lattice.items())
        while frontier:
            new: list[tuple[frozenset[Perm], tuple[Perm, ...]]] = []
            for ea, ga in frontier:
                for eb, gb in list(lattice.items()):
                    if ea <= eb or eb <= ea:
                        continue
                    join = _close(G.degree, ga + gb, G.cap)
                    if join not in lattice:
                        gens = canonical_generators(G.degree, join, G.cap)
                        lattice[join] = gens
                        new.append((join, gens))
            frontier = new
        subs = [Subgroup.from_elements(G, els) for els in lattice]
        subs.sort(key=lambda s: _subgroup_sort_key(s.elements))
        return tuple(subs)

    return _memo(G, "_all_subgroups", build)


class Homomorphism:
    """A homomorphism determined by images of the source generators.

    Validity is checked by closing the graph subgroup of source x target:
    the assignment extends to a homomorphism exactly when no source element
    acquires two images during the closure, which for generating sets is the
    same as the graph having the order of the source.
    """

    def __init__(self, source: PermGroup, target: PermGroup, generator_images: Iterable[Perm]):
        generator_images = tuple(generator_images)
        if len(generator_images) != len(source.generators):
            raise ValueError("need exactly one image per source generator")
        for img in generator_images:
            if img not in target.elements:
                raise ValueError(f"image {img} outside the target group")
        self.source = source
        self.target = target
        self.generator_images = generator_images
        self._map = self._close_graph()

    def _close_graph(self) -> dict[Perm, Perm]:
        pairs = list(zip(self.source.generators, self.generator_images))
        mapping = {self.source.identity: self.target.identity}
        frontier = [self.source.identity]
        while frontier:
            new = []
            for a in frontier:
                b = mapping[a]
                for g, h in pairs:
                    a2 = a * g
                    b2 = b * h
                    prev = mapping.get(a2)
                    if prev is None:
                        mapping[a2] = b2
                        new.append(a2)
                    elif prev != b2:
                        raise ValueError(
                            "assignment does not extend to a homomorphism "
                            f"(element {a2} receives two images)"
                        )
            frontier = new
        if len(mapping) != self.source.order:
            raise ValueError("generator images do not cover the source group")
        return mapping

    def __call__(self, x: Perm) -> Perm:
        try:
            return self._map[x]
        except KeyError:
            raise ValueError(f"{x} is not in the source group") from None

    @cached_property
    def kernel(self) -> Subgroup:
        ident = self.target.identity
        return Subgroup.from_elements(
            self.source, frozenset(a for a, b in self._map.items() if b == ident)
        )

    @cached_property
    def image(self) -> Subgroup:
        return Subgroup.from_elements(self.target, frozenset(self._map.values()))

    def is_injective(self) -> bool:
        return self.kernel.order == 1

    def __repr__(self) -> str:
        return f"Homomorphism({self.source!r} -> {self.target!r})"


def hom(source: PermGroup, target: PermGroup, images: Iterable[Perm]) -> Homomorphism:
    """Validated homomorphism sending source generators to ``images``."""
    return Homomorphism(source, target, images)


def quotient(G: PermGroup, N: Subgroup) -> tuple[PermGroup, Homomorphism]:
    """Quotient of G by a normal subgroup, as the action on right cosets.

    Returns the quotient as a permutation group of degree [G:N] together
    with the projection homomorphism; the kernel of the projection is N.
    Coset points are numbered in canonical representative order, so the
    output is deterministic.
    """
    if N.parent.degree != G.degree or not N.elements <= G.elements:
        raise ValueError("subgroup does not live in the given group")
    if not _normal_under(N.elements, G.generators):
        raise ValueError("subgroup is not normal")
    reps = transversal(G, N)
    coset_of = {}
    for i, r in enumerate(reps):
        for n in N.elements:
            coset_of[n * r] = i
    qgens = [
        Perm(tuple(coset_of[reps[i] * g] + 1 for i in range(len(reps))))
        for g in G.generators
    ]
    Q = generate(len(reps), qgens, cap=G.cap)
    proj = Homomorphism(G, Q, qgens)
    return Q, proj


def transversal(G: PermGroup, H: Subgroup) -> tuple[Perm, ...]:
    """Canonical right-coset representatives of H in G.

    Each representative is the minimal element of its coset ``Hx`` in the
    canonical order; the identity represents H itself and comes first.
    """
    if H.parent.degree != G.degree or not H.elements <= G.elements:
        raise ValueError("subgroup does not live in the given group")
    reps = []
    covered: set[Perm] = set()
    for x in G.sorted_elements:
        if x not in covered:
            reps.append(x)
            covered.update(h * x for h in H.elements)
    return tuple(reps)


def intersect(H1: Subgroup, H2: Subgroup) -> Subgroup:
    """Element-wise intersection of two subgroups of the same parent."""
    if not same_group(H1.parent, H2.parent):
        raise ValueError("subgroups have different parent groups")
    return Subgroup.from_elements(H1.parent, H1.elements & H2.elements)


def _prime_factors(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@dataclass(frozen=True)
class Classification:
    """Order data and solvability of a finite group."""

    order: int
    prime_factors: tuple[tuple[int, int], ...]
    is_solvable: bool

    def is_p_group(self, p: int) -> bool:
        """True when the order is a power of p (the trivial group counts)."""
        if self.order == 1:
            return True
        return len(self.prime_factors) == 1 and self.prime_factors[0][0] == p


def derived_subgroup(G: PermGroup) -> Subgroup:
    """Commutator subgroup, via the normal closure of generator commutators."""
    seeds = []
    for a, b in itertools.combinations_with_replacement(G.generators, 2):
        c = a.inverse() * b.inverse() * a * b
        if not c.is_identity():
            seeds.append(c)
    gens = list(dict.fromkeys(seeds))
    els = _close(G.degree, gens, G.cap)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            gi = g.inverse()
            for x in list(els):
                y = gi * x * g
                if y not in els:
                    gens.append(y)
                    els = _close(G.degree, gens, G.cap)
                    changed = True
    return Subgroup.from_elements(G, els)


def perfect_core(G: PermGroup) -> frozenset[Perm]:
    """Stable term of the derived series; trivial exactly for solvable groups."""

    def build() -> frozenset[Perm]:
        cur = G
        cur_order = G.order
        while True:
            der = derived_subgroup(cur)
            if der.order == cur_order:
                return der.elements
            if der.order == 1:
                return der.elements
            cur = der.as_group()
            cur_order = der.order

    return _memo(G, "_perfect_core", build)


def classify(G: PermGroup) -> Classification:
    """Order, p-group structure per prime divisor, and solvability."""

    def build() -> Classification:
        return Classification(
            order=G.order,
            prime_factors=_prime_factors(G.order),
            is_solvable=len(perfect_core(G)) == 1,
        )

    return _memo(G, "_classification", build)


def direct_product(G1: PermGroup, G2: PermGroup) -> PermGroup:
    """Direct product acting on the disjoint union of the point sets."""
    cap = max(G1.cap, G2.cap)
    if G1.order * G2.order > cap:
        raise CapExceeded(cap, G1.order * G2.order)
    id1 = G1.identity
    id2 = G2.identity
    gens = [juxtapose(g, id2) for g in G1.generators]
    gens += [juxtapose(id1, g) for g in G2.generators]
    return generate(G1.degree + G2.degree, gens, cap=cap)
