"""Words and canonical forms in amalgamated products of finite groups.

A scheme holds finitely many finite factors, one designated subgroup per
factor, and a coherent family of identifying isomorphisms between those
subgroups.  Words are syllable sequences (copy index, factor element); the
canonical form of a word is head * t1 * ... * ts with the head in the copy-0
subgroup and every tail syllable a non-identity canonical right-coset
representative, consecutive syllables in different copies.  Two words are
equal in the amalgam exactly when their canonical forms coincide, which
makes equality a syntactic check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .perms import (
    Perm,
    PermGroup,
    Subgroup,
    Homomorphism,
    quotient,
    same_group,
    transversal,
)

__all__ = [
    "Syllable",
    "Word",
    "NormalForm",
    "AmalgamScheme",
    "build_scheme",
    "power_scheme",
    "as_word",
    "reduce_word",
    "words_equal",
    "multiply_words",
    "invert_word",
    "copy_automorphism",
    "power_quotient",
    "eval_hom_family",
]


class Syllable(NamedTuple):
    copy: int
    elt: Perm


Word = tuple[Syllable, ...]


def as_word(items: Iterable[Syllable | tuple[int, Perm]]) -> Word:
    """Coerce (copy, element) pairs into a word."""
    return tuple(Syllable(int(c), e) for c, e in items)


@dataclass(frozen=True)
class NormalForm:
    """Canonical form head * tail of an amalgam element.

    The head lives in the copy-0 subgroup; tail syllables are non-identity
    transversal representatives with consecutive copies distinct.  Length 0
    means the element lies in the amalgamated subgroup.
    """

    head: Perm
    tail: tuple[Syllable, ...]

    @property
    def length(self) -> int:
        return len(self.tail)

    def is_identity(self) -> bool:
        return not self.tail and self.head.is_identity()

    def as_word(self) -> Word:
        if self.head.is_identity():
            return self.tail
        return (Syllable(0, self.head),) + self.tail


class AmalgamScheme:
    """Validated amalgamation data; immutable once built (see build_scheme)."""

    def __init__(
        self,
        factors: tuple[PermGroup, ...],
        subgroups: tuple[Subgroup, ...],
        iso_maps: dict[tuple[int, int], dict[Perm, Perm]],
        is_power: bool,
    ):
        self.factors = factors
        self.subgroups = subgroups
        self._iso_maps = iso_maps
        self.is_power = is_power
        self.transversals = tuple(
            transversal(G, H) for G, H in zip(factors, subgroups)
        )
        self._rep_of = []
        for lam, reps in enumerate(self.transversals):
            lookup = {}
            for rep in reps:
                for h in subgroups[lam].elements:
                    lookup[h * rep] = rep
            self._rep_of.append(lookup)

    @property
    def copies(self) -> int:
        return len(self.factors)

    def transport(self, h: Perm, lam: int, mu: int) -> Perm:
        """Apply the identifying isomorphism from copy lam to copy mu."""
        if lam == mu:
            return h
        try:
            return self._iso_maps[(lam, mu)][h]
        except KeyError:
            raise ValueError(f"{h} is not in the amalgamated subgroup of copy {lam}") from None

    def coset_rep(self, lam: int, x: Perm) -> Perm:
        return self._rep_of[lam][x]

    def check_syllable(self, s: Syllable) -> None:
        if not 0 <= s.copy < self.copies:
            raise ValueError(f"copy index {s.copy} out of range")
        if s.elt not in self.factors[s.copy].elements:
            raise ValueError(f"element {s.elt} is not in factor {s.copy}")

    def __repr__(self) -> str:
        kind = "power" if self.is_power else "amalgam"
        return f"AmalgamScheme({kind}, copies={self.copies}, factor_order={self.factors[0].order})"


def _iso_as_map(iso, H_src: Subgroup) -> dict[Perm, Perm]:
    if isinstance(iso, Homomorphism):
        return {h: iso(h) for h in H_src.elements}
    return dict(iso)


def _check_iso(f: Mapping[Perm, Perm], src: Subgroup, dst: Subgroup, lam: int, mu: int) -> None:
    if set(f.keys()) != set(src.elements):
        raise ValueError(f"iso {lam}->{mu} is not defined on exactly the subgroup of copy {lam}")
    if set(f.values()) != set(dst.elements):
        raise ValueError(f"iso {lam}->{mu} is not onto the subgroup of copy {mu}")
    for a in src.elements:
        for b in src.elements:
            if f[a * b] != f[a] * f[b]:
                raise ValueError(f"iso {lam}->{mu} is not multiplicative at {a}, {b}")


def build_scheme(
    factors: Sequence[PermGroup],
    subgroups: Sequence[Subgroup],
    isos: Mapping[tuple[int, int], object] | None = None,
) -> AmalgamScheme:
    """Validate amalgamation data and precompute canonical transversals.

    ``isos`` maps ordered copy pairs to identifying isomorphisms, given as
    Homomorphism objects or element maps.  Pairs anchored at copy 0 (either
    direction) are required when subgroups differ; every further supplied
    pair is checked against the family generated from the copy-0 anchors,
    so any incoherent triple is rejected with a witness element.  When the
    subgroups share one element set, missing isos default to the identity.
    """
    factors = tuple(factors)
    subgroups = tuple(subgroups)
    if len(factors) < 2:
        raise ValueError("an amalgam needs at least two factors")
    if len(subgroups) != len(factors):
        raise ValueError("need exactly one subgroup per factor")
    for lam, (G, H) in enumerate(zip(factors, subgroups)):
        if H.parent.degree != G.degree or not H.elements <= G.elements:
            raise ValueError(f"subgroup of copy {lam} is not contained in its factor")

    given: dict[tuple[int, int], dict[Perm, Perm]] = {}
    if isos:
        for (lam, mu), iso in isos.items():
            if not (0 <= lam < len(factors) and 0 <= mu < len(factors)):
                raise ValueError(f"iso pair ({lam}, {mu}) out of range")
            if lam == mu:
                continue
            given[(lam, mu)] = _iso_as_map(iso, subgroups[lam])

    # Anchor maps from copy 0.
    base: dict[int, dict[Perm, Perm]] = {0: {h: h for h in subgroups[0].elements}}
    for lam in range(1, len(factors)):
        if (0, lam) in given:
            base[lam] = given[(0, lam)]
        elif (lam, 0) in given:
            back = given[(lam, 0)]
            _check_iso(back, subgroups[lam], subgroups[0], lam, 0)
            base[lam] = {v: k for k, v in back.items()}
        elif subgroups[lam].elements == subgroups[0].elements:
            base[lam] = {h: h for h in subgroups[0].elements}
        else:
            raise ValueError(f"no identifying iso between copy 0 and copy {lam}")
        _check_iso(base[lam], subgroups[0], subgroups[lam], 0, lam)

    iso_maps: dict[tuple[int, int], dict[Perm, Perm]] = {}
    inv_base = {lam: {v: k for k, v in f.items()} for lam, f in base.items()}
    for lam in range(len(factors)):
        for mu in range(len(factors)):
            if lam == mu:
                continue
            iso_maps[(lam, mu)] = {h: base[mu][inv_base[lam][h]] for h in subgroups[lam].elements}

    for (lam, mu), f in given.items():
        derived = iso_maps[(lam, mu)]
        if set(f.keys()) != set(derived.keys()):
            raise ValueError(f"iso {lam}->{mu} has the wrong domain")
        for h in derived:
            if f[h] != derived[h]:
                raise ValueError(
                    f"incoherent identification: iso {lam}->{mu} disagrees at {h} "
                    f"(got {f[h]}, family gives {derived[h]})"
                )

    is_power = all(same_group(G, factors[0]) for G in factors)
    if is_power:
        h0 = subgroups[0].elements
        is_power = all(H.elements == h0 for H in subgroups)
    if is_power:
        is_power = all(all(k == v for k, v in f.items()) for f in iso_maps.values())

    return AmalgamScheme(factors, subgroups, iso_maps, is_power)


def power_scheme(base: PermGroup, subgroup: Subgroup, copies: int) -> AmalgamScheme:
    """Amalgamated power: ``copies`` identical factors, identity identifications."""
    if copies < 2:
        raise ValueError("a power needs at least two copies")
    return build_scheme((base,) * copies, (subgroup,) * copies)


def _prepend(
    scheme: AmalgamScheme, copy: int, elt: Perm, head: Perm, tail: tuple[Syllable, ...]
) -> tuple[Perm, tuple[Syllable, ...]]:
    # Represents elt * (head * tail) with elt in factor `copy`; head sits in copy 0.
    b = elt * scheme.transport(head, 0, copy)
    if tail and tail[0].copy == copy:
        return _prepend(scheme, copy, b * tail[0].elt, scheme.factors[0].identity, tail[1:])
    H = scheme.subgroups[copy]
    if b in H.elements:
        return scheme.transport(b, copy, 0), tail
    rep = scheme.coset_rep(copy, b)
    h = b * rep.inverse()
    return scheme.transport(h, copy, 0), (Syllable(copy, rep),) + tail


def reduce_word(scheme: AmalgamScheme, word: Iterable[Syllable | tuple[int, Perm]]) -> NormalForm:
    """Canonical form of a word; idempotent and constant on equality classes."""
    word = as_word(word)
    for s in word:
        scheme.check_syllable(s)
    head = scheme.factors[0].identity
    tail: tuple[Syllable, ...] = ()
    for s in reversed(word):
        head, tail = _prepend(scheme, s.copy, s.elt, head, tail)
    return NormalForm(head, tail)


def words_equal(scheme: AmalgamScheme, w1, w2) -> bool:
    """Whether two words represent the same amalgam element."""
    return reduce_word(scheme, w1) == reduce_word(scheme, w2)


def multiply_words(scheme: AmalgamScheme, w1, w2) -> NormalForm:
    return reduce_word(scheme, tuple(as_word(w1)) + tuple(as_word(w2)))


def invert_word(scheme: AmalgamScheme, w) -> NormalForm:
    word = as_word(w)
    return reduce_word(scheme, tuple(Syllable(s.copy, s.elt.inverse()) for s in reversed(word)))


def copy_automorphism(scheme: AmalgamScheme, pi: Sequence[int], w) -> Word:
    """Relabel syllable copies through a permutation of the copy indices.

    Only powers admit these automorphisms (identical factors, identity
    identifications); relabeling commutes with reduction up to the same
    relabeling of the canonical form.
    """
    if not scheme.is_power:
        raise ValueError("copy automorphisms require a power scheme")
    pi = tuple(int(i) for i in pi)
    if sorted(pi) != list(range(scheme.copies)):
        raise ValueError(f"{pi} is not a permutation of the copy indices")
    word = as_word(w)
    for s in word:
        scheme.check_syllable(s)
    return tuple(Syllable(pi[s.copy], s.elt) for s in word)


def power_quotient(
    scheme: AmalgamScheme, N: Subgroup
) -> tuple[AmalgamScheme, Callable[[Iterable], Word]]:
    """Power over the base quotient, with the induced syllable-wise word map.

    For a power over A amalgamating H and N normal in A, builds the power
    over A/N amalgamating the image of H (same copy count) and returns it
    with the map sending syllable (copy, a) to (copy, aN); the map descends
    to a homomorphism of the amalgams.
    """
    if not scheme.is_power:
        raise ValueError("quotient powers require a power scheme")
    A = scheme.factors[0]
    if N.parent.degree != A.degree or not N.elements <= A.elements:
        raise ValueError("kernel is not a subgroup of the base factor")
    Q, proj = quotient(A, Subgroup.from_elements(A, N.elements))
    H = scheme.subgroups[0]
    qH = Subgroup.from_elements(Q, frozenset(proj(h) for h in H.elements))
    qscheme = power_scheme(Q, qH, scheme.copies)

    def word_map(word) -> Word:
        mapped = []
        for s in as_word(word):
            scheme.check_syllable(s)
            mapped.append(Syllable(s.copy, proj(s.elt)))
        return tuple(mapped)

    return qscheme, word_map


def check_family_agreement(
    scheme: AmalgamScheme, homs: Sequence[Homomorphism]
) -> tuple[Perm, int, int] | None:
    """First witness (h, lam, mu) where the family disagrees on the subgroup."""
    for lam in range(scheme.copies):
        for mu in range(scheme.copies):
            if lam == mu:
                continue
            for h in scheme.subgroups[lam].sorted_elements:
                if homs[lam](h) != homs[mu](scheme.transport(h, lam, mu)):
                    return h, lam, mu
    return None


def eval_hom_family(scheme: AmalgamScheme, homs: Sequence[Homomorphism], w) -> Perm:
    """Evaluate the homomorphism induced by one map per factor.

    The maps must share a target and agree on the amalgamated subgroup
    through the identifying isomorphisms; the induced map is then evaluated
    syllable-wise and is constant on word equality classes.
    """
    homs = list(homs)
    if len(homs) != scheme.copies:
        raise ValueError("need exactly one homomorphism per copy")
    target = homs[0].target
    for f in homs[1:]:
        if not same_group(f.target, target):
            raise ValueError("homomorphism family targets differ")
    for lam, f in enumerate(homs):
        if not same_group(f.source, scheme.factors[lam]):
            raise ValueError(f"homomorphism {lam} is not defined on factor {lam}")
    witness = check_family_agreement(scheme, homs)
    if witness is not None:
        h, lam, mu = witness
        raise ValueError(
            f"family does not agree on the amalgamated subgroup: copies {lam}, {mu} "
            f"differ at {h}"
        )
    acc = target.identity
    for s in as_word(w):
        scheme.check_syllable(s)
        acc = acc * homs[s.copy](s.elt)
    return acc
