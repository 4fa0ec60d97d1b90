"""Independent brute-force oracles the production code is checked against.

Everything here recomputes its answers from first principles: subgroup
lattices by breadth-first extension, normality by conjugating with every
group element, quotient structure on explicit coset sets, and amalgam word
equality by exhaustively applying the defining relations.  Only elementary
permutation arithmetic is shared with the library.
"""

from __future__ import annotations

import itertools

from rootres.perms import Perm, PermGroup

# --- subgroup enumeration ------------------------------------------------------


def close_set(degree, gens):
    ident = Perm.identity(degree)
    els = {ident}
    frontier = [ident]
    gens = list(gens)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in els:
                    els.add(y)
                    new.append(y)
        frontier = new
    return frozenset(els)


def all_subgroups_bf(G: PermGroup) -> list[frozenset[Perm]]:
    """Every subgroup element set, by extending known subgroups one element at a time."""
    trivial = frozenset({G.identity})
    found = {trivial}
    queue = [trivial]
    while queue:
        S = queue.pop()
        for x in G.elements:
            if x in S:
                continue
            T = close_set(G.degree, list(S) + [x])
            if T not in found:
                found.add(T)
                queue.append(T)
    return sorted(found, key=lambda s: (len(s), tuple(sorted(s))))


def is_normal_bf(G: PermGroup, S: frozenset[Perm]) -> bool:
    for g in G.elements:
        gi = g.inverse()
        for s in S:
            if gi * s * g not in S:
                return False
    return True


def normal_subgroups_bf(G: PermGroup) -> list[frozenset[Perm]]:
    return [S for S in all_subgroups_bf(G) if is_normal_bf(G, S)]


# --- quotients on explicit coset sets ------------------------------------------


class CosetGroupBF:
    """Quotient group realized on explicit right-coset sets."""

    def __init__(self, G: PermGroup, N: frozenset[Perm]):
        coset_of = {}
        cosets = []
        for x in sorted(G.elements):
            if x in coset_of:
                continue
            coset = frozenset(n * x for n in N)
            cosets.append(coset)
            for y in coset:
                coset_of[y] = coset
        self.cosets = cosets
        self._coset_of = coset_of

    @property
    def order(self):
        return len(self.cosets)

    def mult(self, c1, c2):
        return self._coset_of[next(iter(sorted(c1))) * next(iter(sorted(c2)))]

    def is_p_power(self, p):
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1


def quotient_in_class_bf(G: PermGroup, N: frozenset[Perm], kind: str, p: int | None) -> bool:
    """Membership of G/N in a class, decided on explicit cosets."""
    q = CosetGroupBF(G, N)
    if kind == "finite":
        return True
    if kind == "p":
        return q.is_p_power(p)
    return _solvable_bf(q)


def _solvable_bf(q) -> bool:
    elements = list(q.cosets)
    current = set(elements)
    while True:
        commutators = set()
        inv = {}
        for c in current:
            rep = next(iter(sorted(c)))
            inv[c] = q._coset_of[rep.inverse()]
        for a, b in itertools.product(current, repeat=2):
            commutators.add(q.mult(q.mult(inv[a], inv[b]), q.mult(a, b)))
        derived = close_under_mult(q, commutators)
        if len(derived) == 1:
            return True
        if len(derived) == len(current):
            return False
        current = derived


def close_under_mult(q, seed):
    seed = set(seed)
    degree = next(iter(q.cosets[0])).degree
    identity = q._coset_of[Perm.identity(degree)]
    els = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in seed:
                y = q.mult(x, g)
                if y not in els:
                    els.add(y)
                    new.append(y)
        frontier = new
    return els


# --- closedness by double loop --------------------------------------------------


def k_closed_bf(G: PermGroup, H: frozenset[Perm], kind: str, p: int | None):
    """Exhaustive closedness decision: loop over every a and every normal N.

    Returns (closed, failing_element, witnesses) with the first failing
    element in canonical order, or None.
    """
    normals = normal_subgroups_bf(G)
    qualifying = [N for N in normals if quotient_in_class_bf(G, N, kind, p)]
    witnesses = {}
    for a in sorted(G.elements):
        if a in H:
            continue
        witness = None
        for N in qualifying:
            HN = {h * n for h in H for n in N}
            if a not in HN:
                witness = N
                break
        if witness is None:
            return False, a, witnesses
        witnesses[a] = witness
    return True, None, witnesses


# --- amalgam word equality by exhaustive rewriting -------------------------------


class RewriteOracle:
    """Decides amalgam word equality by exhaustively applying the relations.

    Moves: drop identity syllables, merge adjacent same-copy syllables,
    transport a subgroup-valued syllable to another copy, and slide a
    subgroup element across a syllable boundary.  All moves are length
    non-increasing, so the reachable set from a word is finite; two words
    are equal exactly when their reachable sets share their minimum.
    """

    def __init__(self, scheme):
        self.scheme = scheme
        self._canon: dict[tuple, tuple] = {}

    def _key(self, word):
        return tuple((copy, elt.images) for copy, elt in word)

    def _unkey(self, key):
        return [(copy, Perm(images)) for copy, images in key]

    def _moves(self, key):
        scheme = self.scheme
        word = self._unkey(key)
        n = len(word)
        for i, (copy, elt) in enumerate(word):
            if elt.is_identity():
                yield self._key(word[:i] + word[i + 1 :])
            if elt in scheme.subgroups[copy].elements:
                for mu in range(scheme.copies):
                    if mu != copy:
                        moved = word[:i] + [(mu, scheme.transport(elt, copy, mu))] + word[i + 1 :]
                        yield self._key(moved)
            if i + 1 < n:
                copy2, elt2 = word[i + 1]
                if copy2 == copy:
                    merged = word[:i] + [(copy, elt * elt2)] + word[i + 2 :]
                    yield self._key(merged)
                else:
                    for h in scheme.subgroups[copy2].elements:
                        shifted = (
                            word[:i]
                            + [
                                (copy, elt * scheme.transport(h, copy2, copy)),
                                (copy2, h.inverse() * elt2),
                            ]
                            + word[i + 2 :]
                        )
                        yield self._key(shifted)

    def canonical(self, word):
        start = self._key(tuple(word))
        cached = self._canon.get(start)
        if cached is not None:
            return cached
        seen = {start}
        frontier = [start]
        adopted = None
        while frontier:
            new = []
            for key in frontier:
                for nxt in self._moves(key):
                    if nxt in seen:
                        continue
                    known = self._canon.get(nxt)
                    if known is not None and adopted is None:
                        adopted = known
                    seen.add(nxt)
                    new.append(nxt)
            frontier = new
        best = adopted if adopted is not None else min(seen, key=lambda k: (len(k), k))
        for key in seen:
            self._canon[key] = best
        return best

    def equal(self, w1, w2) -> bool:
        return self.canonical(w1) == self.canonical(w2)
