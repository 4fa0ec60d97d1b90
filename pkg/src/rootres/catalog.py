"""Built-in catalog of small groups for tests, demos and CLI references.

Every entry carries named generators and a few named subgroups so that
command-line references like ``--group S3 --subgroup A3`` resolve without
external files.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .perms import Perm, PermGroup, Subgroup, direct_product, generate

__all__ = ["CatalogEntry", "catalog", "entry", "group", "subgroup", "pairwise_products"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    group: PermGroup
    gen_names: tuple[str, ...]
    subgroups: dict[str, Subgroup]

    @property
    def named_generators(self) -> dict[str, Perm]:
        return dict(zip(self.gen_names, self.group.generators))


def _cycle(n: int) -> Perm:
    return Perm.from_cycles(n, [tuple(range(1, n + 1))])


def _entry(name, group, gen_names, subgroup_gens) -> CatalogEntry:
    subs = {"trivial": Subgroup(group, ())}
    for sub_name, gens in subgroup_gens.items():
        subs[sub_name] = Subgroup(group, gens)
    return CatalogEntry(name, group, tuple(gen_names), subs)


@lru_cache(maxsize=1)
def catalog() -> dict[str, CatalogEntry]:
    entries: list[CatalogEntry] = []

    for n in range(1, 13):
        if n == 1:
            G = generate(1, [])
            entries.append(_entry("C1", G, (), {}))
            continue
        r = _cycle(n)
        G = generate(n, [r])
        subs = {}
        for d in range(2, n):
            if n % d == 0:
                subs[f"C{d}"] = [r_power(r, n // d)]
        entries.append(_entry(f"C{n}", G, ("r",), subs))

    a, b = Perm.from_cycles(4, [(1, 2)]), Perm.from_cycles(4, [(3, 4)])
    G = generate(4, [a, b])
    entries.append(_entry("C2xC2", G, ("a", "b"), {"C2a": [a], "C2b": [b], "C2d": [a * b]}))

    a = Perm.from_cycles(6, [(1, 2)])
    b = Perm.from_cycles(6, [(3, 4)])
    c = Perm.from_cycles(6, [(5, 6)])
    G = generate(6, [a, b, c])
    entries.append(
        _entry(
            "C2xC2xC2",
            G,
            ("a", "b", "c"),
            {"C2a": [a], "C2b": [b], "C2c": [c], "V4ab": [a, b]},
        )
    )

    r = Perm.from_cycles(6, [(1, 2, 3, 4)])
    s = Perm.from_cycles(6, [(5, 6)])
    G = generate(6, [r, s])
    entries.append(
        _entry("C4xC2", G, ("r", "s"), {"C4": [r], "C2": [s], "C2r": [r * r]})
    )

    a = Perm.from_cycles(3, [(1, 2, 3)])
    b = Perm.from_cycles(3, [(1, 2)])
    G = generate(3, [a, b])
    entries.append(_entry("S3", G, ("a", "b"), {"A3": [a], "C2": [b]}))

    a = Perm.from_cycles(4, [(1, 2, 3, 4)])
    b = Perm.from_cycles(4, [(1, 2)])
    G = generate(4, [a, b])
    entries.append(
        _entry(
            "S4",
            G,
            ("a", "b"),
            {
                "A4": [Perm.from_cycles(4, [(1, 2, 3)]), Perm.from_cycles(4, [(1, 2), (3, 4)])],
                "V4": [Perm.from_cycles(4, [(1, 2), (3, 4)]), Perm.from_cycles(4, [(1, 3), (2, 4)])],
                "S3": [Perm.from_cycles(4, [(1, 2, 3)]), Perm.from_cycles(4, [(1, 2)])],
                "C4": [a],
                "C2": [b],
            },
        )
    )

    a = Perm.from_cycles(4, [(1, 2, 3)])
    b = Perm.from_cycles(4, [(1, 2), (3, 4)])
    G = generate(4, [a, b])
    entries.append(
        _entry(
            "A4",
            G,
            ("a", "b"),
            {
                "V4": [b, Perm.from_cycles(4, [(1, 3), (2, 4)])],
                "C3": [a],
                "C2": [b],
            },
        )
    )

    r = Perm.from_cycles(4, [(1, 2, 3, 4)])
    f = Perm.from_cycles(4, [(1, 3)])
    G = generate(4, [r, f])
    entries.append(
        _entry(
            "D4",
            G,
            ("r", "f"),
            {
                "center": [r * r],
                "C4": [r],
                "V4a": [r * r, f],
                "V4b": [r * r, r * f],
                "C2": [f],
            },
        )
    )

    r = Perm.from_cycles(6, [(1, 2, 3, 4, 5, 6)])
    f = Perm.from_cycles(6, [(2, 6), (3, 5)])
    G = generate(6, [r, f])
    entries.append(
        _entry(
            "D6",
            G,
            ("r", "f"),
            {
                "center": [r * r * r],
                "C6": [r],
                "C3": [r * r],
                "D3": [r * r, f],
                "C2": [f],
            },
        )
    )

    # Quaternion group in its right-regular representation on
    # (1, -1, i, -i, j, -j, k, -k).
    qi = Perm((3, 4, 2, 1, 8, 7, 5, 6))
    qj = Perm((5, 6, 7, 8, 2, 1, 4, 3))
    G = generate(8, [qi, qj])
    entries.append(
        _entry(
            "Q8",
            G,
            ("i", "j"),
            {
                "center": [qi * qi],
                "C4i": [qi],
                "C4j": [qj],
                "C4k": [qi * qj],
            },
        )
    )

    return {e.name: e for e in entries}


def r_power(r: Perm, k: int) -> Perm:
    acc = Perm.identity(r.degree)
    for _ in range(k):
        acc = acc * r
    return acc


def entry(name: str) -> CatalogEntry:
    try:
        return catalog()[name]
    except KeyError:
        raise ValueError(f"unknown catalog group {name!r}") from None


def group(name: str) -> PermGroup:
    return entry(name).group


def subgroup(group_name: str, sub_name: str) -> Subgroup:
    e = entry(group_name)
    try:
        return e.subgroups[sub_name]
    except KeyError:
        raise ValueError(f"group {group_name!r} has no catalog subgroup {sub_name!r}") from None


@lru_cache(maxsize=1)
def pairwise_products() -> tuple[tuple[PermGroup, PermGroup, PermGroup], ...]:
    """Unordered pairwise direct products of catalog groups (cached)."""
    groups = [e.group for e in sorted(catalog().values(), key=lambda e: (e.group.order, e.name))]
    out = []
    for i, a in enumerate(groups):
        for b in groups[i:]:
            out.append((a, b, direct_product(a, b)))
    return tuple(out)
