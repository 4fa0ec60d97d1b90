"""File formats: groups, subgroups, words, schemes, reports (UTF-8 JSON).

Group files look like ``{"degree": n, "generators": {"name": [i1..in]}}``;
subgroup generators are given as explicit image arrays or as words over the
named generators (``"a b^-1"``); scheme files list factors, subgroup
generators and iso tables, with ``"power": k`` as a shorthand for k
identical copies with identity identifications.  Parsing is strict and
raises ValueError with a reason; emission is canonical and deterministic.
"""

from __future__ import annotations

import json
import re
from typing import Any, Mapping, Sequence

from .amalgam import AmalgamScheme, NormalForm, Syllable, Word, build_scheme, power_scheme
from .perms import Perm, PermGroup, Subgroup, canonical_generators, generate
from .rootclass import RootClassSpec

__all__ = [
    "perm_to_list",
    "perm_from_list",
    "parse_perm_text",
    "parse_perm_list_text",
    "group_to_json",
    "group_from_json",
    "subgroup_to_json",
    "subgroup_from_json",
    "eval_generator_word",
    "word_to_json",
    "word_from_json",
    "scheme_to_json",
    "scheme_from_json",
    "normal_form_to_json",
    "normal_form_from_json",
    "dumps",
]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def perm_to_list(p: Perm) -> list[int]:
    return list(p.images)


def perm_from_list(data: Sequence[int], degree: int | None = None) -> Perm:
    if not isinstance(data, (list, tuple)) or not all(isinstance(v, int) for v in data):
        raise ValueError(f"a permutation must be a list of integers, got {data!r}")
    p = Perm(tuple(data))
    if degree is not None and p.degree != degree:
        raise ValueError(f"permutation degree {p.degree} != expected {degree}")
    return p


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_perm_text(text: str, degree: int) -> Perm:
    """Parse cycle notation like ``(1 2)(3 4)``; ``()`` is the identity."""
    text = text.strip()
    if not text or text == "()" or text == "e":
        return Perm.identity(degree)
    consumed = "".join(_CYCLE.findall(text))
    stripped = re.sub(r"[\s()0-9,]", "", text)
    if stripped:
        raise ValueError(f"bad cycle notation {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        pts = [int(tok) for tok in re.split(r"[,\s]+", body.strip()) if tok]
        if pts:
            cycles.append(pts)
    if not cycles and consumed.strip():
        raise ValueError(f"bad cycle notation {text!r}")
    return Perm.from_cycles(degree, cycles)


def parse_perm_list_text(text: str, degree: int) -> list[Perm]:
    """Parse a comma-separated list of cycle-notation permutations."""
    parts = re.split(r"\)\s*,\s*\(", text.strip())
    if len(parts) > 1:
        parts = [
            p if p.startswith("(") else "(" + p for p in parts
        ]
        parts = [p if p.endswith(")") else p + ")" for p in parts]
    return [parse_perm_text(p, degree) for p in parts]


def group_to_json(group: PermGroup, names: Sequence[str] | None = None) -> dict:
    if names is None:
        names = [f"g{i}" for i in range(len(group.generators))]
    if len(names) != len(group.generators):
        raise ValueError("need one name per generator")
    return {
        "degree": group.degree,
        "generators": {name: perm_to_list(g) for name, g in zip(names, group.generators)},
    }


def group_from_json(data: Any, cap: int | None = None) -> tuple[PermGroup, dict[str, Perm]]:
    """Parse a group file; returns the group and its named generator table.

    Generators are taken in sorted name order, so parsing is deterministic.
    """
    if not isinstance(data, dict):
        raise ValueError("group document must be an object")
    degree = data.get("degree")
    if not isinstance(degree, int) or degree < 1:
        raise ValueError("group document needs a positive integer 'degree'")
    gens_doc = data.get("generators", {})
    if not isinstance(gens_doc, dict):
        raise ValueError("'generators' must map names to image arrays")
    names = {}
    gens = []
    for name in sorted(gens_doc):
        p = perm_from_list(gens_doc[name], degree)
        names[name] = p
        gens.append(p)
    kwargs = {} if cap is None else {"cap": cap}
    return generate(degree, gens, **kwargs), names


_GENWORD = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def eval_generator_word(text: str, names: Mapping[str, Perm], degree: int) -> Perm:
    """Evaluate a word like ``a b^-1 c^2`` over named generators."""
    acc = Perm.identity(degree)
    for token in text.split():
        m = _GENWORD.match(token)
        if not m:
            raise ValueError(f"bad generator-word token {token!r}")
        name = m.group(1)
        if name not in names:
            raise ValueError(f"unknown generator {name!r}")
        power = int(m.group(2)) if m.group(2) else 1
        base = names[name] if power > 0 else names[name].inverse()
        for _ in range(abs(power)):
            acc = acc * base
    return acc


def _element_from_doc(doc: Any, names: Mapping[str, Perm], degree: int) -> Perm:
    if isinstance(doc, str):
        return eval_generator_word(doc, names, degree)
    return perm_from_list(doc, degree)


def subgroup_to_json(sub: Subgroup) -> list[list[int]]:
    """Canonical generator arrays of a subgroup (deterministic)."""
    gens = canonical_generators(sub.parent.degree, sub.elements, sub.parent.cap)
    return [perm_to_list(g) for g in gens]


def subgroup_from_json(
    data: Any, parent: PermGroup, names: Mapping[str, Perm] | None = None
) -> Subgroup:
    if not isinstance(data, list):
        raise ValueError("subgroup generators must be a list")
    gens = [_element_from_doc(doc, names or {}, parent.degree) for doc in data]
    for g in gens:
        if g not in parent.elements:
            raise ValueError(f"subgroup generator {g} outside the parent group")
    return Subgroup(parent, gens)


def word_to_json(word: Word) -> list[dict]:
    return [{"copy": s.copy, "elt": perm_to_list(s.elt)} for s in word]


def word_from_json(
    data: Any,
    scheme: AmalgamScheme,
    names_per_factor: Sequence[Mapping[str, Perm]] | None = None,
) -> Word:
    """Parse a word file: records {"copy": k, "elt": array-or-generator-word}."""
    if not isinstance(data, list):
        raise ValueError("a word document must be a list of syllable records")
    syllables = []
    for i, rec in enumerate(data):
        if not isinstance(rec, dict) or "copy" not in rec or "elt" not in rec:
            raise ValueError(f"syllable {i} must be an object with 'copy' and 'elt'")
        copy = rec["copy"]
        if not isinstance(copy, int) or not 0 <= copy < scheme.copies:
            raise ValueError(f"syllable {i} has bad copy index {copy!r}")
        names = (names_per_factor[copy] if names_per_factor else {}) or {}
        elt = _element_from_doc(rec["elt"], names, scheme.factors[copy].degree)
        s = Syllable(copy, elt)
        scheme.check_syllable(s)
        syllables.append(s)
    return tuple(syllables)


def scheme_to_json(scheme: AmalgamScheme, names: Sequence[str] | None = None) -> dict:
    """Serialize a scheme; powers use the compact ``power`` form."""
    if scheme.is_power:
        return {
            "factor": group_to_json(scheme.factors[0], names),
            "subgroup": subgroup_to_json(scheme.subgroups[0]),
            "power": scheme.copies,
        }
    doc = {
        "factors": [group_to_json(G) for G in scheme.factors],
        "subgroups": [subgroup_to_json(H) for H in scheme.subgroups],
        "isos": {},
    }
    for lam in range(scheme.copies):
        for mu in range(scheme.copies):
            if lam == mu:
                continue
            table = [
                [perm_to_list(h), perm_to_list(scheme.transport(h, lam, mu))]
                for h in scheme.subgroups[lam].sorted_elements
            ]
            doc["isos"][f"{lam},{mu}"] = table
    return doc


def scheme_from_json(
    data: Any, cap: int | None = None
) -> tuple[AmalgamScheme, list[dict[str, Perm]]]:
    """Parse a scheme file; returns the scheme and per-factor name tables."""
    if not isinstance(data, dict):
        raise ValueError("scheme document must be an object")
    if "power" in data:
        copies = data["power"]
        if not isinstance(copies, int) or copies < 2:
            raise ValueError("'power' must be an integer >= 2")
        base, names = group_from_json(data.get("factor"), cap)
        sub = subgroup_from_json(data.get("subgroup", []), base, names)
        return power_scheme(base, sub, copies), [names] * copies

    factors_doc = data.get("factors")
    subgroups_doc = data.get("subgroups")
    if not isinstance(factors_doc, list) or not isinstance(subgroups_doc, list):
        raise ValueError("scheme document needs 'factors' and 'subgroups' lists")
    if len(factors_doc) != len(subgroups_doc):
        raise ValueError("need exactly one subgroup per factor")
    factors = []
    name_tables = []
    for doc in factors_doc:
        G, names = group_from_json(doc, cap)
        factors.append(G)
        name_tables.append(names)
    subgroups = [
        subgroup_from_json(doc, G, names)
        for doc, G, names in zip(subgroups_doc, factors, name_tables)
    ]
    isos = {}
    isos_doc = data.get("isos", {})
    if not isinstance(isos_doc, dict):
        raise ValueError("'isos' must be an object keyed by copy pairs")
    for key, table in isos_doc.items():
        m = re.match(r"^(\d+)\s*,\s*(\d+)$", key)
        if not m:
            raise ValueError(f"bad iso key {key!r}; expected 'lam,mu'")
        lam, mu = int(m.group(1)), int(m.group(2))
        if not (0 <= lam < len(factors) and 0 <= mu < len(factors)):
            raise ValueError(f"iso key {key!r} out of range")
        mapping = {}
        if isinstance(table, dict):
            for src_word, dst_word in table.items():
                src = eval_generator_word(src_word, name_tables[lam], factors[lam].degree)
                dst = _element_from_doc(dst_word, name_tables[mu], factors[mu].degree)
                mapping[src] = dst
            mapping = _extend_iso(mapping, subgroups[lam], subgroups[mu])
        elif isinstance(table, list):
            for pair in table:
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise ValueError(f"iso table entries for {key!r} must be [src, dst] pairs")
                src = _element_from_doc(pair[0], name_tables[lam], factors[lam].degree)
                dst = _element_from_doc(pair[1], name_tables[mu], factors[mu].degree)
                mapping[src] = dst
        else:
            raise ValueError(f"bad iso table for {key!r}")
        isos[(lam, mu)] = mapping
    return build_scheme(factors, subgroups, isos), name_tables


def _extend_iso(gen_map: dict[Perm, Perm], src: Subgroup, dst: Subgroup) -> dict[Perm, Perm]:
    """Extend a generator-level map multiplicatively over the source subgroup."""
    for g in gen_map:
        if g not in src.elements:
            raise ValueError(f"iso source {g} outside the amalgamated subgroup")
    full = {src.parent.identity: dst.parent.identity}
    frontier = [src.parent.identity]
    while frontier:
        new = []
        for a in frontier:
            for g, h in gen_map.items():
                a2 = a * g
                b2 = full[a] * h
                prev = full.get(a2)
                if prev is None:
                    full[a2] = b2
                    new.append(a2)
                elif prev != b2:
                    raise ValueError(f"iso table is not a homomorphism at {a2}")
        frontier = new
    if len(full) != src.order:
        raise ValueError("iso table generators do not generate the subgroup")
    return full


def normal_form_to_json(nf: NormalForm) -> dict:
    return {
        "head": perm_to_list(nf.head),
        "tail": word_to_json(nf.tail),
        "length": nf.length,
    }


def normal_form_from_json(data: Any, scheme: AmalgamScheme) -> NormalForm:
    if not isinstance(data, dict) or "head" not in data or "tail" not in data:
        raise ValueError("normal form document needs 'head' and 'tail'")
    head = perm_from_list(data["head"], scheme.factors[0].degree)
    tail = word_from_json(data["tail"], scheme)
    return NormalForm(head, tuple(tail))
