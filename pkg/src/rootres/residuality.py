"""Closedness decisions, separation in amalgamated powers, certificate checks.

The two central procedures are constructive: ``is_k_closed`` decides, with
witnesses, whether every element outside a subgroup H of a finite group A
can be pushed outside the image of H in some class quotient of A, and
``separate_in_power`` turns those witnesses into a certificate that a given
word of an amalgamated power of A over H survives the induced map onto the
power of a class quotient.  ``verify_certificate`` re-derives every claim of
a certificate from its serialized inputs, sharing only the primitive group
and word arithmetic with the producing code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .amalgam import (
    AmalgamScheme,
    as_word,
    check_family_agreement,
    power_quotient,
    power_scheme,
    reduce_word,
)
from .certificates import (
    CertificateFormatError,
    SeparationCertificate,
    SeparationFailure,
)
from .magnus import FreeWord, magnus_eval, _canonical_witness, _is_prime
from .perms import (
    Homomorphism,
    Perm,
    PermGroup,
    Subgroup,
    classify,
    intersect,
    quotient,
    same_group,
)
from .rootclass import (
    InconsistencyError,
    RootClassSpec,
    check_intersection_quotient,
    k_quotient_normals,
    member,
    quotient_in_class,
    residual_core,
)
from . import serialize

__all__ = [
    "ClosednessReport",
    "ResidualityCriterionReport",
    "SeparationFailure",
    "is_k_closed",
    "closedness_report_to_json",
    "separate_in_power",
    "derive_closedness_witness",
    "make_closedness_certificate",
    "check_residuality_criterion",
    "verify_certificate",
]


@dataclass(frozen=True)
class ClosednessReport:
    """Decision record for closedness of a subgroup in a class.

    When closed, ``witnesses`` maps every element outside the subgroup to
    the first normal subgroup (canonical order) realizing its exclusion;
    when not closed, ``failing_element`` is the first element (canonical
    order) for which the exhaustive search found no witness.
    """

    group: PermGroup
    subgroup: Subgroup
    klass: RootClassSpec
    closed: bool
    witnesses: Mapping[Perm, Subgroup]
    failing_element: Perm | None = None


def _product_set(H: Subgroup, N: Subgroup) -> frozenset[Perm]:
    return frozenset(h * n for h in H.elements for n in N.elements)


def is_k_closed(A: PermGroup, H: Subgroup, K: RootClassSpec) -> ClosednessReport:
    """Decide closedness of H in A for the class, with witnesses.

    For each a in A outside H, searches the normal subgroups of A in
    canonical order for N with A/N in the class and a outside HN.  The
    search is exhaustive, so a missing witness is a decision, not a timeout.
    """
    if H.parent.degree != A.degree or not H.elements <= A.elements:
        raise ValueError("subgroup does not live in the given group")
    candidates = [(N, _product_set(H, N)) for N in k_quotient_normals(A, K)]
    witnesses: dict[Perm, Subgroup] = {}
    for a in A.sorted_elements:
        if a in H.elements:
            continue
        for N, HN in candidates:
            if a not in HN:
                witnesses[a] = N
                break
        else:
            return ClosednessReport(A, H, K, False, witnesses, failing_element=a)
    return ClosednessReport(A, H, K, True, witnesses)


def closedness_report_to_json(report: ClosednessReport) -> dict:
    doc = {
        "group": serialize.group_to_json(report.group),
        "subgroup": serialize.subgroup_to_json(report.subgroup),
        "class": str(report.klass),
        "closed": report.closed,
        "witnesses": [
            {
                "element": serialize.perm_to_list(a),
                "kernel": serialize.subgroup_to_json(N),
                "quotient_order": report.group.order // N.order,
            }
            for a, N in sorted(report.witnesses.items())
        ],
    }
    if report.failing_element is not None:
        doc["failing_element"] = serialize.perm_to_list(report.failing_element)
    return doc


_POWER_NOTE = (
    "image nontriviality is certified by canonical-form length in the quotient "
    "power, whose residuality in the class follows from free-group separation "
    "and extension closure"
)


def _power_stage_certificate(
    scheme: AmalgamScheme,
    word,
    K: RootClassSpec,
    N: Subgroup,
    input_length: int,
) -> SeparationCertificate:
    A = scheme.factors[0]
    qscheme, word_map = power_quotient(scheme, N)
    image_nf = reduce_word(qscheme, word_map(word))
    if image_nf.is_identity():
        raise InconsistencyError("separation kernel collapsed the word")
    if input_length > 1 and image_nf.length != input_length:
        raise InconsistencyError("separation kernel changed the reduced length")
    return SeparationCertificate(
        kind="power_stage",
        klass=K,
        inputs={
            "scheme": serialize.scheme_to_json(scheme),
            "word": serialize.word_to_json(tuple(word)),
        },
        data={
            "kernel_generators": serialize.subgroup_to_json(N),
            "quotient_order": A.order // N.order,
            "image_normal_form": serialize.normal_form_to_json(image_nf),
        },
        claims={
            "input_length": input_length,
            "image_length": image_nf.length,
            "image_nontrivial": True,
            "kernel_normal": True,
            "quotient_in_class": True,
        },
        notes=(_POWER_NOTE,),
    )


def separate_in_power(scheme: AmalgamScheme, word, K: RootClassSpec) -> SeparationCertificate:
    """Certificate that a nontrivial word survives a quotient-power map.

    For reduced length s > 1 each tail syllable gets a closedness witness
    (first qualifying normal subgroup in canonical order); their
    intersection is the kernel, its class membership re-derived pairwise
    through the intersection-quotient check.  For s <= 1 the word lies in a
    factor and the kernel comes from the residual-core search instead.  The
    word is only required to have the witnesses it actually needs; global
    hypothesis failures surface as :class:`SeparationFailure` only when
    they obstruct this word.
    """
    if not scheme.is_power:
        raise ValueError("separation requires an amalgamated power scheme")
    A = scheme.factors[0]
    H = scheme.subgroups[0]
    word = as_word(word)
    nf = reduce_word(scheme, word)
    if nf.is_identity():
        raise ValueError("word reduces to the identity; nothing to separate")

    if nf.length > 1:
        candidates = [(N, _product_set(H, N)) for N in k_quotient_normals(A, K)]
        picked: list[Subgroup] = []
        for index, syl in enumerate(nf.tail):
            for N, HN in candidates:
                if syl.elt not in HN:
                    picked.append(N)
                    break
            else:
                raise SeparationFailure(
                    f"no closedness witness for tail syllable {index} "
                    f"(element {syl.elt}); the subgroup is not closed there",
                    reason="not_closed_at",
                    detail=syl,
                )
        distinct: list[Subgroup] = []
        for N in picked:
            if N not in distinct:
                distinct.append(N)
        kernel = distinct[0]
        for N in distinct[1:]:
            check_intersection_quotient(A, kernel, N, K)
            kernel = intersect(kernel, N)
        if not quotient_in_class(A, kernel, K):
            raise InconsistencyError("witness intersection left the class")
        return _power_stage_certificate(scheme, word, K, kernel, nf.length)

    element = nf.head if nf.length == 0 else nf.head * nf.tail[0].elt
    for N in k_quotient_normals(A, K):
        if element not in N.elements:
            return _power_stage_certificate(scheme, word, K, N, nf.length)
    raise SeparationFailure(
        f"element {element} lies in the residual core of the base group; "
        "the base group is not residual in the class at this word",
        reason="not_residual_at",
        detail=element,
    )


def derive_closedness_witness(
    A: PermGroup,
    H: Subgroup,
    a: Perm,
    homs: Sequence[Homomorphism],
    K: RootClassSpec,
) -> Subgroup:
    """Closedness witness at ``a`` from a family separating the copies.

    Given maps of A into a common class target that agree on H while giving
    ``a`` two different images, the kernel of the combined map (the
    intersection of the kernels) is normal with class quotient and keeps
    ``a`` outside its product with H.  This realizes the copy-swapping
    argument: needing only subgroup and product closure of the class.
    """
    if H.parent.degree != A.degree or not H.elements <= A.elements:
        raise ValueError("subgroup does not live in the given group")
    if a not in A.elements:
        raise ValueError("element is not in the group")
    if a in H.elements:
        raise ValueError("element lies in the subgroup; nothing to witness")
    homs = list(homs)
    if len(homs) < 2:
        raise ValueError("need at least two homomorphisms")
    target = homs[0].target
    for f in homs:
        if not same_group(f.source, A):
            raise ValueError("homomorphism source is not the given group")
        if not same_group(f.target, target):
            raise ValueError("homomorphism targets differ")
    if not member(target, K):
        raise ValueError("target group is outside the class")
    for h in H.sorted_elements:
        images = {f(h) for f in homs}
        if len(images) > 1:
            raise ValueError(f"family does not agree on the subgroup at {h}")
    if len({f(a) for f in homs}) == 1:
        raise ValueError("family does not separate the copies at the element")

    kernel_elements = frozenset(A.elements)
    for f in homs:
        kernel_elements &= f.kernel.elements
    N = Subgroup.from_elements(A, kernel_elements)
    if not quotient_in_class(A, N, K):
        raise InconsistencyError("combined kernel quotient left the class")
    if a in _product_set(H, N):
        raise InconsistencyError("derived witness failed to exclude the element")
    return N


def make_closedness_certificate(
    A: PermGroup, H: Subgroup, a: Perm, N: Subgroup, K: RootClassSpec
) -> SeparationCertificate:
    """Package a closedness witness as an independently verifiable record."""
    if a in H.elements:
        raise ValueError("element lies in the subgroup")
    if not quotient_in_class(A, N, K) or a in _product_set(H, N):
        raise ValueError("not a valid closedness witness for the element")
    return SeparationCertificate(
        kind="closedness_witness",
        klass=K,
        inputs={
            "group": serialize.group_to_json(A),
            "subgroup": serialize.subgroup_to_json(H),
            "element": serialize.perm_to_list(a),
        },
        data={
            "kernel_generators": serialize.subgroup_to_json(N),
            "quotient_order": A.order // N.order,
        },
        claims={
            "element_outside_subgroup": True,
            "element_outside_product": True,
            "kernel_normal": True,
            "quotient_in_class": True,
        },
    )


@dataclass(frozen=True)
class ResidualityCriterionReport:
    """Hypothesis record for the injective-family residuality criterion.

    A positive verdict reports that the amalgam is residual in the class
    because every factor is and some homomorphism into a class group is
    injective on the amalgamated subgroup; the conclusion is quoted from
    the criterion, only its hypotheses are computed here.
    """

    klass: RootClassSpec
    target_in_class: bool
    agrees_on_subgroup: bool
    injective_on_subgroup: bool
    factors_residual: tuple[bool, ...]
    agreement_witness: tuple[Perm, int, int] | None = None

    @property
    def satisfied(self) -> bool:
        return (
            self.target_in_class
            and self.agrees_on_subgroup
            and self.injective_on_subgroup
            and all(self.factors_residual)
        )

    def failures(self) -> list[str]:
        out = []
        if not self.target_in_class:
            out.append("target group is outside the class")
        if not self.agrees_on_subgroup:
            h, lam, mu = self.agreement_witness
            out.append(f"family disagrees on the amalgamated subgroup at {h} (copies {lam}, {mu})")
        if not self.injective_on_subgroup:
            out.append("family is not injective on the amalgamated subgroup")
        for lam, ok in enumerate(self.factors_residual):
            if not ok:
                out.append(f"factor {lam} is not residual in the class")
        return out


def check_residuality_criterion(
    scheme: AmalgamScheme, homs: Sequence[Homomorphism], K: RootClassSpec
) -> ResidualityCriterionReport:
    """Verify the hypotheses of the injective-family residuality criterion."""
    homs = list(homs)
    if len(homs) != scheme.copies:
        raise ValueError("need exactly one homomorphism per copy")
    target = homs[0].target
    for f in homs:
        if not same_group(f.target, target):
            raise ValueError("homomorphism family targets differ")
    for lam, f in enumerate(homs):
        if not same_group(f.source, scheme.factors[lam]):
            raise ValueError(f"homomorphism {lam} is not defined on factor {lam}")

    witness = check_family_agreement(scheme, homs)
    H0 = scheme.subgroups[0]
    images = {homs[0](h) for h in H0.elements}
    return ResidualityCriterionReport(
        klass=K,
        target_in_class=member(target, K),
        agrees_on_subgroup=witness is None,
        injective_on_subgroup=len(images) == H0.order,
        factors_residual=tuple(
            residual_core(G, K).is_residual for G in scheme.factors
        ),
        agreement_witness=witness,
    )


# --- certificate verification -------------------------------------------------
#
# Reconstruction errors (structurally bad payloads) raise
# CertificateFormatError; every value mismatch is a clean False.  Class
# membership is recomputed from classify alone, and no search code from the
# producing side is involved.


def _in_class(G: PermGroup, K: RootClassSpec) -> bool:
    c = classify(G)
    if K.kind == "finite":
        return True
    if K.kind == "p":
        return c.is_p_group(K.p)
    return c.is_solvable


def _reconstruct(fn, *args, what: str):
    try:
        return fn(*args)
    except (ValueError, KeyError, TypeError) as exc:
        raise CertificateFormatError(f"malformed {what}: {exc}") from None


def _is_normal_in(elements: frozenset[Perm], G: PermGroup) -> bool:
    for g in G.generators:
        gi = g.inverse()
        for n in elements:
            if gi * n * g not in elements:
                return False
    return True


def _verify_power_stage(cert: SeparationCertificate) -> bool:
    scheme_doc = cert.inputs.get("scheme")
    word_doc = cert.inputs.get("word")
    if not isinstance(scheme_doc, dict) or "power" not in scheme_doc:
        raise CertificateFormatError("power_stage certificate needs a power scheme")
    scheme, _ = _reconstruct(serialize.scheme_from_json, scheme_doc, what="scheme")
    word = _reconstruct(serialize.word_from_json, word_doc, scheme, what="word")
    A = scheme.factors[0]
    H = scheme.subgroups[0]

    gens_doc = cert.data.get("kernel_generators")
    if not isinstance(gens_doc, list):
        raise CertificateFormatError("missing kernel_generators")
    kernel_gens = [
        _reconstruct(serialize.perm_from_list, doc, A.degree, what="kernel generator")
        for doc in gens_doc
    ]
    if any(g not in A.elements for g in kernel_gens):
        return False
    N = Subgroup(A, kernel_gens)
    if not _is_normal_in(N.elements, A):
        return False

    Q, proj = quotient(A, N)
    qH = Subgroup.from_elements(Q, frozenset(proj(h) for h in H.elements))
    qscheme = power_scheme(Q, qH, scheme.copies)
    image_nf = reduce_word(qscheme, [(s.copy, proj(s.elt)) for s in word])
    input_nf = reduce_word(scheme, word)

    if cert.data.get("quotient_order") != Q.order:
        return False
    if cert.data.get("image_normal_form") != serialize.normal_form_to_json(image_nf):
        return False
    expected_claims = {
        "input_length": input_nf.length,
        "image_length": image_nf.length,
        "image_nontrivial": not image_nf.is_identity(),
        "kernel_normal": True,
        "quotient_in_class": _in_class(Q, cert.klass),
    }
    if dict(cert.claims) != expected_claims:
        return False
    if input_nf.is_identity() or image_nf.is_identity():
        return False
    if input_nf.length > 1 and image_nf.length != input_nf.length:
        return False
    return True


def _verify_free_word(cert: SeparationCertificate) -> bool:
    word_doc = cert.inputs.get("word")
    if not isinstance(word_doc, str):
        raise CertificateFormatError("free_word certificate needs a word string")
    word = _reconstruct(FreeWord.parse, word_doc, what="free word")
    data = cert.data
    rank, d, modulus = data.get("rank"), data.get("d"), data.get("modulus")
    mono_doc, coeff = data.get("monomial"), data.get("coefficient")
    if not all(isinstance(v, int) for v in (rank, d, modulus, coeff)):
        raise CertificateFormatError("free_word data fields must be integers")
    if not (isinstance(mono_doc, list) and all(isinstance(v, int) for v in mono_doc)):
        raise CertificateFormatError("malformed witness monomial")
    if rank < 1 or d < 1 or modulus < 0:
        return False
    if modulus and not _is_prime(modulus):
        return False
    K = cert.klass
    if K.kind == "p" and modulus != K.p:
        return False
    if K.kind == "finite" and not _is_prime(modulus):
        return False
    if K.kind == "solvable" and modulus != 0 and not _is_prime(modulus):
        return False

    reduced = word.free_reduce()
    if not reduced.letters or reduced.max_index > rank:
        return False
    for lower in range(1, d):
        if not magnus_eval(reduced, rank, lower, modulus).is_one():
            return False
    image = magnus_eval(reduced, rank, d, modulus)
    if image.is_one():
        return False
    witness_mono, witness_coeff = _canonical_witness(image)
    if tuple(mono_doc) != witness_mono or coeff != witness_coeff or coeff == 0:
        return False
    expected_claims = {
        "freely_nontrivial": True,
        "separated_at_degree": d,
        "trivial_below_degree": True,
        "canonical_witness": True,
    }
    return dict(cert.claims) == expected_claims


def _verify_closedness(cert: SeparationCertificate) -> bool:
    group_doc = cert.inputs.get("group")
    A, _ = _reconstruct(serialize.group_from_json, group_doc, what="group")
    H = _reconstruct(
        serialize.subgroup_from_json, cert.inputs.get("subgroup"), A, what="subgroup"
    )
    a = _reconstruct(
        serialize.perm_from_list, cert.inputs.get("element"), A.degree, what="element"
    )
    gens_doc = cert.data.get("kernel_generators")
    if not isinstance(gens_doc, list):
        raise CertificateFormatError("missing kernel_generators")
    kernel_gens = [
        _reconstruct(serialize.perm_from_list, doc, A.degree, what="kernel generator")
        for doc in gens_doc
    ]
    if a not in A.elements or any(g not in A.elements for g in kernel_gens):
        return False
    N = Subgroup(A, kernel_gens)
    if not _is_normal_in(N.elements, A):
        return False
    Q, _ = quotient(A, N)
    if cert.data.get("quotient_order") != Q.order:
        return False
    expected_claims = {
        "element_outside_subgroup": a not in H.elements,
        "element_outside_product": a not in _product_set(H, N),
        "kernel_normal": True,
        "quotient_in_class": _in_class(Q, cert.klass),
    }
    if dict(cert.claims) != expected_claims:
        return False
    return all(expected_claims.values())


def verify_certificate(cert: SeparationCertificate) -> bool:
    """Re-derive every claim of a certificate from its serialized inputs.

    Returns False when any recomputed value disagrees with the stated one;
    raises :class:`CertificateFormatError` only for structurally malformed
    payloads.
    """
    if cert.kind == "power_stage":
        return _verify_power_stage(cert)
    if cert.kind == "free_word":
        return _verify_free_word(cert)
    if cert.kind == "closedness_witness":
        return _verify_closedness(cert)
    raise CertificateFormatError(f"unknown certificate kind {cert.kind!r}")
