"""Batch command-line front door.

Subcommands: closed, separate, separate-free, verify, axioms, normal-form,
core.  Exit codes are uniform: 0 for a positive verdict, 1 for a negative
verdict (with a report on stdout), 2 for usage or input errors (message on
stderr, never a stack dump).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, serialize
from .amalgam import reduce_word
from .certificates import CertificateFormatError, SeparationCertificate, SeparationFailure
from .magnus import FreeWord, separate_free_word
from .perms import CapExceeded, DEFAULT_ORDER_CAP, PermGroup, Subgroup
from .rootclass import (
    InconsistencyError,
    RootClassSpec,
    axiom_sweep,
    finite_p,
    residual_core,
)
from .residuality import (
    closedness_report_to_json,
    is_k_closed,
    separate_in_power,
    verify_certificate,
)

__all__ = ["main"]


def _load_json(text_or_path: str):
    text = text_or_path
    if not text.lstrip().startswith(("{", "[")):
        text = Path(text_or_path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in {text_or_path!r}: line {exc.lineno} column {exc.colno}") from None


def _load_group(ref: str, cap: int):
    """Resolve a group reference: catalog name or file path / inline JSON."""
    if ref in catalog.catalog():
        e = catalog.entry(ref)
        return e.group, e.named_generators, e
    G, names = serialize.group_from_json(_load_json(ref), cap)
    return G, names, None


def _load_subgroup(ref: str, G: PermGroup, names, entry) -> Subgroup:
    """Resolve a subgroup: catalog name, cycle-notation list, or JSON list."""
    if entry is not None and ref in entry.subgroups:
        return entry.subgroups[ref]
    if ref.lstrip().startswith("("):
        perms = serialize.parse_perm_list_text(ref, G.degree)
        return serialize.subgroup_from_json(
            [serialize.perm_to_list(p) for p in perms], G, names
        )
    return serialize.subgroup_from_json(_load_json(ref), G, names)


def _load_scheme(ref: str, cap: int):
    return serialize.scheme_from_json(_load_json(ref), cap)


def _emit(doc) -> None:
    sys.stdout.write(serialize.dumps(doc))


def _write_certificate(cert: SeparationCertificate, out: str | None) -> None:
    text = cert.dumps()
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_closed(args) -> int:
    G, names, entry = _load_group(args.group, args.cap)
    H = _load_subgroup(args.subgroup, G, names, entry)
    K = RootClassSpec.parse(args.klass)
    report = is_k_closed(G, H, K)
    doc = closedness_report_to_json(report)
    if args.out:
        Path(args.out).write_text(serialize.dumps(doc), encoding="utf-8")
    _emit(doc)
    return 0 if report.closed else 1


def _cmd_separate(args) -> int:
    scheme, name_tables = _load_scheme(args.scheme, args.cap)
    word = serialize.word_from_json(_load_json(args.word), scheme, name_tables)
    K = RootClassSpec.parse(args.klass)
    cert = separate_in_power(scheme, word, K)
    _write_certificate(cert, args.out)
    return 0


def _cmd_separate_free(args) -> int:
    word = FreeWord.parse(args.word)
    K = RootClassSpec.parse(args.klass)
    if K.kind == "p":
        modulus = K.p
    elif K.kind == "finite":
        modulus = 2
    else:
        modulus = 0
    cert = separate_free_word(word, modulus, d_max=args.max_degree, klass=K)
    _write_certificate(cert, args.out)
    return 0


def _cmd_verify(args) -> int:
    text = Path(args.certificate).read_text(encoding="utf-8")
    cert = SeparationCertificate.loads(text)
    ok = verify_certificate(cert)
    print("certificate OK" if ok else "certificate REJECTED")
    return 0 if ok else 1


def _cmd_axioms(args) -> int:
    K = RootClassSpec.parse(args.klass)
    if args.max_order > args.cap:
        raise ValueError("--max-order exceeds the group-order cap")
    groups = [
        e.group
        for e in sorted(catalog.catalog().values(), key=lambda e: (e.group.order, e.name))
    ]
    report = axiom_sweep(groups, K, max_order=args.max_order, products=catalog.pairwise_products())
    print(f"class {K}: subgroup closure checks: {report.subgroup_checks}")
    print(f"class {K}: product closure checks: {report.product_checks}")
    print(f"class {K}: root-property witness checks: {report.witness_checks}")
    print(f"class {K}: intersection quotient checks: {report.intersection_checks}")
    print(f"class {K}: extension closure checks: {report.extension_checks}")
    for failure in report.failures:
        print(f"FALSIFIED: {failure}")
    print("all checks passed" if report.ok else f"{len(report.failures)} checks FAILED")
    return 0 if report.ok else 1


def _cmd_normal_form(args) -> int:
    scheme, name_tables = _load_scheme(args.scheme, args.cap)
    word = serialize.word_from_json(_load_json(args.word), scheme, name_tables)
    _emit(serialize.normal_form_to_json(reduce_word(scheme, word)))
    return 0


def _cmd_core(args) -> int:
    G, _, _ = _load_group(args.group, args.cap)
    K = RootClassSpec.parse(args.klass)
    core = residual_core(G, K)
    _emit(
        {
            "group": serialize.group_to_json(G),
            "class": str(K),
            "core": serialize.subgroup_to_json(core.core),
            "core_order": core.core.order,
            "residual": core.is_residual,
        }
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootres",
        description="Residuality toolkit for finite groups and amalgamated powers",
    )
    parser.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_ORDER_CAP,
        help="group-order cap for closures (default %(default)s)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closed", help="decide closedness of a subgroup in a class")
    p.add_argument("--group", required=True, help="catalog name, file path, or inline JSON")
    p.add_argument("--subgroup", required=True, help="catalog subgroup, '(1 2),(3 4)', or JSON")
    p.add_argument("--class", dest="klass", required=True, help="finite | p:<prime> | solvable")
    p.add_argument("--out", help="also write the report to this file")
    p.set_defaults(func=_cmd_closed)

    p = sub.add_parser("separate", help="certificate for a word of an amalgamated power")
    p.add_argument("--scheme", required=True, help="scheme file path or inline JSON")
    p.add_argument("--word", required=True, help="word file path or inline JSON")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--out", help="certificate output path (default stdout)")
    p.set_defaults(func=_cmd_separate)

    p = sub.add_parser("separate-free", help="certificate for a free-group word")
    p.add_argument("--word", required=True, help='word like "x1 x2^-1 x1^-1 x2"')
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--out", help="certificate output path (default stdout)")
    p.set_defaults(func=_cmd_separate_free)

    p = sub.add_parser("verify", help="independently verify a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("axioms", help="sweep the axiom checks over the catalog")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--max-order", type=int, default=48)
    p.set_defaults(func=_cmd_axioms)

    p = sub.add_parser("normal-form", help="reduce a word to its canonical form")
    p.add_argument("--scheme", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=_cmd_normal_form)

    p = sub.add_parser("core", help="print the residual core of a group")
    p.add_argument("--group", required=True)
    p.add_argument("--class", dest="klass", required=True)
    p.set_defaults(func=_cmd_core)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SeparationFailure as exc:
        _emit({"verdict": "negative", "reason": exc.reason, "message": str(exc)})
        return 1
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 1
    except CertificateFormatError as exc:
        print(f"error: malformed certificate: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
