"""Self-contained separation certificates with canonical JSON serialization.

A certificate records the inputs, the kernel/witness data, and the claims
an independent verifier re-derives from scratch.  Serialization is
canonical (sorted keys, fixed layout), so identical inputs always produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .rootclass import RootClassSpec

__all__ = [
    "FORMAT_VERSION",
    "CERTIFICATE_KINDS",
    "CertificateFormatError",
    "SeparationFailure",
    "SeparationCertificate",
    "canonical_json",
]

FORMAT_VERSION = 1
CERTIFICATE_KINDS = ("power_stage", "free_word", "closedness_witness")


class CertificateFormatError(ValueError):
    """The payload is not a well-formed certificate (distinct from failing checks)."""


class SeparationFailure(RuntimeError):
    """A separation search ended without the required witnesses.

    Carries the reason and, when applicable, the obstructing element or
    syllable; raising it is a negative verdict, not an input error.
    """

    def __init__(self, message: str, *, reason: str = "", detail: object = None) -> None:
        super().__init__(message)
        self.reason = reason
        self.detail = detail


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CertificateFormatError(message)


@dataclass(frozen=True)
class SeparationCertificate:
    """A verifiable record that a word survives a homomorphism of the stated kind."""

    kind: str
    klass: RootClassSpec
    inputs: Mapping[str, Any]
    data: Mapping[str, Any]
    claims: Mapping[str, Any]
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in CERTIFICATE_KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def payload(self) -> dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "kind": self.kind,
            "class": str(self.klass),
            "inputs": self.inputs,
            "data": self.data,
            "claims": self.claims,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return canonical_json(self.payload())

    @classmethod
    def from_payload(cls, payload: Any) -> "SeparationCertificate":
        _require(isinstance(payload, dict), "certificate payload must be an object")
        _require(payload.get("format_version") == FORMAT_VERSION, "unsupported format_version")
        kind = payload.get("kind")
        _require(kind in CERTIFICATE_KINDS, f"unknown certificate kind {kind!r}")
        try:
            klass = RootClassSpec.parse(payload.get("class", ""))
        except ValueError as exc:
            raise CertificateFormatError(str(exc)) from None
        for key in ("inputs", "data", "claims"):
            _require(isinstance(payload.get(key), dict), f"missing or malformed {key!r} section")
        notes = payload.get("notes", [])
        _require(isinstance(notes, list) and all(isinstance(n, str) for n in notes), "malformed notes")
        return cls(
            kind=kind,
            klass=klass,
            inputs=payload["inputs"],
            data=payload["data"],
            claims=payload["claims"],
            notes=tuple(notes),
        )

    @classmethod
    def loads(cls, text: str) -> "SeparationCertificate":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"not valid JSON: {exc}") from None
        return cls.from_payload(payload)
