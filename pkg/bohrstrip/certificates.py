""" Machine-checkable certificates.

Every check is registered once with the function that computes its rows from a series and the certificate
inputs, and with the rule that turns rows and a tolerance into a verdict. Pipelines issue certificates through
the registry and ``verify`` recomputes them through the same entry.
"""
import logging
import math
from enum import Enum
from typing import Any, Callable, Dict, List, NamedTuple

try:
    from pydantic.v1 import BaseModel, Field
except ImportError:
    from pydantic import BaseModel, Field

from bohrstrip import __version__
from bohrstrip.errors import InvalidInputError, ParseError
from bohrstrip.util import canonical_json, digest

log = logging.getLogger(__name__)

VERIFY_RTOL = 1e-9
VERIFY_ATOL = 1e-12

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


class CertificateKind(str, Enum):
    growth = "growth"
    isometry_l1 = "isometry_l1"
    isometry_l2 = "isometry_l2"
    orthonormality = "orthonormality"
    norm_bound = "norm_bound"
    disjointness = "disjointness"


class Provenance(BaseModel):
    version: str = __version__
    command: str = ""


class Certificate(BaseModel):
    kind: CertificateKind
    check: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    inputs_digest: str
    columns: List[str]
    rows: List[List[Any]]
    verdict: str
    tolerance: float
    seed: int
    provenance: Provenance = Field(default_factory=Provenance)
    notes: Dict[str, Any] = Field(default_factory=dict)

    class Config:
        use_enum_values = True

    @property
    def passed(self):
        return self.verdict == PASS

    def to_json(self):
        return canonical_json(self.dict(), indent=2) + "\n"


class Check(NamedTuple):
    kind: CertificateKind
    columns: List[str]
    rule: Callable
    recompute: Callable
    tolerance: float


CHECKS: Dict[str, Check] = {}


def register_check(name, kind, columns, rule, tolerance=1e-9):
    """Decorate ``recompute(series, inputs, seed) -> rows`` as the row source of check ``name``."""

    def decorator(recompute):
        CHECKS[name] = Check(CertificateKind(kind), list(columns), rule, recompute, tolerance)
        return recompute

    return decorator


def get_check(name):
    _load_checks()
    try:
        return CHECKS[name]
    except KeyError:
        raise InvalidInputError(f"Unknown certificate check {name!r}")


def _load_checks():
    # checks register themselves when their modules are imported
    from bohrstrip import algebra, constructors, embeddings  # noqa: F401


def inputs_digest(kind, check, inputs, seed):
    return digest({"kind": kind, "check": check, "inputs": inputs, "seed": seed})


def build_certificate(check, inputs, rows, seed=0, command="", tolerance=None, notes=None):
    spec = get_check(check)
    tolerance = spec.tolerance if tolerance is None else tolerance
    kind = spec.kind.value
    return Certificate(
        kind=kind,
        check=check,
        inputs=inputs,
        inputs_digest=inputs_digest(kind, check, inputs, seed),
        columns=spec.columns,
        rows=[list(row) for row in rows],
        verdict=spec.rule(rows, tolerance),
        tolerance=tolerance,
        seed=seed,
        provenance=Provenance(command=command),
        notes=notes or {},
    )


def issue(check, series, inputs, seed=0, command="", tolerance=None, notes=None):
    rows = get_check(check).recompute(series, inputs, seed)
    certificate = build_certificate(check, inputs, rows, seed=seed, command=command, tolerance=tolerance, notes=notes)
    log.debug("Issued %s certificate %s: %s", certificate.kind, check, certificate.verdict)
    return certificate


def load_certificate(data):
    try:
        return Certificate.parse_obj(data)
    except Exception as exc:
        raise ParseError(f"Not a certificate: {exc}")


def _same(a, b):
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return math.isclose(a, b, rel_tol=VERIFY_RTOL, abs_tol=VERIFY_ATOL)
    return a == b


class VerifyReport(NamedTuple):
    passed: bool
    verdict: str
    mismatches: List[str]


def verify_certificate(series, certificate):
    """Recompute the rows of ``certificate`` from ``series`` and compare within the verification tolerance."""
    spec = get_check(certificate.check)
    mismatches = []
    if spec.kind.value != certificate.kind:
        mismatches.append(f"check {certificate.check} is of kind {spec.kind.value}, certificate says {certificate.kind}")
    expected_digest = inputs_digest(certificate.kind, certificate.check, certificate.inputs, certificate.seed)
    if expected_digest != certificate.inputs_digest:
        mismatches.append("inputs digest does not match the inputs")
    rows = spec.recompute(series, certificate.inputs, certificate.seed)
    if len(rows) != len(certificate.rows):
        mismatches.append(f"expected {len(certificate.rows)} rows, recomputed {len(rows)}")
    for i, (got, stored) in enumerate(zip(rows, certificate.rows)):
        if len(got) != len(stored) or not all(_same(a, b) for a, b in zip(got, stored)):
            mismatches.append(f"row {i}: stored {list(stored)}, recomputed {list(got)}")
    verdict = spec.rule(rows, certificate.tolerance)
    if verdict != certificate.verdict:
        mismatches.append(f"stored verdict {certificate.verdict}, recomputed {verdict}")
    return VerifyReport(passed=not mismatches and verdict == PASS, verdict=verdict, mismatches=mismatches)


def verdict_of(ok):
    return PASS if ok else FAIL
