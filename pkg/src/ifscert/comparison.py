"""Comparison functions and certified tail bounds.

A comparison function ``phi`` maps [0, inf) to itself with ``phi(0) = 0``,
``phi(r) < r`` for r > 0, and is increasing.  Every certified error radius in
this package is an upper bound for a tail sum ``sum_{k>=n} phi^k(r)``, so the
soundness of the whole artifact reduces to the soundness of the bounds
produced here.

Summability is never inferred from samples.  A tail bound exists only when
the function carries a certificate:

* ``ClosedFormTail``   -- a function (n, r) -> U with sum_{k>=n} phi^k(r) <= U.
* ``GeometricEnvelope(q, threshold, n0)`` -- asserts phi(s) <= q*s for every
  s <= threshold, and that at most n0 iterations are needed to fall below the
  threshold from any radius the bound will be invoked at.  The bound is then
  the exact partial sum of iterates up to index n0 plus a geometric tail.

The built-in families construct their own certificates; custom expressions
must bring one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import expressions
from .errors import (
    CertificateViolationError,
    DomainError,
    TailNotCertifiableError,
)


@dataclass(frozen=True)
class ClosedFormTail:
    """Certified closed form for the tail sum, as a callable (n, r) -> bound."""

    fn: Callable[[int, float], float]
    description: str = "closed form"


@dataclass(frozen=True)
class GeometricEnvelope:
    """Geometric domination certificate.

    ``phi(s) <= q * s`` for all ``s <= threshold`` (``threshold=None`` means
    the envelope holds globally), and ``phi^{n0}(r) <= threshold`` for every
    radius ``r`` the tail bound will be called with.
    """

    q: float
    threshold: float | None = None
    n0: int = 0

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise DomainError(f"envelope ratio q must be in (0,1), got {self.q}")
        if self.threshold is not None and self.threshold <= 0:
            raise DomainError("envelope threshold must be positive")
        if self.n0 < 0:
            raise DomainError("envelope index n0 must be >= 0")


Certificate = ClosedFormTail | GeometricEnvelope


@dataclass(frozen=True)
class ComparisonFn:
    """Immutable comparison function with optional summability certificate.

    Build instances with :func:`linear`, :func:`power_affine` or
    :func:`custom`; the constructor enforces ``phi(0) = 0``.
    """

    kind: str
    evaluator: Callable = field(repr=False)
    params: dict = field(default_factory=dict)
    certificate: Certificate | None = None
    is_right_continuous: bool = True

    def __post_init__(self):
        value = float(self.evaluator(0.0))
        if value != 0.0:
            raise DomainError(f"phi(0) must be 0 exactly, got {value}")

    @property
    def is_summable(self) -> bool:
        return self.certificate is not None

    def __call__(self, r):
        return eval_phi(self, r)


def linear(c: float) -> ComparisonFn:
    """phi(r) = c*r with 0 <= c < 1; tail sum has the exact geometric form."""
    c = float(c)
    if not (0.0 <= c < 1.0):
        raise DomainError(f"linear ratio must be in [0,1), got {c}")
    cert = ClosedFormTail(
        fn=lambda n, r: (c**n) * r / (1.0 - c),
        description=f"geometric series, ratio {c!r}",
    )
    return ComparisonFn(
        kind="linear",
        evaluator=lambda r: c * r,
        params={"c": c},
        certificate=cert,
    )


def power_affine(c: float, p: float, r0: float) -> ComparisonFn:
    """phi(r) = c*r^p for r <= r0, continued affinely with slope c beyond.

    Requires c in [0,1), p >= 1 and c*r0^(p-1) < 1 so that phi(r) < r
    everywhere.  The global ratio max(c, c*r0^(p-1)) yields an automatic
    geometric envelope.
    """
    c, p, r0 = float(c), float(p), float(r0)
    if not (0.0 <= c < 1.0):
        raise DomainError(f"power_affine ratio must be in [0,1), got {c}")
    if p < 1.0:
        raise DomainError(f"power_affine exponent must be >= 1, got {p}")
    if r0 <= 0.0:
        raise DomainError("power_affine threshold r0 must be positive")
    q_glob = max(c, c * r0 ** (p - 1.0))
    if not q_glob < 1.0:
        raise DomainError(
            f"power_affine needs c*r0^(p-1) < 1 for phi(r) < r; got {q_glob}"
        )
    knee = c * r0**p

    def evaluator(r):
        return np.where(r <= r0, c * np.power(r, p), knee + c * (r - r0)) + 0.0

    cert = None
    if c > 0.0:
        cert = GeometricEnvelope(q=q_glob, threshold=None, n0=0)
    else:
        cert = ClosedFormTail(fn=lambda n, r: r if n == 0 else 0.0,
                              description="zero function beyond index 0")
    return ComparisonFn(
        kind="power_affine",
        evaluator=lambda r: float(evaluator(r)) if np.isscalar(r) else evaluator(r),
        params={"c": c, "p": p, "r0": r0},
        certificate=cert,
    )


def custom(
    expr: str | expressions.Expr,
    tail: Certificate | None = None,
    right_continuous: bool = True,
) -> ComparisonFn:
    """Comparison function given by an expression in the variable ``r``.

    ``tail`` is the user's summability certificate; without one the function
    is treated as non-summable and tail bounds are refused.  Right continuity
    is a declared flag (spot-checked by :func:`spot_verify`, not proved).
    """
    if isinstance(expr, str):
        expr = expressions.parse_expression(expr, allowed_variables={"r"})
    elif not expr.variables <= {"r"}:
        raise DomainError("comparison expressions may only use the variable r")

    def evaluator(r):
        return expressions.evaluate(expr, r=r)

    return ComparisonFn(
        kind="custom",
        evaluator=evaluator,
        params={"expr": expr.source},
        certificate=tail,
        is_right_continuous=right_continuous,
    )


def _check_radius(r):
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("radius must be finite")
    if np.any(arr < 0.0):
        raise DomainError("radius must be non-negative")


def eval_phi(phi: ComparisonFn, r):
    """phi(r) for a scalar or an array of non-negative radii."""
    _check_radius(r)
    value = phi.evaluator(np.asarray(r, dtype=float) if not np.isscalar(r) else float(r))
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"phi not finite at r={r!r}")
    if np.any(arr < 0.0):
        raise DomainError(f"phi returned a negative value at r={r!r}")
    return float(value) if np.isscalar(r) else arr


def iterate(phi: ComparisonFn, r, n: int):
    """n-th iterate phi^n(r), with phi^0(r) = r."""
    if n < 0:
        raise DomainError("iteration count must be >= 0")
    _check_radius(r)
    value = float(r) if np.isscalar(r) else np.asarray(r, dtype=float)
    for _ in range(int(n)):
        value = eval_phi(phi, value)
    return value


def tail_upper_bound(phi: ComparisonFn, r: float, n: int) -> float:
    """Certified upper bound for sum_{k>=n} phi^k(r).

    Never an uncertified truncation: with no certificate this raises
    :class:`TailNotCertifiableError`.
    """
    _check_radius(r)
    r = float(r)
    if n < 0:
        raise DomainError("tail index must be >= 0")
    if r == 0.0:
        return 0.0
    cert = phi.certificate
    if cert is None:
        raise TailNotCertifiableError(
            "tail not certifiable: comparison function carries no "
            "summability certificate"
        )
    if isinstance(cert, ClosedFormTail):
        bound = float(cert.fn(int(n), r))
        if not (np.isfinite(bound) and bound >= 0.0):
            raise CertificateViolationError(
                f"closed-form tail returned {bound} at (n={n}, r={r})"
            )
        return bound
    # Geometric envelope: exact partial sum of iterates up to the
    # certificate's index, then the certified geometric remainder.
    anchor = iterate(phi, r, cert.n0)
    if cert.threshold is not None and anchor > cert.threshold:
        raise CertificateViolationError(
            f"phi^{cert.n0}({r}) = {anchor} exceeds the envelope threshold "
            f"{cert.threshold}; certificate violated"
        )
    exact = 0.0
    if n < cert.n0:
        value = iterate(phi, r, n)
        for _ in range(cert.n0 - n):
            exact += value
            value = eval_phi(phi, value)
    geometric = cert.q ** max(n - cert.n0, 0) * anchor / (1.0 - cert.q)
    return exact + geometric


@dataclass(frozen=True)
class SpotViolation:
    kind: str
    r: float
    detail: str


@dataclass(frozen=True)
class SpotCheckReport:
    checked_points: int
    violations: tuple[SpotViolation, ...]
    right_continuity_tolerance: float | None = None

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "checked_points": self.checked_points,
            "clean": self.clean,
            "violations": [
                {"kind": v.kind, "r": v.r, "detail": v.detail}
                for v in self.violations
            ],
        }


# Dyadic offsets used when probing right limits; fixed so reports are
# reproducible.
_RIGHT_LIMIT_EXPONENTS = (10, 15, 20, 25, 30, 35, 40)


def spot_verify(
    phi: ComparisonFn,
    grid: Sequence[float],
    right_tolerance: float = 1e-8,
) -> SpotCheckReport:
    """Sample the defining properties of a comparison function on a grid.

    Checks phi(r) < r at every positive grid point, monotonicity on adjacent
    pairs and, when the function is flagged right continuous, compares
    phi(r + 2^-k) against phi(r) over a fixed dyadic schedule.  Violations
    are reported, never raised; an empty grid is a usage error.
    """
    points = [float(g) for g in grid]
    if not points:
        raise DomainError("spot_verify requires a non-empty grid")
    if sorted(points) != points:
        raise DomainError("grid must be sorted ascending")
    violations: list[SpotViolation] = []
    values = [eval_phi(phi, g) for g in points]
    for g, v in zip(points, values):
        if g == 0.0:
            if v != 0.0:
                violations.append(SpotViolation("zero", g, f"phi(0) = {v!r}"))
        elif not v < g:
            violations.append(
                SpotViolation("strict_decrease", g, f"phi({g!r}) = {v!r} >= r")
            )
    for (g1, v1), (g2, v2) in zip(zip(points, values), zip(points[1:], values[1:])):
        if v1 > v2:
            violations.append(
                SpotViolation(
                    "monotonicity",
                    g1,
                    f"phi({g1!r}) = {v1!r} > phi({g2!r}) = {v2!r}",
                )
            )
    if phi.is_right_continuous:
        for g, v in zip(points, values):
            delta = 2.0 ** -_RIGHT_LIMIT_EXPONENTS[-1]
            probe = eval_phi(phi, g + delta)
            if abs(probe - v) > right_tolerance:
                violations.append(
                    SpotViolation(
                        "right_continuity",
                        g,
                        f"phi(r+{delta!r}) deviates by {abs(probe - v)!r}",
                    )
                )
    return SpotCheckReport(
        checked_points=len(points),
        violations=tuple(violations),
        right_continuity_tolerance=right_tolerance if phi.is_right_continuous else None,
    )
