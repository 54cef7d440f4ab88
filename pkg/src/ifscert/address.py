"""Address points, cylinder sets and the canonical projections.

The address of an infinite word alpha at a base point x is the limit of the
prefix images f_{[alpha]_n}(x).  The a-priori bounds

    pc mode:      d(f_{[alpha]_n}(x), a_alpha(x)) <= sum_{k>=n} phi^k(D)
    orbital mode: d(f_{[alpha]_n}(x), a_alpha(x)) <= phi^n(D)

with D a diameter bound for the orbit of x turn the limit into a certified
computation: iterate deep enough that the bound drops below eps.

Only eventually periodic words are accepted; they are dense in the code
space and give exact prefix access at every depth.

The projection machinery on top:

    theta(alpha, B) = address of B / exact image f_alpha(B) / B itself,
                      for infinite / finite non-empty / empty alpha;
    pi(alpha, x)    = address point (singleton wrap and unwrap internal);
    pi_t(alpha, x)  = the same three-way dispatch at a single point;
    psi(alpha, B)   = theta(alpha, A_B) with the attractor radius carried.

One honesty boundary runs through this module: the parent-child condition
controls parent-child gaps, not images of nearby points.  Wherever a bound
on f_w applied to two close points is needed (cylinder radii), pc mode uses
an empirical local Lipschitz estimate and flags the radius heuristic, while
orbital mode contracts within-orbit pairs through phi rigorously.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attractor import (
    AttractorApprox,
    attractor_of_point,
    iterate_certified,
    orbital_diam_bound,
    pc_orbit_diam_bound,
)
from .comparison import eval_phi, iterate, tail_upper_bound
from .errors import DomainError, ResourceBudgetError
from .metric_sets import AnnotatedSet, CertifiedSet, PointSet
from .shift_space import (
    EMPTY_WORD,
    FiniteWord,
    InfiniteWordSpec,
    TotalWord,
    prefix,
)
from .system import IteratedSystem, apply_word_points, as_point

_MAX_ADDRESS_DEPTH = 100_000


@dataclass(frozen=True)
class AddressResult:
    """A computed address value with its certified (or flagged) radius."""

    value: np.ndarray | PointSet
    radius: float
    depth: int
    certified: bool = True
    notes: tuple[str, ...] = ()

    def point(self) -> np.ndarray:
        if isinstance(self.value, PointSet):
            raise DomainError("set-valued address result")
        return self.value


def _orbit_diam_for(
    sys: IteratedSystem, B: PointSet, orbit_diam: float | None
) -> tuple[float, bool, tuple[str, ...]]:
    """(diameter bound, certified flag, notes) for the orbit of B."""
    if sys.mode == "pc":
        if orbit_diam is not None:
            return float(orbit_diam), True, ("orbit diameter bound supplied by caller",)
        return pc_orbit_diam_bound(sys, B), True, ()
    bound, notes = orbital_diam_bound(sys, B, user_bound=orbit_diam)
    certified = orbit_diam is not None
    return bound, certified, notes


def _address_bound(sys: IteratedSystem, D: float, n: int) -> float:
    if sys.mode == "pc":
        return tail_upper_bound(sys.phi, D, n)
    return iterate(sys.phi, D, n)


def _depth_for(sys: IteratedSystem, D: float, eps: float) -> int:
    n = 0
    while _address_bound(sys, D, n) > eps:
        n += 1
        if n > _MAX_ADDRESS_DEPTH:
            raise ResourceBudgetError(
                f"address bound did not reach eps={eps!r} within {_MAX_ADDRESS_DEPTH} steps"
            )
    return n


def _require_mode(sys: IteratedSystem) -> None:
    if sys.mode not in ("pc", "orbital"):
        raise DomainError("addresses need a pc or orbital system")


def address_point(
    sys: IteratedSystem,
    alpha: InfiniteWordSpec,
    x,
    eps: float,
    orbit_diam: float | None = None,
) -> AddressResult:
    """f_{[alpha]_n}(x) for the smallest n whose mode bound is <= eps."""
    _require_mode(sys)
    if not isinstance(alpha, InfiniteWordSpec):
        raise DomainError("address_point takes an infinite word; use pi_t for finite ones")
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    pt = as_point(x, sys.dim)
    D, certified, notes = _orbit_diam_for(sys, PointSet.single(pt), orbit_diam)
    n = _depth_for(sys, D, eps)
    value = apply_word_points(sys, prefix(alpha, n), pt.reshape(1, -1))[0]
    return AddressResult(
        value=value,
        radius=_address_bound(sys, D, n),
        depth=n,
        certified=certified,
        notes=notes,
    )


def address_set(
    sys: IteratedSystem,
    alpha: InfiniteWordSpec,
    B: PointSet,
    eps: float,
    orbit_diam: float | None = None,
) -> AddressResult:
    """Pointwise addresses of B at one shared depth.

    The depth is the largest of the pointwise minimal depths, so the value
    equals f_{[alpha]_n}(B) exactly and the radius is the largest pointwise
    bound at that depth.
    """
    _require_mode(sys)
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    bounds = []
    all_notes: list[str] = []
    certified = True
    for row in B.points:
        D, cert, notes = _orbit_diam_for(sys, PointSet.single(row), orbit_diam)
        bounds.append(D)
        certified &= cert
        for note in notes:
            if note not in all_notes:
                all_notes.append(note)
    n = max(_depth_for(sys, D, eps) for D in bounds)
    value = PointSet(apply_word_points(sys, prefix(alpha, n), B.points))
    radius = max(_address_bound(sys, D, n) for D in bounds)
    return AddressResult(
        value=value,
        radius=radius,
        depth=n,
        certified=certified,
        notes=tuple(all_notes),
    )


def _local_lipschitz(
    sys: IteratedSystem, word: FiniteWord, cloud: PointSet, sample_cap: int = 192
) -> float:
    """Empirical Lipschitz ratio of f_word on a deterministic subsample of
    the cloud; a heuristic, used only where pc mode has no rigorous modulus."""
    pts = np.unique(cloud.points, axis=0)
    if pts.shape[0] > sample_cap:
        stride = int(np.ceil(pts.shape[0] / sample_cap))
        pts = pts[::stride]
    if pts.shape[0] < 2:
        return 1.0
    images = apply_word_points(sys, word, pts)
    gap = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    img_gap = np.sqrt(((images[:, None, :] - images[None, :, :]) ** 2).sum(-1))
    mask = gap > 0.0
    if not mask.any():
        return 1.0
    return float((img_gap[mask] / gap[mask]).max())


def cylinder_set(
    sys: IteratedSystem,
    prefix_word: FiniteWord,
    x,
    eps: float,
    orbit_diam: float | None = None,
) -> AnnotatedSet:
    """The prefix image of the attractor of x (the part of the attractor
    whose addresses start with the given prefix).

    Radius bookkeeping: the attractor radius is carried through the image,
    contracted by phi^{|prefix|} in orbital mode (within-orbit pairs) and
    scaled by an empirical local Lipschitz estimate, flagged heuristic, in
    pc mode.
    """
    _require_mode(sys)
    approx = attractor_of_point(sys, x, eps, orbit_diam=orbit_diam)
    notes = list(approx.truncation_note)
    if not prefix_word.letters:
        return AnnotatedSet(
            core=approx.result.core, radius=approx.result.radius, notes=tuple(notes)
        )
    image = PointSet(apply_word_points(sys, prefix_word, approx.result.core.points))
    if sys.mode == "orbital":
        radius = iterate(sys.phi, approx.result.radius, len(prefix_word.letters))
    else:
        ratio = _local_lipschitz(sys, prefix_word, approx.result.core)
        radius = ratio * approx.result.radius
        notes.append(
            f"heuristic radius: empirical local Lipschitz estimate {ratio!r} "
            "applied to the attractor radius (pc mode has no image modulus)"
        )
    return AnnotatedSet(core=image, radius=radius, notes=tuple(notes))


def theta(
    sys: IteratedSystem,
    alpha: TotalWord,
    B: PointSet,
    eps: float,
    input_radius: float = 0.0,
    orbit_diam: float | None = None,
) -> AnnotatedSet:
    """Three-way dispatch on the word: addresses for infinite words, the
    exact image for finite non-empty words, B itself for the empty word.
    A radius already attached to B is carried through additively."""
    _require_mode(sys)
    if isinstance(alpha, InfiniteWordSpec):
        res = address_set(sys, alpha, B, eps, orbit_diam=orbit_diam)
        notes = res.notes
        if not res.certified:
            notes = notes + ("best-effort: orbit diameter bound is empirical",)
        return AnnotatedSet(core=res.value, radius=res.radius + input_radius, notes=notes)
    if alpha.letters:
        image = PointSet(apply_word_points(sys, alpha, B.points))
        return AnnotatedSet(core=image, radius=input_radius, notes=())
    return AnnotatedSet(core=B, radius=input_radius, notes=())


def pi(
    sys: IteratedSystem,
    alpha: InfiniteWordSpec,
    x,
    eps: float,
    orbit_diam: float | None = None,
) -> AddressResult:
    """The canonical projection at (alpha, x); exactly the address point,
    with the singleton wrap and unwrap kept internal."""
    return address_point(sys, alpha, x, eps, orbit_diam=orbit_diam)


def pi_t(
    sys: IteratedSystem,
    alpha: TotalWord,
    x,
    eps: float,
    orbit_diam: float | None = None,
) -> AddressResult:
    """Extension of the projection to all words: address point for infinite
    alpha, exact f_alpha(x) with radius 0 for finite alpha, x itself for the
    empty word."""
    _require_mode(sys)
    if isinstance(alpha, InfiniteWordSpec):
        return address_point(sys, alpha, x, eps, orbit_diam=orbit_diam)
    pt = as_point(x, sys.dim)
    if alpha.letters:
        value = apply_word_points(sys, alpha, pt.reshape(1, -1))[0]
        return AddressResult(value=value, radius=0.0, depth=len(alpha.letters))
    return AddressResult(value=pt, radius=0.0, depth=0)


def psi(
    sys: IteratedSystem,
    alpha: TotalWord,
    B: PointSet,
    eps: float,
    orbit_diam: float | None = None,
    **attractor_opts,
) -> AnnotatedSet:
    """theta applied to the attractor of B; radii compose per theta's rule."""
    _require_mode(sys)
    approx = iterate_certified(sys, B, eps, **attractor_opts)
    out = theta(
        sys,
        alpha,
        approx.result.core,
        eps,
        input_radius=approx.result.radius,
        orbit_diam=orbit_diam,
    )
    merged = tuple(approx.truncation_note) + tuple(out.notes)
    return AnnotatedSet(core=out.core, radius=out.radius, notes=merged)


def shift_equivariance_bound(
    sys: IteratedSystem,
    res_alpha: AddressResult,
    res_ialpha: AddressResult,
    x,
    orbit_diam: float | None = None,
) -> float:
    """Explicit radii-arithmetic bound for |f_i(pi(alpha, x)) - pi(i alpha, x)|.

    Both computed points are prefix images of the shifted word at depths
    n+1 and m, so in pc mode the chained parent-child condition bounds their
    gap by the tail from min(n+1, m); in orbital mode the image of the first
    result moves by at most phi of its radius and the second contributes its
    own radius.
    """
    _require_mode(sys)
    pt = as_point(x, sys.dim)
    if sys.mode == "pc":
        D, _, _ = _orbit_diam_for(sys, PointSet.single(pt), orbit_diam)
        return tail_upper_bound(sys.phi, D, min(res_alpha.depth + 1, res_ialpha.depth))
    return eval_phi(sys.phi, res_alpha.radius) + res_ialpha.radius
