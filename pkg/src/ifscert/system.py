"""Iterated systems: map families, modes and sampled condition checkers.

A system couples a finite (possibly truncated-parametric) family of self-maps
of R^d with a comparison function and a mode flag:

* ``pc``        -- the parent-child gap d(f_w(x), f_{wi}(x)) is bounded by
                   phi^{|w|}(d(x, f_i(x))); requires summable phi.
* ``orbital``   -- every f_i is a phi-contraction on pairs taken from one
                   orbit; requires right-continuous phi.
* ``unverified``-- no claim; checkers can be used to classify.

The checkers are samplers, not decision procedures: an empty violation list
means "consistent with the condition on the sampled words and points", never
a proof.  Reports are deterministic for a fixed seed.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import expressions
from .comparison import ComparisonFn, eval_phi, iterate
from .errors import (
    ConfigError,
    DomainError,
    MapEvaluationError,
    ResourceBudgetError,
)
from .metric_sets import PointSet
from .shift_space import FiniteWord, format_word

# Exhaustive word enumeration is used while n_maps**depth stays below this.
EXHAUSTIVE_WORD_BUDGET = 100_000


class WorkingBoxWarning(UserWarning):
    """Points escaped the declared working box; computation continues."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, the bounded region computations live in."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise DomainError("box needs matching non-empty min/max vectors")
        if any(not (a < b) for a, b in zip(self.lo, self.hi)):
            raise DomainError("box min must be < max coordinatewise")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def lo_array(self) -> np.ndarray:
        return np.asarray(self.lo, dtype=float)

    def hi_array(self) -> np.ndarray:
        return np.asarray(self.hi, dtype=float)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return np.all((pts >= self.lo_array()) & (pts <= self.hi_array()), axis=-1)

    def corners(self) -> np.ndarray:
        cols = [np.array(pair) for pair in zip(self.lo, self.hi)]
        grid = np.array(list(itertools.product(*cols)), dtype=float)
        return grid

    def center(self) -> np.ndarray:
        return (self.lo_array() + self.hi_array()) / 2.0

    def radius(self) -> float:
        return float(np.linalg.norm((self.hi_array() - self.lo_array()) / 2.0))


# ---------------------------------------------------------------------------
# Map specifications
# ---------------------------------------------------------------------------


def _affine_apply(matrix: np.ndarray, offset: np.ndarray, X: np.ndarray) -> np.ndarray:
    # Explicit per-coordinate accumulation in a fixed order; avoids BLAS so
    # batched and single-point evaluation agree bitwise.
    cols = []
    for j in range(matrix.shape[0]):
        acc = matrix[j, 0] * X[:, 0]
        for k in range(1, matrix.shape[1]):
            acc = acc + matrix[j, k] * X[:, k]
        cols.append(acc + offset[j])
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class AffineMap:
    """x -> M x + b."""

    matrix: tuple[tuple[float, ...], ...]
    offset: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "matrix", tuple(tuple(float(v) for v in row) for row in self.matrix)
        )
        object.__setattr__(self, "offset", tuple(float(v) for v in self.offset))
        d = len(self.offset)
        if len(self.matrix) != d or any(len(row) != d for row in self.matrix):
            raise DomainError("affine map needs a d x d matrix and a d offset")

    @property
    def dim(self) -> int:
        return len(self.offset)

    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    def offset_array(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=float)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return _affine_apply(self.matrix_array(), self.offset_array(), X)

    def operator_norm(self) -> float:
        return float(np.linalg.norm(self.matrix_array(), 2))

    def to_config_dict(self) -> dict:
        return {
            "kind": "affine",
            "matrix": [list(row) for row in self.matrix],
            "offset": list(self.offset),
        }


def _rotation_matrix(dim: int, angles: tuple[float, ...]) -> np.ndarray:
    if dim == 1:
        if angles:
            raise DomainError("no rotation angles in dimension 1")
        return np.eye(1)
    if dim == 2:
        if len(angles) > 1:
            raise DomainError("dimension 2 takes a single rotation angle")
        t = angles[0] if angles else 0.0
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    if dim == 3:
        if angles and len(angles) != 3:
            raise DomainError("dimension 3 takes three rotation angles")
        a, b, g = angles if angles else (0.0, 0.0, 0.0)
        rx = np.array([[1, 0, 0], [0, math.cos(a), -math.sin(a)], [0, math.sin(a), math.cos(a)]])
        ry = np.array([[math.cos(b), 0, math.sin(b)], [0, 1, 0], [-math.sin(b), 0, math.cos(b)]])
        rz = np.array([[math.cos(g), -math.sin(g), 0], [math.sin(g), math.cos(g), 0], [0, 0, 1]])
        return rz @ ry @ rx
    if angles:
        raise DomainError(f"rotation angles unsupported in dimension {dim}")
    return np.eye(dim)


@dataclass(frozen=True)
class SimilarityMap:
    """Scaling by s >= 0, optional rotation, then translation.

    Compiles to an affine map; kept as its own spec for readable configs.
    """

    scale: float
    offset: tuple[float, ...]
    angles: tuple[float, ...] = ()
    _affine: AffineMap = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "offset", tuple(float(v) for v in self.offset))
        object.__setattr__(self, "angles", tuple(float(v) for v in self.angles))
        if self.scale < 0:
            raise DomainError("similarity scale must be >= 0")
        d = len(self.offset)
        rot = _rotation_matrix(d, self.angles)
        matrix = tuple(tuple(float(self.scale) * float(v) for v in row) for row in rot)
        object.__setattr__(self, "_affine", AffineMap(matrix, tuple(float(v) for v in self.offset)))

    @property
    def dim(self) -> int:
        return len(self.offset)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return self._affine.apply(X)

    def operator_norm(self) -> float:
        return float(self.scale)

    def to_config_dict(self) -> dict:
        out = {"kind": "similarity", "scale": self.scale, "offset": list(self.offset)}
        if self.angles:
            out["angles"] = list(self.angles)
        return out


@dataclass(frozen=True)
class PiecewiseAffineMap:
    """List of (box, affine) pieces; the first box containing the point wins.

    Evaluating outside every declared box is a map error.
    """

    pieces: tuple[tuple[Box, AffineMap], ...]

    def __post_init__(self):
        if not self.pieces:
            raise DomainError("piecewise map needs at least one piece")

    @property
    def dim(self) -> int:
        return self.pieces[0][1].dim

    def apply(self, X: np.ndarray) -> np.ndarray:
        out = np.empty_like(X)
        todo = np.ones(X.shape[0], dtype=bool)
        for box, m in self.pieces:
            sel = todo & box.contains(X)
            if sel.any():
                out[sel] = m.apply(X[sel])
                todo &= ~sel
        if todo.any():
            bad = X[todo][0]
            raise MapEvaluationError(f"point {bad.tolist()} outside every piece")
        return out

    def operator_norm(self) -> float:
        return max(m.operator_norm() for _, m in self.pieces)

    def to_config_dict(self) -> dict:
        return {
            "kind": "piecewise",
            "pieces": [
                {
                    "box": {"min": list(box.lo), "max": list(box.hi)},
                    "map": m.to_config_dict(),
                }
                for box, m in self.pieces
            ],
        }


@dataclass(frozen=True)
class ExprMap:
    """Coordinate-wise expressions in x1..xd (the index parameter i, if any,
    is bound before the map is built)."""

    exprs: tuple[expressions.Expr, ...]

    def __post_init__(self):
        allowed = {f"x{j + 1}" for j in range(len(self.exprs))}
        for e in self.exprs:
            if not e.variables <= allowed:
                raise DomainError(
                    f"expression {e.source!r} uses variables outside {sorted(allowed)}"
                )

    @property
    def dim(self) -> int:
        return len(self.exprs)

    def apply(self, X: np.ndarray) -> np.ndarray:
        env = {f"x{j + 1}": X[:, j] for j in range(self.dim)}
        cols = []
        for e in self.exprs:
            value = expressions.evaluate(e, **env)
            col = np.broadcast_to(np.asarray(value, dtype=float), (X.shape[0],))
            cols.append(col)
        out = np.stack(cols, axis=1)
        if not np.all(np.isfinite(out)):
            raise MapEvaluationError(
                f"expression map produced a non-finite value ({[e.source for e in self.exprs]})"
            )
        return out

    def to_config_dict(self) -> dict:
        return {"kind": "expr", "exprs": [e.source for e in self.exprs]}


MapSpec = AffineMap | SimilarityMap | PiecewiseAffineMap | ExprMap


def expr_map(sources: Sequence[str], index: int | None = None) -> ExprMap:
    """Build an ExprMap from source strings, binding the index parameter."""
    dim = len(sources)
    allowed = {f"x{j + 1}" for j in range(dim)} | {"i"}
    parsed = []
    for src in sources:
        e = expressions.parse_expression(src, allowed_variables=allowed)
        if index is not None:
            e = expressions.bind(e, i=index)
        elif "i" in e.variables:
            raise DomainError(f"expression {src!r} uses i outside a parametric family")
        parsed.append(e)
    return ExprMap(tuple(parsed))


# ---------------------------------------------------------------------------
# Families and systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexFamily:
    """Finite or truncated-parametric family of maps.

    For a parametric family the template is instantiated at the 0-based
    indices 0..n-1.  ``delta_tail``, when given, certifies that the images
    of the discarded maps stay within Hausdorff distance delta_tail of the
    retained union for every set inside the working box.
    """

    maps: tuple[MapSpec, ...]
    parametric_template: tuple[str, ...] | None = None
    delta_tail: float | None = None

    def __post_init__(self):
        if not self.maps:
            raise DomainError("a family needs at least one map (N >= 1)")
        if self.delta_tail is not None and self.delta_tail < 0:
            raise DomainError("delta_tail must be >= 0")

    @property
    def n(self) -> int:
        return len(self.maps)

    @classmethod
    def explicit(cls, maps: Sequence[MapSpec], delta_tail: float | None = None):
        return cls(maps=tuple(maps), delta_tail=delta_tail)

    @classmethod
    def parametric(
        cls,
        template: Sequence[str],
        n: int,
        delta_tail: float | None = None,
    ):
        if n < 1:
            raise DomainError("truncation N must be >= 1")
        maps = tuple(expr_map(template, index=i) for i in range(n))
        return cls(maps=maps, parametric_template=tuple(template), delta_tail=delta_tail)


_MODES = ("pc", "orbital", "unverified")


class IteratedSystem:
    """A map family on a working box together with phi and a mode flag.

    Immutable after construction; all operations on it are pure.
    """

    __slots__ = ("dim", "working_box", "family", "phi", "mode")

    def __init__(
        self,
        working_box: Box,
        family: IndexFamily,
        phi: ComparisonFn,
        mode: str = "unverified",
    ):
        if mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}, got {mode!r}", path="mode")
        if mode == "pc" and not phi.is_summable:
            raise ConfigError(
                "pc mode requires a summable comparison function "
                "(attach a tail certificate)",
                path="phi",
            )
        if mode == "orbital" and not phi.is_right_continuous:
            raise ConfigError(
                "orbital mode requires a right-continuous comparison function",
                path="phi",
            )
        dims = {m.dim for m in family.maps}
        if dims != {working_box.dim}:
            raise ConfigError(
                f"maps have dimensions {sorted(dims)} but the working box is "
                f"{working_box.dim}-dimensional",
                path="maps",
            )
        self.dim = working_box.dim
        self.working_box = working_box
        self.family = family
        self.phi = phi
        self.mode = mode

    @property
    def n_maps(self) -> int:
        return self.family.n

    def map(self, i: int):
        if not 0 <= i < self.n_maps:
            raise DomainError(f"map index {i} out of range [0, {self.n_maps})")
        return self.family.maps[i]


def as_point(x, dim: int) -> np.ndarray:
    pt = np.asarray(x, dtype=float).reshape(-1)
    if pt.shape[0] != dim:
        raise DomainError(f"point has dimension {pt.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(pt)):
        raise DomainError("point coordinates must be finite")
    return pt


def apply_map(sys: IteratedSystem, i: int, x) -> np.ndarray:
    """f_i(x) for a single point."""
    pt = as_point(x, sys.dim)
    return sys.map(i).apply(pt.reshape(1, -1))[0]


def apply_map_points(sys: IteratedSystem, i: int, X: np.ndarray) -> np.ndarray:
    return sys.map(i).apply(X)


def apply_word(sys: IteratedSystem, w: FiniteWord, x) -> np.ndarray:
    """f_w(x) with the composition convention f_w = f_{w_1} o ... o f_{w_n}
    (the last letter acts first); the empty word is the identity."""
    pt = as_point(x, sys.dim).reshape(1, -1)
    for letter in reversed(w.letters):
        pt = sys.map(letter).apply(pt)
    return pt[0]


def apply_word_points(sys: IteratedSystem, w: FiniteWord, X: np.ndarray) -> np.ndarray:
    for letter in reversed(w.letters):
        X = sys.map(letter).apply(X)
    return X


# ---------------------------------------------------------------------------
# Condition checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    word: str
    map_index: int  # 1-based, matching the word syntax
    x: tuple[float, ...]
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_json_dict(self) -> dict:
        return {
            "word": self.word,
            "map": self.map_index,
            "x": list(self.x),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    samples: int
    depth: int
    violations: tuple[Violation, ...]
    max_margin: float
    certified: bool
    seed: int | None = None
    notes: tuple[str, ...] = ()
    data: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "condition": self.condition,
            "samples": self.samples,
            "depth": self.depth,
            "violations": [v.to_json_dict() for v in self.violations],
            "max_margin": self.max_margin,
            "certified": self.certified,
            "seed": self.seed,
            "notes": list(self.notes),
            "data": self.data,
        }


def _float_slack(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # Bounds hold non-strictly in exact arithmetic; 8 ulps of the larger
    # magnitude absorbs float rounding without hiding real violations.
    return 8.0 * np.spacing(np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300))


def _words_at_depth(sys: IteratedSystem, depth: int, budget: int, rng, count: int):
    n = sys.n_maps
    if n**depth <= budget:
        yield from (FiniteWord(w) for w in itertools.product(range(n), repeat=depth))
    else:
        for _ in range(count):
            yield FiniteWord(tuple(int(v) for v in rng.integers(0, n, size=depth)))


def check_parent_child(
    sys: IteratedSystem,
    x_samples: PointSet,
    max_depth: int = 4,
    words_per_depth: int = 64,
    seed: int = 0,
) -> ConditionReport:
    """Sample the parent-child inequality over words, maps and points.

    For each sampled word w, map i and sample x the two sides

        lhs = d(f_w(x), f_{wi}(x))      rhs = phi^{|w|}(d(x, f_i(x)))

    are evaluated; lhs must not exceed rhs (up to 8 ulps).  Words are
    enumerated exhaustively per depth while n_maps**depth stays within the
    budget, and sampled uniformly (seeded) beyond.
    """
    if max_depth < 1:
        raise DomainError("max_depth must be >= 1")
    rng = np.random.default_rng(seed)
    X = x_samples.points
    violations: list[Violation] = []
    max_margin = -math.inf
    total = 0
    base_gap = {}
    for i in range(sys.n_maps):
        FX = apply_map_points(sys, i, X)
        base_gap[i] = (FX, np.sqrt(((X - FX) ** 2).sum(axis=1)))
    for depth in range(0, max_depth + 1):
        for word in _words_at_depth(sys, depth, EXHAUSTIVE_WORD_BUDGET, rng, words_per_depth):
            WX = apply_word_points(sys, word, X)
            for i in range(sys.n_maps):
                FX, gap = base_gap[i]
                WFX = apply_word_points(sys, word, FX)
                lhs = np.sqrt(((WX - WFX) ** 2).sum(axis=1))
                rhs = iterate(sys.phi, gap, depth)
                margin = lhs - rhs
                max_margin = max(max_margin, float(margin.max()))
                bad = margin > _float_slack(lhs, rhs)
                for idx in np.flatnonzero(bad):
                    violations.append(
                        Violation(
                            word=format_word(word),
                            map_index=i + 1,
                            x=tuple(float(v) for v in X[idx]),
                            lhs=float(lhs[idx]),
                            rhs=float(rhs[idx]),
                        )
                    )
                total += X.shape[0]
    return ConditionReport(
        condition="parent_child",
        samples=total,
        depth=max_depth,
        violations=tuple(violations),
        max_margin=max_margin,
        certified=False,
        seed=seed,
        notes=(
            "sampled check: zero violations is evidence of the parent-child "
            "condition on the samples, not a proof",
        ),
    )


def _orbit_points(sys: IteratedSystem, x: np.ndarray, depth: int, budget: int = 500_000) -> np.ndarray:
    pts = x.reshape(1, -1)
    acc = pts
    for _ in range(depth):
        pts = np.unique(
            np.concatenate([apply_map_points(sys, i, pts) for i in range(sys.n_maps)]),
            axis=0,
        )
        acc = np.unique(np.concatenate([acc, pts]), axis=0)
        if acc.shape[0] > budget:
            raise ResourceBudgetError(
                f"orbit approximation exceeded {budget} points; lower the depth"
            )
    return acc


def check_orbital(
    sys: IteratedSystem,
    x_samples: PointSet,
    orbit_depth: int = 3,
    pair_budget: int = 4000,
    seed: int = 0,
) -> ConditionReport:
    """Sample the orbital contraction inequality within single orbits.

    Builds a finite orbit approximation for each sample point and checks
    d(f_i(y), f_i(z)) <= phi(d(y, z)) for pairs y, z drawn from the same
    orbit; pairs across different orbits are never compared.
    """
    if orbit_depth < 1:
        raise DomainError("orbit_depth must be >= 1")
    rng = np.random.default_rng(seed)
    violations: list[Violation] = []
    max_margin = -math.inf
    total = 0
    for x in x_samples.points:
        orbit_pts = _orbit_points(sys, x, orbit_depth)
        m = orbit_pts.shape[0]
        if m * (m - 1) // 2 <= pair_budget:
            pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
        else:
            pairs = [
                tuple(sorted(rng.choice(m, size=2, replace=False)))
                for _ in range(pair_budget)
            ]
        if not pairs:
            continue
        ia = np.array([p[0] for p in pairs])
        ib = np.array([p[1] for p in pairs])
        Y, Z = orbit_pts[ia], orbit_pts[ib]
        gap = np.sqrt(((Y - Z) ** 2).sum(axis=1))
        rhs = eval_phi(sys.phi, gap)
        for i in range(sys.n_maps):
            FY = apply_map_points(sys, i, Y)
            FZ = apply_map_points(sys, i, Z)
            lhs = np.sqrt(((FY - FZ) ** 2).sum(axis=1))
            margin = lhs - rhs
            max_margin = max(max_margin, float(margin.max()))
            bad = margin > _float_slack(lhs, rhs)
            for idx in np.flatnonzero(bad):
                violations.append(
                    Violation(
                        word="@",
                        map_index=i + 1,
                        x=tuple(float(v) for v in Y[idx]),
                        lhs=float(lhs[idx]),
                        rhs=float(rhs[idx]),
                    )
                )
            total += len(pairs)
    return ConditionReport(
        condition="orbital",
        samples=total,
        depth=orbit_depth,
        violations=tuple(violations),
        max_margin=max_margin,
        certified=False,
        seed=seed,
        notes=(
            "pairs are drawn within one orbit approximation at a time; "
            "cross-orbit pairs are out of scope for the orbital condition",
        ),
    )


def check_family_regularity(
    sys: IteratedSystem,
    box_samples: PointSet | None = None,
    eps_grid: Sequence[float] = (1e-1, 1e-2, 1e-3),
    seed: int = 0,
) -> ConditionReport:
    """Boundedness and equal uniform continuity of the family.

    Affine-like families are analyzed exactly: the family is equal uniformly
    continuous with modulus eps / sup_i ||M_i|| and its images of the working
    box stay in a computable ball.  Expression maps are probed with sampled
    moduli of continuity over ``eps_grid``.  For a truncated parametric
    family the part beyond the truncation is covered only by the user's
    delta_tail certificate; without one, boundedness of the full family is
    flagged not certifiable.
    """
    notes: list[str] = []
    data: dict = {}
    box = sys.working_box
    affine_like = all(
        isinstance(m, (AffineMap, SimilarityMap, PiecewiseAffineMap)) for m in sys.family.maps
    )
    if affine_like:
        sup_norm = max(m.operator_norm() for m in sys.family.maps)
        center = box.center().reshape(1, -1)
        image_radius = 0.0
        for m in sys.family.maps:
            try:
                fc = m.apply(center)[0]
            except MapEvaluationError:
                continue
            shift = float(np.linalg.norm(fc - box.center()))
            image_radius = max(image_radius, m.operator_norm() * box.radius() + shift)
        data["sup_operator_norm"] = sup_norm
        data["image_ball_radius_around_box_center"] = image_radius
        data["equal_uniform_continuity_modulus"] = (
            "delta(eps) = eps / sup_operator_norm" if sup_norm > 0 else "constant maps"
        )
        certified = True
        samples = 0
    else:
        rng = np.random.default_rng(seed)
        if box_samples is None:
            pts = rng.uniform(box.lo_array(), box.hi_array(), size=(128, box.dim))
            box_samples = PointSet(pts)
        X = box_samples.points
        moduli = {}
        deltas = [box.radius() * 2.0**-k for k in range(1, 16)]
        directions = rng.standard_normal((X.shape[0], box.dim))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        worst_image = 0.0
        for delta in deltas:
            Y = np.clip(X + delta * directions, box.lo_array(), box.hi_array())
            worst = 0.0
            for i in range(sys.n_maps):
                FX = apply_map_points(sys, i, X)
                FY = apply_map_points(sys, i, Y)
                worst = max(worst, float(np.sqrt(((FX - FY) ** 2).sum(axis=1)).max()))
                worst_image = max(worst_image, float(np.abs(FX).max()))
            moduli[format(delta, ".6g")] = worst
        data["sampled_moduli"] = moduli
        data["sampled_image_bound"] = worst_image
        per_eps = {}
        for eps in eps_grid:
            ok = [d for d in deltas if moduli[format(d, ".6g")] < eps]
            per_eps[format(eps, ".6g")] = format(max(ok), ".6g") if ok else None
        data["delta_for_eps"] = per_eps
        notes.append("expression maps: sampled moduli of continuity, not exact analysis")
        certified = False
        samples = X.shape[0] * len(deltas) * sys.n_maps
    if sys.family.parametric_template is not None:
        if sys.family.delta_tail is None:
            notes.append(
                "boundedness not certifiable: parametric family truncated at "
                f"N={sys.family.n} without a tail certificate (truncated family only)"
            )
            certified = False
        else:
            notes.append(
                f"truncation tail certified by user: delta_tail={sys.family.delta_tail!r}"
            )
            data["delta_tail"] = sys.family.delta_tail
    return ConditionReport(
        condition="family_regularity",
        samples=samples,
        depth=0,
        violations=(),
        max_margin=0.0,
        certified=certified,
        seed=seed,
        notes=tuple(notes),
        data=data,
    )


def warn_if_escaped(sys: IteratedSystem, pts: np.ndarray) -> None:
    inside = sys.working_box.contains(pts)
    if not bool(np.all(inside)):
        count = int((~inside).sum())
        warnings.warn(
            f"{count} point(s) escaped the working box; computation continues",
            WorkingBoxWarning,
            stacklevel=3,
        )
