"""Branch shapes, the fake distance, and predicted stem positions.

A branch is either a thick line (a stem path fattened by a depth) or an
infinite foliage (a horoball toward one boundary end).  This module
derives the shape symbolically from a matrix, materialises shapes back
into vertex predicates so they can be checked against the membership
oracle, and predicts the relative position of two stems from nothing
but the two minimal polynomials and the pairing scalar.

Half-integers show up because distances are naturally computed on a
barycentric subdivision; HalfInt keeps them exact and keeps the three
infinite stem lengths (one-ended, two-ended, and minus infinity for a
vanishing discriminant) in one ordered type.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from math import inf

from .defects import (RAMIFIED_INSEP, RAMIFIED_SEP, REDUCIBLE_INSEP,
                      REDUCIBLE_SEP, UNRAMIFIED_SEP, solve_quadratic)
from .mat2 import (Mat2, PairConfig, ScalarMatrix, discriminant_params,
                   is_scalar, m_add, m_mul, min_poly)
from .series import (DEFAULT_PREC, Series, UndeterminedAtPrecision, s_add,
                     s_div, s_inv, s_mul, s_render, s_sqrt, s_val)
from .tree import MeasuredShape, Vertex, Window

# -- exact half-integers with the three infinities ------------------

_ORDER = {"neg_inf": 0, "fin": 1, "inf": 2, "two_inf": 3}


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    kind: str
    twice: int = 0

    def __post_init__(self):
        if self.kind not in _ORDER:
            raise ValueError(f"bad HalfInt kind {self.kind!r}")
        if self.kind != "fin" and self.twice:
            object.__setattr__(self, "twice", 0)

    @classmethod
    def of(cls, n: int) -> "HalfInt":
        return cls("fin", 2 * n)

    @classmethod
    def half(cls, n: int) -> "HalfInt":
        return cls("fin", n)

    def __lt__(self, other: "HalfInt") -> bool:
        a = (_ORDER[self.kind], self.twice)
        b = (_ORDER[other.kind], other.twice)
        return a < b

    @property
    def is_integer(self) -> bool:
        return self.kind == "fin" and self.twice % 2 == 0

    @property
    def as_int(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self.render()} is not an integer")
        return self.twice // 2

    def render(self) -> str:
        if self.kind == "fin":
            return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"
        return {"neg_inf": "-inf", "inf": "inf", "two_inf": "2*inf"}[self.kind]

    def __repr__(self):
        return f"HalfInt({self.render()})"


NEG_INF = HalfInt("neg_inf")
INF = HalfInt("inf")
TWO_INF = HalfInt("two_inf")


# -- boundary points ------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    """A point of the projective line: a series, or None for infinity."""

    value: Series | None

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(None)

    @classmethod
    def finite(cls, x: Series) -> "ProjPoint":
        return cls(x)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def render(self) -> str:
        return "inf" if self.value is None else s_render(self.value)


# -- shapes ---------------------------------------------------------

@dataclass(frozen=True)
class ThickLine:
    """A stem (maximal path, single vertex or edge) fattened by a depth."""

    stem_kind: str  # "maxpath" | "vertex" | "edge"
    depth: int
    ends: tuple[ProjPoint, ProjPoint] | None = None
    stem: tuple[Vertex, ...] = ()

    @property
    def stem_length(self) -> HalfInt:
        return {"maxpath": TWO_INF, "vertex": HalfInt.of(0),
                "edge": HalfInt.of(1)}[self.stem_kind]

    def render(self) -> str:
        if self.stem_kind == "maxpath":
            a, b = self.ends
            return f"line({a.render()}, {b.render()}) depth {self.depth}"
        stem = " -- ".join(v.render() for v in self.stem)
        return f"{self.stem_kind} {stem} depth {self.depth}"


@dataclass(frozen=True)
class InfiniteFoliage:
    """The horoball of balls at level >= ``level`` toward ``end``."""

    end: ProjPoint
    level: int

    @property
    def stem_length(self) -> HalfInt:
        return INF

    def render(self) -> str:
        return f"foliage(end {self.end.render()}, level {self.level})"


BranchShape = ThickLine | InfiniteFoliage


def stem_length_of_kind(kind: str) -> HalfInt:
    return {REDUCIBLE_SEP: TWO_INF, UNRAMIFIED_SEP: HalfInt.of(0),
            RAMIFIED_SEP: HalfInt.of(1), REDUCIBLE_INSEP: INF,
            RAMIFIED_INSEP: HalfInt.of(1)}[kind]


# -- the shape of a branch, symbolically ----------------------------

def branch_shape(q: Mat2, working_prec: int = DEFAULT_PREC) -> BranchShape:
    """Derive the branch of an integral non-scalar matrix.

    Separable reducible: the maximal path between the two Moebius fixed
    points, depth = val(trace).  Unramified: a single ball whose center
    is corrected by the Artin-Schreier defect witness.  Ramified (either
    flavour): an edge, displaced along the same center by the jump t.
    Inseparable reducible: the horoball of the unique fixed end.
    """
    if is_scalar(q):
        raise ScalarMatrix("scalar matrices belong to every order")
    m = min_poly(q, working_prec)
    A, B, C = q.a, q.b, q.c
    c, d = m.a, m.b

    if m.kind == REDUCIBLE_SEP:
        depth = s_val(c)
        if C.is_zero:
            ends = (ProjPoint.finite(s_div(B, c, working_prec)),
                    ProjPoint.infinity())
        else:
            roots = solve_quadratic(s_div(c, C, working_prec),
                                    s_div(B, C, working_prec), working_prec)
            if roots is None:
                raise AssertionError("reducible separable matrix with "
                                     "irreducible fixed-point quadratic")
            ends = (ProjPoint.finite(roots[0]), ProjPoint.finite(roots[1]))
        return ThickLine("maxpath", depth, ends=ends)

    if m.kind == REDUCIBLE_INSEP:
        alpha = s_sqrt(d)
        if C.is_zero:
            # here q + alpha is strictly upper triangular, so the end is
            # infinity and the leaf level is the valuation of its corner
            return InfiniteFoliage(ProjPoint.infinity(), s_val(B))
        end = s_div(s_add(A, alpha), C, working_prec)
        return InfiniteFoliage(ProjPoint.finite(end), -s_val(C))

    # the remaining classes all have a nonzero lower-left entry
    if C.looks_zero:
        raise AssertionError(f"vanishing corner entry in class {m.kind}")
    y = s_inv(C, working_prec)
    x = s_div(A, C, working_prec)
    if m.kind == UNRAMIFIED_SEP:
        xi = s_add(x, s_mul(s_mul(c, y), m.defect.witness))
        lvl = s_val(c) - s_val(C)
        return ThickLine("vertex", s_val(c), stem=(Vertex(lvl, xi),))
    if m.kind == RAMIFIED_SEP:
        xi = s_add(x, s_mul(s_mul(c, y), m.defect.witness))
        lvl = s_val(c) - s_val(C) - m.t
        return ThickLine("edge", s_val(c) - m.t,
                         stem=(Vertex(lvl, xi), Vertex(lvl + 1, xi)))
    # ramified inseparable
    xi = s_add(x, s_mul(y, m.defect.witness))
    lvl = -s_val(C) + m.t
    return ThickLine("edge", m.t,
                     stem=(Vertex(lvl, xi), Vertex(lvl + 1, xi)))


# -- materialisation ------------------------------------------------
#
# Centers coming out of branch_shape are known to the working precision
# only.  Every valuation below is either capped by a window-scale bound
# or, when it exceeds the precision, so large that the membership
# inequality is settled anyway; that is sound as long as the working
# precision dwarfs window radius + depth, which it does by default.

def _val_seen(x: Series):
    if x.coeffs:
        return x.lead
    return inf if x.prec is None else x.prec


def vertex_distance(v: Vertex, w: Vertex) -> int:
    """tree_distance that tolerates centers agreeing beyond precision."""
    m = min(v.r, w.r, _val_seen(s_add(v.center, w.center)))
    return (v.r - m) + (w.r - m)


def dist_to_path(v: Vertex, e1: ProjPoint, e2: ProjPoint) -> int:
    """Distance from a ball to the maximal path between two distinct ends."""
    finite = [e for e in (e1, e2) if not e.is_infinity]
    if not finite:
        raise ValueError("a path needs two distinct ends")
    if len(finite) == 1:
        p = min(v.r, _val_seen(s_add(v.center, finite[0].value)))
        return v.r - p
    m = _val_seen(s_add(e1.value, e2.value))
    if m == inf:
        raise ValueError("the two ends coincide")
    best = None
    for e in finite:
        p = min(v.r, _val_seen(s_add(v.center, e.value)))
        d = v.r - p if p >= m else v.r + m - 2 * p
        best = d if best is None else min(best, d)
    return best


def shape_member(shape: BranchShape, v: Vertex) -> bool:
    if isinstance(shape, InfiniteFoliage):
        if shape.end.is_infinity:
            return v.r <= shape.level
        p = min(v.r, _val_seen(s_add(v.center, shape.end.value)))
        return v.r + shape.level <= 2 * p
    if shape.stem_kind == "maxpath":
        d = dist_to_path(v, *shape.ends)
    else:
        d = min(vertex_distance(v, u) for u in shape.stem)
    return d <= shape.depth


def shape_members(shape: BranchShape, window: Window) -> set[Vertex]:
    return {v for v in window.vertices if shape_member(shape, v)}


# -- fake distance --------------------------------------------------

def fake_distance(lam: Series, m1, m2) -> HalfInt:
    """The case table: -1/2 val(Delta / product of separable traces^2),
    shifted down by the jump of each ramified separable factor and up by
    the jump of each ramified inseparable one.  -inf when Delta = 0."""
    delta = discriminant_params(m1.a, m1.b, m2.a, m2.b, lam)
    if delta.is_zero:
        return NEG_INF
    if delta.looks_zero:
        raise UndeterminedAtPrecision("discriminant vanishes to precision only")
    twice = -delta.lead
    for m in (m1, m2):
        if m.separable:
            twice += 2 * s_val(m.a)
        if m.kind == RAMIFIED_SEP:
            twice -= 2 * m.t
        elif m.kind == RAMIFIED_INSEP:
            twice += 2 * m.t
    return HalfInt.half(twice)


# -- relative positions ---------------------------------------------

@dataclass(frozen=True)
class Disjoint:
    distance: int

    def render(self) -> str:
        return f"disjoint, stem distance {self.distance}"


@dataclass(frozen=True)
class Overlap:
    length: int

    def render(self) -> str:
        return f"stems overlap in a path of length {self.length}"


@dataclass(frozen=True)
class SharedRay:
    def render(self) -> str:
        return "stems share a ray"


@dataclass(frozen=True)
class SharedMaxPath:
    def render(self) -> str:
        return "stems share a maximal path"


@dataclass(frozen=True)
class FoliageMeet:
    diameter: int
    depth: int
    stem_is_edge: bool

    def render(self) -> str:
        stem = "edge" if self.stem_is_edge else "vertex"
        return (f"foliages meet: diameter {self.diameter}, "
                f"depth {self.depth}, {stem} stem")


@dataclass(frozen=True)
class FoliageContained:
    def render(self) -> str:
        return "one foliage contains the other"


RelPos = Disjoint | Overlap | SharedRay | SharedMaxPath | FoliageMeet | FoliageContained


def _is_zero_matrix(q: Mat2) -> bool:
    return all(x.is_zero for x in (q.a, q.b, q.c, q.d))


def predict_relpos(pair: PairConfig) -> RelPos:
    """Predict the stem configuration from (m1, m2, lambda) alone."""
    m1, m2, lam = pair.m1, pair.m2, pair.lam
    if m1.kind == REDUCIBLE_INSEP and m2.kind == REDUCIBLE_INSEP:
        if lam.is_zero:
            return FoliageContained()
        nl = s_val(lam)
        if nl < 0:
            return Disjoint(-nl)
        return FoliageMeet(nl, nl // 2, nl % 2 == 1)
    df = fake_distance(lam, m1, m2)
    if df.kind == "neg_inf":
        if m1.kind == REDUCIBLE_SEP and m2.kind == REDUCIBLE_SEP:
            commutator = m_add(m_mul(pair.q1, pair.q2),
                               m_mul(pair.q2, pair.q1))
            return SharedMaxPath() if _is_zero_matrix(commutator) else SharedRay()
        lmin = min(stem_length_of_kind(m1.kind), stem_length_of_kind(m2.kind))
        if lmin.kind == "fin":
            return Overlap(lmin.as_int)
        return SharedRay()
    if df > HalfInt.of(0):
        if not df.is_integer:
            raise ValueError(f"positive fake distance {df.render()} is not an "
                             "integer; no matrix pair realises this input")
        return Disjoint(df.as_int)
    length = min(HalfInt.of(-df.twice),
                 stem_length_of_kind(m1.kind), stem_length_of_kind(m2.kind))
    return Overlap(length.as_int)


def check_agreement(pred: RelPos, meas: MeasuredShape) -> tuple[bool, str]:
    """Does a certified measurement corroborate a prediction?"""
    if not meas.certified:
        return False, f"measurement uncertified: {meas.note or meas.kind}"
    if isinstance(pred, Disjoint):
        if meas.kind != "disjoint":
            return False, f"predicted disjoint, measured {meas.kind}"
        if meas.distance != pred.distance:
            return False, (f"distance mismatch: predicted {pred.distance}, "
                           f"measured {meas.distance}")
        return True, "ok"
    if isinstance(pred, Overlap):
        if meas.kind != "path":
            return False, f"predicted overlap, measured {meas.kind}"
        if meas.length != pred.length:
            return False, (f"overlap length mismatch: predicted {pred.length}, "
                           f"measured {meas.length}")
        return True, "ok"
    if isinstance(pred, SharedRay):
        return (meas.kind == "ray", f"predicted ray, measured {meas.kind}")
    if isinstance(pred, SharedMaxPath):
        return (meas.kind == "maxpath", f"predicted maxpath, measured {meas.kind}")
    if isinstance(pred, FoliageMeet):
        if meas.kind != "blob":
            return False, f"predicted foliage meet, measured {meas.kind}"
        if meas.diameter != pred.diameter:
            return False, (f"diameter mismatch: predicted {pred.diameter}, "
                           f"measured {meas.diameter}")
        if meas.depth != pred.depth:
            return False, (f"depth mismatch: predicted {pred.depth}, "
                           f"measured {meas.depth}")
        if meas.stem_is_edge != pred.stem_is_edge:
            return False, "stem vertex/edge parity mismatch"
        return True, "ok"
    if isinstance(pred, FoliageContained):
        return (meas.kind == "contained",
                f"predicted containment, measured {meas.kind}")
    return False, f"unknown prediction {pred!r}"
