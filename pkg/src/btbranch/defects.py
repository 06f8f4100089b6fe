"""Artin-Schreier and square defects, and the classification of X^2+aX+b.

Everything here is built on one reduction: repeatedly absorb the leading
term of a series into the image of p(x) = x^2 + x (for as_defect) or of
x -> x^2 (for quad_defect) until what is left pins down how far the
input sits from that image.  The distance is recorded as a fractional
ideal of the integer ring, and the absorbed part is returned as a
witness so callers can reconstruct roots and fixed points from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from .gf2 import ff_artin_schreier_root, ff_sqrt, ff_trace
from .series import (DEFAULT_PREC, Series, UndeterminedAtPrecision, s_add,
                     s_div, s_from_terms, s_monomial, s_mul, s_sqrt,
                     s_truncate, s_zero, val_ge)


@dataclass(frozen=True)
class Ideal:
    """A fractional ideal of F_(2^tau)[[t]]: (t^val), or (0) when val is None."""

    val: int | None

    @classmethod
    def zero(cls) -> "Ideal":
        return cls(None)

    @classmethod
    def of_val(cls, m: int) -> "Ideal":
        return cls(m)

    @property
    def is_zero(self) -> bool:
        return self.val is None

    @property
    def is_ring(self) -> bool:
        return self.val == 0

    def render(self) -> str:
        if self.val is None:
            return "(0)"
        if self.val == 0:
            return "O"
        return f"(t^{self.val})"

    def __repr__(self):
        return f"Ideal[{self.render()}]"


@dataclass(frozen=True)
class DefectResult:
    ideal: Ideal
    witness: Series
    reduced: Series


def as_defect(a: Series) -> DefectResult:
    """Defect of a against the additive map p(x) = x^2 + x.

    Returns (0) when a = p(r) for some r in the field, the full integer
    ring when the obstruction is the residue trace, and (t^(-2s+1)) with
    s > 0 in the ramified case.  The witness h satisfies
    reduced = a + h^2 + h, with the reduced series of valuation >= 0.

    A leading term of odd negative exponent settles the answer no matter
    what the unknown tail is, so truncated input is often enough.
    """
    fld = a.field
    h = s_zero(fld)
    while True:
        if a.looks_zero:
            if a.is_exact or a.prec >= 1:
                return DefectResult(Ideal.zero(), h, a)
            raise UndeterminedAtPrecision(
                f"series vanishes to precision {a.prec}; defect needs it mod t")
        v = a.lead
        if v > 0:
            return DefectResult(Ideal.zero(), h, a)
        u = a.coeffs[0]
        if v == 0:
            if ff_trace(fld, u) == 1:
                return DefectResult(Ideal.of_val(0), h, a)
            c = ff_artin_schreier_root(fld, u)
            step = s_from_terms(fld, {0: c})
            h = s_add(h, step)
            a = s_add(a, s_from_terms(fld, {0: u}))
            continue
        if v % 2:
            return DefectResult(Ideal.of_val(v), h, a)
        # v = -2s: absorb u*t^(-2s) as p(sqrt(u)*t^(-s)), which costs a
        # new term sqrt(u)*t^(-s) but strictly raises the valuation
        s = -v // 2
        step = s_monomial(fld, -s, ff_sqrt(fld, u))
        h = s_add(h, step)
        a = s_add(a, s_add(s_monomial(fld, v, u), step))


def quad_defect(a: Series) -> DefectResult:
    """Defect of a against squaring: distance from the set of squares.

    The even-exponent part of a is a square on the nose; its root is the
    witness xi, and what survives in a + xi^2 is the odd part.  The
    ideal is (t^m) for the smallest odd exponent m in the support, or
    (0) when a is a perfect square.
    """
    fld = a.field
    xi = s_from_terms(fld, {e // 2: ff_sqrt(fld, c)
                            for e, c in a.terms() if e % 2 == 0},
                      None if a.prec is None else (a.prec + 1) // 2)
    odd = [e for e, _ in a.terms() if e % 2]
    if odd:
        m = odd[0]
        reduced = s_from_terms(fld, {e: c for e, c in a.terms() if e % 2},
                               a.prec)
        return DefectResult(Ideal.of_val(m), xi, reduced)
    if a.is_exact:
        return DefectResult(Ideal.zero(), xi, s_zero(fld))
    raise UndeterminedAtPrecision(
        f"no odd-exponent term below precision {a.prec}; square defect open")


# -- classification of quadratic polynomials ------------------------

REDUCIBLE_SEP = "reducible_sep"
UNRAMIFIED_SEP = "unramified_sep"
RAMIFIED_SEP = "ramified_sep"
REDUCIBLE_INSEP = "reducible_insep"
RAMIFIED_INSEP = "ramified_insep"

KINDS = (REDUCIBLE_SEP, UNRAMIFIED_SEP, RAMIFIED_SEP,
         REDUCIBLE_INSEP, RAMIFIED_INSEP)

_CELL = {
    REDUCIBLE_SEP: "A^s",
    UNRAMIFIED_SEP: "A^s",
    RAMIFIED_SEP: "B^s",
    REDUCIBLE_INSEP: "A^i",
    RAMIFIED_INSEP: "B^i",
}


@dataclass(frozen=True)
class QuadPoly:
    """X^2 + aX + b together with its classification.

    ``t`` is the ramification jump: defined for the two ramified kinds
    (positive for ramified_sep, >= 0 for ramified_insep on integral
    input) and None otherwise.  ``defect`` holds the as/quad defect
    computation the classification came from.
    """

    a: Series
    b: Series
    kind: str
    t: int | None
    defect: DefectResult

    @property
    def cell(self) -> str:
        """Coarse class: A^s, B^s, A^i or B^i."""
        return _CELL[self.kind]

    @property
    def separable(self) -> bool:
        return self.kind in (REDUCIBLE_SEP, UNRAMIFIED_SEP, RAMIFIED_SEP)

    @property
    def reducible(self) -> bool:
        return self.kind in (REDUCIBLE_SEP, REDUCIBLE_INSEP)


def classify(a: Series, b: Series, working_prec: int = DEFAULT_PREC) -> QuadPoly:
    """Classify X^2 + aX + b over the Laurent series field.

    Separable (a != 0) splits by the defect of b/a^2; inseparable by the
    square defect of b.  Inexact a that merely looks zero cannot be
    classified and raises.
    """
    if a.looks_zero:
        if not a.is_exact:
            raise UndeterminedAtPrecision("linear coefficient 0 to precision only")
        d = quad_defect(b)
        if d.ideal.is_zero:
            return QuadPoly(a, b, REDUCIBLE_INSEP, None, d)
        return QuadPoly(a, b, RAMIFIED_INSEP, (d.ideal.val - 1) // 2, d)
    d = as_defect(s_div(b, s_mul(a, a), working_prec))
    if d.ideal.is_zero:
        return QuadPoly(a, b, REDUCIBLE_SEP, None, d)
    if d.ideal.is_ring:
        return QuadPoly(a, b, UNRAMIFIED_SEP, None, d)
    return QuadPoly(a, b, RAMIFIED_SEP, (1 - d.ideal.val) // 2, d)


# -- root finding ---------------------------------------------------

def solve_artin_schreier(a: Series,
                         working_prec: int = DEFAULT_PREC) -> Series | None:
    """A root of r^2 + r = a, or None when there is none in the field.

    The defect reduction leaves a remainder of positive valuation whose
    small root is the limit of r -> r^2 + remainder; the witness shifts
    it back.  Roots come in pairs r, r+1; this returns the one whose
    reduced part is topologically small.
    """
    d = as_defect(a)
    if not d.ideal.is_zero:
        return None
    rem = d.reduced
    if rem.is_zero:
        return d.witness
    r = s_zero(a.field)
    for _ in range(working_prec + 2):
        nxt = s_truncate(s_add(s_mul(r, r), rem), working_prec)
        if nxt == r:
            break
        r = nxt
    else:
        raise AssertionError("Artin-Schreier iteration failed to stabilise")
    return s_add(d.witness, r)


def solve_quadratic(c: Series, d: Series,
                    working_prec: int = DEFAULT_PREC):
    """Both roots of Y^2 + cY + d, or None if it is irreducible.

    With c != 0 the substitution Y = cZ reduces to an Artin-Schreier
    equation; with c = 0 the equation is a pure square and the double
    root is returned twice.
    """
    if c.looks_zero:
        if not c.is_exact:
            raise UndeterminedAtPrecision("linear coefficient 0 to precision only")
        try:
            s = s_sqrt(d)
        except ValueError:
            return None
        return (s, s)
    r = solve_artin_schreier(s_div(d, s_mul(c, c), working_prec), working_prec)
    if r is None:
        return None
    y0 = s_mul(c, r)
    return (y0, s_add(y0, c))


def ideal_val_or_inf(i: Ideal):
    """Valuation of the ideal, with the zero ideal at +infinity."""
    return inf if i.val is None else i.val


def defect_in_image(kind_ideal: Ideal, separable: bool) -> bool:
    """Image law: as-defects land in {(0), O, (t^odd<0)}; square defects
    in {(0)} plus odd positive exponents (for integral input)."""
    v = kind_ideal.val
    if v is None or v == 0:
        return separable or v is None
    if separable:
        return v < 0 and v % 2 == 1
    return v % 2 == 1


def s_is_integral(a: Series) -> bool:
    """Certified membership in the integer ring F_(2^tau)[[t]]."""
    return val_ge(a, 0)
