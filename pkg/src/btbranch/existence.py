"""Deciding whether a pairing datum is realised by a matrix pair.

Given lambda and two monic quadratics m1, m2 over the integer ring, is
there a pair of non-scalar, linearly independent 2x2 matrices q1, q2
with m_i(q_i) = 0 and pairing lambda?  The datum presents a 4-dimensional
algebra; when its discriminant Delta is nonzero that algebra is
quaternion and the question is whether it splits, which a cyclic
presentation plus the residue symbol answers.  When Delta vanishes the
algebra degenerates and the answer reduces to explicit root conditions,
with equally explicit witness pairs.

Everything symbolic here is backed by searches: a zero divisor found by
search_zero_divisor is a proof of splitting, independent of the symbol.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .defects import QuadPoly, REDUCIBLE_INSEP, classify, solve_quadratic
from .gf2 import ff_sqrt, ff_trace
from .mat2 import (Mat2, discriminant_params, is_scalar, m_add, m_mul,
                   m_scalar, m_scale, sym_product)
from .series import (DEFAULT_PREC, Series, s_add, s_div, s_from_terms,
                     s_mul, s_one, s_parse, s_sqrt, s_zero)


class DegenerateForm(Exception):
    """The datum does not present a quaternion algebra (Delta = 0)."""


@dataclass(frozen=True)
class AlgebraSpec:
    lam: Series
    m1: QuadPoly
    m2: QuadPoly

    @property
    def disc(self) -> Series:
        return discriminant_params(self.m1.a, self.m1.b,
                                   self.m2.a, self.m2.b, self.lam)


def algebra_spec(lam: Series, a1: Series, b1: Series, a2: Series,
                 b2: Series, working_prec: int = DEFAULT_PREC) -> AlgebraSpec:
    return AlgebraSpec(lam, classify(a1, b1, working_prec),
                       classify(a2, b2, working_prec))


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool
    matched_condition: str  # "i" | "ii" | "iii" | "iv" | "v" | "none"
    witness: tuple[Mat2, Mat2] | None = None
    commutative_note: bool = False


# -- the cyclic presentation and the residue symbol -----------------

def cyclic_presentation(spec: AlgebraSpec) -> tuple[Series, Series]:
    """Rewrite the algebra as [a, b): u^2+u = a, v^2 = b, vu = (u+1)v.

    Needs Delta != 0; with both traces zero the generators are traded
    for q1 q2 / lambda, and a vanishing norm makes the algebra split
    outright, reported as the trivial symbol [0, 1).
    """
    m1, m2, lam = spec.m1, spec.m2, spec.lam
    fld = lam.field
    delta = spec.disc
    if delta.is_zero:
        raise DegenerateForm("the datum with Delta = 0 is not quaternion")
    if not m1.a.is_zero:
        return s_div(m1.b, s_mul(m1.a, m1.a)), delta
    if not m2.a.is_zero:
        return s_div(m2.b, s_mul(m2.a, m2.a)), delta
    # both traces vanish, so Delta = lambda^2 and lambda != 0
    if m1.b.is_zero or m2.b.is_zero:
        return s_zero(fld), s_one(fld)
    return s_div(s_mul(m1.b, m2.b), s_mul(lam, lam)), m2.b


def splits(a: Series, b: Series, working_prec: int = DEFAULT_PREC) -> bool:
    """Whether the cyclic algebra [a, b) is a matrix algebra.

    By the residue formula the obstruction is the residue-field trace of
    the t^-1 coefficient of a db/b.  The formal derivative keeps only
    odd exponents of b, everything else being a square.
    """
    if b.is_zero:
        raise ValueError("the second symbol argument must be nonzero")
    db = s_from_terms(b.field, {e - 1: c for e, c in b.terms() if e % 2},
                      None if b.prec is None else b.prec - 1)
    form = s_mul(a, s_div(db, b, working_prec))
    return ff_trace(a.field, form.coeff(-1)) == 0


# -- searches (independent of the symbol machinery) -----------------

def _mul_table(spec: AlgebraSpec):
    """Structure constants: coordinates of B_i B_j in (1, Q1, Q2, Q1Q2)."""
    fld = spec.lam.field
    z, o = s_zero(fld), s_one(fld)
    a1, b1 = spec.m1.a, spec.m1.b
    a2, b2 = spec.m2.a, spec.m2.b
    lam = spec.lam
    lam_aa = s_add(lam, s_mul(a1, a2))
    tab = {}
    tab[0, 0] = (o, z, z, z)
    for j, unit in ((1, (z, o, z, z)), (2, (z, z, o, z)), (3, (z, z, z, o))):
        tab[0, j] = tab[j, 0] = unit
    tab[1, 1] = (b1, a1, z, z)
    tab[2, 2] = (b2, z, a2, z)
    tab[1, 2] = (z, z, z, o)
    tab[2, 1] = (lam, a2, a1, o)
    tab[1, 3] = (z, z, b1, a1)
    tab[3, 1] = (s_mul(a2, b1), lam_aa, b1, z)
    tab[2, 3] = (s_mul(a1, b2), b2, lam_aa, z)
    tab[3, 2] = (z, b2, z, a2)
    tab[3, 3] = (s_mul(b1, b2), z, z, lam_aa)
    return tab


def _alg_mul(tab, x, y):
    fld = x[0].field
    out = [s_zero(fld)] * 4
    for i, xi in enumerate(x):
        if xi.is_zero:
            continue
        for j, yj in enumerate(y):
            if yj.is_zero:
                continue
            coeff = s_mul(xi, yj)
            for k, c in enumerate(tab[i, j]):
                if not c.is_zero:
                    out[k] = s_add(out[k], s_mul(coeff, c))
    return tuple(out)


def _det4(rows):
    """Cofactor determinant of a 4x4 series matrix; exact for exact input."""

    def det2(m):
        return s_add(s_mul(m[0][0], m[1][1]), s_mul(m[0][1], m[1][0]))

    def det3(m):
        acc = None
        for j in range(3):
            minor = [[m[1][k] for k in range(3) if k != j],
                     [m[2][k] for k in range(3) if k != j]]
            term = s_mul(m[0][j], det2(minor))
            acc = term if acc is None else s_add(acc, term)
        return acc

    acc = None
    for j in range(4):
        minor = [[rows[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        term = s_mul(rows[0][j], det3(minor))
        acc = term if acc is None else s_add(acc, term)
    return acc


def _small_elements(fld, lo, hi, max_terms=2):
    """All series with at most max_terms terms supported on lo..hi."""
    exps = range(lo, hi + 1)
    coeffs = range(1, fld.order)
    yield s_zero(fld)
    for n in range(1, max_terms + 1):
        for pos in itertools.combinations(exps, n):
            for cs in itertools.product(coeffs, repeat=n):
                yield s_from_terms(fld, dict(zip(pos, cs)))


def search_zero_divisor(spec: AlgebraSpec, lo: int = -4, hi: int = 8,
                        max_terms: int = 1):
    """Look for a nonzero element of reduced norm zero.

    A hit is a proof that the (quaternion) algebra splits: the returned
    coordinates in (1, Q1, Q2, Q1Q2) have a singular left-multiplication
    matrix.  Exhausting the box proves nothing.
    """
    tab = _mul_table(spec)
    fld = spec.lam.field
    basis = [tuple(s_one(fld) if i == j else s_zero(fld) for i in range(4))
             for j in range(4)]
    for coords in itertools.product(_small_elements(fld, lo, hi, max_terms),
                                    repeat=2):
        for pattern in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
            x = [s_zero(fld)] * 4
            x[pattern[0]], x[pattern[1]] = coords
            if all(c.is_zero for c in x):
                continue
            cols = [_alg_mul(tab, tuple(x), e) for e in basis]
            rows = [[cols[j][i] for j in range(4)] for i in range(4)]
            if _det4(rows).is_zero:
                return tuple(x)
    return None


def _pair_form_numerator(spec: AlgebraSpec, x: Series, y: Series,
                         z: Series, w: Series) -> Series:
    m1, m2 = spec.m1, spec.m2
    return s_add(
        s_add(s_add(s_mul(x, x), s_mul(s_mul(m1.a, x), y)),
              s_mul(s_mul(m1.b, y), y)),
        s_add(s_add(s_add(s_mul(z, z), s_mul(s_mul(m2.a, z), w)),
                    s_mul(s_mul(m2.b, w), w)),
              s_add(s_mul(s_mul(m1.a, z), y), s_mul(s_mul(m2.a, x), w))))


def pair_form(spec: AlgebraSpec, x: Series, y: Series, z: Series,
              w: Series, working_prec: int = DEFAULT_PREC) -> Series:
    """C(x,y,z,w): the pairing realised by norm-zero combinations."""
    return s_div(_pair_form_numerator(spec, x, y, z, w), s_mul(y, w),
                 working_prec)


def search_pair(spec: AlgebraSpec, lo: int = -4, hi: int = 8,
                max_terms: int = 1):
    """Look for (x,y),(z,w) with C(x,y,z,w) = lambda; None if none in the box.

    The comparison is done multiplied through by y w so it stays exact.
    """
    fld = spec.lam.field
    pool = list(_small_elements(fld, lo, hi, max_terms))
    nonzero = [s for s in pool if not s.is_zero]
    for y, w in itertools.product(nonzero, repeat=2):
        target = s_mul(s_mul(y, w), spec.lam)
        for x, z in itertools.product(pool, repeat=2):
            if _pair_form_numerator(spec, x, y, z, w) == target:
                return (x, y, z, w)
    return None


# -- explicit witnesses ---------------------------------------------

def _root_of(m: QuadPoly, working_prec: int) -> Series | None:
    if m.kind == REDUCIBLE_INSEP:
        return s_sqrt(m.b)
    roots = solve_quadratic(m.a, m.b, working_prec)
    return None if roots is None else roots[0]


def _witness_first_reducible(lam, m1, m2, working_prec):
    """A pair with q1 realising a root of the reducible m1."""
    fld = lam.field
    alpha = _root_of(m1, working_prec)
    z, o = s_zero(fld), s_one(fld)
    if not m1.a.is_zero:
        q1 = Mat2(s_add(m1.a, alpha), z, z, alpha)
        p = s_div(s_add(lam, s_mul(m2.a, s_add(m1.a, alpha))), m1.a,
                  working_prec)
        q2 = Mat2(p, o, s_add(m2.b, s_mul(p, s_add(m2.a, p))), s_add(m2.a, p))
        return q1, q2
    # m1 = (X + alpha)^2: take the nilpotent companion of alpha
    r = s_add(lam, s_mul(alpha, m2.a))
    if r.is_zero:
        return None
    q1 = Mat2(alpha, o, z, alpha)
    q2 = Mat2(z, s_div(m2.b, r, working_prec), r, m2.a)
    return q1, q2


def _witness_commutative(lam, m1, m2, working_prec):
    """Best-effort pair for the doubly traceless, lambda = 0 datum.

    Both generators then commute, so q2 is forced into K[q1] and a
    genuinely independent pair only exists for some coefficient shapes;
    None means no such pair exists at all (which the verdict documents
    rather than hides).
    """
    fld = lam.field
    b1, b2 = m1.b, m2.b
    z, o = s_zero(fld), s_one(fld)
    eta = Mat2(z, o, z, z)
    sq1 = m1.kind == REDUCIBLE_INSEP
    sq2 = m2.kind == REDUCIBLE_INSEP
    if sq1 and sq2:
        if b1.is_zero and b2.is_zero:
            return None  # only multiples of one nilpotent commute
        r1, r2 = s_sqrt(b1), s_sqrt(b2)
        q1 = m_add(m_scalar(r1), eta)
        if r1 == r2:
            q2 = m_add(m_scalar(r2), m_scale(s_parse(fld, "t"), eta))
        else:
            q2 = m_add(m_scalar(r2), eta)
        return q1, q2
    if sq1 != sq2:
        return None  # a square and a non-square can never commute here
    # both inseparable irreducible: split b_i = xi^2 + t * eta_i^2
    xi1, et1 = _even_odd_root(b1)
    xi2, et2 = _even_odd_root(b2)
    s = s_div(et2, et1, working_prec)
    c = s_add(xi2, s_mul(s, xi1))
    if c.is_zero:
        return None  # b2/b1 is a square, so q2 would be a multiple of q1
    q1 = Mat2(z, b1, o, z)
    q2 = m_add(m_scalar(c), m_scale(s, q1))
    return q1, q2


def _even_odd_root(b: Series) -> tuple[Series, Series]:
    """Write b = xi^2 + t eta^2 (possible for any exact series)."""
    fld = b.field
    even = {e: c for e, c in b.terms() if e % 2 == 0}
    odd = {e: c for e, c in b.terms() if e % 2}
    xi = s_from_terms(fld, {e // 2: ff_sqrt(fld, c) for e, c in even.items()})
    eta = s_from_terms(fld, {(e - 1) // 2: ff_sqrt(fld, c)
                             for e, c in odd.items()})
    return xi, eta


def _vanishes(x: Series, floor: int = 8) -> bool:
    """Zero exactly, or to a precision deep enough to trust."""
    if x.is_zero:
        return True
    return x.looks_zero and x.prec is not None and x.prec >= floor


def verify_witness(spec: AlgebraSpec, q1: Mat2, q2: Mat2) -> bool:
    """Hard check: minimal polynomials, pairing, non-scalarity, independence.

    Witness entries may carry truncated roots, so the identities are
    accepted when they vanish to the precision the arithmetic provides.
    Independence needs a visibly nonzero 2x2 minor of coordinates.
    """
    for m, q in ((spec.m1, q1), (spec.m2, q2)):
        lhs = m_add(m_add(m_mul(q, q), m_scale(m.a, q)), m_scalar(m.b))
        if not all(_vanishes(x) for x in (lhs.a, lhs.b, lhs.c, lhs.d)):
            return False
        if is_scalar(q):
            return False
    if not _vanishes(s_add(sym_product(q1, q2), spec.lam)):
        return False
    for e1, e2 in (("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"),
                   ("b", "d"), ("c", "d")):
        x1, y1 = getattr(q1, e1), getattr(q1, e2)
        x2, y2 = getattr(q2, e1), getattr(q2, e2)
        minor = s_add(s_mul(x1, y2), s_mul(y1, x2))
        if not minor.is_zero and not minor.looks_zero:
            return True
    return False


# -- the decision procedure -----------------------------------------

COMMUTATIVE_NOTE = ("every realising pair lies in a two-dimensional "
                    "commutative subalgebra")


def decide(spec: AlgebraSpec, working_prec: int = DEFAULT_PREC) -> ExistenceVerdict:
    """Decide realisability and construct a witness pair where possible."""
    delta = spec.disc
    m1, m2, lam = spec.m1, spec.m2, spec.lam
    if not delta.is_zero:
        if m1.reducible:
            w = _witness_first_reducible(lam, m1, m2, working_prec)
            return ExistenceVerdict(True, "i", w)
        if m2.reducible:
            w = _witness_first_reducible(lam, m2, m1, working_prec)
            if w is not None:
                w = (w[1], w[0])
            return ExistenceVerdict(True, "i", w)
        a_sym, b_sym = cyclic_presentation(spec)
        if splits(a_sym, b_sym, working_prec):
            return ExistenceVerdict(True, "ii", None)
        return ExistenceVerdict(False, "none", None)
    # Delta = 0
    if not m1.a.is_zero:
        if m1.reducible:
            w = _witness_first_reducible(lam, m1, m2, working_prec)
            return ExistenceVerdict(True, "iii", w)
        return ExistenceVerdict(False, "none", None)
    if not m2.a.is_zero:
        if m2.reducible:
            w = _witness_first_reducible(lam, m2, m1, working_prec)
            if w is not None:
                w = (w[1], w[0])
            return ExistenceVerdict(True, "iv", w)
        return ExistenceVerdict(False, "none", None)
    # both traces vanish and lambda = 0
    w = _witness_commutative(lam, m1, m2, working_prec)
    return ExistenceVerdict(True, "v", w, commutative_note=True)
