"""Residue field arithmetic: F_(2^tau) in a polynomial basis.

Elements are plain ints whose bits are the coefficients of the basis
1, g, g^2, ... modulo a fixed irreducible polynomial over F_2.  tau = 1
degenerates to F_2 with modulus x (so every element is 0 or 1).
"""

from __future__ import annotations

from dataclasses import dataclass


def _poly_deg(p: int) -> int:
    return p.bit_length() - 1


def _poly_mulmod(x: int, y: int, modulus: int, tau: int) -> int:
    # carry-less multiply, then reduce
    acc = 0
    while y:
        if y & 1:
            acc ^= x
        y >>= 1
        x <<= 1
    top = _poly_deg(modulus)
    for d in range(_poly_deg(acc) if acc else 0, top - 1, -1):
        if acc >> d & 1:
            acc ^= modulus << (d - top)
    return acc


def _poly_mod(a: int, m: int) -> int:
    dm = _poly_deg(m)
    while a and _poly_deg(a) >= dm:
        a ^= m << (_poly_deg(a) - dm)
    return a


def _is_irreducible(p: int) -> bool:
    """Exhaustive trial division over F_2 (fine for degree <= 16)."""
    d = _poly_deg(p)
    if d < 1:
        return False
    if d == 1:
        return True
    for q in range(2, 1 << (d // 2 + 1)):
        if _poly_deg(q) > d // 2:
            break
        if _poly_mod(p, q) == 0:
            return False
    return True


# a few conventional moduli so small fields work without flags
DEFAULT_MODULI = {
    1: 0b10,        # x
    2: 0b111,       # x^2+x+1
    3: 0b1011,      # x^3+x+1
    4: 0b10011,     # x^4+x+1
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
}


@dataclass(frozen=True)
class FieldConfig:
    """The residue field F_(2^tau), fixed by an irreducible modulus."""

    tau: int
    modulus: int

    def __post_init__(self):
        if self.tau < 1 or self.tau > 16:
            raise ValueError(f"tau={self.tau} out of supported range 1..16")
        if _poly_deg(self.modulus) != self.tau:
            raise ValueError(
                f"modulus degree {_poly_deg(self.modulus)} != tau {self.tau}")
        if not _is_irreducible(self.modulus):
            raise ValueError(f"modulus {bin(self.modulus)} is reducible over F_2")

    @property
    def order(self) -> int:
        return 1 << self.tau

    def elements(self):
        return range(self.order)


def field(tau: int, modulus: int | None = None) -> FieldConfig:
    if modulus is None:
        modulus = DEFAULT_MODULI[tau]
    return FieldConfig(tau, modulus)


def ff_add(cfg: FieldConfig, x: int, y: int) -> int:
    return x ^ y


def ff_mul(cfg: FieldConfig, x: int, y: int) -> int:
    return _poly_mulmod(x, y, cfg.modulus, cfg.tau)


def ff_pow(cfg: FieldConfig, x: int, e: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = ff_mul(cfg, r, x)
        x = ff_mul(cfg, x, x)
        e >>= 1
    return r


def ff_inv(cfg: FieldConfig, x: int) -> int:
    if x == 0:
        raise ZeroDivisionError("inverse of 0 in the residue field")
    # x^(2^tau - 2); the group has order 2^tau - 1
    return ff_pow(cfg, x, cfg.order - 2)


def ff_sqrt(cfg: FieldConfig, x: int) -> int:
    """Unique square root: the inverse of the Frobenius, x^(2^(tau-1))."""
    return ff_pow(cfg, x, 1 << (cfg.tau - 1))


def ff_trace(cfg: FieldConfig, x: int) -> int:
    """Absolute trace to F_2: sum of x^(2^i) for i < tau.  Returns 0 or 1."""
    acc, p = 0, x
    for _ in range(cfg.tau):
        acc ^= p
        p = ff_mul(cfg, p, p)
    if acc not in (0, 1):
        raise AssertionError(f"trace landed outside F_2: {acc}")
    return acc


def ff_artin_schreier_root(cfg: FieldConfig, u: int) -> int | None:
    """Solve c^2 + c = u in the residue field; None iff trace(u) = 1.

    The map c -> c^2 + c is F_2-linear with image the trace-zero hyperplane,
    so for tau <= 16 a direct scan is cheap and needs no linear algebra.
    """
    if ff_trace(cfg, u) == 1:
        return None
    for c in cfg.elements():
        if ff_mul(cfg, c, c) ^ c == u:
            return c
    raise AssertionError("trace-zero element with no Artin-Schreier root")
