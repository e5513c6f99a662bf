"""Closed-form invariants of y^2 = f(x) and the moduli of monic curves.

``z_i`` generates the kernel of the Weitzenboeck derivation together with
``a0``; dividing ``z_i^d`` by the matching power of ``a0`` gives weight-zero
generators of the invariant field under x -> alpha*x + b.  For monic curves
the values of ``z_2..z_d`` classify curves up to translation, and the
``a1 = 0`` representative is the canonical section.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import Polynomial, RationalFunction, as_fraction
from .algebra.parser import BinOp, Expr, Leaf, Pow, Var
from .curves import HyperCoeffSpace
from .errors import MathDomainError


def z_invariant(d: int, i: int) -> Polynomial:
    """z_i = sum_{k<=i-2} (-1)^k C(i,k) a_{i-k} a1^k a0^(i-k-1) + (i-1)(-1)^(i+1) a1^i."""
    if not 2 <= i <= d:
        raise MathDomainError(f"z_i needs 2 <= i <= d, got i={i}, d={d}")
    space = HyperCoeffSpace(d)
    a0, a1 = space.var(0), space.var(1)
    z = space.varset.zero()
    for k in range(i - 1):
        z = z + space.var(i - k) * a1**k * a0 ** (i - k - 1) * ((-1) ** k * comb(i, k))
    return z + a1**i * ((i - 1) * (-1) ** (i + 1))


def z_invariants(d: int) -> list[Polynomial]:
    return [z_invariant(d, i) for i in range(2, d + 1)]


def rational_invariant_generators(d: int) -> list[RationalFunction]:
    """z_i^d / a0^(i(d-1)) for i = 2..d."""
    if d < 2:
        raise MathDomainError("the invariant field is only generated for d >= 2")
    a0 = HyperCoeffSpace(d).var(0)
    return [RationalFunction(z_invariant(d, i) ** d, a0 ** (i * (d - 1))) for i in range(2, d + 1)]


def rational_invariant_expressions(d: int) -> list[Expr]:
    """Same generators as unexpanded expression trees (cheap to substitute into)."""
    if d < 2:
        raise MathDomainError("the invariant field is only generated for d >= 2")
    return [
        BinOp("/", Pow(Leaf(z_invariant(d, i)), d), Pow(Var("a0"), i * (d - 1)))
        for i in range(2, d + 1)
    ]


def j_quartic_c3() -> Polynomial:
    """Degree-four factor of the j-invariant denominator for the cubic family."""
    a0, a1, a2, a3 = HyperCoeffSpace(3).varset.gens()
    return 4 * a1**3 * a3 - 6 * a3 * a0 * a1 * a2 - 3 * a1**2 * a2**2 + a3**2 * a0**2 + 4 * a0 * a2**3


def j_invariant_c3() -> RationalFunction:
    """j = 6912 (a0 a2 - a1^2)^3 / (a0^2 T) for y^2 + a0 x^3 + 3a1 x^2 + 3a2 x + a3."""
    a0, a1, a2, _ = HyperCoeffSpace(3).varset.gens()
    return RationalFunction(6912 * (a0 * a2 - a1**2) ** 3, a0**2 * j_quartic_c3())


# -- moduli of monic curves -------------------------------------------------------------


@dataclass(frozen=True)
class HyperCurve:
    """y^2 = sum_i C(d,i) coeffs[i] x^(d-i)."""

    d: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.d + 1:
            raise MathDomainError(f"degree {self.d} curve needs {self.d + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def space(self) -> HyperCoeffSpace:
        return HyperCoeffSpace(self.d)

    def is_monic(self) -> bool:
        return self.coeffs[0] == 1

    def assignment(self) -> dict[str, Fraction]:
        return {f"a{i}": c for i, c in enumerate(self.coeffs)}

    def expanded(self) -> tuple[Fraction, ...]:
        """Plain coefficients of f(x), leading first."""
        return tuple(comb(self.d, i) * c for i, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"d": self.d, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, payload: Mapping | str) -> HyperCurve:
        if isinstance(payload, str):
            payload = json.loads(payload)
        return cls(int(payload["d"]), tuple(as_fraction(c) for c in payload["coeffs"]))


@dataclass(frozen=True)
class ModuliVector:
    """Values (j_2, ..., j_d) of z_2..z_d on a monic curve."""

    d: int
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(as_fraction(v) for v in self.values)
        if len(values) != self.d - 1:
            raise MathDomainError(f"degree {self.d} moduli vector needs {self.d - 1} entries")
        object.__setattr__(self, "values", values)

    def to_json(self) -> dict:
        return {"d": self.d, "j": [str(v) for v in self.values]}

    @classmethod
    def from_json(cls, payload: Mapping | str) -> ModuliVector:
        if isinstance(payload, str):
            payload = json.loads(payload)
        return cls(int(payload["d"]), tuple(as_fraction(v) for v in payload["j"]))


def _require_monic(c: HyperCurve) -> None:
    if not c.is_monic():
        raise MathDomainError(f"moduli are defined for monic curves (a0 = 1), got a0 = {c.coeffs[0]}")


def moduli_vector(c: HyperCurve) -> ModuliVector:
    _require_monic(c)
    point = c.assignment()
    return ModuliVector(c.d, tuple(z.evaluate(point) for z in z_invariants(c.d)))


def curve_from_moduli(m: ModuliVector) -> HyperCurve:
    """The monic representative with a1 = 0 and a_i = j_i."""
    return HyperCurve(m.d, (Fraction(1), Fraction(0)) + m.values)


def translate(c: HyperCurve, b) -> HyperCurve:
    """Curve obtained by substituting x -> x + b (via the substitution oracle)."""
    from .transform import AffineMap2, transform_hyper_curve

    return transform_hyper_curve(c, AffineMap2.from_parts(b=b))


def normalize(c: HyperCurve) -> tuple[HyperCurve, Fraction]:
    """Translate so that a1 = 0; returns the new curve and the shift b = -a1."""
    _require_monic(c)
    b = -c.coeffs[1]
    out = translate(c, b)
    if out.coeffs[1] != 0:  # pragma: no cover - guarded by the oracle tests
        raise AssertionError("translation failed to clear a1")
    return out, b


def isomorphic(c1: HyperCurve, c2: HyperCurve) -> Fraction | None:
    """Shift b with translate(c1, b) == c2, or None if the moduli differ."""
    if c1.d != c2.d:
        raise MathDomainError(f"degree mismatch: {c1.d} vs {c2.d}")
    if moduli_vector(c1) != moduli_vector(c2):
        return None
    b = c2.coeffs[1] - c1.coeffs[1]
    if translate(c1, b) != c2:  # pragma: no cover - equal moduli force this
        raise AssertionError("equal moduli but translation does not match")
    return b

