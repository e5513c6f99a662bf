"""Quotients of polynomials, stored unreduced.

Without a multivariate gcd there is no canonical reduced form, so equality
is decided by cross-multiplication and ``RationalFunction`` is unhashable.
"""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction

from ..errors import VarSetMismatchError
from .polynomial import Number, Polynomial, VarSet, _is_scalar, as_fraction, format_polynomial


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | Number | None = None):
        if den is None:
            den = num.varset.one()
        elif _is_scalar(den):
            den = num.varset.const(den)
        if not isinstance(num, Polynomial) or not isinstance(den, Polynomial):
            raise TypeError("numerator and denominator must be polynomials")
        if num.varset.names != den.varset.names:
            raise VarSetMismatchError("numerator and denominator live on different varsets")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @property
    def varset(self) -> VarSet:
        return self.num.varset

    @classmethod
    def coerce(cls, value, varset: VarSet | None = None) -> RationalFunction:
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Polynomial):
            return cls(value)
        if _is_scalar(value) and varset is not None:
            return cls(varset.const(value))
        raise TypeError(f"cannot view {value!r} as a rational function")

    def _other(self, other) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            if other.varset.names != self.varset.names:
                raise VarSetMismatchError(
                    f"variable sets differ: {self.varset.names} vs {other.varset.names}"
                )
            return other
        if isinstance(other, Polynomial):
            if other.varset.names != self.varset.names:
                raise VarSetMismatchError(
                    f"variable sets differ: {self.varset.names} vs {other.varset.names}"
                )
            return RationalFunction(other)
        if _is_scalar(other):
            return RationalFunction(self.varset.const(other))
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.den == self.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> RationalFunction:
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            if self.num.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RationalFunction(self.den**-k, self.num**-k)
        return RationalFunction(self.num**k, self.den**k)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        """True when the denominator is a nonzero constant."""
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.den.is_constant():
            raise ValueError(f"{self} has a nonconstant denominator")
        return self.num / self.den.constant_value()

    def normalized(self) -> RationalFunction:
        """Scale so the denominator is primitive with a positive leading coefficient."""
        c = self.den.content()
        lead = self.den.terms()[0][1]
        if lead < 0:
            c = -c
        return RationalFunction(self.num / c, self.den / c)

    def evaluate(self, assignment: Mapping[str, Number]) -> Fraction:
        d = self.den.evaluate(assignment)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(assignment) / d

    def substitute(self, mapping, varset: VarSet | None = None) -> RationalFunction:
        return RationalFunction(self.num.substitute(mapping, varset), self.den.substitute(mapping, varset))

    def lift(self, varset: VarSet) -> RationalFunction:
        return RationalFunction(self.num.lift(varset), self.den.lift(varset))

    def __eq__(self, other) -> bool:
        o = self._other(other) if isinstance(other, (RationalFunction, Polynomial)) or _is_scalar(other) else None
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        r = self.normalized()
        if r.den.is_constant():
            return format_polynomial(r.num / r.den.constant_value())
        return f"({format_polynomial(r.num)})/({format_polynomial(r.den)})"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"

    def to_json(self) -> dict:
        r = self.normalized()
        return {"num": r.num.to_json(), "den": r.den.to_json()}


def rf_equal(r1, r2) -> bool:
    """Equality in the fraction field: num1*den2 == num2*den1."""
    a = RationalFunction.coerce(r1)
    b = RationalFunction.coerce(r2, a.varset)
    if a.varset.names != b.varset.names:
        raise VarSetMismatchError(f"variable sets differ: {a.varset.names} vs {b.varset.names}")
    return (a.num * b.den - b.num * a.den).is_zero()


__all__ = ["RationalFunction", "rf_equal", "as_fraction"]
