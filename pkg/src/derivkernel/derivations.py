"""Derivations of polynomial and rational coefficient algebras.

A derivation is fixed by the images of the variables and extended by the
Leibniz rule, ``D(p) = sum_v dp/dv * D(v)``.  Kernels are unaffected by
rescaling a derivation, which is why several comparisons here are made
only up to a global sign.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from fractions import Fraction

from .algebra import Polynomial, RationalFunction, VarSet, as_fraction, parse_polynomial
from .errors import InconsistentSpecializationError, VarSetMismatchError


class Derivation:
    """Linear Leibniz map on ``k[varset]`` given by variable images."""

    __slots__ = ("varset", "images", "name")

    def __init__(self, varset: VarSet, images: Mapping[str, Polynomial | str | int | Fraction], name: str | None = None):
        clean: dict[str, Polynomial] = {}
        for var, img in images.items():
            if var not in varset:
                raise VarSetMismatchError(f"{var!r} is not a variable of {varset.names}")
            if isinstance(img, str):
                img = parse_polynomial(img, varset)
            elif not isinstance(img, Polynomial):
                img = varset.const(img)
            elif img.varset.names != varset.names:
                raise VarSetMismatchError(f"image of {var!r} lives on another varset")
            if not img.is_zero():
                clean[var] = img
        self.varset = varset
        self.images = {v: clean[v] for v in varset.names if v in clean}
        self.name = name

    def image(self, var: str) -> Polynomial:
        if var not in self.varset:
            raise VarSetMismatchError(f"{var!r} is not a variable of {self.varset.names}")
        return self.images.get(var, self.varset.zero())

    def _check(self, p) -> None:
        if p.varset.names != self.varset.names:
            raise VarSetMismatchError(
                f"derivation {self.name or ''} acts on {self.varset.names}, got {p.varset.names}"
            )

    def apply(self, p: Polynomial) -> Polynomial:
        self._check(p)
        out = self.varset.zero()
        occurring = set(p.variables())
        for var, img in self.images.items():
            if var in occurring:
                out = out + p.diff(var) * img
        return out

    def apply_rational(self, r: RationalFunction) -> RationalFunction:
        self._check(r)
        return RationalFunction(self.apply(r.num) * r.den - r.num * self.apply(r.den), r.den**2)

    def __call__(self, p):
        if isinstance(p, RationalFunction):
            return self.apply_rational(p)
        return self.apply(p)

    def is_zero(self) -> bool:
        return not self.images

    def renamed(self, name: str | None) -> Derivation:
        return Derivation(self.varset, self.images, name)

    # linear structure
    def __add__(self, other: Derivation) -> Derivation:
        _same(self, other)
        names = dict.fromkeys(list(self.images) + list(other.images))
        return Derivation(self.varset, {v: self.image(v) + other.image(v) for v in names})

    def __neg__(self) -> Derivation:
        return self.scale(-1)

    def __sub__(self, other: Derivation) -> Derivation:
        return self + (-other)

    def scale(self, c) -> Derivation:
        c = as_fraction(c)
        return Derivation(self.varset, {v: img.scale(c) for v, img in self.images.items()}, self.name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.varset.names == other.varset.names and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.varset.names, tuple(self.images.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{v} -> {img}" for v, img in self.images.items())
        return f"Derivation({self.name or '?'}: {body or '0'})"

    def to_json(self) -> dict:
        return {
            "name": self.name or "",
            "vars": list(self.varset.names),
            "images": {v: str(img) for v, img in self.images.items()},
        }

    @classmethod
    def from_json(cls, payload: Mapping | str) -> Derivation:
        if isinstance(payload, str):
            payload = json.loads(payload)
        vs = VarSet(tuple(payload["vars"]))
        return cls(vs, dict(payload.get("images", {})), payload.get("name") or None)


def _same(d1: Derivation, d2: Derivation) -> None:
    if d1.varset.names != d2.varset.names:
        raise VarSetMismatchError(f"derivations act on {d1.varset.names} and {d2.varset.names}")


def apply(D: Derivation, p: Polynomial) -> Polynomial:
    return D.apply(p)


def apply_rational(D: Derivation, r: RationalFunction) -> RationalFunction:
    return D.apply_rational(r)


def commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """The derivation v -> D1(D2(v)) - D2(D1(v))."""
    _same(D1, D2)
    images = {v: D1.apply(D2.image(v)) - D2.apply(D1.image(v)) for v in D1.varset.names}
    return Derivation(D1.varset, images, f"[{D1.name},{D2.name}]" if D1.name and D2.name else None)


def specialize(D: Derivation, pins: Mapping[str, int | Fraction], name: str | None = None) -> Derivation:
    """Restrict D to the locus where the pinned variables take fixed values.

    Every pinned variable must be annihilated on that locus, otherwise the
    flow of D leaves it and there is no induced derivation.
    """
    for var in pins:
        if var not in D.varset:
            raise VarSetMismatchError(f"cannot pin {var!r}: not a variable of {D.varset.names}")
    target = D.varset.without(pins)
    consts = {v: as_fraction(c) for v, c in pins.items()}
    for var in pins:
        residue = D.image(var).substitute(consts, target)
        if not residue.is_zero():
            raise InconsistentSpecializationError(
                f"{D.name or 'derivation'} does not preserve the pinned locus: "
                f"image of {var} becomes {residue}"
            )
    images = {v: D.image(v).substitute(consts, target) for v in target.names}
    return Derivation(target, images, name if name is not None else D.name)


def weight_eigenvalue(E: Derivation, p) -> Fraction | None:
    """lambda with E(p) = lambda * p, or None when p is zero or not an eigenvector."""
    if isinstance(p, RationalFunction):
        ln = weight_eigenvalue(E, p.num)
        ld = weight_eigenvalue(E, p.den)
        if ln is None or ld is None:
            return None
        return ln - ld
    E._check(p)
    if p.is_zero():
        return None
    image = E.apply(p)
    exps, c = p.terms()[0]
    lam = image.coefficient(exps) / c
    return lam if image == p.scale(lam) else None


def in_kernel(Ds: Iterable[Derivation], r) -> bool:
    """True iff every derivation in Ds annihilates r (polynomial or rational function)."""
    for D in Ds:
        if isinstance(r, RationalFunction):
            D._check(r)
            if not (D.apply(r.num) * r.den - r.num * D.apply(r.den)).is_zero():
                return False
        elif not D.apply(r).is_zero():
            return False
    return True


def sign_relation(D1: Derivation, D2: Derivation) -> int | None:
    """+1 if D1 == D2, -1 if D1 == -D2, 0 if both vanish, None otherwise."""
    _same(D1, D2)
    if D1.is_zero() and D2.is_zero():
        return 0
    if D1 == D2:
        return 1
    if D1 == -D2:
        return -1
    return None
