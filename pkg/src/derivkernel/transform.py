"""Changes of variables substituted directly into curve equations.

This is the ground-truth side of every invariance check: a map
``x -> alpha*x + beta*y + b, y -> gamma*x + delta*y + a`` is substituted
into the curve polynomial, the result is expanded and re-read in the
family's coefficient convention.  Group parameters are ordinary polynomial
variables, so identities are proven for all parameter values at once.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import Expr, Polynomial, RationalFunction, VarSet, as_fraction, parse_polynomial, rf_equal
from .algebra.parser import parse_expression
from .curves import HyperCoeffSpace, Specialization, TernaryCoeffSpace, curve_specialization
from .errors import ParseError, ShapeError, VarSetMismatchError
from .invariants import HyperCurve

XY = ("x", "y")


@dataclass(frozen=True)
class AffineMap2:
    """Images of x and y, affine in x, y with coefficients in the parameters."""

    x_image: Polynomial
    y_image: Polynomial

    def __post_init__(self) -> None:
        vs = self.x_image.varset
        if self.y_image.varset.names != vs.names or vs.names[-2:] != XY:
            raise VarSetMismatchError("map images must share a varset ending in (x, y)")
        for img in (self.x_image, self.y_image):
            if any(e[-2] + e[-1] > 1 for e, _ in img.terms()):
                raise ShapeError(f"{img} is not affine in x, y")

    @property
    def varset(self) -> VarSet:
        return self.x_image.varset

    @property
    def params(self) -> tuple[str, ...]:
        return self.varset.names[:-2]

    @classmethod
    def _build(cls, x_text: str, y_text: str) -> AffineMap2:
        idents = set()
        for t in (x_text, y_text):
            idents |= parse_expression(t, allow_division=False).identifiers()
        vs = VarSet(tuple(sorted(idents - set(XY))) + XY)
        return cls(parse_polynomial(x_text, vs), parse_polynomial(y_text, vs))

    @classmethod
    def parse(cls, text: str, bindings: Mapping[str, object] | None = None) -> AffineMap2:
        """Read ``"x->alpha*x+b, y->y"``; a missing image defaults to the identity."""
        images = {"x": "x", "y": "y"}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "->" not in part:
                raise ParseError(f"expected 'x->...' or 'y->...', got {part!r}")
            lhs, rhs = (s.strip() for s in part.split("->", 1))
            if lhs not in images:
                raise ParseError(f"can only map x and y, got {lhs!r}")
            images[lhs] = rhs
        m = cls._build(images["x"], images["y"])
        return m.bind(bindings) if bindings else m

    @classmethod
    def from_parts(cls, alpha=1, beta=0, b=0, gamma=0, delta=1, a=0) -> AffineMap2:
        """x -> alpha*x + beta*y + b, y -> gamma*x + delta*y + a; strings become parameters."""

        def s(v) -> str:
            return v if isinstance(v, str) else f"({as_fraction(v)})"

        return cls._build(f"{s(alpha)}*x + {s(beta)}*y + {s(b)}", f"{s(gamma)}*x + {s(delta)}*y + {s(a)}")

    def bind(self, values: Mapping[str, object]) -> AffineMap2:
        consts = {k: as_fraction(v) for k, v in values.items() if k in self.params}
        vs = self.varset.without(consts)
        return AffineMap2(self.x_image.substitute(consts, vs), self.y_image.substitute(consts, vs))

    def lifted(self, varset: VarSet) -> AffineMap2:
        return AffineMap2(self.x_image.lift(varset), self.y_image.lift(varset))

    def followed_by(self, other: AffineMap2) -> AffineMap2:
        """Map m with F o m == (F o self) o other."""
        vs = VarSet(tuple(dict.fromkeys(self.params + other.params))).extend(XY)
        s, o = self.lifted(vs), other.lifted(vs)
        sub = {"x": o.x_image, "y": o.y_image}
        return AffineMap2(s.x_image.substitute(sub, vs), s.y_image.substitute(sub, vs))

    def __str__(self) -> str:
        return f"x->{self.x_image}, y->{self.y_image}"


def _base_varset(space, coeffs: Mapping | None) -> VarSet:
    if coeffs is None:
        return space.varset
    for v in coeffs.values():
        if isinstance(v, Polynomial):
            return v.varset
    return VarSet(())


def _lift_value(v, vs: VarSet) -> Polynomial:
    if isinstance(v, Polynomial):
        return v.lift(vs)
    return vs.const(v)


def transform_coeffs(
    space: HyperCoeffSpace | TernaryCoeffSpace | Specialization,
    coeffs: Mapping[str, Polynomial | int | Fraction] | None,
    amap: AffineMap2,
) -> dict[str, Polynomial]:
    """Coefficients of the transformed curve as polynomials in (coefficients, parameters).

    ``coeffs`` gives the value of every free coefficient (None means the
    symbolic variables themselves).  For a Specialization the pinned
    coefficients take their pinned values and must come back unchanged.
    """
    pins: dict[str, Fraction] = {}
    if isinstance(space, Specialization):
        pins = dict(space.pins)
        base = space.varset if coeffs is None else _base_varset(space, coeffs)
        ring = space.space
    else:
        base = _base_varset(space, coeffs)
        ring = space
    if set(XY) & set(base.names):
        raise VarSetMismatchError("coefficient variables may not be named x or y")
    result_vs = base.extend(amap.params)
    work = result_vs.extend(XY)
    x, y = work.var("x"), work.var("y")

    def value(name: str) -> Polynomial:
        if name in pins:
            return work.const(pins[name])
        if coeffs is None:
            return work.var(name)
        if name not in coeffs:
            raise VarSetMismatchError(f"no value given for coefficient {name!r}")
        return _lift_value(coeffs[name], work)

    if isinstance(ring, HyperCoeffSpace):
        d = ring.d
        curve = y**2 - sum((value(f"a{i}") * x ** (d - i) * comb(d, i) for i in range(d + 1)), work.zero())
    else:
        d = ring.d
        curve = work.zero()
        for i, j in ring.indices:
            curve = curve + value(ring.name(i, j)) * x ** (d - i - j) * y**i * ring.multinomial(i, j)

    sub = {"x": amap.x_image.lift(work), "y": amap.y_image.lift(work)}
    moved = curve.substitute(sub, work)

    n = len(result_vs)
    by_xy: dict[tuple[int, int], dict] = {}
    for exps, c in moved.terms():
        by_xy.setdefault(exps[n:], {})[exps[:n]] = c
    coeff_of = {key: Polynomial(result_vs, terms) for key, terms in by_xy.items()}

    out: dict[str, Polynomial] = {}
    if isinstance(ring, HyperCoeffSpace):
        lead = coeff_of.pop((0, 2), result_vs.zero())
        if lead != result_vs.one():
            raise ShapeError(f"y^2 coefficient becomes {lead}; the map leaves the family y^2 = f(x)")
        for i in range(d + 1):
            out[f"a{i}"] = -coeff_of.pop((d - i, 0), result_vs.zero()) / comb(d, i)
    else:
        for i, j in ring.indices:
            name = ring.name(i, j)
            val = coeff_of.pop((d - i - j, i), result_vs.zero()) / ring.multinomial(i, j)
            if name in pins:
                if val != pins[name]:
                    raise ShapeError(f"pinned coefficient {name} becomes {val}")
            else:
                out[name] = val
    leftover = {k: v for k, v in coeff_of.items() if not v.is_zero()}
    if leftover:
        (px, py), v = next(iter(leftover.items()))
        raise ShapeError(f"residual coefficient {v} on x^{px}*y^{py} outside the family")
    return out


def translation_varset(d: int) -> VarSet:
    return HyperCoeffSpace(d).varset.extend(("alpha", "b"))


def translation_formula(d: int, i: int) -> Polynomial:
    """alpha^(d-i) * sum_k C(i,k) b^k a_{i-k}: effect of x -> alpha*x + b on a_i."""
    if not 0 <= i <= d:
        raise ValueError(f"index {i} out of range for degree {d}")
    vs = translation_varset(d)
    alpha, b = vs.var("alpha"), vs.var("b")
    s = sum((vs.var(f"a{i - k}") * b**k * comb(i, k) for k in range(i + 1)), vs.zero())
    return alpha ** (d - i) * s


def transform_hyper_curve(c: HyperCurve, amap: AffineMap2) -> HyperCurve:
    """Numeric curve transformed by a map without free parameters."""
    if amap.params:
        raise ValueError(f"map still has symbolic parameters {amap.params}")
    space = HyperCoeffSpace(c.d)
    out = transform_coeffs(space, c.assignment(), amap)
    return HyperCurve(c.d, tuple(out[f"a{i}"].constant_value() for i in range(c.d + 1)))


HYPER_FAMILIES = {
    "translations": "x->x+b",
    "scalings": "x->alpha*x",
    "affine_x": "x->alpha*x+b",
}
TERNARY_FAMILIES = {
    "case_i": ("x->alpha*x+beta*y+b, y->gamma*x+delta*y+a", "i"),
    "case_ii": ("x->alpha*x+b, y->gamma*x+delta*y+a", "ii"),
    "cprime": ("x->x+a, y->y+b", "cprime-g0"),
}
FAMILIES = tuple(HYPER_FAMILIES) + tuple(TERNARY_FAMILIES)


def family_space(family: str, d: int) -> HyperCoeffSpace | Specialization:
    """The coefficient space on which a family acts (pinned where the family is normalized)."""
    if family in HYPER_FAMILIES:
        return HyperCoeffSpace(d)
    if family in TERNARY_FAMILIES:
        return curve_specialization(d, TERNARY_FAMILIES[family][1])
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def family_map(family: str) -> AffineMap2:
    if family in HYPER_FAMILIES:
        return AffineMap2.parse(HYPER_FAMILIES[family])
    if family in TERNARY_FAMILIES:
        return AffineMap2.parse(TERNARY_FAMILIES[family][0])
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def check_invariance(phi, family: str, space) -> bool:
    """phi(transformed coefficients) == phi(coefficients) identically in all parameters.

    ``space`` is a degree, a coefficient space, or a Specialization whose
    pins replace the family's default normalization.  phi may be a
    Polynomial, RationalFunction, or an unexpanded Expr over the free
    variables.
    """
    if isinstance(space, int):
        d = space
    else:
        wants = HyperCoeffSpace if family in HYPER_FAMILIES else (TernaryCoeffSpace, Specialization)
        if not isinstance(space, wants):
            raise VarSetMismatchError(f"family {family!r} does not act on {type(space).__name__}")
        d = space.space.d if isinstance(space, Specialization) else space.d
    fspace = space if isinstance(space, Specialization) else family_space(family, d)
    free = fspace.varset
    amap = family_map(family)
    moved = transform_coeffs(fspace, None, amap)
    ext = free.extend(amap.params)
    if isinstance(phi, Expr):
        unknown = phi.identifiers() - set(free.names)
        if unknown:
            raise VarSetMismatchError(f"expression uses variables outside the family: {sorted(unknown)}")
        env_new = dict(moved)
        env_old = {n: ext.var(n) for n in free.names}
        new = RationalFunction.coerce(_as_value(phi.evaluate(env_new, ext), ext), ext)
        old = RationalFunction.coerce(_as_value(phi.evaluate(env_old, ext), ext), ext)
        return rf_equal(new, old)
    phi = RationalFunction.coerce(phi)
    if phi.varset.names != free.names:
        raise VarSetMismatchError(f"invariant must live on {free.names}, got {phi.varset.names}")
    new = phi.substitute(moved, ext)
    return rf_equal(new, phi.lift(ext))


def _as_value(v, vs: VarSet):
    if isinstance(v, Fraction):
        return vs.const(v)
    return v
