"""Coefficient spaces of curve families and the derivations acting on them.

Two families are modelled:

* hyperelliptic ``y^2 = sum_i C(d, i) a_i x^(d-i)`` on variables ``a0..a{d}``;
* ternary forms ``u = sum_{i+j<=d} d!/(i! j! (d-i-j)!) a_{i,j} x^(d-i-j) y^i z^j``
  on variables ``a{i}_{j}``; affine curves are the chart ``z = 1``.

The gl3 derivations are not transcribed from tables: each one is induced
from a linear vector field on (x, y, z) by requiring that the combined
derivation kills the generic form ``u``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

from .algebra import Polynomial, VarSet, as_fraction, parse_polynomial
from .derivations import Derivation, specialize
from .errors import MathDomainError

XYZ = VarSet(("x", "y", "z"))


# -- hyperelliptic family ----------------------------------------------------------


@dataclass(frozen=True)
class HyperCoeffSpace:
    """Coefficients a0..a{d} of y^2 = sum C(d,i) a_i x^(d-i)."""

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise MathDomainError("degree must be at least 1")

    @cached_property
    def varset(self) -> VarSet:
        return VarSet(tuple(f"a{i}" for i in range(self.d + 1)))

    def var(self, i: int) -> Polynomial:
        return self.varset.var(f"a{i}")

    def weight(self, i: int) -> int:
        return self.d - i

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(self.d - i for i in range(self.d + 1))


def weitzenbock(d: int) -> Derivation:
    """Basic Weitzenboeck derivation a_i -> i*a_{i-1}."""
    space = HyperCoeffSpace(d)
    return Derivation(space.varset, {f"a{i}": space.var(i - 1).scale(i) for i in range(1, d + 1)}, f"D{d}")


def euler_weight(d: int) -> Derivation:
    """Diagonal derivation a_i -> (d-i)*a_i whose eigenvalues are weights."""
    space = HyperCoeffSpace(d)
    return Derivation(space.varset, {f"a{i}": space.var(i).scale(d - i) for i in range(d + 1)}, f"E{d}")


def monomial_weight(m, d: int) -> int:
    """Weight sum_i m_i*(d-i) of a monomial (exponent tuple or one-term polynomial)."""
    if isinstance(m, Polynomial):
        if len(m) != 1:
            raise ValueError(f"{m} is not a monomial")
        m = m.terms()[0][0]
    if len(m) != d + 1:
        raise ValueError(f"exponent vector {m} does not match degree {d}")
    return sum(k * (d - i) for i, k in enumerate(m))


# -- ternary forms -------------------------------------------------------------------


@dataclass(frozen=True)
class TernaryCoeffSpace:
    """Coefficients a_{i,j} (i+j <= d) of a ternary form of degree d."""

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise MathDomainError("degree must be at least 1")

    @staticmethod
    def name(i: int, j: int) -> str:
        return f"a{i}_{j}"

    @cached_property
    def indices(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i in range(self.d + 1) for j in range(self.d + 1 - i))

    @cached_property
    def varset(self) -> VarSet:
        return VarSet(tuple(self.name(i, j) for i, j in self.indices))

    def var(self, i: int, j: int) -> Polynomial:
        return self.varset.var(self.name(i, j))

    def has(self, i: int, j: int) -> bool:
        return i >= 0 and j >= 0 and i + j <= self.d

    def multinomial(self, i: int, j: int) -> int:
        d = self.d
        return factorial(d) // (factorial(i) * factorial(j) * factorial(d - i - j))

    @cached_property
    def form_varset(self) -> VarSet:
        return self.varset.extend(XYZ.names)

    def generic_form(self) -> Polynomial:
        """The form u over coefficients plus x, y, z."""
        vs = self.form_varset
        n = len(self.varset)
        terms = {}
        for k, (i, j) in enumerate(self.indices):
            exps = [0] * (n + 3)
            exps[k] = 1
            exps[n], exps[n + 1], exps[n + 2] = self.d - i - j, i, j
            terms[tuple(exps)] = self.multinomial(i, j)
        return Polynomial(vs, terms)

    def grading(self, which: str) -> dict[str, int]:
        """Eigenvalues of E1/E2/E3 on the variables: powers of x, y, z."""
        pick = {"E1": lambda i, j: self.d - i - j, "E2": lambda i, j: i, "E3": lambda i, j: j}[which]
        return {self.name(i, j): pick(i, j) for i, j in self.indices}


@dataclass(frozen=True)
class VectorField3:
    """Linear vector field p*d/dx + q*d/dy + r*d/dz on (x, y, z)."""

    components: tuple[Polynomial, Polynomial, Polynomial]

    def __post_init__(self) -> None:
        for c in self.components:
            if c.varset.names != XYZ.names:
                raise ValueError("vector field components must be polynomials in x, y, z")

    @classmethod
    def from_text(cls, dx: str, dy: str, dz: str) -> VectorField3:
        return cls(tuple(parse_polynomial(t, XYZ) for t in (dx, dy, dz)))

    def is_linear(self) -> bool:
        return all(c.is_zero() or (c.is_homogeneous() and c.total_degree() == 1) for c in self.components)


# -y d/dx etc.; names as used for the induced coefficient derivations.
GL3_FIELDS: dict[str, tuple[str, str, str]] = {
    "D1": ("-y", "0", "0"),
    "D2": ("0", "-z", "0"),
    "D3": ("-z", "0", "0"),
    "DH1": ("0", "-x", "0"),
    "DH2": ("0", "0", "-y"),
    "DH3": ("0", "0", "-x"),
    "E1": ("-x", "0", "0"),
    "E2": ("0", "-y", "0"),
    "E3": ("0", "0", "-z"),
}


def _lift_field(vf: VectorField3, vs: VarSet) -> dict[str, Polynomial]:
    return {n: c.lift(vs) for n, c in zip(XYZ.names, vf.components)}


def induce_coefficient_derivation(vf: VectorField3, space: TernaryCoeffSpace, name: str | None = None) -> Derivation:
    """The coefficient derivation D with (D + vf)(u) = 0 for the generic form u.

    vf(u) is collected by monomials in x, y, z; the coefficient of the
    monomial belonging to a_{i,j} must be cancelled by multinomial(i,j)*D(a_{i,j}).
    """
    if not vf.is_linear():
        raise MathDomainError("only linear vector fields preserve the space of forms")
    vs = space.form_varset
    u = space.generic_form()
    flow = Derivation(vs, _lift_field(vf, vs))
    moved = flow.apply(u)
    n = len(space.varset)
    by_monomial: dict[tuple[int, int, int], dict] = {}
    for exps, c in moved.terms():
        key = exps[n:]
        by_monomial.setdefault(key, {})[exps[:n] + (0, 0, 0)] = c
    images = {}
    for key, coeff_terms in by_monomial.items():
        px, py, pz = key
        if px + py + pz != space.d:
            raise MathDomainError(f"vector field moves the form off degree {space.d}")
        i, j = py, pz
        coeff = Polynomial(vs, coeff_terms).substitute({}, space.varset)
        images[space.name(i, j)] = coeff.scale(Fraction(-1, space.multinomial(i, j)))
    return Derivation(space.varset, images, name)


def total_derivation(D: Derivation, vf: VectorField3, space: TernaryCoeffSpace) -> Derivation:
    """D on the coefficients combined with vf on x, y, z."""
    vs = space.form_varset
    images = {v: img.lift(vs) for v, img in D.images.items()}
    images.update(_lift_field(vf, vs))
    return Derivation(vs, images, D.name)


def annihilates_form(D: Derivation, vf: VectorField3, space: TernaryCoeffSpace) -> bool:
    return total_derivation(D, vf, space).apply(space.generic_form()).is_zero()


def gl3_derivations(d: int) -> dict[str, Derivation]:
    """The nine induced derivations D1, D2, D3, DH1, DH2, DH3, E1, E2, E3."""
    space = TernaryCoeffSpace(d)
    return {
        name: induce_coefficient_derivation(VectorField3.from_text(*texts), space, name)
        for name, texts in GL3_FIELDS.items()
    }


# -- curve families and specializations -----------------------------------------------


@dataclass(frozen=True)
class Specialization:
    """Pinned coefficients of a ternary space with the remaining free variables."""

    space: TernaryCoeffSpace
    pins: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        pins = {k: as_fraction(v) for k, v in dict(self.pins).items()}
        for k in pins:
            if k not in self.space.varset:
                raise MathDomainError(f"cannot pin {k!r}: not a coefficient of degree {self.space.d}")
        object.__setattr__(self, "pins", pins)

    @cached_property
    def varset(self) -> VarSet:
        return self.space.varset.without(self.pins)

    @property
    def free(self) -> tuple[str, ...]:
        return self.varset.names

    def apply(self, D: Derivation) -> Derivation:
        return specialize(D, self.pins) if self.pins else D

    def to_json(self) -> dict:
        return {"d": self.space.d, "pins": {k: str(v) for k, v in self.pins.items()}, "free": list(self.free)}


CASE_ALIASES = {
    "general_i": "i",
    "general_ii": "ii",
    "cprime_full": "cprime",
    "cprime_translations": "cprime-g0",
    "cprime_g0": "cprime-g0",
}

CASE_DERIVATIONS: dict[str, tuple[str, ...]] = {
    "i": ("D1", "D2", "DH1", "E1", "E2"),
    "ii": ("D2", "D3", "DH1", "E1", "E2"),
    "cprime": ("D2", "D3", "DH1", "E1", "E2"),
    "cprime-g0": ("D2", "D3"),
    "full": tuple(GL3_FIELDS),
}


def canonical_case(case: str) -> str:
    case = CASE_ALIASES.get(case, case)
    if case not in CASE_DERIVATIONS:
        raise ValueError(f"unknown curve case {case!r}; expected one of {sorted(CASE_DERIVATIONS)}")
    return case


def cprime_support_pins(d: int) -> dict[str, Fraction]:
    """Zero pins cutting out the C'_d family: only a_{0,*}, a_{1,*} and a_{2,d-2} survive."""
    if d < 2:
        raise MathDomainError("the C'_d family needs d >= 2")
    space = TernaryCoeffSpace(d)
    return {space.name(i, j): Fraction(0) for i, j in space.indices if i >= 2 and (i, j) != (2, d - 2)}


def curve_specialization(d: int, case: str) -> Specialization:
    case = canonical_case(case)
    space = TernaryCoeffSpace(d)
    if case in ("i", "full"):
        pins = {}
    elif case == "ii":
        pins = {space.name(d, 0): Fraction(0)}
    elif case == "cprime":
        pins = cprime_support_pins(d)
    else:
        # normalized C'_d: x^d coefficient 1 and y^2 coefficient -1 (opposite sides of the equation)
        pins = cprime_support_pins(d)
        pins[space.name(0, 0)] = Fraction(1)
        pins[space.name(2, d - 2)] = Fraction(-1)
    return Specialization(space, pins)


def curve_derivation_set(d: int, case: str) -> list[Derivation]:
    """Derivations whose joint kernel is the invariant field for the given case."""
    case = canonical_case(case)
    spec = curve_specialization(d, case)
    gl3 = gl3_derivations(d)
    return [spec.apply(gl3[name]) for name in CASE_DERIVATIONS[case]]


def published_bound(d: int, case: str) -> int | None:
    """Transcendence-degree bound stated for the family, where one is stated."""
    case = canonical_case(case)
    if case == "cprime":
        return 2 * d - 3
    if case == "full":
        return max((d + 1) * (d + 2) // 2 - 7, 0)
    return None
