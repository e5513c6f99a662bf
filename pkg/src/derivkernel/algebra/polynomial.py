"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is a map from dense exponent tuples (one slot per
variable of its :class:`VarSet`) to nonzero coefficients.  Coefficients are
kept as ``int`` whenever they are integral and as :class:`fractions.Fraction`
otherwise; both compare and hash consistently, so the term map is canonical.

Example:
    >>> vs = VarSet(("a0", "a1", "a2"))
    >>> a0, a1, a2 = vs.gens()
    >>> z2 = a0 * a2 - a1**2
    >>> str(z2)
    'a0*a2 - a1^2'
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from operator import add
from typing import Union

from ..errors import MissingVariableError, VarSetMismatchError

Number = Union[int, Fraction]
Exps = tuple[int, ...]


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _norm(c: Number) -> Number:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class VarSet:
    """An ordered, duplicate-free tuple of variable names."""

    names: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"variable {name!r} is not in {self.names}") from None

    def var(self, name: str) -> Polynomial:
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return Polynomial._raw(self, {tuple(exps): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(n) for n in self.names]

    def zero(self) -> Polynomial:
        return Polynomial._raw(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, value) -> Polynomial:
        c = _norm(as_fraction(value))
        if c == 0:
            return self.zero()
        return Polynomial._raw(self, {(0,) * len(self.names): c})

    def extend(self, names: Iterable[str]) -> VarSet:
        extra = [n for n in names if n not in self._index]
        return VarSet(self.names + tuple(dict.fromkeys(extra)))

    def without(self, names: Iterable[str]) -> VarSet:
        drop = set(names)
        return VarSet(tuple(n for n in self.names if n not in drop))


class Polynomial:
    """Immutable sparse polynomial over a :class:`VarSet`."""

    __slots__ = ("varset", "_terms", "_hash")

    def __init__(self, varset: VarSet, terms: Mapping[Exps, Number] | None = None):
        clean: dict[Exps, Number] = {}
        n = len(varset)
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {n} variables")
            c = _norm(as_fraction(c))
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
        self.varset = varset
        self._terms = {e: _norm(c) for e, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, varset: VarSet, terms: dict[Exps, Number]) -> Polynomial:
        obj = cls.__new__(cls)
        obj.varset = varset
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, varset: VarSet, exps: Exps, coeff: Number = 1) -> Polynomial:
        return cls(varset, {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[Exps, Fraction]]:
        """Terms in canonical (descending lexicographic) order."""
        return [(e, Fraction(self._terms[e])) for e in sorted(self._terms, reverse=True)]

    def term_map(self) -> dict[Exps, Number]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; raises if not constant."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(next(iter(self._terms.values()), 0))

    def coefficient(self, exps: Exps) -> Fraction:
        return Fraction(self._terms.get(tuple(exps), 0))

    def total_degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.varset.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def variables(self) -> list[str]:
        """Names of variables that actually occur, in varset order."""
        used = [False] * len(self.varset)
        for e in self._terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return [n for n, u in zip(self.varset.names, used) if u]

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer coefficients."""
        from math import gcd, lcm

        if not self._terms:
            return Fraction(0)
        cs = [Fraction(c) for c in self._terms.values()]
        num = 0
        den = 1
        for c in cs:
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: Polynomial) -> None:
        if other.varset is not self.varset and other.varset.names != self.varset.names:
            raise VarSetMismatchError(
                f"variable sets differ: {self.varset.names} vs {other.varset.names}"
            )

    def _coerce(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if _is_scalar(other):
            return self.varset.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return Polynomial._raw(self.varset, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.varset, {e: -c for e, c in self._terms.items()})

    def __pos__(self) -> Polynomial:
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Number) -> Polynomial:
        c = _norm(as_fraction(c))
        if c == 0:
            return self.varset.zero()
        if c == 1:
            return self
        return Polynomial._raw(self.varset, {e: _norm(v * c) for e, v in self._terms.items()})

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exps, Number] = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Polynomial._raw(self.varset, {e: _norm(c) for e, c in out.items() if c})

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = self.varset.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / as_fraction(other))
        if isinstance(other, Polynomial):
            self._check(other)
            if other.is_constant():
                return self / other.constant_value()
            from .ratfunc import RationalFunction

            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            from .ratfunc import RationalFunction

            return RationalFunction(self.varset.const(other), self)
        return NotImplemented

    # -- calculus and substitution -----------------------------------------

    def diff(self, name: str) -> Polynomial:
        i = self.varset.index(name)
        out: dict[Exps, Number] = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1 :]] = c * k
        return Polynomial._raw(self.varset, out)

    def evaluate(self, assignment: Mapping[str, Number]) -> Fraction:
        """Exact value at a rational point; every occurring variable must be assigned."""
        values = []
        for name in self.varset.names:
            values.append(assignment.get(name))
        for missing in self.variables():
            if values[self.varset.index(missing)] is None:
                raise MissingVariableError(f"no value assigned to {missing!r}")
        vals = [as_fraction(v) if v is not None else None for v in values]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = Fraction(c)
            for v, k in zip(vals, e):
                if k:
                    t *= v**k
            total += t
        return total

    def substitute(self, mapping: Mapping[str, Polynomial | Number], varset: VarSet | None = None) -> Polynomial:
        """Ring homomorphism sending mapped variables to the given values.

        Unmapped variables are carried over by name and must exist in the
        target varset.  The target defaults to the varset of the first
        polynomial value, or to this polynomial's own varset.
        """
        if varset is None:
            varset = next((v.varset for v in mapping.values() if isinstance(v, Polynomial)), self.varset)
        n = len(varset)
        const_map: dict[int, Fraction] = {}
        poly_map: dict[int, Polynomial] = {}
        keep: dict[int, int] = {}
        for i, name in enumerate(self.varset.names):
            if name in mapping:
                value = mapping[name]
                if isinstance(value, Polynomial):
                    if value.varset.names != varset.names:
                        raise VarSetMismatchError(f"image of {name!r} is not on the target varset")
                    if value.is_constant():
                        const_map[i] = value.constant_value()
                    else:
                        poly_map[i] = value
                else:
                    const_map[i] = as_fraction(value)
            elif name in varset:
                keep[i] = varset.index(name)
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in powers:
                powers[key] = poly_map[i] if k == 1 else power(i, k - 1) * poly_map[i]
            return powers[key]

        acc: dict[Exps, Number] = {}
        for e, c in self._terms.items():
            coeff: Number = c
            target = [0] * n
            factors: list[Polynomial] = []
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in const_map:
                    coeff = coeff * const_map[i] ** k
                elif i in poly_map:
                    factors.append(power(i, k))
                elif i in keep:
                    target[keep[i]] += k
                else:
                    raise MissingVariableError(
                        f"variable {self.varset.names[i]!r} has no image in {varset.names}"
                    )
            if coeff == 0:
                continue
            term = Polynomial._raw(varset, {tuple(target): _norm(coeff)})
            for f in factors:
                term = term * f
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
        return Polynomial._raw(varset, {e: _norm(c) for e, c in acc.items() if c})

    def lift(self, varset: VarSet) -> Polynomial:
        """Re-express on a varset containing every variable that occurs here."""
        if varset.names == self.varset.names:
            return self
        return self.substitute({}, varset)

    # -- comparison and printing -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.varset.names == other.varset.names and self._terms == other._terms
        if _is_scalar(other):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.varset.names, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def to_json(self) -> dict:
        names = self.varset.names
        return {
            "vars": list(names),
            "terms": [
                {"coeff": str(c), "exps": {names[i]: k for i, k in enumerate(e) if k}}
                for e, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, payload: Mapping, varset: VarSet | None = None) -> Polynomial:
        vs = varset or VarSet(tuple(payload["vars"]))
        terms: dict[Exps, Fraction] = {}
        for t in payload["terms"]:
            exps = [0] * len(vs)
            for name, k in t.get("exps", {}).items():
                exps[vs.index(name)] = int(k)
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + as_fraction(t["coeff"])
        return cls(vs, terms)


def _format_monomial(names: tuple[str, ...], exps: Exps) -> str:
    parts = []
    for name, k in zip(names, exps):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form; re-parses to an equal polynomial."""
    if p.is_zero():
        return "0"
    pieces = []
    for idx, (exps, c) in enumerate(p.terms()):
        mono = _format_monomial(p.varset.names, exps)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if idx == 0:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)
