"""Kernels of derivations on finite ansatz spaces, and generator audits.

The ansatz space is spanned by monomials up to a degree bound.  It splits
into cells, one per value of the integer gradings every derivation
respects.  A derivation maps a cell into a single shifted cell, so each
cell's kernel is found independently: stack the derivation matrices and
take an exact nullspace.  Results are re-checked by applying the
derivations directly.
"""

from __future__ import annotations

import os
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .algebra import (
    ExactMatrix,
    Polynomial,
    RationalFunction,
    VarSet,
    solve_in_span,
    sparse_nullspace,
    sparse_rank,
)
from .curves import (
    HyperCoeffSpace,
    TernaryCoeffSpace,
    canonical_case,
    curve_derivation_set,
    curve_specialization,
    euler_weight,
    published_bound,
    weitzenbock,
)
from .derivations import Derivation, in_kernel
from .errors import GradingError, MathDomainError, VarSetMismatchError

DEFAULT_SEED = 314159
RANK_RETRIES = 3

Exps = tuple[int, ...]


def default_seed() -> int:
    """Seed for random evaluation points; DERIVKERNEL_SEED overrides it."""
    raw = os.environ.get("DERIVKERNEL_SEED")
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


# -- gradings -------------------------------------------------------------------------


def grading_vector(varset: VarSet, grading) -> tuple[int, ...]:
    """Integer weight per variable from a {name: weight} map or a sequence."""
    if isinstance(grading, Mapping):
        missing = [n for n in varset.names if n not in grading]
        if missing:
            raise GradingError(f"grading gives no weight for {missing}")
        w = tuple(grading[n] for n in varset.names)
    else:
        w = tuple(grading)
        if len(w) != len(varset):
            raise GradingError(f"grading has {len(w)} weights for {len(varset)} variables")
    return tuple(int(x) for x in w)


def default_grading(varset: VarSet) -> tuple[int, ...] | None:
    """omega(a_i) = d - i when the varset is a hyperelliptic coefficient space."""
    d = len(varset) - 1
    if d >= 1 and varset.names == HyperCoeffSpace(d).varset.names:
        return HyperCoeffSpace(d).weights
    return None


def homogeneity_shift(D: Derivation, weights: Sequence[int]) -> int | None:
    """s with w(D(m)) = w(m) + s for every monomial m, or None if D mixes weights."""
    shift = None
    for k, name in enumerate(D.varset.names):
        for exps, _ in D.image(name).terms():
            s = sum(w * e for w, e in zip(weights, exps)) - weights[k]
            if shift is None:
                shift = s
            elif s != shift:
                return None
    return 0 if shift is None else shift


def _integer_direction(v: Sequence[Fraction]) -> tuple[int, ...]:
    scale = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints] if g else ints
    lead = next((x for x in ints if x), 1)
    return tuple(-x for x in ints) if lead < 0 else tuple(ints)


def compatible_gradings(Ds: Sequence[Derivation], varset: VarSet | None = None) -> list[tuple[int, ...]]:
    """Integer basis of the weight vectors making every derivation homogeneous.

    Unknowns are one weight per variable and one shift per derivation; each
    term c*m in the image of v contributes the equation w(m) - w(v) - s_D = 0.
    """
    if varset is None:
        if not Ds:
            raise ValueError("need a varset or at least one derivation")
        varset = Ds[0].varset
    n = len(varset)
    rows: list[dict[int, int]] = []
    for k, D in enumerate(Ds):
        if D.varset.names != varset.names:
            raise VarSetMismatchError("derivations must share the ansatz varset")
        for vi, name in enumerate(varset.names):
            for exps, _ in D.image(name).terms():
                row: dict[int, int] = {}
                for j, e in enumerate(exps):
                    if e:
                        row[j] = row.get(j, 0) + e
                row[vi] = row.get(vi, 0) - 1
                row[n + k] = -1
                rows.append({c: v for c, v in row.items() if v})
    sol = sparse_nullspace(rows, n + len(Ds))
    # keep an independent set of weight parts
    picked: list[tuple[int, ...]] = []
    for v in sol:
        w = _integer_direction(v[:n])
        if any(w) and sparse_rank([dict(enumerate(p)) for p in picked + [w]], n) > len(picked):
            picked.append(w)
    return picked


# -- ansatz spaces --------------------------------------------------------------------


def _exponents(n: int, degree: int, weights: Sequence[int] | None = None, target: int | None = None):
    """All exponent vectors of total degree ``degree`` in descending lex order.

    With a target weight, branches that can no longer reach it are cut.
    """
    if weights is not None and target is not None:
        wmax = [max(weights[i:]) if i < n else 0 for i in range(n + 1)]
        wmin = [min(weights[i:]) if i < n else 0 for i in range(n + 1)]
    out: list[Exps] = []
    cur = [0] * n

    def rec(i: int, left: int, acc: int) -> None:
        if i == n - 1:
            if weights is None or target is None or acc + left * weights[i] == target:
                cur[i] = left
                out.append(tuple(cur))
                cur[i] = 0
            return
        for e in range(left, -1, -1):
            if target is not None:
                a = acc + e * weights[i]
                rest = left - e
                if not (a + rest * wmin[i + 1] <= target <= a + rest * wmax[i + 1]):
                    continue
            cur[i] = e
            rec(i + 1, left - e, acc + e * weights[i] if weights is not None else 0)
            cur[i] = 0

    if n == 0:
        return [()] if degree == 0 and (target is None or target == 0) else []
    rec(0, degree, 0)
    return out


def _resolve_grading(varset: VarSet, grading) -> tuple[int, ...] | None:
    if grading is None:
        return default_grading(varset)
    return grading_vector(varset, grading)


def monomial_basis(varset: VarSet, degree: int, weight: int | None = None, grading=None) -> list[Polynomial]:
    """Monomials of exactly this total degree (and weight), canonical order."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    w = None
    if weight is not None:
        w = _resolve_grading(varset, grading)
        if w is None:
            raise GradingError(f"no grading known on {varset.names}; pass one to constrain the weight")
    return [Polynomial._raw(varset, {e: 1}) for e in _exponents(len(varset), degree, w, weight)]


def _exps(m: Polynomial) -> Exps:
    if len(m) != 1:
        raise ValueError(f"{m} is not a monomial")
    (e, c), = m.terms()
    if c != 1:
        raise ValueError(f"{m} is not a monic monomial")
    return e


class _Images:
    """Variable images of a derivation as term lists, for applying it to monomials."""

    def __init__(self, D: Derivation):
        vs = D.varset
        self.terms = [(vs.index(v), img.terms()) for v, img in D.images.items()]

    def on(self, exps: Exps) -> dict[Exps, Fraction]:
        out: dict[Exps, Fraction] = {}
        for k, img in self.terms:
            e = exps[k]
            if not e:
                continue
            base = list(exps)
            base[k] -= 1
            for f, c in img:
                t = tuple(a + b for a, b in zip(base, f))
                out[t] = out.get(t, 0) + e * c
        return {t: c for t, c in out.items() if c}


def derivation_matrix(D: Derivation, basis: Sequence[Polynomial]) -> ExactMatrix:
    """Matrix of D on span(basis); rows are the image monomials in canonical order."""
    images = _Images(D)
    cols = []
    for m in basis:
        if m.varset.names != D.varset.names:
            raise VarSetMismatchError("basis monomials must live on the derivation's varset")
        cols.append(images.on(_exps(m)))
    rows = sorted({t for col in cols for t in col}, reverse=True)
    index = {t: r for r, t in enumerate(rows)}
    cells = {(index[t], c): v for c, col in enumerate(cols) for t, v in col.items()}
    return ExactMatrix.from_sparse(
        len(rows),
        len(basis),
        cells,
        row_labels=tuple(Polynomial._raw(D.varset, {t: 1}) for t in rows),
        col_labels=tuple(basis),
    )


# -- kernel search --------------------------------------------------------------------


@dataclass(frozen=True)
class AnsatzSpec:
    """Polynomials of degree ``degree`` (or <= degree when cumulative) on ``varset``."""

    varset: VarSet
    degree: int
    derivations: tuple[Derivation, ...]
    weight: int | None = None
    grading: object = None
    cumulative: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "derivations", tuple(self.derivations))
        if self.degree < 0:
            raise ValueError("degree bound must be non-negative")
        for D in self.derivations:
            if D.varset.names != self.varset.names:
                raise VarSetMismatchError(f"derivation {D.name} does not act on {self.varset.names}")
        if self.weight is not None:
            w = _resolve_grading(self.varset, self.grading)
            if w is None:
                raise GradingError("weight constraint needs a grading on the varset")
            bad = [D.name or "?" for D in self.derivations if homogeneity_shift(D, w) is None]
            if bad:
                raise GradingError(f"derivations {bad} are not homogeneous for the weight grading")

    @property
    def weights(self) -> tuple[int, ...] | None:
        return _resolve_grading(self.varset, self.grading) if self.weight is not None else None

    def degrees(self) -> range:
        # constants are in every kernel; a cumulative search starts at degree 1
        if self.cumulative and self.degree > 0:
            return range(1, self.degree + 1)
        return range(self.degree, self.degree + 1)


@dataclass
class Erratum:
    """A printed generator outside the kernel, with the oracle verdict and a repair."""

    name: str
    generator: Polynomial
    failing: list[str]
    oracle_invariant: bool | None
    kernel_dimension: int
    corrected: Polynomial | None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generator": str(self.generator),
            "failing_derivations": self.failing,
            "oracle_invariant": self.oracle_invariant,
            "kernel_dimension": self.kernel_dimension,
            "corrected": None if self.corrected is None else str(self.corrected),
        }


@dataclass
class KernelReport:
    basis: list
    in_kernel: dict[str, bool]
    jacobian_rank: int
    bound: int | None
    rank_certain: bool = True
    errata: list[Erratum] = field(default_factory=list)

    @property
    def exceeds_bound(self) -> bool:
        return self.bound is not None and self.jacobian_rank > self.bound

    @property
    def all_in_kernel(self) -> bool:
        return all(self.in_kernel.values())

    def to_json(self) -> dict:
        out = {
            "basis": [str(p) for p in self.basis],
            "in_kernel": dict(self.in_kernel),
            "jacobian_rank": self.jacobian_rank,
            "bound": self.bound,
        }
        if not self.rank_certain:
            out["rank_certain"] = False
        if self.exceeds_bound:
            out["exceeds_bound"] = True
        if self.errata:
            out["errata"] = [e.to_json() for e in self.errata]
        return out


def ansatz_cells(spec: AnsatzSpec) -> dict[tuple[int, ...], list[Exps]]:
    """Ansatz monomials grouped by their values under all compatible gradings.

    Keys start with the degree when every derivation preserves it.
    """
    n = len(spec.varset)
    gradings = compatible_gradings(spec.derivations, spec.varset) if spec.derivations else []
    w = spec.weights
    by_degree = homogeneity_shift_all(spec.derivations)
    cells: dict[tuple[int, ...], list[Exps]] = {}
    for deg in spec.degrees():
        for e in _exponents(n, deg, w, spec.weight):
            key = tuple(sum(a * b for a, b in zip(g, e)) for g in gradings)
            cells.setdefault((deg,) + key if by_degree else key, []).append(e)
    for key in cells:
        cells[key].sort(reverse=True)
    return dict(sorted(cells.items()))


def homogeneity_shift_all(Ds: Sequence[Derivation]) -> bool:
    """True when every derivation preserves total degree (the all-ones grading)."""
    return all(homogeneity_shift(D, (1,) * len(D.varset)) == 0 for D in Ds)


def _cell_kernel(varset: VarSet, cell: list[Exps], images: list[_Images]) -> list[Polynomial]:
    rows: list[dict[int, Fraction]] = []
    for im in images:
        local: dict[Exps, dict[int, Fraction]] = {}
        for c, e in enumerate(cell):
            for t, v in im.on(e).items():
                local.setdefault(t, {})[c] = v
        rows.extend(local.values())
    out = []
    for vec in sparse_nullspace(rows, len(cell)):
        out.append(Polynomial(varset, {e: v for e, v in zip(cell, vec) if v}))
    return out


def joint_kernel(spec: AnsatzSpec, bound: int | None = None, seed: int | None = None) -> KernelReport:
    """Basis of the common kernel of spec.derivations on the ansatz space."""
    images = [_Images(D) for D in spec.derivations]
    basis: list[Polynomial] = []
    for cell in ansatz_cells(spec).values():
        basis.extend(_cell_kernel(spec.varset, cell, images))
    for p in basis:
        if not in_kernel(spec.derivations, p):  # pragma: no cover - guards the linear algebra
            raise AssertionError(f"nullspace vector {p} is not in the kernel")
    names = {f"k{i + 1}": True for i in range(len(basis))}
    r, certain = jacobian_rank(basis, spec.varset, seed=seed)
    if bound is None and spec.derivations:
        bound = derivation_rank_bound(spec.derivations, seed=seed)
    return KernelReport(basis, names, r, bound, certain)


# -- membership and projections -------------------------------------------------------


def _coordinates(polys: Sequence[Polynomial], extra: Polynomial | None = None):
    keys = sorted({e for p in list(polys) + ([extra] if extra is not None else []) for e in p.term_map()}, reverse=True)
    cols = [[p.coefficient(e) for e in keys] for p in polys]
    target = [extra.coefficient(e) for e in keys] if extra is not None else None
    return keys, cols, target


def span_coefficients(basis: Sequence[Polynomial], p: Polynomial) -> tuple[Fraction, ...] | None:
    """c with sum c_k basis_k == p, or None when p is outside the span."""
    _, cols, target = _coordinates(basis, p)
    return solve_in_span(cols, target)


def span_contains(basis: Sequence[Polynomial], p: Polynomial) -> bool:
    return span_coefficients(basis, p) is not None


def nearest_in_span(basis: Sequence[Polynomial], p: Polynomial) -> Polynomial:
    """Orthogonal projection of p onto span(basis) in monomial coordinates (exact)."""
    vs = p.varset
    if not basis:
        return vs.zero()
    keys, cols, target = _coordinates(basis, p)
    k = len(cols)
    gram = [[sum(a * b for a, b in zip(cols[i], cols[j])) for j in range(k)] for i in range(k)]
    rhs = [sum(a * b for a, b in zip(cols[i], target)) for i in range(k)]
    # the basis is independent, so the normal equations have a unique solution
    gram_cols = [[gram[i][j] for i in range(k)] for j in range(k)]
    c = solve_in_span(gram_cols, rhs)
    if c is None:  # pragma: no cover
        raise MathDomainError("basis is not linearly independent")
    out = vs.zero()
    for ci, b in zip(c, basis):
        if ci:
            out = out + b.scale(ci)
    return out


# -- Jacobian rank --------------------------------------------------------------------


def random_point(varset: VarSet, rng: random.Random) -> dict[str, Fraction]:
    """Nonzero small rationals; zero coordinates are avoided since they cause most degeneracies."""
    point = {}
    for name in varset.names:
        num = rng.randint(1, 97) * rng.choice((1, -1))
        point[name] = Fraction(num, rng.randint(1, 11))
    return point


def _gradient(g, point: Mapping[str, Fraction], varset: VarSet) -> list[Fraction]:
    if isinstance(g, RationalFunction):
        n0, d0 = g.num.evaluate(point), g.den.evaluate(point)
        if d0 == 0:
            raise ZeroDivisionError("evaluation point is a pole")
        return [
            (g.num.diff(v).evaluate(point) * d0 - n0 * g.den.diff(v).evaluate(point)) / d0**2 for v in varset.names
        ]
    return [g.diff(v).evaluate(point) for v in varset.names]


def jacobian_rank(gens: Sequence, varset: VarSet | None = None, seed: int | None = None) -> tuple[int, bool]:
    """Rank of the Jacobian of gens at random rational points.

    A deficient rank is re-tried at fresh points; the maximum is returned
    together with whether the rank is certainly the generic one (it always
    is when it equals the number of gens or variables).
    """
    gens = list(gens)
    if not gens:
        return 0, True
    if varset is None:
        varset = gens[0].varset
    full = min(len(gens), len(varset))
    rng = random.Random(default_seed() if seed is None else seed)
    best = 0
    for _ in range(RANK_RETRIES + 1):
        point = random_point(varset, rng)
        try:
            rows = [dict(enumerate(_gradient(g, point, varset))) for g in gens]
        except ZeroDivisionError:
            continue
        best = max(best, sparse_rank(rows, len(varset)))
        if best == full:
            return best, True
    return best, False


def derivation_rank_bound(Ds: Sequence[Derivation], seed: int | None = None) -> int:
    """Number of variables minus the generic rank of the vector fields of Ds."""
    if not Ds:
        raise ValueError("need at least one derivation")
    vs = Ds[0].varset
    rng = random.Random(default_seed() if seed is None else seed)
    best = 0
    for _ in range(RANK_RETRIES + 1):
        point = random_point(vs, rng)
        rows = [{k: D.image(v).evaluate(point) for k, v in enumerate(vs.names)} for D in Ds]
        best = max(best, sparse_rank(rows, len(vs)))
        if best == min(len(Ds), len(vs)):
            break
    return len(vs) - best


# -- generator verification -----------------------------------------------------------


def _names(gens: Sequence, names: Sequence[str] | None) -> list[str]:
    if names is None:
        return [f"g{i + 1}" for i in range(len(gens))]
    if len(names) != len(gens):
        raise ValueError("need exactly one name per generator")
    if len(set(names)) != len(names):
        raise ValueError("generator names must be distinct")
    return list(names)


def verify_generator_set(
    gens: Sequence,
    Ds: Sequence[Derivation],
    bound: int | None = None,
    names: Sequence[str] | None = None,
    seed: int | None = None,
) -> KernelReport:
    """Kernel membership of each generator and the Jacobian rank of those that pass."""
    names = _names(gens, names)
    if Ds and any(g.varset.names != Ds[0].varset.names for g in gens):
        raise VarSetMismatchError("generators and derivations must share a varset")
    flags = {n: in_kernel(Ds, g) for n, g in zip(names, gens)}
    passing = [g for n, g in zip(names, gens) if flags[n]]
    varset = Ds[0].varset if Ds else (gens[0].varset if gens else VarSet(()))
    r, certain = jacobian_rank(passing, varset, seed=seed)
    return KernelReport(list(gens), flags, r, bound, certain)


def corrected_generator(g: Polynomial, Ds: Sequence[Derivation]) -> tuple[Polynomial | None, int]:
    """Closest kernel element to g among polynomials of degree <= deg g in g's cells.

    Returns the projection (None when the kernel there is trivial or g is
    orthogonal to it) and the dimension of the kernel searched.
    """
    varset = g.varset
    deg = g.total_degree()
    gradings = compatible_gradings(Ds, varset)
    keys = {tuple(sum(a * b for a, b in zip(w, e)) for w in gradings) for e in g.term_map()}
    spec = AnsatzSpec(varset, deg, tuple(Ds), cumulative=True)
    images = [_Images(D) for D in Ds]
    basis: list[Polynomial] = []
    by_degree = homogeneity_shift_all(Ds)
    for key, cell in ansatz_cells(spec).items():
        grade = key[1:] if by_degree else key
        if grade in keys:
            basis.extend(_cell_kernel(varset, cell, images))
    if not basis:
        return None, 0
    proj = nearest_in_span(basis, g)
    return (None if proj.is_zero() else proj), len(basis)


def audit_generators(
    gens: Sequence[Polynomial],
    Ds: Sequence[Derivation],
    *,
    family: str | None = None,
    space=None,
    bound: int | None = None,
    names: Sequence[str] | None = None,
    seed: int | None = None,
) -> KernelReport:
    """verify_generator_set plus an erratum for every failing generator.

    A failure is cross-examined with the substitution oracle when a group
    family is known (``space`` is then the coefficient space or degree it
    acts on), and paired with the nearest kernel element of the same
    degree and grading cells.  The printed generator itself is kept as is.
    """
    from .transform import check_invariance

    report = verify_generator_set(gens, Ds, bound=bound, names=names, seed=seed)
    for name, g in zip(_names(gens, names), gens):
        if report.in_kernel[name]:
            continue
        failing = [D.name or "?" for D in Ds if not in_kernel([D], g)]
        verdict = None
        if family is not None:
            verdict = check_invariance(g, family, space)
        corrected, dim = corrected_generator(g, Ds)
        report.errata.append(Erratum(name, g, failing, verdict, dim, corrected))
    return report


# -- named cases ----------------------------------------------------------------------

HYPER_CASES = {"weitzenbock": "translations", "hyper": "affine_x"}
TERNARY_ORACLE_FAMILY = {"i": "case_i", "ii": "case_ii", "cprime-g0": "cprime"}


@dataclass(frozen=True)
class CaseContext:
    """Everything a search needs for a named derivation set."""

    d: int
    case: str
    varset: VarSet
    derivations: tuple[Derivation, ...]
    grading: tuple[int, ...] | None
    family: str | None
    published: int | None

    @property
    def space(self):
        if self.case in HYPER_CASES:
            return HyperCoeffSpace(self.d)
        return curve_specialization(self.d, self.case)

    def bound(self, seed: int | None = None) -> int:
        """The stated transcendence-degree bound, else the one computed from ranks."""
        if self.published is not None:
            return self.published
        return derivation_rank_bound(self.derivations, seed=seed)


def case_context(d: int, case: str) -> CaseContext:
    """Hyperelliptic cases 'weitzenbock' ({D_d}) and 'hyper' ({D_d, E_d}), or a ternary case."""
    if case in HYPER_CASES:
        Ds = (weitzenbock(d),) if case == "weitzenbock" else (weitzenbock(d), euler_weight(d))
        space = HyperCoeffSpace(d)
        return CaseContext(d, case, space.varset, Ds, space.weights, HYPER_CASES[case], None)
    case = canonical_case(case)
    Ds = tuple(curve_derivation_set(d, case))
    varset = Ds[0].varset
    if case == "cprime-g0":
        grading = compatible_gradings(Ds, varset)[0]
    else:
        E1 = TernaryCoeffSpace(d).grading("E1")
        grading = tuple(E1[n] for n in varset.names)
    return CaseContext(d, case, varset, Ds, grading, TERNARY_ORACLE_FAMILY.get(case), published_bound(d, case))


def search_case(
    d: int, case: str, degree: int, weight: int | None = None, cumulative: bool | None = None, seed: int | None = None
) -> KernelReport:
    """joint_kernel for a named case; inhomogeneous cases search all degrees <= degree."""
    ctx = case_context(d, case)
    if cumulative is None:
        cumulative = not homogeneity_shift_all(ctx.derivations)
    spec = AnsatzSpec(ctx.varset, degree, ctx.derivations, weight, ctx.grading if weight is not None else None, cumulative)
    return joint_kernel(spec, bound=ctx.bound(seed), seed=seed)


def verify_case(gens: Sequence[Polynomial], d: int, case: str, names=None, seed: int | None = None) -> KernelReport:
    ctx = case_context(d, case)
    return audit_generators(
        gens, ctx.derivations, family=ctx.family, space=ctx.space, bound=ctx.bound(seed), names=names, seed=seed
    )


__all__ = [
    "AnsatzSpec",
    "CaseContext",
    "DEFAULT_SEED",
    "Erratum",
    "KernelReport",
    "ansatz_cells",
    "audit_generators",
    "case_context",
    "compatible_gradings",
    "corrected_generator",
    "derivation_matrix",
    "derivation_rank_bound",
    "homogeneity_shift",
    "jacobian_rank",
    "joint_kernel",
    "monomial_basis",
    "nearest_in_span",
    "search_case",
    "span_contains",
    "verify_case",
    "verify_generator_set",
]
