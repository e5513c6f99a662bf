"""End-to-end acceptance checks, all at exact equality over Q.

Run under pytest (a summary block lists PASS/FAIL per criterion) or directly
with ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from derivkernel.algebra import RationalFunction, parse_polynomial, parse_rational_function, rf_equal  # noqa: E402
from derivkernel.curves import (  # noqa: E402
    GL3_FIELDS,
    HyperCoeffSpace,
    TernaryCoeffSpace,
    VectorField3,
    annihilates_form,
    euler_weight,
    gl3_derivations,
    weitzenbock,
)
from derivkernel.derivations import Derivation, commutator, in_kernel, sign_relation, weight_eigenvalue  # noqa: E402
from derivkernel.invariants import (  # noqa: E402
    HyperCurve,
    curve_from_moduli,
    isomorphic,
    j_invariant_c3,
    j_quartic_c3,
    moduli_vector,
    normalize,
    rational_invariant_expressions,
    rational_invariant_generators,
    translate,
    z_invariant,
)
from derivkernel.kernelsearch import AnsatzSpec, case_context, joint_kernel, span_contains, verify_case  # noqa: E402
from derivkernel.transform import AffineMap2, check_invariance, transform_coeffs, translation_formula, translation_varset  # noqa: E402
from published import C3_FIELD_DISPLAY, CPRIME5_D2, CPRIME5_D3, CPRIME5_G, J_C3, J_QUARTIC, Z5  # noqa: E402


@contextmanager
def budget(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, budget {seconds}s"


def test_1_z_kernel_suite(record_property):
    record_property("criterion", "1. z-kernel suite")
    with budget(1):
        for d in range(2, 9):
            D, E = weitzenbock(d), euler_weight(d)
            for i in range(2, d + 1):
                z = z_invariant(d, i)
                assert D.apply(z).is_zero()
                assert weight_eigenvalue(E, z) == i * (d - 1)
        vs = HyperCoeffSpace(5).varset
        for i, text in Z5.items():
            assert z_invariant(5, i).term_map() == parse_polynomial(text, vs).term_map()


def test_2_rational_generators(record_property):
    record_property("criterion", "2. rational invariant generators")
    with budget(30):
        for d in range(2, 7):
            Ds = [weitzenbock(d), euler_weight(d)]
            a0 = Ds[0].varset.var("a0")
            gens = rational_invariant_generators(d)
            assert len(gens) == d - 1
            for i, g, e in zip(range(2, d + 1), gens, rational_invariant_expressions(d)):
                assert rf_equal(g, RationalFunction(z_invariant(d, i) ** d, a0 ** (i * (d - 1))))
                assert in_kernel(Ds, g)
                assert check_invariance(e, "affine_x", d)


def test_3_j_invariant(record_property):
    record_property("criterion", "3. j-invariant and field-generator erratum")
    with budget(1):
        vs = HyperCoeffSpace(3).varset
        j = j_invariant_c3()
        shown = parse_rational_function(J_C3, vs)
        assert j.num == shown.num and j.den == shown.den
        T = parse_polynomial(J_QUARTIC, vs)
        assert j_quartic_c3() == T
        a0 = vs.var("a0")
        assert j.num == z_invariant(3, 2) ** 3 * 6912 and j.den == a0**2 * T
        D3, E3 = weitzenbock(3), euler_weight(3)
        assert D3.apply_rational(j).is_zero() and E3.apply_rational(j).is_zero()
        displayed = parse_rational_function(C3_FIELD_DISPLAY[0], vs)
        assert in_kernel([D3], displayed)
        assert not in_kernel([E3], displayed)
        assert weight_eigenvalue(E3, displayed) == 3
        fixed = RationalFunction(z_invariant(3, 2) ** 3, a0**4)
        assert in_kernel([D3, E3], fixed)


def test_4_kernel_search(record_property):
    record_property("criterion", "4. kernel-search reproduction")
    with budget(10):
        D5 = weitzenbock(5)
        vs = D5.varset
        r = joint_kernel(AnsatzSpec(vs, 2, (D5,), 8))
        assert r.basis == [z_invariant(5, 2)]
        for i in (3, 4, 5):
            r = joint_kernel(AnsatzSpec(vs, i, (D5,), i * 4))
            assert span_contains(r.basis, z_invariant(5, i))


def _table(space_varset, table: dict[str, str]) -> Derivation:
    return Derivation(space_varset, {v: parse_polynomial(t, space_varset) for v, t in table.items()})


def test_5_cprime5(record_property):
    record_property("criterion", "5. C'_5 translation invariants")
    with budget(60):
        ctx = case_context(5, "cprime-g0")
        D2, D3 = ctx.derivations
        assert sign_relation(D2, _table(ctx.varset, CPRIME5_D2)) == -1
        assert sign_relation(D3, _table(ctx.varset, CPRIME5_D3)) == 1
        gens = [parse_polynomial(t, ctx.varset) for t in CPRIME5_G.values()]
        r = verify_case(gens, 5, "cprime-g0", names=list(CPRIME5_G))
        for e in r.errata:
            assert e.oracle_invariant is False
            assert e.corrected is not None and in_kernel(ctx.derivations, e.corrected)
            assert e.corrected.total_degree() == e.generator.total_degree()
        assert r.all_in_kernel
        assert r.jacobian_rank == 7 == 2 * 5 - 3


def _random_monic(rng: random.Random, d: int) -> HyperCurve:
    return HyperCurve(d, (1, *(Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(d))))


def test_6_moduli_properties(record_property):
    record_property("criterion", "6. moduli property suite")
    with budget(30):
        rng = random.Random(1729)
        for d in (3, 4, 5):
            for _ in range(100):
                c = _random_monic(rng, d)
                n, _ = normalize(c)
                assert curve_from_moduli(moduli_vector(c)) == n
                b = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
                moved = translate(c, b)
                assert moduli_vector(moved) == moduli_vector(c)
                assert isomorphic(c, moved) == b
                other = _random_monic(rng, d)
                same = moduli_vector(other) == moduli_vector(c)
                assert (isomorphic(c, other) is not None) == same
                near = curve_from_moduli(moduli_vector(c))
                assert isomorphic(near, c) is not None


def test_7_oracle_vs_formula(record_property):
    record_property("criterion", "7. oracle vs closed formula")
    with budget(10):
        at = {"alpha": 1, "b": 0}
        for d in range(1, 9):
            vs = translation_varset(d)
            out = transform_coeffs(HyperCoeffSpace(d), None, AffineMap2.parse("x->alpha*x+b"))
            base = HyperCoeffSpace(d).varset
            for i in range(d + 1):
                t = translation_formula(d, i)
                assert out[f"a{i}"].lift(vs) == t
                db = t.diff("b").substitute(at, base)
                da = t.diff("alpha").substitute(at, base)
                assert db == (base.var(f"a{i - 1}").scale(i) if i else base.zero())
                assert da == base.var(f"a{i}").scale(d - i)


FORMULAS = {
    "D1": lambda d, i, j: (i, (i - 1, j)),
    "D2": lambda d, i, j: (j, (i + 1, j - 1)),
    "D3": lambda d, i, j: (j, (i, j - 1)),
    "DH1": lambda d, i, j: (d - i - j, (i + 1, j)),
    "E2": lambda d, i, j: (i, (i, j)),
}


def _formula(space: TernaryCoeffSpace, f) -> Derivation:
    images = {}
    for i, j in space.indices:
        c, (p, q) = f(space.d, i, j)
        if c and space.has(p, q):
            images[space.name(i, j)] = space.var(p, q).scale(c)
    return Derivation(space.varset, images)


def test_8_gl3_structure(record_property):
    record_property("criterion", "8. gl3 structure")
    with budget(30):
        for d in range(1, 7):
            space = TernaryCoeffSpace(d)
            gl = gl3_derivations(d)
            for name, texts in GL3_FIELDS.items():
                assert annihilates_form(gl[name], VectorField3.from_text(*texts), space)
            assert sign_relation(commutator(gl["D1"], gl["D2"]), gl["D3"]) in (1, -1)
            for name, f in FORMULAS.items():
                assert gl[name] == _formula(space, f)
            # E1: the derived (d - (i + j)) kills the form, the stated (d - (2i + j)) does not
            e1 = VectorField3.from_text(*GL3_FIELDS["E1"])
            derived = _formula(space, lambda d, i, j: (d - i - j, (i, j)))
            stated = _formula(space, lambda d, i, j: (d - 2 * i - j, (i, j)))
            assert gl["E1"] == derived and annihilates_form(derived, e1, space)
            assert not annihilates_form(stated, e1, space)


CRITERIA = [
    test_1_z_kernel_suite,
    test_2_rational_generators,
    test_3_j_invariant,
    test_4_kernel_search,
    test_5_cprime5,
    test_6_moduli_properties,
    test_7_oracle_vs_formula,
    test_8_gl3_structure,
]


def main() -> int:
    failures = 0
    for fn in CRITERIA:
        label = {}
        start = time.perf_counter()
        try:
            fn(lambda k, v: label.__setitem__(k, v))
            verdict = "PASS"
        except AssertionError as exc:
            verdict, failures = f"FAIL ({exc})" if str(exc) else "FAIL", failures + 1
        print(f"{verdict}  {label.get('criterion', fn.__name__)}  ({time.perf_counter() - start:.2f}s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
