import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from derivkernel.algebra import Polynomial, RationalFunction, VarSet, parse_polynomial, parse_rational_function, rf_equal
from derivkernel.curves import euler_weight, gl3_derivations, weitzenbock
from derivkernel.derivations import (
    Derivation,
    apply,
    apply_rational,
    commutator,
    in_kernel,
    sign_relation,
    specialize,
    weight_eigenvalue,
)
from derivkernel.errors import InconsistentSpecializationError, VarSetMismatchError
from derivkernel.invariants import j_invariant_c3, z_invariant
from oracles import from_sympy, sympy_weitzenbock_apply, to_sympy

D5, E5 = weitzenbock(5), euler_weight(5)
VS5 = D5.varset


@st.composite
def polys(draw, vs=VS5, max_terms=4, max_exp=2):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_exp)] * len(vs)),
            st.fractions(min_value=-9, max_value=9, max_denominator=4),
            max_size=max_terms,
        )
    )
    return Polynomial(vs, terms)


def test_weitzenbock_kills_z2():
    assert apply(D5, z_invariant(5, 2)).is_zero()


def test_weitzenbock_kills_a0():
    for d in range(1, 7):
        assert weitzenbock(d).apply(weitzenbock(d).varset.var("a0")).is_zero()


def test_euler_on_a1_squared():
    a1 = VS5.var("a1")
    assert E5.apply(a1**2) == (a1**2).scale(8)


def test_apply_rational_on_j():
    j = j_invariant_c3()
    assert apply_rational(weitzenbock(3), j).is_zero()
    assert apply_rational(euler_weight(3), j).is_zero()


def test_apply_rational_constant():
    r = RationalFunction(VS5.const(3), VS5.const(7))
    assert apply_rational(D5, r).is_zero()


def test_euler_on_weight_zero_fraction():
    # omega(z2^3) = omega(a0^4) = 12 for d = 3
    vs = weitzenbock(3).varset
    r = RationalFunction(z_invariant(3, 2) ** 3, vs.var("a0") ** 4)
    assert euler_weight(3).apply_rational(r).is_zero()


def test_euler_on_fraction_scales_by_weight_difference():
    vs = weitzenbock(3).varset
    f, g = z_invariant(3, 2) ** 3, vs.var("a0") ** 3
    r = RationalFunction(f, g)
    assert rf_equal(euler_weight(3).apply_rational(r), r * 3)


def test_commutator_d1_d2_is_d3():
    gl = gl3_derivations(4)
    assert sign_relation(commutator(gl["D1"], gl["D2"]), gl["D3"]) == 1


def test_commutator_with_itself():
    assert commutator(D5, D5).is_zero()


def test_commutator_euler_weitzenbock():
    # [E, D](a_i) = i(d-i+1) a_{i-1} - (d-i) i a_{i-1} = i a_{i-1}
    assert commutator(E5, D5) == D5


def test_jacobi_identity_on_gl3():
    gl = gl3_derivations(3)
    triples = [("D1", "D2", "DH1"), ("E1", "D3", "DH2"), ("DH3", "D2", "E2")]
    for a, b, c in triples:
        A, B, C = gl[a], gl[b], gl[c]
        total = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B))
        assert total.is_zero()


def test_specialize_cprime_as_stated():
    # normalization a0_0 = 1, a2_3 = 1 with every other a_{i>=2,*} pinned to 0
    gl = gl3_derivations(5)
    pins = {n: 0 for n in gl["D2"].varset.names if int(n[1]) >= 2}
    pins.update({"a0_0": 1, "a2_3": 1})
    D3 = specialize(gl["D3"], pins)
    D2 = specialize(gl["D2"], pins)
    assert D3.image("a0_1") == D3.varset.one()
    assert D2.image("a1_4") == D2.varset.const(4)
    assert len(D2.varset) == 10


def test_specialize_inconsistent_pin():
    with pytest.raises(InconsistentSpecializationError):
        specialize(D5, {"a1": 0})


def test_specialize_unknown_variable():
    with pytest.raises(VarSetMismatchError):
        specialize(D5, {"b": 0})


def test_weight_eigenvalues():
    assert weight_eigenvalue(E5, z_invariant(5, 2)) == 8
    a0, a1 = VS5.var("a0"), VS5.var("a1")
    assert weight_eigenvalue(E5, a0**2) == 10
    assert weight_eigenvalue(E5, a0 + a1) is None
    assert weight_eigenvalue(E5, VS5.zero()) is None


def test_in_kernel_examples():
    r = RationalFunction(z_invariant(5, 3) ** 5, VS5.var("a0") ** 12)
    assert in_kernel([D5, E5], r)
    assert not in_kernel([D5], VS5.var("a1"))


def test_in_kernel_varset_mismatch():
    with pytest.raises(VarSetMismatchError):
        in_kernel([D5], weitzenbock(3).varset.var("a0"))


def test_json_round_trip():
    gl = gl3_derivations(3)
    for D in list(gl.values()) + [D5]:
        back = Derivation.from_json(json.loads(json.dumps(D.to_json())))
        assert back == D and back.name == D.name


def test_images_from_text():
    vs = VarSet(("x", "y"))
    D = Derivation(vs, {"x": "y", "y": 0}, "shift")
    assert D.apply(parse_polynomial("x^2", vs)) == parse_polynomial("2*x*y", vs)


@given(polys(), polys())
def test_leibniz(f, g):
    for D in (D5, E5):
        assert D.apply(f * g) == D.apply(f) * g + f * D.apply(g)


@given(polys(), polys(), st.fractions(max_denominator=5), st.fractions(max_denominator=5))
def test_linearity(f, g, a, b):
    assert D5.apply(f.scale(a) + g.scale(b)) == D5.apply(f).scale(a) + D5.apply(g).scale(b)


@given(polys())
def test_weitzenbock_matches_sympy(f):
    assert D5.apply(f) == from_sympy(sympy_weitzenbock_apply(to_sympy(f), 5), VS5)


@given(polys())
def test_quotient_rule_on_polynomials(f):
    r = D5.apply_rational(RationalFunction(f))
    assert r.num == D5.apply(f) and r.den == VS5.one()


def test_kernel_is_a_subfield():
    r1 = RationalFunction(z_invariant(5, 2) ** 5, VS5.var("a0") ** 8)
    r2 = RationalFunction(z_invariant(5, 4) ** 5, VS5.var("a0") ** 16)
    for r in (r1 + r2, r1 - r2, r1 * r2, r1 / r2):
        assert in_kernel([D5, E5], r)


def test_parse_then_apply_rational():
    vs = weitzenbock(3).varset
    r = parse_rational_function("(a0*a2 - a1^2)^3 / a0^3", vs)
    lam = weight_eigenvalue(euler_weight(3), r)
    assert lam == Fraction(3)
