import itertools

import pytest

from derivkernel.algebra import VarSet, solve_in_span
from derivkernel.curves import (
    GL3_FIELDS,
    HyperCoeffSpace,
    TernaryCoeffSpace,
    VectorField3,
    annihilates_form,
    canonical_case,
    cprime_support_pins,
    curve_derivation_set,
    curve_specialization,
    euler_weight,
    gl3_derivations,
    induce_coefficient_derivation,
    monomial_weight,
    published_bound,
    weitzenbock,
)
from derivkernel.derivations import Derivation, commutator, in_kernel, sign_relation, specialize, weight_eigenvalue
from derivkernel.errors import InconsistentSpecializationError, MathDomainError
from derivkernel.invariants import z_invariant
from derivkernel.kernelsearch import AnsatzSpec, joint_kernel, monomial_basis


def test_weitzenbock_d3_images():
    D = weitzenbock(3)
    a = D.varset.gens()
    assert [D.image(f"a{i}") for i in range(4)] == [D.varset.zero(), a[0], 2 * a[1], 3 * a[2]]


def test_euler_d3_images():
    E = euler_weight(3)
    vs = E.varset
    assert E.image("a0") == vs.var("a0").scale(3)
    assert E.image("a3").is_zero()


def test_monomials_are_euler_eigenvectors():
    d = 5
    E = euler_weight(d)
    for deg in range(4):
        for m in monomial_basis(E.varset, deg):
            assert weight_eigenvalue(E, m) == monomial_weight(m, d)


def test_positive_weight_not_in_euler_kernel():
    assert not in_kernel([euler_weight(5)], z_invariant(5, 2))


def test_monomial_weight_examples():
    vs = HyperCoeffSpace(5).varset
    assert monomial_weight(vs.var("a0") * vs.var("a2"), 5) == 8
    assert monomial_weight(vs.var("a5"), 5) == 0
    assert [weight_eigenvalue(euler_weight(5), z_invariant(5, i)) for i in range(2, 6)] == [8, 12, 16, 20]


def test_weight_matches_euler_eigenvalue_on_variables():
    for d in range(1, 8):
        space = HyperCoeffSpace(d)
        E = euler_weight(d)
        for i in range(d + 1):
            assert weight_eigenvalue(E, space.var(i)) == space.weight(i) == d - i


def test_ternary_space_size():
    for d in range(1, 8):
        assert len(TernaryCoeffSpace(d).varset) == (d + 1) * (d + 2) // 2


# Image formulas for the induced derivations; E1 uses the kill-the-form value d - (i + j).
FORMULAS = {
    "D1": lambda d, i, j: (i, (i - 1, j)),
    "D2": lambda d, i, j: (j, (i + 1, j - 1)),
    "D3": lambda d, i, j: (j, (i, j - 1)),
    "DH1": lambda d, i, j: (d - i - j, (i + 1, j)),
    "DH2": lambda d, i, j: (i, (i - 1, j + 1)),
    "DH3": lambda d, i, j: (d - i - j, (i, j + 1)),
    "E1": lambda d, i, j: (d - i - j, (i, j)),
    "E2": lambda d, i, j: (i, (i, j)),
    "E3": lambda d, i, j: (j, (i, j)),
}


def formula_derivation(space: TernaryCoeffSpace, formula) -> Derivation:
    images = {}
    for i, j in space.indices:
        c, (p, q) = formula(space.d, i, j)
        if c and space.has(p, q):
            images[space.name(i, j)] = space.var(p, q).scale(c)
    return Derivation(space.varset, images)


@pytest.mark.parametrize("d", range(1, 7))
def test_induced_derivations_match_formulas(d):
    space = TernaryCoeffSpace(d)
    gl = gl3_derivations(d)
    for name, formula in FORMULAS.items():
        assert gl[name] == formula_derivation(space, formula), name


@pytest.mark.parametrize("d", range(1, 7))
def test_all_nine_kill_the_generic_form(d):
    space = TernaryCoeffSpace(d)
    gl = gl3_derivations(d)
    for name, texts in GL3_FIELDS.items():
        assert annihilates_form(gl[name], VectorField3.from_text(*texts), space)


def test_stated_e1_fails_to_kill_the_form():
    # the variant (d - (2i + j)) a_{i,j} is not induced by -x d/dx
    vf = VectorField3.from_text(*GL3_FIELDS["E1"])
    for d in range(1, 7):
        space = TernaryCoeffSpace(d)
        variant = formula_derivation(space, lambda d, i, j: (d - 2 * i - j, (i, j)))
        assert not annihilates_form(variant, vf, space)


def test_row_j0_of_d1_is_weitzenbock():
    for d in range(1, 7):
        D1 = gl3_derivations(d)["D1"]
        W = weitzenbock(d)
        for i in range(d + 1):
            # rename a_{k,0} -> a_k; the row j = 0 maps into itself
            rename = {n: W.varset.var("a" + n[1:].split("_")[0]) if n.endswith("_0") else 0 for n in D1.varset.names}
            assert D1.image(f"a{i}_0").substitute(rename, W.varset) == W.image(f"a{i}")


def test_nonlinear_vector_field_rejected():
    vf = VectorField3.from_text("x^2", "0", "0")
    with pytest.raises(MathDomainError):
        induce_coefficient_derivation(vf, TernaryCoeffSpace(2))


def _flat(D: Derivation) -> list:
    keys = [(v, e) for v in D.varset.names for e in itertools.product(range(2), repeat=len(D.varset)) if sum(e) == 1]
    return [D.image(v).coefficient(e) for v, e in keys]


def test_gl3_closed_under_commutators():
    gl = gl3_derivations(3)
    basis = [_flat(D) for D in gl.values()]
    for A, B in itertools.combinations(gl.values(), 2):
        assert solve_in_span(basis, _flat(commutator(A, B))) is not None, (A.name, B.name)


def test_omitted_derivations_are_commutators():
    gl = gl3_derivations(4)
    assert sign_relation(commutator(gl["D1"], gl["D2"]), gl["D3"]) is not None
    assert sign_relation(commutator(gl["DH1"], gl["DH2"]), gl["DH3"]) is not None


def test_cprime_g0_case():
    Ds = curve_derivation_set(5, "cprime_translations")
    assert len(Ds) == 2
    names = set(Ds[0].varset.names)
    assert names == {f"a1_{j}" for j in range(5)} | {f"a0_{j}" for j in range(1, 6)}
    D2, D3 = Ds
    assert D3.image("a0_1") == D3.varset.one()


def test_cprime_pins():
    spec = curve_specialization(5, "cprime-g0")
    assert spec.pins["a0_0"] == 1 and spec.pins["a2_3"] == -1
    assert all(v == 0 for k, v in spec.pins.items() if k not in ("a0_0", "a2_3"))
    assert set(cprime_support_pins(5)) == set(spec.pins) - {"a0_0", "a2_3"}


def test_cprime_full_case():
    Ds = curve_derivation_set(5, "cprime_full")
    assert [D.name for D in Ds] == ["D2", "D3", "DH1", "E1", "E2"]
    assert len(Ds[0].varset) == 2 * 5 + 2


def test_normalizing_pins_break_the_scalings():
    gl = gl3_derivations(5)
    pins = dict(curve_specialization(5, "cprime-g0").pins)
    for name in ("DH1", "E1"):
        with pytest.raises(InconsistentSpecializationError):
            specialize(gl[name], pins)


def test_general_ii_excludes_d1():
    Ds = curve_derivation_set(4, "general_ii")
    assert "D1" not in [D.name for D in Ds]
    gl = gl3_derivations(4)
    with pytest.raises(InconsistentSpecializationError):
        curve_specialization(4, "ii").apply(gl["D1"])


def test_unknown_case_and_degree():
    with pytest.raises(ValueError):
        canonical_case("iii")
    with pytest.raises(MathDomainError):
        HyperCoeffSpace(0)


def test_published_bounds():
    assert published_bound(5, "cprime") == 7
    assert published_bound(4, "full") == 15 - 7
    assert published_bound(5, "cprime-g0") is None


def test_general_i_kernel_contains_cubic_absolute_invariant():
    # S (degree 4) and T (degree 6) span the kernel of the nilpotent
    # derivations on ternary cubics in those degrees; S^3/T^2 is then killed by
    # all of case (i).  D(S^3/T^2) = S^2 (3 D(S) T - 2 S D(T)) / T^3, so the
    # bracket is checked instead of expanding S^3 and T^2.
    gl = gl3_derivations(3)
    vs: VarSet = gl["D1"].varset
    nilpotent = tuple(gl[n] for n in ("D1", "D2", "D3", "DH1", "DH2", "DH3"))
    S = joint_kernel(AnsatzSpec(vs, 4, nilpotent)).basis
    T = joint_kernel(AnsatzSpec(vs, 6, nilpotent)).basis
    assert len(S) == 1 and len(T) == 1
    S, T = S[0], T[0]
    for D in curve_derivation_set(3, "general_i"):
        assert (D.apply(S) * T * 3 - S * D.apply(T) * 2).is_zero(), D.name
    E1 = gl["E1"]
    assert weight_eigenvalue(E1, S) == 4 and weight_eigenvalue(E1, T) == 6
