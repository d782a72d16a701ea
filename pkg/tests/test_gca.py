from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equiweil.errors import CarrierMismatch
from equiweil.gca import (
    AlgebraMorphism,
    Derivation,
    Element,
    GradedAlgebra,
    Generator,
    commutator,
    derivation_from_dict,
    extend_derivation,
    identity_morphism,
    operator_rows,
    tensor,
    zero_derivation,
)


def weil_u1():
    # W(u(1)): one odd degree-1 generator, one even degree-2 generator
    return GradedAlgebra([Generator("th", 1, (0, 1)), Generator("u", 2, (2, 0))])


def weil_su2_like():
    gens = [Generator(f"l{i}", 1) for i in (1, 2, 3)] + [
        Generator(f"u{i}", 2) for i in (1, 2, 3)
    ]
    return GradedAlgebra(gens)


# -- multiplication ----------------------------------------------------------


def test_koszul_sign_on_odd_swap():
    A = weil_su2_like()
    l1, l2 = A.gen_named("l1"), A.gen_named("l2")
    assert str(l1 * l2) == "l1*l2"
    assert l2 * l1 == -(l1 * l2)


def test_odd_square_is_zero():
    A = weil_su2_like()
    l1 = A.gen_named("l1")
    assert (l1 * l1).is_zero()


def test_mixed_product_hand_expansion():
    A = weil_su2_like()
    u, l1, l2 = A.gen_named("u1"), A.gen_named("l1"), A.gen_named("l2")
    lhs = (u + l1 * l2) * u
    assert lhs == u * u + u * (l1 * l2)
    assert str(lhs) == "l1*l2*u1 + u1^2"


def test_carrier_mismatch():
    A, B = weil_u1(), weil_u1()
    with pytest.raises(CarrierMismatch):
        A.gen_named("u") * B.gen_named("u")


@st.composite
def homogeneous_elements(draw, A, max_degree=6):
    n = draw(st.integers(min_value=1, max_value=max_degree))
    basis = A.degree_basis(n)
    coeffs = draw(
        st.lists(
            st.integers(min_value=-3, max_value=3),
            min_size=len(basis),
            max_size=len(basis),
        )
    )
    return Element.build(A, {m: Fraction(c) for m, c in zip(basis, coeffs)})


W = weil_su2_like()


@given(homogeneous_elements(W), homogeneous_elements(W), homogeneous_elements(W))
@settings(max_examples=30, deadline=None)
def test_associative_and_graded_commutative(a, b, c):
    assert (a * b) * c == a * (b * c)
    sign = -1 if (a.degree() % 2 and b.degree() % 2) else 1
    assert a * b == (b * a).scale(sign)


# -- derivations -------------------------------------------------------------


def d_w_u1(A):
    return derivation_from_dict(A, 1, {"th": A.gen_named("u")})


def test_koszul_differential_on_generators():
    A = weil_u1()
    d_k = derivation_from_dict(A, 1, {"th": A.gen_named("u")})
    assert d_k(A.gen_named("th")) == A.gen_named("u")
    assert d_k(A.gen_named("u")).is_zero()


def test_contraction_on_symmetric_part_vanishes():
    A = weil_u1()
    iota = derivation_from_dict(A, -1, {"th": A.one()})
    assert iota(A.gen_named("u")).is_zero()
    assert iota(A.gen_named("th")) == A.one()


def test_contraction_leibniz_two_odd_factors():
    A = weil_su2_like()
    iota1 = derivation_from_dict(A, -1, {"l1": A.one()})
    l1, l2 = A.gen_named("l1"), A.gen_named("l2")
    # iota_1(l1 l2) = l2, iota_1(l2 l1) = -l2
    assert iota1(l1 * l2) == l2
    assert iota1(l2 * l1) == -l2


def test_derivation_degree_validation():
    A = weil_u1()
    with pytest.raises(ValueError):
        derivation_from_dict(A, 1, {"th": A.gen_named("th")})


@given(homogeneous_elements(W, 5), homogeneous_elements(W, 5))
@settings(max_examples=30, deadline=None)
def test_leibniz_rule_random(a, b):
    d = derivation_from_dict(
        W,
        1,
        {
            "l1": W.gen_named("u1"),
            "l2": W.gen_named("u2") + W.gen_named("l1") * W.gen_named("l3"),
            "u3": W.gen_named("l1") * W.gen_named("u2"),
        },
    )
    sign = -1 if a.degree() % 2 else 1
    assert d(a * b) == d(a) * b + (a * d(b)).scale(sign)
    iota = derivation_from_dict(W, -1, {"l1": W.one(), "l2": W.one()})
    assert iota(a * b) == iota(a) * b + (a * iota(b)).scale(sign)


def test_commutator_of_contractions_vanishes():
    A = weil_su2_like()
    i1 = derivation_from_dict(A, -1, {"l1": A.one()})
    i2 = derivation_from_dict(A, -1, {"l2": A.one()})
    assert commutator(i1, i2).is_zero()
    assert commutator(i1, i1).is_zero()


def test_commutator_squares_differential():
    A = weil_u1()
    d = d_w_u1(A)
    dd = commutator(d, d)
    # [d, d] = 2 d^2 = 0 when d^2 = 0
    assert dd.is_zero()


# -- degree bases ------------------------------------------------------------


def test_degree_basis_w_u1():
    A = weil_u1()
    assert [A.mono_str(m) for m in A.degree_basis(2)] == ["u"]
    assert [A.mono_str(m) for m in A.degree_basis(3)] == ["th*u"]


def test_degree_basis_w_su2_degree_two():
    A = weil_su2_like()
    names = [A.mono_str(m) for m in A.degree_basis(2)]
    assert len(names) == 6
    assert set(names) == {"l1*l2", "l1*l3", "l2*l3", "u1", "u2", "u3"}


def series_count(gens, n):
    """Generating-function oracle: prod (1+t^d_odd) * prod 1/(1-t^d_even)."""
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[0] = Fraction(1)
    for g in gens:
        new = list(coeffs)
        if g.degree % 2:
            for k in range(n, g.degree - 1, -1):
                new[k] += coeffs[k - g.degree]
        else:
            new = [Fraction(0)] * (n + 1)
            new[0] = coeffs[0]
            for k in range(1, n + 1):
                new[k] = coeffs[k]
                if k >= g.degree:
                    new[k] += new[k - g.degree]
        coeffs = new
    return coeffs[n]


@pytest.mark.parametrize("n", range(0, 9))
def test_degree_basis_counts_match_series(n):
    A = weil_su2_like()
    assert len(A.degree_basis(n)) == series_count(A.gens, n)


def test_degree_basis_deterministic():
    A = weil_su2_like()
    assert A.degree_basis(4) == A.degree_basis(4)


# -- tensor products ---------------------------------------------------------


def test_tensor_degree_basis():
    A = weil_u1()
    B = GradedAlgebra([Generator("lM", 1)])
    t = tensor(A, B)
    names = [t.algebra.mono_str(m) for m in t.algebra.degree_basis(2)]
    assert set(names) == {"u", "th*lM"}


def test_tensor_differential_squares_to_zero():
    A = weil_u1()
    B = GradedAlgebra([Generator("x3", 1)])
    t = tensor(A, B)
    d = extend_derivation(t, d_w_u1(A), "left").add(
        extend_derivation(t, zero_derivation(B, 1), "right")
    )
    for n in range(0, 6):
        for m in t.algebra.degree_basis(n):
            x = Element.build(t.algebra, {m: Fraction(1)})
            assert d(d(x)).is_zero()


def test_tensor_cross_sign():
    A = GradedAlgebra([Generator("a", 1)])
    B = GradedAlgebra([Generator("b", 1)])
    t = tensor(A, B)
    a, b = t.left(A.gen_named("a")), t.right(B.gen_named("b"))
    assert b * a == -(a * b)


def test_tensor_renames_collisions():
    A = GradedAlgebra([Generator("x", 1)])
    B = GradedAlgebra([Generator("x", 2)])
    t = tensor(A, B)
    assert [g.name for g in t.algebra.gens] == ["x", "R.x"]


def test_tensor_associative_up_to_renaming():
    A = GradedAlgebra([Generator("a", 1)])
    B = GradedAlgebra([Generator("b", 2)])
    C = GradedAlgebra([Generator("c", 3)])
    left = tensor(tensor(A, B).algebra, C).algebra
    right = tensor(A, tensor(B, C).algebra).algebra
    assert [(g.name, g.degree) for g in left.gens] == [
        (g.name, g.degree) for g in right.gens
    ]
    for n in range(0, 7):
        assert len(left.degree_basis(n)) == len(right.degree_basis(n))


# -- morphisms ---------------------------------------------------------------


def test_morphism_multiplicative_with_signs():
    A = weil_su2_like()
    f = identity_morphism(A)
    x = A.gen_named("l1") * A.gen_named("l2") + A.gen_named("u3")
    assert f(x) == x

    # swap l1 <-> l2: must send l1*l2 to l2*l1 = -l1*l2
    images = list(f.images)
    i1, i2 = A.index["l1"], A.index["l2"]
    images[i1], images[i2] = images[i2], images[i1]
    swap = AlgebraMorphism(A, A, tuple(images))
    assert swap(A.gen_named("l1") * A.gen_named("l2")) == -(
        A.gen_named("l1") * A.gen_named("l2")
    )


def test_operator_rows_shape():
    A = weil_u1()
    d = d_w_u1(A)
    rows = operator_rows(A, d, 1, 2)
    assert rows == [[Fraction(1)]]


# -- weight caps -------------------------------------------------------------


def test_weight_cap_truncates_products():
    A = GradedAlgebra(
        [Generator("x", 0, weight=1), Generator("dx", 1)], weight_cap=2
    )
    x = A.gen_named("x")
    assert (x * x * x).is_zero()
    assert not (x * x).is_zero()


def test_element_str_canonical():
    A = weil_u1()
    x = A.gen_named("u").scale(Fraction(-3, 2)) + A.gen_named("th") * A.gen_named("u")
    assert str(x) == "-3/2*u + th*u"
    assert str(A.zero()) == "0"
    assert str(A.one()) == "1"
