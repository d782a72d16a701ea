import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equiweil import liealg
from equiweil.errors import NoRepresentation
from equiweil.exactlin import RationalMatrix
from equiweil.liealg import (
    InvariantPolynomial,
    LieAlgebra,
    abelian,
    characteristic_coefficients,
    coadjoint_matrices,
    direct_sum,
    heisenberg3,
    invariant_generators,
    su2,
    u1,
    u2,
    validate_lie,
)
from equiweil.scalars import GaussianRational, norm_scalar


ALL_BUILTINS = [u1(), abelian(2), su2(), u2(), heisenberg3()]


@pytest.mark.parametrize("g", ALL_BUILTINS, ids=lambda g: g.name)
def test_builtins_validate(g):
    report = validate_lie(g)
    assert report.ok, report.violations


def test_su2_jacobi_direct():
    g = su2()
    # direct Jacobi check on the epsilon structure constants
    for b, c, e in itertools.combinations(range(3), 3):
        for d in range(3):
            s = Fraction(0)
            for (x, y, z) in ((b, c, e), (c, e, b), (e, b, c)):
                for m in range(3):
                    s += g.c(m, y, z) * g.c(d, x, m)
            assert s == 0


def test_antisymmetry_violation_reported():
    g = LieAlgebra("bad", ("a", "b", "c"), {(0, 1, 2): Fraction(1), (0, 2, 1): Fraction(1)})
    report = validate_lie(g)
    assert not report.ok
    assert any(
        v["relation"] == "antisymmetry" and v["at"] == (0, 1, 2) for v in report.violations
    )


def test_rep_incompatibility_reported():
    g = LieAlgebra(
        "badrep",
        ("a", "b"),
        {},
        defining_rep=(((0, 1), (0, 0)), ((0, 0), (1, 0))),
    )
    report = validate_lie(g)
    assert any(v["relation"] == "rep-bracket" for v in report.violations)


# -- coadjoint action --------------------------------------------------------


def test_abelian_coadjoint_zero():
    mats = coadjoint_matrices(abelian(2))
    assert all(m.is_zero() for m in mats)


def test_su2_coadjoint_first_matrix():
    m = coadjoint_matrices(su2())[0]
    # transpose-negate of ad_{e1}: +-1 at the swapped (2,3) slots, zero elsewhere
    assert m.entry(1, 2) == -1
    assert m.entry(2, 1) == 1
    assert len(m.entries) == 2


def test_heisenberg_center_acts_trivially():
    mats = coadjoint_matrices(heisenberg3())
    assert mats[2].is_zero()


@pytest.mark.parametrize("g", [su2(), u2(), heisenberg3()], ids=lambda g: g.name)
def test_coadjoint_commutation(g):
    mats = coadjoint_matrices(g)
    for a in range(g.dim):
        for b in range(g.dim):
            lhs = mats[a].mul(mats[b]).add(mats[b].mul(mats[a]).neg())
            rhs = RationalMatrix.zero(g.dim, g.dim)
            for c, v in enumerate(g.bracket(a, b)):
                if v:
                    rhs = rhs.add(RationalMatrix(g.dim, g.dim, {k: v * w for k, w in mats[c].entries.items()}))
            assert lhs.to_rows() == rhs.to_rows()


# -- invariant polynomials ---------------------------------------------------


def test_u1_generators_are_monomials():
    gens = invariant_generators(u1(), 2)
    assert len(gens) == 2
    u, usq = gens
    assert u.degree == 1 and u.polarized((0,)) == 1
    assert usq.degree == 2 and usq.polarized((0, 0)) == 1


def test_su2_sigma2_is_killing_proportional():
    sig = characteristic_coefficients(su2())[2]
    # det(rho(X)) = (x1^2 + x2^2 + x3^2)/4 for the spin-1/2 representation
    assert sig.coeffs == {
        (0, 0): Fraction(1, 4),
        (1, 1): Fraction(1, 4),
        (2, 2): Fraction(1, 4),
    }
    assert sig.value_on((1, 2, 3)) == Fraction(14, 4)


def test_u2_generators():
    gens = invariant_generators(u2(), 2)
    assert [p.degree for p in gens] == [1, 2]
    sigma1, sigma2 = gens
    # sigma1(X) = -tr(rho(X)) = -i(x1 + x2)
    assert sigma1.coeffs == {
        (0,): GaussianRational(0, -1),
        (1,): GaussianRational(0, -1),
    }
    # sigma2 = det(rho(X)) = -x1 x2 + x3^2 + x4^2
    assert sigma2.coeffs == {
        (0, 1): Fraction(-1),
        (2, 2): Fraction(1),
        (3, 3): Fraction(1),
    }


@pytest.mark.parametrize("g", [u1(), abelian(3), su2(), u2()], ids=lambda g: g.name)
def test_generators_are_invariant(g):
    for p in invariant_generators(g, 2):
        assert p.is_coadjoint_invariant()


def test_no_representation_error():
    with pytest.raises(NoRepresentation):
        invariant_generators(heisenberg3(), 2)


rational3 = st.tuples(*([st.integers(min_value=-5, max_value=5)] * 3)).map(
    lambda t: tuple(Fraction(x) for x in t)
)


@given(rational3)
@settings(max_examples=20, deadline=None)
def test_su2_polarized_diagonal_matches_charpoly(xs):
    g = su2()
    sig = characteristic_coefficients(g)[2]
    # oracle: determinant of rho(X) computed numerically
    rho = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
    acc = [[0, 0], [0, 0]]
    for a in range(3):
        for i in range(2):
            for j in range(2):
                acc[i][j] = acc[i][j] + xs[a] * g.defining_rep[a][i][j]
    detv = norm_scalar(acc[0][0] * acc[1][1] - acc[0][1] * acc[1][0])
    assert sig.value_on(xs) == detv


@given(st.tuples(*([st.integers(min_value=-4, max_value=4)] * 4)))
@settings(max_examples=20, deadline=None)
def test_u2_polarized_diagonal_matches_charpoly(xs):
    g = u2()
    sigs = characteristic_coefficients(g)
    acc = [[0, 0], [0, 0]]
    for a in range(4):
        for i in range(2):
            for j in range(2):
                acc[i][j] = acc[i][j] + xs[a] * g.defining_rep[a][i][j]
    tr = norm_scalar(acc[0][0] + acc[1][1])
    detv = norm_scalar(acc[0][0] * acc[1][1] - acc[0][1] * acc[1][0])
    assert sigs[1].value_on(xs) == norm_scalar(-1 * tr)
    assert sigs[2].value_on(xs) == detv


def test_polarization_multiset_factor():
    g = abelian(2)
    p = InvariantPolynomial(g, 2, {(0, 1): Fraction(1)})  # x0 * x1
    assert p.polarized((0, 1)) == Fraction(1, 2)
    assert p.polarized((0, 0)) == 0
    # T(X, X) must reproduce the polynomial
    xs = (Fraction(3), Fraction(5))
    total = sum(
        p.polarized((i, j)) * xs[i] * xs[j] for i in range(2) for j in range(2)
    )
    assert total == p.value_on(xs)


def test_invariant_product():
    g = u2()
    s1 = characteristic_coefficients(g)[1]
    sq = s1.mul(s1)
    assert sq.degree == 2
    # (-i(x1+x2))^2 = -(x1 + x2)^2
    assert sq.coeffs == {
        (0, 0): Fraction(-1),
        (0, 1): Fraction(-2),
        (1, 1): Fraction(-1),
    }
    assert sq.is_coadjoint_invariant()


def test_direct_sum_blocks():
    g = direct_sum(su2(), u1())
    assert g.dim == 4
    assert g.bracket(0, 1) == (0, 0, 1, 0)
    assert g.bracket(0, 3) == (0, 0, 0, 0)
    assert validate_lie(g).ok
