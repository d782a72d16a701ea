from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equiweil import exactlin
from equiweil.errors import CompositionNonzero
from equiweil.exactlin import (
    FGAbelianGroup,
    LatticeReducer,
    RationalMatrix,
    cohomology_of_complex,
    det,
    in_lattice,
    integer_kernel,
    invariant_factors,
    kernel_basis,
    minor_gcds,
    rank,
    smith_normal_form,
    solve,
    solve_integer,
)


def M(rows):
    return RationalMatrix.from_rows(rows)


small_ints = st.integers(min_value=-9, max_value=9)


@st.composite
def int_matrices(draw, max_dim=4):
    r = draw(st.integers(min_value=1, max_value=max_dim))
    c = draw(st.integers(min_value=1, max_value=max_dim))
    rows = draw(
        st.lists(
            st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r
        )
    )
    return M(rows)


# -- kernels ---------------------------------------------------------------


def test_kernel_of_zero_map():
    assert kernel_basis(M([[0]])) == [(Fraction(1),)]


def test_kernel_of_identity_is_empty():
    assert kernel_basis(RationalMatrix.identity(3)) == []


def test_kernel_rank_one_two_by_two():
    # hand row-reduction: [[1,1],[2,2]] ~ [[1,1],[0,0]], kernel spanned by (1,-1)
    basis = kernel_basis(M([[1, 1], [2, 2]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] == -v[1] and v[0] != 0


@given(int_matrices())
@settings(max_examples=40, deadline=None)
def test_kernel_vectors_annihilate(m):
    for v in kernel_basis(m):
        assert all(x == 0 for x in m.apply(v))
    assert len(kernel_basis(m)) == m.cols - rank(m)


def test_solve_particular():
    m = M([[1, 2], [3, 4]])
    x = solve(m, (5, 11))
    assert x is not None
    assert m.apply(x) == (Fraction(5), Fraction(11))
    assert solve(M([[1, 1], [1, 1]]), (0, 1)) is None


# -- Smith normal form -----------------------------------------------------


def test_snf_single_entry():
    _, d, _ = smith_normal_form(M([[2]]))
    assert d.to_rows() == [[2]]


def test_snf_two_by_two():
    # determinantal-divisor oracle: d1 = gcd(entries) = 2, d1*d2 = |det| = 8
    u, d, v = smith_normal_form(M([[2, 4], [6, 8]]))
    assert d.to_rows() == [[2, 0], [0, 4]]
    assert u.mul(M([[2, 4], [6, 8]])).mul(v).to_rows() == d.to_rows()


def test_snf_rp2_boundary_gives_z2_homology():
    # cellular RP^2: boundary degree 2 -> 1 is multiplication by 2,
    # H_1 = ker(d_1)/im(d_2) = Z/2
    d2 = M([[2]])
    d1 = RationalMatrix.zero(1, 1)
    h1 = cohomology_of_complex(d2, d1, ring="Z")
    assert h1 == FGAbelianGroup(0, (2,))


@given(int_matrices())
@settings(max_examples=50, deadline=None)
def test_snf_properties(m):
    u, d, v = smith_normal_form(m)
    assert u.mul(m).mul(v).to_rows() == d.to_rows()
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    diag = [d.entry(i, i) for i in range(min(m.rows, m.cols))]
    for i, x in enumerate(diag):
        assert x >= 0
        if i and diag[i - 1]:
            assert x % diag[i - 1] == 0
        if not diag[i - 1] if i else False:
            assert x == 0
    # off-diagonal zero
    assert all(i == j for (i, j) in d.entries)


@given(int_matrices(max_dim=3))
@settings(max_examples=30, deadline=None)
def test_snf_matches_minor_gcd_oracle(m):
    gcds = minor_gcds(m)
    facs = invariant_factors(m)
    assert len(facs) == len(gcds)
    prev = 1
    for f, g in zip(facs, gcds):
        assert f == g // prev
        prev = g


# -- cohomology of complexes ------------------------------------------------


def test_cohomology_trivial_line():
    d0 = RationalMatrix.zero(1, 0)
    d1 = RationalMatrix.zero(0, 1)
    assert cohomology_of_complex(d0, d1, ring="Q") == FGAbelianGroup(1)


def rp_delta(n, N, order=2):
    """Cellular cochain differential C^n -> C^{n+1} for RP^N-style complexes."""
    if n < 0 or n >= N:
        return RationalMatrix.zero(1 if 0 <= n <= N else 0, 1 if 0 <= n + 1 <= N else 0)
    return M([[order if n % 2 == 1 else 0]])


def test_rp9_degree_two_torsion():
    h2 = cohomology_of_complex(rp_delta(1, 9), rp_delta(2, 9), ring="Z")
    assert h2 == FGAbelianGroup(0, (2,))


def test_cp4_degree_three_vanishes():
    # CP^4 cellular cochain complex: odd groups are zero
    d2 = RationalMatrix.zero(0, 1)  # C^2 -> C^3 = 0
    d3 = RationalMatrix.zero(1, 0)  # C^3 -> C^4
    assert cohomology_of_complex(d2, d3, ring="Z") == FGAbelianGroup(0)


def test_composition_nonzero_rejected():
    with pytest.raises(CompositionNonzero):
        cohomology_of_complex(M([[1]]), M([[1]]), ring="Q")


@given(int_matrices(max_dim=3))
@settings(max_examples=30, deadline=None)
def test_exact_pair_has_rank_zero(m):
    # build d_next with kernel exactly im(m): rows spanning the left annihilator
    ann = kernel_basis(m.transpose())
    d_next = (
        RationalMatrix.from_rows([list(v) for v in ann])
        if ann
        else RationalMatrix.zero(0, m.rows)
    )
    h = cohomology_of_complex(m, d_next, ring="Q")
    assert h.free_rank == 0


# -- lattices ---------------------------------------------------------------


def test_integer_kernel_saturated():
    # kernel of [1 2] over Z is generated by (2, -1), not (4, -2)
    basis = integer_kernel(M([[1, 2]]))
    assert len(basis) == 1
    assert basis[0] in ((2, -1), (-2, 1))


def test_solve_integer():
    m = M([[2, 0], [0, 3]])
    assert solve_integer(m, (4, 9)) == (2, 3)
    assert solve_integer(m, (1, 0)) is None
    assert solve_integer(m, (Fraction(1, 2), 0)) is None


def test_in_lattice_rational_generators():
    gens = [(Fraction(1, 2), 0), (0, 1)]
    assert in_lattice(gens, (Fraction(3, 2), 5))
    assert not in_lattice(gens, (Fraction(1, 3), 0))


def test_lattice_reducer_canonical_and_idempotent():
    red = LatticeReducer([(2, 0), (0, 3)])
    rep, coeffs = red.reduce((5, -1))
    assert rep == (1, 2)
    assert coeffs == (2, -1)
    rep2, coeffs2 = red.reduce(rep)
    assert rep2 == rep and coeffs2 == (0, 0)


def test_lattice_reducer_handles_dependent_generators():
    red = LatticeReducer([(2, 2), (4, 4), (0, 6)])
    rep, coeffs = red.reduce((3, 3))
    assert rep == (1, 1)
    v = (
        3 - (coeffs[0] * 2 + coeffs[1] * 4 + coeffs[2] * 0),
        3 - (coeffs[0] * 2 + coeffs[1] * 4 + coeffs[2] * 6),
    )
    assert v == rep


def test_fg_abelian_group_validation():
    with pytest.raises(ValueError):
        FGAbelianGroup(0, (3, 2))
    assert str(FGAbelianGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
    assert str(FGAbelianGroup(0)) == "0"
