"""Lie algebra data: structure constants, coadjoint action, invariant polynomials.

Structure constants are exact rationals; matrix representations may have
Gaussian rational entries (anti-Hermitian conventions for u(n)).  Invariant
polynomial generators come from characteristic-polynomial coefficients of the
defining representation and are kept *unnormalised*: no 2*pi or i factors are
inserted, and the choice is recorded as metadata on geometric models instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoRepresentation, NotInvariant
from .exactlin import RationalMatrix
from .scalars import GaussianRational, I, is_zero, norm_scalar, scalar_str


@dataclass(frozen=True)
class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    ``structure[(a, b, c)]`` is the coefficient of basis vector a in
    [xi_b, xi_c]; only nonzero values are stored, and both (a,b,c) and the
    antisymmetric partner (a,c,b) are kept explicit.
    """

    name: str
    basis_names: tuple
    structure: dict = field(default_factory=dict)
    defining_rep: tuple | None = None

    def __post_init__(self):
        clean = {}
        for (a, b, c), v in self.structure.items():
            v = norm_scalar(Fraction(v) if not isinstance(v, Fraction) else v)
            if v:
                clean[(a, b, c)] = v
        object.__setattr__(self, "structure", clean)
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        if self.defining_rep is not None:
            rep = tuple(
                tuple(tuple(norm_scalar(x) for x in row) for row in mat)
                for mat in self.defining_rep
            )
            object.__setattr__(self, "defining_rep", rep)

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def c(self, a, b, c) -> Fraction:
        return self.structure.get((a, b, c), Fraction(0))

    def bracket(self, b, c):
        """Coefficient vector of [xi_b, xi_c] in the basis."""
        return tuple(self.c(a, b, c) for a in range(self.dim))

    @property
    def is_abelian(self) -> bool:
        return not self.structure


@dataclass(frozen=True)
class LieReport:
    ok: bool
    violations: tuple = ()


def validate_lie(g: LieAlgebra) -> LieReport:
    """Check antisymmetry, the Jacobi identity, and representation compatibility."""
    bad = []
    n = g.dim
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if g.c(a, b, c) != -g.c(a, c, b):
                    bad.append(
                        {
                            "relation": "antisymmetry",
                            "at": (a, b, c),
                            "detail": f"c^{a}_{{{b}{c}}} != -c^{a}_{{{c}{b}}}",
                        }
                    )
    for b, c, e in itertools.combinations(range(n), 3):
        for d in range(n):
            s = Fraction(0)
            for (x, y, z) in ((b, c, e), (c, e, b), (e, b, c)):
                for m in range(n):
                    s += g.c(m, y, z) * g.c(d, x, m)
            if s != 0:
                bad.append(
                    {
                        "relation": "jacobi",
                        "at": (b, c, e),
                        "detail": f"component {d} sums to {s}",
                    }
                )
    if g.defining_rep is not None:
        if len(g.defining_rep) != n:
            bad.append({"relation": "rep-size", "at": (), "detail": "one matrix per basis vector required"})
        else:
            for b in range(n):
                for c in range(n):
                    lhs = _mat_sub(
                        _mat_mul(g.defining_rep[b], g.defining_rep[c]),
                        _mat_mul(g.defining_rep[c], g.defining_rep[b]),
                    )
                    rhs = _mat_lincomb(g.bracket(b, c), g.defining_rep)
                    if lhs != rhs:
                        bad.append(
                            {
                                "relation": "rep-bracket",
                                "at": (b, c),
                                "detail": "rho([x,y]) != [rho x, rho y]",
                            }
                        )
    return LieReport(ok=not bad, violations=tuple(bad))


def _mat_mul(a, b):
    n = len(a)
    m = len(b[0])
    k = len(b)
    return tuple(
        tuple(norm_scalar(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0))) for j in range(m))
        for i in range(n)
    )


def _mat_sub(a, b):
    return tuple(
        tuple(norm_scalar(x - y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def _mat_lincomb(coeffs, mats):
    n = len(mats[0])
    acc = [[Fraction(0)] * n for _ in range(n)]
    for c, m in zip(coeffs, mats):
        if c:
            for i in range(n):
                for j in range(n):
                    acc[i][j] = acc[i][j] + c * m[i][j]
    return tuple(tuple(norm_scalar(x) for x in row) for row in acc)


def coadjoint_matrices(g: LieAlgebra):
    """Matrices of ad*_{xi_a} on g* in the dual basis.

    ad*_a u^b = -sum_c c^b_{ac} u^c, i.e. the transpose-negate of the adjoint
    matrices.  Entry (c, b) of matrix a is the u^c-coefficient of ad*_a u^b.
    """
    out = []
    for a in range(g.dim):
        entries = {}
        for b in range(g.dim):
            for c in range(g.dim):
                v = -g.c(b, a, c)
                if v:
                    entries[(c, b)] = v
        out.append(RationalMatrix(g.dim, g.dim, entries))
    return tuple(out)


# ---------------------------------------------------------------------------
# polynomials on the Lie algebra (coordinates = dual basis)

# A polynomial is a dict: sorted index tuple (a monomial as a multiset of
# variable indices) -> scalar.  (0, 0, 2) means x0^2 * x2.


def poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2))
            s = norm_scalar(out.get(m, Fraction(0)) + c1 * c2)
            if is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
    return out


def poly_scale(p, s):
    return {m: norm_scalar(c * s) for m, c in p.items() if not is_zero(norm_scalar(c * s))}


def poly_add(p, q):
    out = dict(p)
    for m, c in q.items():
        s = norm_scalar(out.get(m, Fraction(0)) + c)
        if is_zero(s):
            out.pop(m, None)
        else:
            out[m] = s
    return out


def poly_eval(p, xs):
    total = Fraction(0)
    for m, c in p.items():
        v = c
        for i in m:
            v = v * xs[i]
        total = total + v
    return norm_scalar(total)


def _poly_partial(p, i):
    out = {}
    for m, c in p.items():
        k = m.count(i)
        if not k:
            continue
        lst = list(m)
        lst.remove(i)
        key = tuple(lst)
        s = norm_scalar(out.get(key, Fraction(0)) + k * c)
        if is_zero(s):
            out.pop(key, None)
        else:
            out[key] = s
    return out


def coadjoint_derivative(g: LieAlgebra, a, p):
    """L_{xi_a} acting on a polynomial via the coadjoint action on each variable."""
    out = {}
    for b in range(g.dim):
        dp = _poly_partial(p, b)
        if not dp:
            continue
        for c_idx in range(g.dim):
            coeff = -g.c(b, a, c_idx)
            if coeff:
                term = poly_scale(poly_mul(dp, {(c_idx,): Fraction(1)}), coeff)
                out = poly_add(out, term)
    return out


from math import factorial as _fact


@dataclass(frozen=True)
class InvariantPolynomial:
    """Element of S^k g*, stored as a homogeneous polynomial in dual coordinates."""

    lie: LieAlgebra
    degree: int
    coeffs: dict  # sorted index tuple of length `degree` -> scalar
    label: str = ""

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            if len(m) != self.degree:
                raise ValueError("non-homogeneous invariant polynomial")
            c = norm_scalar(c)
            if not is_zero(c):
                clean[tuple(sorted(m))] = c
        object.__setattr__(self, "coeffs", clean)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def value_on(self, xs):
        """Evaluate as a polynomial function at a coordinate vector."""
        return poly_eval(self.coeffs, xs)

    def polarized(self, indices):
        """Value of the symmetric multilinear form on basis vectors xi_{i1}..xi_{ik}."""
        if len(indices) != self.degree:
            raise ValueError("wrong number of slots")
        m = tuple(sorted(indices))
        c = self.coeffs.get(m)
        if c is None:
            return Fraction(0)
        mult = 1
        for i in set(m):
            mult *= _fact(m.count(i))
        return norm_scalar(c * Fraction(mult, _fact(self.degree)))

    def mul(self, other: "InvariantPolynomial") -> "InvariantPolynomial":
        if self.lie is not other.lie and self.lie != other.lie:
            raise ValueError("polynomials on different Lie algebras")
        label = f"{self.label}*{other.label}" if self.label and other.label else ""
        return InvariantPolynomial(
            self.lie, self.degree + other.degree, poly_mul(self.coeffs, other.coeffs), label
        )

    def is_coadjoint_invariant(self) -> bool:
        return all(
            not coadjoint_derivative(self.lie, a, self.coeffs)
            for a in range(self.lie.dim)
        )

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = self.lie.basis_names
        parts = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            factors = []
            for i in sorted(set(m)):
                k = m.count(i)
                factors.append(f"u_{names[i]}" + (f"^{k}" if k > 1 else ""))
            mono = "*".join(factors)
            parts.append(f"{scalar_str(c)}*{mono}")
        return " + ".join(parts)


def invariant_generators(g: LieAlgebra, max_k: int):
    """Invariant polynomial generators up to degree max_k.

    Abelian algebras get the full monomial basis of S^k g*; matrix algebras
    get the characteristic-polynomial coefficients sigma_k of the defining
    representation, polarised.  Every output is checked against infinitesimal
    coadjoint invariance.
    """
    out = []
    if g.is_abelian:
        for k in range(1, max_k + 1):
            for m in itertools.combinations_with_replacement(range(g.dim), k):
                out.append(InvariantPolynomial(g, k, {tuple(m): Fraction(1)}, label=_mono_label(g, m)))
    elif g.defining_rep is not None:
        n = len(g.defining_rep[0])
        sigmas = characteristic_coefficients(g)
        for k in range(1, min(max_k, n) + 1):
            out.append(sigmas[k])
    else:
        raise NoRepresentation(
            f"{g.name}: invariant generators need a defining representation or an abelian algebra"
        )
    for p in out:
        if not p.is_coadjoint_invariant():
            raise NotInvariant(f"generated polynomial {p} is not coadjoint-invariant")
    return out


def _mono_label(g, m):
    names = g.basis_names
    return "*".join(
        f"u_{names[i]}" + (f"^{m.count(i)}" if m.count(i) > 1 else "")
        for i in sorted(set(m))
    )


def characteristic_coefficients(g: LieAlgebra):
    """sigma_k with sigma_k(X,..,X) = coefficient of lambda^(n-k) in det(lambda I - rho(X)).

    Returned as a dict k -> InvariantPolynomial for 1 <= k <= n.
    """
    if g.defining_rep is None:
        raise NoRepresentation(f"{g.name} has no defining representation")
    n = len(g.defining_rep[0])
    dim = g.dim
    # polynomial ring entries keyed by (lambda_exponent, x-monomial tuple)
    def entry(i, j):
        e = {}
        if i == j:
            e[(1, ())] = Fraction(1)
        for a in range(dim):
            v = g.defining_rep[a][i][j]
            if not is_zero(v):
                key = (0, (a,))
                e[key] = norm_scalar(e.get(key, Fraction(0)) - v)
        return e

    mat = [[entry(i, j) for j in range(n)] for i in range(n)]
    detp = {}
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        term = {(0, ()): Fraction(sign)}
        for i in range(n):
            term = _lvmul(term, mat[i][perm[i]])
            if not term:
                break
        for k, v in term.items():
            s = norm_scalar(detp.get(k, Fraction(0)) + v)
            if is_zero(s):
                detp.pop(k, None)
            else:
                detp[k] = s
    sigmas = {}
    for k in range(1, n + 1):
        coeffs = {}
        for (le, m), v in detp.items():
            if le == n - k and len(m) == k:
                coeffs[m] = v
        sigmas[k] = InvariantPolynomial(g, k, coeffs, label=f"sigma{k}")
    return sigmas


def _lvmul(p, q):
    out = {}
    for (l1, m1), c1 in p.items():
        for (l2, m2), c2 in q.items():
            key = (l1 + l2, tuple(sorted(m1 + m2)))
            s = norm_scalar(out.get(key, Fraction(0)) + c1 * c2)
            if is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
    return out


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# built-in algebras


def abelian(n: int, name=None, basis=None) -> LieAlgebra:
    basis = tuple(basis) if basis else tuple(f"e{i+1}" for i in range(n))
    return LieAlgebra(name or f"abelian{n}", basis, {})


def u1(name="u1", basis=("e",)) -> LieAlgebra:
    return LieAlgebra(name, tuple(basis), {}, defining_rep=(((I,),),))


def su2(name="su2") -> LieAlgebra:
    structure = {}
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
           (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    for (b, c, a), s in eps.items():
        structure[(a, b, c)] = Fraction(s)
    half_i = GaussianRational(0, Fraction(-1, 2))
    rep = (
        ((0, half_i), (half_i, 0)),
        ((0, Fraction(-1, 2)), (Fraction(1, 2), 0)),
        ((half_i, 0), (0, GaussianRational(0, Fraction(1, 2)))),
    )
    return LieAlgebra(name, ("e1", "e2", "e3"), structure, defining_rep=rep)


def u2(name="u2") -> LieAlgebra:
    # basis: i*E11, i*E22, E12 - E21, i*(E12 + E21)
    rep = (
        ((I, 0), (0, 0)),
        ((0, 0), (0, I)),
        ((0, Fraction(1)), (Fraction(-1), 0)),
        ((0, I), (I, 0)),
    )
    structure = {}

    def setb(b, c, coeffs):
        for a, v in coeffs.items():
            structure[(a, b, c)] = Fraction(v)
            structure[(a, c, b)] = Fraction(-v)

    setb(0, 2, {3: 1})
    setb(0, 3, {2: -1})
    setb(1, 2, {3: -1})
    setb(1, 3, {2: 1})
    setb(2, 3, {0: 2, 1: -2})
    return LieAlgebra(name, ("e1", "e2", "e3", "e4"), structure, defining_rep=rep)


def heisenberg3(name="heis3") -> LieAlgebra:
    structure = {(2, 0, 1): Fraction(1), (2, 1, 0): Fraction(-1)}
    return LieAlgebra(name, ("p", "q", "z"), structure)


def direct_sum(g: LieAlgebra, k: LieAlgebra, name=None) -> LieAlgebra:
    """Block direct sum g + k; basis of g first, then k."""
    structure = dict(g.structure)
    off = g.dim
    for (a, b, c), v in k.structure.items():
        structure[(a + off, b + off, c + off)] = v
    names = tuple(f"{g.name}.{x}" for x in g.basis_names) + tuple(
        f"{k.name}.{x}" for x in k.basis_names
    )
    return LieAlgebra(name or f"{g.name}+{k.name}", names, structure)
