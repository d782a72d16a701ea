"""Exact linear algebra over Q and Z.

Kernels, ranks and linear solves use Gaussian elimination on sparse rational
matrices; Smith normal form uses elementary row/column reduction pivoting on
the smallest nonzero entry.  Matrices at the scales this package meets are at
most a few hundred rows, so simplicity wins over asymptotics.  No floating
point anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CompositionNonzero

Vector = tuple


def _frac(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    """Sparse exact rational matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry index ({i},{j}) out of range")
            v = _frac(v)
            if v != 0:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                if v:
                    entries[(i, j)] = _frac(v)
        return cls(len(rows), ncols, entries)

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def entry(self, i, j) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def to_rows(self):
        rows = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    def mul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        by_row = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, []).append((k, v))
        other_rows = {}
        for (k, j), w in other.entries.items():
            other_rows.setdefault(k, []).append((j, w))
        entries = {}
        for i, terms in by_row.items():
            acc = {}
            for k, v in terms:
                for j, w in other_rows.get(k, ()):
                    acc[j] = acc.get(j, Fraction(0)) + v * w
            for j, s in acc.items():
                if s != 0:
                    entries[(i, j)] = s
        return RationalMatrix(self.rows, other.cols, entries)

    def add(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        entries = dict(self.entries)
        for k, v in other.entries.items():
            s = entries.get(k, Fraction(0)) + v
            if s:
                entries[k] = s
            else:
                entries.pop(k, None)
        return RationalMatrix(self.rows, self.cols, entries)

    def neg(self) -> "RationalMatrix":
        return RationalMatrix(
            self.rows, self.cols, {k: -v for k, v in self.entries.items()}
        )

    def apply(self, vec) -> Vector:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * _frac(vec[j])
        return tuple(out)

    def is_zero(self) -> bool:
        return not self.entries

    def is_integer(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.values())


def stack_rows(mats):
    """Vertically stack matrices with equal column counts."""
    mats = list(mats)
    cols = mats[0].cols if mats else 0
    entries = {}
    off = 0
    for m in mats:
        if m.cols != cols:
            raise ValueError("column count mismatch in stack")
        for (i, j), v in m.entries.items():
            entries[(off + i, j)] = v
        off += m.rows
    return RationalMatrix(off, cols, entries)


# ---------------------------------------------------------------------------
# field elimination (generic over any exact field scalar: Fraction, Q(i))


def field_rref(rows):
    """Row-reduce a dense list-of-lists in place over any exact field.

    Returns (reduced_rows, pivot_columns).  Scalars need +, -, *, /, bool.
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def field_kernel(rows):
    """Kernel basis (list of tuples) of a dense matrix over an exact field."""
    ncols = len(rows[0]) if rows else 0
    red, pivots = field_rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def kernel_basis(m: RationalMatrix):
    """Basis of {v : m v = 0}, exact, as a list of Fraction tuples."""
    basis = field_kernel(m.to_rows())
    return [tuple(_frac(x) for x in v) for v in basis]


def rank(m: RationalMatrix) -> int:
    _, pivots = field_rref(m.to_rows())
    return len(pivots)


def solve(m: RationalMatrix, b) -> Vector | None:
    """A particular rational solution of m x = b, or None."""
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    aug = m.to_rows()
    for i in range(m.rows):
        aug[i] = aug[i] + [_frac(b[i])]
    red, pivots = field_rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][m.cols]
    return tuple(x)


def inverse(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse of a square nonsingular matrix."""
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    n = m.rows
    aug = m.to_rows()
    for i in range(n):
        aug[i] = aug[i] + [Fraction(int(i == j)) for j in range(n)]
    red, pivots = field_rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    entries = {}
    for i in range(n):
        for j in range(n):
            v = red[i][n + j]
            if v:
                entries[(i, j)] = v
    return RationalMatrix(n, n, entries)


def det(m: RationalMatrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    rows = m.to_rows()
    n = m.rows
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        d *= rows[c][c]
        inv = rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return sign * d


# ---------------------------------------------------------------------------
# Smith normal form and integer lattices


def smith_normal_form(m: RationalMatrix):
    """Return unimodular (U, D, V) with D = U m V diagonal, d_i | d_{i+1}, d_i >= 0.

    m must have integer entries.  Pivots on the smallest nonzero entry.
    """
    if not m.is_integer():
        raise ValueError("Smith normal form requires integer entries")
    a = [[int(v) for v in row] for row in m.to_rows()]
    nr, nc = m.rows, m.cols
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(nr):
            a[r][i] -= q * a[r][j]
        for r in range(nc):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(nr):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(nc):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # pivot: smallest |nonzero| in the trailing block
        piv = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility: pivot must divide the trailing block
        stray = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            row_op(t, stray, -1)  # add stray row into pivot row, redo
            continue
        t += 1
    for i in range(limit):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            U[i] = [-x for x in U[i]]
    return (
        RationalMatrix.from_rows(U),
        RationalMatrix.from_rows(a),
        RationalMatrix.from_rows(V),
    )


def invariant_factors(m: RationalMatrix):
    """Nonzero diagonal of the Smith form of m, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    out = []
    for i in range(min(m.rows, m.cols)):
        v = d.entry(i, i)
        if v:
            out.append(int(v))
    return out


def integer_kernel(m: RationalMatrix):
    """Basis of the saturated lattice {x in Z^cols : m x = 0} (m integer)."""
    u, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(m.rows, m.cols)) if d.entry(i, i))
    basis = []
    for j in range(r, m.cols):
        basis.append(tuple(int(v.entry(i, j)) for i in range(m.cols)))
    return basis


def solve_integer(m: RationalMatrix, b) -> Vector | None:
    """An integer solution x of m x = b (m integer, b rational), or None."""
    if len(b) != m.rows:
        raise ValueError("rhs length mismatch")
    u, d, v = smith_normal_form(m)
    ub = u.apply(tuple(_frac(x) for x in b))
    y = [Fraction(0)] * m.cols
    for i in range(m.rows):
        di = d.entry(i, i) if i < m.cols else Fraction(0)
        if di:
            q = ub[i] / di
            if q.denominator != 1:
                return None
            y[i] = q
        elif ub[i] != 0:
            return None
    x = v.apply(tuple(y))
    return tuple(int(c) for c in x)


def in_lattice(generators, vec) -> bool:
    """Whether vec lies in the Z-span of the given rational generator vectors."""
    generators = [tuple(_frac(x) for x in g) for g in generators]
    vec = tuple(_frac(x) for x in vec)
    if not generators:
        return all(x == 0 for x in vec)
    dim = len(vec)
    denom = 1
    for g in generators:
        for x in g:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
    cols = {}
    for j, g in enumerate(generators):
        for i, x in enumerate(g):
            if x:
                cols[(i, j)] = x * denom
    mat = RationalMatrix(dim, len(generators), cols)
    return solve_integer(mat, tuple(x * denom for x in vec)) is not None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class LatticeReducer:
    """Canonical coset representatives modulo the Z-span of integer rows.

    Builds the row Hermite normal form once; ``reduce`` then maps any rational
    vector to the unique representative whose pivot coordinates lie in
    [0, pivot).  Also reports the integer combination of the *original*
    generators that was subtracted, for callers that must mirror a reduction
    elsewhere.
    """

    def __init__(self, generator_rows):
        gens = [list(int(x) for x in g) for g in generator_rows]
        self.ngens = len(gens)
        self.dim = len(gens[0]) if gens else 0
        trans = [[int(i == j) for j in range(self.ngens)] for i in range(self.ngens)]
        rows = list(range(len(gens)))
        hnf = []
        hnf_trans = []
        start = 0
        for c in range(self.dim):
            # clear column c below start using gcd steps
            while True:
                nz = [i for i in range(start, len(gens)) if gens[i][c]]
                if not nz:
                    break
                i0 = min(nz, key=lambda i: abs(gens[i][c]))
                gens[start], gens[i0] = gens[i0], gens[start]
                trans[start], trans[i0] = trans[i0], trans[start]
                done = True
                for i in range(start + 1, len(gens)):
                    if gens[i][c]:
                        q = gens[i][c] // gens[start][c]
                        gens[i] = [x - q * y for x, y in zip(gens[i], gens[start])]
                        trans[i] = [x - q * y for x, y in zip(trans[i], trans[start])]
                        if gens[i][c]:
                            done = False
                if done:
                    break
            if start < len(gens) and gens[start][c]:
                if gens[start][c] < 0:
                    gens[start] = [-x for x in gens[start]]
                    trans[start] = [-x for x in trans[start]]
                # canonicalise entries above the pivot
                for prev in range(len(hnf)):
                    q = hnf[prev][c] // gens[start][c]
                    if q:
                        hnf[prev] = [x - q * y for x, y in zip(hnf[prev], gens[start])]
                        hnf_trans[prev] = [
                            x - q * y for x, y in zip(hnf_trans[prev], trans[start])
                        ]
                hnf.append(list(gens[start]))
                hnf_trans.append(list(trans[start]))
                start += 1
        self.hnf = hnf
        self.hnf_trans = hnf_trans
        self.pivots = []
        for row in hnf:
            for c, x in enumerate(row):
                if x:
                    self.pivots.append(c)
                    break

    def reduce(self, vec):
        """Return (representative, coeffs) with representative = vec - coeffs . generators."""
        v = [_frac(x) for x in vec]
        used = [0] * self.ngens
        for row, trow, c in zip(self.hnf, self.hnf_trans, self.pivots):
            q = v[c] // row[c]  # Fraction floor-division -> integer Fraction
            q = int(q)
            if q:
                v = [a - q * b for a, b in zip(v, row)]
                used = [a + q * b for a, b in zip(used, trow)]
        return tuple(v), tuple(used)

    def contains(self, vec) -> bool:
        rep, _ = self.reduce(vec)
        return all(x == 0 for x in rep)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Finitely generated abelian group: Z^free_rank + sum Z/d_i, d_i | d_{i+1}."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def cohomology_of_complex(d_prev: RationalMatrix, d_next: RationalMatrix, ring="Q"):
    """ker(d_next) / im(d_prev) as an FGAbelianGroup.

    d_prev maps into the middle term, d_next maps out of it; the composite
    must vanish.  Over Q the torsion list is empty; over Z torsion comes from
    the invariant factors of d_prev.
    """
    if d_prev.rows != d_next.cols:
        raise ValueError("middle dimensions disagree")
    if not d_next.mul(d_prev).is_zero():
        raise CompositionNonzero("d_next . d_prev != 0")
    r_prev = rank(d_prev)
    free = (d_next.cols - rank(d_next)) - r_prev
    if ring == "Q":
        return FGAbelianGroup(free, ())
    if ring == "Z":
        if not (d_prev.is_integer() and d_next.is_integer()):
            raise ValueError("integer cohomology needs integer differentials")
        tor = tuple(d for d in invariant_factors(d_prev) if d >= 2)
        return FGAbelianGroup(free, tor)
    raise ValueError(f"unknown ring {ring!r}")


def minor_gcds(m: RationalMatrix):
    """gcd of all k x k minors for k = 1..rank; independent oracle for Smith form."""
    rows = [[int(v) for v in r] for r in m.to_rows()]
    out = []
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for ri in itertools.combinations(range(m.rows), k):
            for ci in itertools.combinations(range(m.cols), k):
                sub = RationalMatrix.from_rows(
                    [[rows[i][j] for j in ci] for i in ri]
                )
                g = _gcd(g, abs(int(det(sub))))
        if g == 0:
            break
        out.append(g)
    return out
