"""Free graded-commutative algebras with exact sparse arithmetic.

Elements are sparse maps from normal-form monomials to nonzero scalars.
A monomial is a tuple of (generator index, exponent) pairs sorted by the
algebra's canonical order: odd generators first, then even, each block in
declaration order.  Koszul signs are produced while merging, so equality of
elements is literal dictionary equality.

Derivations are total on generators and extend by the graded Leibniz rule
D(xy) = D(x) y + (-1)^{|D||x|} x D(y).  Algebra morphisms are determined by
generator images and extend multiplicatively.

Generators may carry an auxiliary weight together with an algebra-level
weight cap; monomials over the cap are discarded during multiplication.
This implements the polynomial-jet truncation used by the flat R^{2n}
evaluation model and must only be combined with differentials that do not
raise weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CarrierMismatch
from .scalars import is_zero, norm_scalar, scalar_str


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    bidegree: tuple | None = None
    weight: int = 0

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("generator degrees must be nonnegative")
        if self.bidegree is not None and sum(self.bidegree) != self.degree:
            raise ValueError(f"bidegree {self.bidegree} inconsistent with degree {self.degree}")


class GradedAlgebra:
    """Free graded-commutative algebra on named generators over Q or Q(i)."""

    def __init__(self, generators, field="Q", weight_cap=None):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if field not in ("Q", "Qi"):
            raise ValueError("field must be 'Q' or 'Qi'")
        self.gens = gens
        self.field = field
        self.weight_cap = weight_cap
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self.odd = tuple(g.degree % 2 == 1 for g in gens)
        order = sorted(range(len(gens)), key=lambda i: (not self.odd[i], i))
        self.rank = [0] * len(gens)
        for pos, i in enumerate(order):
            self.rank[i] = pos
        self._basis_cache = {}

    def __repr__(self):
        return f"GradedAlgebra({[g.name for g in self.gens]}, field={self.field})"

    def gen_named(self, name) -> "Element":
        return Element(self, {((self.index[name], 1),): Fraction(1)})

    def gen(self, idx) -> "Element":
        return Element(self, {((idx, 1),): Fraction(1)})

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {(): Fraction(1)})

    def scalar(self, s) -> "Element":
        s = norm_scalar(s)
        return Element(self, {(): s} if not is_zero(s) else {})

    def mono_degree(self, mono) -> int:
        return sum(self.degrees[i] * e for i, e in mono)

    def mono_weight(self, mono) -> int:
        return sum(self.gens[i].weight * e for i, e in mono)

    def mono_bidegree(self, mono):
        a = b = 0
        for i, e in mono:
            bd = self.gens[i].bidegree
            if bd is None:
                return None
            a += bd[0] * e
            b += bd[1] * e
        return (a, b)

    def mono_str(self, mono) -> str:
        if not mono:
            return "1"
        return "*".join(
            self.gens[i].name + (f"^{e}" if e > 1 else "") for i, e in mono
        )

    def mono_mul(self, m1, m2):
        """Merge two normal-form monomials; returns (sign, monomial) or None if zero."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        rank = self.rank
        odd = self.odd
        out = []
        sign = 1
        i = j = 0
        # number of odd factors of m1 not yet consumed
        odd_left = sum(1 for g, e in m1 if odd[g])
        while i < len(m1) and j < len(m2):
            g1, e1 = m1[i]
            g2, e2 = m2[j]
            if g1 == g2:
                if odd[g1]:
                    return None  # odd square
                out.append((g1, e1 + e2))
                i += 1
                j += 1
            elif rank[g1] < rank[g2]:
                if odd[g1]:
                    odd_left -= 1
                out.append((g1, e1))
                i += 1
            else:
                if odd[g2] and odd_left % 2:
                    sign = -sign
                out.append((g2, e2))
                j += 1
        out.extend(m1[i:])
        out.extend(m2[j:])
        return sign, tuple(out)

    def degree_basis(self, n: int):
        """All normal-form monomials of total degree n, in deterministic order."""
        if n < 0:
            return []
        key = n
        cached = self._basis_cache.get(key)
        if cached is not None:
            return cached
        for g in self.gens:
            if g.degree == 0 and (self.weight_cap is None or g.weight == 0):
                raise ValueError(
                    "degree_basis needs weighted, capped degree-0 generators"
                )
        order = sorted(range(len(self.gens)), key=lambda i: self.rank[i])
        out = []

        def rec2(pos, remaining, weight, acc):
            if pos == len(order):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            i = order[pos]
            d = self.degrees[i]
            w = self.gens[i].weight
            max_e = 1 if self.odd[i] else (remaining // d if d else 10**9)
            if self.weight_cap is not None and w:
                max_e = min(max_e, (self.weight_cap - weight) // w)
            rec2(pos + 1, remaining, weight, acc)
            for e in range(1, max_e + 1):
                nd = remaining - d * e
                if nd < 0:
                    break
                rec2(pos + 1, nd, weight + w * e, acc + [(i, e)])

        rec2(0, n, 0, [])
        out.sort(key=lambda m: [(self.rank[i], e) for i, e in m])
        result = tuple(out)
        self._basis_cache[key] = result
        return result


class Element:
    """Sparse element of a GradedAlgebra; immutable by convention."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = terms

    @classmethod
    def build(cls, algebra, raw_terms):
        """Normalise a {monomial: scalar} mapping (drops zeros, applies weight cap)."""
        cap = algebra.weight_cap
        terms = {}
        for m, c in raw_terms.items():
            c = norm_scalar(c)
            if is_zero(c):
                continue
            if cap is not None and algebra.mono_weight(m) > cap:
                continue
            terms[m] = c
        return cls(algebra, terms)

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise CarrierMismatch("elements live in different algebras")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = norm_scalar(terms.get(m, Fraction(0)) + c)
            if is_zero(s):
                terms.pop(m, None)
            else:
                terms[m] = s
        return Element(self.algebra, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def scale(self, s):
        s = norm_scalar(s)
        if is_zero(s):
            return Element(self.algebra, {})
        return Element(
            self.algebra,
            {m: norm_scalar(c * s) for m, c in self.terms.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        A = self.algebra
        cap = A.weight_cap
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = A.mono_mul(m1, m2)
                if r is None:
                    continue
                sign, m = r
                if cap is not None and A.mono_weight(m) > cap:
                    continue
                s = norm_scalar(out.get(m, Fraction(0)) + sign * c1 * c2)
                if is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
        return Element(A, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not defined")
        acc = self.algebra.one()
        for _ in range(e):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self.terms))))

    def degrees(self):
        return sorted({self.algebra.mono_degree(m) for m in self.terms})

    def degree(self):
        """Degree of a homogeneous element (0 for the zero element)."""
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) > 1:
            raise ValueError(f"element is not homogeneous: degrees {ds}")
        return ds[0]

    def homogeneous_part(self, n):
        A = self.algebra
        return Element(
            A, {m: c for m, c in self.terms.items() if A.mono_degree(m) == n}
        )

    def coefficient(self, mono):
        return self.terms.get(mono, Fraction(0))

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def sorted_terms(self):
        A = self.algebra
        return sorted(
            self.terms.items(),
            key=lambda kv: (
                A.mono_degree(kv[0]),
                [(A.rank[i], e) for i, e in kv[0]],
            ),
        )

    def __str__(self):
        if not self.terms:
            return "0"
        A = self.algebra
        parts = []
        for m, c in self.sorted_terms():
            mono = A.mono_str(m)
            if isinstance(c, Fraction):
                neg = c < 0
                mag = -c if neg else c
                if mono == "1":
                    body = str(mag)
                elif mag == 1:
                    body = mono
                else:
                    body = f"{mag}*{mono}"
                if not parts:
                    parts.append(("-" if neg else "") + body)
                else:
                    parts.append(("- " if neg else "+ ") + body)
            else:
                body = scalar_str(c) if mono == "1" else f"{scalar_str(c)}*{mono}"
                parts.append(body if not parts else "+ " + body)
        return " ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class Derivation:
    """Graded derivation, total on generators, extended by the Leibniz rule."""

    algebra: GradedAlgebra
    degree: int
    images: tuple  # Element per generator index

    def __post_init__(self):
        if len(self.images) != len(self.algebra.gens):
            raise ValueError("derivations must be total on generators")
        for g, img in zip(self.algebra.gens, self.images):
            for d in img.degrees():
                if d != g.degree + self.degree:
                    raise ValueError(
                        f"image of {g.name} has degree {d}, expected {g.degree + self.degree}"
                    )

    def __call__(self, x: Element) -> Element:
        A = self.algebra
        if x.algebra is not A:
            raise CarrierMismatch("derivation applied to foreign element")
        out = A.zero()
        dsign = self.degree % 2
        for m, c in x.terms.items():
            prefix_deg = 0
            for pos, (i, e) in enumerate(m):
                img = self.images[i]
                if not img.is_zero():
                    sign = -1 if (dsign and prefix_deg % 2) else 1
                    coeff = c * sign * (e if not A.odd[i] else 1)
                    rest_front = m[:pos] + (((i, e - 1),) if e > 1 else ())
                    rest_back = m[pos + 1:]
                    term = Element(A, {rest_front: Fraction(1)}) * img
                    if rest_back:
                        term = term * Element(A, {rest_back: Fraction(1)})
                    out = out + term.scale(coeff)
                prefix_deg += A.degrees[i] * e
        return out

    def add(self, other: "Derivation") -> "Derivation":
        if self.degree != other.degree:
            raise ValueError("cannot add derivations of different degrees")
        return Derivation(
            self.algebra,
            self.degree,
            tuple(a + b for a, b in zip(self.images, other.images)),
        )

    def scale(self, s) -> "Derivation":
        return Derivation(self.algebra, self.degree, tuple(img.scale(s) for img in self.images))

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images)


def zero_derivation(A: GradedAlgebra, degree=0) -> Derivation:
    return Derivation(A, degree, tuple(A.zero() for _ in A.gens))


def derivation_from_dict(A: GradedAlgebra, degree, images: dict) -> Derivation:
    """Build a derivation from {generator name: Element}; unnamed generators map to 0."""
    imgs = []
    for g in A.gens:
        imgs.append(images.get(g.name, A.zero()))
    return Derivation(A, degree, tuple(imgs))


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """Graded commutator d1 d2 - (-1)^{|d1||d2|} d2 d1, as a derivation."""
    if d1.algebra is not d2.algebra:
        raise CarrierMismatch("derivations on different algebras")
    A = d1.algebra
    sign = -1 if (d1.degree % 2 and d2.degree % 2) else 1
    images = []
    for i, g in enumerate(A.gens):
        images.append(d1(d2.images[i]) - d2(d1.images[i]).scale(sign))
    return Derivation(A, d1.degree + d2.degree, tuple(images))


@dataclass(frozen=True)
class AlgebraMorphism:
    """Algebra map determined by generator images, extended multiplicatively."""

    source: GradedAlgebra
    target: GradedAlgebra
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.source.gens):
            raise ValueError("morphisms must be total on generators")

    def __call__(self, x: Element) -> Element:
        if x.algebra is not self.source:
            raise CarrierMismatch("morphism applied to foreign element")
        out = self.target.zero()
        for m, c in x.terms.items():
            acc = self.target.one()
            for i, e in m:
                acc = acc * (self.images[i] ** e)
                if acc.is_zero():
                    break
            out = out + acc.scale(c)
        return out

    def then(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        if self.target is not other.source:
            raise CarrierMismatch("morphisms do not compose")
        return AlgebraMorphism(
            self.source, other.target, tuple(other(img) for img in self.images)
        )


def identity_morphism(A: GradedAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(A, A, tuple(A.gen(i) for i in range(len(A.gens))))


@dataclass(frozen=True)
class TensorResult:
    algebra: GradedAlgebra
    left: AlgebraMorphism
    right: AlgebraMorphism
    left_indices: tuple
    right_indices: tuple


def tensor(A: GradedAlgebra, B: GradedAlgebra, rename=("L.", "R.")) -> TensorResult:
    """Tensor product with Koszul signs; colliding names are renamed by prefix."""
    if A.field != B.field:
        if "Qi" in (A.field, B.field):
            field = "Qi"
        else:
            raise ValueError("incompatible scalar fields")
    else:
        field = A.field
    names_taken = {g.name for g in A.gens}
    b_gens = []
    for g in B.gens:
        name = g.name
        if name in names_taken:
            name = rename[1] + name
            if name in names_taken:
                raise ValueError(f"cannot disambiguate generator name {g.name!r}")
        names_taken.add(name)
        b_gens.append(Generator(name, g.degree, g.bidegree, g.weight))
    gens = list(A.gens) + b_gens
    cap = None
    if A.weight_cap is not None or B.weight_cap is not None:
        cap = (A.weight_cap or 0) + (B.weight_cap or 0)
    C = GradedAlgebra(gens, field=field, weight_cap=cap)
    na = len(A.gens)
    left = AlgebraMorphism(A, C, tuple(C.gen(i) for i in range(na)))
    right = AlgebraMorphism(B, C, tuple(C.gen(na + i) for i in range(len(B.gens))))
    return TensorResult(C, left, right, tuple(range(na)), tuple(range(na, len(gens))))


def extend_derivation(t: TensorResult, D: Derivation, side: str) -> Derivation:
    """Extend a factor derivation to the tensor product (zero on the other factor)."""
    C = t.algebra
    images = [C.zero() for _ in C.gens]
    emb = t.left if side == "left" else t.right
    idxs = t.left_indices if side == "left" else t.right_indices
    for local, global_i in enumerate(idxs):
        images[global_i] = emb(D.images[local])
    return Derivation(C, D.degree, tuple(images))


def transport(x: Element, target: GradedAlgebra) -> Element:
    """Copy an element into a distinct algebra object with the same generator layout."""
    src = x.algebra
    if [(g.name, g.degree) for g in src.gens] != [
        (g.name, g.degree) for g in target.gens
    ]:
        raise CarrierMismatch("algebras have different generator signatures")
    return Element.build(target, dict(x.terms))


def element_coords(x: Element, basis_index: dict):
    """Coordinates of x in a monomial basis given as {monomial: position}."""
    coords = [Fraction(0)] * len(basis_index)
    for m, c in x.terms.items():
        pos = basis_index.get(m)
        if pos is None:
            raise ValueError(f"monomial {m} outside the chosen basis")
        coords[pos] = c
    return tuple(coords)


def operator_rows(A: GradedAlgebra, op, n: int, out_degree: int):
    """Dense matrix rows of a linear operator degree-n basis -> degree-out basis."""
    dom = A.degree_basis(n)
    cod = A.degree_basis(out_degree)
    cod_index = {m: i for i, m in enumerate(cod)}
    cols = []
    for m in dom:
        img = op(Element(A, {m: Fraction(1)}))
        cols.append(element_coords(img, cod_index))
    rows = [[cols[j][i] for j in range(len(dom))] for i in range(len(cod))]
    return rows
