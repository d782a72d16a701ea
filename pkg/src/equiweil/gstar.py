"""G-star algebras: carrier algebra plus the (d, L, iota) contract.

A G-star algebra is a graded-commutative DGA with degree -1 contractions
iota_X and degree 0 Lie derivatives L_X, one per Lie algebra basis vector,
satisfying d^2 = 0, iota anticommutation, the Cartan equation
[d, iota_X] = L_X, [L_X, iota_Y] = iota_[X,Y] and [L_X, d] = 0.  Finite
group components enter as explicit algebra automorphisms commuting with d.

Sign conventions (one global choice, checked rather than transcribed):
    d lam^a = -1/2 c^a_{bc} lam^b lam^c + u^a
    d u^a   = -c^a_{bc} lam^b u^c
The u-image is forced by d^2 = 0, and check_gstar verifies the whole
contract on monomial bases instead of trusting the formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CarrierMismatch, NoWeilFactor, NotAConnection
from .exactlin import RationalMatrix, cohomology_of_complex, field_kernel
from .gca import (
    AlgebraMorphism,
    Derivation,
    Element,
    GradedAlgebra,
    Generator,
    commutator,
    derivation_from_dict,
    element_coords,
    extend_derivation,
    identity_morphism,
    operator_rows,
    tensor,
    zero_derivation,
)
from .liealg import LieAlgebra


@dataclass(frozen=True)
class WeilInfo:
    """Bookkeeping for carriers of the form W(g) tensor (form model)."""

    group: LieAlgebra          # the Weil-factor Lie algebra g
    lam: tuple                 # generator indices of lam^a
    u: tuple                   # generator indices of u^a
    model: tuple               # generator indices of the form-model factor
    model_iota: tuple          # per g-basis Derivation acting on the full carrier,
                               # contracting only the model factor
    model_d: "Derivation"      # 1 (x) d_model on the full carrier
    g_offset: int = 0          # position of g's basis inside the acting algebra


@dataclass(frozen=True)
class GStarAlgebra:
    carrier: GradedAlgebra
    lie: LieAlgebra
    d: Derivation
    iota: tuple
    lie_ops: tuple
    finite_action: tuple = ()
    weil: WeilInfo | None = None

    def __post_init__(self):
        if len(self.iota) != self.lie.dim or len(self.lie_ops) != self.lie.dim:
            raise ValueError("one iota and one L per Lie algebra basis vector")

    def iota_bracket(self, a, b) -> Derivation:
        """iota_{[xi_a, xi_b]} as a derivation."""
        acc = zero_derivation(self.carrier, -1)
        for c, v in enumerate(self.lie.bracket(a, b)):
            if v:
                acc = acc.add(self.iota[c].scale(v))
        return acc


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    violations: tuple = ()

    def summary(self):
        if self.ok:
            return "all G-star relations hold"
        return "; ".join(
            f"{v['relation']} fails at {v['element']}" for v in self.violations[:5]
        )


@dataclass(frozen=True)
class WeilAlgebra:
    """W(g) with its connection and the two pieces of its differential."""

    gstar: GStarAlgebra
    theta: "ConnectionElement"
    d_ce: Derivation
    d_koszul: Derivation


def build_weil(g: LieAlgebra, prefix: str = "") -> WeilAlgebra:
    """The Weil algebra W(g) = S g* (x) Lambda g* with its canonical connection.

    Generators: lam^a of bidegree (0,1), u^a of bidegree (2,0).
    """
    from .liealg import validate_lie

    report = validate_lie(g)
    if not report.ok:
        raise ValueError(f"invalid Lie algebra {g.name}: {report.violations[0]}")
    n = g.dim
    gens = [Generator(f"{prefix}th{i+1}", 1, (0, 1)) for i in range(n)] + [
        Generator(f"{prefix}u{i+1}", 2, (2, 0)) for i in range(n)
    ]
    A = GradedAlgebra(gens)

    def lam(i):
        return A.gen(i)

    def uu(i):
        return A.gen(n + i)

    d_ce_images = {}
    for a in range(n):
        ce = A.zero()
        for b in range(n):
            for c in range(n):
                v = g.c(a, b, c)
                if v:
                    ce = ce + (lam(b) * lam(c)).scale(Fraction(-v, 2))
        d_ce_images[f"{prefix}th{a+1}"] = ce
        s = A.zero()
        for b in range(n):
            for c in range(n):
                v = g.c(a, b, c)
                if v:
                    s = s + (lam(b) * uu(c)).scale(-v)
        d_ce_images[f"{prefix}u{a+1}"] = s
    d_ce = derivation_from_dict(A, 1, d_ce_images)
    d_k = derivation_from_dict(
        A, 1, {f"{prefix}th{a+1}": uu(a) for a in range(n)}
    )
    d_w = d_ce.add(d_k)

    iotas = []
    lies = []
    for a in range(n):
        iotas.append(
            derivation_from_dict(A, -1, {f"{prefix}th{a+1}": A.one()})
        )
        imgs = {}
        for b in range(n):
            lam_img = A.zero()
            u_img = A.zero()
            for c in range(n):
                v = -g.c(b, a, c)
                if v:
                    lam_img = lam_img + lam(c).scale(v)
                    u_img = u_img + uu(c).scale(v)
            imgs[f"{prefix}th{b+1}"] = lam_img
            imgs[f"{prefix}u{b+1}"] = u_img
        lies.append(derivation_from_dict(A, 0, imgs))

    info = WeilInfo(
        group=g,
        lam=tuple(range(n)),
        u=tuple(range(n, 2 * n)),
        model=(),
        model_iota=tuple(zero_derivation(A, -1) for _ in range(n)),
        model_d=zero_derivation(A, 1),
    )
    gstar = GStarAlgebra(A, g, d_w, tuple(iotas), tuple(lies), (), info)
    theta = ConnectionElement(gstar, g, 0, tuple(lam(a) for a in range(n)))
    return WeilAlgebra(gstar, theta, d_ce, d_k)


# ---------------------------------------------------------------------------
# contract verification


class _DM:
    """Dense matrix with explicit shape; robust when a dimension is zero."""

    __slots__ = ("rows", "nr", "nc")

    def __init__(self, rows, nr, nc):
        self.rows = rows
        self.nr = nr
        self.nc = nc

    @classmethod
    def zeros(cls, nr, nc):
        return cls([[Fraction(0)] * nc for _ in range(nr)], nr, nc)

    def mul(self, other):
        if self.nc != other.nr:
            raise ValueError("shape mismatch")
        out = _DM.zeros(self.nr, other.nc)
        for i in range(self.nr):
            arow = self.rows[i]
            orow = out.rows[i]
            for t in range(self.nc):
                v = arow[t]
                if v:
                    brow = other.rows[t]
                    for j in range(other.nc):
                        if brow[j]:
                            orow[j] = orow[j] + v * brow[j]
        return out

    def add(self, other):
        if (self.nr, self.nc) != (other.nr, other.nc):
            raise ValueError("shape mismatch")
        return _DM(
            [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            self.nr,
            self.nc,
        )

    def neg(self):
        return _DM([[-x for x in row] for row in self.rows], self.nr, self.nc)

    def is_zero(self):
        return all(not x for row in self.rows for x in row)

    def nonzero_column(self):
        for j in range(self.nc):
            if any(self.rows[i][j] for i in range(self.nr)):
                return j
        return None


def _op_mat(alg, op, n, shift) -> _DM:
    rows = operator_rows(alg, op, n, n + shift)
    return _DM(rows, len(alg.degree_basis(n + shift)), len(alg.degree_basis(n)))


def check_gstar(A: GStarAlgebra, max_degree: int = 8) -> CheckReport:
    """Verify the full G-star contract on monomial bases through max_degree."""
    bad = []
    alg = A.carrier
    dim = A.lie.dim
    cache = {}

    def mat(name, op, n, shift) -> _DM:
        key = (name, n)
        if key not in cache:
            cache[key] = _op_mat(alg, op, n, shift)
        return cache[key]

    def d_mat(n):
        return mat("d", A.d, n, 1)

    def iota_mat(a, n):
        return mat(("iota", a), A.iota[a], n, -1)

    def lie_mat(a, n):
        return mat(("L", a), A.lie_ops[a], n, 0)

    def record(relation, defect: _DM, n):
        j = defect.nonzero_column()
        if j is not None:
            bad.append(
                {
                    "relation": relation,
                    "element": alg.mono_str(alg.degree_basis(n)[j]),
                    "degree": n,
                }
            )

    for n in range(0, max_degree + 1):
        if not alg.degree_basis(n):
            continue
        dd = d_mat(n + 1).mul(d_mat(n))
        if not dd.is_zero():
            record("d^2 = 0", dd, n)
        for a in range(dim):
            cart = iota_mat(a, n + 1).mul(d_mat(n)).add(
                d_mat(n - 1).mul(iota_mat(a, n))
            )
            defect = cart.add(lie_mat(a, n).neg())
            if not defect.is_zero():
                record(f"[d, iota_{a}] = L_{a}", defect, n)
            ld = lie_mat(a, n + 1).mul(d_mat(n)).add(
                d_mat(n).mul(lie_mat(a, n)).neg()
            )
            if not ld.is_zero():
                record(f"[L_{a}, d] = 0", ld, n)
            for b in range(a, dim):
                anti = iota_mat(a, n - 1).mul(iota_mat(b, n)).add(
                    iota_mat(b, n - 1).mul(iota_mat(a, n))
                )
                if not anti.is_zero():
                    record(f"iota_{a} iota_{b} + iota_{b} iota_{a} = 0", anti, n)
            for b in range(dim):
                li = lie_mat(a, n - 1).mul(iota_mat(b, n)).add(
                    iota_mat(b, n).mul(lie_mat(a, n)).neg()
                )
                ib = _op_mat(alg, A.iota_bracket(a, b), n, -1)
                defect = li.add(ib.neg())
                if not defect.is_zero():
                    record(f"[L_{a}, iota_{b}] = iota_[{a},{b}]", defect, n)
        for k, phi in enumerate(A.finite_action):
            comm = mat(("phi", k), phi, n + 1, 0).mul(d_mat(n)).add(
                d_mat(n).mul(mat(("phi", k), phi, n, 0)).neg()
            )
            if not comm.is_zero():
                record(f"finite action {k} commutes with d", comm, n)
    return CheckReport(ok=not bad, violations=tuple(bad))


def weil_cohomology(A: GStarAlgebra, max_degree: int):
    """H^i of (carrier, d) over Q for 0 <= i <= max_degree."""
    alg = A.carrier
    if alg.field != "Q":
        raise ValueError("rational cohomology needs a Q carrier")
    mats = {}
    for n in range(0, max_degree + 2):
        rows = operator_rows(alg, A.d, n, n + 1)
        mats[n] = RationalMatrix.from_rows(rows) if rows else RationalMatrix.zero(
            len(alg.degree_basis(n + 1)), len(alg.degree_basis(n))
        )
    out = []
    for n in range(0, max_degree + 1):
        d_prev = mats[n - 1] if n else RationalMatrix.zero(len(alg.degree_basis(0)), 0)
        out.append(cohomology_of_complex(d_prev, mats[n], ring="Q"))
    return out


# ---------------------------------------------------------------------------
# connections


@dataclass(frozen=True)
class ConnectionElement:
    """Structure-algebra-valued degree-1 element Theta = sum Theta^a (x) xi_a.

    The values live in ``value_lie``, embedded in the carrier's acting algebra
    starting at basis position ``offset`` (0 when they coincide).
    """

    algebra: GStarAlgebra
    value_lie: LieAlgebra
    offset: int
    components: tuple

    def __post_init__(self):
        if len(self.components) != self.value_lie.dim:
            raise ValueError("one component per structure-algebra basis vector")
        for c in self.components:
            if not c.is_zero() and c.degree() != 1:
                raise ValueError("connection components must have degree 1")


def connection_violations(theta: ConnectionElement):
    """Connection axioms: fiberwise Maurer-Cartan and infinitesimal invariance."""
    A = theta.algebra
    k = theta.value_lie
    off = theta.offset
    bad = []
    for a in range(k.dim):
        for b in range(k.dim):
            got = A.iota[off + a](theta.components[b])
            want = A.carrier.one() if a == b else A.carrier.zero()
            if got != want:
                bad.append(
                    {
                        "axiom": "maurer-cartan",
                        "detail": f"iota_{a} Theta^{b} = {got}, expected {want}",
                    }
                )
    for i in range(A.lie.dim):
        for m in range(k.dim):
            defect = A.lie_ops[i](theta.components[m])
            for b in range(k.dim):
                v = A.lie.c(off + m, i, off + b)
                if v:
                    defect = defect + theta.components[b].scale(v)
            if not defect.is_zero():
                bad.append(
                    {
                        "axiom": "invariance",
                        "detail": f"L_{i} Theta^{m} + ad-term = {defect}",
                    }
                )
    return bad


def curvature(A: GStarAlgebra, theta: ConnectionElement):
    """Omega^a = d Theta^a + 1/2 c^a_{bc} Theta^b Theta^c; checks the axioms first."""
    if theta.algebra is not A:
        raise CarrierMismatch("connection lives on a different algebra")
    bad = connection_violations(theta)
    if bad:
        raise NotAConnection(bad[0]["axiom"] + ": " + bad[0]["detail"])
    k = theta.value_lie
    out = []
    for a in range(k.dim):
        om = A.d(theta.components[a])
        for b in range(k.dim):
            for c in range(k.dim):
                v = k.c(a, b, c)
                if v:
                    om = om + (theta.components[b] * theta.components[c]).scale(
                        Fraction(v, 2)
                    )
        out.append(om)
    # horizontality and invariance with respect to the structure algebra
    off = theta.offset
    for a in range(k.dim):
        for b in range(k.dim):
            if not A.iota[off + a](out[b]).is_zero():
                raise NotAConnection(
                    f"curvature not horizontal: iota_{a} Omega^{b} != 0"
                )
    return tuple(out)


def contraction_with(A: GStarAlgebra, values) -> Derivation:
    """The derivation iota_Omega: x -> sum_a Omega^a iota_{xi_a} x for g-valued values."""
    degs = {v.degree() for v in values if not v.is_zero()}
    if len(degs) > 1:
        raise ValueError("value components must share a degree")
    vdeg = degs.pop() if degs else 2
    images = []
    for i, g in enumerate(A.carrier.gens):
        acc = A.carrier.zero()
        x = A.carrier.gen(i)
        for a, val in enumerate(values):
            if not val.is_zero():
                contracted = A.iota[a](x)
                if not contracted.is_zero():
                    acc = acc + val * contracted
        images.append(acc)
    return Derivation(A.carrier, vdeg - 1, tuple(images))


def weil_homomorphism(A: GStarAlgebra, theta: ConnectionElement, check_degree=6):
    """The canonical map W(k) -> A sending lam^a to Theta^a and u^a to Omega^a.

    Returns (morphism, W(k) WeilAlgebra).  Commutation with d and every iota
    is asserted on generators and swept through check_degree.
    """
    omegas = curvature(A, theta)
    w = build_weil(theta.value_lie)
    images = tuple(theta.components) + tuple(omegas)
    phi = AlgebraMorphism(w.gstar.carrier, A.carrier, images)
    off = theta.offset
    for i, g in enumerate(w.gstar.carrier.gens):
        x = w.gstar.carrier.gen(i)
        if phi(w.gstar.d(x)) != A.d(phi(x)):
            raise NotAConnection(
                f"Weil homomorphism does not intertwine d at {g.name}"
            )
        for a in range(theta.value_lie.dim):
            if phi(w.gstar.iota[a](x)) != A.iota[off + a](phi(x)):
                raise NotAConnection(
                    f"Weil homomorphism does not intertwine iota_{a} at {g.name}"
                )
    return phi, w


# ---------------------------------------------------------------------------
# basic subcomplex, ambient models, Mathai-Quillen, Cartan


def basic_subcomplex(A: GStarAlgebra, n: int):
    """Basis of A^n_basic = ker(all iota) & ker(all L) & fixed(finite action)."""
    alg = A.carrier
    basis = alg.degree_basis(n)
    if not basis:
        return []
    rows = []
    for a in range(A.lie.dim):
        rows.extend(operator_rows(alg, A.iota[a], n, n - 1))
        rows.extend(operator_rows(alg, A.lie_ops[a], n, n))
    for phi in A.finite_action:
        mat = operator_rows(alg, phi, n, n)
        for i in range(len(basis)):
            row = list(mat[i])
            row[i] = row[i] - 1
            rows.append(row)
    if not rows:
        vectors = [
            tuple(Fraction(i == j) for j in range(len(basis)))
            for i in range(len(basis))
        ]
    else:
        vectors = field_kernel(rows)
    out = []
    for v in vectors:
        out.append(
            Element.build(alg, {m: c for m, c in zip(basis, v)})
        )
    return out


def invariant_subspace(A: GStarAlgebra, n: int, restrict_monos=None):
    """Basis of the degree-n invariants (kernel of all L, fixed by finite action).

    With ``restrict_monos`` the search runs inside the span of the selected
    monomials, but operator images are expanded over the full degree-n basis
    so elements whose image leaves the restricted span are rejected exactly.
    """
    alg = A.carrier
    full = alg.degree_basis(n)
    cols = (
        tuple(m for m in full if restrict_monos(m)) if restrict_monos else tuple(full)
    )
    if not cols:
        return []
    full_idx = {m: i for i, m in enumerate(full)}
    operators = [(op, False) for op in A.lie_ops] + [
        (phi, True) for phi in A.finite_action
    ]
    rows = []
    for op, subtract_identity in operators:
        colvecs = []
        for m in cols:
            x = Element.build(alg, {m: Fraction(1)})
            img = op(x)
            if subtract_identity:
                img = img - x
            colvecs.append(element_coords(img, full_idx))
        rows.extend(
            [colvecs[j][i] for j in range(len(cols))] for i in range(len(full))
        )
    if not rows:
        vectors = [
            tuple(Fraction(i == j) for j in range(len(cols)))
            for i in range(len(cols))
        ]
    else:
        vectors = field_kernel(rows)
    return [Element.build(alg, dict(zip(cols, v))) for v in vectors]


def weil_ambient(
    g: LieAlgebra,
    omega_model: GStarAlgebra,
    g_positions: tuple | None = None,
    prefix: str = "",
) -> GStarAlgebra:
    """W(g) (x) Omega-model as a G-star algebra over the model's acting algebra.

    ``g_positions`` locates g's basis inside the model's acting algebra
    (identity when they coincide).  The Weil factor contributes contractions
    and Lie derivatives only for the g block.
    """
    if g_positions is None:
        g_positions = tuple(range(g.dim))
    w = build_weil(g, prefix=prefix)
    t = tensor(w.gstar.carrier, omega_model.carrier)
    C = t.algebra
    gtilde = omega_model.lie
    d_total = extend_derivation(t, w.gstar.d, "left").add(
        extend_derivation(t, omega_model.d, "right")
    )
    iotas = []
    lies = []
    for m in range(gtilde.dim):
        it = extend_derivation(t, omega_model.iota[m], "right")
        lo = extend_derivation(t, omega_model.lie_ops[m], "right")
        if m in g_positions:
            a = g_positions.index(m)
            it = it.add(extend_derivation(t, w.gstar.iota[a], "left"))
            lo = lo.add(extend_derivation(t, w.gstar.lie_ops[a], "left"))
        iotas.append(it)
        lies.append(lo)
    finite = tuple(
        AlgebraMorphism(
            C,
            C,
            tuple(C.gen(i) for i in t.left_indices)
            + tuple(t.right(phi.images[j]) for j in range(len(omega_model.carrier.gens))),
        )
        for phi in omega_model.finite_action
    )
    n = g.dim
    if tuple(g_positions) != tuple(
        range(g_positions[0], g_positions[0] + n)
    ):
        raise ValueError("the Weil group must occupy a contiguous basis block")
    info = WeilInfo(
        group=g,
        lam=tuple(t.left_indices[:n]),
        u=tuple(t.left_indices[n:]),
        model=t.right_indices,
        model_iota=tuple(
            extend_derivation(t, omega_model.iota[g_positions[a]], "right")
            for a in range(n)
        ),
        model_d=extend_derivation(t, omega_model.d, "right"),
        g_offset=g_positions[0],
    )
    return GStarAlgebra(C, gtilde, d_total, tuple(iotas), tuple(lies), finite, info)


def ambient_weil_connection(A: GStarAlgebra) -> ConnectionElement:
    """theta_g of the Weil factor, viewed inside the ambient algebra."""
    info = _weil_info(A)
    return ConnectionElement(
        A, info.group, info.g_offset, tuple(A.carrier.gen(i) for i in info.lam)
    )


def _weil_info(A: GStarAlgebra) -> WeilInfo:
    if A.weil is None:
        raise NoWeilFactor("carrier was not built as W(g) tensor model")
    return A.weil


def weil_group_restriction(A: GStarAlgebra) -> GStarAlgebra:
    """The same carrier viewed as a G-star algebra over the Weil group only.

    For an ambient with acting algebra g + k this forgets the structure-group
    contractions; it is the right domain for basic-vs-Cartan comparisons.
    """
    info = _weil_info(A)
    off = info.g_offset
    n = info.group.dim
    return GStarAlgebra(
        A.carrier,
        info.group,
        A.d,
        tuple(A.iota[off : off + n]),
        tuple(A.lie_ops[off : off + n]),
        A.finite_action,
        info,
    )


@dataclass(frozen=True)
class MathaiQuillen:
    forward: AlgebraMorphism   # exp(iota_theta)
    inverse: AlgebraMorphism   # exp(-iota_theta)
    iota_theta: Derivation


def mathai_quillen(A: GStarAlgebra) -> MathaiQuillen:
    """exp(iota_theta) on W(g) (x) model, with its exact inverse.

    iota_theta kills the Weil factor and sends a model generator psi to
    sum_a lam^a iota^model_a psi; it is nilpotent on each element because it
    lowers model degree.
    """
    info = _weil_info(A)
    alg = A.carrier
    images = [alg.zero() for _ in alg.gens]
    for a, lam_idx in enumerate(info.lam):
        lam = alg.gen(lam_idx)
        for j in info.model:
            img = info.model_iota[a](alg.gen(j))
            if not img.is_zero():
                images[j] = images[j] + lam * img
    iota_theta = Derivation(alg, 0, tuple(images))

    def expo(sign):
        gens_img = []
        for i in range(len(alg.gens)):
            x = alg.gen(i)
            total = alg.zero()
            term = x
            k = 0
            while not term.is_zero():
                total = total + term.scale(Fraction(sign**k, _factorial(k)))
                term = iota_theta(term)
                k += 1
                if k > 2 * len(alg.gens) + 4:
                    raise RuntimeError("iota_theta failed to nilpotate")
            gens_img.append(total)
        return AlgebraMorphism(alg, alg, tuple(gens_img))

    return MathaiQuillen(expo(1), expo(-1), iota_theta)


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


@dataclass(frozen=True)
class CartanModel:
    algebra: GStarAlgebra
    degree: int
    basis: tuple          # invariant lam-free elements spanning the Cartan carrier
    differential: Derivation  # d_C = d_model - iota_{Omega_g} (zero on Weil gens)


def cartan_model(A: GStarAlgebra, n: int) -> CartanModel:
    """Basis of (S g* (x) model)^G in degree n together with d_C = d - iota_{Omega_g}.

    Invariance is taken with respect to the Weil group (and any finite action),
    not any larger acting algebra the ambient may carry.
    """
    info = _weil_info(A)
    alg = A.carrier
    lam_set = set(info.lam)

    def lam_free(mono):
        return all(i not in lam_set for i, _ in mono)

    basis = invariant_subspace(weil_group_restriction(A), n, restrict_monos=lam_free)
    images = [alg.zero() for _ in alg.gens]
    for j in info.model:
        img = info.model_d(alg.gen(j))
        for a, u_idx in enumerate(info.u):
            contracted = info.model_iota[a](alg.gen(j))
            if not contracted.is_zero():
                img = img - alg.gen(u_idx) * contracted
        images[j] = img
    d_c = Derivation(alg, 1, tuple(images))
    return CartanModel(A, n, tuple(basis), d_c)
