"""Chern-Weil forms, Chern-Simons transgression, and equivariant connections.

The transgression works in W(g) extended by a degree-0 variable t and its
odd partner dt with d t = dt.  The interpolating curvature is computed as
the honest curvature of t*theta, the dt-linear part is extracted, and the
t-polynomial coefficients are integrated exactly over [0, 1].  The identity
d CS = omega is then asserted symbolically, never assumed.

Equivariant data follows the Weil-model recipe: Theta_G = Theta -
iota_{theta_g} Theta, Omega_G its curvature, and equivariant Chern-Weil and
Chern-Simons forms arise by substituting (Theta_G, Omega_G) for the W(k)
generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    NoNonzeroEvaluation,
    NotAConnection,
    NotAHomomorphism,
    NotInvariant,
)
from .gca import (
    AlgebraMorphism,
    Derivation,
    Element,
    GradedAlgebra,
    Generator,
    derivation_from_dict,
    transport,
)
from .gstar import (
    ConnectionElement,
    GStarAlgebra,
    WeilAlgebra,
    basic_subcomplex,
    build_weil,
    cartan_model,
    connection_violations,
    curvature,
    mathai_quillen,
    weil_ambient,
    weil_group_restriction,
)
from .liealg import InvariantPolynomial, LieAlgebra


def invariant_as_weil_element(omega: InvariantPolynomial, w: WeilAlgebra) -> Element:
    """The image of omega in S g* subset W(g), substituting u^a for the coordinates."""
    A = w.gstar.carrier
    n = omega.lie.dim
    out = A.zero()
    for mono, c in omega.coeffs.items():
        term = A.one()
        for i in mono:
            term = term * A.gen_named(_u_name(w, i))
        out = out + term.scale(c)
    return out


def _u_name(w: WeilAlgebra, i: int) -> str:
    return w.gstar.carrier.gens[w.gstar.weil.u[i]].name


def evaluate_invariant(omega: InvariantPolynomial, components) -> Element:
    """omega(Omega^k) for commuting even-degree g-valued components.

    For degree-2 components this is literally polynomial substitution, which
    agrees with the fully polarised evaluation.
    """
    if not components:
        raise ValueError("no components supplied")
    A = components[0].algebra
    out = A.zero()
    for mono, c in omega.coeffs.items():
        term = A.one()
        for i in mono:
            term = term * components[i]
            if term.is_zero():
                break
        out = out + term.scale(c)
    return out


def chern_weil(
    omega: InvariantPolynomial, A: GStarAlgebra, theta: ConnectionElement
) -> Element:
    """The Chern-Weil form omega(Omega^k): basic and d-closed, checked."""
    if not omega.is_coadjoint_invariant():
        raise NotInvariant(f"{omega} is not invariant")
    om = curvature(A, theta)
    result = evaluate_invariant(omega, om)
    if not A.d(result).is_zero():
        raise NotAConnection("Chern-Weil output failed to be closed")
    off = theta.offset
    for a in range(theta.value_lie.dim):
        if not A.iota[off + a](result).is_zero():
            raise NotAConnection("Chern-Weil output failed to be horizontal")
    return result


@dataclass(frozen=True)
class TransgressionRing:
    """W(g) adjoined t (degree 0) and dt (degree 1) with d t = dt."""

    weil: WeilAlgebra
    algebra: GradedAlgebra
    d: Derivation
    t_index: int
    dt_index: int

    def integrate(self, x: Element) -> Element:
        """Integral over [0,1] of the dt-linear part, landing back in W(g).

        Each monomial containing dt is rewritten as dt * t^j * (rest); the
        result accumulates rest / (j + 1).
        """
        W = self.weil.gstar.carrier
        out = W.zero()
        alg = self.algebra
        for mono, c in x.terms.items():
            entries = dict(mono)
            if self.dt_index not in entries:
                continue
            # sign to move dt to the front: count odd factors before it
            sign = 1
            for i, e in mono:
                if i == self.dt_index:
                    break
                if alg.odd[i]:
                    sign = -sign
            entries.pop(self.dt_index)
            j = entries.pop(self.t_index, 0)
            rest = tuple(
                (i, e) for i, e in mono if i not in (self.t_index, self.dt_index)
            )
            out = out + Element.build(W, {rest: Fraction(sign) * c / (j + 1)})
        return out


def transgression_ring(g: LieAlgebra) -> TransgressionRing:
    w = build_weil(g)
    gens = list(w.gstar.carrier.gens) + [Generator("t", 0), Generator("dt", 1)]
    alg = GradedAlgebra(gens)
    nw = len(w.gstar.carrier.gens)
    images = {}
    for i, gen in enumerate(w.gstar.carrier.gens):
        img = w.gstar.d.images[i]
        images[gen.name] = _reindex(img, alg)
    images["t"] = alg.gen(nw + 1)
    images["dt"] = alg.zero()
    d = derivation_from_dict(alg, 1, images)
    return TransgressionRing(w, alg, d, nw, nw + 1)


def _reindex(x: Element, target: GradedAlgebra) -> Element:
    """Move an element into an algebra whose leading generators coincide."""
    return Element.build(target, dict(x.terms))


def chern_simons(omega: InvariantPolynomial, g: LieAlgebra) -> Element:
    """CS_omega in W(g) with d_W CS = omega, computed by exact transgression."""
    if omega.degree < 1:
        raise ValueError("transgression needs degree >= 1")
    if not omega.is_coadjoint_invariant():
        raise NotInvariant(f"{omega} is not invariant")
    ring = transgression_ring(g)
    alg = ring.algebra
    w = ring.weil
    t = alg.gen(ring.t_index)
    n = g.dim
    theta_t = [t * alg.gen(i) for i in range(n)]
    omega_t = []
    for a in range(n):
        om = ring.d(theta_t[a])
        for b in range(n):
            for c in range(n):
                v = g.c(a, b, c)
                if v:
                    om = om + (theta_t[b] * theta_t[c]).scale(Fraction(v, 2))
        omega_t.append(om)
    integrand = evaluate_invariant(omega, omega_t)
    cs = ring.integrate(integrand)
    W = w.gstar
    target = invariant_as_weil_element(omega, w)
    if W.d(cs) != target:
        raise AssertionError("transgression failed: d CS != omega")
    for a in range(n):
        if not W.lie_ops[a](cs).is_zero():
            raise AssertionError("transgression failed: CS not invariant")
    return cs


# ---------------------------------------------------------------------------
# equivariant connections


@dataclass(frozen=True)
class EquivariantConnection:
    """Theta_G = Theta - iota_{theta_g} Theta together with both curvatures."""

    ambient: GStarAlgebra
    k: LieAlgebra
    k_offset: int
    theta: ConnectionElement
    theta_G: tuple
    omega_G_weil: tuple
    omega_G_cartan: tuple


def equivariant_connection(A: GStarAlgebra, theta: ConnectionElement) -> EquivariantConnection:
    """Build and fully verify the equivariant extension of a structure connection.

    Checks: the input K-connection axioms, g-horizontality and invariance of
    Theta_G and Omega_G, and that the Mathai-Quillen image of the Weil-model
    curvature is the Cartan-model curvature Omega - iota_{Omega_g} Theta.
    """
    bad = connection_violations(theta)
    if bad:
        raise NotAConnection(bad[0]["axiom"] + ": " + bad[0]["detail"])
    info = A.weil
    if info is None:
        raise NotAConnection("equivariant connections need a W(g) tensor carrier")
    g = info.group
    k = theta.value_lie
    off_g = info.g_offset
    alg = A.carrier
    for comp in theta.components:
        for mono, _ in comp.terms.items():
            if any(i not in info.model for i, _e in mono):
                raise NotAConnection(
                    "structure connection components must live in the form model"
                )
    theta_G = []
    for a in range(k.dim):
        corr = alg.zero()
        for b in range(g.dim):
            contracted = A.iota[off_g + b](theta.components[a])
            if not contracted.is_zero():
                corr = corr + alg.gen(info.lam[b]) * contracted
        theta_G.append(theta.components[a] - corr)
    omega_G = []
    for a in range(k.dim):
        om = A.d(theta_G[a])
        for b in range(k.dim):
            for c in range(k.dim):
                v = k.c(a, b, c)
                if v:
                    om = om + (theta_G[b] * theta_G[c]).scale(Fraction(v, 2))
        omega_G.append(om)
    # Cartan-model curvature: ordinary curvature of Theta minus iota_{Omega_g} Theta
    omega_cartan = []
    for a in range(k.dim):
        om = info.model_d(theta.components[a])
        for b in range(k.dim):
            for c in range(k.dim):
                v = k.c(a, b, c)
                if v:
                    om = om + (theta.components[b] * theta.components[c]).scale(
                        Fraction(v, 2)
                    )
        for b in range(g.dim):
            contracted = info.model_iota[b](theta.components[a])
            if not contracted.is_zero():
                om = om - alg.gen(info.u[b]) * contracted
        omega_cartan.append(om)
    ec = EquivariantConnection(
        A, k, theta.offset, theta, tuple(theta_G), tuple(omega_G), tuple(omega_cartan)
    )
    _verify_equivariant(ec)
    return ec


def _verify_equivariant(ec: EquivariantConnection):
    A = ec.ambient
    info = A.weil
    g = info.group
    off_g = info.g_offset
    for label, vals in (("Theta_G", ec.theta_G), ("Omega_G", ec.omega_G_weil)):
        for a in range(g.dim):
            for v in vals:
                if not A.iota[off_g + a](v).is_zero():
                    raise NotAConnection(f"{label} is not g-horizontal")
        for i in range(A.lie.dim):
            for m, v in enumerate(vals):
                defect = A.lie_ops[i](v)
                for b in range(ec.k.dim):
                    coeff = A.lie.c(ec.k_offset + m, i, ec.k_offset + b)
                    if coeff:
                        defect = defect + vals[b].scale(coeff)
                if not defect.is_zero():
                    raise NotAConnection(f"{label} is not invariant")
    mq = mathai_quillen(A)
    for a in range(ec.k.dim):
        if mq.forward(ec.omega_G_weil[a]) != ec.omega_G_cartan[a]:
            raise NotAConnection(
                "Mathai-Quillen image of Omega_G is not the Cartan curvature"
            )


def equivariant_chern_weil(omega: InvariantPolynomial, ec: EquivariantConnection) -> Element:
    """omega(Omega_G^k): basic for the whole acting algebra and d_G-closed."""
    if not omega.is_coadjoint_invariant():
        raise NotInvariant(f"{omega} is not invariant")
    A = ec.ambient
    result = evaluate_invariant(omega, ec.omega_G_weil)
    if not A.d(result).is_zero():
        raise NotAConnection("equivariant Chern-Weil form failed to be closed")
    for a in range(A.lie.dim):
        if not A.iota[a](result).is_zero():
            raise NotAConnection("equivariant Chern-Weil form failed to be basic")
        if not A.lie_ops[a](result).is_zero():
            raise NotAConnection("equivariant Chern-Weil form failed to be invariant")
    return result


def equivariant_weil_map(ec: EquivariantConnection):
    """The substitution W(k) -> ambient: lam_k^a -> Theta_G^a, u_k^a -> Omega_G^a."""
    wk = build_weil(ec.k)
    images = tuple(ec.theta_G) + tuple(ec.omega_G_weil)
    return AlgebraMorphism(wk.gstar.carrier, ec.ambient.carrier, images), wk


def equivariant_chern_simons(omega: InvariantPolynomial, ec: EquivariantConnection) -> Element:
    """CS_omega(Theta_G) with d_G CS_omega(Theta_G) = omega(Omega_G^k), checked."""
    cs = chern_simons(omega, ec.k)
    phi, wk = equivariant_weil_map(ec)
    out = phi(transport(cs, wk.gstar.carrier))
    target = evaluate_invariant(omega, ec.omega_G_weil)
    if ec.ambient.d(out) != target:
        raise AssertionError("equivariant transgression identity failed")
    return out


def pullback_connection(
    A: GStarAlgebra, theta_P: tuple, theta_Q: ConnectionElement
) -> ConnectionElement:
    """The (g + k)-connection P-part + (Q-part - iota_{Theta_P} Q-part).

    theta_P lists the g-valued components (inside the ambient); for the Weil
    factor itself these are the lam generators.  The output is verified to
    contract to (xi_1, xi_2) on every basis pair and to be invariant.
    """
    info = A.weil
    g = info.group
    k = theta_Q.value_lie
    off_g = info.g_offset
    alg = A.carrier
    comps = list(theta_P)
    for a in range(k.dim):
        corr = alg.zero()
        for b in range(g.dim):
            contracted = A.iota[off_g + b](theta_Q.components[a])
            if not contracted.is_zero():
                corr = corr + theta_P[b] * contracted
        comps.append(theta_Q.components[a] - corr)
    out = ConnectionElement(A, A.lie, 0, tuple(comps))
    bad = connection_violations(out)
    if bad:
        raise NotAConnection(bad[0]["axiom"] + ": " + bad[0]["detail"])
    return out


def theta_g_star_map(ec: EquivariantConnection, check_degree: int = 6):
    """The reduction map W(g) (x) W(k) (x) model -> W(g) (x) model.

    Substitutes Theta_G for lam_k and Omega_G for u_k, fixing everything else.
    Verified to be a cochain map through check_degree and to send basic
    elements to basic elements.
    """
    A = ec.ambient
    info = A.weil
    g = info.group
    model = _model_gstar(A)
    wk = build_weil(ec.k, prefix="k.")
    big = weil_ambient(
        g,
        _tensor_gstar(wk.gstar, model, ec.k, A.lie, ec.k_offset),
        g_positions=tuple(range(info.g_offset, info.g_offset + g.dim)),
    )
    images = []
    for i, gen in enumerate(big.carrier.gens):
        name = gen.name
        if name.startswith("k."):
            local = wk.gstar.carrier.index[name]
            n = ec.k.dim
            if local < n:
                images.append(ec.theta_G[local])
            else:
                images.append(ec.omega_G_weil[local - n])
        else:
            images.append(A.carrier.gen_named(name))
    phi = AlgebraMorphism(big.carrier, A.carrier, tuple(images))
    for n in range(0, check_degree + 1):
        for mono in big.carrier.degree_basis(n):
            x = Element.build(big.carrier, {mono: Fraction(1)})
            if phi(big.d(x)) != A.d(phi(x)):
                raise AssertionError("reduction map fails to be a cochain map")
    return phi, big


def _model_gstar(A: GStarAlgebra) -> GStarAlgebra:
    """Recover the form-model factor of an ambient as its own G-star algebra."""
    info = A.weil
    alg = A.carrier
    names = [alg.gens[i].name for i in info.model]
    model_alg = GradedAlgebra(
        [Generator(alg.gens[i].name, alg.gens[i].degree, alg.gens[i].bidegree, alg.gens[i].weight) for i in info.model]
    )
    back = {i: j for j, i in enumerate(info.model)}

    def pull(x: Element) -> Element:
        terms = {}
        for mono, c in x.terms.items():
            if any(i not in back for i, _ in mono):
                raise ValueError("model operator image leaves the model factor")
            terms[tuple((back[i], e) for i, e in mono)] = c
        return Element.build(model_alg, terms)

    def pull_derivation(D, degree):
        return Derivation(
            model_alg,
            degree,
            tuple(pull(D(alg.gen(i))) for i in info.model),
        )

    d = pull_derivation(A.d, 1)
    iotas = tuple(pull_derivation(A.iota[m], -1) for m in range(A.lie.dim))
    lies = tuple(pull_derivation(A.lie_ops[m], 0) for m in range(A.lie.dim))
    return GStarAlgebra(model_alg, A.lie, d, iotas, lies)


def _tensor_gstar(
    wk: GStarAlgebra, model: GStarAlgebra, k: LieAlgebra, gtilde: LieAlgebra, k_offset: int
) -> GStarAlgebra:
    """W(k) (x) model as a G-star algebra over gtilde (k block acts on both)."""
    from .gca import extend_derivation, tensor

    t = tensor(wk.carrier, model.carrier)
    C = t.algebra
    d = extend_derivation(t, wk.d, "left").add(extend_derivation(t, model.d, "right"))
    iotas = []
    lies = []
    for m in range(gtilde.dim):
        it = extend_derivation(t, model.iota[m], "right")
        lo = extend_derivation(t, model.lie_ops[m], "right")
        if k_offset <= m < k_offset + k.dim:
            it = it.add(extend_derivation(t, wk.iota[m - k_offset], "left"))
            lo = lo.add(extend_derivation(t, wk.lie_ops[m - k_offset], "left"))
        iotas.append(it)
        lies.append(lo)
    return GStarAlgebra(C, gtilde, d, tuple(iotas), tuple(lies))


def associated_forms(
    phi_matrix, g1: LieAlgebra, g2: LieAlgebra, A1: GStarAlgebra, A2: GStarAlgebra, F: AlgebraMorphism,
    check_degree: int = 5,
):
    """W(phi) (x) F: the forms-level map Omega_{G2}(N) -> Omega_{G1}(M).

    phi_matrix[a][b] is the xi^{(2)}_a coefficient of phi(xi^{(1)}_b); it must
    preserve brackets.  F maps the model factor of A2 to the model factor of
    A1 and must commute with the model differentials (checked).  The result
    maps W(g2) generators through the dual of phi and is checked to commute
    with d_G through check_degree.
    """
    n1, n2 = g1.dim, g2.dim
    for a in range(n1):
        for b in range(n1):
            lhs = [Fraction(0)] * n2
            for c, v in enumerate(g1.bracket(a, b)):
                if v:
                    for m in range(n2):
                        lhs[m] += v * phi_matrix[m][c]
            rhs = [Fraction(0)] * n2
            for p in range(n2):
                for q in range(n2):
                    coeff = phi_matrix[p][a] * phi_matrix[q][b]
                    if coeff:
                        for m, v in enumerate(g2.bracket(p, q)):
                            if v:
                                rhs[m] += coeff * v
            if lhs != rhs:
                raise NotAHomomorphism(
                    f"bracket not preserved at basis pair ({a}, {b})"
                )
    info1, info2 = A1.weil, A2.weil
    alg1, alg2 = A1.carrier, A2.carrier
    images = []
    for i, gen in enumerate(alg2.gens):
        if i in info2.lam:
            a = info2.lam.index(i)
            acc = alg1.zero()
            for b in range(n1):
                if phi_matrix[a][b]:
                    acc = acc + alg1.gen(info1.lam[b]).scale(phi_matrix[a][b])
            images.append(acc)
        elif i in info2.u:
            a = info2.u.index(i)
            acc = alg1.zero()
            for b in range(n1):
                if phi_matrix[a][b]:
                    acc = acc + alg1.gen(info1.u[b]).scale(phi_matrix[a][b])
            images.append(acc)
        else:
            j = info2.model.index(i)
            images.append(F.images[j])
    out = AlgebraMorphism(alg2, alg1, tuple(images))
    for n in range(0, check_degree + 1):
        for mono in alg2.degree_basis(n):
            x = Element.build(alg2, {mono: Fraction(1)})
            if out(A2.d(x)) != A1.d(out(x)):
                raise NotAHomomorphism("W(phi) (x) F fails to commute with d_G")
    return out


# ---------------------------------------------------------------------------
# injectivity witness


@dataclass(frozen=True)
class WitnessCertificate:
    indices: tuple
    value: object
    expected: object

    @property
    def ok(self) -> bool:
        from .scalars import is_zero

        return self.value == self.expected and not is_zero(self.value)


def weil_injectivity_witness(
    omega: InvariantPolynomial, indices: tuple | None = None
) -> WitnessCertificate:
    """Evaluate omega(Omega^n) on the flat R^{2n} connection built from indices.

    The model carries coordinates x^1..x^{2n} (degree 0, jet-truncated at
    order 2) and their differentials.  The connection is
    x^1 dx^2 xi_{i_1} + ... + x^{2n-1} dx^{2n} xi_{i_n}; the coefficient of
    dx^1...dx^{2n} at the origin must equal n! * omega(xi_{i_1}...xi_{i_n}).
    """
    g = omega.lie
    n = omega.degree
    if indices is None:
        indices = _find_nonzero_slot(omega)
    if len(indices) != n:
        raise ValueError("need one index per polynomial slot")
    gens = []
    for j in range(2 * n):
        gens.append(Generator(f"x{j+1}", 0, weight=1))
        gens.append(Generator(f"dx{j+1}", 1))
    field = "Qi" if _needs_i(omega) else "Q"
    alg = GradedAlgebra(gens, field=field, weight_cap=2)
    d = derivation_from_dict(
        alg, 1, {f"x{j+1}": alg.gen_named(f"dx{j+1}") for j in range(2 * n)}
    )
    theta = [alg.zero() for _ in range(g.dim)]
    for slot, a in enumerate(indices):
        theta[a] = theta[a] + alg.gen_named(f"x{2*slot+1}") * alg.gen_named(
            f"dx{2*slot+2}"
        )
    omega_comps = []
    for a in range(g.dim):
        om = d(theta[a])
        for b in range(g.dim):
            for c in range(g.dim):
                v = g.c(a, b, c)
                if v:
                    om = om + (theta[b] * theta[c]).scale(Fraction(v, 2))
        omega_comps.append(om)
    form = evaluate_invariant(omega, omega_comps)
    target_mono = tuple(
        (alg.index[f"dx{j+1}"], 1) for j in range(2 * n)
    )
    target_mono = tuple(sorted(target_mono, key=lambda t: alg.rank[t[0]]))
    value = form.coefficient(target_mono)
    from math import factorial

    expected = factorial(n) * omega.polarized(tuple(indices))
    return WitnessCertificate(tuple(indices), value, expected)


def _find_nonzero_slot(omega: InvariantPolynomial):
    from .scalars import is_zero

    for mono, c in sorted(omega.coeffs.items()):
        if not is_zero(omega.polarized(mono)):
            return mono
    raise NoNonzeroEvaluation("the polynomial has no nonzero evaluation")


def _needs_i(omega: InvariantPolynomial) -> bool:
    from .scalars import GaussianRational

    return any(isinstance(c, GaussianRational) for c in omega.coeffs.values())
