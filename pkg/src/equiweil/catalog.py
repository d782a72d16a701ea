"""Built-in Lie algebras, form models and equivariant instances.

The rotation instance is the weight-one circle action on a circle: carrier
W(g) (x) Lambda(lM) with both the acting circle g and the structure circle k
contracting lM to 1.  The orientation choice iota lM = +1 is a convention of
this package (documented in the README); convention-independent identities
are what the test suite pins.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import liealg
from .gca import Derivation, GradedAlgebra, Generator, derivation_from_dict, zero_derivation
from .gstar import ConnectionElement, GStarAlgebra, WeilAlgebra, build_weil, weil_ambient
from .liealg import LieAlgebra, direct_sum


def lie_by_name(name: str) -> LieAlgebra:
    table = {
        "u1": liealg.u1,
        "r2": lambda: liealg.abelian(2, name="r2"),
        "su2": liealg.su2,
        "u2": liealg.u2,
        "heis3": liealg.heisenberg3,
    }
    if name not in table:
        raise KeyError(f"unknown Lie algebra {name!r}; choose from {sorted(table)}")
    return table[name]()


WEIL_NAMES = ("u1", "r2", "su2", "u2", "heis3")


def promote(A: GStarAlgebra, gtilde: LieAlgebra, positions: tuple) -> GStarAlgebra:
    """View a G-star algebra over a subalgebra as one over gtilde (zero elsewhere)."""
    iotas = []
    lies = []
    for m in range(gtilde.dim):
        if m in positions:
            local = positions.index(m)
            iotas.append(A.iota[local])
            lies.append(A.lie_ops[local])
        else:
            iotas.append(zero_derivation(A.carrier, -1))
            lies.append(zero_derivation(A.carrier, 0))
    return GStarAlgebra(
        A.carrier, gtilde, A.d, tuple(iotas), tuple(lies), A.finite_action, A.weil
    )


def maurer_cartan_model(g: LieAlgebra, prefix="x") -> GStarAlgebra:
    """Left-invariant forms Lambda g*: d = Chevalley-Eilenberg, iota = contraction."""
    n = g.dim
    alg = GradedAlgebra([Generator(f"{prefix}{i+1}", 1) for i in range(n)])

    def x(i):
        return alg.gen(i)

    d_images = {}
    for a in range(n):
        acc = alg.zero()
        for b in range(n):
            for c in range(n):
                v = g.c(a, b, c)
                if v:
                    acc = acc + (x(b) * x(c)).scale(Fraction(-v, 2))
        d_images[f"{prefix}{a+1}"] = acc
    d = derivation_from_dict(alg, 1, d_images)
    iotas = tuple(
        derivation_from_dict(alg, -1, {f"{prefix}{a+1}": alg.one()}) for a in range(n)
    )
    lies = []
    for a in range(n):
        imgs = {}
        for b in range(n):
            acc = alg.zero()
            for c in range(n):
                v = -g.c(b, a, c)
                if v:
                    acc = acc + x(c).scale(v)
            imgs[f"{prefix}{b+1}"] = acc
        lies.append(derivation_from_dict(alg, 0, imgs))
    return GStarAlgebra(alg, g, d, iotas, tuple(lies))


def maurer_cartan_connection(A: GStarAlgebra) -> ConnectionElement:
    """theta = sum x^a (x) xi_a on a maurer_cartan_model."""
    return ConnectionElement(
        A, A.lie, 0, tuple(A.carrier.gen(i) for i in range(A.lie.dim))
    )


def trivial_line_model(g: LieAlgebra, name="x3") -> GStarAlgebra:
    """Lambda(x3) with the trivial G-star structure over g (d = iota = L = 0)."""
    alg = GradedAlgebra([Generator(name, 1)])
    return GStarAlgebra(
        alg,
        g,
        zero_derivation(alg, 1),
        tuple(zero_derivation(alg, -1) for _ in range(g.dim)),
        tuple(zero_derivation(alg, 0) for _ in range(g.dim)),
    )


@dataclass(frozen=True)
class EquivariantInstance:
    """An ambient W(g) (x) Omega(Q) model with a k-valued invariant connection."""

    name: str
    g: LieAlgebra
    k: LieAlgebra
    gtilde: LieAlgebra
    ambient: GStarAlgebra
    theta: ConnectionElement


def rotation_instance() -> EquivariantInstance:
    g = liealg.u1("rotg", basis=("a",))
    k = liealg.u1("rotk", basis=("b",))
    gtilde = direct_sum(g, k)
    alg = GradedAlgebra([Generator("lM", 1)])
    one = alg.one()
    omega = GStarAlgebra(
        alg,
        gtilde,
        zero_derivation(alg, 1),
        (
            derivation_from_dict(alg, -1, {"lM": one}),
            derivation_from_dict(alg, -1, {"lM": one}),
        ),
        (zero_derivation(alg, 0), zero_derivation(alg, 0)),
    )
    ambient = weil_ambient(g, omega, g_positions=(0,))
    theta = ConnectionElement(ambient, k, 1, (ambient.carrier.gen_named("lM"),))
    return EquivariantInstance("rotation", g, k, gtilde, ambient, theta)


def product_instance() -> EquivariantInstance:
    g = liealg.u1("prodg", basis=("a",))
    k = liealg.u1("prodk", basis=("b",))
    gtilde = direct_sum(g, k)
    wk = build_weil(k, prefix="k")
    omega = promote(wk.gstar, gtilde, positions=(1,))
    ambient = weil_ambient(g, omega, g_positions=(0,))
    theta = ConnectionElement(ambient, k, 1, (ambient.carrier.gen_named("kth1"),))
    return EquivariantInstance("product", g, k, gtilde, ambient, theta)


def flat_instance() -> EquivariantInstance:
    """Maurer-Cartan k-connection with a trivial g-action: everything is flat."""
    g = liealg.u1("flatg", basis=("a",))
    k = liealg.u1("flatk", basis=("b",))
    gtilde = direct_sum(g, k)
    alg = GradedAlgebra([Generator("y1", 1)])
    omega = GStarAlgebra(
        alg,
        gtilde,
        zero_derivation(alg, 1),
        (
            zero_derivation(alg, -1),
            derivation_from_dict(alg, -1, {"y1": alg.one()}),
        ),
        (zero_derivation(alg, 0), zero_derivation(alg, 0)),
    )
    ambient = weil_ambient(g, omega, g_positions=(0,))
    theta = ConnectionElement(ambient, k, 1, (ambient.carrier.gen_named("y1"),))
    return EquivariantInstance("flat", g, k, gtilde, ambient, theta)


def instance_by_name(name: str) -> EquivariantInstance:
    table = {
        "rotation": rotation_instance,
        "product": product_instance,
        "flat": flat_instance,
    }
    if name not in table:
        raise KeyError(f"unknown instance {name!r}; choose from {sorted(table)}")
    return table[name]()


def mq_test_ambients():
    """The two carriers the Mathai-Quillen checks run on."""
    rot = rotation_instance()
    su2 = liealg.su2()
    line = weil_ambient(su2, trivial_line_model(su2))
    return {"rotation": rot.ambient, "su2_line": line}
