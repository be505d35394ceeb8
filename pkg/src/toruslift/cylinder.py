"""Sheared-cylinder family: the worked end-to-end model.

The space modeled here fibers over a cylinder.  Upstairs points carry a
height pair ``xi``, a 2-torus coordinate ``u``, and an auxiliary pair
``z`` of radius/angle slots tied to the height; a two-torus gauge group
acts on ``(u2, z)`` and the quotient is taken by picking one canonical
representative per orbit.  A semidirect group (torus part, integer deck
part) acts on canonical representatives; the deck generator shears the
torus coordinate by ``[[1, 0], [-1, 1]]`` and translates the first
height coordinate by ``xi2 + 1``, which is why no modular reduction of
``xi1`` is possible: the translation length varies with the height.

For each angle ``s`` the group action lifts to a circle bundle, shifting
the fiber by ``v1 + n*s``.  ``build_scenario`` packages the whole family
at a finite angle resolution ``m``: a three-chart cycle cover with the
shear on the one non-tree overlap, seam samples on the interior stratum,
chart lifting tables reading off the ``v1`` shift, and a gluing table
carrying ``s`` across the seam.  The assembled data feeds the
obstruction pipeline and its sigma table vanishes identically for every
representable ``s``.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import InputError, NotOnSpace
from .groups import AtlasModel, FPGroup, Representation
from .lifting import ChartLifting, GluingData
from .nerve import GLCocycle, Nerve, chart_corrections
from .torus import PolarPoint, TorusAut, mod1, polar

SHEAR = TorusAut([[1, 0], [-1, 1]])

Pair = Tuple[Fraction, Fraction]
#: group element: (torus angles, deck exponent)
GroupElement = Tuple[Pair, int]


@dataclass(frozen=True)
class CylPoint:
    """Canonical representative of a gauge orbit.

    ``xi[0]`` is an exact rational (deck translation makes it non-periodic),
    ``xi[1]`` lies in [0, 1].  In canonical gauge both ``z`` angles are 0
    and ``u[1] = 0`` on the strata where a ``z`` radius vanishes.
    """

    xi: Pair
    u: Pair
    z: PolarPoint


@dataclass(frozen=True)
class CylBundlePoint:
    xi: Pair
    u: Pair
    z: PolarPoint
    t: Fraction


@dataclass(frozen=True)
class CylParams:
    s: Fraction
    m: int
    window: int

    def __post_init__(self):
        object.__setattr__(self, "s", mod1(Fraction(self.s)))
        if self.m < 1:
            raise InputError("torus order must be >= 1, got %d" % self.m)
        if self.window < 1:
            raise InputError("window must be >= 1, got %d" % self.window)


def canonicalize(xi, u, z, t=None):
    """Pick the canonical gauge representative of a raw point.

    The gauge element v rotates z backwards and shifts u2 by v1 - v2 (and
    the bundle fiber by v2).  Where both z radii are positive v is pinned
    by the z angles; where one vanishes the free component is spent
    zeroing u2.
    """
    xi1, xi2 = Fraction(xi[0]), Fraction(xi[1])
    if not 0 <= xi2 <= 1:
        raise NotOnSpace("height %s is outside [0, 1]" % xi2)
    try:
        pz = polar(z)
    except InputError as exc:
        raise NotOnSpace("bad z slots: %s" % exc)
    if len(pz) != 2:
        raise NotOnSpace("expected 2 z slots, got %d" % len(pz))
    (r1, th1), (r2, th2) = pz
    if r1 != xi2:
        raise NotOnSpace("r2(z1) = %s but xi2 = %s" % (r1, xi2))
    if xi2 + r2 != 1:
        raise NotOnSpace("xi2 + r2(z2) = %s, expected 1" % (xi2 + r2))
    u1, u2 = mod1(Fraction(u[0])), mod1(Fraction(u[1]))

    if r1 > 0 and r2 > 0:
        v = (th1, th2)
    elif r1 == 0:
        # z1 collapsed: v1 free, used to zero u2
        v = (mod1(th2 - u2), th2)
    else:
        # z2 collapsed: v2 free
        v = (th1, mod1(u2 + th1))
    new_u = (u1, mod1(u2 + v[0] - v[1]))
    new_z = polar(((r1, 0), (r2, 0)))
    if t is None:
        return CylPoint((xi1, xi2), new_u, new_z)
    return CylBundlePoint((xi1, xi2), new_u, new_z,
                          mod1(Fraction(t) + v[1]))


def base_of(bp: CylBundlePoint) -> CylPoint:
    return CylPoint(bp.xi, bp.u, bp.z)


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """(v, n)(w, p) = (v + shear^n(w), n + p)."""
    (v, n), (w, p) = g1, g2
    rw = (SHEAR ** n).apply(w)
    return ((mod1(v[0] + rw[0]), mod1(v[1] + rw[1])), n + p)


def g_act(g: GroupElement, p: CylPoint) -> CylPoint:
    """Action on the quotient: translate xi1, shear u, append the torus part."""
    v, n = g
    ru = (SHEAR ** n).apply(p.u)
    xi1 = p.xi[0] + n * (p.xi[1] + 1)
    return canonicalize((xi1, p.xi[1]),
                        (mod1(ru[0] + v[0]), mod1(ru[1] + v[1])), p.z)


def torus_act(v: Pair, p: CylPoint) -> CylPoint:
    return g_act((v, 0), p)


def deck_translate(p: CylPoint, n: int) -> CylPoint:
    """Right deck action p . n (the group acts through p . (-n))."""
    return g_act(((Fraction(0), Fraction(0)), -n), p)


def lift_act(params: CylParams, g: GroupElement,
             bp: CylBundlePoint) -> CylBundlePoint:
    """Lifted action on the bundle: fiber shifts by v1 + n*s."""
    v, n = g
    ru = (SHEAR ** n).apply(bp.u)
    xi1 = bp.xi[0] + n * (bp.xi[1] + 1)
    return canonicalize((xi1, bp.xi[1]),
                        (mod1(ru[0] + v[0]), mod1(ru[1] + v[1])), bp.z,
                        t=mod1(bp.t + v[0] + n * params.s))


def seam_point(m: int, i: int, j: int,
               t: Optional[Fraction] = None):
    """Canonical point on the interior seam stratum with grid coordinates."""
    half = Fraction(1, 2)
    z = ((half, Fraction(0)), (half, Fraction(0)))
    if t is None:
        return canonicalize((Fraction(0), half),
                            (Fraction(i, m), Fraction(j, m)), z)
    return canonicalize((Fraction(0), half),
                        (Fraction(i, m), Fraction(j, m)), z, t=t)


@dataclass(frozen=True)
class CylScenario:
    params: CylParams
    nerve: Nerve
    cocycle: GLCocycle
    model: AtlasModel
    rho: Representation
    corrections: object
    liftings: dict
    gluing: GluingData


def build_scenario(params: CylParams) -> CylScenario:
    """Finite scenario for the family at resolution m (fiber order = m).

    Three charts in a cycle; the non-tree overlap (c1, c2) carries the
    shear and all the samples: one full torus grid at the interior seam.
    Chart liftings shift the fiber by the first coordinate of the chart
    torus argument; the gluing table carries s (in fiber units) across
    the seam, once per deck wrap.
    """
    m = params.m
    if m % params.s.denominator != 0:
        raise InputError("s = %s is not representable with fiber order %d"
                         % (params.s, m))
    s_units = int(params.s * m) % m

    nerve = Nerve(["c0", "c1", "c2"],
                  edges=[("c0", "c1"), ("c0", "c2"), ("c1", "c2")])
    eye = TorusAut.identity(2)
    cocycle = GLCocycle.from_one_sided(
        nerve, {("c0", "c1"): eye, ("c0", "c2"): eye, ("c1", "c2"): SHEAR})
    half = Fraction(1, 2)
    pairs = []
    for i in range(m):
        for j in range(m):
            theta = (Fraction(i, m), Fraction(j, m))
            sheared = SHEAR.apply(theta)
            pairs.append((polar(((half, sheared[0]), (half, sheared[1]))),
                          polar(((half, theta[0]), (half, theta[1])))))
    model = AtlasModel(nerve, cocycle, m,
                       {"c0": [], "c1": [za for za, _ in pairs],
                        "c2": [zb for _, zb in pairs]},
                       {("c1", "c2"): pairs})
    rho = Representation(FPGroup.free_abelian(1), [SHEAR])
    corrections = chart_corrections(nerve, cocycle, rho)

    def shift_table(chart):
        return {(u, z): (u[0] % m,)
                for u in _grid(m) for z in model.samples[chart]}

    liftings = {
        "c0": ChartLifting("c0", m, m, {}, n=2, k=1),
        "c1": ChartLifting("c1", m, m, shift_table("c1")),
        "c2": ChartLifting("c2", m, m, shift_table("c2")),
    }
    tables = {
        ("c1", "c2"): {z: (s_units,) for z in model.samples["c2"]},
        ("c2", "c1"): {z: ((-s_units) % m,) for z in model.samples["c1"]},
        ("c0", "c1"): {}, ("c1", "c0"): {},
        ("c0", "c2"): {}, ("c2", "c0"): {},
    }
    return CylScenario(params, nerve, cocycle, model, rho, corrections,
                       liftings, GluingData(m, tables))


def _grid(m):
    for i in range(m):
        for j in range(m):
            yield (i, j)
