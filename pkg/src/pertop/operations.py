"""Cochain-level cohomology operations.

Cup products use the classical front-face / back-face evaluation.  The cup-1
product uses the interval decomposition

    (u cup1 v)(sigma) = sum_{a=0}^{p-1} (-1)^{a(q+1)}
        u(sigma[0..a, a+q..n]) * v(sigma[a..a+q]),      n = p + q - 1,

whose full coboundary identity (verified exhaustively on universal simplices
through degree 7, and re-checked by the test suite) is

    delta(u cup1 v) = -(-1)^(pq+q) u cup v + (-1)^q v cup u
                      - (-1)^q (delta u cup1 v) + u cup1 delta v.

On cocycles this collapses to the contractual commutator identity
delta(u cup1 v) = +-(u cup v - (-1)^(pq) v cup u).

The square refinement of a mod-2m 2-cocycle z is taken as
z cup z - z cup1 delta z, reduced mod 4m.  The sign of the cup-1 correction
is immaterial there: the two choices differ by 2(z cup1 delta z), all of
whose coefficients are multiples of 4m.
"""

from __future__ import annotations

import threading
from typing import Optional

from .cohomology import (
    Cochain,
    CohomologyClass,
    CohomologyGroup,
    coboundary,
    cohomology_group,
)
from .errors import NotACocycle
from .simplicial import ChainComplex, SimplicialSet, normalized_chain_complex

__all__ = [
    "OperationContext",
    "cup",
    "cup1",
    "bockstein_cochain",
    "bockstein",
    "reduce_coeffs",
    "pontryagin_square_cochain",
    "pontryagin_square",
    "square_class_cochain",
    "square_class",
]


class OperationContext:
    """A space, its normalized chains, and a memoized cohomology-group cache.

    Immutable from the caller's point of view; the internal cache tolerates
    concurrent readers and serializes fills.
    """

    def __init__(self, space: SimplicialSet,
                 complex_: Optional[ChainComplex] = None, cache=None):
        self.space = space
        self.complex = complex_ if complex_ is not None \
            else normalized_chain_complex(space)
        if self.complex.space is not space:
            raise ValueError("complex does not belong to the space")
        self.cache = cache
        self._groups: dict[tuple[int, int], CohomologyGroup] = {}
        self._lock = threading.Lock()

    def group(self, degree: int, modulus: int = 0) -> CohomologyGroup:
        key = (degree, modulus)
        got = self._groups.get(key)
        if got is not None:
            return got
        with self._lock:
            got = self._groups.get(key)
            if got is None:
                got = cohomology_group(self.complex, degree, modulus,
                                       cache=self.cache)
                self._groups[key] = got
        return got

    def express(self, c: Cochain) -> CohomologyClass:
        return self.group(c.degree, c.modulus).express(c)

    def cochain(self, degree: int, modulus: int, coords: dict[int, int]) -> Cochain:
        return Cochain(self.space, degree, modulus, coords)

    def __repr__(self) -> str:
        return f"OperationContext({self.space.label!r})"


def _result_modulus(x: Cochain, y: Cochain) -> int:
    """Combined coefficient modulus: integral acts on mod-m, m on m."""
    if x.modulus and y.modulus:
        if x.modulus != y.modulus:
            raise ValueError(
                f"modulus mismatch: {x.modulus} vs {y.modulus}")
        return x.modulus
    return x.modulus or y.modulus


def _value_at(space: SimplicialSet, tab, c: Cochain, lvl: int, t: int) -> int:
    if tab.mask(lvl, t):
        return 0
    return c.coords.get(space.nondeg_index_of_id(lvl, t), 0)


def cup(ctx: OperationContext, x: Cochain, y: Cochain) -> Cochain:
    """Alexander-Whitney cup product of cochains.

    (x cup y)(sigma) = x(front p-face) * y(back q-face); satisfies the
    Leibniz rule delta(x cup y) = delta x cup y + (-1)^p x cup delta y
    identically as cochains.
    """
    if x.space is not ctx.space or y.space is not ctx.space:
        raise ValueError("cochains do not live on the context space")
    m = _result_modulus(x, y)
    p, q = x.degree, y.degree
    n = p + q
    space = ctx.space
    if n > space.dim:
        return Cochain(space, n, m, {})
    tab = space.table(n)
    out: dict[int, int] = {}
    for i in range(space.n_simplices(n)):
        t = space.id_of_nondeg(n, i)
        f = t
        lvl = n
        for _ in range(q):           # drop the last q vertices
            f = tab.face_id(lvl, f, lvl)
            lvl -= 1
        a = _value_at(space, tab, x, p, f)
        if not a:
            continue
        b = t
        lvl = n
        for _ in range(p):           # drop the first p vertices
            b = tab.face_id(lvl, b, 0)
            lvl -= 1
        bv = _value_at(space, tab, y, q, b)
        if bv:
            out[i] = a * bv
    return Cochain(space, n, m, out)


def cup1(ctx: OperationContext, x: Cochain, y: Cochain) -> Cochain:
    """Steenrod cup-1 product (convention in the module docstring)."""
    if x.space is not ctx.space or y.space is not ctx.space:
        raise ValueError("cochains do not live on the context space")
    m = _result_modulus(x, y)
    p, q = x.degree, y.degree
    if p + q < 1:
        raise ValueError("cup-1 needs p + q >= 1")
    n = p + q - 1
    space = ctx.space
    if p == 0 or q == 0 or n > space.dim:
        return Cochain(space, n, m, {})
    tab = space.table(n)
    out: dict[int, int] = {}
    for i in range(space.n_simplices(n)):
        t = space.id_of_nondeg(n, i)
        s = 0
        for a in range(p):
            sign = -1 if (a * (q + 1)) % 2 else 1
            # u on [0..a] u [a+q..n]: remove the q-1 vertices after a
            f = t
            lvl = n
            for _ in range(q - 1):
                f = tab.face_id(lvl, f, a + 1)
                lvl -= 1
            uval = _value_at(space, tab, x, p, f)
            if not uval:
                continue
            # v on [a..a+q]: drop the top n-(a+q) vertices, then a from below
            g = t
            lvl = n
            for _ in range(n - (a + q)):
                g = tab.face_id(lvl, g, lvl)
                lvl -= 1
            for _ in range(a):
                g = tab.face_id(lvl, g, 0)
                lvl -= 1
            vval = _value_at(space, tab, y, q, g)
            if vval:
                s += sign * uval * vval
        if m:
            s %= m
        if s:
            out[i] = s
    return Cochain(space, n, m, out)


def bockstein_cochain(ctx: OperationContext, c: Cochain) -> Cochain:
    """Connecting map of 0 -> Z -> Z -> Z/m -> 0 at the cochain level.

    Lifts the mod-m cocycle to integers, takes the coboundary, divides by m.
    A non-exact division means the input was not a cocycle mod m and aborts.
    """
    m = c.modulus
    if m < 2:
        raise ValueError("bockstein needs a modular cochain")
    w = coboundary(c.lift_integral())
    out = {}
    for i, v in w.coords.items():
        if v % m:
            raise NotACocycle(f"cochain is not a cocycle mod {m}")
        out[i] = v // m
    return Cochain(ctx.space, c.degree + 1, 0, out)


def bockstein(ctx: OperationContext, xi: CohomologyClass) -> CohomologyClass:
    """beta_m: H^i(X; Z/m) -> H^{i+1}(X; Z), independent of all choices."""
    G = xi.group
    if G.modulus < 2:
        raise ValueError("bockstein needs a mod-m class")
    w = bockstein_cochain(ctx, xi.representative())
    return ctx.group(G.degree + 1, 0).express(w)


def reduce_coeffs(ctx: OperationContext, c: CohomologyClass, m: int
                  ) -> CohomologyClass:
    """Coefficient-change map into Z/m coefficients.

    From integral classes this is plain reduction; from Z/n with n | m it is
    the map induced by the inclusion Z/n -> Z/m, 1 |-> m/n.
    """
    if m < 2:
        raise ValueError("target modulus must be >= 2")
    src = c.group.modulus
    rep = c.representative()
    if src == 0:
        out = rep.reduce_mod(m)
    elif m % src == 0:
        out = rep.lift_integral().scale(m // src).reduce_mod(m)
    else:
        raise ValueError(f"no coefficient map Z/{src} -> Z/{m}")
    return ctx.group(c.group.degree, m).express(out)


def pontryagin_square_cochain(ctx: OperationContext, z: Cochain) -> Cochain:
    """Square refinement of a mod-2m 2-cocycle, as a mod-4m cochain.

    z~ cup z~ - z~ cup1 delta z~ for the integral lift z~; a cocycle mod 4m.
    """
    n = z.modulus
    if n < 2 or n % 2:
        raise ValueError("pontryagin square needs an even modulus")
    if z.degree != 2:
        raise ValueError("defined for 2-cochains")
    zt = z.lift_integral()
    dz = coboundary(zt)
    P = cup(ctx, zt, zt) - cup1(ctx, zt, dz)
    return P.reduce_mod(2 * n)


def pontryagin_square(ctx: OperationContext, xi: CohomologyClass
                      ) -> CohomologyClass:
    """P2: H^2(X; Z/2m) -> H^4(X; Z/4m) with 2 P2(xi) the image of xi^2."""
    n = xi.group.modulus
    if n < 2 or n % 2:
        raise ValueError("pontryagin square needs an even modulus")
    if xi.group.degree != 2:
        raise ValueError("defined on degree-2 classes")
    P = pontryagin_square_cochain(ctx, xi.representative())
    return ctx.group(4, 2 * n).express(P)


def square_class_cochain(ctx: OperationContext, z: Cochain) -> Cochain:
    """Integral degree-5 obstruction cochain of a mod-n 2-cocycle.

    beta_n(z cup z) for odd n; beta_2n(square refinement) for even n.
    """
    n = z.modulus
    if n < 2:
        raise ValueError("needs a modular 2-cocycle")
    if z.degree != 2:
        raise ValueError("defined for 2-cochains")
    if n % 2:
        return bockstein_cochain(ctx, cup(ctx, z, z))
    return bockstein_cochain(ctx, pontryagin_square_cochain(ctx, z))


def square_class(ctx: OperationContext, xi: CohomologyClass) -> CohomologyClass:
    """The degree-5 integral obstruction class of a mod-n degree-2 class.

    This is the operation whose order controls the index bound; it lands in
    H^5(X; Z) and is epsilon(n)-torsion.
    """
    w = square_class_cochain(ctx, xi.representative())
    return ctx.group(5, 0).express(w)
