"""The period-index pipeline for torsion degree-3 classes.

Given a torsion class a in H^3(X; Z): compute its order (the period n), lift
it to a mod-n degree-2 class xi with beta_n(xi) = a by solving
delta u = n * a over the integers, form the degree-5 obstruction class of xi,
reduce it to H^5(X, Z) / (a cup H^2(X, Z)), and report

    index = per * ord(reduced obstruction),

which equals the topological index when the model's dimension bound is at
most 6 and divides it otherwise.  The reduced class does not depend on the
choice of lift; verify_lift_independence checks that exhaustively over the
lift coset as an executable witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from math import gcd
from typing import Iterable, Optional

from .cohomology import Cochain, CohomologyClass, QuotientGroup, subgroup_quotient
from .errors import CosetTooLarge, InternalConsistencyError, NoLift, NotTorsion
from .linalg import Infinite, SparseIntMatrix, solve_linear
from .operations import OperationContext, cup, square_class_cochain

__all__ = [
    "epsilon",
    "PeriodIndexReport",
    "period",
    "lift_to_mod_n",
    "all_lifts",
    "reduced_obstruction",
    "index_bound",
    "verify_lift_independence",
    "REPORT_FIELDS",
]


def epsilon(n: int) -> int:
    """n for odd n, 2n for even n."""
    return n * gcd(2, n)


REPORT_FIELDS = ("space", "alpha", "per", "ordQ", "index", "exact",
                 "epsilonCheck", "liftIndependence")


@dataclass(frozen=True)
class PeriodIndexReport:
    """Result of the full pipeline for one (space, alpha) pair."""

    space: str
    dimension: int
    alpha: tuple[int, ...]
    per: int
    lift: Optional[Cochain]
    ordQ: int
    index: int
    exact: bool
    epsilon_ok: bool
    lift_independence: Optional[bool] = None

    def __post_init__(self):
        if self.index != self.per * self.ordQ:
            raise InternalConsistencyError("index != per * ordQ")
        if self.epsilon_ok and epsilon(self.per) % self.ordQ:
            raise InternalConsistencyError("ordQ does not divide epsilon(per)")

    def record(self) -> str:
        """One machine-readable line, tab-separated, REPORT_FIELDS order."""
        li = ("not_checked" if self.lift_independence is None
              else str(self.lift_independence).lower())
        vals = (self.space, ",".join(map(str, self.alpha)) or "0",
                str(self.per), str(self.ordQ), str(self.index),
                str(self.exact).lower(), str(self.epsilon_ok).lower(), li)
        return "\t".join(vals)

    def human_table(self) -> str:
        claim = ("index (= ind_top, dimension bound <= 6)" if self.exact
                 else "index (divides ind_top; dimension bound > 6)")
        rows = [
            ("space", self.space),
            ("dimension bound", str(self.dimension)),
            ("alpha", ",".join(map(str, self.alpha)) or "0"),
            ("period", str(self.per)),
            ("ord of reduced obstruction", str(self.ordQ)),
            (claim, str(self.index)),
            ("ordQ | epsilon(per)", str(self.epsilon_ok).lower()),
            ("lift independence", "not checked" if self.lift_independence is None
             else str(self.lift_independence).lower()),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def period(ctx: OperationContext, alpha: CohomologyClass) -> int:
    """Order of a torsion class in H^3(X; Z)."""
    _check_alpha(ctx, alpha)
    n = alpha.order()
    if n is Infinite:
        raise NotTorsion("class has a nonzero free coordinate")
    return n


def _check_alpha(ctx: OperationContext, alpha: CohomologyClass) -> None:
    if alpha.group is not ctx.group(3, 0):
        raise ValueError("alpha must live in the integral H^3 of the context")


def lift_to_mod_n(ctx: OperationContext, alpha: CohomologyClass, n: int
                  ) -> Cochain:
    """A mod-n 2-cocycle xi with beta_n(xi) = alpha.

    Solves delta u = n * a over Z for an integral representative a and
    returns u mod n; raises NoLift iff ord(alpha) does not divide n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_alpha(ctx, alpha)
    X = ctx.space
    a = alpha.representative()
    n2, n3 = X.n_simplices(2), X.n_simplices(3)
    rows = list(ctx.complex.iter_coboundary_rows(2))
    M = SparseIntMatrix.from_row_dicts(n3, n2, rows)
    b = [0] * n3
    for i, v in a.coords.items():
        b[i] = n * v
    u = solve_linear(M, b)
    if u is None:
        raise NoLift(f"order of alpha does not divide {n}")
    xi = Cochain(X, 2, n, {i: v for i, v in enumerate(u) if v % n})
    if n >= 2:
        from .operations import bockstein_cochain
        beta = ctx.group(3, 0).express(bockstein_cochain(ctx, xi))
        if beta != alpha:
            raise InternalConsistencyError("lift verification failed")
    return xi


def all_lifts(ctx: OperationContext, alpha: CohomologyClass, n: int,
              cap: int = 512) -> list[Cochain]:
    """All lifts of alpha up to cohomology, one cocycle per class.

    Two lifts differ by the mod-n reduction of an integral degree-2 class, so
    the coset is xi_0 + reduction(H^2(X; Z)); it is enumerated over generator
    coefficients mod n and deduplicated in H^2(X; Z/n).
    """
    base = lift_to_mod_n(ctx, alpha, n)
    if n < 2:
        return [base]
    H2 = ctx.group(2, 0)
    gens = H2.generator_cochains()
    k = len(gens)
    if n ** k > cap:
        raise CosetTooLarge(f"coset has {n ** k} candidates, cap {cap}")
    Gn = ctx.group(2, n)
    seen = {}
    for coeffs in iproduct(range(n), repeat=k):
        cand = base
        for c, g in zip(coeffs, gens):
            if c:
                cand = cand + g.scale(c).reduce_mod(n)
        key = Gn.express(cand).coords
        if key not in seen:
            seen[key] = cand
    return [seen[k2] for k2 in sorted(seen)]


def reduced_obstruction(ctx: OperationContext, alpha: CohomologyClass,
                        xi: Cochain) -> tuple[QuotientGroup, tuple[int, ...], int]:
    """Obstruction class of xi, reduced modulo alpha cup H^2(X; Z).

    Returns (quotient group, coordinates of the reduced class, its order).
    The order must divide epsilon(n); a violation signals an implementation
    bug, not bad input.
    """
    _check_alpha(ctx, alpha)
    n = xi.modulus
    H5 = ctx.group(5, 0)
    w = square_class_cochain(ctx, xi)
    Q = H5.express(w)
    arep = alpha.representative()
    gens = []
    for g in ctx.group(2, 0).generator_cochains():
        gens.append(H5.express(cup(ctx, arep, g)))
    quot = subgroup_quotient(H5, gens)
    qt = quot.project(Q)
    order = quot.order_of(qt)
    if order is Infinite or epsilon(n) % order:
        raise InternalConsistencyError(
            f"reduced obstruction order {order} does not divide "
            f"epsilon({n}) = {epsilon(n)}")
    return quot, qt, order


def index_bound(ctx: OperationContext, alpha: CohomologyClass
                ) -> PeriodIndexReport:
    """Run the full pipeline and assemble the report.

    The lift used is the first one produced by the deterministic solver;
    the reduced obstruction does not depend on that choice.
    """
    per = period(ctx, alpha)
    X = ctx.space
    if per == 1:
        return PeriodIndexReport(
            space=X.label, dimension=X.dim, alpha=alpha.coords, per=1,
            lift=Cochain(X, 2, 1, {}), ordQ=1, index=1,
            exact=X.dim <= 6, epsilon_ok=True)
    xi = lift_to_mod_n(ctx, alpha, per)
    _, _, ordq = reduced_obstruction(ctx, alpha, xi)
    return PeriodIndexReport(
        space=X.label, dimension=X.dim, alpha=alpha.coords, per=per, lift=xi,
        ordQ=ordq, index=per * ordq, exact=X.dim <= 6,
        epsilon_ok=epsilon(per) % ordq == 0)


def verify_lift_independence(ctx: OperationContext, alpha: CohomologyClass,
                             n: Optional[int] = None, cap: int = 512
                             ) -> tuple[bool, Optional[tuple[Cochain, Cochain]]]:
    """Check that the reduced obstruction is the same for every lift.

    Exhaustive over the lift coset.  Returns (True, None) on success, else
    (False, (xi, xi')) with two witnessing lifts -- which would falsify the
    implementation, not the mathematics.
    """
    if n is None:
        n = period(ctx, alpha)
    lifts = all_lifts(ctx, alpha, n, cap=cap)
    results = []
    quot = None
    for xi in lifts:
        q, qt, _ = reduced_obstruction(ctx, alpha, xi)
        quot = quot or q
        results.append(qt)
    for i in range(1, len(results)):
        if results[i] != results[0]:
            return False, (lifts[0], lifts[i])
    return True, None
