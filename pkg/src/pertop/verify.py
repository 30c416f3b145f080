"""Self-contained invariant suites, runnable from the command line.

Each check is pure and seeded; the recorded seed reproduces any failure.
Failures are results, not exceptions: the runner always returns the full
list of outcomes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable

from .cohomology import Cochain, coboundary, subgroup_quotient
from .linalg import SparseIntMatrix, cokernel, element_order, smith_normal_form, solve_linear
from .operations import (
    OperationContext,
    bockstein,
    bockstein_cochain,
    cup,
    cup1,
    pontryagin_square,
    pontryagin_square_cochain,
    reduce_coeffs,
)
from .period_index import epsilon, index_bound, verify_lift_independence
from .simplicial import (
    check_simplicial_identities,
    circle,
    em_space_2,
    moore_polygon,
    normalized_chain_complex,
    point,
    product,
    suspension,
    torus,
    wbar_cyclic,
)

DEFAULT_SEED = 1729

SCOPES = ("exact_linalg", "complexes", "cohomology", "cochain_ops",
          "period_index")


@dataclass
class CheckResult:
    scope: str
    name: str
    passed: bool
    detail: str
    seed: int

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"[{status}] {self.scope}.{self.name} (seed {self.seed}): {self.detail}"


def _det(mat: list[list[int]]) -> int:
    n = len(mat)
    m = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return int(det)


def _random_matrix(rng, rows, cols, lo=-9, hi=9, density=0.7):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    entries[(r, c)] = v
    return SparseIntMatrix(rows, cols, entries)


def _shipped_spaces():
    return [
        moore_polygon(2),
        moore_polygon(3),
        torus(),
        product(circle(3), circle(3)),
        suspension(moore_polygon(2)),
        suspension(moore_polygon(3)),
        wbar_cyclic(2, 5),
        em_space_2(2, 4),
    ]


# ---------------------------------------------------------------------------
# exact_linalg
# ---------------------------------------------------------------------------

def _check_snf(seed: int, count: int = 1000) -> Iterable[CheckResult]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        M = _random_matrix(rng, rows, cols)
        snf = smith_normal_form(M)
        ok = snf.U.matmul(M).matmul(snf.V) == snf.D
        ok = ok and abs(_det(snf.U.to_dense())) == 1
        ok = ok and abs(_det(snf.V.to_dense())) == 1
        diag = snf.diagonal()
        nz = [d for d in diag if d]
        ok = ok and diag[: len(nz)] == nz and all(d >= 0 for d in diag)
        ok = ok and all(b % a == 0 for a, b in zip(nz, nz[1:]))
        if not ok:
            bad += 1
    yield CheckResult("exact_linalg", "snf_invariants", bad == 0,
                      f"{count - bad}/{count} matrices: U*M*V = D, unimodular, "
                      "divisibility chain", seed)


def _check_solver(seed: int, count: int = 300) -> Iterable[CheckResult]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        M = _random_matrix(rng, rows, cols, density=0.8)
        modulus = rng.choice([0, 0, 2, 3, 4, 6])
        x = [rng.randint(-4, 4) for _ in range(cols)]
        b = M.mat_vec(x)
        if modulus:
            b = [v % modulus for v in b]
        got = solve_linear(M, b, modulus)
        if got is None:
            bad += 1
            continue
        mx = M.mat_vec(got)
        if modulus:
            if any((u - w) % modulus for u, w in zip(mx, b)):
                bad += 1
        elif mx != b:
            bad += 1
    yield CheckResult("exact_linalg", "solver_plugback", bad == 0,
                      f"{count - bad}/{count} systems solved and verified", seed)


def _check_groups(seed: int, count: int = 200) -> Iterable[CheckResult]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        M = _random_matrix(rng, rng.randint(1, 5), rng.randint(0, 5))
        G = cokernel(M)
        for i in range(G.ngens):
            want = tuple(1 if j == i else 0 for j in range(G.ngens))
            if G.coordinates(G.generator(i)) != want:
                bad += 1
        for col in M.col_dicts():
            if any(G.coordinates(col)):
                bad += 1
    yield CheckResult("exact_linalg", "cokernel_coordinates", bad == 0,
                      f"{count} cokernels: generators invert, relations die", seed)
    rng = random.Random(seed + 1)
    bad = 0
    trials = 0
    for _ in range(count):
        tors = []
        total = 1
        while True:
            t = rng.choice([2, 2, 3, 4, 5, 6, 8, 9])
            if total * t > 1000 or (tors and t % tors[-1]):
                break
            tors.append(t)
            total *= t
        if not tors:
            continue
        M = SparseIntMatrix.from_dense(
            [[tors[i] if i == j else 0 for j in range(len(tors))]
             for i in range(len(tors))])
        G = cokernel(M)
        coords = tuple(rng.randrange(t) for t in G.torsion)
        k = element_order(G, coords)
        trials += 1
        brute = next(kk for kk in range(1, 1001)
                     if all((kk * c) % t == 0 for t, c in zip(G.torsion, coords)))
        if k != brute:
            bad += 1
    yield CheckResult("exact_linalg", "element_order_brute_force", bad == 0,
                      f"{trials} orders match exhaustive search", seed + 1)


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

def _check_complexes(seed: int) -> Iterable[CheckResult]:
    bad = []
    total = 0
    for X in _shipped_spaces():
        try:
            total += check_simplicial_identities(X)
        except AssertionError as exc:
            bad.append(f"{X.label}: {exc}")
    yield CheckResult("complexes", "simplicial_identities", not bad,
                      f"{total} identities hold" if not bad else "; ".join(bad),
                      seed)
    bad = []
    for X in _shipped_spaces():
        C = normalized_chain_complex(X)
        for d in range(2, X.dim + 1):
            if len(C.boundary(d - 1).matmul(C.boundary(d))):
                bad.append(f"{X.label}@{d}")
    yield CheckResult("complexes", "boundary_squares_to_zero", not bad,
                      "d o d = 0 on all shipped spaces" if not bad
                      else "; ".join(bad), seed)
    X = moore_polygon(3)
    P = product(X, point())
    CX, CP = normalized_chain_complex(X), normalized_chain_complex(P)
    same = all(CX.boundary(d).triples() == CP.boundary(d).triples()
               for d in range(1, X.dim + 1))
    yield CheckResult("complexes", "product_with_point", same,
                      "chain complexes isomorphic", seed)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

def _check_cohomology(seed: int) -> Iterable[CheckResult]:
    rng = random.Random(seed)
    bad = []
    for X in (moore_polygon(2), torus(), suspension(moore_polygon(3))):
        ctx = OperationContext(X)
        for k in range(1, X.dim + 1):
            G = ctx.group(k)
            if G.presentation.is_trivial():
                continue
            z = G.generator_cochain(0)
            base = G.express(z).coords
            for _ in range(20):
                w = Cochain(X, k - 1, 0,
                            {i: rng.randint(-3, 3)
                             for i in range(X.n_simplices(k - 1))})
                if G.express(z + coboundary(w)).coords != base:
                    bad.append(f"{X.label}@{k}")
                    break
    yield CheckResult("cohomology", "coboundary_invariance", not bad,
                      "express(z + dw) = express(z)" if not bad
                      else "; ".join(bad), seed)
    bad = []
    for X in _shipped_spaces():
        C = normalized_chain_complex(X)
        ints = {}
        from .cohomology import cohomology_group
        for k in range(X.dim + 2):
            G = cohomology_group(C, k)
            ints[k] = [0] * G.free_rank + list(G.torsion)
        for m in (2, 3, 4):
            for k in range(X.dim + 1):
                got = cohomology_group(C, k, m)
                want = _predict_mod_m(ints[k], ints[k + 1], m)
                have = sorted(_eldiv([0] * got.free_rank + list(got.torsion)))
                if sorted(_eldiv(want)) != have:
                    bad.append(f"{X.label}@{k} mod {m}")
    yield CheckResult("cohomology", "universal_coefficients", not bad,
                      "mod-m groups match the integral prediction" if not bad
                      else "; ".join(bad), seed)
    bad = []
    G = OperationContext(moore_polygon(4)).group(2)
    for a in range(4):
        Q = subgroup_quotient(G, [G.class_from_coords((a,))])
        span = 4 // gcd(a, 4) if a else 1
        if (Q.presentation.order() or 0) * span != 4:
            bad.append(f"gen {a}")
    yield CheckResult("cohomology", "quotient_orders", not bad,
                      "|G| = |span| * |quotient| on Z/4" if not bad
                      else "; ".join(bad), seed)


def _eldiv(factors):
    out = []
    for d in factors:
        d = abs(d)
        if d == 0:
            out.append(0)
            continue
        p = 2
        while p * p <= d:
            while d % p == 0:
                e = 1
                d //= p
                while d % p == 0:
                    d //= p
                    e += 1
                out.append(p ** e)
            p += 1
        if d > 1:
            out.append(d)
    return out


def _predict_mod_m(hk, hk1, m):
    out = []
    for d in hk:
        out.append(m if d == 0 else gcd(d, m))
    for d in hk1:
        if d:
            g = gcd(d, m)
            if g > 1:
                out.append(g)
    return [d for d in out if d != 1]


# ---------------------------------------------------------------------------
# cochain_ops
# ---------------------------------------------------------------------------

def _random_cochain(rng, X, degree, modulus=0, density=0.6):
    coords = {}
    for i in range(X.n_simplices(degree)):
        if rng.random() < density:
            coords[i] = (rng.randint(-4, 4) if not modulus
                         else rng.randrange(modulus))
    return Cochain(X, degree, modulus, coords)


def _check_cochain_ops(seed: int, pairs_per_space: int = 100
                       ) -> Iterable[CheckResult]:
    rng = random.Random(seed)
    bad = []
    for X in _shipped_spaces():
        ctx = OperationContext(X)
        for _ in range(pairs_per_space):
            p = rng.randint(0, max(0, X.dim - 1))
            q = rng.randint(0, max(0, X.dim - 1 - p))
            x = _random_cochain(rng, X, p)
            y = _random_cochain(rng, X, q)
            lhs = coboundary(cup(ctx, x, y))
            term = cup(ctx, x, coboundary(y))
            rhs = cup(ctx, coboundary(x), y) + (
                term if p % 2 == 0 else term.scale(-1))
            if lhs != rhs:
                bad.append(f"{X.label} ({p},{q})")
                break
    yield CheckResult("cochain_ops", "leibniz_rule", not bad,
                      f"{pairs_per_space} random pairs per space" if not bad
                      else "; ".join(bad), seed)
    bad = []
    for X in (em_space_2(2, 4), torus(), suspension(moore_polygon(2))):
        ctx = OperationContext(X)
        for p in range(1, X.dim):
            for q in range(1, X.dim - p + 1):
                Gp, Gq = ctx.group(p), ctx.group(q)
                if Gp.presentation.is_trivial() or Gq.presentation.is_trivial():
                    continue
                x = Gp.generator_cochain(0)
                y = Gq.generator_cochain(0)
                comm = cup(ctx, x, y) - cup(ctx, y, x).scale(
                    1 if (p * q) % 2 == 0 else -1)
                sign = -1 if (p * q + q) % 2 == 0 else 1
                if comm != coboundary(cup1(ctx, x, y)).scale(sign):
                    bad.append(f"{X.label} ({p},{q})")
    yield CheckResult("cochain_ops", "cup1_commutator", not bad,
                      "delta(x cup1 y) = +-(x^y - (-1)^pq y^x) on cocycles"
                      if not bad else "; ".join(bad), seed)
    bad = []
    for X in (moore_polygon(4), em_space_2(2, 4)):
        ctx = OperationContext(X)
        for k in range(1, X.dim):
            for n in (2, 3, 4):
                G = ctx.group(k, n)
                for i in range(G.presentation.ngens):
                    cls = G.generators()[i]
                    b = bockstein(ctx, cls)
                    if not b.scale(n).is_zero():
                        bad.append(f"{X.label} n*beta at deg {k} mod {n}")
                    rep = cls.representative()
                    w = _random_cochain(rng, X, k - 1, n)
                    b2 = ctx.group(k + 1).express(
                        bockstein_cochain(ctx, rep + coboundary(w)))
                    if b2 != b:
                        bad.append(f"{X.label} lift dep at deg {k} mod {n}")
    yield CheckResult("cochain_ops", "bockstein_properties", not bad,
                      "n*beta = 0 and representative independence" if not bad
                      else "; ".join(bad), seed)
    bad = []
    X = em_space_2(2, 5)
    ctx = OperationContext(X)
    G = ctx.group(2, 2)
    for _ in range(6):
        xc = tuple(rng.randrange(2) for _ in range(G.presentation.ngens))
        yc = tuple(rng.randrange(2) for _ in range(G.presentation.ngens))
        x, y = G.class_from_coords(xc), G.class_from_coords(yc)
        if not coboundary(pontryagin_square_cochain(
                ctx, x.representative())).is_zero():
            bad.append("output not a cocycle")
        sq = ctx.express(cup(ctx, x.representative(), x.representative()))
        if pontryagin_square(ctx, x).scale(2) != reduce_coeffs(ctx, sq, 4):
            bad.append("2 P2 != image of square")
        lhs = (pontryagin_square(ctx, x + y) - pontryagin_square(ctx, x)
               - pontryagin_square(ctx, y))
        xy = ctx.express(cup(ctx, x.representative(), y.representative()))
        if lhs != reduce_coeffs(ctx, xy, 4):
            bad.append("quadratic law")
    yield CheckResult("cochain_ops", "square_refinement", not bad,
                      "cocycle mod 4m, doubling law, quadratic law" if not bad
                      else "; ".join(sorted(set(bad))), seed)


# ---------------------------------------------------------------------------
# period_index
# ---------------------------------------------------------------------------

def _check_period_index(seed: int) -> Iterable[CheckResult]:
    bad = []
    reports = []
    for X in (suspension(moore_polygon(2)), suspension(moore_polygon(3)),
              suspension(moore_polygon(4)), moore_polygon(4)):
        ctx = OperationContext(X)
        for cls in ctx.group(3).generators():
            rep = index_bound(ctx, cls)
            reports.append(rep)
            if rep.index != rep.per:
                bad.append(f"{X.label}: dim <= 4 but index != per")
    S = suspension(moore_polygon(3))
    ctx = OperationContext(product(S, S))
    alpha = ctx.group(3).class_from_coords((1, 1))
    reports.append(index_bound(ctx, alpha))
    for rep in reports:
        if rep.index != rep.per * rep.ordQ:
            bad.append(f"{rep.space}: index != per * ordQ")
        if epsilon(rep.per) % rep.ordQ:
            bad.append(f"{rep.space}: ordQ does not divide epsilon(per)")
    yield CheckResult("period_index", "report_invariants", not bad,
                      f"{len(reports)} reports: index = per*ordQ, "
                      "ordQ | epsilon(per), low dims exact" if not bad
                      else "; ".join(bad), seed)
    bad = []
    for make in (lambda: em_space_2(2, 4),
                 lambda: product(em_space_2(2, 4), torus()),
                 lambda: product(S, S)):
        X = make()
        ctx = OperationContext(X)
        G = ctx.group(3)
        alpha = next((c for c in G.generators() if c.order() != 1), None)
        if alpha is None:
            continue
        ok, _ = verify_lift_independence(ctx, alpha)
        if not ok:
            bad.append(X.label)
    yield CheckResult("period_index", "lift_independence", not bad,
                      "exhaustive over lift cosets" if not bad
                      else "; ".join(bad), seed)


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

_SUITES: dict[str, Callable[[int], Iterable[CheckResult]]] = {
    "exact_linalg": lambda seed: [*_check_snf(seed), *_check_solver(seed),
                                  *_check_groups(seed)],
    "complexes": lambda seed: list(_check_complexes(seed)),
    "cohomology": lambda seed: list(_check_cohomology(seed)),
    "cochain_ops": lambda seed: list(_check_cochain_ops(seed)),
    "period_index": lambda seed: list(_check_period_index(seed)),
}


def run_suite(scope: str = "all", seed: int = DEFAULT_SEED
              ) -> list[CheckResult]:
    if scope == "all":
        scopes = list(SCOPES)
    elif scope in _SUITES:
        scopes = [scope]
    else:
        raise ValueError(f"unknown scope {scope!r}; choose from "
                         f"{', '.join(SCOPES)} or 'all'")
    results: list[CheckResult] = []
    for sc in scopes:
        results.extend(_SUITES[sc](seed))
    return results
