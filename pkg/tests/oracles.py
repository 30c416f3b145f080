"""Independent brute-force oracles used by the test suite.

Everything in this file is deliberately written against plain dense lists,
separate from the package's sparse engine, so that the two sides of every
cross-check share no code.
"""

from fractions import Fraction
from math import gcd


# ---------------------------------------------------------------------------
# Dense Smith normal form (no transforms; diagonal only)
# ---------------------------------------------------------------------------

def dense_snf_diagonal(mat):
    """Invariant factors of an integer matrix, by textbook elimination."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    top = 0
    while top < rows and top < cols:
        # find smallest nonzero |entry| in the remaining block
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = m[i][j]
                if v and (best is None or abs(v) < abs(best[0])):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[top], row[bj] = row[bj], row[top]
        dirty = False
        for i in range(top + 1, rows):
            q = m[i][top] // m[top][top]
            if q:
                for j in range(cols):
                    m[i][j] -= q * m[top][j]
            if m[i][top]:
                dirty = True
        for j in range(top + 1, cols):
            q = m[top][j] // m[top][top]
            if q:
                for i in range(rows):
                    m[i][j] -= q * m[i][top]
            if m[top][j]:
                dirty = True
        if dirty:
            continue
        # entry must divide the rest of the block
        d = abs(m[top][top])
        ok = True
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if m[i][j] % d:
                    for jj in range(cols):
                        m[top][jj] += m[i][jj]
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        diag.append(d)
        top += 1
    return diag


def dense_group_invariants(ambient, columns):
    """(free_rank, torsion list) of Z^ambient / span(columns)."""
    if not columns:
        return ambient, []
    mat = [[col[r] for col in columns] for r in range(ambient)]
    diag = dense_snf_diagonal(mat)
    torsion = [d for d in diag if d >= 2]
    return ambient - len(diag), torsion


def dense_det(mat):
    """Exact determinant by fraction-free expansion (small matrices)."""
    n = len(mat)
    m = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
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
    assert det.denominator == 1
    return int(det)


# ---------------------------------------------------------------------------
# Abelian group arithmetic on invariant-factor lists
# ---------------------------------------------------------------------------

def normalize_factors(factors):
    """Sorted elementary-divisor multiset of a list of cyclic orders."""
    out = []
    for d in factors:
        d = abs(d)
        if d in (0, 1):
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
    return sorted(out)


def groups_equal(a, b):
    return normalize_factors(a) == normalize_factors(b)


def tensor_factors(a, b):
    out = []
    for x in a:
        for y in b:
            if x == 0 and y == 0:
                out.append(0)
            elif x == 0:
                out.append(y)
            elif y == 0:
                out.append(x)
            else:
                out.append(gcd(x, y))
    return [d for d in out if d != 1]


def tor_factors(a, b):
    out = []
    for x in a:
        for y in b:
            if x and y:
                g = gcd(x, y)
                if g > 1:
                    out.append(g)
    return out


def cohomology_mod_m(hk_int, hk1_int, m):
    """H^k(C; Z/m) from integral H^k and H^{k+1}: (H^k (x) Z/m) + Tor(H^{k+1}, Z/m)."""
    return tensor_factors(hk_int, [m]) + tor_factors(hk1_int, [m])


# ---------------------------------------------------------------------------
# Brute-force order computations in small finite groups
# ---------------------------------------------------------------------------

def brute_element_order(torsion, coords, cap=10000):
    """Minimal k >= 1 with k*coords = 0 in (+) Z/t_i, by trying k = 1, 2, ..."""
    for k in range(1, cap + 1):
        if all((k * c) % t == 0 for t, c in zip(torsion, coords)):
            return k
    raise AssertionError("order not found within cap")


def enumerate_group(torsion):
    """All elements of (+) Z/t_i as coordinate tuples."""
    elems = [()]
    for t in torsion:
        elems = [e + (i,) for e in elems for i in range(t)]
    return elems


def brute_quotient_order(torsion, gens):
    """Order of ((+) Z/t_i) / <gens> by coset counting."""
    elems = enumerate_group(torsion)
    span = {tuple(0 for _ in torsion)}
    frontier = list(span)
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple((c + x) % t for c, x, t in zip(cur, g, torsion))
            if nxt not in span:
                span.add(nxt)
                frontier.append(nxt)
    assert len(elems) % len(span) == 0
    return len(elems) // len(span)
