"""Exact sparse integer linear algebra.

Smith normal form with unimodular transforms, integer and modular linear
solving, cokernel presentations of finitely generated abelian groups, and the
streaming row-echelon / kernel-lattice engine that the cohomology layer runs
on.  All arithmetic is arbitrary-precision (plain Python ints); nothing here
ever rounds.

Pivoting policy (fixed, so results are deterministic): prefer entries of
minimal absolute value, break ties by the Markowitz fill estimate
(row_nnz * col_nnz), then by (row, col).  Row-echelon insertion always
reduces on the leftmost nonzero column.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

from .errors import FormatError

__all__ = [
    "SparseIntMatrix",
    "SmithDecomposition",
    "AbelianGroupPresentation",
    "smith_normal_form",
    "solve_linear",
    "cokernel",
    "element_order",
    "Infinite",
]

#: Returned by order computations on elements with a nonzero free coordinate.
Infinite = math.inf


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class SparseIntMatrix:
    """Immutable sparse integer matrix.

    Entries are stored as a dict (row, col) -> value with no explicit zeros.
    Instances are hash-addressable through :meth:`digest` and safe to share
    between threads; nothing mutates them after construction.
    """

    __slots__ = ("rows", "cols", "_data", "_digest")

    def __init__(self, rows: int, cols: int, entries):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        data = {}
        items = entries.items() if isinstance(entries, dict) else entries
        for key, v in items:
            r, c = key
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of bounds {rows}x{cols}")
            if v == 0:
                continue
            if key in data:
                raise ValueError(f"duplicate entry at ({r},{c})")
            data[(r, c)] = int(v)
        self.rows = rows
        self.cols = cols
        self._data = data
        self._digest = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(r, c): v for r, row in enumerate(dense)
                                for c, v in enumerate(row) if v})

    @classmethod
    def from_row_dicts(cls, rows: int, cols: int, rowdicts) -> "SparseIntMatrix":
        return cls(rows, cols, {(r, c): v for r, d in enumerate(rowdicts)
                                for c, v in d.items()})

    # -- accessors ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._data)

    def entry(self, r: int, c: int) -> int:
        return self._data.get((r, c), 0)

    def triples(self) -> list[tuple[int, int, int]]:
        """All nonzero entries, sorted by (row, col)."""
        return sorted((r, c, v) for (r, c), v in self._data.items())

    def row_dicts(self) -> list[dict[int, int]]:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self._data.items():
            out[r][c] = v
        return out

    def col_dicts(self) -> list[dict[int, int]]:
        out = [dict() for _ in range(self.cols)]
        for (r, c), v in self._data.items():
            out[c][r] = v
        return out

    def to_dense(self) -> list[list[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._data.items():
            dense[r][c] = v
        return dense

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows,
                               {(c, r): v for (r, c), v in self._data.items()})

    def mat_vec(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        out = [0] * self.rows
        for (r, c), v in self._data.items():
            if x[c]:
                out[r] += v * x[c]
        return out

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        acc: dict[tuple[int, int], int] = {}
        orows = other.row_dicts()
        for (r, k), v in self._data.items():
            for c, w in orows[k].items():
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        return SparseIntMatrix(self.rows, other.cols,
                               {k: v for k, v in acc.items() if v})

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseIntMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self._data == other._data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.digest()))

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={len(self._data)})"

    def digest(self) -> str:
        """Content hash of the canonical text serialization."""
        if self._digest is None:
            h = hashlib.sha256()
            h.update(f"{self.rows} {self.cols}\n".encode())
            for r, c, v in self.triples():
                h.update(f"{r} {c} {v}\n".encode())
            self._digest = h.hexdigest()
        return self._digest

    # -- matrix exchange format --------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {len(self._data)}"]
        lines.extend(f"{r} {c} {v}" for r, c, v in self.triples())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseIntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise FormatError("empty matrix file")
        head = lines[0].split()
        if len(head) != 3:
            raise FormatError("matrix header must be 'rows cols nnz'")
        rows, cols, nnz = (int(x) for x in head)
        if nnz != len(lines) - 1:
            raise FormatError(f"expected {nnz} entries, found {len(lines) - 1}")
        entries = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise FormatError(f"bad entry line: {ln!r}")
            r, c, v = (int(x) for x in parts)
            entries[(r, c)] = v
        return cls(rows, cols, entries)


# ---------------------------------------------------------------------------
# Row-level helpers on sparse dict vectors
# ---------------------------------------------------------------------------

def vec_addmul(dst: dict[int, int], src: dict[int, int], q: int) -> None:
    """dst += q * src, in place, dropping zeros."""
    if not q:
        return
    for c, v in src.items():
        w = dst.get(c, 0) + q * v
        if w:
            dst[c] = w
        else:
            dst.pop(c, None)


def vec_comb(a: int, u: dict[int, int], b: int, v: dict[int, int]) -> dict[int, int]:
    """Return a*u + b*v as a fresh dict."""
    out = {}
    for c, w in u.items():
        x = a * w
        if x:
            out[c] = x
    for c, w in v.items():
        x = out.get(c, 0) + b * w
        if x:
            out[c] = x
        else:
            out.pop(c, None)
    return out


def vec_scale(u: dict[int, int], a: int) -> dict[int, int]:
    return {c: a * v for c, v in u.items()} if a else {}


# ---------------------------------------------------------------------------
# Streaming integer row echelon and kernel lattices
# ---------------------------------------------------------------------------

class RowEchelon:
    """Integer row-echelon accumulator.

    Rows are inserted one at a time; the accumulated pivot rows span the same
    row lattice as everything inserted so far.  Pivot rows are indexed by
    their leading column and kept with positive leading entry.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def insert(self, row: dict[int, int]) -> None:
        pivots = self.pivots
        row = dict(row)
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                if row[c] < 0:
                    row = {k: -v for k, v in row.items()}
                pivots[c] = row
                return
            a, b = row[c], p[c]
            if a % b == 0:
                vec_addmul(row, p, -(a // b))
            else:
                g, s, t = xgcd(b, a)
                pivots[c] = vec_comb(s, p, t, row)
                row = vec_comb(b // g, row, -(a // g), p)
        return

    def extend(self, rows: Iterable[dict[int, int]]) -> None:
        for row in rows:
            self.insert(row)

    def hermite(self) -> None:
        """Reduce entries at later pivot columns into [0, pivot).

        Rows are processed by decreasing leading column, so each reduction
        subtracts an already-reduced row and never reintroduces entries at
        pivot columns; one pass suffices.
        """
        pivots = self.pivots
        for c in sorted(pivots, reverse=True):
            row = pivots[c]
            tail = sorted(k for k in row if k > c and k in pivots)
            for c2 in tail:
                v = row.get(c2)
                if not v:
                    continue
                p = pivots[c2]
                q = v // p[c2]
                if q:
                    vec_addmul(row, p, -q)

    def contains(self, vec: dict[int, int]) -> bool:
        """Membership of vec in the row lattice."""
        coeffs, residue = reduce_by_pivots(vec, self.pivots)
        return coeffs is not None and not residue


def reduce_by_pivots(vec: dict[int, int], pivots: dict[int, dict[int, int]]):
    """Greedy forward elimination of vec by rows indexed on leading column.

    Returns (coeffs, residue).  coeffs is None as soon as a leading entry is
    not exactly divisible by the pivot below it, i.e. vec is not in the
    lattice; residue then holds the partially reduced vector.
    """
    vec = dict(vec)
    coeffs: dict[int, int] = {}
    while vec:
        c = min(vec)
        p = pivots.get(c)
        if p is None:
            return None, vec
        a, d = vec[c], p[c]
        if a % d:
            return None, vec
        q = a // d
        vec_addmul(vec, p, -q)
        coeffs[c] = q
    return coeffs, vec


def kernel_of_echelon(ech: RowEchelon, ncols: int) -> RowEchelon:
    """Exact basis of the integer kernel {x : R x = 0} of an echelon R.

    Works by column-reducing [R; I] with unimodular column operations; the
    identity blocks of the columns whose R-part vanishes form a basis of the
    kernel lattice (it is automatically saturated).  The basis is returned
    Hermite-reduced, as a RowEchelon over the ambient coordinates.
    """
    # Transpose the pivot rows into per-column slices keyed by pivot column.
    rparts: list[dict[int, int]] = [dict() for _ in range(ncols)]
    for pc, prow in ech.pivots.items():
        for c, v in prow.items():
            rparts[c][pc] = v
    colpivots: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
    basis = RowEchelon()
    for j in range(ncols):
        rcol = rparts[j]
        icol = {j: 1}
        while rcol:
            k = min(rcol)
            entry = colpivots.get(k)
            if entry is None:
                colpivots[k] = (rcol, icol)
                rcol = None
                break
            prc, pic = entry
            a, b = rcol[k], prc[k]
            if a % b == 0:
                q = a // b
                vec_addmul(rcol, prc, -q)
                vec_addmul(icol, pic, -q)
            else:
                g, s, t = xgcd(b, a)
                colpivots[k] = (vec_comb(s, prc, t, rcol),
                                vec_comb(s, pic, t, icol))
                rcol, icol = (vec_comb(b // g, rcol, -(a // g), prc),
                              vec_comb(b // g, icol, -(a // g), pic))
        if rcol is not None:
            basis.insert(icol)
    basis.hermite()
    return basis


class ColumnSolver:
    """Solve M x = b over the integers (optionally mod m) for fixed M.

    Column-HNF of M is computed once with the combination of original columns
    tracked, so repeated right-hand sides are cheap.  With a modulus, columns
    m*e_i are adjoined, which realizes solving over Z/m.
    """

    def __init__(self, columns: Sequence[dict[int, int]], modulus: int = 0,
                 nrows: Optional[int] = None):
        self.modulus = modulus
        self.ncols = len(columns)
        self.pivots: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
        for j, col in enumerate(columns):
            self._insert(dict(col), {j: 1})
        if modulus:
            rows = set()
            for col in columns:
                rows.update(col)
            if nrows is not None:
                rows = set(range(nrows))
            for i in sorted(rows):
                self._insert({i: modulus}, {})

    def _insert(self, rcol: dict[int, int], icol: dict[int, int]) -> None:
        pivots = self.pivots
        while rcol:
            k = min(rcol)
            entry = pivots.get(k)
            if entry is None:
                if rcol[k] < 0:
                    rcol = {c: -v for c, v in rcol.items()}
                    icol = {c: -v for c, v in icol.items()}
                pivots[k] = (rcol, icol)
                return
            prc, pic = entry
            a, b = rcol[k], prc[k]
            if a % b == 0:
                q = a // b
                vec_addmul(rcol, prc, -q)
                vec_addmul(icol, pic, -q)
            else:
                g, s, t = xgcd(b, a)
                pivots[k] = (vec_comb(s, prc, t, rcol),
                             vec_comb(s, pic, t, icol))
                rcol, icol = (vec_comb(b // g, rcol, -(a // g), prc),
                              vec_comb(b // g, icol, -(a // g), pic))

    def solve(self, b: dict[int, int]) -> Optional[dict[int, int]]:
        """One solution of M x = b (mod m if set), or None if inconsistent."""
        vec = dict(b)
        x: dict[int, int] = {}
        while vec:
            k = min(vec)
            entry = self.pivots.get(k)
            if entry is None:
                return None
            prc, pic = entry
            a, d = vec[k], prc[k]
            if a % d:
                return None
            q = a // d
            vec_addmul(vec, prc, -q)
            vec_addmul(x, pic, -q)
            # x accumulates -q * pic; flip sign at the end.
        out = {c: -v for c, v in x.items()}
        if self.modulus:
            m = self.modulus
            out = {c: v % m for c, v in out.items()}
            out = {c: v for c, v in out.items() if v}
        return out


# ---------------------------------------------------------------------------
# Smith normal form with transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ...

    Diagonal entries are nonnegative with zeros trailing.  source_digest is
    the content hash of M, so decompositions are cache-addressable.
    """

    U: SparseIntMatrix
    D: SparseIntMatrix
    V: SparseIntMatrix
    source_digest: str

    def diagonal(self) -> list[int]:
        n = min(self.D.rows, self.D.cols)
        return [self.D.entry(i, i) for i in range(n)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d)

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal() if d]


class _SnfWork:
    """Mutable elimination state: M as row dicts, U / Uinv rows, V cols."""

    def __init__(self, M: SparseIntMatrix):
        self.nrows = M.rows
        self.ncols = M.cols
        self.rows: dict[int, dict[int, int]] = {}
        self.colocc: dict[int, set[int]] = {}
        for (r, c), v in M._data.items():
            self.rows.setdefault(r, {})[c] = v
            self.colocc.setdefault(c, set()).add(r)
        self.urows = {r: {r: 1} for r in range(M.rows)}
        self.uinv_cols = {r: {r: 1} for r in range(M.rows)}
        self.vcols = {c: {c: 1} for c in range(M.cols)}

    # row ops --------------------------------------------------------------

    def _set_entry(self, r: int, c: int, v: int) -> None:
        row = self.rows.setdefault(r, {})
        if v:
            row[c] = v
            self.colocc.setdefault(c, set()).add(r)
        else:
            if row.pop(c, None) is not None:
                occ = self.colocc.get(c)
                if occ is not None:
                    occ.discard(r)

    def row_addmul(self, dst: int, src: int, q: int) -> None:
        if not q:
            return
        for c, v in list(self.rows.get(src, {}).items()):
            self._set_entry(dst, c, self.rows.get(dst, {}).get(c, 0) + q * v)
        vec_addmul(self.urows[dst], self.urows[src], q)
        # inverse op on Uinv columns: col_src -= q * col_dst
        vec_addmul(self.uinv_cols[src], self.uinv_cols[dst], -q)

    def row_swap(self, a: int, b: int) -> None:
        if a == b:
            return
        ra = self.rows.get(a, {})
        rb = self.rows.get(b, {})
        for c in set(ra) | set(rb):
            occ = self.colocc.setdefault(c, set())
            occ.discard(a)
            occ.discard(b)
        self.rows[a], self.rows[b] = rb, ra
        for c in self.rows[a]:
            self.colocc[c].add(a)
        for c in self.rows[b]:
            self.colocc[c].add(b)
        self.urows[a], self.urows[b] = self.urows[b], self.urows[a]
        self.uinv_cols[a], self.uinv_cols[b] = self.uinv_cols[b], self.uinv_cols[a]

    def row_negate(self, r: int) -> None:
        self.rows[r] = {c: -v for c, v in self.rows.get(r, {}).items()}
        self.urows[r] = {c: -v for c, v in self.urows[r].items()}
        self.uinv_cols[r] = {c: -v for c, v in self.uinv_cols[r].items()}

    # column ops -------------------------------------------------------------

    def col_addmul(self, dst: int, src: int, q: int) -> None:
        if not q:
            return
        for r in list(self.colocc.get(src, ())):
            v = self.rows[r].get(src, 0)
            self._set_entry(r, dst, self.rows[r].get(dst, 0) + q * v)
        vec_addmul(self.vcols[dst], self.vcols[src], q)

    def col_swap(self, a: int, b: int) -> None:
        if a == b:
            return
        occ = set(self.colocc.get(a, ())) | set(self.colocc.get(b, ()))
        for r in occ:
            row = self.rows[r]
            va, vb = row.pop(a, 0), row.pop(b, 0)
            if va:
                row[b] = va
            if vb:
                row[a] = vb
        self.colocc[a], self.colocc[b] = (
            self.colocc.get(b, set()), self.colocc.get(a, set()))
        self.vcols[a], self.vcols[b] = self.vcols[b], self.vcols[a]

    def entry(self, r: int, c: int) -> int:
        return self.rows.get(r, {}).get(c, 0)


def _find_pivot(w: _SnfWork, k: int):
    """Deterministic pivot: min |v|, then Markowitz fill, then (r, c)."""
    best = None
    for c, occ in w.colocc.items():
        if c < k:
            continue
        for r in occ:
            if r < k:
                continue
            v = w.rows[r].get(c)
            if not v:
                continue
            rn = sum(1 for cc in w.rows[r] if cc >= k)
            cn = sum(1 for rr in occ if rr >= k)
            key = (abs(v), (rn - 1) * (cn - 1), r, c)
            if best is None or key < best[0]:
                best = (key, r, c)
                if key[0] == 1 and key[1] == 0:
                    return r, c
    return (best[1], best[2]) if best else None


def _snf_eliminate(w: _SnfWork, k: int) -> None:
    """Clear row k and column k except the pivot at (k, k)."""
    while True:
        changed = False
        # column k
        for r in sorted(w.colocc.get(k, ())):
            if r == k:
                continue
            a = w.entry(r, k)
            if not a:
                continue
            b = w.entry(k, k)
            if a % b == 0:
                w.row_addmul(r, k, -(a // b))
            else:
                g, s, t = xgcd(b, a)
                # rows k, r <- (s*k + t*r, -(a//g)*k + (b//g)*r)
                _row_2x2(w, k, r, s, t, -(a // g), b // g)
            changed = True
        # row k
        for c in sorted(w.rows.get(k, {})):
            if c == k:
                continue
            a = w.entry(k, c)
            if not a:
                continue
            b = w.entry(k, k)
            if a % b == 0:
                w.col_addmul(c, k, -(a // b))
            else:
                g, s, t = xgcd(b, a)
                _col_2x2(w, k, c, s, t, -(a // g), b // g)
            changed = True
        if not changed:
            return


def _row_2x2(w: _SnfWork, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """(row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j); ad - bc = ±1."""
    ri = dict(w.rows.get(i, {}))
    rj = dict(w.rows.get(j, {}))
    new_i = vec_comb(a, ri, b, rj)
    new_j = vec_comb(c, ri, d, rj)
    for cc in set(ri) | set(rj):
        occ = w.colocc.setdefault(cc, set())
        occ.discard(i)
        occ.discard(j)
    w.rows[i] = new_i
    w.rows[j] = new_j
    for cc in new_i:
        w.colocc.setdefault(cc, set()).add(i)
    for cc in new_j:
        w.colocc.setdefault(cc, set()).add(j)
    ui, uj = w.urows[i], w.urows[j]
    w.urows[i] = vec_comb(a, ui, b, uj)
    w.urows[j] = vec_comb(c, ui, d, uj)
    # inverse: Uinv cols (i, j) <- (d*col_i - c*col_j, -b*col_i + a*col_j)
    det = a * d - b * c
    qi, qj = w.uinv_cols[i], w.uinv_cols[j]
    w.uinv_cols[i] = vec_comb(d * det, qi, -c * det, qj)
    w.uinv_cols[j] = vec_comb(-b * det, qi, a * det, qj)


def _col_2x2(w: _SnfWork, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """(col_i, col_j) <- (a*col_i + b*col_j, c*col_i + d*col_j)."""
    occ = set(w.colocc.get(i, ())) | set(w.colocc.get(j, ()))
    for r in occ:
        row = w.rows[r]
        vi, vj = row.get(i, 0), row.get(j, 0)
        _set = w._set_entry
        _set(r, i, a * vi + b * vj)
        _set(r, j, c * vi + d * vj)
    vi, vj = w.vcols[i], w.vcols[j]
    w.vcols[i] = vec_comb(a, vi, b, vj)
    w.vcols[j] = vec_comb(c, vi, d, vj)


def _snf_work(M: SparseIntMatrix) -> tuple[_SnfWork, int]:
    w = _SnfWork(M)
    n = min(M.rows, M.cols)
    k = 0
    while k < n:
        piv = _find_pivot(w, k)
        if piv is None:
            break
        r, c = piv
        w.row_swap(k, r)
        w.col_swap(k, c)
        _snf_eliminate(w, k)
        k += 1
    rank = k
    # positive diagonal
    for i in range(rank):
        if w.entry(i, i) < 0:
            w.row_negate(i)
    # divisibility chain: repair adjacent violations until stable
    stable = False
    while not stable:
        stable = True
        for i in range(rank - 1):
            a, b = w.entry(i, i), w.entry(i + 1, i + 1)
            if b % a:
                stable = False
                w.row_addmul(i, i + 1, 1)
                _snf_eliminate(w, i)
                for j in (i, i + 1):
                    if w.entry(j, j) < 0:
                        w.row_negate(j)
    return w, rank


def smith_normal_form(M: SparseIntMatrix) -> SmithDecomposition:
    """Smith normal form with both unimodular transforms.

    Total function; the zero matrix decomposes with identity transforms.
    """
    w, rank = _snf_work(M)
    D = SparseIntMatrix(M.rows, M.cols,
                        {(i, i): w.entry(i, i) for i in range(rank)})
    U = SparseIntMatrix.from_row_dicts(M.rows, M.rows,
                                       [w.urows[r] for r in range(M.rows)])
    vent = {}
    for c, col in w.vcols.items():
        for r, v in col.items():
            vent[(r, c)] = v
    V = SparseIntMatrix(M.cols, M.cols, vent)
    return SmithDecomposition(U=U, D=D, V=V, source_digest=M.digest())


def solve_linear(M: SparseIntMatrix, b: Sequence[int], modulus: int = 0
                 ) -> Optional[list[int]]:
    """Solve M x = b exactly (modulus 0) or mod `modulus`.

    Returns one solution as a plain list, or None when the system is
    inconsistent -- which is a meaningful answer, not an error.
    """
    if len(b) != M.rows:
        raise ValueError("dimension mismatch")
    if modulus < 0:
        raise ValueError("modulus must be >= 0")
    solver = ColumnSolver(M.col_dicts(), modulus=modulus, nrows=M.rows)
    rhs = {i: v for i, v in enumerate(b) if v}
    if modulus:
        rhs = {i: v % modulus for i, v in rhs.items()}
        rhs = {i: v for i, v in rhs.items() if v}
    x = solver.solve(rhs)
    if x is None:
        return None
    out = [0] * M.cols
    for c, v in x.items():
        if c < M.cols:
            out[c] = v
    if modulus:
        out = [v % modulus for v in out]
    # verification is cheap and guards the solver
    mx = M.mat_vec(out)
    for i in range(M.rows):
        want = b[i]
        got = mx[i]
        if modulus:
            if (got - want) % modulus:
                raise AssertionError("solver returned a non-solution")
        elif got != want:
            raise AssertionError("solver returned a non-solution")
    return out


# ---------------------------------------------------------------------------
# Finitely generated abelian groups presented as cokernels
# ---------------------------------------------------------------------------

class AbelianGroupPresentation:
    """Z^free_rank (+) Z/t1 (+) ... with a coordinate map from an ambient Z^a.

    torsion coefficients satisfy t1 | t2 | ... and are all >= 2.  The
    coordinate map sends an ambient vector to canonical coordinates
    (free parts first, then torsion parts reduced mod t_i); generators are
    ambient vectors mapping to the canonical basis.
    """

    __slots__ = ("free_rank", "torsion", "ambient_rank", "_coord_rows",
                 "_generators")

    def __init__(self, free_rank: int, torsion: Sequence[int], ambient_rank: int,
                 coord_rows: Sequence[dict[int, int]],
                 generators: Sequence[dict[int, int]]):
        for i, t in enumerate(torsion):
            if t < 2:
                raise ValueError("torsion coefficients must be >= 2")
            if i and t % torsion[i - 1]:
                raise ValueError("torsion coefficients must form a divisibility chain")
        self.free_rank = free_rank
        self.torsion = tuple(int(t) for t in torsion)
        self.ambient_rank = ambient_rank
        self._coord_rows = tuple(dict(r) for r in coord_rows)
        self._generators = tuple(dict(g) for g in generators)
        if len(self._coord_rows) != free_rank + len(self.torsion):
            raise ValueError("coordinate map has wrong shape")
        if len(self._generators) != free_rank + len(self.torsion):
            raise ValueError("generator list has wrong shape")

    # -- structure -----------------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def order(self) -> Optional[int]:
        """Group order; None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def describe(self) -> str:
        """'0', 'Z', 'Z^2 x Z/4' style human-readable name."""
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " x ".join(parts) if parts else "0"

    # -- coordinates -----------------------------------------------------------

    def reduce_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError("coordinate length mismatch")
        out = list(int(c) for c in coords)
        for i, t in enumerate(self.torsion):
            out[self.free_rank + i] %= t
        return tuple(out)

    def coordinates(self, ambient: dict[int, int]) -> tuple[int, ...]:
        """Canonical coordinates of an ambient vector."""
        raw = []
        for row in self._coord_rows:
            s = 0
            for c, v in row.items():
                a = ambient.get(c)
                if a:
                    s += v * a
            raw.append(s)
        return self.reduce_coords(raw)

    def generator(self, i: int) -> dict[int, int]:
        return dict(self._generators[i])

    def lift_coords(self, coords: Sequence[int]) -> dict[int, int]:
        """One ambient vector with the given canonical coordinates."""
        out: dict[int, int] = {}
        for ci, g in zip(coords, self._generators):
            vec_addmul(out, g, int(ci))
        return out

    def element_order(self, coords: Sequence[int]):
        """Smallest k >= 1 with k*coords = 0; Infinite on free support."""
        coords = self.reduce_coords(coords)
        if any(coords[: self.free_rank]):
            return Infinite
        k = 1
        for t, c in zip(self.torsion, coords[self.free_rank:]):
            if c:
                k = k * (t // gcd(t, c)) // gcd(k, t // gcd(t, c))
        return k

    def __repr__(self) -> str:
        return f"AbelianGroupPresentation({self.describe()})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, AbelianGroupPresentation)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self) -> int:
        return hash((self.free_rank, self.torsion))


def cokernel(M: SparseIntMatrix) -> AbelianGroupPresentation:
    """Presentation of Z^rows / column-span(M), with total coordinate map."""
    return cokernel_of_columns(M.rows, M.col_dicts())


def cokernel_of_columns(ambient: int, columns: Sequence[dict[int, int]]
                        ) -> AbelianGroupPresentation:
    relmat = SparseIntMatrix(ambient, len(columns),
                             {(r, j): v for j, col in enumerate(columns)
                              for r, v in col.items()})
    w, rank = _snf_work(relmat)
    diag = [w.entry(i, i) for i in range(rank)]
    free_idx = list(range(rank, ambient))
    tors_idx = [i for i in range(rank) if diag[i] >= 2]
    coord_rows = []
    generators = []
    for i in free_idx:
        coord_rows.append(dict(w.urows[i]))
        generators.append(dict(w.uinv_cols[i]))
    for i in tors_idx:
        coord_rows.append(dict(w.urows[i]))
        generators.append(dict(w.uinv_cols[i]))
    torsion = [diag[i] for i in tors_idx]
    return AbelianGroupPresentation(
        free_rank=len(free_idx), torsion=torsion, ambient_rank=ambient,
        coord_rows=coord_rows, generators=generators)


def element_order(G: AbelianGroupPresentation, coords: Sequence[int]):
    """Order of canonical coordinates in a presented group."""
    return G.element_order(coords)
