"""Finite simplicial sets and their normalized chain complexes.

A space stores only its nondegenerate simplices.  Every face is a canonical
reference: a pair (degeneracy word, nondegenerate simplex), the word written
in strictly decreasing form s_{j1} s_{j2} ... with j1 > j2 > ...  Degenerate
simplices are never materialized; bar constructions are overwhelmingly
degenerate, so this is what keeps dimension-6 computations desk-sized.

Refs are plain tuples (word, base_dim, base_index).  The arithmetic that
pushes face and degeneracy operators through words lives in word_insert /
word_face and is shared by every space kind.

Products are kept virtual: levels are pairs of ids into per-factor simplex
tables, faces are computed arithmetically, and only the sorted list of
nondegenerate pair ids per level is stored.  A product of a dimension-6
Eilenberg-MacLane model with a torus has about 1.4 million nondegenerate
6-simplices; none of their faces are ever stored.
"""

from __future__ import annotations

import hashlib
from array import array
from bisect import bisect_left
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, FormatError

__all__ = [
    "SimplicialSet",
    "ChainComplex",
    "Ref",
    "DEFAULT_BUDGET",
    "point",
    "points",
    "standard_simplex",
    "circle",
    "moore_polygon",
    "wbar_cyclic",
    "em_space_2",
    "suspension",
    "join_two_points",
    "product",
    "skeleton",
    "torus",
    "normalized_chain_complex",
    "check_simplicial_identities",
    "write_sset",
    "read_sset",
]

#: Global default cap on canonical simplex references per space.
DEFAULT_BUDGET = 5_000_000

Ref = tuple  # (word, base_dim, base_index)


# ---------------------------------------------------------------------------
# Degeneracy word arithmetic
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def word_insert(word: tuple[int, ...], j: int) -> tuple[int, ...]:
    """Canonical decreasing form of s_j composed with s_word.

    Uses s_j s_a = s_{a+1} s_j for j <= a.
    """
    out = []
    i = 0
    n = len(word)
    while i < n and j <= word[i]:
        out.append(word[i] + 1)
        i += 1
    out.append(j)
    out.extend(word[i:])
    return tuple(out)


@lru_cache(maxsize=65536)
def word_face(word: tuple[int, ...], i: int):
    """Push d_i through s_word.

    Returns (prefix_word, residual): residual is the face index that still
    applies to the base simplex, or None when some s_a absorbed d_i
    (d_a s_a = d_{a+1} s_a = id).
    """
    out = []
    for t, a in enumerate(word):
        if i < a:
            out.append(a - 1)
        elif i == a or i == a + 1:
            out.extend(word[t + 1:])
            return tuple(out), None
        else:
            out.append(a)
            i -= 1
    return tuple(out), i


def word_compose(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical form of s_outer composed with s_inner."""
    w = inner
    for j in reversed(outer):
        w = word_insert(w, j)
    return w


def word_mask(word: Iterable[int]) -> int:
    m = 0
    for j in word:
        m |= 1 << j
    return m


def _words_into(p: int, d: int) -> list[tuple[int, ...]]:
    """All canonical degeneracy words from dimension p up to dimension d.

    Words are strictly decreasing tuples (j_1, ..., j_l), l = d - p, with
    j_t <= d - t; there are C(d, d-p) of them.
    """
    l = d - p
    if l == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], t: int, hi: int) -> None:
        if t > l:
            out.append(tuple(prefix))
            return
        lo = l - t  # must leave room for the remaining strictly smaller entries
        for j in range(min(hi, d - t), lo - 1, -1):
            prefix.append(j)
            rec(prefix, t + 1, j - 1)
            prefix.pop()

    rec([], 1, d - 1)
    return out


# ---------------------------------------------------------------------------
# Spaces
# ---------------------------------------------------------------------------

class SimplicialSet:
    """Base class; concrete spaces implement the level accessors."""

    label: str
    dim: int

    # -- required interface -------------------------------------------------

    def n_simplices(self, d: int) -> int:
        raise NotImplementedError

    def simplex_key(self, d: int, i: int):
        raise NotImplementedError

    def face_ref(self, d: int, i: int, j: int) -> Ref:
        """Canonical reference of the j-th face of nondeg d-simplex i."""
        raise NotImplementedError

    def table(self, upto: int) -> "SimplexTable":
        raise NotImplementedError

    def nondeg_index_of_id(self, d: int, t: int) -> int:
        raise NotImplementedError

    def id_of_nondeg(self, d: int, i: int) -> int:
        raise NotImplementedError

    # -- shared machinery ----------------------------------------------------

    def ref_face(self, ref: Ref, i: int) -> Ref:
        """d_i of a canonical reference (total dimension len(word) + base_dim)."""
        word, p, idx = ref
        w2, res = word_face(word, i)
        if res is None:
            return (w2, p, idx)
        fw, fp, fidx = self.face_ref(p, idx, res)
        return (word_compose(w2, fw), fp, fidx)

    def ref_degeneracy(self, ref: Ref, i: int) -> Ref:
        word, p, idx = ref
        return (word_insert(word, i), p, idx)

    def iter_boundary_columns(self, d: int) -> Iterator[dict[int, int]]:
        """Normalized boundary of each nondeg d-simplex, as sparse rows.

        Column order follows the nondegenerate index order; faces landing on
        degenerate simplices contribute nothing.
        """
        for i in range(self.n_simplices(d)):
            col: dict[int, int] = {}
            sign = 1
            for j in range(d + 1):
                word, p, idx = self.face_ref(d, i, j)
                if not word:
                    v = col.get(idx, 0) + sign
                    if v:
                        col[idx] = v
                    else:
                        del col[idx]
                sign = -sign
            yield col

    def total_refs(self, upto: Optional[int] = None) -> int:
        """Number of canonical simplex references through the given level."""
        upto = self.dim if upto is None else min(upto, self.dim)
        from math import comb
        total = 0
        for d in range(upto + 1):
            for p in range(min(d, self.dim) + 1):
                total += self.n_simplices(p) * comb(d, d - p)
        return total

    def level_digest(self, d: int) -> str:
        """Content hash of the face structure at one level."""
        h = hashlib.sha256()
        h.update(f"level {d} n {self.n_simplices(d)}\n".encode())
        if d >= 1:
            for i in range(self.n_simplices(d)):
                parts = []
                for j in range(d + 1):
                    word, p, idx = self.face_ref(d, i, j)
                    parts.append(f"{idx}:{','.join(map(str, word))}")
                h.update((" ".join(parts) + "\n").encode())
        return h.hexdigest()

    def digest_upto(self, k: int) -> str:
        h = hashlib.sha256()
        for d in range(min(k, self.dim) + 1):
            h.update(self.level_digest(d).encode())
        h.update(f"dim {self.dim} upto {min(k, self.dim)}".encode())
        return h.hexdigest()

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label!r} dim={self.dim}>"


class _Level:
    __slots__ = ("keys", "index", "faces")

    def __init__(self, keys, faces):
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)}
        self.faces = faces


class ExplicitSimplicialSet(SimplicialSet):
    """Space with explicitly stored nondegenerate simplices and face refs.

    Levels may be provided up front or built lazily from a key-level builder
    (an object with methods keys(d), face(d, i, key), degeneracy(d, i, key))
    whose key space covers *all* simplices, degenerate included.
    """

    def __init__(self, label: str, dim: int, levels: Optional[list[_Level]] = None,
                 builder=None, budget: int = DEFAULT_BUDGET):
        self.label = label
        self.dim = dim
        self._levels: dict[int, _Level] = {}
        self._builder = builder
        self._budget = budget
        self._refs_used = 0
        self._norm_memo: dict = {}
        self._table: Optional[ExplicitTable] = None
        if levels is not None:
            for d, lv in enumerate(levels):
                self._levels[d] = lv

    @classmethod
    def from_level_data(cls, label: str, level_data: Sequence[tuple]) -> "ExplicitSimplicialSet":
        """level_data[d] = (keys, faces) with faces already canonical refs."""
        levels = [_Level(list(keys), [tuple(f) for f in faces])
                  for keys, faces in level_data]
        return cls(label, len(levels) - 1, levels=levels)

    # -- lazy construction ---------------------------------------------------

    def _level(self, d: int) -> _Level:
        lv = self._levels.get(d)
        if lv is not None:
            return lv
        if self._builder is None or d > self.dim or d < 0:
            raise ValueError(f"level {d} unavailable for {self.label!r}")
        for dd in range(d + 1):
            if dd not in self._levels:
                self._build_level(dd)
        return self._levels[d]

    def _build_level(self, d: int) -> None:
        b = self._builder
        keys_all = list(b.keys(d))
        self._refs_used += len(keys_all)
        if self._refs_used > self._budget:
            raise BudgetExceeded(
                f"{self.label}: {self._refs_used} simplex references exceed "
                f"budget {self._budget}")
        nondeg = []
        for key in keys_all:
            if d == 0 or not self._is_degenerate(d, key):
                nondeg.append(key)
        nondeg.sort()
        level = _Level(nondeg, None)
        self._levels[d] = level
        if d >= 1:
            faces = []
            for key in nondeg:
                faces.append(tuple(self._normalize(d - 1, b.face(d, j, key))
                                   for j in range(d + 1)))
            level.faces = faces
        else:
            level.faces = []

    def _is_degenerate(self, d: int, key) -> bool:
        b = self._builder
        for i in range(d):
            f = b.face(d, i + 1, key)
            if b.degeneracy(d - 1, i, f) == key:
                return True
        return False

    def _normalize(self, d: int, key) -> Ref:
        """Canonical (word, base_dim, base_index) of an arbitrary level-d key."""
        memo = self._norm_memo
        got = memo.get((d, key))
        if got is not None:
            return got
        b = self._builder
        ref = None
        if d > 0:
            for i in range(d):
                f = b.face(d, i + 1, key)
                if b.degeneracy(d - 1, i, f) == key:
                    word, p, idx = self._normalize(d - 1, f)
                    ref = (word_insert(word, i), p, idx)
                    break
        if ref is None:
            ref = ((), d, self._levels[d].index[key])
        memo[(d, key)] = ref
        return ref

    # -- interface -------------------------------------------------------------

    def n_simplices(self, d: int) -> int:
        if d < 0 or d > self.dim:
            return 0
        return len(self._level(d).keys)

    def simplex_key(self, d: int, i: int):
        return self._level(d).keys[i]

    def face_ref(self, d: int, i: int, j: int) -> Ref:
        return self._level(d).faces[i][j]

    def nondeg_index_of_id(self, d: int, t: int) -> int:
        return t if t < self.n_simplices(d) else -1

    def id_of_nondeg(self, d: int, i: int) -> int:
        return i

    def table(self, upto: int) -> "ExplicitTable":
        # tables extend above self.dim: those levels are purely degenerate
        if self._table is None or self._table.upto < upto:
            self._table = ExplicitTable(self, upto)
        return self._table


# ---------------------------------------------------------------------------
# Simplex tables: integer-coded views of *all* simplices per level
# ---------------------------------------------------------------------------

class SimplexTable:
    """Interface shared by explicit and product tables."""

    upto: int

    def count_all(self, d: int) -> int:
        raise NotImplementedError

    def face_id(self, d: int, t: int, i: int) -> int:
        raise NotImplementedError

    def mask(self, d: int, t: int) -> int:
        raise NotImplementedError

    def n_nondeg(self, d: int) -> int:
        raise NotImplementedError


class ExplicitTable(SimplexTable):
    """Arrays of every simplex (degenerate included) of an explicit space.

    At level d the first n_d ids are the nondegenerate simplices in their
    index order, followed by the degenerate ones sorted by
    (base_dim, base_index, word).
    """

    def __init__(self, space: ExplicitSimplicialSet, upto: int):
        self.space = space
        self.upto = upto
        self._entries: list[list[tuple]] = []
        self._ids: list[dict] = []
        self._faces: list[Optional[list[int]]] = []
        self._masks: list[list[int]] = []
        for d in range(upto + 1):
            entries = [((), d, i) for i in range(space.n_simplices(d))]
            nd = len(entries)
            degen = []
            for p in range(d):
                for idx in range(space.n_simplices(p)):
                    for word in _words_into(p, d):
                        if word:
                            degen.append((word, p, idx))
            degen.sort(key=lambda e: (e[1], e[2], e[0]))
            entries.extend(degen)
            ids = {e: t for t, e in enumerate(entries)}
            self._entries.append(entries)
            self._ids.append(ids)
            self._masks.append([word_mask(e[0]) for e in entries])
            if d == 0:
                self._faces.append(None)
                continue
            prev_ids = self._ids[d - 1]
            faces = array("l")
            for e in entries:
                word, p, idx = e
                for i in range(d + 1):
                    if word:
                        w2, res = word_face(word, i)
                        if res is None:
                            tgt = (w2, p, idx)
                        else:
                            fw, fp, fidx = space.face_ref(p, idx, res)
                            tgt = (word_compose(w2, fw), fp, fidx)
                    else:
                        fw, fp, fidx = space.face_ref(p, idx, i)
                        tgt = (fw, fp, fidx)
                    faces.append(prev_ids[tgt])
            self._faces.append(faces)

    def count_all(self, d: int) -> int:
        return len(self._entries[d])

    def n_nondeg(self, d: int) -> int:
        return self.space.n_simplices(d)

    def face_id(self, d: int, t: int, i: int) -> int:
        return self._faces[d][t * (d + 1) + i]

    def mask(self, d: int, t: int) -> int:
        return self._masks[d][t]

    def entry(self, d: int, t: int) -> tuple:
        return self._entries[d][t]

    def id_of(self, d: int, entry: tuple) -> int:
        return self._ids[d][entry]


class ProductTable(SimplexTable):
    """Levelwise pairs of two tables, id = a * count_Y + b, all arithmetic."""

    def __init__(self, tx: SimplexTable, ty: SimplexTable, upto: int):
        self.tx = tx
        self.ty = ty
        self.upto = upto
        self._wx = [tx.count_all(d) if d <= tx.upto else 0 for d in range(upto + 1)]
        self._wy = [ty.count_all(d) if d <= ty.upto else 0 for d in range(upto + 1)]

    def count_all(self, d: int) -> int:
        return self._wx[d] * self._wy[d]

    def face_id(self, d: int, t: int, i: int) -> int:
        a, b = divmod(t, self._wy[d])
        return (self.tx.face_id(d, a, i) * self._wy[d - 1]
                + self.ty.face_id(d, b, i))

    def mask(self, d: int, t: int) -> int:
        a, b = divmod(t, self._wy[d])
        return self.tx.mask(d, a) & self.ty.mask(d, b)

    def n_nondeg(self, d: int) -> int:
        raise NotImplementedError("use the product space for nondeg indexing")


class ProductSimplicialSet(SimplicialSet):
    """Categorical product of simplicial sets, truncated at a dimension bound.

    Nondegenerate level-d simplices are the pairs of factor simplices whose
    canonical degeneracy supports are disjoint; the support of a pair is the
    intersection of the component supports, so everything reduces to bitmask
    arithmetic over the factor tables.
    """

    def __init__(self, X: SimplicialSet, Y: SimplicialSet,
                 dmax: Optional[int] = None, budget: int = DEFAULT_BUDGET):
        full = X.dim + Y.dim
        self.dim = full if dmax is None else min(dmax, full)
        self.X = X
        self.Y = Y
        self.label = f"({X.label} x {Y.label})" + (
            f"|{self.dim}" if self.dim < full else "")
        self._tx = X.table(self.dim)
        self._ty = Y.table(self.dim)
        self._tab = ProductTable(self._tx, self._ty, self.dim)
        self._budget = budget
        self._ids: dict[int, array] = {}
        self._refs_used = 0

    def _nondeg_ids(self, d: int) -> array:
        ids = self._ids.get(d)
        if ids is not None:
            return ids
        if d < 0 or d > self.dim:
            ids = array("q")
            self._ids[d] = ids
            return ids
        total = self._tab.count_all(d)
        self._refs_used += total
        if self._refs_used > self._budget:
            raise BudgetExceeded(
                f"{self.label}: {self._refs_used} simplex references exceed "
                f"budget {self._budget}")
        wy = self._tab._wy[d]
        mx = self._tx
        my = self._ty
        ids = array("q")
        app = ids.append
        xmasks = [mx.mask(d, a) for a in range(self._tab._wx[d])]
        ymasks = [my.mask(d, b) for b in range(wy)]
        base = 0
        for a_mask in xmasks:
            if a_mask == 0:
                ids.extend(range(base, base + wy))
            else:
                for b, b_mask in enumerate(ymasks):
                    if not (a_mask & b_mask):
                        app(base + b)
            base += wy
        self._ids[d] = ids
        return ids

    def n_simplices(self, d: int) -> int:
        if d < 0 or d > self.dim:
            return 0
        return len(self._nondeg_ids(d))

    def simplex_key(self, d: int, i: int):
        t = self._nondeg_ids(d)[i]
        a, b = divmod(t, self._tab._wy[d])
        ka = self._tx.entry(d, a) if isinstance(self._tx, ExplicitTable) else a
        kb = self._ty.entry(d, b) if isinstance(self._ty, ExplicitTable) else b
        return (ka, kb)

    def face_ref(self, d: int, i: int, j: int) -> Ref:
        t = self._nondeg_ids(d)[i]
        return self._ref_of_id(d - 1, self._tab.face_id(d, t, j))

    def _ref_of_id(self, d: int, t: int) -> Ref:
        m = self._tab.mask(d, t)
        if m == 0:
            return ((), d, self.nondeg_index_of_id(d, t))
        word = []
        dd, tt = d, t
        j = m.bit_length() - 1
        while m:
            if m >> j & 1:
                word.append(j)
                tt = self._tab.face_id(dd, tt, j)
                m &= ~(1 << j)
                dd -= 1
            j -= 1
        return (tuple(word), dd, self.nondeg_index_of_id(dd, tt))

    def nondeg_index_of_id(self, d: int, t: int) -> int:
        ids = self._nondeg_ids(d)
        i = bisect_left(ids, t)
        return i if i < len(ids) and ids[i] == t else -1

    def id_of_nondeg(self, d: int, i: int) -> int:
        return self._nondeg_ids(d)[i]

    def table(self, upto: int) -> ProductTable:
        if upto <= self._tab.upto:
            return ProductTable(self._tx, self._ty, upto)
        if self.dim < self.X.dim + self.Y.dim:
            raise ValueError(
                "tables of a truncated product do not extend above its bound")
        return ProductTable(self.X.table(upto), self.Y.table(upto), upto)

    def iter_boundary_columns(self, d: int) -> Iterator[dict[int, int]]:
        ids = self._nondeg_ids(d)
        tab = self._tab
        prev = self._nondeg_ids(d - 1)
        wy = tab._wy[d]
        wy1 = tab._wy[d - 1]
        fx = self._tx.face_id
        fy = self._ty.face_id
        mxm = self._tx.mask
        mym = self._ty.mask
        n1 = len(prev)
        for t in ids:
            a, b = divmod(t, wy)
            col: dict[int, int] = {}
            sign = 1
            for j in range(d + 1):
                aa = fx(d, a, j)
                bb = fy(d, b, j)
                if not (mxm(d - 1, aa) & mym(d - 1, bb)):
                    tt = aa * wy1 + bb
                    r = bisect_left(prev, tt)
                    v = col.get(r, 0) + sign
                    if v:
                        col[r] = v
                    else:
                        del col[r]
                sign = -sign
            yield col


class SkeletonSimplicialSet(SimplicialSet):
    """Subobject generated by the simplices of dimension <= d (a view)."""

    def __init__(self, X: SimplicialSet, d: int):
        self.X = X
        self.dim = min(d, X.dim)
        self.label = f"sk{self.dim}({X.label})"
        self._table: Optional[ExplicitTable] = None

    def n_simplices(self, d: int) -> int:
        return self.X.n_simplices(d) if 0 <= d <= self.dim else 0

    def simplex_key(self, d: int, i: int):
        return self.X.simplex_key(d, i)

    def face_ref(self, d: int, i: int, j: int) -> Ref:
        return self.X.face_ref(d, i, j)

    def nondeg_index_of_id(self, d: int, t: int) -> int:
        return t if t < self.n_simplices(d) else -1

    def id_of_nondeg(self, d: int, i: int) -> int:
        return i

    def table(self, upto: int) -> SimplexTable:
        # the skeleton's own table: degeneracies of <= dim simplices only
        if self._table is None or self._table.upto < upto:
            self._table = ExplicitTable(self, upto)
        return self._table

    def iter_boundary_columns(self, d: int) -> Iterator[dict[int, int]]:
        if d > self.dim:
            return iter(())
        return self.X.iter_boundary_columns(d)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def point() -> ExplicitSimplicialSet:
    return ExplicitSimplicialSet.from_level_data("pt", [(["*"], [])])


def points(k: int) -> ExplicitSimplicialSet:
    """k discrete vertices."""
    if k < 1:
        raise ValueError("need at least one point")
    return ExplicitSimplicialSet.from_level_data(
        f"points({k})", [(list(range(k)), [])])


def standard_simplex(n: int) -> ExplicitSimplicialSet:
    """The n-simplex: nondegenerate simplices are vertex subsets."""
    levels = []
    prev_index: dict[tuple, int] = {}
    for d in range(n + 1):
        keys = _subsets(n, d + 1)
        index = {k: i for i, k in enumerate(keys)}
        faces = []
        if d >= 1:
            for k in keys:
                faces.append(tuple(((), d - 1, prev_index[k[:j] + k[j + 1:]])
                                   for j in range(d + 1)))
        levels.append((keys, faces))
        prev_index = index
    return ExplicitSimplicialSet.from_level_data(f"simplex({n})", levels)


def _subsets(n: int, size: int) -> list[tuple[int, ...]]:
    from itertools import combinations
    return [tuple(c) for c in combinations(range(n + 1), size)]


def circle(k: int = 1) -> ExplicitSimplicialSet:
    """Circle as a k-gon: k vertices and k edges (k = 1 is one loop)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    verts = [f"v{i}" for i in range(k)]
    edges = [f"e{i}" for i in range(k)]
    faces = [(((), 0, (i + 1) % k), ((), 0, i)) for i in range(k)]
    return ExplicitSimplicialSet.from_level_data(
        f"circle({k})", [(verts, []), (edges, faces)])


def moore_polygon(n: int) -> ExplicitSimplicialSet:
    """M(Z/n, 1): a triangulated n-gon disk, boundary glued to one loop.

    Vertices c (center) and v; spokes r_i from c to v; one outer loop e at v;
    triangle T_i has faces (e, r_{i+1}, r_i).  H_1 = Z/n, H^2(-;Z) = Z/n.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    verts = ["c", "v"]
    edges = ["e"] + [f"r{i}" for i in range(n)]
    efaces = [(((), 0, 1), ((), 0, 1))]          # e: v -> v
    efaces += [(((), 0, 1), ((), 0, 0)) for _ in range(n)]  # r_i: c -> v
    tris = [f"T{i}" for i in range(n)]
    tfaces = [(((), 1, 0), ((), 1, 1 + (i + 1) % n), ((), 1, 1 + i))
              for i in range(n)]
    return ExplicitSimplicialSet.from_level_data(
        f"moore({n})", [(verts, []), (edges, efaces), (tris, tfaces)])


# -- bar constructions -------------------------------------------------------

class _NerveBuilder:
    """Nerve of Z/n: level d keys are tuples in (Z/n)^d."""

    def __init__(self, n: int):
        self.n = n

    def keys(self, d: int):
        return iproduct(range(self.n), repeat=d)

    def face(self, d: int, i: int, key):
        if i == 0:
            return key[1:]
        if i == d:
            return key[:-1]
        return key[:i - 1] + ((key[i - 1] + key[i]) % self.n,) + key[i + 1:]

    def degeneracy(self, d: int, i: int, key):
        return key[:i] + (0,) + key[i:]


def wbar_cyclic(n: int, dmax: int, budget: int = DEFAULT_BUDGET) -> ExplicitSimplicialSet:
    """Classifying space of Z/n (the nerve), truncated above dmax."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    total = sum(n ** d for d in range(dmax + 1))
    if total > budget:
        raise BudgetExceeded(
            f"wbar({n},{dmax}) needs {total} simplices, budget {budget}")
    return ExplicitSimplicialSet(f"wbar({n},{dmax})", dmax,
                                 builder=_NerveBuilder(n), budget=budget)


class _ClassifyingBuilder:
    """W-bar of a simplicial abelian group given by a nerve builder.

    Level d keys are tuples (g_{d-1}, ..., g_0) with g_k a level-k key of the
    underlying group; faces follow the classifying-space formulas, with the
    group written additively.
    """

    def __init__(self, group: _NerveBuilder):
        self.g = group

    def _g_levels(self, d: int):
        return [list(self.g.keys(k)) for k in range(d)]

    def keys(self, d: int):
        if d == 0:
            yield ()
            return
        levels = [list(self.g.keys(k)) for k in range(d - 1, -1, -1)]
        yield from iproduct(*levels)

    def _add(self, k: int, x, y):
        n = self.g.n
        return tuple((a + b) % n for a, b in zip(x, y))

    def face(self, d: int, i: int, key):
        g = self.g
        if i == 0:
            return key[1:]
        if i == d:
            return tuple(g.face(d - 1 - t, d - 1 - t, key[t])
                         for t in range(d - 1))
        out = []
        for t in range(i - 1):
            out.append(g.face(d - 1 - t, i - 1 - t, key[t]))
        merged = self._add(d - i - 1, g.face(d - i, 0, key[i - 1]), key[i])
        out.append(merged)
        out.extend(key[i + 1:])
        return tuple(out)

    def degeneracy(self, d: int, i: int, key):
        g = self.g
        out = []
        for t in range(i):
            out.append(g.degeneracy(d - 1 - t, i - 1 - t, key[t]))
        out.append((0,) * (d - i))
        out.extend(key[i:])
        return tuple(out)


def em_space_2(n: int, dmax: int, budget: int = DEFAULT_BUDGET) -> ExplicitSimplicialSet:
    """Iterated bar-construction model of K(Z/n, 2), truncated above dmax.

    H^i agrees with K(Z/n, 2) for i <= dmax - 1.  The top level of the
    construction holds n^(dmax*(dmax-1)/2) simplices, so the budget guards
    against n >= 3 at dmax = 6.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    total = sum(n ** (d * (d - 1) // 2) for d in range(dmax + 1))
    if total > budget:
        raise BudgetExceeded(
            f"em2({n},{dmax}) needs {total} simplices, budget {budget}")
    builder = _ClassifyingBuilder(_NerveBuilder(n))
    return ExplicitSimplicialSet(f"em2({n},{dmax})", dmax,
                                 builder=builder, budget=budget)


# -- joins and suspension ------------------------------------------------------

class _JoinBuilder:
    """Join X * Y on canonical-reference keys.

    Keys: ('l', ref), ('r', ref), ('m', p, xref, yref) with p the total
    dimension of the X part; refs may be degenerate.
    """

    def __init__(self, X: SimplicialSet, Y: SimplicialSet):
        self.X = X
        self.Y = Y

    def keys(self, d: int):
        for ref in _iter_refs(self.X, d):
            yield ("l", ref)
        for ref in _iter_refs(self.Y, d):
            yield ("r", ref)
        for p in range(d):
            q = d - 1 - p
            for xr in _iter_refs(self.X, p):
                for yr in _iter_refs(self.Y, q):
                    yield ("m", p, xr, yr)

    def face(self, d: int, i: int, key):
        tag = key[0]
        if tag == "l":
            return ("l", self.X.ref_face(key[1], i))
        if tag == "r":
            return ("r", self.Y.ref_face(key[1], i))
        _, p, xr, yr = key
        q = d - 1 - p
        if i <= p:
            if p == 0:
                return ("r", yr)
            return ("m", p - 1, self.X.ref_face(xr, i), yr)
        if q == 0:
            return ("l", xr)
        return ("m", p, xr, self.Y.ref_face(yr, i - p - 1))

    def degeneracy(self, d: int, i: int, key):
        tag = key[0]
        if tag == "l":
            return ("l", self.X.ref_degeneracy(key[1], i))
        if tag == "r":
            return ("r", self.Y.ref_degeneracy(key[1], i))
        _, p, xr, yr = key
        if i <= p:
            return ("m", p + 1, self.X.ref_degeneracy(xr, i), yr)
        return ("m", p, xr, self.Y.ref_degeneracy(yr, i - p - 1))


def _iter_refs(X: SimplicialSet, d: int) -> Iterator[Ref]:
    """All canonical references of total dimension d (degenerate included)."""
    for p in range(min(d, X.dim) + 1):
        words = _words_into(p, d)
        for idx in range(X.n_simplices(p)):
            for w in words:
                yield (w, p, idx)


def join_two_points(X: SimplicialSet, budget: int = DEFAULT_BUDGET
                    ) -> ExplicitSimplicialSet:
    """Join of X with two discrete points: the unreduced suspension."""
    s0 = points(2)
    builder = _JoinBuilder(X, s0)
    return ExplicitSimplicialSet(f"susp({X.label})", X.dim + 1,
                                 builder=builder, budget=budget)


def suspension(X: SimplicialSet, budget: int = DEFAULT_BUDGET) -> ExplicitSimplicialSet:
    if X.dim < 0 or X.n_simplices(0) == 0:
        raise ValueError("suspension needs a nonempty space")
    return join_two_points(X, budget=budget)


def product(X: SimplicialSet, Y: SimplicialSet, dmax: Optional[int] = None,
            budget: int = DEFAULT_BUDGET) -> ProductSimplicialSet:
    return ProductSimplicialSet(X, Y, dmax=dmax, budget=budget)


def torus() -> ProductSimplicialSet:
    """Minimal torus model: product of two one-vertex circles."""
    return product(circle(1), circle(1))


def skeleton(X: SimplicialSet, d: int) -> SimplicialSet:
    if d < 0:
        raise ValueError("d must be >= 0")
    if d >= X.dim:
        return X
    return SkeletonSimplicialSet(X, d)


# ---------------------------------------------------------------------------
# Chain complexes
# ---------------------------------------------------------------------------

class ChainComplex:
    """Normalized chains of a space: ranks plus sparse boundary matrices.

    Boundary matrices materialize lazily; degree-d cohomology only ever
    consumes the level-(d+1) boundary as a column stream, which matters for
    product spaces whose top level is large.
    """

    def __init__(self, space: SimplicialSet):
        self.space = space
        self.dim = space.dim
        self._boundaries: dict[int, "SparseIntMatrix"] = {}
        self._digests: dict[int, str] = {}

    def rank(self, d: int) -> int:
        return self.space.n_simplices(d)

    @property
    def ranks(self) -> list[int]:
        return [self.rank(d) for d in range(self.dim + 1)]

    def iter_coboundary_rows(self, k: int) -> Iterator[dict[int, int]]:
        """Rows of delta^k: C^k -> C^{k+1}, i.e. boundaries of (k+1)-simplices."""
        if k + 1 > self.dim:
            return iter(())
        return self.space.iter_boundary_columns(k + 1)

    def boundary(self, d: int):
        from .linalg import SparseIntMatrix
        M = self._boundaries.get(d)
        if M is None:
            entries = {}
            for j, col in enumerate(self.space.iter_boundary_columns(d)):
                for r, v in col.items():
                    entries[(r, j)] = v
            M = SparseIntMatrix(self.rank(d - 1), self.rank(d), entries)
            self._boundaries[d] = M
        return M

    def level_digest(self, d: int) -> str:
        got = self._digests.get(d)
        if got is None:
            h = hashlib.sha256()
            h.update(f"rank {self.rank(d)} of {self.rank(d - 1) if d else 0}\n".encode())
            if d >= 1:
                for col in self.space.iter_boundary_columns(d):
                    h.update((";".join(f"{r}:{v}" for r, v in sorted(col.items()))
                              + "\n").encode())
            got = h.hexdigest()
            self._digests[d] = got
        return got


def normalized_chain_complex(X: SimplicialSet) -> ChainComplex:
    return ChainComplex(X)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def check_simplicial_identities(X: SimplicialSet, max_dim: Optional[int] = None,
                                budget: int = 100_000) -> int:
    """Verify d_i d_j = d_{j-1} d_i (i < j) on every nondegenerate simplex.

    Returns the number of identities checked; raises AssertionError on any
    violation.  Spaces larger than the budget are refused.
    """
    top = X.dim if max_dim is None else min(max_dim, X.dim)
    if X.total_refs(top) > budget:
        raise BudgetExceeded("space too large for exhaustive identity check")
    checked = 0
    for d in range(2, top + 1):
        for i_s in range(X.n_simplices(d)):
            refs = [X.face_ref(d, i_s, j) for j in range(d + 1)]
            for j in range(1, d + 1):
                for i in range(j):
                    a = X.ref_face(refs[j], i)
                    b = X.ref_face(refs[i], j - 1)
                    assert a == b, (
                        f"identity failure at {X.label} dim {d} simplex {i_s}: "
                        f"d_{i} d_{j} != d_{j - 1} d_{i}")
                    checked += 1
    return checked


# ---------------------------------------------------------------------------
# sset text format
# ---------------------------------------------------------------------------

def write_sset(X: SimplicialSet) -> str:
    """Serialize to the 'sset v1' text format (deterministic, byte-exact)."""
    lines = ["sset v1"]
    for d in range(X.dim + 1):
        n = X.n_simplices(d)
        lines.append(f"dim {d} {n}")
        for i in range(n):
            parts = [str(i)]
            if d >= 1:
                for j in range(d + 1):
                    word, p, idx = X.face_ref(d, i, j)
                    parts.append(f"{idx}:{','.join(map(str, word))}")
            lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def read_sset(text: str, label: str = "loaded") -> ExplicitSimplicialSet:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "sset v1":
        raise FormatError("missing 'sset v1' header")
    levels: list[tuple[list, list]] = []
    pos = 1
    while pos < len(lines):
        ln = lines[pos].strip()
        pos += 1
        if not ln:
            continue
        head = ln.split()
        if head[0] != "dim" or len(head) != 3:
            raise FormatError(f"expected 'dim d count', got {ln!r}")
        d, count = int(head[1]), int(head[2])
        if d != len(levels):
            raise FormatError(f"levels out of order at dim {d}")
        keys = []
        faces = []
        for i in range(count):
            if pos >= len(lines):
                raise FormatError("truncated file")
            parts = lines[pos].split()
            pos += 1
            if int(parts[0]) != i:
                raise FormatError(f"bad simplex id at dim {d}: {parts[0]}")
            keys.append(i)
            if d >= 1:
                if len(parts) != d + 2:
                    raise FormatError(f"simplex {i} at dim {d} needs {d + 1} faces")
                row = []
                for token in parts[1:]:
                    if ":" not in token:
                        raise FormatError(f"bad face token {token!r}")
                    idx_s, word_s = token.split(":", 1)
                    word = tuple(int(w) for w in word_s.split(",")) if word_s else ()
                    for a, b in zip(word, word[1:]):
                        if a <= b:
                            raise FormatError(f"degeneracy word not decreasing: {token!r}")
                    p = d - 1 - len(word)
                    row.append((word, p, int(idx_s)))
                faces.append(tuple(row))
        levels.append((keys, faces))
    X = ExplicitSimplicialSet.from_level_data(label, levels)
    # validate face targets exist
    for d in range(1, X.dim + 1):
        for i in range(X.n_simplices(d)):
            for word, p, idx in X._level(d).faces[i]:
                if p < 0 or idx < 0 or idx >= X.n_simplices(p):
                    raise FormatError(f"face of simplex {i} at dim {d} out of range")
    return X
