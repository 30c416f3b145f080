"""Cohomology of a normalized chain complex, with coefficients Z or Z/m.

A degree-k group is presented from the exact cocycle lattice
ker(delta^k) <= Z^{n_k}: a Hermite row basis of that lattice gives kernel
coordinates, the image of delta^{k-1} (plus m-fold relations when a modulus
is set) becomes a relation matrix there, and its cokernel is the group.
express() therefore doubles as the cocycle test -- a cochain lies in the
lattice iff the greedy reduction terminates with exact divisions -- so
non-cocycles are rejected without ever touching chains one degree up.
That is what keeps degree-5 computations viable on product spaces whose
6-level holds over a million simplices: the top boundary is consumed once,
as a stream, while building the echelon.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence

from .errors import FormatError, NotACocycle
from .linalg import (
    AbelianGroupPresentation,
    RowEchelon,
    cokernel_of_columns,
    kernel_of_echelon,
    reduce_by_pivots,
    vec_addmul,
)
from .simplicial import ChainComplex, SimplicialSet

__all__ = [
    "Cochain",
    "CohomologyGroup",
    "CohomologyClass",
    "QuotientGroup",
    "cohomology_group",
    "torsion_class_order",
    "subgroup_quotient",
    "coboundary",
    "write_cochain",
    "read_cochain",
]


class Cochain:
    """Sparse cochain: degree, modulus (0 = integral), simplex -> coefficient.

    Stored coefficients are nonzero; with modulus m they live in 1..m-1.
    """

    __slots__ = ("space", "degree", "modulus", "coords")

    def __init__(self, space: SimplicialSet, degree: int, modulus: int,
                 coords: dict[int, int]):
        if modulus < 0:
            raise ValueError("modulus must be >= 0")
        clean = {}
        for i, v in coords.items():
            v = v % modulus if modulus else int(v)
            if v:
                clean[int(i)] = v
        self.space = space
        self.degree = degree
        self.modulus = modulus
        self.coords = clean

    def is_zero(self) -> bool:
        return not self.coords

    def value(self, idx: int) -> int:
        return self.coords.get(idx, 0)

    def value_on_ref(self, ref) -> int:
        word, _, idx = ref
        return 0 if word else self.coords.get(idx, 0)

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        out = dict(self.coords)
        vec_addmul(out, other.coords, 1)
        return Cochain(self.space, self.degree, self.modulus, out)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compat(other)
        out = dict(self.coords)
        vec_addmul(out, other.coords, -1)
        return Cochain(self.space, self.degree, self.modulus, out)

    def scale(self, a: int) -> "Cochain":
        return Cochain(self.space, self.degree, self.modulus,
                       {i: a * v for i, v in self.coords.items()})

    def lift_integral(self) -> "Cochain":
        """The integral cochain with the same (reduced) coefficients."""
        return Cochain(self.space, self.degree, 0, dict(self.coords))

    def reduce_mod(self, m: int) -> "Cochain":
        return Cochain(self.space, self.degree, m, dict(self.coords))

    def _compat(self, other: "Cochain") -> None:
        if self.space is not other.space:
            raise ValueError("cochains live on different spaces")
        if self.degree != other.degree or self.modulus != other.modulus:
            raise ValueError("degree/modulus mismatch")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and self.space is other.space
                and self.degree == other.degree and self.modulus == other.modulus
                and self.coords == other.coords)

    def __repr__(self) -> str:
        return (f"Cochain(deg={self.degree}, mod={self.modulus}, "
                f"nnz={len(self.coords)})")


def coboundary(c: Cochain) -> Cochain:
    """delta c, evaluated on the nondegenerate simplices one degree up."""
    X = c.space
    d = c.degree + 1
    out: dict[int, int] = {}
    if d > X.dim:
        return Cochain(X, d, c.modulus, out)
    for i in range(X.n_simplices(d)):
        s = 0
        sign = 1
        for j in range(d + 1):
            v = c.value_on_ref(X.face_ref(d, i, j))
            if v:
                s += sign * v
            sign = -sign
        if c.modulus:
            s %= c.modulus
        if s:
            out[i] = s
    return Cochain(X, d, c.modulus, out)


class CohomologyGroup:
    """H^degree(C; Z or Z/modulus) with generator cocycles and express map."""

    def __init__(self, complex_: ChainComplex, degree: int, modulus: int,
                 kernel_rows: dict[int, dict[int, int]],
                 presentation: AbelianGroupPresentation):
        self.complex = complex_
        self.space = complex_.space
        self.degree = degree
        self.modulus = modulus
        self._kernel_rows = kernel_rows
        self._leads = sorted(kernel_rows)
        self._lead_ordinal = {c: i for i, c in enumerate(self._leads)}
        self.presentation = presentation

    # -- structure ----------------------------------------------------------

    @property
    def free_rank(self) -> int:
        return self.presentation.free_rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.presentation.torsion

    def describe(self) -> str:
        return self.presentation.describe()

    def zero(self) -> "CohomologyClass":
        return CohomologyClass(self, (0,) * self.presentation.ngens)

    def generator_cochain(self, i: int) -> Cochain:
        amb = self.presentation.generator(i)
        out: dict[int, int] = {}
        for lead, q in amb.items():
            vec_addmul(out, self._kernel_rows[self._leads[lead]], q)
        return Cochain(self.space, self.degree, self.modulus, out)

    def generator_cochains(self) -> list[Cochain]:
        return [self.generator_cochain(i) for i in range(self.presentation.ngens)]

    def generators(self) -> list["CohomologyClass"]:
        n = self.presentation.ngens
        out = []
        for i in range(n):
            coords = tuple(1 if j == i else 0 for j in range(n))
            out.append(CohomologyClass(self, coords))
        return out

    # -- express ---------------------------------------------------------------

    def express(self, c: Cochain) -> "CohomologyClass":
        """Canonical coordinates of a cocycle; rejects non-cocycles."""
        if c.space is not self.space:
            raise ValueError("cochain lives on a different space")
        if c.degree != self.degree:
            raise ValueError(f"expected degree {self.degree}, got {c.degree}")
        if c.modulus != self.modulus:
            raise ValueError(f"expected modulus {self.modulus}, got {c.modulus}")
        coeffs, residue = reduce_by_pivots(c.coords, self._kernel_rows)
        if coeffs is None or residue:
            raise NotACocycle(
                f"cochain of degree {c.degree} is not a cocycle"
                + (f" mod {c.modulus}" if c.modulus else ""))
        amb = {self._lead_ordinal[lead]: q for lead, q in coeffs.items()}
        return CohomologyClass(self, self.presentation.coordinates(amb))

    def class_from_coords(self, coords: Sequence[int]) -> "CohomologyClass":
        return CohomologyClass(self, self.presentation.reduce_coords(coords))

    def representative(self, cls: "CohomologyClass") -> Cochain:
        """A cocycle representing the class (sum of generator cocycles)."""
        amb = self.presentation.lift_coords(cls.coords)
        out: dict[int, int] = {}
        for lead, q in amb.items():
            vec_addmul(out, self._kernel_rows[self._leads[lead]], q)
        return Cochain(self.space, self.degree, self.modulus, out)

    def __repr__(self) -> str:
        coeff = "Z" if not self.modulus else f"Z/{self.modulus}"
        return (f"H^{self.degree}({self.space.label}; {coeff}) = "
                f"{self.describe()}")


class CohomologyClass:
    """An element of a CohomologyGroup in canonical coordinates."""

    __slots__ = ("group", "coords")

    def __init__(self, group: CohomologyGroup, coords: Sequence[int]):
        self.group = group
        self.coords = group.presentation.reduce_coords(coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self):
        return self.group.presentation.element_order(self.coords)

    def representative(self) -> Cochain:
        return self.group.representative(self)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        if self.group is not other.group:
            raise ValueError("classes in different groups")
        return CohomologyClass(
            self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        if self.group is not other.group:
            raise ValueError("classes in different groups")
        return CohomologyClass(
            self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, a: int) -> "CohomologyClass":
        return CohomologyClass(self.group, tuple(a * c for c in self.coords))

    def __eq__(self, other) -> bool:
        return (isinstance(other, CohomologyClass) and self.group is other.group
                and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash(self.coords)

    def format_coords(self) -> str:
        p = self.group.presentation
        free = list(self.coords[: p.free_rank])
        tors = list(self.coords[p.free_rank:])
        return (f"free: {free}; torsion: {tors} "
                f"(mod {list(p.torsion)})")

    def __repr__(self) -> str:
        return f"CohomologyClass({self.coords} in {self.group!r})"


def _group_cache_key(C: ChainComplex, degree: int, modulus: int) -> str:
    import hashlib
    h = hashlib.sha256()
    h.update(b"cohomology-group|")
    for d in (degree - 1, degree, degree + 1):
        if 1 <= d <= C.dim:
            h.update(C.level_digest(d).encode())
        else:
            h.update(f"void{d}|{C.rank(d) if 0 <= d <= C.dim else 0}".encode())
    h.update(f"|{degree}|{modulus}".encode())
    return h.hexdigest()


def cohomology_group(C: ChainComplex, degree: int, modulus: int = 0,
                     cache=None) -> CohomologyGroup:
    """Compute H^degree(C; Z/modulus), modulus 0 meaning integral.

    Degrees outside 0..dim give the zero group.  With a cache, the build
    artifacts are looked up by the content hash of the relevant boundary
    levels; cached and fresh construction yield identical groups.
    """
    if modulus < 0:
        raise ValueError("modulus must be >= 0")
    if modulus == 1:
        raise ValueError("modulus 1 has no content")
    if degree < 0 or degree > C.dim:
        pres = AbelianGroupPresentation(0, (), 0, (), ())
        return CohomologyGroup(C, degree, modulus, {}, pres)
    key = None
    if cache is not None:
        from .cache import group_from_payload
        key = _group_cache_key(C, degree, modulus)
        payload = cache.get(key)
        if payload is not None:
            kernel_rows, pres = group_from_payload(payload)
            return CohomologyGroup(C, degree, modulus, kernel_rows, pres)
    n_k = C.rank(degree)
    ech = RowEchelon()
    ech.extend(C.iter_coboundary_rows(degree))
    ech.hermite()
    if modulus == 0:
        kernel = kernel_of_echelon(ech, n_k)
        kernel_rows = kernel.pivots
    else:
        # kernel of delta^k mod m: project the integer kernel of [R | m*I]
        aug = RowEchelon()
        pivot_items = sorted(ech.pivots.items())
        for off, (_, row) in enumerate(pivot_items):
            arow = dict(row)
            arow[n_k + off] = modulus
            aug.insert(arow)
        aug.hermite()
        ker = kernel_of_echelon(aug, n_k + len(pivot_items))
        proj = RowEchelon()
        for row in ker.pivots.values():
            proj.insert({c: v for c, v in row.items() if c < n_k})
        proj.hermite()
        kernel_rows = proj.pivots
    leads = sorted(kernel_rows)
    ordinal = {c: i for i, c in enumerate(leads)}
    # relation columns: image of delta^{k-1}, plus m-fold relations mod m
    relations: list[dict[int, int]] = []
    if degree >= 1:
        img: dict[int, dict[int, int]] = {}
        for sigma, col in enumerate(C.iter_coboundary_rows(degree - 1)):
            # col is the boundary of k-simplex sigma: entries over (k-1)-simplices
            for tau, v in col.items():
                img.setdefault(tau, {})[sigma] = v
        for tau in sorted(img):
            relations.append(img[tau])
    if modulus:
        for i in range(n_k):
            relations.append({i: modulus})
    relcols = []
    for b in relations:
        coeffs, residue = reduce_by_pivots(b, kernel_rows)
        if coeffs is None or residue:
            raise AssertionError("boundary column escaped the cocycle lattice")
        col = {ordinal[lead]: q for lead, q in coeffs.items()}
        if col:
            relcols.append(col)
    pres = cokernel_of_columns(len(leads), relcols)
    if cache is not None:
        from .cache import group_payload
        cache.put(key, group_payload(kernel_rows, pres))
    return CohomologyGroup(C, degree, modulus, kernel_rows, pres)


def torsion_class_order(G: CohomologyGroup, c: CohomologyClass):
    """ord(c) in G; Infinite iff c has a nonzero free coordinate."""
    if c.group is not G:
        raise ValueError("class does not belong to the group")
    return c.order()


class QuotientGroup:
    """G / <gens>, with the projection map on canonical coordinates."""

    def __init__(self, presentation: AbelianGroupPresentation,
                 project: Callable[[Sequence[int]], tuple[int, ...]]):
        self.presentation = presentation
        self._project = project

    def project(self, c: CohomologyClass | Sequence[int]) -> tuple[int, ...]:
        coords = c.coords if isinstance(c, CohomologyClass) else c
        return self._project(coords)

    def order_of(self, coords: Sequence[int]):
        return self.presentation.element_order(coords)

    def describe(self) -> str:
        return self.presentation.describe()


def subgroup_quotient(G: CohomologyGroup, gens: Iterable[CohomologyClass]
                      ) -> QuotientGroup:
    """Quotient of G by the subgroup spanned by the given classes."""
    n = G.presentation.ngens
    cols: list[dict[int, int]] = []
    for i, t in enumerate(G.presentation.torsion):
        cols.append({G.presentation.free_rank + i: t})
    for g in gens:
        if g.group is not G:
            raise ValueError("generator lies in a different group")
        col = {i: v for i, v in enumerate(g.coords) if v}
        cols.append(col)
    pres = cokernel_of_columns(n, cols)

    def project(coords: Sequence[int]) -> tuple[int, ...]:
        amb = {i: int(v) for i, v in enumerate(coords) if v}
        return pres.coordinates(amb)

    return QuotientGroup(pres, project)


# ---------------------------------------------------------------------------
# cochain text format
# ---------------------------------------------------------------------------

def write_cochain(c: Cochain) -> str:
    lines = ["cochain v1", f"degree {c.degree} modulus {c.modulus}"]
    lines.extend(f"{i} {v}" for i, v in sorted(c.coords.items()))
    return "\n".join(lines) + "\n"


def read_cochain(text: str, space: SimplicialSet) -> Cochain:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "cochain v1":
        raise FormatError("missing 'cochain v1' header")
    if len(lines) < 2:
        raise FormatError("missing degree/modulus line")
    head = lines[1].split()
    if len(head) != 4 or head[0] != "degree" or head[2] != "modulus":
        raise FormatError("second line must be 'degree d modulus m'")
    degree, modulus = int(head[1]), int(head[3])
    coords = {}
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"bad coefficient line: {ln!r}")
        idx, v = int(parts[0]), int(parts[1])
        if not 0 <= idx < space.n_simplices(degree):
            raise FormatError(f"simplex id {idx} out of range at degree {degree}")
        coords[idx] = v
    return Cochain(space, degree, modulus, coords)
