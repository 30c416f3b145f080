import random

import pytest

from pertop.linalg import (
    AbelianGroupPresentation,
    ColumnSolver,
    Infinite,
    RowEchelon,
    SparseIntMatrix,
    cokernel,
    element_order,
    kernel_of_echelon,
    reduce_by_pivots,
    smith_normal_form,
    solve_linear,
)

from oracles import (
    brute_element_order,
    brute_quotient_order,
    dense_det,
    dense_group_invariants,
    dense_snf_diagonal,
    groups_equal,
)

SEED = 1729


def random_matrix(rng, rows, cols, lo=-9, hi=9, density=0.7):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    entries[(r, c)] = v
    return SparseIntMatrix(rows, cols, entries)


def check_snf(M, snf):
    U, D, V = snf.U, snf.D, snf.V
    assert U.matmul(M).matmul(V) == D
    assert abs(dense_det(U.to_dense())) == 1
    assert abs(dense_det(V.to_dense())) == 1
    diag = snf.diagonal()
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert diag[: len(nonzero)] == nonzero, "zeros must trail"
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0


class TestSmithNormalForm:
    def test_identity(self):
        M = SparseIntMatrix.from_dense([[1, 0], [0, 1]])
        snf = smith_normal_form(M)
        assert snf.diagonal() == [1, 1]
        check_snf(M, snf)

    def test_zero_matrix(self):
        M = SparseIntMatrix(2, 3, {})
        snf = smith_normal_form(M)
        assert snf.diagonal() == [0, 0]
        assert len(snf.D) == 0
        check_snf(M, snf)

    def test_2x2_by_hand(self):
        # [[2,4],[6,8]] reduces to diag(2, 4) by elementary operations
        M = SparseIntMatrix.from_dense([[2, 4], [6, 8]])
        snf = smith_normal_form(M)
        assert snf.diagonal() == [2, 4]
        check_snf(M, snf)

    def test_matches_dense_oracle(self):
        rng = random.Random(SEED)
        for _ in range(120):
            rows = rng.randint(1, 8)
            cols = rng.randint(1, 8)
            M = random_matrix(rng, rows, cols)
            snf = smith_normal_form(M)
            check_snf(M, snf)
            assert snf.invariant_factors() == dense_snf_diagonal(M.to_dense())

    def test_deterministic(self):
        rng = random.Random(SEED + 1)
        M = random_matrix(rng, 6, 7)
        a = smith_normal_form(M)
        b = smith_normal_form(M)
        assert a.U == b.U and a.D == b.D and a.V == b.V
        assert a.source_digest == M.digest()


class TestSolveLinear:
    def test_exact_solution(self):
        M = SparseIntMatrix.from_dense([[2]])
        assert solve_linear(M, [4]) == [2]

    def test_no_solution(self):
        M = SparseIntMatrix.from_dense([[2]])
        assert solve_linear(M, [3]) is None

    def test_modular_solution(self):
        # brute force over residues mod 5: 2x = 3 (mod 5) -> x = 4
        M = SparseIntMatrix.from_dense([[2]])
        assert solve_linear(M, [3], modulus=5) == [4]
        assert [x for x in range(5) if (2 * x - 3) % 5 == 0] == [4]

    def test_random_systems_verified(self):
        rng = random.Random(SEED + 2)
        for _ in range(80):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            M = random_matrix(rng, rows, cols, density=0.8)
            x = [rng.randint(-4, 4) for _ in range(cols)]
            b = M.mat_vec(x)
            got = solve_linear(M, b)
            assert got is not None
            assert M.mat_vec(got) == b

    def test_random_modular_systems(self):
        rng = random.Random(SEED + 3)
        for _ in range(60):
            m = rng.choice([2, 3, 4, 5, 6, 9])
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            M = random_matrix(rng, rows, cols, density=0.8)
            x = [rng.randint(0, m - 1) for _ in range(cols)]
            b = [v % m for v in M.mat_vec(x)]
            got = solve_linear(M, b, modulus=m)
            assert got is not None
            assert all((u - w) % m == 0 for u, w in zip(M.mat_vec(got), b))

    def test_inconsistent_detected_by_enumeration(self):
        rng = random.Random(SEED + 4)
        for _ in range(40):
            m = rng.choice([2, 3, 4])
            cols = rng.randint(1, 3)
            M = random_matrix(rng, 2, cols, density=0.9)
            b = [rng.randint(0, m - 1) for _ in range(2)]
            got = solve_linear(M, b, modulus=m)
            # exhaustive check over all x in (Z/m)^cols
            xs = [[]]
            for _ in range(cols):
                xs = [x + [v] for x in xs for v in range(m)]
            solvable = any(
                all((u - w) % m == 0 for u, w in zip(M.mat_vec(x), b)) for x in xs)
            assert (got is not None) == solvable


class TestCokernel:
    def test_single_torsion(self):
        G = cokernel(SparseIntMatrix.from_dense([[4]]))
        assert G.free_rank == 0 and G.torsion == (4,)

    def test_zero_matrix_is_free(self):
        G = cokernel(SparseIntMatrix(2, 2, {}))
        assert G.free_rank == 2 and G.torsion == ()

    def test_diag_2_3_gives_z6(self):
        # SNF of diag(2,3) is diag(1,6); quotient enumerates to 6 elements
        G = cokernel(SparseIntMatrix.from_dense([[2, 0], [0, 3]]))
        assert G.free_rank == 0 and G.torsion == (6,)
        assert brute_quotient_order((2, 3), [(0, 0)]) == 6

    def test_matches_dense_oracle(self):
        rng = random.Random(SEED + 5)
        for _ in range(100):
            rows = rng.randint(1, 6)
            cols = rng.randint(0, 6)
            M = random_matrix(rng, rows, cols)
            G = cokernel(M)
            free, tors = dense_group_invariants(
                rows, [[M.entry(r, c) for r in range(rows)] for c in range(cols)])
            assert G.free_rank == free
            assert groups_equal(list(G.torsion), tors)

    def test_coordinate_map_inverts_generators(self):
        rng = random.Random(SEED + 6)
        for _ in range(50):
            M = random_matrix(rng, rng.randint(1, 5), rng.randint(0, 5))
            G = cokernel(M)
            for i in range(G.ngens):
                coords = G.coordinates(G.generator(i))
                want = tuple(1 if j == i else 0 for j in range(G.ngens))
                assert coords == want

    def test_coordinate_map_kills_relations(self):
        rng = random.Random(SEED + 7)
        for _ in range(50):
            M = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
            G = cokernel(M)
            for col in M.col_dicts():
                assert not any(G.coordinates(col))


class TestElementOrder:
    def test_zero_is_order_one(self):
        G = cokernel(SparseIntMatrix.from_dense([[4]]))
        assert element_order(G, (0,)) == 1

    def test_z4(self):
        G = cokernel(SparseIntMatrix.from_dense([[4]]))
        assert element_order(G, (2,)) == 2

    def test_z2_z6(self):
        # brute force k = 1..12 gives 6 for (1, 4)
        G = cokernel(SparseIntMatrix.from_dense([[2, 0], [0, 6]]))
        assert G.torsion == (2, 6)
        assert element_order(G, (1, 4)) == 6
        assert brute_element_order((2, 6), (1, 4)) == 6

    def test_infinite_on_free_part(self):
        G = cokernel(SparseIntMatrix(1, 0, {}))
        assert element_order(G, (3,)) is Infinite

    def test_brute_force_agreement(self):
        rng = random.Random(SEED + 8)
        for _ in range(60):
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
            relations = SparseIntMatrix.from_dense(
                [[tors[i] if i == j else 0 for j in range(len(tors))]
                 for i in range(len(tors))])
            G = cokernel(relations)
            assert groups_equal(list(G.torsion), list(tors))
            coords = tuple(rng.randrange(t) for t in G.torsion)
            assert element_order(G, coords) == brute_element_order(G.torsion, coords)


class TestEchelonKernel:
    def test_kernel_is_exact_lattice(self):
        rng = random.Random(SEED + 9)
        for _ in range(60):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 7)
            M = random_matrix(rng, rows, cols, density=0.75)
            ech = RowEchelon()
            ech.extend(M.row_dicts())
            ker = kernel_of_echelon(ech, cols)
            # every basis vector is in the kernel
            for row in ker.pivots.values():
                vec = [row.get(c, 0) for c in range(cols)]
                assert M.mat_vec(vec) == [0] * rows
            # saturation: brute-force small vectors of the kernel are members
            for _ in range(20):
                x = [rng.randint(-3, 3) for _ in range(cols)]
                if M.mat_vec(x) == [0] * rows:
                    coeffs, residue = reduce_by_pivots(
                        {i: v for i, v in enumerate(x) if v}, ker.pivots)
                    assert coeffs is not None and not residue

    def test_membership_certificate(self):
        rng = random.Random(SEED + 10)
        for _ in range(40):
            M = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
            ech = RowEchelon()
            ech.extend(M.row_dicts())
            ech.hermite()
            # rows of M are members of the row lattice
            for row in M.row_dicts():
                assert ech.contains(row)


class TestMatrixFormat:
    def test_round_trip(self):
        M = SparseIntMatrix.from_dense([[2, 0, -1], [0, 0, 7]])
        text = M.to_text()
        assert text.splitlines()[0] == "2 3 3"
        assert SparseIntMatrix.from_text(text) == M

    def test_bad_header_rejected(self):
        from pertop.errors import FormatError
        with pytest.raises(FormatError):
            SparseIntMatrix.from_text("1 2\n")

    def test_invariants_rejected(self):
        with pytest.raises(ValueError):
            SparseIntMatrix(1, 1, {(0, 2): 1})
        with pytest.raises(ValueError):
            SparseIntMatrix(2, 2, [((0, 0), 1), ((0, 0), 2)])
