import pytest

from pertop.cohomology import Cochain
from pertop.errors import CosetTooLarge, NoLift, NotTorsion
from pertop.operations import OperationContext, bockstein_cochain
from pertop.period_index import (
    all_lifts,
    epsilon,
    index_bound,
    lift_to_mod_n,
    period,
    reduced_obstruction,
    verify_lift_independence,
)
from pertop.simplicial import (
    circle,
    em_space_2,
    moore_polygon,
    product,
    suspension,
    torus,
)


from functools import lru_cache


def ctx_of(X):
    return OperationContext(X)


@lru_cache(maxsize=None)
def suspended_moore_ctx(n):
    S = suspension(moore_polygon(n))
    return OperationContext(product(S, S))


@lru_cache(maxsize=None)
def em24_torus_ctx():
    return OperationContext(product(em_space_2(2, 4), torus()))


@lru_cache(maxsize=None)
def em24_ctx():
    return OperationContext(em_space_2(2, 4))


class TestEpsilon:
    def test_values(self):
        assert [epsilon(n) for n in (1, 2, 3, 4, 5, 6)] == [1, 4, 3, 8, 5, 12]


class TestPeriod:
    def test_zero_class(self):
        ctx = ctx_of(moore_polygon(2))
        assert period(ctx, ctx.group(3).zero()) == 1

    def test_em2_generator(self):
        ctx = em24_ctx()
        alpha = ctx.group(3).generators()[0]
        assert period(ctx, alpha) == 2

    def test_product_of_suspended_moores(self):
        ctx = suspended_moore_ctx(3)
        G = ctx.group(3)
        assert sorted(G.torsion) == [3, 3]
        alpha = G.class_from_coords((1, 1))
        assert period(ctx, alpha) == 3

    def test_not_torsion(self):
        X = product(product(circle(1), circle(1)), circle(1))
        ctx = ctx_of(X)
        G = ctx.group(3)
        assert G.free_rank == 1
        with pytest.raises(NotTorsion):
            period(ctx, G.class_from_coords((1,)))


class TestLift:
    def test_zero_class_any_n(self):
        ctx = ctx_of(moore_polygon(2))
        xi = lift_to_mod_n(ctx, ctx.group(3).zero(), 2)
        assert xi.modulus == 2

    def test_em2_lift_is_tautological(self):
        ctx = em24_ctx()
        alpha = ctx.group(3).generators()[0]
        xi = lift_to_mod_n(ctx, alpha, 2)
        cls = ctx.group(2, 2).express(xi)
        assert cls == ctx.group(2, 2).generators()[0]

    def test_no_lift_when_order_does_not_divide(self):
        ctx = ctx_of(suspension(moore_polygon(3)))
        alpha = ctx.group(3).generators()[0]
        assert alpha.order() == 3
        with pytest.raises(NoLift):
            lift_to_mod_n(ctx, alpha, 2)

    def test_lift_into_multiple(self):
        # order-2 class lifts mod 4 as well
        ctx = ctx_of(suspension(moore_polygon(2)))
        alpha = ctx.group(3).generators()[0]
        xi = lift_to_mod_n(ctx, alpha, 4)
        beta = ctx.group(3).express(bockstein_cochain(ctx, xi))
        assert beta == alpha


class TestAllLifts:
    def test_single_lift_when_h2_vanishes(self):
        ctx = em24_ctx()
        alpha = ctx.group(3).generators()[0]
        assert ctx.group(2).presentation.is_trivial()
        assert len(all_lifts(ctx, alpha, 2)) == 1

    def test_two_lift_classes_with_free_h2(self):
        # H^2 = Z: the coset has n^rank = 2 distinct classes
        ctx = em24_torus_ctx()
        G3 = ctx.group(3)
        alpha = G3.generators()[0]
        assert alpha.order() == 2
        assert ctx.group(2).free_rank == 1
        lifts = all_lifts(ctx, alpha, 2)
        assert len(lifts) == 2

    def test_lifts_of_zero_are_reduction_image(self):
        ctx = ctx_of(moore_polygon(2))
        lifts = all_lifts(ctx, ctx.group(3).zero(), 2)
        # H^2(X; Z) = Z/2 reduces onto H^2(X; Z/2) = Z/2: two classes
        assert len(lifts) == 2

    def test_coset_cap(self):
        ctx = em24_torus_ctx()
        alpha = ctx.group(3).generators()[0]
        with pytest.raises(CosetTooLarge):
            all_lifts(ctx, alpha, 2, cap=1)


class TestReducedObstruction:
    def test_trivial_in_low_dimension(self):
        ctx = ctx_of(suspension(moore_polygon(2)))
        alpha = ctx.group(3).generators()[0]
        xi = lift_to_mod_n(ctx, alpha, 2)
        _, coords, order = reduced_obstruction(ctx, alpha, xi)
        assert order == 1 and not any(coords)

    def test_odd_case_order_three(self):
        ctx = suspended_moore_ctx(3)
        alpha = ctx.group(3).class_from_coords((1, 1))
        xi = lift_to_mod_n(ctx, alpha, 3)
        _, _, order = reduced_obstruction(ctx, alpha, xi)
        assert order == 3

    def test_invariant_under_lift_change(self):
        ctx = suspended_moore_ctx(2)
        alpha = ctx.group(3).class_from_coords((1, 1))
        quotients = set()
        for xi in all_lifts(ctx, alpha, 2):
            _, coords, order = reduced_obstruction(ctx, alpha, xi)
            quotients.add((coords, order))
        assert len(quotients) == 1


class TestIndexBound:
    def test_zero_class_report(self):
        ctx = ctx_of(moore_polygon(2))
        rep = index_bound(ctx, ctx.group(3).zero())
        assert (rep.per, rep.ordQ, rep.index) == (1, 1, 1)
        assert rep.exact

    def test_suspension_of_moore(self):
        # dimension 3 model: H^5 = 0 forces ordQ = 1 and index = per
        for n in (2, 3, 4):
            ctx = ctx_of(suspension(moore_polygon(n)))
            alpha = ctx.group(3).generators()[0]
            rep = index_bound(ctx, alpha)
            assert (rep.per, rep.ordQ, rep.index) == (n, 1, n)
            assert rep.exact and rep.epsilon_ok

    def test_odd_sharp_case(self):
        ctx = suspended_moore_ctx(3)
        alpha = ctx.group(3).class_from_coords((1, 1))
        rep = index_bound(ctx, alpha)
        assert (rep.per, rep.ordQ, rep.index) == (3, 3, 9)
        assert rep.exact and rep.epsilon_ok

    def test_every_low_dim_space_has_index_equal_per(self):
        spaces = [suspension(moore_polygon(2)), suspension(moore_polygon(3)),
                  suspension(moore_polygon(5)), moore_polygon(4)]
        for X in spaces:
            assert X.dim <= 4
            ctx = ctx_of(X)
            G = ctx.group(3)
            for cls in G.generators():
                rep = index_bound(ctx, cls)
                assert rep.index == rep.per

    def test_record_format(self):
        ctx = ctx_of(suspension(moore_polygon(2)))
        alpha = ctx.group(3).generators()[0]
        rep = index_bound(ctx, alpha)
        rec = rep.record()
        fields = rec.split("\t")
        assert len(fields) == 8
        assert fields[2:5] == ["2", "1", "2"]
        assert "period" in rep.human_table()


class TestLiftIndependence:
    def test_single_lift_trivially_true(self):
        ctx = em24_ctx()
        alpha = ctx.group(3).generators()[0]
        ok, witness = verify_lift_independence(ctx, alpha)
        assert ok and witness is None

    def test_small_product_with_torus(self):
        ctx = em24_torus_ctx()
        alpha = ctx.group(3).generators()[0]
        ok, witness = verify_lift_independence(ctx, alpha, 2)
        assert ok and witness is None

    def test_moore_products(self):
        for n in (2, 3):
            ctx = suspended_moore_ctx(n)
            alpha = ctx.group(3).class_from_coords((1, 1))
            ok, _ = verify_lift_independence(ctx, alpha)
            assert ok
