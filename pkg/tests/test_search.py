from fractions import Fraction

import pytest

from dodeca.errors import SelfReturnError
from dodeca.field import QS3, ZERO
from dodeca.geom import Point, Region, region_equal
from dodeca.search import (
    CellPool,
    component_orbit,
    component_periods,
    find_periodic_component,
    first_return_map,
    return_tube,
)


def test_base_component_shapes(ctx):
    comps = ctx.base_components()
    assert [len(comps[i].region.vertices) for i in (1, 2, 3, 4)] == [12, 6, 8, 12]
    assert [comps[i].period for i in (1, 2, 3, 4)] == [1, 1, 1, 1]
    assert [comps[i].rotation_l for i in (1, 2, 3, 4)] == [5, 4, 3, 2]


def test_noncenter_period_by_direct_iteration(ctx):
    w = ctx.wedge
    comps = ctx.base_components()
    for i, expected in ((1, 12), (2, 3), (3, 4), (4, 6)):
        comp = comps[i]
        info = component_periods(comp)
        assert info.noncenter_per_tprime == expected
        probe = Point(
            (comp.center.x * 7 + comp.region.vertices[0].x) / 8,
            (comp.center.y * 7 + comp.region.vertices[0].y) / 8,
        )
        res = w.orbit_period(probe, 4 * expected)
        assert res is not None and res[0] == expected


def test_center_t_period_by_direct_iteration(ctx):
    t, w = ctx.system
    comps = ctx.base_components()
    from dodeca.periods import billiard_orbit_period

    for i, expected in ((1, 12), (2, 6), (3, 4), (4, 3)):
        info = component_periods(comps[i])
        assert info.center_per_t == expected
        assert billiard_orbit_period(t, w.O[i], 2 * expected) == expected


def test_fold_twist_period_arithmetic():
    from dodeca.search import _per_t_from

    # zero twist: the fold closes with the wedge step
    assert _per_t_from(5, 0) == 5
    assert _per_t_from(5, 12) == 5
    # coprime twist needs all twelve turns
    assert _per_t_from(1, 1) == 12
    assert _per_t_from(1, 5) == 12
    assert _per_t_from(1, 4) == 3
    assert _per_t_from(3, 6) == 6


def test_odd_symmetric_component_doubles(ctx):
    info = component_periods(ctx.base_components()[4])
    assert info.centrally_symmetric
    assert info.center_per_t == 3
    assert info.noncenter_per_t == 6


def test_component_idempotent_and_orbit_closes(ctx):
    w = ctx.wedge
    comp = find_periodic_component(w, ctx.sim.gamma1.apply(w.O[4]))
    assert comp.period == 37
    orbit = component_orbit(w, comp)
    assert len(orbit) == 37
    i = w.piece_index(orbit[-1].interior_point())
    assert region_equal(orbit[-1].transformed(w.maps[i]), comp.region)
    again = find_periodic_component(w, orbit[5].interior_point())
    assert region_equal(again.region, orbit[5])


def test_return_system_structure(ctx):
    rs = ctx.return_system("z4")
    total = ZERO
    for piece in rs.pieces:
        assert piece.map.is_isometry() or piece.map.is_translation()
        assert region_equal(piece.source.transformed(piece.map), piece.target)
        total = total + piece.source.area2()
    assert total == rs.domain.area2()
    times = sorted(p.return_time for p in rs.pieces)
    assert times[0] >= 1


def test_return_tube_replay(ctx):
    rs = ctx.return_system("z4")
    piece = max(rs.pieces, key=lambda p: p.return_time)
    tube = return_tube(ctx.wedge, piece)
    assert len(tube) == piece.return_time
    assert region_equal(tube[0], piece.source)


def test_whole_rocket_returns_in_one_step(ctx):
    rs = ctx.return_system("zp")
    assert all(p.return_time == 1 for p in rs.pieces)
    total = ZERO
    for p in rs.pieces:
        total = total + p.source.area2()
    assert total == ctx.wedge.Zp.area2()


def test_self_return_violation_detected(ctx):
    # a square centred at a rotation fixed point maps onto a rotated copy
    # of itself, which overlaps without containment
    w = ctx.wedge
    o1 = w.O[1]
    eps = Fraction(1, 64)
    square = Region.bounded(
        [
            o1 + Point(QS3(-eps), QS3(-eps)),
            o1 + Point(QS3(eps), QS3(-eps)),
            o1 + Point(QS3(eps), QS3(eps)),
            o1 + Point(QS3(-eps), QS3(eps)),
        ]
    )
    with pytest.raises(SelfReturnError):
        first_return_map(w, square)


def test_partition_z4(ctx):
    rep = ctx.partition("z4")
    assert rep.n_components == 7
    assert rep.exact_identity
    assert sorted(rep.periods) == [1, 2, 3, 3, 4, 54, 60]
    assert rep.green_area2 + rep.red_area2 == ctx.wedge.Zp.area2()


def test_cell_pool_exact_subtraction(ctx):
    w = ctx.wedge
    pool = CellPool(w.Zp)
    assert pool.total_area2() == w.Zp.area2()
    comp = ctx.base_components()[3]
    removed = pool.subtract(comp.region)
    assert removed == comp.region.area2()
    assert pool.total_area2() == w.Zp.area2() - comp.region.area2()
    # subtracting again removes nothing
    assert pool.subtract(comp.region).is_zero()
