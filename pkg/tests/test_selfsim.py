from dataclasses import replace
from fractions import Fraction

import pytest

from dodeca.errors import DomainError
from dodeca.field import QS3, qs3
from dodeca.geom import AffMap, Point, overlap_status, region_equal
from dodeca.selfsim import (
    aperiodic_witness,
    contraction_ratios,
    match_return_systems,
    point_first_return,
    verify_conjugacy,
)


def test_contraction_ratios_exact(ctx):
    r1, r4 = contraction_ratios(ctx.wedge)
    assert r1 == qs3(7, -4)
    assert r4 == qs3(-3, 2)
    assert 0 < float(r1) < float(r4) < 1


def test_gamma_actions(ctx, sim):
    w = ctx.wedge
    assert sim.gamma1.apply(w.O[5]) == w.O[1]
    assert sim.gamma4.apply(w.O[5]) == w.O[4]
    assert sim.Z4.area2() == sim.ratio4 * sim.ratio4 * w.Zp.area2()
    assert sim.Z14.area2() == sim.ratio1 * sim.ratio1 * sim.Z4.area2()


def test_base_polygons_are_contracted_beads(ctx, sim):
    # the rockets' base arcs come from the contracted images of the bead
    # polygon centred at O_5, which are the components W_1 and W_4
    w = ctx.wedge
    bead = ctx.table.mirrored[3]
    comps = ctx.base_components()
    assert region_equal(comps[1].region, bead.transformed(sim.gamma1))
    assert region_equal(comps[4].region, bead.transformed(sim.gamma4))


def test_g1w4_period_37(sim):
    assert sim.g1w4.period == 37


def test_gammaX_maps_z4_to_x(sim):
    assert region_equal(sim.Z4.transformed(sim.gammaX), sim.X)
    assert sim.gammaX.det() == sim.ratio1 * sim.ratio1
    assert overlap_status(sim.X, sim.Z4.convex_parts()) == "inside"


def test_x_bounded_by_three_periodic_components(ctx, sim):
    y2 = sim.g1w4.region.transformed(sim.pullback_map)
    walls = [sim.w3.region, sim.w2.region, y2]
    for wall in walls:
        assert overlap_status(sim.X, wall.convex_parts()) == "disjoint"
    pts = sim.X.vertices
    n = len(pts)
    for i in range(n):
        mid = Point((pts[i].x + pts[(i + 1) % n].x) / 2, (pts[i].y + pts[(i + 1) % n].y) / 2)
        assert any(wall.classify(mid) == "boundary" for wall in walls)


def test_y2_really_is_the_double_preimage(ctx, sim):
    # pushing Y2 forward two steps must land exactly on gamma_1(W_4)
    w = ctx.wedge
    y2 = sim.g1w4.region.transformed(sim.pullback_map)
    cur = y2
    for _ in range(2):
        i = w.piece_index(cur.interior_point())
        cur = cur.transformed(w.maps[i])
    assert region_equal(cur, sim.g1w4.region)


def test_conjugacy_sampled(ctx, sim):
    report = verify_conjugacy(
        ctx.wedge,
        sim,
        ctx.return_system("z4"),
        ctx.return_system("z14"),
        ctx.return_system("x"),
        samples=40,
        seed=5,
    )
    assert report.pieces_matched_z14 == 8
    assert report.pieces_matched_x == 8
    assert report.samples_checked >= 40


def test_conjugacy_rejects_wrong_map(ctx, sim):
    wrong = AffMap.homothety(ctx.wedge.apex, sim.ratio4)
    with pytest.raises(AssertionError):
        match_return_systems(
            ctx.return_system("z4"), ctx.return_system("z14"), wrong
        )


def test_witness_fixed_point_exact(ctx, sim):
    wit = ctx.witness(10**4, 8)
    assert sim.gammaX.apply(wit.y) == wit.y
    assert wit.y == Point(
        QS3(Fraction(-4, 7), Fraction(6, 7)), QS3(Fraction(12, 7), Fraction(2, 7))
    )
    assert wit.boundary_hit is None
    assert wit.steps_checked == 10**4
    assert wit.period_lower_bound == 2**8


def test_witness_spiral_growth(ctx):
    wit = ctx.witness(10**4, 8)
    assert wit.spiral_tprime_periods[:3] == [1, 1, 37]
    assert all(f >= 2 for f in wit.growth_factors)
    assert len(wit.spiral_return_periods) == 8


def test_witness_rejects_non_contraction(ctx, sim):
    broken = replace(sim, gammaX=AffMap.identity())
    with pytest.raises(DomainError):
        aperiodic_witness(ctx.wedge, broken, steps=10, depth=1, verify_spiral=0)


def test_point_first_return_matches_return_system(ctx, sim):
    w = ctx.wedge
    rs = ctx.return_system("z4")
    for piece in rs.pieces:
        p = piece.source.interior_point()
        ret, n = point_first_return(w, p, sim.Z4)
        assert n == piece.return_time
        assert ret == piece.map.apply(p)
