"""Self-similar structure of the wedge map and the aperiodic point.

Two homotheties centred at the wedge apex send the invariant rocket Z'
onto nested copies: Z'_1 (ratio O_1/O_5), Z'_4 (ratio O_4/O_5) and
Z'_14 = gamma_1(Z'_4).  Pulling Z'_14 back two steps of T' gives another
rocket X, and the contraction similarity gamma_X = (pullback) ∘ gamma_1
maps Z'_4 onto X while conjugating their first-return systems exactly.

The unique fixed point y of gamma_X is an aperiodic point of the wedge
map; :func:`aperiodic_witness` certifies this with finite exact evidence:
no return within a step budget, and y interior to every level of the
strictly nested rockets gamma_X^k(X), whose return periods at least
double with each nesting level.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, GraneError
from .field import QS3, ONE
from .geom import (
    INTERIOR,
    AffMap,
    Point,
    Region,
    overlap_status,
    region_equal,
)
from .search import (
    Component,
    ReturnSystem,
    component_orbit,
    find_periodic_component,
)
from .table import WedgeSystem


@dataclass(frozen=True)
class SimilaritySystem:
    gamma1: AffMap
    gamma4: AffMap
    ratio1: QS3
    ratio4: QS3
    Z1: Region
    Z4: Region
    Z14: Region
    X: Region
    gammaX: AffMap
    pullback_pieces: tuple
    pullback_map: AffMap  # the isometry with X = pullback_map(Z'_14)
    w2: Component
    w3: Component
    w4: Component
    g1w4: Component  # gamma_1(W_4), the period-37 component

    def to_obj(self) -> dict:
        from .geom import region_to_obj

        return {
            "ratio1": self.ratio1.literal(),
            "ratio4": self.ratio4.literal(),
            "pullback_pieces": list(self.pullback_pieces),
            "Z1": region_to_obj(self.Z1),
            "Z4": region_to_obj(self.Z4),
            "Z14": region_to_obj(self.Z14),
            "X": region_to_obj(self.X),
        }


def _bisector_param(w: WedgeSystem, p: Point) -> QS3:
    return (p.x - w.apex.x) / w.bisector_dir.x


def contraction_ratios(w: WedgeSystem) -> tuple[QS3, QS3]:
    t1 = _bisector_param(w, w.O[1])
    t4 = _bisector_param(w, w.O[4])
    t5 = _bisector_param(w, w.O[5])
    return t1 / t5, t4 / t5


def build_similarity(w: WedgeSystem, max_iter: int = 10**6) -> SimilaritySystem:
    """Construct the contractions, derived rockets, X and gamma_X.

    Raises DomainError when a pullback step would split the small rocket
    (it never does: each preimage stays inside a single piece image, which
    is verified exactly here).
    """
    ratio1, ratio4 = contraction_ratios(w)
    gamma1 = AffMap.homothety(w.apex, ratio1)
    gamma4 = AffMap.homothety(w.apex, ratio4)
    assert gamma1.apply(w.O[5]) == w.O[1]
    assert gamma4.apply(w.O[5]) == w.O[4]
    z1 = w.Zp.transformed(gamma1)
    z4 = w.Zp.transformed(gamma4)
    z14 = z4.transformed(gamma1)

    # exact squared-ratio identities |A1 O_i|^2 = ratio^2 |A1 O_5|^2
    for ratio, o in ((ratio1, w.O[1]), (ratio4, w.O[4])):
        assert (o - w.apex).norm2() == ratio * ratio * (w.O[5] - w.apex).norm2()

    cur = z14
    pullback = AffMap.identity()
    pieces = []
    for _ in range(2):
        hit = None
        for i in range(1, 7):
            status = overlap_status(cur, w.image_alpha[i].convex_parts())
            if status == "inside":
                hit = i
                break
            if status == "straddle":
                raise DomainError(
                    f"pullback would split the rocket across piece image {i}"
                )
        if hit is None:
            raise DomainError("rocket not contained in any piece image")
        cur = cur.transformed(w.inv_maps[hit])
        pullback = w.inv_maps[hit].compose(pullback)
        pieces.append(hit)
    x = cur
    gamma_x = pullback.compose(gamma1)
    assert region_equal(z4.transformed(gamma_x), x)
    assert gamma_x.det().sign() > 0
    # linear part is ratio1 times a rotation
    m = gamma_x
    assert m.m00 * m.m00 + m.m10 * m.m10 == ratio1 * ratio1
    assert overlap_status(x, z4.convex_parts()) == "inside"

    w2 = find_periodic_component(w, w.O[2], max_iter)
    w3 = find_periodic_component(w, w.O[3], max_iter)
    w4 = find_periodic_component(w, w.O[4], max_iter)
    g1w4 = find_periodic_component(w, gamma1.apply(w.O[4]), max_iter)
    assert region_equal(g1w4.region, w4.region.transformed(gamma1))

    return SimilaritySystem(
        gamma1=gamma1,
        gamma4=gamma4,
        ratio1=ratio1,
        ratio4=ratio4,
        Z1=z1,
        Z4=z4,
        Z14=z14,
        X=x,
        gammaX=gamma_x,
        pullback_pieces=tuple(pieces),
        pullback_map=pullback,
        w2=w2,
        w3=w3,
        w4=w4,
        g1w4=g1w4,
    )


# -- conjugacy of the first-return systems -------------------------------------------


@dataclass
class ConjugacyReport:
    pieces_matched_z14: int
    pieces_matched_x: int
    samples_checked: int
    samples_skipped: int

    def to_obj(self) -> dict:
        return {
            "pieces_matched_z14": self.pieces_matched_z14,
            "pieces_matched_x": self.pieces_matched_x,
            "samples_checked": self.samples_checked,
            "samples_skipped": self.samples_skipped,
        }


def match_return_systems(base: ReturnSystem, target: ReturnSystem, g: AffMap) -> int:
    """Verify that g carries the base return system piece-by-piece onto target.

    Sources map to sources, targets to targets, and each piece map is
    conjugated by g, all as exact equalities.  Returns the number of
    matched pieces; raises AssertionError on any mismatch.
    """
    assert len(base.pieces) == len(target.pieces)
    g_inv = g.inverse()
    by_key = {p.source.canonical_key(): p for p in target.pieces}
    matched = 0
    for p in base.pieces:
        img = p.source.transformed(g)
        q = by_key.get(img.canonical_key())
        assert q is not None, "mapped source missing from the target system"
        assert region_equal(q.target, p.target.transformed(g))
        assert q.map == g.compose(p.map).compose(g_inv)
        assert q.return_time >= 1
        matched += 1
    return matched


def point_first_return(w: WedgeSystem, p: Point, domain: Region, max_iter: int = 10**6):
    """First forward T'-iterate of p landing back inside the open domain."""
    q = p
    for n in range(1, max_iter + 1):
        q, _ = w.step(q)
        if domain.classify(q) == INTERIOR:
            return q, n
    raise DomainError("no return within the iteration cap")


def verify_conjugacy(
    w: WedgeSystem,
    s: SimilaritySystem,
    rs4: ReturnSystem,
    rs14: ReturnSystem,
    rsx: ReturnSystem,
    samples: int = 200,
    seed: int = 0,
    max_iter: int = 10**6,
) -> ConjugacyReport:
    """Exact piece-level conjugacies plus sampled commuting squares."""
    import random
    from fractions import Fraction

    n14 = match_return_systems(rs4, rs14, s.gamma1)
    nx = match_return_systems(rs4, rsx, s.gammaX)

    rng = random.Random(seed)
    box = s.Z4.float_bbox()
    checked = skipped = 0
    while checked < samples:
        x = Fraction(rng.randint(int(box[0] * 512), int(box[2] * 512)), 512)
        y = Fraction(rng.randint(int(box[1] * 512), int(box[3] * 512)), 512)
        p4 = Point(QS3(x), QS3(y))
        if s.Z4.classify(p4) != INTERIOR:
            continue
        px = s.gammaX.apply(p4)
        assert s.X.classify(px) == INTERIOR
        try:
            r4, _ = point_first_return(w, p4, s.Z4, max_iter)
            rx, _ = point_first_return(w, px, s.X, max_iter)
        except GraneError:
            skipped += 1
            continue
        assert s.gammaX.apply(r4) == rx
        # the gamma_1 version against Z'_14
        p14 = s.gamma1.apply(p4)
        try:
            r14, _ = point_first_return(w, p14, s.Z14, max_iter)
        except GraneError:
            skipped += 1
            continue
        assert s.gamma1.apply(r4) == r14
        checked += 1
    return ConjugacyReport(n14, nx, checked, skipped)


# -- the aperiodic point --------------------------------------------------------------


@dataclass
class AperiodicWitness:
    y: Point
    steps_checked: int
    boundary_hit: int | None  # orbit step at which a boundary stopped the check
    nesting_depth: int
    spiral: list  # regions Y_0, Y_1, Y_2, ...
    spiral_tprime_periods: list  # T'-periods of the verified spiral components
    spiral_return_periods: list  # their return periods into Z'_4
    growth_factors: list  # return-period ratios between generations
    period_lower_bound: int

    def to_obj(self) -> dict:
        from .geom import region_to_obj

        return {
            "y": [self.y.x.literal(), self.y.y.literal()],
            "steps_checked": self.steps_checked,
            "boundary_hit": self.boundary_hit,
            "nesting_depth": self.nesting_depth,
            "spiral_len": len(self.spiral),
            "spiral_tprime_periods": self.spiral_tprime_periods,
            "spiral_return_periods": self.spiral_return_periods,
            "growth_factors": [str(f) for f in self.growth_factors],
            "period_lower_bound": self.period_lower_bound,
        }


def _return_period(w: WedgeSystem, comp: Component, domain_parts) -> int:
    """Visits of the component's T'-cycle to the domain (its return period)."""
    visits = 0
    for pol in component_orbit(w, comp):
        status = overlap_status(pol, domain_parts)
        assert status != "straddle"
        if status == "inside":
            visits += 1
    return visits


def aperiodic_witness(
    w: WedgeSystem,
    s: SimilaritySystem,
    steps: int = 10**4,
    depth: int = 8,
    verify_spiral: int = 9,
    max_iter: int = 10**6,
) -> AperiodicWitness:
    """Certify the fixed point of gamma_X as aperiodic by exact evidence.

    (a) T'^n(y) != y for 1 <= n <= steps, by exact comparison (a boundary
    hit truncates but is recorded; the certificate is then valid up to the
    hit).  (b) y is interior to gamma_X^k(X) for k <= depth, with strict
    nesting.  The spiral components Y_n and their measured return periods
    into Z'_4 document the at-least-doubling that makes any hypothetical
    period exceed 2^depth.
    """
    gx = s.gammaX
    # strict contraction needed for a unique fixed point
    if (gx.m00 * gx.m00 + gx.m10 * gx.m10 - ONE).sign() >= 0:
        raise DomainError("map is not a strict contraction")
    y = gx.fixed_point()
    assert gx.apply(y) == y

    boundary_hit = None
    q = y
    n_done = 0
    for n in range(1, steps + 1):
        try:
            q, _ = w.step(q)
        except GraneError:
            boundary_hit = n
            break
        assert q != y, f"fixed point returned after {n} steps"
        n_done = n

    # strict nesting of the rockets, with y interior at every level
    level = s.X
    assert level.classify(y) == INTERIOR
    for _ in range(depth):
        nxt = level.transformed(gx)
        assert overlap_status(nxt, level.convex_parts()) == "inside"
        assert nxt.area2() < level.area2()
        assert nxt.classify(y) == INTERIOR
        level = nxt

    # the spiral of periodic components converging to y
    y2 = s.g1w4.region.transformed(s.pullback_map)
    spiral = [s.w3.region, s.w2.region, y2]
    while len(spiral) < max(verify_spiral, 3 * depth // 2):
        spiral.append(spiral[-3].transformed(gx))

    z4_parts = s.Z4.convex_parts()
    tprime_periods = []
    return_periods = []
    for reg in spiral[:verify_spiral]:
        comp = find_periodic_component(w, reg.interior_point(), max_iter)
        assert region_equal(comp.region, reg), "spiral region is not a component"
        tprime_periods.append(comp.period)
        return_periods.append(_return_period(w, comp, z4_parts))
    from fractions import Fraction

    growth = [
        Fraction(return_periods[n], return_periods[n - 3])
        for n in range(3, len(return_periods))
    ]

    return AperiodicWitness(
        y=y,
        steps_checked=n_done,
        boundary_hit=boundary_hit,
        nesting_depth=depth,
        spiral=spiral,
        spiral_tprime_periods=tprime_periods,
        spiral_return_periods=return_periods,
        growth_factors=growth,
        period_lower_bound=2**depth,
    )
