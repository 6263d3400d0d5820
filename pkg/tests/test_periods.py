import random

import pytest

from dodeca.periods import (
    CONSTANTS_SHA256,
    FAMILY_F,
    FAMILY_G,
    M66,
    M68,
    M88,
    billiard_orbit_period,
    constants_digest,
    cross_validate,
    enumerate_h,
    full_period_set,
    mat_vec,
    period_of_h,
    replay_witness,
)


def test_constants_checksum():
    assert constants_digest() == CONSTANTS_SHA256


def test_matrix_shapes():
    assert len(M68) == 6 and all(len(r) == 8 for r in M68)
    assert len(M66) == 6 and all(len(r) == 6 for r in M66)
    assert len(M88) == 8 and all(len(r) == 8 for r in M88)
    assert len(FAMILY_F) == 13 and all(len(f) == 8 for f in FAMILY_F)
    assert len(FAMILY_G) == 8 and all(len(g) == 6 for g in FAMILY_G)
    for m in (M68, M66, M88):
        assert all(x >= 0 for row in m for x in row)


def test_period_formula_examples():
    assert period_of_h((0, 1, 0, 0, 0, 0)) == 6
    assert period_of_h((0, 0, 0, 0, 1, 0)) == 12
    assert period_of_h((1, 1, 1, 1, 1, 1)) == 24
    with pytest.raises(ValueError):
        period_of_h((0, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        period_of_h((1, -1, 0, 0, 0, 0))


def test_period_formula_against_billiard_orbits(ctx):
    # h = e_2 belongs to the code-2 fixed point, h = e_5 to the code-5 one;
    # direct iteration of the plain billiard map is the oracle
    t, w = ctx.system
    assert billiard_orbit_period(t, w.O[2], 12) == period_of_h((0, 1, 0, 0, 0, 0))
    assert billiard_orbit_period(t, w.O[5], 24) == period_of_h((0, 0, 0, 0, 1, 0))
    assert billiard_orbit_period(t, w.O[1], 24) == period_of_h((1, 0, 0, 0, 0, 0))


def test_period_divides_12_sum():
    rng = random.Random(3)
    for _ in range(1000):
        h = tuple(rng.randint(0, 9) for _ in range(6))
        if sum(h) == 0:
            continue
        p = period_of_h(h)
        assert 12 * sum(h) % p == 0
        assert p > 0


def test_enumerate_first_elements():
    pairs = list(enumerate_h(40))
    by_h = {h: w for h, w in pairs}
    e2 = (0, 1, 0, 0, 0, 0)
    assert e2 in by_h and by_h[e2].family == "F" and by_h[e2].k == 0
    g0 = (0, 0, 0, 0, 1, 0)
    assert g0 in by_h and by_h[g0].family == "G" and by_h[g0].k == 0


def test_m88_powers_monotone():
    v = FAMILY_F[4]
    prev = sum(v)
    for _ in range(4):
        v = mat_vec(M88, v)
        assert sum(v) >= prev
        prev = sum(v)


def test_bound_2000_golden():
    import hashlib
    import json

    ps = full_period_set(2000)
    assert len(ps.periods) == 1000
    assert ps.periods[:12] == [3, 4, 6, 8, 9, 12, 15, 16, 18, 20, 21, 24]
    blob = json.dumps(ps.periods, separators=(",", ":")).encode()
    assert (
        hashlib.sha256(blob).hexdigest()
        == "3d4813ce1087c43c6d07888d10aa73530cd6ead3b5461fb8f5c9768e39176448"
    )


def test_full_period_set_monotone_in_bound():
    big = full_period_set(600)
    small = full_period_set(150)
    assert [p for p in big.periods if p <= 150] == small.periods


def test_doubling_closure():
    ps = full_period_set(500)
    base = {p for p, w in ps.generators.items() if not w.doubled}
    for p in base:
        if p % 2 == 1 and 2 * p <= 500:
            assert 2 * p in ps.generators
    # 9 is odd and reachable; 18 must therefore be present
    assert 9 in base and 18 in ps.generators


def test_witness_replay():
    ps = full_period_set(300)
    for p in ps.periods:
        wit = ps.generators[p]
        h = replay_witness(wit)
        expect = p // 2 if wit.doubled else p
        assert period_of_h(h) == expect


def test_component_periods_in_set(ctx):
    from dodeca.search import component_periods

    comps = list(ctx.base_components().values()) + [ctx.sim.g1w4]
    need = 1
    infos = [component_periods(c) for c in comps]
    for info in infos:
        need = max(need, info.center_per_t, info.noncenter_per_t)
    ps = full_period_set(need)
    for info in infos:
        assert info.center_per_t in ps.generators
        assert info.noncenter_per_t in ps.generators


def test_cross_validate_samples(ctx):
    comps = list(ctx.base_components().values())
    cv = cross_validate(ctx.wedge, 2000, components=comps, samples=40, seed=11)
    assert cv.checked_components == 4
    assert cv.checked_orbits >= 40
    assert 12 in cv.verified_periods


def test_cross_validate_vacuous(ctx):
    cv = cross_validate(ctx.wedge, 100, components=(), samples=0, seed=0)
    assert cv.checked_orbits == 0 and cv.checked_components == 0
