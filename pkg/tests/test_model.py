import random
from fractions import Fraction

import pytest

from lambdabuildings.model import (
    GE,
    LE,
    AffineMap,
    WeylPolyhedron,
    WeylSimplex,
    chamber_fits_direction,
    chamber_simplex,
    distance,
    eval_root,
    germ_inside,
    half_apartment,
    make_constraint,
    parallel_same_direction,
    pt_from_ints,
    pt_scale,
    pt_sub,
    pt_zero,
    segment,
    single_point_region,
    subchamber_base_in_region,
)
from lambdabuildings.roots import from_name
from lambdabuildings.scalars import LexScalar


def P(rs, coords, k=1):
    return pt_from_ints(coords, k)


def S(*coords):
    return LexScalar(coords)


def rand_point(rng, n, k):
    return tuple(
        LexScalar(Fraction(rng.randint(-40, 40), rng.randint(1, 6)) for _ in range(k))
        for _ in range(n)
    )


def test_eval_root_frozen():
    rs = from_name("A2")
    x = P(rs, [1, 1])
    assert eval_root((1, 1), x) == LexScalar([2])
    assert eval_root((1, 1), pt_zero(2, 1)).is_zero()
    assert eval_root((1, 0), P(rs, [7, 3])) == LexScalar([7])


def test_distance_frozen():
    a1 = from_name("A1")
    assert distance(a1, P(a1, [0]), P(a1, [3])) == LexScalar([3])
    a2 = from_name("A2")
    assert distance(a2, pt_zero(2, 1), P(a2, [1, 0])) == LexScalar([2])
    x = P(a2, [4, -5])
    assert distance(a2, x, x).is_zero()


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
@pytest.mark.parametrize("k", [1, 2])
def test_metric_axioms_randomized(name, k):
    rs = from_name(name)
    rng = random.Random(hash((name, k)) & 0xFFFF)
    zero = LexScalar.zero(k)
    for _ in range(60):
        x, y, z = (rand_point(rng, rs.rank, k) for _ in range(3))
        dxy = distance(rs, x, y)
        assert dxy == distance(rs, y, x)
        assert (dxy == zero) == (x == y)
        assert distance(rs, x, z) + distance(rs, z, y) >= dxy


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_metric_affine_invariance(name):
    rs = from_name(name)
    rng = random.Random(99)
    for _ in range(40):
        x, y = rand_point(rng, rs.rank, 2), rand_point(rng, rs.rank, 2)
        m = AffineMap(rs, rng.randrange(rs.order), rand_point(rng, rs.rank, 2))
        assert distance(rs, m.apply(x), m.apply(y)) == distance(rs, x, y)


def test_affine_map_frozen():
    rs = from_name("A1")
    ident = AffineMap.identity(rs, 1)
    x = P(rs, [5])
    assert ident.apply(x) == x
    t = AffineMap.from_translation(rs, P(rs, [7]))
    assert t.apply(pt_zero(1, 1)) == P(rs, [7])
    flip = AffineMap(rs, 1, pt_zero(1, 1))
    assert flip.apply(x) == P(rs, [-5])


def test_affine_compose_and_inverse():
    rs = from_name("A2")
    rng = random.Random(3)
    for _ in range(25):
        m1 = AffineMap(rs, rng.randrange(rs.order), rand_point(rng, 2, 1))
        m2 = AffineMap(rs, rng.randrange(rs.order), rand_point(rng, 2, 1))
        x = rand_point(rng, 2, 1)
        assert m1.compose(m2).apply(x) == m1.apply(m2.apply(x))
        assert m1.inverse().apply(m1.apply(x)) == x


def test_contains_frozen():
    rs = from_name("A1")
    zero = LexScalar.zero(1)
    P0 = half_apartment(rs, (1,), GE, zero)
    assert P0.contains(pt_zero(1, 1))
    P1 = half_apartment(rs, (1,), GE, LexScalar([1]))
    assert not P1.contains(pt_zero(1, 1))
    a2 = from_name("A2")
    wall = WeylPolyhedron(
        a2,
        [
            make_constraint(a2, (1, 0), GE, LexScalar.zero(1)),
            make_constraint(a2, (1, 0), LE, LexScalar.zero(1)),
        ],
    )
    assert wall.contains(P(a2, [0, 5]))


def test_negative_root_constraint_normalizes():
    rs = from_name("A2")
    c = make_constraint(rs, (-1, 0), GE, LexScalar([3]))
    assert c.root == (1, 0)
    assert c.rel == LE
    assert c.bound == LexScalar([-3])


def test_germ_inside_frozen():
    a1 = from_name("A1")
    pos = half_apartment(a1, (1,), GE, LexScalar.zero(1))
    plus = chamber_simplex(a1, pt_zero(1, 1), 0)
    minus = chamber_simplex(a1, pt_zero(1, 1), 1)
    assert germ_inside(a1, pos, plus)
    assert not germ_inside(a1, pos, minus)

    a2 = from_name("A2")
    h = half_apartment(a2, (1, 0), GE, LexScalar.zero(1))
    r1 = next(
        w for w in range(a2.order) if a2.words[w] == (0,)
    )
    tilted = chamber_simplex(a2, pt_zero(2, 1), r1)
    assert not germ_inside(a2, h, tilted)
    assert germ_inside(a2, h, chamber_simplex(a2, pt_zero(2, 1), 0))


def test_germ_inside_base_precondition():
    a1 = from_name("A1")
    region = half_apartment(a1, (1,), GE, LexScalar([1]))
    with pytest.raises(ValueError):
        germ_inside(a1, region, chamber_simplex(a1, pt_zero(1, 1), 0))


def test_germ_inside_monotone_under_constraint_removal():
    a2 = from_name("A2")
    zero = LexScalar.zero(1)
    smaller = WeylPolyhedron(
        a2,
        [
            make_constraint(a2, (1, 0), GE, zero),
            make_constraint(a2, (0, 1), GE, zero),
        ],
    )
    larger = half_apartment(a2, (1, 0), GE, zero)
    for w in range(a2.order):
        s = chamber_simplex(a2, pt_zero(2, 1), w)
        if germ_inside(a2, smaller, s):
            assert germ_inside(a2, larger, s)


def test_segment_frozen():
    a1 = from_name("A1")
    x, y = P(a1, [0]), P(a1, [4])
    seg = segment(a1, x, y)
    assert seg.contains(P(a1, [2]))
    assert not seg.contains(P(a1, [5]))
    assert segment(a1, x, x).single_point() == x

    a2 = from_name("A2")
    o, far = pt_zero(2, 1), P(a2, [1, 1])
    assert segment(a2, o, far).contains(P(a2, [1, 0]))


def test_segment_matches_metric_additivity():
    a2 = from_name("A2")
    rng = random.Random(17)
    for _ in range(30):
        x, y, z = (rand_point(rng, 2, 1) for _ in range(3))
        additive = distance(a2, x, z) + distance(a2, z, y) == distance(a2, x, y)
        assert segment(a2, x, y).contains(z) == additive


def test_segment_contains_midpoint():
    rs = from_name("B2")
    rng = random.Random(23)
    for _ in range(20):
        x, y = rand_point(rng, 2, 2), rand_point(rng, 2, 2)
        mid = pt_scale(Fraction(1, 2), pt_sub(y, x))
        midpoint = tuple(a + b for a, b in zip(x, mid))
        seg = segment(rs, x, y)
        assert seg.contains(x) and seg.contains(y) and seg.contains(midpoint)


def test_parallel_same_direction():
    a1 = from_name("A1")
    s1 = chamber_simplex(a1, P(a1, [0]), 0)
    s2 = chamber_simplex(a1, P(a1, [7]), 0)
    assert parallel_same_direction(a1, s1, s2) == P(a1, [7])
    assert parallel_same_direction(a1, s1, s1) == s1.base

    a2 = from_name("A2")
    t1 = chamber_simplex(a2, P(a2, [0, 0]), 0)
    t2 = chamber_simplex(a2, P(a2, [3, -1]), 0)
    assert parallel_same_direction(a2, t1, t2) == P(a2, [3, 0])


def test_polyhedron_emptiness_and_points():
    a2 = from_name("A2")
    zero = LexScalar.zero(1)
    empty = WeylPolyhedron(
        a2,
        [
            make_constraint(a2, (1, 0), GE, zero),
            make_constraint(a2, (0, 1), GE, zero),
            make_constraint(a2, (1, 1), LE, LexScalar([-1])),
        ],
    )
    assert empty.is_empty(1)
    assert empty.normalize() is None

    box = segment(a2, pt_zero(2, 1), P(a2, [1, 1]))
    p = box.find_point(1)
    assert p is not None and box.contains(p)


def test_single_point_detection():
    a2 = from_name("A2")
    p = P(a2, [2, -3])
    region = single_point_region(a2, p)
    assert region.single_point(1) == p
    assert half_apartment(a2, (1, 0), GE, LexScalar.zero(1)).single_point(1) is None


def test_half_apartment_descriptor_with_redundancy():
    a2 = from_name("A2")
    zero = LexScalar.zero(1)
    region = WeylPolyhedron(
        a2,
        [
            make_constraint(a2, (1, 0), GE, zero),
            make_constraint(a2, (1, 0), GE, LexScalar([-5])),
        ],
    )
    desc = region.half_apartment_descriptor()
    assert desc is not None
    assert desc.root == (1, 0) and desc.rel == GE and desc.bound == zero
    two = WeylPolyhedron(
        a2,
        [
            make_constraint(a2, (1, 0), GE, zero),
            make_constraint(a2, (0, 1), GE, zero),
        ],
    )
    assert two.half_apartment_descriptor() is None


def test_as_chamber_round_trip():
    a2 = from_name("A2")
    for w in range(a2.order):
        base = P(a2, [1, -2])
        poly = chamber_simplex(a2, base, w).as_polyhedron(a2)
        got = poly.as_chamber()
        assert got is not None
        gb, gw = got
        assert gb == base
        regen = chamber_simplex(a2, gb, gw).as_polyhedron(a2)
        assert regen.normalize().constraints == poly.normalize().constraints


def test_transform_polyhedron_tracks_points():
    a2 = from_name("A2")
    rng = random.Random(5)
    region = segment(a2, pt_zero(2, 1), P(a2, [2, 1]))
    for _ in range(15):
        m = AffineMap(a2, rng.randrange(a2.order), rand_point(rng, 2, 1))
        image = region.transform(m)
        for _ in range(5):
            x = rand_point(rng, 2, 1)
            assert region.contains(x) == image.contains(m.apply(x))


def test_simplex_canonical_stabilizer():
    a2 = from_name("A2")
    base = pt_zero(2, 1)
    # the base point simplex is stabilized by everything: canonical index 0
    s = WeylSimplex(base, a2.longest_index, frozenset())
    assert s.canonical(a2).windex == 0
    full = chamber_simplex(a2, base, 2)
    assert full.canonical(a2) == full


def test_subchamber_into_region():
    a1 = from_name("A1")
    region = half_apartment(a1, (1,), GE, LexScalar([3]))
    got = subchamber_base_in_region(a1, region, pt_zero(1, 1), 0)
    assert got is not None
    assert region.contains(got)
    assert got[0] >= LexScalar.zero(1)
    assert subchamber_base_in_region(a1, region, pt_zero(1, 1), 1) is None
    assert chamber_fits_direction(a1, region, 0)
    assert not chamber_fits_direction(a1, region, 1)
