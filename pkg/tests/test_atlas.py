import pytest

from lambdabuildings import atlas, spaces
from lambdabuildings.atlas import AtlasSpace, GermRef, Gluing, SchemaError, XPoint
from lambdabuildings.model import (
    GE,
    LE,
    AffineMap,
    chamber_simplex,
    half_apartment,
    pt_from_ints,
    pt_zero,
)
from lambdabuildings.roots import from_name
from lambdabuildings.scalars import LexScalar


def pt(coords, k=1):
    return pt_from_ints(coords, k)


@pytest.fixture(scope="module")
def tri():
    return spaces.tripod()


def test_canonical_point_tripod(tri):
    got = tri.canonical_point("chart_23", pt([2]))
    assert got == XPoint("chart_12", pt([-2]))
    interior = tri.canonical_point("chart_23", pt([-3]))
    assert interior == XPoint("chart_13", pt([-3]))


def test_canonical_point_single_chart():
    sp = spaces.single_apartment("A2")
    p = pt([3, -1])
    assert sp.canonical_point("apt", p) == XPoint("apt", p)


def test_common_apartments(tri):
    x = tri.xpoint("chart_12", pt([5]))
    y = tri.xpoint("chart_23", pt([4]))  # ray 2 point, also chart_12 at -4
    assert tri.common_apartments(x, y) == ["chart_12"]
    z = tri.xpoint("chart_23", pt([-4]))  # ray 3 point
    assert tri.common_apartments(x, z) == ["chart_13"]
    assert tri.common_apartments(x, x) == ["chart_12", "chart_13"]


def test_distance_tripod(tri):
    x = tri.xpoint("chart_12", pt([5]))
    z = tri.xpoint("chart_23", pt([-5]))
    assert tri.distance_between(x, z) == LexScalar([10])
    y = tri.xpoint("chart_12", pt([-4]))
    w = tri.xpoint("chart_23", pt([-4]))
    assert tri.distance_between(y, w) == LexScalar([8])
    assert tri.distance_between(x, x).is_zero()


def test_distance_none_when_uncovered():
    sp = spaces.disjoint_apartments("A2")
    x = sp.xpoint("apt_a", pt([1, 0]))
    y = sp.xpoint("apt_b", pt([1, 0]))
    assert sp.distance_between(x, y) is None
    assert sp.common_apartments(x, y) == []


def test_germ_equal_tripod(tri):
    rs = tri.rs
    o = pt_zero(1, 1)
    ray1_in_12 = GermRef("chart_12", chamber_simplex(rs, o, 0))
    ray1_in_13 = GermRef("chart_13", chamber_simplex(rs, o, 0))
    assert tri.germ_equal(ray1_in_12, ray1_in_13)
    neg_12 = GermRef("chart_12", chamber_simplex(rs, o, 1))  # ray 2
    neg_13 = GermRef("chart_13", chamber_simplex(rs, o, 1))  # ray 3
    assert not tri.germ_equal(neg_12, neg_13)
    assert tri.germ_equal(neg_12, neg_12)
    # ray 2 is the positive side of chart_23
    assert tri.germ_equal(neg_12, GermRef("chart_23", chamber_simplex(rs, o, 0)))


def test_germ_charts(tri):
    rs = tri.rs
    o = pt_zero(1, 1)
    assert tri.germ_charts(GermRef("chart_12", chamber_simplex(rs, o, 0))) == [
        "chart_12",
        "chart_13",
    ]
    assert tri.germ_charts(GermRef("chart_12", chamber_simplex(rs, o, 1))) == [
        "chart_12",
        "chart_23",
    ]


def test_germ_equal_is_equivalence(tri):
    rs = tri.rs
    o = pt_zero(1, 1)
    germs = [
        GermRef(c, chamber_simplex(rs, o, w))
        for c in tri.charts
        for w in range(rs.order)
    ]
    for a in germs:
        assert tri.germ_equal(a, a)
        for b in germs:
            assert tri.germ_equal(a, b) == tri.germ_equal(b, a)
            for c in germs:
                if tri.germ_equal(a, b) and tri.germ_equal(b, c):
                    assert tri.germ_equal(a, c)


def test_residue_tripod_origin(tri):
    res = tri.residue(tri.xpoint("chart_12", pt_zero(1, 1)))
    assert res.chamber_count == 3
    assert sorted(len(a) for a in res.apartments.values()) == [2, 2, 2]
    assert len(res.apartments) == 3
    for i in range(3):
        for j in range(i + 1, 3):
            assert res.co_apartment(i, j)
            assert (i, j) in res.adjacency
    # rank-one panels are base points: delta is the longest element
    assert all(v == tri.rs.longest_index for v in res.delta.values())


def test_residue_interior_point(tri):
    res = tri.residue(tri.xpoint("chart_12", pt([5])))
    assert res.chamber_count == 2
    assert len(res.apartments) == 2  # rays live in two charts


def test_residue_single_apartment_a2():
    sp = spaces.single_apartment("A2")
    res = sp.residue(sp.xpoint("apt", pt([1, 1])))
    assert res.chamber_count == 6
    assert list(res.apartments) == ["apt"]
    w0 = sp.rs.longest_index
    opposite = [pair for pair, d in res.delta.items() if d == w0]
    assert len(opposite) == 3


def test_direction_classes(tri):
    classes = tri.direction_classes()
    assert len(classes) == 3
    members = {frozenset(c) for c in classes}
    assert frozenset({("chart_12", 0), ("chart_13", 0)}) in members
    assert frozenset({("chart_12", 1), ("chart_23", 0)}) in members
    assert frozenset({("chart_13", 1), ("chart_23", 1)}) in members


def test_direction_classes_single_apartments():
    assert len(spaces.single_apartment("A1").direction_classes()) == 2
    assert len(spaces.single_apartment("A2").direction_classes()) == 6


def test_chamber_charts(tri):
    rs = tri.rs
    ray1 = GermRef("chart_12", chamber_simplex(rs, pt_zero(1, 1), 0))
    assert sorted(tri.chamber_charts(ray1)) == ["chart_12", "chart_13"]
    deep = GermRef("chart_12", chamber_simplex(rs, pt([3]), 0))
    assert sorted(tri.chamber_charts(deep)) == ["chart_12", "chart_13"]


def test_subchamber_reach(tri):
    rs = tri.rs
    ray2 = GermRef("chart_12", chamber_simplex(rs, pt([5]), 1))
    reach = tri.subchamber_reach(ray2)
    assert ("chart_12", 1) in reach
    assert ("chart_23", 0) in reach  # ray 2 seen from chart_23
    assert ("chart_13", 1) not in reach


def test_json_round_trip(tri):
    text = tri.dumps()
    back = atlas.loads(text)
    assert back.dumps() == text
    assert back.charts == tri.charts
    assert back.distance_between(
        back.xpoint("chart_12", pt([5])), back.xpoint("chart_23", pt([-5]))
    ) == LexScalar([10])


def test_schema_rejects_bad_inputs():
    with pytest.raises(SchemaError):
        atlas.loads("{not json")
    with pytest.raises(SchemaError):
        atlas.loads('{"lambda_rank": 1, "charts": []}')
    with pytest.raises(SchemaError):
        atlas.loads(
            '{"root_system": "Z9", "lambda_rank": 1, "charts": ["a"]}'
        )
    good = spaces.tripod().to_dict()
    bad = dict(good)
    bad["gluings"] = list(good["gluings"])
    bad["gluings"][0] = dict(bad["gluings"][0])
    bad["gluings"][0]["map"] = {"weyl_index": 99, "translation": [["0/1"]]}
    with pytest.raises(SchemaError):
        atlas.from_dict(bad)


def test_schema_rejects_empty_region():
    rs = from_name("A1")
    empty = half_apartment(rs, (1,), GE, LexScalar([1])).intersect(
        half_apartment(rs, (1,), LE, LexScalar([0]))
    )
    with pytest.raises(SchemaError):
        AtlasSpace(
            rs,
            1,
            ["a", "b"],
            [Gluing("a", "b", empty, AffineMap.identity(rs, 1))],
        )


def test_gluing_symmetrization(tri):
    # every gluing's inverse is present
    keys = {g.key() for g in tri.gluings}
    for g in tri.gluings:
        assert g.inverse().key() in keys


def test_orbit_constant_on_gluing_applications(tri):
    for chart, p in tri.marked_points:
        canon = tri.canonical_point(chart, p)
        orbit = tri.point_orbit(chart, p)
        for c, q in orbit.items():
            assert tri.canonical_point(c, q) == canon


def test_half_apartment_overlaps(tri):
    pairs = tri.half_apartment_overlaps()
    assert len(pairs) == 6  # three gluings and their inverses
    sp = spaces.single_apartment("B2")
    assert sp.half_apartment_overlaps() == []
