import itertools

import pytest

from lambdabuildings import spaces
from lambdabuildings.atlas import GermRef
from lambdabuildings.model import chamber_simplex, pt_from_ints, pt_zero
from lambdabuildings.retraction import Retraction, RetractionUndefined
from lambdabuildings.scalars import LexScalar


def pt(coords, k=1):
    return pt_from_ints(coords, k)


@pytest.fixture(scope="module")
def tri():
    return spaces.tripod()


@pytest.fixture(scope="module")
def ray1_retraction(tri):
    center = GermRef("chart_12", chamber_simplex(tri.rs, pt_zero(1, 1), 0))
    return Retraction(tri, "chart_12", center)


def test_identity_on_target(tri, ray1_retraction):
    r = ray1_retraction
    y = tri.xpoint("chart_12", pt([-4]))
    assert r.retract(y) == pt([-4])
    assert r.retract(tri.xpoint("chart_12", pt([5]))) == pt([5])
    assert not r.identity_violations(
        [tri.xpoint(c, p) for c, p in tri.marked_points]
    )


def test_retract_ray3_point(tri, ray1_retraction):
    y = tri.xpoint("chart_23", pt([-4]))
    assert ray1_retraction.retract(y) == pt([-4])


def test_germ_charts_searched(tri, ray1_retraction):
    assert ray1_retraction.germ_charts == ["chart_12", "chart_13"]


def test_lipschitz_on_tripod(tri, ray1_retraction):
    points = [tri.xpoint(c, p) for c, p in tri.marked_points]
    points.append(tri.xpoint("chart_23", pt([-4])))
    pairs = list(itertools.combinations(points, 2))
    report = ray1_retraction.verify_lipschitz(pairs)
    assert report.passed
    assert report.checked_pairs > 0
    assert not report.skipped


def test_lipschitz_folding_pair(tri, ray1_retraction):
    y = tri.xpoint("chart_12", pt([-4]))  # ray 2
    z = tri.xpoint("chart_23", pt([-4]))  # ray 3
    assert tri.distance_between(y, z) == LexScalar([8])
    assert ray1_retraction.retract(y) == ray1_retraction.retract(z) == pt([-4])
    report = ray1_retraction.verify_lipschitz([(y, z)])
    assert report.passed and report.checked_pairs == 1


def test_isometry_on_charts_containing_center(tri, ray1_retraction):
    points = [tri.xpoint(c, p) for c, p in tri.marked_points]
    points.append(tri.xpoint("chart_13", pt([-2])))
    assert ray1_retraction.isometry_violations(points) == []


def test_retraction_onto_other_chart(tri):
    # center at the ray-2 germ, retract onto chart_23
    center = GermRef("chart_12", chamber_simplex(tri.rs, pt_zero(1, 1), 1))
    r = Retraction(tri, "chart_23", center)
    y = tri.xpoint("chart_12", pt([5]))  # ray 1 point
    assert r.retract(y) == pt([-5])


def test_undefined_without_common_chart():
    sp = spaces.disjoint_apartments("A2")
    center = GermRef("apt_a", chamber_simplex(sp.rs, pt_zero(2, 1), 0))
    r = Retraction(sp, "apt_a", center)
    y = sp.xpoint("apt_b", pt([1, 0]))
    with pytest.raises(RetractionUndefined):
        r.retract(y)
    assert not r.defined_at(y)
    report = r.verify_lipschitz([(sp.xpoint("apt_a", pt([1, 0])), y)])
    assert not report.passed
    assert any(v["kind"] == "undefined" for v in report.violations)


def test_center_must_be_chamber(tri):
    from lambdabuildings.model import WeylSimplex

    with pytest.raises(ValueError):
        Retraction(
            tri,
            "chart_12",
            GermRef("chart_12", WeylSimplex(pt_zero(1, 1), 0, frozenset())),
        )
    with pytest.raises(ValueError):
        center = GermRef("chart_12", chamber_simplex(tri.rs, pt_zero(1, 1), 0))
        Retraction(tri, "chart_23", center)  # germ does not reach chart_23
