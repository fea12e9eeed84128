"""Builders for the bundled example spaces.

These cover the shapes the verifier is exercised on: one apartment per
root-system type, the rank-one tripod tree (three half-line gluings), and a
pair of disjoint apartments used as the seed of the extension procedure.
"""

from __future__ import annotations

from typing import Optional

from .atlas import AtlasSpace, GermRef, Gluing
from .model import (
    GE,
    LE,
    AffineMap,
    WeylSimplex,
    chamber_simplex,
    half_apartment,
    pt_from_ints,
    pt_zero,
)
from .roots import from_name
from .scalars import LexScalar


def single_apartment(name: str, lex_rank: int = 1) -> AtlasSpace:
    """One chart, no gluings; marks the origin, two nearby points and two
    origin-based chamber germs."""
    rs = from_name(name)
    n = rs.rank
    o = pt_zero(n, lex_rank)
    p1 = pt_from_ints([1] + [0] * (n - 1), lex_rank)
    p2 = pt_from_ints([0] * (n - 1) + [1], lex_rank)
    marked_points = [("apt", o), ("apt", p1), ("apt", p2)]
    marked_germs = [
        GermRef("apt", chamber_simplex(rs, o, 0)),
        GermRef("apt", chamber_simplex(rs, o, rs.longest_index)),
        GermRef("apt", chamber_simplex(rs, p1, 0)),
    ]
    return AtlasSpace(rs, lex_rank, ["apt"], [], marked_points, marked_germs)


def tripod(lex_rank: int = 1) -> AtlasSpace:
    """Three rank-one apartments glued along half-lines: a tree with three
    ends.  chart_12 carries rays 1 (t >= 0) and 2 (t <= 0); chart_13 rays 1
    and 3; chart_23 rays 2 (t >= 0) and 3 (t <= 0)."""
    rs = from_name("A1")
    zero = LexScalar.zero(lex_rank)
    o = pt_zero(1, lex_rank)
    pos = half_apartment(rs, (1,), GE, zero)
    neg = half_apartment(rs, (1,), LE, zero)
    ident = AffineMap.identity(rs, lex_rank)
    flip = AffineMap(rs, 1, o)
    gluings = [
        Gluing("chart_12", "chart_13", pos, ident),
        Gluing("chart_12", "chart_23", neg, flip),
        Gluing("chart_13", "chart_23", neg, ident),
    ]
    five = pt_from_ints([5], lex_rank)
    m4 = pt_from_ints([-4], lex_rank)
    marked_points = [
        ("chart_12", o),
        ("chart_12", five),
        ("chart_12", m4),
        ("chart_13", m4),
    ]
    marked_germs = [
        GermRef("chart_12", chamber_simplex(rs, o, 0)),
        GermRef("chart_12", chamber_simplex(rs, o, 1)),
        GermRef("chart_13", chamber_simplex(rs, o, 1)),
        GermRef("chart_12", chamber_simplex(rs, five, 1)),
    ]
    return AtlasSpace(
        rs,
        lex_rank,
        ["chart_12", "chart_13", "chart_23"],
        gluings,
        marked_points,
        marked_germs,
    )


def disjoint_apartments(name: str = "A2", lex_rank: int = 1, marks_per_chart: int = 2) -> AtlasSpace:
    """Two copies of the model apartment with no identifications: the seed
    for the covering extension procedure."""
    rs = from_name(name)
    n = rs.rank
    marked_points = []
    marked_germs = []
    for chart in ("apt_a", "apt_b"):
        pts = [
            pt_from_ints([1] + [0] * (n - 1), lex_rank),
            pt_from_ints([0] * (n - 1) + [1], lex_rank),
        ][:marks_per_chart]
        for p in pts:
            marked_points.append((chart, p))
        marked_germs.append(GermRef(chart, chamber_simplex(rs, pt_zero(n, lex_rank), 0)))
    return AtlasSpace(rs, lex_rank, ["apt_a", "apt_b"], [], marked_points, marked_germs)
