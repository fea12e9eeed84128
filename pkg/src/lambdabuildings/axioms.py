"""Probe-based verification of the apartment-system conditions.

Every universally quantified condition is checked on a finite probe set
drawn from the space's marked data; a passing verdict is therefore
``BOUNDED-PASS``, never a proof.  ``FAIL`` always carries a witness that
replays through the public operations, and ``VACUOUS`` is only reported
when the condition's hypothesis set is empty over the whole atlas (for the
exchange-type conditions: no chart pair overlaps in a half-apartment).
``check_all`` additionally audits the implication structure between the
verdicts on the given space.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .atlas import AtlasSpace, GermRef, Gluing, StructureError, XPoint
from .model import (
    EQUAL,
    GE,
    LE,
    Constraint,
    WeylPolyhedron,
    WeylSimplex,
    chamber_simplex,
    distance,
    eval_root,
    make_constraint,
    pt_add,
    pt_scale,
    pt_sub,
)
from .retraction import Retraction
from .scalars import LexScalar

PASS = "PASS"
FAIL = "FAIL"
VACUOUS = "VACUOUS"
BOUNDED = "BOUNDED-PASS"

CONDITIONS: Tuple[str, ...] = (
    "A1", "A2", "A3", "A4", "A5", "A6", "TI",
    "EC", "SC", "GG", "CO", "LA", "ALA", "FC",
)

DEFAULT_PROBE_BUDGET = 10_000

# overlap-consistency distance probing is quadratic in co-located probe
# points; beyond this many pairs the check stays bounded and says so
_A2_DISTANCE_PAIR_CAP = 240


@dataclass
class ConditionReport:
    condition: str
    verdict: str
    inventory: Dict[str, int] = field(default_factory=dict)
    witnesses: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_payload(self) -> dict:
        return {
            "verdict": self.verdict,
            "inventory": dict(sorted(self.inventory.items())),
            "witnesses": self.witnesses,
            "notes": sorted(self.notes),
        }


def _point_payload(p: XPoint) -> dict:
    return {"chart": p.chart, "coords": [c.to_strings() for c in p.coords]}


def _germ_payload(g: GermRef) -> dict:
    return {
        "chart": g.chart,
        "base": [c.to_strings() for c in g.simplex.base],
        "weyl_index": g.simplex.windex,
        "face": sorted(g.simplex.face),
    }


def _scalar_payload(v: LexScalar, scale: Fraction) -> list:
    return (v / scale).to_strings()


@dataclass
class ProbeSet:
    """Deterministic probe inventory drawn from the marked data."""

    points: List[XPoint]
    pairs: List[Tuple[XPoint, XPoint]]
    triples: List[Tuple[XPoint, XPoint, XPoint]]
    germs: List[GermRef]
    chamber_germs: List[GermRef]
    germ_pairs: List[Tuple[GermRef, GermRef]]
    truncated: bool

    @classmethod
    def build(cls, space: AtlasSpace, budget: int = DEFAULT_PROBE_BUDGET, seed: int = 0) -> "ProbeSet":
        points: List[XPoint] = []
        seen = set()
        for chart, coords in space.marked_points:
            p = space.canonical_point(chart, coords)
            if p.key() not in seen:
                seen.add(p.key())
                points.append(p)
        pairs = list(itertools.combinations(points, 2))
        triples = list(itertools.combinations(points, 3))
        germs = list(space.marked_germs)
        chamber_germs = [g for g in germs if g.simplex.is_chamber(space.rs)]
        germ_pairs = list(itertools.combinations(chamber_germs, 2))

        truncated = False
        rng = random.Random(seed)

        def cap(items: list) -> list:
            nonlocal truncated
            if len(items) <= budget:
                return items
            truncated = True
            picked = rng.sample(range(len(items)), budget)
            return [items[i] for i in sorted(picked)]

        return cls(
            points=points,
            pairs=cap(pairs),
            triples=cap(triples),
            germs=germs,
            chamber_germs=chamber_germs,
            germ_pairs=cap(germ_pairs),
            truncated=truncated,
        )


# -- structural conditions --

def check_a1(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """The atlas representation is closed under affine Weyl precomposition:
    every transition is a stored affine Weyl element and every gluing has
    its inverse present."""
    rep = ConditionReport("A1", BOUNDED)
    keys = {g.key() for g in space.gluings}
    for g in space.gluings:
        if g.inverse().key() not in keys:
            rep.witnesses.append(
                {"kind": "missing-inverse", "from": g.from_chart, "to": g.to_chart}
            )
        if not (0 <= g.map.windex < space.rs.order):
            rep.witnesses.append(
                {"kind": "bad-linear-part", "from": g.from_chart, "to": g.to_chart}
            )
    rep.inventory["gluings"] = len(space.gluings)
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def _a2_probe_points(space: AtlasSpace, probes: ProbeSet) -> List[Tuple[str, tuple]]:
    out = []
    seen = set()
    for p in probes.points:
        key = (p.chart,) + tuple(c.coords for c in p.coords)
        if key not in seen:
            seen.add(key)
            out.append((p.chart, p.coords))
    for g in space.gluings:
        q = g.region.find_point(space.lex_rank)
        if q is None:
            continue
        key = (g.from_chart,) + tuple(c.coords for c in q)
        if key not in seen:
            seen.add(key)
            out.append((g.from_chart, q))
    return out


def check_a2(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """Overlaps are closed convex root polyhedra with affine Weyl
    transitions (structural), and the transition system is consistent on
    probed orbits: no probe point receives two coordinates in one chart and
    probed distances agree across all common charts."""
    rep = ConditionReport("A2", BOUNDED)
    rep.notes.append("regions are root polyhedra, hence closed and convex")
    pts = _a2_probe_points(space, probes)
    rep.inventory["probe_points"] = len(pts)
    rep.inventory["gluings"] = len(space.gluings)
    canonical = []
    orbits = []
    for chart, coords in pts:
        try:
            p = space.canonical_point(chart, coords)
            canonical.append(p)
            orbits.append(frozenset(space.point_orbit(chart, coords)))
        except StructureError as exc:
            rep.witnesses.append(
                {
                    "kind": "orbit-inconsistency",
                    "start": {"chart": chart, "coords": [c.to_strings() for c in coords]},
                    "detail": str(exc),
                }
            )
    # distances can only disagree for pairs sharing at least two charts
    by_chart: Dict[str, List[int]] = {}
    for i, charts in enumerate(orbits):
        for c in charts:
            by_chart.setdefault(c, []).append(i)
    pair_hits: Dict[Tuple[int, int], int] = {}
    for members in by_chart.values():
        for a, b in itertools.combinations(members, 2):
            pair_hits[(a, b)] = pair_hits.get((a, b), 0) + 1
    candidates = [pair for pair, hits in sorted(pair_hits.items()) if hits >= 2]
    if len(candidates) > _A2_DISTANCE_PAIR_CAP:
        candidates = candidates[:_A2_DISTANCE_PAIR_CAP]
        rep.notes.append(
            f"distance-agreement probing truncated to {_A2_DISTANCE_PAIR_CAP} pairs"
        )
    checked = 0
    for a, b in candidates:
        try:
            space.distance_between(canonical[a], canonical[b], scale)
            checked += 1
        except StructureError as exc:
            rep.witnesses.append(
                {
                    "kind": "distance-disagreement",
                    "pair": [_point_payload(canonical[a]), _point_payload(canonical[b])],
                    "detail": str(exc),
                }
            )
    rep.inventory["distance_pairs"] = checked
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


# -- atlas conditions on points --

def check_a3(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("A3", BOUNDED)
    rep.inventory["pairs"] = len(probes.pairs)
    for x, y in probes.pairs:
        if not space.common_apartments(x, y):
            rep.witnesses.append(
                {"kind": "uncovered-pair", "pair": [_point_payload(x), _point_payload(y)]}
            )
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_ti(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("TI", BOUNDED)
    checked = 0
    skipped = 0
    for triple in probes.triples:
        d = {}
        ok = True
        for a, b in itertools.combinations(range(3), 2):
            v = space.distance_between(triple[a], triple[b], scale)
            if v is None:
                ok = False
                break
            d[(a, b)] = d[(b, a)] = v
        if not ok:
            skipped += 1
            continue
        checked += 1
        for mid in range(3):
            ends = [i for i in range(3) if i != mid]
            lhs = d[(ends[0], mid)] + d[(mid, ends[1])]
            rhs = d[(ends[0], ends[1])]
            if lhs < rhs:
                rep.witnesses.append(
                    {
                        "kind": "triangle-violation",
                        "ends": [_point_payload(triple[e]) for e in ends],
                        "middle": _point_payload(triple[mid]),
                        "via_sum": _scalar_payload(lhs, scale),
                        "direct": _scalar_payload(rhs, scale),
                    }
                )
    rep.inventory["triples"] = checked
    rep.inventory["skipped_undefined"] = skipped
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


# -- chamber conditions --

def check_a4(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("A4", BOUNDED)
    rep.inventory["chamber_pairs"] = len(probes.germ_pairs)
    for g1, g2 in probes.germ_pairs:
        reach1 = space.subchamber_reach(g1)
        reach2 = space.subchamber_reach(g2)
        charts1 = {c for c, _ in reach1}
        charts2 = {c for c, _ in reach2}
        if not charts1 & charts2:
            rep.witnesses.append(
                {
                    "kind": "no-common-subchamber-chart",
                    "pair": [_germ_payload(g1), _germ_payload(g2)],
                    "reach": [sorted(charts1), sorted(charts2)],
                }
            )
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_a5(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """Routed through the germ-centered retraction suite: every marked
    chamber germ gives a retraction onto each chart containing it, which
    must be total and distance non-increasing over the marked pairs."""
    rep = ConditionReport("A5", BOUNDED)
    centers = 0
    for germ in probes.chamber_germs:
        for chart in space.germ_charts(germ):
            centers += 1
            r = Retraction(space, chart, germ)
            sub = r.verify_lipschitz(probes.pairs, scale)
            rep.inventory["pairs_checked"] = rep.inventory.get("pairs_checked", 0) + sub.checked_pairs
            for v in sub.violations:
                payload = dict(v)
                payload["target_chart"] = chart
                payload["center"] = _germ_payload(germ)
                rep.witnesses.append(payload)
    rep.inventory["retractions"] = centers
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


# -- exchange-type conditions --

def _half_apartment_pairs(space: AtlasSpace) -> Dict[Tuple[str, str], Tuple[Gluing, Constraint]]:
    """Unordered chart pairs whose overlap is a half-apartment, keyed with
    the gluing oriented from the lexicographically smaller chart."""
    out: Dict[Tuple[str, str], Tuple[Gluing, Constraint]] = {}
    for g, desc in space.half_apartment_overlaps():
        if g.from_chart < g.to_chart:
            out.setdefault((g.from_chart, g.to_chart), (g, desc))
    return out


def _side_probe_points(desc: Constraint, lex_rank: int, rs) -> List[Tuple[str, tuple]]:
    """Deterministic wall / inside / outside sample points for a
    half-apartment descriptor, labeled by location."""
    wall = WeylPolyhedron(rs, [Constraint(desc.root, EQUAL, desc.bound)])
    p_wall = wall.find_point(lex_rank)
    unit = LexScalar.unit(lex_rank)
    inside_bound = desc.bound + unit if desc.rel == GE else desc.bound - unit
    outside_bound = desc.bound - unit if desc.rel == GE else desc.bound + unit
    inside = WeylPolyhedron(rs, [Constraint(desc.root, EQUAL, inside_bound)])
    outside = WeylPolyhedron(rs, [Constraint(desc.root, EQUAL, outside_bound)])
    out = []
    for label, poly in (("wall", wall), ("inside", inside), ("outside", outside)):
        p = poly.find_point(lex_rank)
        if p is not None:
            out.append((label, p))
    return out


def check_a6(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("A6", BOUNDED)
    pairs = _half_apartment_pairs(space)
    if not pairs:
        rep.verdict = VACUOUS
        rep.notes.append("no chart pair overlaps in a half-apartment")
        return rep
    rep.inventory["half_apartment_pairs"] = len(pairs)
    charts = sorted({c for pair in pairs for c in pair})
    triples = 0
    for c1, c2, c3 in itertools.combinations(charts, 3):
        if ((c1, c2) not in pairs or (c1, c3) not in pairs or (c2, c3) not in pairs):
            continue
        triples += 1
        g12 = pairs[(c1, c2)][0]
        g13 = pairs[(c1, c3)][0]
        meet = g12.region.intersect(g13.region)
        p = meet.find_point(space.lex_rank)
        if p is None:
            rep.witnesses.append(
                {"kind": "empty-triple-intersection", "charts": [c1, c2, c3]}
            )
    rep.inventory["triples"] = triples
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_ec(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """For each half-apartment overlap, some third chart must equal the
    symmetric difference plus the boundary wall; tested on wall / deep-side
    sample points of all three charts."""
    rep = ConditionReport("EC", BOUNDED)
    pairs = _half_apartment_pairs(space)
    if not pairs:
        rep.verdict = VACUOUS
        rep.notes.append("no chart pair overlaps in a half-apartment")
        return rep
    rep.inventory["half_apartment_pairs"] = len(pairs)

    def orbit_charts(chart, coords):
        return set(space.point_orbit(chart, coords))

    for (c1, c2), (g, desc1) in sorted(pairs.items()):
        region2 = g.region.transform(g.map)
        desc2 = region2.half_apartment_descriptor()
        candidates = [
            f
            for f in space.charts
            if f not in (c1, c2)
            and (min(c1, f), max(c1, f)) in pairs
            and (min(c2, f), max(c2, f)) in pairs
        ]
        found = None
        failures = []
        for f in sorted(candidates):
            ok = True
            for side_chart, side_desc, other in ((c1, desc1, c2), (c2, desc2, c1)):
                wall_poly = WeylPolyhedron(
                    space.rs, [Constraint(side_desc.root, EQUAL, side_desc.bound)]
                )
                for label, p in _side_probe_points(side_desc, space.lex_rank, space.rs):
                    charts_at = orbit_charts(side_chart, p)
                    in_other = other in charts_at
                    on_wall = wall_poly.contains(p)
                    expected = (not in_other) or on_wall
                    if (f in charts_at) != expected:
                        ok = False
                        failures.append(
                            {
                                "candidate": f,
                                "probe_chart": side_chart,
                                "location": label,
                                "coords": [c.to_strings() for c in p],
                            }
                        )
                        break
                if not ok:
                    break
            if ok:
                # every probed point of f must land in c1 or c2
                gf1 = pairs[(min(c1, f), max(c1, f))]
                gf2 = pairs[(min(c2, f), max(c2, f))]
                for gg, dd in (gf1, gf2):
                    d = dd if gg.from_chart == f else gg.region.transform(gg.map).half_apartment_descriptor()
                    if d is None:
                        continue
                    for label, p in _side_probe_points(d, space.lex_rank, space.rs):
                        charts_at = orbit_charts(f, p)
                        if c1 not in charts_at and c2 not in charts_at:
                            ok = False
                            failures.append(
                                {
                                    "candidate": f,
                                    "probe_chart": f,
                                    "location": label,
                                    "coords": [c.to_strings() for c in p],
                                }
                            )
                            break
                    if not ok:
                        break
            if ok:
                found = f
                break
        if found is None:
            rep.witnesses.append(
                {
                    "kind": "no-exchange-chart",
                    "pair": [c1, c2],
                    "candidates_tried": sorted(candidates),
                    "probe_failures": failures,
                }
            )
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_sc(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """Sundial: a chamber meeting a chart in a panel extends to two distinct
    charts, each containing the wall and overlapping the first chart in a
    half-apartment."""
    rep = ConditionReport("SC", BOUNDED)
    pairs = _half_apartment_pairs(space)
    if not pairs:
        rep.verdict = VACUOUS
        rep.notes.append("no chart pair overlaps in a half-apartment")
        return rep
    instances = 0
    for (a, b), (g, desc) in sorted(pairs.items()):
        for c1, g_dir in (((a), g), ((b), g.inverse())):
            c2 = g_dir.to_chart
            region2 = g_dir.region.transform(g_dir.map)
            desc2 = region2.half_apartment_descriptor()
            if desc2 is None:
                continue
            wall1 = WeylPolyhedron(space.rs, [Constraint(g_dir.region.half_apartment_descriptor().root, EQUAL, g_dir.region.half_apartment_descriptor().bound)])
            wall2 = WeylPolyhedron(space.rs, [Constraint(desc2.root, EQUAL, desc2.bound)])
            y0 = wall2.find_point(space.lex_rank)
            if y0 is None:
                continue
            # chamber directions whose closed cone meets the overlap exactly
            # in the wall-side panel: beta o w = -alpha_i (outward of >=).
            want_sign = -1 if desc2.rel == GE else 1
            simple = [tuple(int(i == j) for j in range(space.rs.rank)) for i in range(space.rs.rank)]
            for w in range(space.rs.order):
                img = space.rs.root_after(desc2.root, w)
                target = tuple(want_sign * c for c in img)
                if target not in simple:
                    continue
                instances += 1
                s = chamber_simplex(space.rs, y0, w)
                carriers = []
                chamber_charts = space.chamber_charts(GermRef(c2, s))
                wall_charts = space.region_charts(c1, wall1)
                for f in sorted(set(chamber_charts) & set(wall_charts)):
                    if f == c1:
                        continue
                    key = (min(c1, f), max(c1, f))
                    if key in pairs:
                        carriers.append(f)
                if len(carriers) < 2:
                    rep.witnesses.append(
                        {
                            "kind": "sundial-missing-chart",
                            "base_chart": c1,
                            "chamber_chart": c2,
                            "chamber": _germ_payload(GermRef(c2, s)),
                            "carriers": carriers,
                        }
                    )
    rep.inventory["half_apartment_pairs"] = len(pairs)
    rep.inventory["panel_chambers"] = instances
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


# -- germ conditions --

def check_gg(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("GG", BOUNDED)
    checked = 0
    for g1, g2 in probes.germ_pairs:
        if space.germ_base(g1) != space.germ_base(g2):
            continue
        checked += 1
        if not set(space.germ_charts(g1)) & set(space.germ_charts(g2)):
            rep.witnesses.append(
                {
                    "kind": "germs-not-co-apartment",
                    "pair": [_germ_payload(g1), _germ_payload(g2)],
                }
            )
    rep.inventory["same_base_pairs"] = checked
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_la(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("LA", BOUNDED)
    rep.inventory["germ_pairs"] = len(probes.germ_pairs)
    for g1, g2 in probes.germ_pairs:
        if not set(space.germ_charts(g1)) & set(space.germ_charts(g2)):
            rep.witnesses.append(
                {
                    "kind": "germs-not-co-apartment",
                    "pair": [_germ_payload(g1), _germ_payload(g2)],
                }
            )
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_ala(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    rep = ConditionReport("ALA", BOUNDED)
    checked = 0
    for p in probes.points:
        charts_p = set(space.point_orbit(p.chart, p.coords))
        for germ in probes.chamber_germs:
            checked += 1
            if not charts_p & set(space.germ_charts(germ)):
                rep.witnesses.append(
                    {
                        "kind": "point-germ-uncovered",
                        "point": _point_payload(p),
                        "germ": _germ_payload(germ),
                    }
                )
    rep.inventory["point_germ_pairs"] = checked
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def check_co(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """Opposite probes: chamber-germ pairs at one point whose germ distance
    is the longest element must extend to full chambers lying in exactly
    one common chart."""
    rep = ConditionReport("CO", BOUNDED)
    w0 = space.rs.longest_index
    opposite_pairs = 0
    for g1, g2 in probes.germ_pairs:
        if space.germ_base(g1) != space.germ_base(g2):
            continue
        cl1 = space.germ_closure(g1)
        cl2 = space.germ_closure(g2)
        common = sorted(set(cl1) & set(cl2))
        if not common:
            continue
        c = common[0]
        delta = space.rs.multiply(
            space.rs.inverse(cl1[c][0][0].windex), cl2[c][0][0].windex
        )
        if delta != w0:
            continue
        opposite_pairs += 1
        chambers1 = {}
        for d, lst in cl1.items():
            for s, _ in lst:
                key = min(space.chamber_charts(GermRef(d, s)))
                chambers1.setdefault(key, GermRef(d, s))
        chambers2 = {}
        for d, lst in cl2.items():
            for s, _ in lst:
                key = min(space.chamber_charts(GermRef(d, s)))
                chambers2.setdefault(key, GermRef(d, s))
        for s1 in chambers1.values():
            for s2 in chambers2.values():
                hosts = sorted(
                    set(space.chamber_charts(s1)) & set(space.chamber_charts(s2))
                )
                if len(hosts) != 1:
                    rep.witnesses.append(
                        {
                            "kind": "opposite-pair-not-unique",
                            "pair": [_germ_payload(s1), _germ_payload(s2)],
                            "hosts": hosts,
                        }
                    )
    rep.inventory["opposite_pairs"] = opposite_pairs
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


# -- finite cover --

def _segment_samples(space: AtlasSpace, xa, ya) -> List[tuple]:
    """Dyadic points of the straight path to depth three, plus the corners
    of the coordinate box that lie in the segment."""
    seg = None
    samples = []
    seen = set()
    for j in range(9):
        t = Fraction(j, 8)
        p = pt_add(xa, pt_scale(t, pt_sub(ya, xa)))
        key = tuple(c.coords for c in p)
        if key not in seen:
            seen.add(key)
            samples.append(p)
    from .model import segment as make_segment

    seg = make_segment(space.rs, xa, ya)
    n = space.rs.rank
    for pattern in itertools.product((0, 1), repeat=n):
        p = tuple(xa[i] if pattern[i] == 0 else ya[i] for i in range(n))
        key = tuple(c.coords for c in p)
        if key not in seen and seg.contains(p):
            seen.add(key)
            samples.append(p)
    return samples


def check_fc(space: AtlasSpace, probes: ProbeSet, scale: Fraction) -> ConditionReport:
    """Segments between probe points must be covered by the finitely many
    z-based chambers parallel to chamber directions of the ambient chart."""
    rep = ConditionReport("FC", BOUNDED)
    class_index = space.direction_class_index()
    classes = space.direction_classes()
    triples = 0
    samples_checked = 0
    for x, y, z in _fc_triples(probes):
        ox = space.point_orbit(x.chart, x.coords)
        oy = space.point_orbit(y.chart, y.coords)
        oz = space.point_orbit(z.chart, z.coords)
        for chart in sorted(set(ox) & set(oy)):
            triples += 1
            covers: List[Tuple[str, tuple, int]] = []
            for w in range(space.rs.order):
                members = classes[class_index[(chart, w)]]
                for d, u in members:
                    if d in oz:
                        covers.append((d, oz[d], u))
            for p in _segment_samples(space, ox[chart], oy[chart]):
                samples_checked += 1
                orbit_p = space.point_orbit(chart, p)
                hit = False
                for d, zbase, u in covers:
                    if d not in orbit_p:
                        continue
                    poly = chamber_simplex(space.rs, zbase, u).as_polyhedron(space.rs)
                    if poly.contains(orbit_p[d]):
                        hit = True
                        break
                if not hit:
                    rep.witnesses.append(
                        {
                            "kind": "uncovered-segment-point",
                            "apartment": chart,
                            "ends": [_point_payload(x), _point_payload(y)],
                            "center": _point_payload(z),
                            "point": [c.to_strings() for c in p],
                        }
                    )
                    break
    rep.inventory["triples"] = triples
    rep.inventory["samples"] = samples_checked
    if rep.witnesses:
        rep.verdict = FAIL
    return rep


def _fc_triples(probes: ProbeSet):
    for x, y, z in probes.triples:
        yield x, y, z
        yield x, z, y
        yield y, z, x


_CHECKS = {
    "A1": check_a1,
    "A2": check_a2,
    "A3": check_a3,
    "A4": check_a4,
    "A5": check_a5,
    "A6": check_a6,
    "TI": check_ti,
    "EC": check_ec,
    "SC": check_sc,
    "GG": check_gg,
    "CO": check_co,
    "LA": check_la,
    "ALA": check_ala,
    "FC": check_fc,
}


def check(
    space: AtlasSpace,
    condition: str,
    probes: Optional[ProbeSet] = None,
    scale: Fraction = Fraction(1),
    budget: int = DEFAULT_PROBE_BUDGET,
    seed: int = 0,
) -> ConditionReport:
    if condition not in _CHECKS:
        raise ValueError(f"unknown condition {condition!r}; known: {CONDITIONS}")
    if probes is None:
        probes = ProbeSet.build(space, budget=budget, seed=seed)
    return _CHECKS[condition](space, probes, scale)


# -- implication audit --

def implication_audit(conditions: Dict[str, ConditionReport]) -> List[dict]:
    """Cross-checks of the equivalence structure between condition verdicts
    on one space; any flag marks the verdict table as inconsistent."""
    flags = []

    def ok(cid):
        return conditions[cid].verdict in (PASS, BOUNDED, VACUOUS)

    exchange = [conditions[c].verdict for c in ("A6", "EC", "SC")]
    if all(ok(c) for c in ("A1", "A2", "A3", "A4", "A5")):
        statuses = {v == FAIL for v in exchange}
        if len(statuses) > 1:
            flags.append(
                {
                    "rule": "exchange-coherence",
                    "detail": "A6/EC/SC verdicts disagree although A1-A5 probes pass",
                    "verdicts": dict(zip(("A6", "EC", "SC"), exchange)),
                }
            )
    if ok("GG") and ok("CO") and conditions["EC"].verdict == FAIL:
        flags.append(
            {
                "rule": "gg-co-implies-ec",
                "detail": "GG and CO pass on probes but EC fails on a probed half-apartment pair",
            }
        )
    if ok("GG") and ok("CO") and conditions["A4"].verdict == FAIL:
        flags.append(
            {
                "rule": "gg-co-implies-a4",
                "detail": "GG and CO pass on probes but A4 fails on a probed chamber pair",
            }
        )
    if conditions["TI"].verdict == FAIL and conditions["A5"].verdict != FAIL:
        flags.append(
            {
                "rule": "a5-implies-ti",
                "detail": "the induced distance violates the triangle inequality yet the retraction suite passed",
            }
        )
    return flags


@dataclass
class SpaceReport:
    label: str
    space: AtlasSpace
    conditions: Dict[str, ConditionReport]
    audit_flags: List[dict]
    scale: Fraction
    seed: int
    budget: int

    @property
    def exit_code(self) -> int:
        return 1 if any(c.verdict == FAIL for c in self.conditions.values()) else 0

    @property
    def audit_clean(self) -> bool:
        return not self.audit_flags

    def to_dict(self) -> dict:
        return {
            "schema": "axiom-report@1",
            "label": self.label,
            "space": {
                "root_system": self.space.rs.name
                or {"cartan": [list(r) for r in self.space.rs.cartan]},
                "lambda_rank": self.space.lex_rank,
                "charts": len(self.space.charts),
                "gluings": len(self.space.gluings),
                "marked_points": len(self.space.marked_points),
                "marked_germs": len(self.space.marked_germs),
            },
            "config": {
                "metric_scale": f"{self.scale.numerator}/{self.scale.denominator}",
                "seed": self.seed,
                "probe_budget": self.budget,
            },
            "conditions": {
                cid: self.conditions[cid].to_payload() for cid in CONDITIONS
            },
            "audit": {"clean": self.audit_clean, "flags": self.audit_flags},
            "exit_code": self.exit_code,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def render_text(self) -> str:
        lines = [f"axiom report: {self.label}"]
        lines.append(
            f"  root system {self.space.rs.name or self.space.rs.cartan}, "
            f"lambda rank {self.space.lex_rank}, "
            f"{len(self.space.charts)} charts, {len(self.space.gluings)} gluings"
        )
        lines.append(
            f"  metric scale {self.scale}, seed {self.seed}, probe budget {self.budget}"
        )
        lines.append("  condition  verdict       probes")
        for cid in CONDITIONS:
            rep = self.conditions[cid]
            inv = ", ".join(f"{k}={v}" for k, v in sorted(rep.inventory.items()))
            lines.append(f"  {cid:<10} {rep.verdict:<13} {inv}")
            for w in rep.witnesses:
                lines.append(f"      witness: {json.dumps(w, sort_keys=True)}")
        if self.audit_flags:
            lines.append("  audit: INCONSISTENT")
            for f in self.audit_flags:
                lines.append(f"      {json.dumps(f, sort_keys=True)}")
        else:
            lines.append("  audit: clean")
        return "\n".join(lines) + "\n"


def check_all(
    space: AtlasSpace,
    budget: int = DEFAULT_PROBE_BUDGET,
    seed: int = 0,
    scale: Fraction = Fraction(1),
    label: str = "space",
) -> SpaceReport:
    probes = ProbeSet.build(space, budget=budget, seed=seed)
    conditions = {cid: _CHECKS[cid](space, probes, scale) for cid in CONDITIONS}
    flags = implication_audit(conditions)
    return SpaceReport(
        label=label,
        space=space,
        conditions=conditions,
        audit_flags=flags,
        scale=scale,
        seed=seed,
        budget=budget,
    )
