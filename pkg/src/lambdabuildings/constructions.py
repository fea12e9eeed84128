"""Admissible glued spaces and the covering extension procedure.

An admissible space keeps all chart overlaps small: either single points
inside the centered balls of both charts, or full Weyl chambers interior to
vector Weyl chambers on both sides.  The two extension steps enlarge such a
space so that previously uncovered point pairs (step one) and parallelism
class pairs (step two) acquire a common apartment, staying admissible at
the next radius.  The direct triangle construction glues three apartments
pairwise at points whose mutual distances break the triangle inequality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from . import axioms
from .atlas import AtlasSpace, GermRef, Gluing, XPoint
from .model import (
    AffineMap,
    Point,
    WeylPolyhedron,
    chamber_interior_host,
    chamber_simplex,
    norm,
    polyhedron_meets_ball,
    pt_add,
    pt_from_ints,
    pt_sub,
    pt_zero,
    region_inside_open_vector_chamber,
    single_point_region,
    subchamber_base_in_region,
)
from .roots import RootSystem, from_name
from .scalars import LexScalar

T_CONDITIONS = ("T0", "T1", "T2", "T3")


class ExtensionError(RuntimeError):
    """The extension step cannot be carried out as requested."""


@dataclass
class TReport:
    """Verdicts for the smallness conditions (T0)-(T3) at one radius."""

    radius: LexScalar
    verdicts: Dict[str, str] = field(default_factory=dict)
    witnesses: Dict[str, List[dict]] = field(default_factory=dict)
    inventory: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v != axioms.FAIL for v in self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "schema": "admissible-report@1",
            "radius": self.radius.to_strings(),
            "conditions": {
                t: {
                    "verdict": self.verdicts[t],
                    "witnesses": self.witnesses.get(t, []),
                }
                for t in T_CONDITIONS
            },
            "inventory": dict(sorted(self.inventory.items())),
            "passed": self.passed,
        }

    def render_text(self) -> str:
        lines = [f"admissibility at radius {'/'.join(self.radius.to_strings())}"]
        for t in T_CONDITIONS:
            lines.append(f"  {t}: {self.verdicts[t]}")
            for w in self.witnesses.get(t, []):
                lines.append(f"      witness: {json.dumps(w, sort_keys=True)}")
        return "\n".join(lines) + "\n"


def _vector_chamber_host(space: AtlasSpace, region: WeylPolyhedron) -> Optional[int]:
    """Direction of an open vector chamber strictly containing the region."""
    for w in range(space.rs.order):
        if region_inside_open_vector_chamber(space.rs, region, w, space.lex_rank):
            return w
    return None


def is_admissible(space: AtlasSpace, lam: LexScalar) -> TReport:
    """Check (T0)-(T3) at the given radius.

    Overlaps named by gluings are classified exactly; overlaps implied by
    composite transitions are probed at the marked points.
    """
    rep = TReport(radius=lam)
    rs = space.rs

    # T0: distinct charts must have distinct images; a full-space gluing
    # region identifies two charts completely.
    t0 = []
    for g in space.gluings:
        nrm = g.region.normalize()
        if nrm is not None and not nrm.constraints:
            t0.append({"kind": "duplicate-image", "charts": [g.from_chart, g.to_chart]})
    rep.verdicts["T0"] = axioms.FAIL if t0 else axioms.PASS
    rep.witnesses["T0"] = t0

    # T1: overlap well-formedness, via the structural overlap checker.
    probes = axioms.ProbeSet.build(space)
    a2 = axioms.check_a2(space, probes, Fraction(1))
    rep.verdicts["T1"] = a2.verdict
    rep.witnesses["T1"] = a2.witnesses

    # T2: every overlap is a single point inside both centered balls, or a
    # chamber interior to vector chambers on both sides.
    t2 = []
    seen_pairs: Set[Tuple[str, str]] = set()
    classified = 0
    for g in space.gluings:
        pair = (min(g.from_chart, g.to_chart), max(g.from_chart, g.to_chart))
        if pair in seen_pairs:
            continue
        seen_pairs.add(pair)
        classified += 1
        point = g.region.single_point(space.lex_rank)
        if point is not None:
            image = g.map.apply(point)
            if norm(rs, point) > lam or norm(rs, image) > lam:
                t2.append(
                    {
                        "kind": "point-outside-balls",
                        "charts": list(pair),
                        "norms": [norm(rs, point).to_strings(), norm(rs, image).to_strings()],
                    }
                )
            continue
        chamber = g.region.as_chamber()
        if chamber is not None:
            base_from, dir_from = chamber
            base_to = g.map.apply(base_from)
            dir_to = rs.multiply(g.map.windex, dir_from)
            host_from = chamber_interior_host(rs, base_from, dir_from)
            host_to = chamber_interior_host(rs, base_to, dir_to)
            if host_from is None or host_to is None:
                t2.append(
                    {
                        "kind": "chamber-not-interior",
                        "charts": list(pair),
                        "hosts": [host_from, host_to],
                    }
                )
            continue
        t2.append({"kind": "overlap-not-point-or-chamber", "charts": list(pair)})
    # overlaps implied through composite transitions, probed at marked points
    implied_probes = 0
    for chart, coords in space.marked_points:
        orbit = space.point_orbit(chart, coords)
        charts = sorted(orbit)
        for i, c in enumerate(charts):
            for d in charts[i + 1 :]:
                if (c, d) in seen_pairs:
                    continue
                implied_probes += 1
                if norm(rs, orbit[c]) > lam or norm(rs, orbit[d]) > lam:
                    t2.append(
                        {
                            "kind": "implied-shared-point-outside-balls",
                            "charts": [c, d],
                            "point": [x.to_strings() for x in orbit[c]],
                        }
                    )
    rep.inventory["gluing_pairs"] = classified
    rep.inventory["implied_pair_probes"] = implied_probes
    rep.verdicts["T2"] = axioms.FAIL if t2 else (
        axioms.BOUNDED if implied_probes else axioms.PASS
    )
    rep.witnesses["T2"] = t2

    # T3: each parallelism class carries a common sub-chamber, built by
    # walking the class's gluing tree and shrinking.
    t3 = []
    classes = space.direction_classes()
    for idx, members in enumerate(classes):
        try:
            common_subchamber(space, members)
        except ExtensionError as exc:
            t3.append({"kind": "no-common-subchamber", "class": idx, "detail": str(exc)})
    rep.inventory["classes"] = len(classes)
    rep.verdicts["T3"] = axioms.FAIL if t3 else axioms.PASS
    rep.witnesses["T3"] = t3
    return rep


# -- common sub-chambers of a parallelism class --

def _class_edges(space: AtlasSpace, members: Sequence[Tuple[str, int]]):
    member_set = set(members)
    index = space.direction_edge_index()
    edges: Dict[Tuple[str, int], List[Tuple[Gluing, Tuple[str, int]]]] = {
        m: [] for m in members
    }
    for m in members:
        for g, target in index.get(m, []):
            if target in member_set:
                edges[m].append((g, target))
    return edges


def _clamp_to_vector_cone(rs: RootSystem, base: Point, windex: int) -> Point:
    """Deepest of base and the chart origin in the chamber's cone order."""
    wi = rs.inverse(windex)
    k = base[0].rank
    inv = AffineMap(rs, wi, pt_zero(rs.rank, k))
    y = inv.linear(base)
    zero = LexScalar.zero(k)
    clamped = tuple(max(c, zero) for c in y)
    fwd = AffineMap(rs, windex, pt_zero(rs.rank, k))
    return fwd.linear(clamped)


def common_subchamber(
    space: AtlasSpace, members: Sequence[Tuple[str, int]]
) -> Tuple[str, Point, int]:
    """A chamber contained in every vector chamber of the class: walk the
    class tree, passing to sub-chambers inside each gluing region and
    clamping into the vector cone at every arrival."""
    members = sorted(members)
    edges = _class_edges(space, members)
    root = members[0]
    tree: Dict[Tuple[str, int], List[Tuple[Gluing, Tuple[str, int]]]] = {
        m: [] for m in members
    }
    seen = {root}
    queue = [root]
    while queue:
        node = queue.pop(0)
        for g, target in edges[node]:
            if target not in seen:
                seen.add(target)
                tree[node].append((g, target))
                queue.append(target)
    if seen != set(members):
        raise ExtensionError(
            f"class members {sorted(set(members) - seen)} unreachable from {root}"
        )

    k = space.lex_rank
    chart, windex = root
    base = _clamp_to_vector_cone(space.rs, pt_zero(space.rs.rank, k), windex)

    def traverse(g: Gluing, state):
        c, b, w = state
        b2 = subchamber_base_in_region(space.rs, g.region, b, w)
        if b2 is None:
            raise ExtensionError(
                f"no sub-chamber of ({c}, {w}) fits the gluing to {g.to_chart}"
            )
        nb = g.map.apply(b2)
        nw = space.rs.multiply(g.map.windex, w)
        return (g.to_chart, _clamp_to_vector_cone(space.rs, nb, nw), nw)

    def tour(node, state):
        for g, target in tree[node]:
            state = traverse(g, state)
            state = tour(target, state)
            state = traverse(g.inverse(), state)
        return state

    final = tour(root, (chart, base, windex))
    return final


def far_subchamber(
    space: AtlasSpace, members: Sequence[Tuple[str, int]], lam: LexScalar
) -> Tuple[str, Point, int]:
    """A common sub-chamber of the class pushed beyond the centered ball of
    radius lam, along the central coweight direction."""
    chart, base, windex = common_subchamber(space, members)
    rs = space.rs
    m = rs.matrix(windex)
    central = tuple(sum(m[j][i] for i in range(rs.rank)) for j in range(rs.rank))
    t = lam * 2 + norm(rs, base) + LexScalar.unit(space.lex_rank)
    for _ in range(64):
        candidate = pt_add(base, tuple(t * c for c in central))
        poly = chamber_simplex(rs, candidate, windex).as_polyhedron(rs)
        if not polyhedron_meets_ball(rs, poly, lam):
            return chart, candidate, windex
        t = t * 2
    raise ExtensionError("could not push the sub-chamber past the centered ball")


# -- admissible spaces and the extension procedure --

@dataclass
class AdmissibleSpace:
    """A space together with the extension bookkeeping: the base radius,
    the number of completed rounds, and the pairs already covered."""

    space: AtlasSpace
    lambda1: LexScalar
    rounds_done: int = 0
    covered_point_pairs: FrozenSet[tuple] = frozenset()
    covered_class_pairs: Tuple[tuple, ...] = ()

    def __post_init__(self):
        if self.lambda1.sign() <= 0:
            raise ValueError("the base radius must be positive")
        if self.lambda1.coords[0] <= 0:
            raise ValueError(
                "the base radius must grow in the leading lexicographic "
                "coordinate, otherwise the radius sequence never dominates"
            )

    def radius_for_round(self, round_index: int) -> LexScalar:
        return self.lambda1 * (round_index + 1)

    def next_radius(self) -> LexScalar:
        return self.radius_for_round(self.rounds_done + 1)

    def report(self, lam: Optional[LexScalar] = None) -> TReport:
        return is_admissible(self.space, lam if lam is not None else self.radius_for_round(self.rounds_done))


def _marked_xpoints(space: AtlasSpace) -> List[XPoint]:
    out = []
    seen = set()
    for chart, coords in space.marked_points:
        p = space.canonical_point(chart, coords)
        if p.key() not in seen:
            seen.add(p.key())
            out.append(p)
    return sorted(out, key=lambda p: p.key())


def _in_some_ball(space: AtlasSpace, p: XPoint, lam: LexScalar) -> bool:
    orbit = space.point_orbit(p.chart, p.coords)
    return any(norm(space.rs, coords) <= lam for coords in orbit.values())


def extend_step1(adm: AdmissibleSpace, lam_next: LexScalar) -> AdmissibleSpace:
    """Cover marked point pairs without a common apartment by fresh charts
    glued to both points at single points of the new chart's ball."""
    space = adm.space
    rs = space.rs
    k = space.lex_rank
    points = _marked_xpoints(space)
    uncovered = []
    covered = set(adm.covered_point_pairs)
    for i, x in enumerate(points):
        for y in points[i + 1 :]:
            if space.common_apartments(x, y):
                covered.add(frozenset((x.key(), y.key())))
                continue
            if _in_some_ball(space, x, lam_next) and _in_some_ball(space, y, lam_next):
                uncovered.append((x, y))

    # x_p and y_p sit antipodally on the first coweight axis, rescaled so
    # both land at norm lam/2 inside the new chart's centered ball.
    coweight = pt_from_ints([1] + [0] * (rs.rank - 1), k)
    unit_norm = norm(rs, coweight).coords[0]
    s = lam_next / 2 / unit_norm

    charts = list(space.charts)
    gluings = list(space.gluings)
    round_no = adm.rounds_done + 1
    for idx, (x, y) in enumerate(uncovered):
        name = f"x{round_no}p{idx:03d}"
        if name in set(charts):
            raise ExtensionError(f"chart name collision at {name}")
        xp = tuple(s * int(ci.coords[0]) for ci in coweight)
        yp = tuple(-v for v in xp)
        if xp == yp:
            raise ExtensionError("radius too small to place two distinct points")
        charts.append(name)
        gluings.append(
            Gluing(
                name,
                x.chart,
                single_point_region(rs, xp),
                AffineMap.from_translation(rs, pt_sub(x.coords, xp)),
            )
        )
        gluings.append(
            Gluing(
                name,
                y.chart,
                single_point_region(rs, yp),
                AffineMap.from_translation(rs, pt_sub(y.coords, yp)),
            )
        )
        covered.add(frozenset((x.key(), y.key())))

    provenance = dict(space.provenance or {})
    steps = list(provenance.get("extension_steps", []))
    steps.append(
        {
            "step": "cover-point-pairs",
            "round": round_no,
            "radius": lam_next.to_strings(),
            "new_charts": len(uncovered),
        }
    )
    provenance["extension_steps"] = steps
    new_space = AtlasSpace(
        rs,
        k,
        charts,
        gluings,
        space.marked_points,
        space.marked_germs,
        translation_mode=space.translation_mode,
        provenance=provenance,
    )
    return replace(
        adm, space=new_space, covered_point_pairs=frozenset(covered)
    )


def extend_step2(adm: AdmissibleSpace, lam_next: LexScalar) -> AdmissibleSpace:
    """Cover parallelism-class pairs without a common apartment: a fresh
    chart carries two sub-chambers, far outside its centered ball and inside
    opposite open vector chambers, glued onto far sub-chambers of the two
    classes."""
    space = adm.space
    rs = space.rs
    k = space.lex_rank
    if rs.rank < 1:
        raise ExtensionError("rank-zero root systems are not supported")
    classes = space.direction_classes()
    far: Dict[int, Tuple[str, Point, int]] = {}

    uncovered: List[Tuple[int, int]] = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if not space.class_pair_covered(i, j):
                uncovered.append((i, j))
    for i, j in uncovered:
        for idx in (i, j):
            if idx not in far:
                far[idx] = far_subchamber(space, classes[idx], lam_next)

    w0 = rs.longest_index
    charts = list(space.charts)
    gluings = list(space.gluings)
    round_no = adm.rounds_done + 1
    covered_records = list(adm.covered_class_pairs)
    for idx, (i, j) in enumerate(uncovered):
        name = f"x{round_no}r{idx:04d}"
        if name in set(charts):
            raise ExtensionError(f"chart name collision at {name}")
        # first sub-chamber: fundamental direction; second: its opposite
        t = lam_next * 2 + LexScalar.unit(k)
        b1 = None
        for _ in range(64):
            candidate = tuple(t for _ in range(rs.rank))
            poly = chamber_simplex(rs, candidate, 0).as_polyhedron(rs)
            if not polyhedron_meets_ball(rs, poly, lam_next):
                b1 = candidate
                break
            t = t * 2
        if b1 is None:
            raise ExtensionError("could not place the first far sub-chamber")
        flip = AffineMap(rs, w0, pt_zero(rs.rank, k))
        b2 = flip.apply(b1)
        s1_poly = chamber_simplex(rs, b1, 0).as_polyhedron(rs)
        s2_poly = chamber_simplex(rs, b2, w0).as_polyhedron(rs)
        if s1_poly.intersect(s2_poly).find_point(k) is not None:
            raise ExtensionError("far sub-chambers are not disjoint")

        chart_j, base_j, dir_j = far[j]
        chart_i, base_i, dir_i = far[i]
        # map the fundamental-direction chamber onto class j's far chamber
        lin1 = dir_j
        m1 = AffineMap(rs, lin1, pt_zero(rs.rank, k))
        m1 = AffineMap(rs, lin1, pt_sub(base_j, m1.linear(b1)))
        # map the opposite chamber onto class i's far chamber
        lin2 = rs.multiply(dir_i, rs.inverse(w0))
        m2 = AffineMap(rs, lin2, pt_zero(rs.rank, k))
        m2 = AffineMap(rs, lin2, pt_sub(base_i, m2.linear(b2)))
        charts.append(name)
        gluings.append(Gluing(name, chart_j, s1_poly, m1))
        gluings.append(Gluing(name, chart_i, s2_poly, m2))
        covered_records.append((classes[i][0], classes[j][0]))

    provenance = dict(space.provenance or {})
    steps = list(provenance.get("extension_steps", []))
    steps.append(
        {
            "step": "cover-class-pairs",
            "round": round_no,
            "radius": lam_next.to_strings(),
            "new_charts": len(uncovered),
        }
    )
    provenance["extension_steps"] = steps
    new_space = AtlasSpace(
        rs,
        k,
        charts,
        gluings,
        space.marked_points,
        space.marked_germs,
        translation_mode=space.translation_mode,
        provenance=provenance,
    )
    return replace(adm, space=new_space, covered_class_pairs=tuple(covered_records))


def iterate(adm: AdmissibleSpace, rounds: int) -> AdmissibleSpace:
    """Alternate the two covering steps along the radius sequence, checking
    after each round that the marked data is covered and, in rank two or
    higher, that no overlap became a half-apartment."""
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    current = adm
    for _ in range(rounds):
        lam_next = current.next_radius()
        current = extend_step1(current, lam_next)
        current = extend_step2(current, lam_next)
        current = replace(current, rounds_done=current.rounds_done + 1)
        probes = axioms.ProbeSet.build(current.space)
        a3 = axioms.check_a3(current.space, probes, Fraction(1))
        a4 = axioms.check_a4(current.space, probes, Fraction(1))
        if a3.verdict == axioms.FAIL or a4.verdict == axioms.FAIL:
            raise ExtensionError(
                f"extension round {current.rounds_done} left marked data uncovered"
            )
        if current.space.rs.rank >= 2:
            a6 = axioms.check_a6(current.space, probes, Fraction(1))
            if a6.verdict != axioms.VACUOUS:
                raise ExtensionError(
                    "extension created a half-apartment overlap in rank >= 2"
                )
    return current


# -- the direct counterexample --

def triangle_counterexample(
    rs_or_name, sides: Sequence, lex_rank: int = 1
) -> AtlasSpace:
    """Three apartments glued pairwise at single points whose pairwise
    distances are the given side lengths; the long side must exceed the sum
    of the other two, so the induced distance violates the triangle
    inequality and no distance-non-increasing retraction can exist."""
    rs = rs_or_name if isinstance(rs_or_name, RootSystem) else from_name(rs_or_name)
    if len(sides) != 3:
        raise ValueError("exactly three side lengths are required")
    lams = []
    for s in sides:
        lam = s if isinstance(s, LexScalar) else LexScalar.from_rational(Fraction(s), lex_rank)
        if lam.rank != lex_rank:
            raise ValueError("side length lex rank mismatch")
        if lam.sign() <= 0:
            raise ValueError("side lengths must be positive")
        lams.append(lam)
    s1, s2, s3 = lams
    if not s1 > s2 + s3:
        raise ValueError(
            "the first side must strictly exceed the sum of the other two "
            "(degenerate or metric triangles are rejected)"
        )

    k = lex_rank
    coweight = pt_from_ints([1] + [0] * (rs.rank - 1), k)
    c = norm(rs, coweight).coords[0]

    def on_axis(value: LexScalar) -> Point:
        scaled = value / c
        return tuple(scaled * int(v.coords[0]) for v in coweight)

    # chart layout: each chart holds its two glue points symmetrically
    a_in_a, c_in_a = on_axis(-s1 / 2), on_axis(s1 / 2)
    a_in_b, b_in_b = on_axis(-s2 / 2), on_axis(s2 / 2)
    b_in_c, c_in_c = on_axis(-s3 / 2), on_axis(s3 / 2)

    gluings = [
        Gluing(
            "apt_a",
            "apt_b",
            single_point_region(rs, a_in_a),
            AffineMap.from_translation(rs, pt_sub(a_in_b, a_in_a)),
        ),
        Gluing(
            "apt_b",
            "apt_c",
            single_point_region(rs, b_in_b),
            AffineMap.from_translation(rs, pt_sub(b_in_c, b_in_b)),
        ),
        Gluing(
            "apt_a",
            "apt_c",
            single_point_region(rs, c_in_a),
            AffineMap.from_translation(rs, pt_sub(c_in_c, c_in_a)),
        ),
    ]
    marked_points = [
        ("apt_a", a_in_a),
        ("apt_b", b_in_b),
        ("apt_a", c_in_a),
    ]
    # One retraction center suffices to exhibit the failure of (A5); more
    # marked chambers would only add probe pairs that no apartment can
    # serve (the single-point overlaps transport no chambers at all).
    marked_germs = [GermRef("apt_a", chamber_simplex(rs, a_in_a, 0))]
    provenance = {
        "generator": "triangle-counterexample",
        "type": rs.name or "custom",
        "sides": [s.to_strings() for s in lams],
        "glue_points": {
            "a": "apt_a / apt_b",
            "b": "apt_b / apt_c",
            "c": "apt_c / apt_a",
        },
    }
    return AtlasSpace(
        rs,
        k,
        ["apt_a", "apt_b", "apt_c"],
        gluings,
        marked_points,
        marked_germs,
        provenance=provenance,
    )
