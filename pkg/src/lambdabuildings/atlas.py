"""Finite chart atlases: the space, its points, germs, residues and
parallelism classes.

A space is a finite list of chart ids (each denoting one embedded copy of
the model apartment) plus gluings (region, affine Weyl map) identifying
overlaps.  The atlas is implicitly closed under precomposition with the
affine Weyl group: a chart id names the image, and the gluing maps absorb
the Weyl freedom.  All queries are breadth-first closures over the gluing
graph with deterministic ordering and iteration caps.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from . import linarith
from .model import (
    EQUAL,
    GE,
    LE,
    AffineMap,
    Constraint,
    Point,
    WeylPolyhedron,
    WeylSimplex,
    chamber_fits_direction,
    chamber_simplex,
    distance,
    eval_root,
    germ_inside_or_outside,
    make_constraint,
    pt_sub,
    pt_zero,
    subchamber_base_in_region,
)
from .roots import NAMED_TYPES, RootSystem, build_root_system, from_name
from .scalars import LexScalar

ORBIT_CAP = 10_000


class SchemaError(ValueError):
    """Malformed atlas data."""


class StructureError(RuntimeError):
    """The gluing data is incoherent (failed injectivity or transition
    consistency); carries the offending chain when available."""

    def __init__(self, message: str, chain=None):
        super().__init__(message)
        self.chain = chain


@dataclass(frozen=True)
class Gluing:
    """Identification f_from(x) = f_to(map(x)) for x in the region."""

    from_chart: str
    to_chart: str
    region: WeylPolyhedron
    map: AffineMap

    def key(self):
        return (
            self.from_chart,
            self.to_chart,
            tuple(c.key() for c in self.region.constraints),
            self.map.windex,
            tuple(t.coords for t in self.map.translation),
        )

    def inverse(self) -> "Gluing":
        return Gluing(
            self.to_chart,
            self.from_chart,
            self.region.transform(self.map),
            self.map.inverse(),
        )


class XPoint(NamedTuple):
    """Canonical representative of a point of the glued space."""

    chart: str
    coords: Point

    def key(self):
        return (self.chart, tuple(c.coords for c in self.coords))


@dataclass(frozen=True)
class GermRef:
    """A Weyl simplex named in the coordinates of one chart; germ semantics
    (only an initial piece matters) are applied by the closure operations."""

    chart: str
    simplex: WeylSimplex

    def key(self, rs: RootSystem):
        s = self.simplex.canonical(rs)
        return (
            self.chart,
            s.windex,
            tuple(sorted(s.face)),
            tuple(c.coords for c in s.base),
        )


@dataclass
class Residue:
    """Germs of Weyl chambers at a point, organized as a chamber complex."""

    base: XPoint
    chambers: List[List[Tuple[str, int]]]
    members: Dict[Tuple[str, int], int]
    apartments: Dict[str, List[int]]
    delta: Dict[Tuple[int, int], int]
    adjacency: Set[Tuple[int, int]]

    @property
    def chamber_count(self) -> int:
        return len(self.chambers)

    def co_apartment(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.delta or i == j


def point_key(p: Point):
    return tuple(c.coords for c in p)


class AtlasSpace:
    """Immutable space defined by charts and gluings; queries are pure."""

    def __init__(
        self,
        rs: RootSystem,
        lex_rank: int,
        charts: Sequence[str],
        gluings: Sequence[Gluing],
        marked_points: Sequence[Tuple[str, Point]] = (),
        marked_germs: Sequence[GermRef] = (),
        translation_mode: str = "full",
        provenance: Optional[dict] = None,
    ):
        self.rs = rs
        self.lex_rank = int(lex_rank)
        if self.lex_rank < 1:
            raise SchemaError("lambda_rank must be >= 1")
        self.charts: Tuple[str, ...] = tuple(charts)
        if len(set(self.charts)) != len(self.charts):
            raise SchemaError("chart ids must be unique")
        if not self.charts:
            raise SchemaError("a space needs at least one chart")
        if translation_mode not in ("full", "coroot"):
            raise SchemaError("translation_mode must be 'full' or 'coroot'")
        self.translation_mode = translation_mode
        self.provenance = provenance

        chart_set = set(self.charts)
        for g in gluings:
            if g.from_chart not in chart_set or g.to_chart not in chart_set:
                raise SchemaError(
                    f"gluing references unknown chart {g.from_chart!r}->{g.to_chart!r}"
                )
            if g.from_chart == g.to_chart:
                raise SchemaError("self-gluings are not allowed (charts are injective)")
            if g.region.is_empty(self.lex_rank):
                raise SchemaError(
                    f"gluing {g.from_chart!r}->{g.to_chart!r} has empty region"
                )
            if self.translation_mode == "coroot":
                self._check_coroot_translation(g)

        closed: Dict[tuple, Gluing] = {}
        for g in gluings:
            closed.setdefault(g.key(), g)
            inv = g.inverse()
            closed.setdefault(inv.key(), inv)
        self.gluings: Tuple[Gluing, ...] = tuple(
            closed[k] for k in sorted(closed)
        )
        self._by_chart: Dict[str, List[Gluing]] = {c: [] for c in self.charts}
        for g in self.gluings:
            self._by_chart[g.from_chart].append(g)

        for chart, p in marked_points:
            if chart not in chart_set:
                raise SchemaError(f"marked point references unknown chart {chart!r}")
            self._check_point(p)
        for g in marked_germs:
            if g.chart not in chart_set:
                raise SchemaError(f"marked germ references unknown chart {g.chart!r}")
            self._check_point(g.simplex.base)
            if not g.simplex.face <= set(range(rs.rank)):
                raise SchemaError("marked germ face indices out of range")
        self.marked_points: Tuple[Tuple[str, Point], ...] = tuple(
            (c, tuple(p)) for c, p in marked_points
        )
        self.marked_germs: Tuple[GermRef, ...] = tuple(marked_germs)

        self._orbit_cache: Dict[tuple, Dict[str, Point]] = {}
        self._germ_cache: Dict[tuple, Dict[str, List[Tuple[WeylSimplex, AffineMap]]]] = {}
        self._classes_cache = None
        self._direction_edges_cache = None

    # -- validation helpers --

    def _check_point(self, p: Point) -> None:
        if len(p) != self.rs.rank:
            raise SchemaError(
                f"point has {len(p)} coordinates, root system rank is {self.rs.rank}"
            )
        for c in p:
            if c.rank != self.lex_rank:
                raise SchemaError(
                    f"coordinate lex rank {c.rank} != lambda_rank {self.lex_rank}"
                )

    def _check_coroot_translation(self, g: Gluing) -> None:
        n = self.rs.rank
        t = g.map.translation
        for pos in range(1, self.lex_rank):
            if any(c.coords[pos] != 0 for c in t):
                raise SchemaError(
                    "coroot-lattice mode requires integer-embedded translations"
                )
        rows = [[Fraction(self.rs.coroots[i][j]) for i in range(n)] for j in range(n)]
        rhs = [t[j].coords[0] for j in range(n)]
        cons = [
            linarith.Lin(tuple(rows[j]), linarith.EQ, LexScalar([rhs[j]]))
            for j in range(n)
        ]
        sol = linarith.solve(cons, n, 1)
        if sol is None or any(s.coords[0].denominator != 1 for s in sol):
            raise SchemaError(
                f"gluing {g.from_chart!r}->{g.to_chart!r}: translation outside the coroot lattice"
            )

    # -- gluing graph --

    def gluings_from(self, chart: str) -> List[Gluing]:
        return self._by_chart[chart]

    # -- points --

    def point_orbit(self, chart: str, coords: Point, cap: int = ORBIT_CAP) -> Dict[str, Point]:
        """All chart representatives of one point, by gluing closure."""
        key = (chart, point_key(coords))
        cached = self._orbit_cache.get(key)
        if cached is not None:
            return cached
        found: Dict[str, Point] = {chart: coords}
        chain: List[tuple] = [(chart, coords)]
        queue = deque([(chart, coords)])
        steps = 0
        while queue:
            c, p = queue.popleft()
            steps += 1
            if steps > cap:
                raise StructureError(
                    f"point orbit exceeded {cap} steps", chain=chain
                )
            for g in self.gluings_from(c):
                if not g.region.contains(p):
                    continue
                q = g.map.apply(p)
                prev = found.get(g.to_chart)
                if prev is None:
                    found[g.to_chart] = q
                    chain.append((g.to_chart, q))
                    queue.append((g.to_chart, q))
                elif prev != q:
                    raise StructureError(
                        f"chart {g.to_chart!r} receives two coordinates for one "
                        f"point; transition chain is inconsistent",
                        chain=chain + [(g.to_chart, q)],
                    )
        for c, p in found.items():
            self._orbit_cache[(c, point_key(p))] = found
        return found

    def canonical_point(self, chart: str, coords: Point) -> XPoint:
        orbit = self.point_orbit(chart, coords)
        best = min(orbit.items(), key=lambda it: (it[0], point_key(it[1])))
        return XPoint(best[0], best[1])

    def xpoint(self, chart: str, coords) -> XPoint:
        coords = tuple(coords)
        self._check_point(coords)
        return self.canonical_point(chart, coords)

    def common_apartments(self, x: XPoint, y: XPoint) -> List[str]:
        ox = self.point_orbit(x.chart, x.coords)
        oy = self.point_orbit(y.chart, y.coords)
        return sorted(set(ox) & set(oy))

    def distance_between(
        self, x: XPoint, y: XPoint, scale: Fraction = Fraction(1)
    ) -> Optional[LexScalar]:
        """Distance measured in any common chart; None when no chart
        contains both.  Chart agreement is asserted: disagreement is an
        overlap-consistency violation."""
        ox = self.point_orbit(x.chart, x.coords)
        oy = self.point_orbit(y.chart, y.coords)
        values = []
        for c in sorted(set(ox) & set(oy)):
            values.append((c, distance(self.rs, ox[c], oy[c], scale)))
        if not values:
            return None
        first = values[0][1]
        for c, v in values[1:]:
            if v != first:
                raise StructureError(
                    f"distance disagrees between charts {values[0][0]!r} and {c!r}"
                )
        return first

    # -- germs --

    def germ_closure(
        self, germ: GermRef, cap: int = ORBIT_CAP
    ) -> Dict[str, List[Tuple[WeylSimplex, AffineMap]]]:
        """Chart representatives of a germ with transition maps from the
        start chart's coordinates.  A gluing transports a germ only when the
        germ sits inside the gluing region."""
        start_key = germ.key(self.rs)
        cached = self._germ_cache.get(start_key)
        if cached is not None:
            return cached
        ident = AffineMap.identity(self.rs, self.lex_rank)
        states: Dict[str, List[Tuple[WeylSimplex, AffineMap]]] = {
            germ.chart: [(germ.simplex, ident)]
        }
        seen = {(germ.chart,) + germ.key(self.rs)[1:]}
        queue = deque([(germ.chart, germ.simplex, ident)])
        steps = 0
        while queue:
            c, s, acc = queue.popleft()
            steps += 1
            if steps > cap:
                raise StructureError(f"germ closure exceeded {cap} steps")
            for g in self.gluings_from(c):
                if not germ_inside_or_outside(self.rs, g.region, s):
                    continue
                s2 = s.transform(self.rs, g.map)
                key = (g.to_chart,) + GermRef(g.to_chart, s2).key(self.rs)[1:]
                if key in seen:
                    continue
                seen.add(key)
                acc2 = g.map.compose(acc)
                states.setdefault(g.to_chart, []).append((s2, acc2))
                queue.append((g.to_chart, s2, acc2))
        self._germ_cache[start_key] = states
        return states

    def germ_charts(self, germ: GermRef) -> List[str]:
        return sorted(self.germ_closure(germ))

    def germ_key(self, germ: GermRef):
        """Canonical key identifying the germ as an equivalence class."""
        states = self.germ_closure(germ)
        keys = [
            GermRef(c, s).key(self.rs) for c, lst in states.items() for s, _ in lst
        ]
        return min(keys)

    def germ_equal(self, g1: GermRef, g2: GermRef) -> bool:
        states = self.germ_closure(g1)
        target = g2.key(self.rs)
        return any(
            GermRef(c, s).key(self.rs) == target
            for c, lst in states.items()
            for s, _ in lst
        )

    def germ_base(self, germ: GermRef) -> XPoint:
        return self.canonical_point(germ.chart, germ.simplex.base)

    # -- residues --

    def residue(self, x: XPoint) -> Residue:
        orbit = self.point_orbit(x.chart, x.coords)
        raw: List[Tuple[str, int]] = [
            (c, w) for c in sorted(orbit) for w in range(self.rs.order)
        ]
        class_of: Dict[Tuple[str, int], int] = {}
        classes: List[List[Tuple[str, int]]] = []
        key_to_class: Dict[tuple, int] = {}
        closures: Dict[Tuple[str, int], Dict[str, List[Tuple[WeylSimplex, AffineMap]]]] = {}
        for c, w in raw:
            germ = GermRef(c, chamber_simplex(self.rs, orbit[c], w))
            states = self.germ_closure(germ)
            closures[(c, w)] = states
            key = min(
                GermRef(d, s).key(self.rs) for d, lst in states.items() for s, _ in lst
            )
            if key not in key_to_class:
                key_to_class[key] = len(classes)
                classes.append([])
            idx = key_to_class[key]
            class_of[(c, w)] = idx
            classes[idx].append((c, w))

        apartments: Dict[str, List[int]] = {}
        for c in sorted(orbit):
            members = [class_of[(c, w)] for w in range(self.rs.order)]
            if len(set(members)) != self.rs.order:
                raise StructureError(
                    f"chamber germs of chart {c!r} do not form a full apartment at {x}"
                )
            apartments[c] = members

        delta: Dict[Tuple[int, int], int] = {}
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                pair = None
                for (c, w) in classes[i]:
                    match = [w2 for (c2, w2) in classes[j] if c2 == c]
                    if match:
                        pair = (w, min(match))
                        break
                if pair is not None:
                    delta[(i, j)] = self.rs.multiply(self.rs.inverse(pair[0]), pair[1])

        adjacency: Set[Tuple[int, int]] = set()
        panel_keys: List[Set[tuple]] = []
        for idx, members in enumerate(classes):
            keys: Set[tuple] = set()
            c, w = members[0]
            base = orbit[c]
            for i in sorted(range(self.rs.rank)):
                panel = WeylSimplex(base, w, frozenset(range(self.rs.rank)) - {i})
                keys.add(self.germ_key(GermRef(c, panel)))
            panel_keys.append(keys)
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                if panel_keys[i] & panel_keys[j]:
                    adjacency.add((i, j))

        return Residue(
            base=x,
            chambers=[sorted(m) for m in classes],
            members=class_of,
            apartments=apartments,
            delta=delta,
            adjacency=adjacency,
        )

    # -- parallelism classes of chamber directions --

    def direction_edges(self) -> List[Tuple[Gluing, int, int]]:
        """All (gluing, direction, image direction) triples along which a
        full chamber cone passes through the gluing region; cached."""
        if self._direction_edges_cache is None:
            edges = []
            for g in self.gluings:
                for w in range(self.rs.order):
                    if chamber_fits_direction(self.rs, g.region, w):
                        edges.append((g, w, self.rs.multiply(g.map.windex, w)))
            self._direction_edges_cache = edges
        return self._direction_edges_cache

    def direction_edge_index(self) -> Dict[Tuple[str, int], List[Tuple[Gluing, Tuple[str, int]]]]:
        """direction_edges grouped by source (chart, direction) node."""
        index: Dict[Tuple[str, int], List[Tuple[Gluing, Tuple[str, int]]]] = {}
        for g, w, w2 in self.direction_edges():
            index.setdefault((g.from_chart, w), []).append((g, (g.to_chart, w2)))
        return index

    def direction_classes(self) -> List[List[Tuple[str, int]]]:
        """Equivalence classes of (chart, direction) pairs under containing a
        common sub-chamber, generated by gluing transport."""
        if self._classes_cache is not None:
            return self._classes_cache
        nodes = [(c, w) for c in self.charts for w in range(self.rs.order)]
        index = {node: i for i, node in enumerate(nodes)}
        parent = list(range(len(nodes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for g, w, w2 in self.direction_edges():
            union(index[(g.from_chart, w)], index[(g.to_chart, w2)])

        groups: Dict[int, List[Tuple[str, int]]] = {}
        for node, i in index.items():
            groups.setdefault(find(i), []).append(node)
        classes = [sorted(v) for _, v in sorted(groups.items())]
        classes.sort(key=lambda members: members[0])
        self._classes_cache = classes
        return classes

    def direction_class_index(self) -> Dict[Tuple[str, int], int]:
        return {
            node: i
            for i, members in enumerate(self.direction_classes())
            for node in members
        }

    def class_pair_covered(self, class_a: int, class_b: int) -> bool:
        """Two parallelism classes are covered when some chart carries a
        direction of each."""
        classes = self.direction_classes()
        charts_a = {c for c, _ in classes[class_a]}
        charts_b = {c for c, _ in classes[class_b]}
        return bool(charts_a & charts_b)

    # -- full-chamber transport --

    def chamber_charts(self, ref: GermRef, cap: int = ORBIT_CAP) -> Dict[str, Tuple[Point, int]]:
        """Charts containing the full chamber, with its coordinates there."""
        s = ref.simplex
        if not s.is_chamber(self.rs):
            raise ValueError("full-chamber transport needs a chamber")
        found: Dict[str, Tuple[Point, int]] = {ref.chart: (s.base, s.windex)}
        queue = deque([(ref.chart, s.base, s.windex)])
        steps = 0
        while queue:
            c, b, w = queue.popleft()
            steps += 1
            if steps > cap:
                raise StructureError(f"chamber transport exceeded {cap} steps")
            for g in self.gluings_from(c):
                if not (
                    chamber_fits_direction(self.rs, g.region, w)
                    and g.region.contains(b)
                ):
                    continue
                nb = g.map.apply(b)
                nw = self.rs.multiply(g.map.windex, w)
                if g.to_chart not in found:
                    found[g.to_chart] = (nb, nw)
                    queue.append((g.to_chart, nb, nw))
        return found

    def _in_cone(self, windex: int, vec: Point) -> bool:
        wi = self.rs.inverse(windex)
        n = self.rs.rank
        for i in range(n):
            func = self.rs.root_after(tuple(int(i == j) for j in range(n)), wi)
            if eval_root(func, vec).sign() < 0:
                return False
        return True

    def subchamber_reach(
        self, ref: GermRef, cap: int = ORBIT_CAP
    ) -> Dict[Tuple[str, int], List[Point]]:
        """Charts and directions reachable by passing to sub-chambers along
        gluings; bases are the shallowest found (non-dominated set)."""
        s = ref.simplex
        if not s.is_chamber(self.rs):
            raise ValueError("sub-chamber transport needs a chamber")
        reach: Dict[Tuple[str, int], List[Point]] = {
            (ref.chart, s.windex): [s.base]
        }
        queue = deque([(ref.chart, s.base, s.windex)])
        steps = 0
        while queue:
            c, b, w = queue.popleft()
            steps += 1
            if steps > cap:
                raise StructureError(f"sub-chamber transport exceeded {cap} steps")
            for g in self.gluings_from(c):
                b2 = subchamber_base_in_region(self.rs, g.region, b, w)
                if b2 is None:
                    continue
                nb = g.map.apply(b2)
                nw = self.rs.multiply(g.map.windex, w)
                bases = reach.setdefault((g.to_chart, nw), [])
                if any(self._in_cone(nw, pt_sub(nb, b0)) for b0 in bases):
                    continue
                bases.append(nb)
                queue.append((g.to_chart, nb, nw))
        return reach

    def region_charts(self, chart: str, region: WeylPolyhedron, cap: int = ORBIT_CAP) -> Dict[str, WeylPolyhedron]:
        """Charts fully containing a polyhedron, transporting it whole."""
        def subset(p: WeylPolyhedron, r: WeylPolyhedron) -> bool:
            raw = p.raw()
            for c in r.constraints:
                if not WeylPolyhedron(self.rs, [c])._implied(raw, c, self.lex_rank):
                    return False
            return True

        found: Dict[str, WeylPolyhedron] = {chart: region}
        queue = deque([(chart, region)])
        steps = 0
        while queue:
            c, p = queue.popleft()
            steps += 1
            if steps > cap:
                raise StructureError(f"region transport exceeded {cap} steps")
            for g in self.gluings_from(c):
                if g.to_chart in found or not subset(p, g.region):
                    continue
                found[g.to_chart] = p.transform(g.map)
                queue.append((g.to_chart, p.transform(g.map)))
        return found

    def half_apartment_overlaps(self) -> List[Tuple[Gluing, Constraint]]:
        """Gluings whose overlap region is a half-apartment."""
        out = []
        for g in self.gluings:
            desc = g.region.half_apartment_descriptor()
            if desc is not None:
                out.append((g, desc))
        return out

    # -- serialization --

    def to_dict(self) -> dict:
        data = {
            "schema": "atlas@1",
            "root_system": self.rs.name if self.rs.name else {"cartan": [list(r) for r in self.rs.cartan]},
            "lambda_rank": self.lex_rank,
            "translation_mode": self.translation_mode,
            "charts": list(self.charts),
            "gluings": [
                {
                    "from": g.from_chart,
                    "to": g.to_chart,
                    "region": [
                        {
                            "root": list(c.root),
                            "rel": c.rel,
                            "bound": c.bound.to_strings(),
                        }
                        for c in g.region.constraints
                    ],
                    "map": {
                        "weyl_index": g.map.windex,
                        "translation": [t.to_strings() for t in g.map.translation],
                    },
                }
                for g in self.gluings
            ],
            "marked_points": [
                {"chart": c, "coords": [x.to_strings() for x in p]}
                for c, p in self.marked_points
            ],
            "marked_germs": [
                {
                    "chart": g.chart,
                    "base": [x.to_strings() for x in g.simplex.base],
                    "weyl_index": g.simplex.windex,
                    "face": sorted(g.simplex.face),
                }
                for g in self.marked_germs
            ],
        }
        if self.provenance is not None:
            data["provenance"] = self.provenance
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def dump(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())


def _parse_point(items, rs: RootSystem, lex_rank: int, where: str) -> Point:
    if not isinstance(items, list) or len(items) != rs.rank:
        raise SchemaError(f"{where}: expected {rs.rank} coordinates")
    out = []
    for coord in items:
        if not isinstance(coord, list) or len(coord) != lex_rank:
            raise SchemaError(f"{where}: each coordinate needs {lex_rank} entries")
        try:
            out.append(LexScalar.from_strings(coord))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{where}: bad rational {coord!r}: {exc}") from exc
    return tuple(out)


def _parse_scalar(items, lex_rank: int, where: str) -> LexScalar:
    if not isinstance(items, list) or len(items) != lex_rank:
        raise SchemaError(f"{where}: scalar needs {lex_rank} entries")
    try:
        return LexScalar.from_strings(items)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: bad rational {items!r}: {exc}") from exc


def resolve_root_system(spec) -> RootSystem:
    if isinstance(spec, str):
        if spec not in NAMED_TYPES:
            raise SchemaError(f"unknown root system name {spec!r}")
        return from_name(spec)
    if isinstance(spec, dict) and "cartan" in spec:
        return build_root_system(spec["cartan"], name=spec.get("name"))
    raise SchemaError("root_system must be a type name or {'cartan': ...}")


def from_dict(data: dict) -> AtlasSpace:
    if not isinstance(data, dict):
        raise SchemaError("atlas file must contain a JSON object")
    for fieldname in ("root_system", "lambda_rank", "charts"):
        if fieldname not in data:
            raise SchemaError(f"missing field {fieldname!r}")
    rs = resolve_root_system(data["root_system"])
    lex_rank = data["lambda_rank"]
    if not isinstance(lex_rank, int) or lex_rank < 1:
        raise SchemaError("lambda_rank must be a positive integer")
    charts = data["charts"]
    if not isinstance(charts, list) or not all(isinstance(c, str) for c in charts):
        raise SchemaError("charts must be a list of strings")

    gluings = []
    for i, item in enumerate(data.get("gluings", [])):
        where = f"gluings[{i}]"
        for fieldname in ("from", "to", "region", "map"):
            if fieldname not in item:
                raise SchemaError(f"{where}: missing {fieldname!r}")
        cons = []
        for j, c in enumerate(item["region"]):
            cwhere = f"{where}.region[{j}]"
            if c.get("rel") not in (GE, LE, EQUAL):
                raise SchemaError(f"{cwhere}: rel must be '>=', '<=' or '='")
            root = tuple(int(v) for v in c.get("root", ()))
            if not rs.is_root(root):
                raise SchemaError(f"{cwhere}: {root} is not a root")
            cons.append(
                make_constraint(rs, root, c["rel"], _parse_scalar(c["bound"], lex_rank, cwhere))
            )
        m = item["map"]
        windex = m.get("weyl_index")
        if not isinstance(windex, int) or not (0 <= windex < rs.order):
            raise SchemaError(f"{where}.map: weyl_index out of range")
        translation = _parse_point(m["translation"], rs, lex_rank, f"{where}.map.translation")
        gluings.append(
            Gluing(
                item["from"],
                item["to"],
                WeylPolyhedron(rs, cons),
                AffineMap(rs, windex, translation),
            )
        )

    marked_points = []
    for i, item in enumerate(data.get("marked_points", [])):
        where = f"marked_points[{i}]"
        if "chart" not in item or "coords" not in item:
            raise SchemaError(f"{where}: needs chart and coords")
        marked_points.append(
            (item["chart"], _parse_point(item["coords"], rs, lex_rank, where))
        )

    marked_germs = []
    for i, item in enumerate(data.get("marked_germs", [])):
        where = f"marked_germs[{i}]"
        for fieldname in ("chart", "base", "weyl_index"):
            if fieldname not in item:
                raise SchemaError(f"{where}: missing {fieldname!r}")
        windex = item["weyl_index"]
        if not isinstance(windex, int) or not (0 <= windex < rs.order):
            raise SchemaError(f"{where}: weyl_index out of range")
        face = item.get("face", list(range(rs.rank)))
        marked_germs.append(
            GermRef(
                item["chart"],
                WeylSimplex(
                    _parse_point(item["base"], rs, lex_rank, where),
                    windex,
                    frozenset(int(f) for f in face),
                ),
            )
        )

    return AtlasSpace(
        rs,
        lex_rank,
        charts,
        gluings,
        marked_points,
        marked_germs,
        translation_mode=data.get("translation_mode", "full"),
        provenance=data.get("provenance"),
    )


def loads(text: str) -> AtlasSpace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return from_dict(data)


def load(path: str) -> AtlasSpace:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
