"""Germ-centered retractions onto an apartment.

A retraction is determined by a target chart and a chamber germ contained
in it.  A point y is pulled back through any chart that contains both y and
the germ; the transition to the target chart is the composite of the stored
gluing maps along the germ's transport chain, so the map restricts to an
isometry on every chart containing the germ and never increases distances
on spaces where such retractions exist globally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .atlas import AtlasSpace, GermRef, XPoint
from .model import AffineMap, Point, distance
from .scalars import LexScalar


class RetractionUndefined(RuntimeError):
    """No chart contains both the probe point and the center germ — a
    witness against the almost-large-atlas condition."""

    def __init__(self, point: XPoint, center: GermRef, point_charts, germ_charts):
        super().__init__(
            f"no chart contains both {point.chart}:{[c.to_strings() for c in point.coords]} "
            f"and the center germ (point charts {sorted(point_charts)}, germ charts {sorted(germ_charts)})"
        )
        self.point = point
        self.point_charts = sorted(point_charts)
        self.germ_charts = sorted(germ_charts)


@dataclass
class LipschitzReport:
    center_chart: str
    checked_pairs: int = 0
    violations: List[dict] = field(default_factory=list)
    skipped: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


class Retraction:
    """Distance-testable retraction of the space onto one chart."""

    def __init__(self, space: AtlasSpace, chart: str, center: GermRef):
        if not center.simplex.is_chamber(space.rs):
            raise ValueError("retraction centers must be chamber germs")
        self.space = space
        self.chart = chart
        self.center = center
        closure = space.germ_closure(center)
        if chart not in closure:
            raise ValueError(
                f"center germ is not contained in target chart {chart!r}"
            )
        # Transitions are tracked from the germ's own chart; re-root them at
        # the target chart.
        to_target = closure[chart][0][1]
        from_target = to_target.inverse()
        self._transition: Dict[str, AffineMap] = {
            c: lst[0][1].compose(from_target) for c, lst in closure.items()
        }
        self._germ_charts = sorted(closure)
        self._base_in_target: Point = closure[chart][0][0].base
        self.base_point: XPoint = space.germ_base(center)

    @property
    def germ_charts(self) -> List[str]:
        return self._germ_charts

    def retract(self, y: XPoint, verify: bool = True) -> Point:
        """Coordinates of the image of y in the target chart."""
        orbit = self.space.point_orbit(y.chart, y.coords)
        candidates = sorted(set(orbit) & set(self._transition))
        if not candidates:
            raise RetractionUndefined(y, self.center, orbit, self._germ_charts)
        results = []
        for g in candidates:
            results.append(self._transition[g].inverse().apply(orbit[g]))
            if not verify:
                break
        first = results[0]
        for g, r in zip(candidates[1:], results[1:]):
            if r != first:
                raise RuntimeError(
                    f"retraction is chart-dependent: charts {candidates[0]!r} "
                    f"and {g!r} disagree (overlap transitions are inconsistent)"
                )
        return first

    def defined_at(self, y: XPoint) -> bool:
        orbit = self.space.point_orbit(y.chart, y.coords)
        return bool(set(orbit) & set(self._transition))

    # -- verification suite --

    def verify_lipschitz(
        self,
        pairs: Sequence[Tuple[XPoint, XPoint]],
        scale: Fraction = Fraction(1),
    ) -> LipschitzReport:
        """Check d(r(y), r(z)) <= d(y, z) over the given pairs.

        Undefined images are violations in their own right (the retraction
        fails to be total); when two defined anchors force every candidate
        image of an undefined point to break the bound, the numeric witness
        is attached.
        """
        report = LipschitzReport(center_chart=self.chart)
        images: Dict[tuple, Point] = {}
        defined: List[XPoint] = []
        points = sorted(
            {p.key(): p for pair in pairs for p in pair}.values(),
            key=lambda p: p.key(),
        )
        for p in points:
            try:
                images[p.key()] = self.retract(p)
                defined.append(p)
            except RetractionUndefined as exc:
                report.violations.append(
                    {
                        "kind": "undefined",
                        "point": _point_payload(p),
                        "point_charts": exc.point_charts,
                        "germ_charts": exc.germ_charts,
                    }
                )

        undefined = [p for p in points if p.key() not in images]
        for p in undefined:
            forced = self._forced_violation(p, defined, images, scale)
            if forced is not None:
                report.violations.append(forced)

        for y, z in pairs:
            if y.key() not in images or z.key() not in images:
                continue
            dxy = self.space.distance_between(y, z, scale)
            if dxy is None:
                report.skipped.append(
                    {
                        "reason": "distance undefined (no common apartment)",
                        "pair": [_point_payload(y), _point_payload(z)],
                    }
                )
                continue
            report.checked_pairs += 1
            dimg = distance(self.space.rs, images[y.key()], images[z.key()], scale)
            if dimg > dxy:
                report.violations.append(
                    {
                        "kind": "expansion",
                        "pair": [_point_payload(y), _point_payload(z)],
                        "distance": (dxy / scale).to_strings(),
                        "image_distance": (dimg / scale).to_strings(),
                    }
                )

        base = self.base_point
        for p in defined:
            if p.key() == base.key():
                continue
            if images[p.key()] == self._base_in_target:
                report.violations.append(
                    {
                        "kind": "fiber",
                        "point": _point_payload(p),
                        "note": "a probe point other than the center base maps to the base",
                    }
                )
        return report

    def _forced_violation(
        self,
        p: XPoint,
        defined: List[XPoint],
        images: Dict[tuple, Point],
        scale: Fraction,
    ) -> Optional[dict]:
        for i, z1 in enumerate(defined):
            d1 = self.space.distance_between(p, z1, scale)
            if d1 is None:
                continue
            for z2 in defined[i + 1 :]:
                d2 = self.space.distance_between(p, z2, scale)
                if d2 is None:
                    continue
                dimg = distance(
                    self.space.rs, images[z1.key()], images[z2.key()], scale
                )
                if d1 + d2 < dimg:
                    return {
                        "kind": "forced",
                        "point": _point_payload(p),
                        "anchors": [_point_payload(z1), _point_payload(z2)],
                        "anchor_distances": [
                            (d1 / scale).to_strings(),
                            (d2 / scale).to_strings(),
                        ],
                        "anchor_image_distance": (dimg / scale).to_strings(),
                        "note": "every candidate image violates the bound for one anchor",
                    }
        return None

    def identity_violations(self, probes: Sequence[XPoint]) -> List[dict]:
        """Probe points of the target chart must map to themselves."""
        out = []
        for p in probes:
            orbit = self.space.point_orbit(p.chart, p.coords)
            if self.chart not in orbit:
                continue
            img = self.retract(p)
            if img != orbit[self.chart]:
                out.append(
                    {"point": _point_payload(p), "image": [c.to_strings() for c in img]}
                )
        return out

    def isometry_violations(
        self, probes: Sequence[XPoint], scale: Fraction = Fraction(1)
    ) -> List[dict]:
        """On each chart containing the germ the retraction is an isometry."""
        out = []
        for g in self._germ_charts:
            inside = []
            for p in probes:
                orbit = self.space.point_orbit(p.chart, p.coords)
                if g in orbit:
                    inside.append((p, orbit[g]))
            for i, (p1, c1) in enumerate(inside):
                for p2, c2 in inside[i + 1 :]:
                    want = distance(self.space.rs, c1, c2, scale)
                    got = distance(
                        self.space.rs, self.retract(p1), self.retract(p2), scale
                    )
                    if want != got:
                        out.append(
                            {
                                "chart": g,
                                "pair": [_point_payload(p1), _point_payload(p2)],
                                "chart_distance": (want / scale).to_strings(),
                                "image_distance": (got / scale).to_strings(),
                            }
                        )
        return out


def _point_payload(p: XPoint) -> dict:
    return {"chart": p.chart, "coords": [c.to_strings() for c in p.coords]}
