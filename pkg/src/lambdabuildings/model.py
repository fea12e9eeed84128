"""The model apartment: points, the affine Weyl group, Weyl polyhedra,
Weyl simplices, the exact value-group metric, segments and germ predicates.

Points are stored by simple-root evaluations (fundamental coweight basis),
so every wall datum is integral and every Weyl element acts by an integer
matrix.  The metric is d(x, y) = sum over positive roots of |alpha(y - x)|,
which is Weyl invariant, translation invariant and value-group valued; all
verdicts downstream depend only on its topological equivalence class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import linarith
from .linarith import EQ as RAW_EQ
from .linarith import LE as RAW_LE
from .linarith import LT as RAW_LT
from .linarith import Lin
from .roots import IntVec, RootSystem
from .scalars import LexScalar

Point = Tuple[LexScalar, ...]

GE = ">="
LE = "<="
EQUAL = "="


# -- point helpers --

def pt_zero(rank: int, lex_rank: int) -> Point:
    return tuple(LexScalar.zero(lex_rank) for _ in range(rank))


def pt_add(x: Point, y: Point) -> Point:
    return tuple(a + b for a, b in zip(x, y))


def pt_sub(x: Point, y: Point) -> Point:
    return tuple(a - b for a, b in zip(x, y))


def pt_neg(x: Point) -> Point:
    return tuple(-a for a in x)


def pt_scale(q, x: Point) -> Point:
    q = Fraction(q)
    return tuple(a * q for a in x)


def pt_from_ints(coords: Sequence, lex_rank: int) -> Point:
    """Build a point from plain rationals, embedded on the leading coordinate."""
    return tuple(LexScalar.from_rational(c, lex_rank) for c in coords)


def lex_rank_of(x: Point) -> int:
    return x[0].rank


def eval_root(root: Sequence[int], x: Point) -> LexScalar:
    """alpha(x) for alpha given by integer coefficients over simple roots."""
    total = LexScalar.zero(lex_rank_of(x))
    for c, xi in zip(root, x):
        if c:
            total = total + xi * c
    return total


def _eval_int(root: Sequence[int], vec: Sequence[int]) -> int:
    return sum(c * v for c, v in zip(root, vec))


# -- metric --

def distance(rs: RootSystem, x: Point, y: Point, scale: Fraction = Fraction(1)) -> LexScalar:
    """d(x, y) = sum_{alpha > 0} |alpha(y - x)|, optionally rescaled."""
    diff = pt_sub(y, x)
    total = LexScalar.zero(lex_rank_of(x))
    for root in rs.positive_roots:
        total = total + abs(eval_root(root, diff))
    if scale != 1:
        total = total * scale
    return total


def norm(rs: RootSystem, x: Point) -> LexScalar:
    """Distance from the origin of the apartment."""
    total = LexScalar.zero(lex_rank_of(x))
    for root in rs.positive_roots:
        total = total + abs(eval_root(root, x))
    return total


# -- affine maps (the affine Weyl group with full translation part) --

@dataclass(frozen=True)
class AffineMap:
    """x -> w(x) + t with w a spherical Weyl element and t any translation."""

    rs: RootSystem
    windex: int
    translation: Point

    @classmethod
    def identity(cls, rs: RootSystem, lex_rank: int) -> "AffineMap":
        return cls(rs, 0, pt_zero(rs.rank, lex_rank))

    @classmethod
    def from_translation(cls, rs: RootSystem, t: Point) -> "AffineMap":
        return cls(rs, 0, t)

    def linear(self, x: Point) -> Point:
        m = self.rs.matrix(self.windex)
        n = self.rs.rank
        k = lex_rank_of(x)
        out = []
        for j in range(n):
            acc = LexScalar.zero(k)
            for l in range(n):
                if m[j][l]:
                    acc = acc + x[l] * m[j][l]
            out.append(acc)
        return tuple(out)

    def apply(self, x: Point) -> Point:
        return pt_add(self.linear(x), self.translation)

    def compose(self, other: "AffineMap") -> "AffineMap":
        # (s, t) o (s', t') = (s s', s(t') + t)
        w = self.rs.multiply(self.windex, other.windex)
        return AffineMap(self.rs, w, pt_add(self.linear(other.translation), self.translation))

    def inverse(self) -> "AffineMap":
        wi = self.rs.inverse(self.windex)
        inv = AffineMap(self.rs, wi, pt_zero(self.rs.rank, lex_rank_of(self.translation)))
        return AffineMap(self.rs, wi, pt_neg(inv.linear(self.translation)))

    def is_identity(self) -> bool:
        return self.windex == 0 and all(c.is_zero() for c in self.translation)


def apply(m: AffineMap, x: Point) -> Point:
    return m.apply(x)


def reflect(rs: RootSystem, root: Sequence[int], x: Point) -> Point:
    """Reflection across the wall of ``root``: x - alpha(x) * coroot."""
    val = eval_root(root, x)
    cr = rs.coroot_of(tuple(root))
    return tuple(xi - val * c if c else xi for xi, c in zip(x, cr))


# -- Weyl polyhedra: finite intersections of root half-spaces and walls --

@dataclass(frozen=True)
class Constraint:
    """alpha(x) REL bound with alpha a positive root."""

    root: IntVec
    rel: str
    bound: LexScalar

    def key(self):
        return (self.root, self.rel, self.bound.coords)

    def holds_at(self, x: Point) -> bool:
        v = eval_root(self.root, x)
        if self.rel == GE:
            return v >= self.bound
        if self.rel == LE:
            return v <= self.bound
        return v == self.bound


def make_constraint(rs: RootSystem, root: Sequence[int], rel: str, bound: LexScalar) -> Constraint:
    """Normalize so the stored root is positive."""
    sign, pos = rs.split_sign(tuple(int(c) for c in root))
    if sign < 0:
        bound = -bound
        rel = {GE: LE, LE: GE, EQUAL: EQUAL}[rel]
    return Constraint(pos, rel, bound)


class WeylPolyhedron:
    """Closed intersection of root half-apartments and walls."""

    __slots__ = ("rs", "constraints", "_norm")

    def __init__(self, rs: RootSystem, constraints: Iterable[Constraint]):
        self.rs = rs
        self.constraints = tuple(sorted(constraints, key=Constraint.key))
        self._norm = False  # False: not computed; None or WeylPolyhedron otherwise

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeylPolyhedron)
            and self.rs is other.rs
            and self.constraints == other.constraints
        )

    def __hash__(self) -> int:
        return hash(tuple(c.key() for c in self.constraints))

    def __repr__(self) -> str:
        parts = [
            f"{c.root} {c.rel} {'/'.join(c.bound.to_strings())}" for c in self.constraints
        ]
        return "WeylPolyhedron[%s]" % "; ".join(parts) if parts else "WeylPolyhedron[all]"

    # -- membership and feasibility --

    def contains(self, x: Point) -> bool:
        return all(c.holds_at(x) for c in self.constraints)

    def raw(self) -> List[Lin]:
        out: List[Lin] = []
        for c in self.constraints:
            coeffs = tuple(Fraction(v) for v in c.root)
            if c.rel == GE:
                out.append(Lin(tuple(-v for v in coeffs), RAW_LE, -c.bound))
            elif c.rel == LE:
                out.append(Lin(coeffs, RAW_LE, c.bound))
            else:
                out.append(Lin(coeffs, RAW_EQ, c.bound))
        return out

    def _lex_rank(self, fallback: int = 1) -> int:
        if self.constraints:
            return self.constraints[0].bound.rank
        return fallback

    def find_point(self, lex_rank: Optional[int] = None) -> Optional[Point]:
        k = lex_rank or self._lex_rank()
        sol = linarith.solve(self.raw(), self.rs.rank, k)
        return tuple(sol) if sol is not None else None

    def is_empty(self, lex_rank: Optional[int] = None) -> bool:
        return self.find_point(lex_rank) is None

    def intersect(self, other: "WeylPolyhedron") -> "WeylPolyhedron":
        return WeylPolyhedron(self.rs, self.constraints + other.constraints)

    # -- transforms --

    def transform(self, m: AffineMap) -> "WeylPolyhedron":
        """Image of the polyhedron under an affine Weyl map."""
        inv = m.inverse()
        out = []
        for c in self.constraints:
            new_root = self.rs.root_after(c.root, inv.windex)
            shift = eval_root(c.root, inv.translation)
            out.append(make_constraint(self.rs, new_root, c.rel, c.bound - shift))
        return WeylPolyhedron(self.rs, out)

    # -- normal form --

    def normalize(self) -> Optional["WeylPolyhedron"]:
        """Remove redundant constraints; None if the set is empty.

        Same-root bounds are merged first, then constraints implied by the
        remaining ones are dropped in canonical order.  The result is
        memoized on the instance.
        """
        if self._norm is not False:
            return self._norm
        result = self._normalize_impl()
        self._norm = result
        return result

    def _normalize_impl(self) -> Optional["WeylPolyhedron"]:
        by_root: Dict[IntVec, Dict[str, LexScalar]] = {}
        for c in self.constraints:
            slot = by_root.setdefault(c.root, {})
            if c.rel == GE:
                if GE not in slot or c.bound > slot[GE]:
                    slot[GE] = c.bound
            elif c.rel == LE:
                if LE not in slot or c.bound < slot[LE]:
                    slot[LE] = c.bound
            else:
                if EQUAL in slot and slot[EQUAL] != c.bound:
                    return None
                slot[EQUAL] = c.bound

        merged: List[Constraint] = []
        for root in sorted(by_root):
            slot = by_root[root]
            if EQUAL in slot:
                eq = slot[EQUAL]
                if GE in slot and slot[GE] > eq:
                    return None
                if LE in slot and slot[LE] < eq:
                    return None
                merged.append(Constraint(root, EQUAL, eq))
                continue
            lo, hi = slot.get(GE), slot.get(LE)
            if lo is not None and hi is not None:
                if lo > hi:
                    return None
                if lo == hi:
                    merged.append(Constraint(root, EQUAL, lo))
                    continue
            if lo is not None:
                merged.append(Constraint(root, GE, lo))
            if hi is not None:
                merged.append(Constraint(root, LE, hi))

        k = self._lex_rank()
        # Two inequalities on non-proportional roots never imply each other,
        # so merged sets of at most two pure inequalities are already
        # irredundant and (being a cone-like intersection) nonempty.
        if len(merged) <= 2 and all(c.rel != EQUAL for c in merged):
            return WeylPolyhedron(self.rs, merged)

        if linarith.solve([l for c in merged for l in WeylPolyhedron(self.rs, [c]).raw()], self.rs.rank, k) is None:
            return None

        kept = list(merged)
        for c in sorted(merged, key=Constraint.key):
            rest = [r for r in kept if r is not c]
            if not rest and len(kept) == 1:
                continue
            rest_raw = [l for r in rest for l in WeylPolyhedron(self.rs, [r]).raw()]
            if self._implied(rest_raw, c, k):
                kept = rest
        result = WeylPolyhedron(self.rs, kept)
        if result.is_empty(k):
            return None
        return result

    def _implied(self, rest_raw: List[Lin], c: Constraint, k: int) -> bool:
        coeffs = tuple(Fraction(v) for v in c.root)
        if c.rel == GE:
            negs = [[Lin(coeffs, RAW_LT, c.bound)]]
        elif c.rel == LE:
            negs = [[Lin(tuple(-v for v in coeffs), RAW_LT, -c.bound)]]
        else:
            negs = [
                [Lin(coeffs, RAW_LT, c.bound)],
                [Lin(tuple(-v for v in coeffs), RAW_LT, -c.bound)],
            ]
        return all(
            not linarith.feasible(rest_raw + neg, self.rs.rank, k) for neg in negs
        )

    # -- shape classification --

    def half_apartment_descriptor(self) -> Optional[Constraint]:
        """The single inequality if this is a half-apartment, else None."""
        norm = self.normalize()
        if norm is None or len(norm.constraints) != 1:
            return None
        c = norm.constraints[0]
        return c if c.rel in (GE, LE) else None

    def wall_of(self, c: Constraint) -> "WeylPolyhedron":
        return WeylPolyhedron(self.rs, [Constraint(c.root, EQUAL, c.bound)])

    def single_point(self, lex_rank: Optional[int] = None) -> Optional[Point]:
        """The unique point of the polyhedron, or None."""
        k = lex_rank or self._lex_rank()
        norm = self.normalize()
        if norm is None:
            return None
        n = self.rs.rank
        if all(c.rel == EQUAL for c in norm.constraints):
            # pure equality system: unique solution iff full rank
            sol = linarith.solve(norm.raw(), n, k)
            if sol is None:
                return None
            rows = [tuple(Fraction(v) for v in c.root) for c in norm.constraints]
            if _rational_rank(rows, n) < n:
                return None
            return tuple(sol)
        p = self.find_point(k)
        if p is None:
            return None
        raw = self.raw()
        for i in range(n):
            coeffs = tuple(Fraction(int(i == j)) for j in range(n))
            for probe in (
                Lin(coeffs, RAW_LT, p[i]),
                Lin(tuple(-v for v in coeffs), RAW_LT, -p[i]),
            ):
                if linarith.feasible(raw + [probe], n, k):
                    return None
        return p

    def as_chamber(self) -> Optional[Tuple[Point, int]]:
        """Recognize the polyhedron as a full Weyl chamber (base, direction)."""
        norm = self.normalize()
        if norm is None:
            return None
        cons = norm.constraints
        n = self.rs.rank
        if len(cons) != n or any(c.rel == EQUAL for c in cons):
            return None
        have = {(c.root, c.rel): c.bound for c in cons}
        if len(have) != n:
            return None
        for w in range(self.rs.order):
            wi = self.rs.inverse(w)
            signs = []
            keys = []
            ok = True
            for i in range(n):
                func = self.rs.root_after(
                    tuple(int(i == j) for j in range(n)), wi
                )
                sign, pos = self.rs.split_sign(func)
                key = (pos, GE if sign > 0 else LE)
                if key not in have:
                    ok = False
                    break
                signs.append(sign)
                keys.append(key)
            if not ok or len(set(keys)) != n:
                continue
            k = self._lex_rank()
            ycoords = [have[keys[i]] * signs[i] for i in range(n)]
            base = AffineMap(self.rs, w, pt_zero(n, k)).linear(tuple(ycoords))
            return base, w
        return None


def _rational_rank(rows: List[tuple], n: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] * inv
                for c in range(n):
                    m[r][c] -= f * m[rank][c]
        rank += 1
    return rank


def half_apartment(rs: RootSystem, root: Sequence[int], rel: str, bound: LexScalar) -> WeylPolyhedron:
    return WeylPolyhedron(rs, [make_constraint(rs, root, rel, bound)])


def single_point_region(rs: RootSystem, p: Point) -> WeylPolyhedron:
    n = rs.rank
    cons = [
        Constraint(tuple(int(i == j) for j in range(n)), EQUAL, p[i])
        for i in range(n)
    ]
    return WeylPolyhedron(rs, cons)


def full_space(rs: RootSystem) -> WeylPolyhedron:
    return WeylPolyhedron(rs, [])


# -- Weyl simplices: base + w . (face of the fundamental chamber) --

@dataclass(frozen=True)
class WeylSimplex:
    """Face of a Weyl chamber: the full index set is a chamber, the empty
    set the base point, and n-1 indices a panel."""

    base: Point
    windex: int
    face: FrozenSet[int]

    def is_chamber(self, rs: RootSystem) -> bool:
        return len(self.face) == rs.rank

    def generators(self, rs: RootSystem) -> List[IntVec]:
        return [rs.coweight_image(self.windex, i) for i in sorted(self.face)]

    def as_polyhedron(self, rs: RootSystem) -> WeylPolyhedron:
        wi = rs.inverse(self.windex)
        n = rs.rank
        cons = []
        for i in range(n):
            func = rs.root_after(tuple(int(i == j) for j in range(n)), wi)
            bound = eval_root(func, self.base)
            rel = GE if i in self.face else EQUAL
            cons.append(make_constraint(rs, func, rel, bound))
        return WeylPolyhedron(rs, cons)

    def transform(self, rs: RootSystem, m: AffineMap) -> "WeylSimplex":
        return WeylSimplex(m.apply(self.base), rs.multiply(m.windex, self.windex), self.face)

    def canonical(self, rs: RootSystem) -> "WeylSimplex":
        """Least Weyl index generating the same cone at the same base."""
        gens = frozenset(self.generators(rs))
        size = len(self.face)
        for w in range(rs.order):
            hits = [i for i in range(rs.rank) if rs.coweight_image(w, i) in gens]
            if len(hits) == size:
                return WeylSimplex(self.base, w, frozenset(hits))
        raise AssertionError("canonical form must exist")


def chamber_simplex(rs: RootSystem, base: Point, windex: int) -> WeylSimplex:
    return WeylSimplex(base, windex, frozenset(range(rs.rank)))


def germ_inside(rs: RootSystem, region: WeylPolyhedron, s: WeylSimplex) -> bool:
    """Whether some initial piece of the simplex lies in the region.

    Exact test: the base must lie in the region, and every cone generator
    must weakly satisfy each constraint active at the base.
    """
    if not region.contains(s.base):
        raise ValueError("simplex base lies outside the region")
    gens = s.generators(rs)
    for c in region.constraints:
        val = eval_root(c.root, s.base)
        if c.rel == GE:
            if val == c.bound and any(_eval_int(c.root, g) < 0 for g in gens):
                return False
        elif c.rel == LE:
            if val == c.bound and any(_eval_int(c.root, g) > 0 for g in gens):
                return False
        else:
            if any(_eval_int(c.root, g) != 0 for g in gens):
                return False
    return True


def germ_inside_or_outside(rs: RootSystem, region: WeylPolyhedron, s: WeylSimplex) -> bool:
    """germ_inside without the base-membership precondition (False outside)."""
    if not region.contains(s.base):
        return False
    return germ_inside(rs, region, s)


def chamber_fits_direction(rs: RootSystem, region: WeylPolyhedron, windex: int) -> bool:
    """Whether a full chamber cone of this direction can sit inside the region."""
    gens = [rs.coweight_image(windex, i) for i in range(rs.rank)]
    for c in region.constraints:
        vals = [_eval_int(c.root, g) for g in gens]
        if c.rel == GE and any(v < 0 for v in vals):
            return False
        if c.rel == LE and any(v > 0 for v in vals):
            return False
        if c.rel == EQUAL and any(v != 0 for v in vals):
            return False
    return True


def chamber_in_region(rs: RootSystem, region: WeylPolyhedron, base: Point, windex: int) -> bool:
    return chamber_fits_direction(rs, region, windex) and region.contains(base)


def subchamber_base_in_region(
    rs: RootSystem, region: WeylPolyhedron, base: Point, windex: int
) -> Optional[Point]:
    """A base b' with chamber(b', w) inside the region and b' - base in the
    chamber cone; None when no sub-chamber of the direction fits."""
    if not chamber_fits_direction(rs, region, windex):
        return None
    k = lex_rank_of(base)
    n = rs.rank
    cons = region.raw()
    wi = rs.inverse(windex)
    for i in range(n):
        func = rs.root_after(tuple(int(i == j) for j in range(n)), wi)
        coeffs = tuple(Fraction(v) for v in func)
        cons.append(Lin(tuple(-v for v in coeffs), RAW_LE, -eval_root(func, base)))
    sol = linarith.solve(cons, n, k)
    return tuple(sol) if sol is not None else None


def segment(rs: RootSystem, x: Point, y: Point) -> WeylPolyhedron:
    """seg(x, y) = {z : alpha(z) between alpha(x) and alpha(y) for all
    positive alpha}; for the package metric this is exactly the set of
    points z with d(x, z) + d(z, y) = d(x, y)."""
    cons = []
    for root in rs.positive_roots:
        a, b = eval_root(root, x), eval_root(root, y)
        lo, hi = (a, b) if a <= b else (b, a)
        if lo == hi:
            cons.append(Constraint(root, EQUAL, lo))
        else:
            cons.append(Constraint(root, GE, lo))
            cons.append(Constraint(root, LE, hi))
    return WeylPolyhedron(rs, cons)


def parallel_same_direction(rs: RootSystem, s1: WeylSimplex, s2: WeylSimplex) -> Point:
    """Base of a common sub-chamber of two equal-direction chambers:
    componentwise max in the chamber's own cone coordinates."""
    if s1.windex != s2.windex:
        raise ValueError("chambers must share their direction")
    if not (s1.is_chamber(rs) and s2.is_chamber(rs)):
        raise ValueError("both simplices must be full chambers")
    wi = rs.inverse(s1.windex)
    k = lex_rank_of(s1.base)
    inv = AffineMap(rs, wi, pt_zero(rs.rank, k))
    u1, u2 = inv.linear(s1.base), inv.linear(s2.base)
    m = tuple(max(a, b) for a, b in zip(u1, u2))
    fwd = AffineMap(rs, s1.windex, pt_zero(rs.rank, k))
    return fwd.linear(m)


# -- centered balls (raw constraints; the ball is not a root polyhedron) --

def ball_lins(rs: RootSystem, lam: LexScalar) -> List[Lin]:
    """d(o, x) <= lam as 2^m linear constraints (m = number of positive roots)."""
    out = []
    for signs in itertools.product((1, -1), repeat=len(rs.positive_roots)):
        coeffs = [Fraction(0)] * rs.rank
        for s, root in zip(signs, rs.positive_roots):
            for j, c in enumerate(root):
                coeffs[j] += s * c
        out.append(Lin(tuple(coeffs), RAW_LE, lam))
    return out


def polyhedron_meets_ball(rs: RootSystem, region: WeylPolyhedron, lam: LexScalar) -> bool:
    return linarith.feasible(region.raw() + ball_lins(rs, lam), rs.rank, lam.rank)


def chamber_interior_host(rs: RootSystem, base: Point, windex: int) -> Optional[int]:
    """Direction of an open vector chamber strictly containing the chamber
    (base, windex), decided by integer cone tests; None if there is none."""
    n = rs.rank
    gens = [rs.coweight_image(windex, i) for i in range(n)]
    for w in range(rs.order):
        wi = rs.inverse(w)
        ok = True
        for i in range(n):
            func = rs.root_after(tuple(int(i == j) for j in range(n)), wi)
            if any(_eval_int(func, g) < 0 for g in gens):
                ok = False
                break
            if eval_root(func, base).sign() <= 0:
                ok = False
                break
        if ok:
            return w
    return None


def region_inside_open_vector_chamber(
    rs: RootSystem, region: WeylPolyhedron, windex: int, lex_rank: int
) -> bool:
    """Whether the region sits strictly inside the open cone w(C_f)."""
    wi = rs.inverse(windex)
    n = rs.rank
    raw = region.raw()
    for i in range(n):
        func = rs.root_after(tuple(int(i == j) for j in range(n)), wi)
        coeffs = tuple(Fraction(v) for v in func)
        # violated if some region point has alpha_i(w^-1 x) <= 0
        if linarith.feasible(
            raw + [Lin(coeffs, RAW_LE, LexScalar.zero(lex_rank))], n, lex_rank
        ):
            return False
    return True
