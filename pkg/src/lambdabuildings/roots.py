"""Crystallographic root systems and their finite Weyl groups, exactly.

Coordinate convention used throughout the package: a point x of the model
apartment is stored by its simple-root evaluations, x_i = alpha_i(x), i.e.
in the basis of fundamental coweights.  With ``cartan[i][j]`` equal to the
pairing of simple root alpha_j with the coroot of alpha_i, row i of the
Cartan matrix gives the coordinates of the coroot of alpha_i, and every
Weyl element acts by an integer matrix in these coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

IntVec = Tuple[int, ...]
IntMat = Tuple[IntVec, ...]

#: Named types accepted in atlas files.
NAMED_TYPES: Dict[str, Tuple[Tuple[int, ...], ...]] = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -2), (-1, 2)),
    "G2": ((2, -1), (-3, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
}

_ENUMERATION_CAP = 20000


class InvalidCartanError(ValueError):
    """The given matrix is not a Cartan matrix of finite type.

    ``submatrix`` holds the indices of an offending principal submatrix when
    positive definiteness fails.
    """

    def __init__(self, message: str, submatrix: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.submatrix = tuple(submatrix) if submatrix is not None else None


def _mat_mul(a: IntMat, b: IntMat) -> IntMat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n))
        for i in range(n)
    )


def _identity(n: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _det(m: List[List[Fraction]]) -> Fraction:
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _validate_cartan(cartan: IntMat) -> None:
    n = len(cartan)
    if any(len(row) != n for row in cartan):
        raise InvalidCartanError("Cartan matrix must be square")
    for i in range(n):
        if cartan[i][i] != 2:
            raise InvalidCartanError(f"diagonal entry ({i},{i}) must be 2", (i,))
        for j in range(n):
            if i == j:
                continue
            if cartan[i][j] > 0:
                raise InvalidCartanError(
                    f"off-diagonal entry ({i},{j}) must be non-positive", (i, j)
                )
            if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                raise InvalidCartanError(
                    f"zero pattern must be symmetric at ({i},{j})", (i, j)
                )

    # Symmetrize: d_i * C[i][j] must equal d_j * C[j][i] for positive d.
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or cartan[i][j] == 0:
                    continue
                val = d[i] * Fraction(cartan[i][j], cartan[j][i])
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    raise InvalidCartanError(
                        "matrix is not symmetrizable", (i, j)
                    )
    sym = [[d[i] * cartan[i][j] for j in range(n)] for i in range(n)]

    # Finite type iff the symmetrization is positive definite: check leading
    # principal minors exactly.
    for m in range(1, n + 1):
        minor = _det([row[:m] for row in sym[:m]])
        if minor <= 0:
            raise InvalidCartanError(
                f"not of finite type: leading minor of order {m} is {minor}",
                tuple(range(m)),
            )


class RootSystem:
    """Positive roots, coroots and the full spherical Weyl group.

    Weyl elements are enumerated breadth-first from the identity, appending
    simple reflections in ascending generator order; element indices are
    stable and used in serialized atlas files.
    """

    def __init__(self, cartan: Sequence[Sequence[int]], name: Optional[str] = None):
        cartan = tuple(tuple(int(v) for v in row) for row in cartan)
        _validate_cartan(cartan)
        self.cartan: IntMat = cartan
        self.rank: int = len(cartan)
        self.name = name
        self._build_roots()
        self._build_weyl()

    # -- roots --

    def _build_roots(self) -> None:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        # Coroot of a simple root reads off a row of the Cartan matrix; the
        # reflection action propagates coroots along with roots.
        coroot = {simple[i]: tuple(self.cartan[i]) for i in range(n)}
        order: List[IntVec] = []
        seen = set()
        queue = list(simple)
        refl = [self._simple_reflection_matrix(i) for i in range(n)]
        while queue:
            root = queue.pop(0)
            if root in seen:
                continue
            seen.add(root)
            if all(c >= 0 for c in root):
                order.append(root)
            for i in range(n):
                pairing = sum(self.cartan[i][j] * root[j] for j in range(n))
                new = tuple(
                    root[j] - (pairing if j == i else 0) for j in range(n)
                )
                if new not in coroot:
                    m = refl[i]
                    cr = coroot[root]
                    coroot[new] = tuple(
                        sum(m[a][b] * cr[b] for b in range(n)) for a in range(n)
                    )
                    queue.append(new)
            if len(seen) > _ENUMERATION_CAP:
                raise InvalidCartanError("root closure exceeds enumeration cap")
        self.positive_roots: Tuple[IntVec, ...] = tuple(order)
        self.coroots: Tuple[IntVec, ...] = tuple(coroot[r] for r in order)
        self._root_index = {r: i for i, r in enumerate(order)}

    def _simple_reflection_matrix(self, i: int) -> IntMat:
        # x_j -> x_j - x_i * cartan[i][j] in simple-root-evaluation coords.
        n = self.rank
        return tuple(
            tuple(
                (1 if j == k else 0) - (self.cartan[i][j] if k == i else 0)
                for k in range(n)
            )
            for j in range(n)
        )

    # -- Weyl group --

    def _build_weyl(self) -> None:
        n = self.rank
        gens = [self._simple_reflection_matrix(i) for i in range(n)]
        ident = _identity(n)
        matrices: List[IntMat] = [ident]
        words: List[Tuple[int, ...]] = [()]
        index: Dict[IntMat, int] = {ident: 0}
        head = 0
        while head < len(matrices):
            w = matrices[head]
            word = words[head]
            head += 1
            for i in range(n):
                m = _mat_mul(w, gens[i])
                if m not in index:
                    index[m] = len(matrices)
                    matrices.append(m)
                    words.append(word + (i,))
                    if len(matrices) > _ENUMERATION_CAP:
                        raise InvalidCartanError(
                            "Weyl group exceeds enumeration cap"
                        )
        self.weyl_matrices: Tuple[IntMat, ...] = tuple(matrices)
        self.words: Tuple[Tuple[int, ...], ...] = tuple(words)
        self.lengths: Tuple[int, ...] = tuple(len(w) for w in words)
        self._index = index
        self.order: int = len(matrices)

        longest = max(range(self.order), key=lambda i: self.lengths[i])
        self.longest_index: int = longest
        self.diameter: int = self.lengths[longest]
        if self.diameter != len(self.positive_roots):
            raise InvalidCartanError(
                "internal inconsistency: longest length != number of positive roots"
            )

        self._mult: Dict[Tuple[int, int], int] = {}
        self._inv: List[int] = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                self._mult[(a, b)] = index[
                    _mat_mul(self.weyl_matrices[a], self.weyl_matrices[b])
                ]
        for a in range(self.order):
            for b in range(self.order):
                if self._mult[(a, b)] == 0:
                    self._inv[a] = b
                    break

    # -- queries --

    def multiply(self, a: int, b: int) -> int:
        return self._mult[(a, b)]

    def inverse(self, a: int) -> int:
        return self._inv[a]

    def length(self, w: int) -> int:
        return self.lengths[w]

    def matrix(self, w: int) -> IntMat:
        return self.weyl_matrices[w]

    def coweight_image(self, w: int, i: int) -> IntVec:
        """Image of the i-th fundamental coweight under w: column i of w."""
        m = self.weyl_matrices[w]
        return tuple(m[j][i] for j in range(self.rank))

    def root_after(self, root: IntVec, w: int) -> IntVec:
        """The functional x -> root(w(x)) as a root coefficient vector."""
        m = self.weyl_matrices[w]
        n = self.rank
        return tuple(sum(root[j] * m[j][k] for j in range(n)) for k in range(n))

    def split_sign(self, vec: IntVec) -> Tuple[int, IntVec]:
        """Write an arbitrary root vector as (sign, positive root)."""
        if vec in self._root_index:
            return 1, vec
        neg = tuple(-c for c in vec)
        if neg in self._root_index:
            return -1, neg
        raise ValueError(f"{vec} is not a root")

    def is_root(self, vec: IntVec) -> bool:
        neg = tuple(-c for c in vec)
        return vec in self._root_index or neg in self._root_index

    def coroot_of(self, root: IntVec) -> IntVec:
        sign, pos = self.split_sign(tuple(root))
        cr = self.coroots[self._root_index[pos]]
        return cr if sign == 1 else tuple(-c for c in cr)

    def reflection_matrix(self, root: IntVec) -> IntMat:
        """Matrix of the reflection across the wall of ``root``."""
        n = self.rank
        sign, pos = self.split_sign(tuple(root))
        cr = self.coroots[self._root_index[pos]]
        return tuple(
            tuple((1 if j == k else 0) - pos[k] * cr[j] for k in range(n))
            for j in range(n)
        )

    def __repr__(self) -> str:
        label = self.name or f"rank-{self.rank}"
        return f"RootSystem({label}, {len(self.positive_roots)} positive roots, |W|={self.order})"


_CACHE: Dict[IntMat, RootSystem] = {}


def build_root_system(cartan: Sequence[Sequence[int]], name: Optional[str] = None) -> RootSystem:
    """Build (and cache) the root system of a finite-type Cartan matrix."""
    key = tuple(tuple(int(v) for v in row) for row in cartan)
    if key not in _CACHE:
        _CACHE[key] = RootSystem(key, name=name)
    return _CACHE[key]


def from_name(name: str) -> RootSystem:
    if name not in NAMED_TYPES:
        raise InvalidCartanError(
            f"unknown type {name!r}; known: {sorted(NAMED_TYPES)}"
        )
    return build_root_system(NAMED_TYPES[name], name=name)
