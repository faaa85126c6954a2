"""Root systems of the simple types, stored in simple-root coordinates.

Classical types (A-D) are built from their ambient ``e_i`` presentation;
exceptional types (E, F, G) are generated from their Gram matrices by closing
the simple roots under the simple reflections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np

from .errors import ParameterError, UnsupportedOperationError

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")
CLASSICAL = ("A", "B", "C", "D")

ROOT_COUNTS = {"G": {2: 12}, "F": {4: 48}, "E": {6: 72, 7: 126, 8: 240}}


@dataclass(frozen=True)
class Root:
    coords: tuple[int, ...]
    index: int

    @property
    def positive(self) -> bool:
        return all(c >= 0 for c in self.coords)

    @property
    def height(self) -> int:
        return sum(self.coords)


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    roots: tuple[Root, ...]
    simple_indices: tuple[int, ...]
    cartan: tuple[tuple[int, ...], ...]
    ambient: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    def __len__(self) -> int:
        return len(self.roots)

    @cached_property
    def index_of(self) -> dict[tuple[int, ...], int]:
        return {r.coords: r.index for r in self.roots}

    @cached_property
    def negation(self) -> tuple[int, ...]:
        idx = self.index_of
        return tuple(idx[tuple(-c for c in r.coords)] for r in self.roots)

    @cached_property
    def is_positive(self) -> tuple[bool, ...]:
        return tuple(r.positive for r in self.roots)

    @cached_property
    def positive_indices(self) -> tuple[int, ...]:
        return tuple(r.index for r in self.roots if r.positive)

    @cached_property
    def reflection_table(self) -> tuple[tuple[int, ...], ...]:
        """``reflection_table[i][r]`` is the index of ``s_i(r)``."""
        idx = self.index_of
        return tuple(
            tuple(idx[_reflect_coords(self.cartan, i, r.coords)] for r in self.roots)
            for i in range(self.rank)
        )

    @cached_property
    def ambient_index(self) -> dict[tuple[int, ...], int]:
        if self.ambient is None:
            raise UnsupportedOperationError(f"{self.name} has no ambient presentation")
        return {v: i for i, v in enumerate(self.ambient)}

    def lookup(self, coords) -> Root:
        try:
            return self.roots[self.index_of[tuple(int(c) for c in coords)]]
        except KeyError:
            raise ParameterError(f"{tuple(coords)} is not a root of {self.name}") from None

    def simple_root(self, i: int) -> Root:
        return self.roots[self.simple_indices[i]]

    def highest_root(self) -> Root:
        return self.roots[-1]

    @cached_property
    def simple_ambient(self) -> np.ndarray:
        """Ambient vectors of the simple roots as columns."""
        if self.ambient is None:
            raise UnsupportedOperationError(f"{self.name} has no ambient presentation")
        return np.array([self.ambient[i] for i in self.simple_indices], dtype=np.int64).T

    def to_ambient(self, coords) -> tuple[int, ...]:
        return tuple(int(x) for x in self.simple_ambient @ np.asarray(coords, dtype=np.int64))

    def from_ambient(self, vec) -> tuple[int, ...]:
        """Delta-coordinates of a root-lattice point given in the ambient basis."""
        basis = self.simple_ambient
        v = np.asarray(vec, dtype=np.int64)
        sol, *_ = np.linalg.lstsq(basis.astype(float), v.astype(float), rcond=None)
        coords = np.rint(sol).astype(np.int64)
        if not np.array_equal(basis @ coords, v):
            raise ParameterError(f"{tuple(vec)} is not in the root lattice of {self.name}")
        return tuple(int(c) for c in coords)


def _reflect_coords(cartan, i, coords):
    # s_i(x) = x - <x, alpha_i^vee> alpha_i; only coordinate i moves
    pairing = sum(a * x for a, x in zip(cartan[i], coords))
    out = list(coords)
    out[i] -= pairing
    return tuple(out)


def _cartan_from_gram(gram) -> tuple[tuple[int, ...], ...]:
    n = len(gram)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            num = 2 * gram[i][j]
            if num % gram[i][i]:
                raise ParameterError("Gram matrix does not give an integral Cartan matrix")
            row.append(num // gram[i][i])
        rows.append(tuple(row))
    return tuple(rows)


def _classical_simple_ambient(family: str, n: int) -> list[tuple[int, ...]]:
    dim = n + 1 if family == "A" else n

    def e(*pairs):
        v = [0] * dim
        for pos, c in pairs:
            v[pos] += c
        return tuple(v)

    simple = [e((i, 1), (i + 1, -1)) for i in range(dim - 1)]
    if family == "B":
        simple.append(e((n - 1, 1)))
    elif family == "C":
        simple.append(e((n - 1, 2)))
    elif family == "D":
        simple.append(e((n - 2, 1), (n - 1, 1)))
    return simple


def _classical_ambient_roots(family: str, n: int) -> list[tuple[int, ...]]:
    dim = n + 1 if family == "A" else n
    out = []

    def e(*pairs):
        v = [0] * dim
        for pos, c in pairs:
            v[pos] += c
        return tuple(v)

    if family == "A":
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    out.append(e((i, 1), (j, -1)))
        return out
    for i, j in combinations(range(n), 2):
        for si in (1, -1):
            for sj in (1, -1):
                out.append(e((i, si), (j, sj)))
    for i in range(n):
        if family == "B":
            out += [e((i, 1)), e((i, -1))]
        elif family == "C":
            out += [e((i, 2)), e((i, -2))]
    return out


def _exceptional_gram(family: str, rank: int):
    if family == "G":
        # alpha_1 short, alpha_2 long
        return [[2, -3], [-3, 6]]
    if family == "F":
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short (lengths doubled)
        return [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    # E_n in Bourbaki labelling: chain 1-3-4-5-...-n, node 2 attached to 4
    edges = [(1, 3), (3, 4), (2, 4)] + [(k, k + 1) for k in range(4, rank)]
    gram = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for a, b in edges:
        gram[a - 1][b - 1] = gram[b - 1][a - 1] = -1
    return gram


def _closure(cartan) -> set[tuple[int, ...]]:
    rank = len(cartan)
    simple = [tuple(1 if k == i else 0 for k in range(rank)) for i in range(rank)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for x in frontier:
            for i in range(rank):
                y = _reflect_coords(cartan, i, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _check_rank(family: str, rank: int) -> None:
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise ParameterError(f"rank must be an integer, got {rank!r}")
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }[family]
    if not ok:
        raise ParameterError(f"no simple root system {family}{rank}")


def _ordered(coords_set) -> list[tuple[int, ...]]:
    return sorted(coords_set, key=lambda c: (sum(c), c))


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    """Build the root system of type ``family`` and rank ``rank``.

    Roots are indexed once, sorted by height and then lexicographically by
    their simple-root coordinates, so index ``0`` is the lowest root and the
    last index is the highest root.
    """
    family = family.upper() if isinstance(family, str) else family
    _check_rank(family, rank)

    ambient = None
    if family in CLASSICAL:
        simple_amb = _classical_simple_ambient(family, rank)
        basis = np.array(simple_amb, dtype=np.int64).T
        gram = (basis.T @ basis).tolist()
        cartan = _cartan_from_gram(gram)
        amb_roots = _classical_ambient_roots(family, rank)
        sol = np.linalg.lstsq(basis.astype(float), np.array(amb_roots, dtype=float).T, rcond=None)[0]
        coords_arr = np.rint(sol).astype(np.int64).T
        if not np.array_equal(basis @ coords_arr.T, np.array(amb_roots, dtype=np.int64).T):
            raise AssertionError("ambient roots not in the span of the simple roots")
        by_coords = {tuple(int(x) for x in c): v for c, v in zip(coords_arr, amb_roots)}
        ordered = _ordered(by_coords)
        ambient = tuple(by_coords[c] for c in ordered)
    else:
        cartan = _cartan_from_gram(_exceptional_gram(family, rank))
        found = _closure(cartan)
        found |= {tuple(-x for x in c) for c in found}
        ordered = _ordered(found)
        expected = ROOT_COUNTS[family][rank]
        if len(ordered) != expected:
            raise AssertionError(f"{family}{rank}: closure gave {len(ordered)} roots, expected {expected}")

    roots = tuple(Root(c, i) for i, c in enumerate(ordered))
    index = {r.coords: r.index for r in roots}
    simple = tuple(index[tuple(1 if k == i else 0 for k in range(rank))] for i in range(rank))
    return RootSystem(family, rank, roots, simple, cartan, ambient)


def expected_root_count(family: str, rank: int) -> int:
    _check_rank(family, rank)
    if family == "A":
        return rank * (rank + 1)
    if family in ("B", "C"):
        return 2 * rank * rank
    if family == "D":
        return 2 * rank * (rank - 1)
    return ROOT_COUNTS[family][rank]


def abs_root(rs: RootSystem, r: Root) -> Root:
    """Return whichever of ``r`` and ``-r`` is positive."""
    if not isinstance(r, Root) or r.index >= len(rs.roots) or rs.roots[r.index] != r:
        raise ParameterError(f"{r!r} is not a root of {rs.name}")
    if r.positive:
        return r
    return rs.roots[rs.negation[r.index]]


def classical_ambient(rs: RootSystem) -> tuple[tuple[int, ...], ...]:
    """Per-root vectors in the ``e_i`` basis, indexed like ``rs.roots``."""
    if rs.family not in CLASSICAL or rs.ambient is None:
        raise UnsupportedOperationError(f"{rs.name} has no classical ambient presentation")
    return rs.ambient
