"""Weightings of the simple roots and the data derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .errors import ParameterError, UnsupportedOperationError
from .rootsys import CLASSICAL, Root, RootSystem


@dataclass(frozen=True)
class WeightFunction:
    """A weighting rho of the ordered simple roots with values in {0, 2}."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v not in (0, 2) for v in vals):
            raise ParameterError(f"weights must be 0 or 2, got {self.values!r}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_string(cls, text: str) -> "WeightFunction":
        text = text.strip()
        if not text or any(ch not in "02" for ch in text):
            raise ParameterError(f"weighting must be a string over {{0,2}}, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def __str__(self) -> str:
        return "".join(str(v) for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_regular(self) -> bool:
        return all(v == 2 for v in self.values)


def as_weighting(rs: RootSystem, rho) -> WeightFunction:
    if isinstance(rho, str):
        rho = WeightFunction.from_string(rho)
    elif not isinstance(rho, WeightFunction):
        rho = WeightFunction(tuple(rho))
    if len(rho) != rs.rank:
        raise ParameterError(f"weighting {rho} has length {len(rho)}, {rs.name} has rank {rs.rank}")
    return rho


@dataclass(frozen=True)
class WeightClasses:
    by_weight: dict[int, frozenset[int]]

    def V(self, k: int) -> frozenset[int]:
        return self.by_weight.get(k, frozenset())

    @cached_property
    def sorted_V2(self) -> tuple[int, ...]:
        return tuple(sorted(self.V(2)))

    @cached_property
    def sorted_V0(self) -> tuple[int, ...]:
        return tuple(sorted(self.V(0)))


def all_weightings(rs: RootSystem) -> list[WeightFunction]:
    """All 2**rank weightings in binary counting order, first simple root most significant."""
    return [WeightFunction(vals) for vals in product((0, 2), repeat=rs.rank)]


def root_weight(rs: RootSystem, rho, r: Root) -> int:
    rho = as_weighting(rs, rho)
    return sum(c * v for c, v in zip(r.coords, rho.values))


def weight_table(rs: RootSystem, values) -> tuple[int, ...]:
    """Weight of every root under the linear extension of ``values`` (any integers)."""
    return tuple(sum(c * v for c, v in zip(r.coords, values)) for r in rs.roots)


def weight_classes(rs: RootSystem, rho) -> WeightClasses:
    rho = as_weighting(rs, rho)
    groups: dict[int, set[int]] = {}
    for idx, wt in enumerate(weight_table(rs, rho.values)):
        groups.setdefault(wt, set()).add(idx)
    return WeightClasses({k: frozenset(v) for k, v in groups.items()})


def is_distinguished_cardinality(rs: RootSystem, rho) -> bool:
    """The Bala-Carter test ``#V_2 == #V_0 + rank``."""
    classes = weight_classes(rs, rho)
    return len(classes.V(2)) == len(classes.V(0)) + rs.rank


def outer_twist_weighting(rho: WeightFunction) -> WeightFunction:
    """Swap the weights of the two tail simple roots of a D-type diagram."""
    vals = list(rho.values)
    vals[-2], vals[-1] = vals[-1], vals[-2]
    return WeightFunction(tuple(vals))


def normalize_d_weighting(rho: WeightFunction) -> tuple[WeightFunction, bool]:
    if rho.values[-1] < rho.values[-2]:
        return outer_twist_weighting(rho), True
    return rho, False


@dataclass(frozen=True)
class BlockPartition:
    """Block structure of ``[n]`` cut at the weight-2 simple roots.

    ``sizes`` are the block sizes ``N_0..N_m``; ``lifted`` are the block sizes
    of the induced partition of the ambient A-type index set, and
    ``lifted_labels`` lists the labels of each lifted block in position order
    (signed labels ``1..n, [0,] -n..-1`` for B, C, D).
    """

    family: str
    n: int
    weighting: WeightFunction
    m: int
    sizes: tuple[int, ...]
    lifted: tuple[int, ...]
    case: str
    twisted: bool
    labels: tuple[int, ...]
    lifted_labels: tuple[tuple[int, ...], ...]

    @property
    def m_lifted(self) -> int:
        return len(self.lifted) - 1

    @property
    def middle(self) -> int:
        """Index of the central lifted block (B, C0, D00, D22)."""
        return self.m - 1 if self.case == "D22" else self.m


def _labels(family: str, n: int) -> tuple[int, ...]:
    if family == "A":
        return tuple(range(1, n + 1))
    middle = (0,) if family == "B" else ()
    return tuple(range(1, n + 1)) + middle + tuple(-i for i in range(n, 0, -1))


def _chunk(seq, sizes):
    out, start = [], 0
    for s in sizes:
        out.append(tuple(seq[start:start + s]))
        start += s
    return tuple(out)


def block_partition(rs: RootSystem, rho) -> BlockPartition:
    """Blocks ``H_0..H_m`` and their lifted sizes for a classical weighting.

    D-type weightings with ``rho(gamma_{n-1}) > rho(gamma_n)`` are first
    replaced by their outer twist; ``twisted`` records this.
    """
    if rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"block partitions are defined for classical types, not {rs.name}")
    rho = as_weighting(rs, rho)
    twisted = False
    if rs.family == "D":
        rho, twisted = normalize_d_weighting(rho)
    vals = rho.values
    n = rs.rank + 1 if rs.family == "A" else rs.rank
    cuts = [i + 1 for i, v in enumerate(vals) if v == 2]
    sizes, start = [], 1
    for c in cuts:
        sizes.append(c - start + 1)
        start = c + 1
    sizes.append(n - start + 1)
    m = len(cuts)
    N = tuple(sizes)
    head = N[:m]
    if rs.family == "A":
        case, lifted = "A", N
    elif rs.family == "B":
        case, lifted = "B", head + (2 * N[m] + 1,) + head[::-1]
    elif rs.family == "C":
        if vals[-1] == 2:
            case, lifted = "C2", head + head[::-1]
        else:
            case, lifted = "C0", head + (2 * N[m],) + head[::-1]
    else:
        tail = (vals[-2], vals[-1])
        if tail == (2, 2):
            case, lifted = "D22", N[:m - 1] + (2 * N[m - 1],) + N[:m - 1][::-1]
        elif tail == (0, 0):
            case, lifted = "D00", head + (2 * N[m],) + head[::-1]
        else:
            case, lifted = "D02", head + head[::-1]
    labels = _labels(rs.family, n)
    if sum(lifted) != len(labels):
        raise AssertionError(f"lifted sizes {lifted} do not cover {len(labels)} labels")
    return BlockPartition(rs.family, n, rho, m, N, tuple(lifted),
                          case, twisted, labels, _chunk(labels, lifted))


def _steps_ok(N, upto) -> bool:
    return all(N[i - 1] <= N[i] <= N[i - 1] + 1 for i in range(1, upto + 1))


def is_distinguished_closed_form(rs: RootSystem, rho) -> bool:
    """Classify a classical weighting from its block sizes alone."""
    if rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"no closed-form classification for {rs.name}")
    bp = block_partition(rs, rho)
    N, m = bp.sizes, bp.m
    if bp.case == "A":
        return all(x == 1 for x in N)
    if bp.case == "B":
        prev = N[m - 1] if m >= 1 else 0
        want = (prev - 1) // 2 if prev % 2 else prev // 2
        return N[0] == 1 and _steps_ok(N, m - 1) and N[m] == want and m >= 1
    if bp.case in ("C2", "C0"):
        return bp.case == "C2" and N[0] == 1 and _steps_ok(N, m - 1)
    if bp.case == "D22":
        return N[0] == 1 and _steps_ok(N, m - 2) and N[m - 2] <= 2
    if bp.case == "D00":
        if m == 0:
            return False
        prev = N[m - 1]
        want = (prev + 1) // 2 if prev % 2 else prev // 2
        return N[0] == 1 and _steps_ok(N, m - 1) and N[m] == want
    return False
