"""Block and occupancy formulas for the classical types.

An occupancy ``a`` counts, for each lifted block ``H^A_j``, how many labels a
signed permutation sends into the first ``k`` positions, where ``k`` is fixed
by the simple root ``gamma``.  The coordinate ``zeta(w)_gamma`` depends only
on ``a``; the formulas below evaluate it, and ``occupancy_realize`` goes back
from an occupancy to a group element.

All values are computed on integers scaled by 2 or 4 and checked for exact
division.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product

from .errors import DiscrepancyError, ParameterError, UnsupportedOperationError
from .report import Counterexample, Verdict
from .rootsys import CLASSICAL, RootSystem
from .weights import (BlockPartition, as_weighting, block_partition,
                      is_distinguished_cardinality, is_distinguished_closed_form)
from .weyl import (ExtendedElementD, WeylElement, element_from_signed_permutation,
                   element_from_word, signed_permutation, twist_index)
from .zeta import zeta_of

SHORT, LONG = "short", "long"
GENERIC, TAIL = "generic", "tail"


@dataclass(frozen=True)
class PairVector:
    u: tuple[int, int]

    @classmethod
    def of(cls, a: int, size: int) -> "PairVector":
        if not 0 <= a <= size:
            raise ParameterError(f"occupancy {a} outside [0, {size}]")
        return cls((a, size - a))

    def __sub__(self, other: "PairVector") -> tuple[int, int]:
        return (self.u[0] - other.u[0], self.u[1] - other.u[1])


ZERO_PAIR = PairVector((0, 0))


@dataclass(frozen=True)
class Occupancy:
    a: tuple[int, ...]
    blocks: BlockPartition

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        sizes = self.blocks.lifted
        if len(a) != len(sizes):
            raise ParameterError(f"occupancy {a} has {len(a)} entries, expected {len(sizes)}")
        for x, size in zip(a, sizes):
            if not 0 <= x <= size:
                raise ParameterError(f"occupancy {a} exceeds block sizes {sizes}")

    @property
    def total(self) -> int:
        return sum(self.a)

    def pairs(self) -> list[PairVector]:
        return [PairVector.of(x, size) for x, size in zip(self.a, self.blocks.lifted)]

    def b(self, j: int) -> int:
        """Mirror occupancy ``b_j = a_{m^A - j}``."""
        return self.a[self.blocks.m_lifted - j]


def quad_form_term(d) -> int:
    """``d^T [[0,1],[1,0]] d = 2 d_1 d_2``."""
    d1, d2 = d
    return 2 * d1 * d2


def quad_sum(occ: Occupancy) -> int:
    """``sum_j q(u_j - u_{j-1})`` over ``j = 0..m^A+1`` with zero pairs at both ends."""
    chain = [ZERO_PAIR] + occ.pairs() + [ZERO_PAIR]
    return sum(quad_form_term(chain[j] - chain[j - 1]) for j in range(1, len(chain)))


def _half(x: int) -> int:
    if x % 2:
        raise DiscrepancyError(f"expected an even value, got {x}")
    return x // 2


def _require(occ: Occupancy, *cases: str) -> None:
    if occ.blocks.case not in cases:
        raise ParameterError(f"blocks of case {occ.blocks.case} passed to a {'/'.join(cases)} formula")


def a_type_zeta(blocks: BlockPartition, occ) -> int:
    occ = _coerce(blocks, occ)
    _require(occ, "A")
    a, N = occ.a, blocks.lifted
    edges = sum(a[j - 1] * (N[j] - a[j]) + a[j] * (N[j - 1] - a[j - 1]) for j in range(1, len(a)))
    inner = sum(x * (size - x) for x, size in zip(a, N))
    direct = edges - 2 * inner
    quad = -_half(quad_sum(occ))
    if direct != quad:
        raise DiscrepancyError(f"the two A-type forms disagree on {a}: {direct} != {quad}")
    return quad


def b_type_zeta(blocks: BlockPartition, occ) -> int:
    occ = _coerce(blocks, occ)
    _require(occ, "B")
    return -_half(quad_sum(occ)) + 2 * occ.a[blocks.m]


def c_type_zeta(blocks: BlockPartition, occ, gamma_kind: str) -> int:
    occ = _coerce(blocks, occ)
    _require(occ, "C2", "C0")
    q, a, m = quad_sum(occ), occ.a, blocks.m
    if gamma_kind not in (SHORT, LONG):
        raise ParameterError(f"gamma_kind must be short or long, got {gamma_kind!r}")
    if blocks.case == "C2":
        short = -_half(q) + a[m - 1] + a[m]
        return short if gamma_kind == SHORT else _half(short)
    if gamma_kind == SHORT:
        return -_half(q) - 2 * a[m]
    return _half(_half(-q - 4 * a[m]))


def d_type_zeta(blocks: BlockPartition, occ, gamma_kind: str) -> int:
    occ = _coerce(blocks, occ)
    _require(occ, "D22", "D00", "D02")
    q, a, m = quad_sum(occ), occ.a, blocks.m
    if gamma_kind not in (GENERIC, TAIL):
        raise ParameterError(f"gamma_kind must be generic or tail, got {gamma_kind!r}")
    if blocks.case == "D22":
        extra = 2 * a[m - 1]
    elif blocks.case == "D00":
        extra = 2 * a[m]
    else:
        extra = -(a[m - 1] + a[m])
    # generic: -q/2 + extra; tail: (-q/2 + extra) / 2
    doubled = -q + 2 * extra
    return _half(doubled) if gamma_kind == GENERIC else _half(_half(doubled))


def _coerce(blocks: BlockPartition, occ) -> Occupancy:
    if isinstance(occ, Occupancy):
        if occ.blocks != blocks:
            raise ParameterError("occupancy belongs to a different block partition")
        return occ
    return Occupancy(tuple(occ), blocks)


def gamma_kind(blocks: BlockPartition, k: int) -> str | None:
    """Kind of the simple root selected by ``k`` labels on the left."""
    n = blocks.n
    if blocks.family == "C":
        return LONG if k == n else SHORT
    if blocks.family == "D":
        if k == n - 1:
            return None
        return TAIL if k == n else GENERIC
    return SHORT


def occupancy_value(blocks: BlockPartition, occ) -> int:
    occ = _coerce(blocks, occ)
    fam = blocks.family
    if fam == "A":
        return a_type_zeta(blocks, occ)
    if fam == "B":
        return b_type_zeta(blocks, occ)
    kind = gamma_kind(blocks, occ.total)
    if kind is None:
        raise ParameterError(f"occupancy total {occ.total} selects no supported root")
    if fam == "C":
        return c_type_zeta(blocks, occ, kind)
    return d_type_zeta(blocks, occ, kind)


def occupancy_feasible(blocks: BlockPartition, occ) -> bool:
    try:
        occ = _coerce(blocks, occ)
    except ParameterError:
        return False
    a, N, top = occ.a, blocks.lifted, blocks.m_lifted
    total = sum(a)
    if blocks.family == "A":
        return 1 <= total <= blocks.n - 1
    if not any(a):
        return False
    if any(a[i] + a[top - i] > N[i] for i in range(top + 1)):
        return False
    if blocks.family == "D" and total == blocks.n - 1:
        return False
    return True


def feasible_occupancies(blocks: BlockPartition):
    for a in product(*(range(size + 1) for size in blocks.lifted)):
        if occupancy_feasible(blocks, a):
            yield Occupancy(a, blocks)


# ---------------------------------------------------------------------------
# Occupancies from group elements and back


def _gamma_to_k(blocks: BlockPartition, gamma: int) -> int:
    n = blocks.n
    if blocks.family == "D":
        if gamma == n - 2:
            raise ParameterError("the closed forms do not cover the coordinate gamma_{n-1}")
        if gamma == n - 1:
            return n
    return gamma + 1


def _lifted_sigma(blocks: BlockPartition, sig) -> dict[int, int]:
    out = {0: 0} if blocks.family == "B" else {}
    for x, y in enumerate(sig, start=1):
        out[x] = y
        if blocks.family != "A":
            out[-x] = -y
    return out


def induced_occupancy(blocks: BlockPartition, sig, gamma: int) -> Occupancy:
    """Occupancy of the signed permutation ``sig`` at the (0-based) simple root ``gamma``.

    ``blocks`` must be the partition of the weighting actually used; for a
    twisted D weighting conjugate the element first (see ``closedform_value``).
    """
    k = _gamma_to_k(blocks, gamma)
    sigma = _lifted_sigma(blocks, sig)
    position = {label: p for p, label in enumerate(blocks.labels, start=1)}
    a = tuple(sum(position[sigma[label]] <= k for label in block) for block in blocks.lifted_labels)
    return Occupancy(a, blocks)


def _conjugate_by_twist(rs: RootSystem, w):
    if isinstance(w, ExtendedElementD):
        return ExtendedElementD(_conjugate_by_twist(rs, w.base), w.twisted)
    return element_from_word(rs, tuple(twist_index(rs, i) for i in w.word))


def closedform_value(rs: RootSystem, rho, w, gamma: int) -> int | None:
    """Closed-form value of ``zeta(w)_gamma``, or ``None`` when the formulas do not cover it."""
    bp = block_partition(rs, rho)
    if bp.twisted:
        # zeta_rho(theta x theta) = theta zeta_{theta rho}(x)
        w = _conjugate_by_twist(rs, w)
        gamma = twist_index(rs, gamma)
    if bp.family == "D" and gamma == bp.n - 2:
        return None
    occ = induced_occupancy(bp, signed_permutation(rs, w), gamma)
    return occupancy_value(bp, occ)


def occupancy_realize(blocks: BlockPartition, occ):
    """A signed permutation and 0-based simple root inducing ``occ``.

    Returns ``(sig, gamma)``; convert with ``element_from_signed_permutation``
    (type D may give a twisted element of W').  Pass one sends the first
    ``a_i`` unmapped labels of each block, block by block, to the leftmost
    free positions; pass two sends the remaining labels left to right to the
    leftmost free positions.  Negatives follow their labels.
    """
    occ = _coerce(blocks, occ)
    if not occupancy_feasible(blocks, occ):
        raise ParameterError(f"occupancy {occ.a} is not feasible")
    signed = blocks.family != "A"
    targets = list(blocks.labels)
    sigma: dict[int, int] = {}
    used: set[int] = set()
    if blocks.family == "B":
        sigma[0] = 0
        used.add(0)

    def assign(label):
        target = next(t for t in targets if t not in used)
        sigma[label] = target
        used.add(target)
        if signed:
            sigma[-label] = -target
            used.add(-target)

    for count, block in zip(occ.a, blocks.lifted_labels):
        free = [label for label in block if label not in sigma]
        for label in free[:count]:
            assign(label)
    for label in blocks.labels:
        if label not in sigma:
            assign(label)
    sig = tuple(sigma[x] for x in range(1, blocks.n + 1))
    k = occ.total
    if blocks.family == "D" and k == blocks.n:
        gamma = blocks.n - 1
    else:
        gamma = k - 1
    check = induced_occupancy(blocks, sig, gamma)
    if check.a != occ.a:
        raise DiscrepancyError(f"realization of {occ.a} induces {check.a}")
    return sig, gamma


def realize_counterexample(rs: RootSystem, rho, occ: Occupancy):
    """A group element of W (not W') and a root for a given occupancy of ``rho``'s blocks."""
    bp = occ.blocks
    sig, gamma = occupancy_realize(bp, occ)
    w = element_from_signed_permutation(rs, sig)
    if isinstance(w, ExtendedElementD):
        # zeta(theta y) = theta zeta(y)
        w, gamma = w.base, twist_index(rs, gamma)
    if bp.twisted:
        w, gamma = _conjugate_by_twist(rs, w), twist_index(rs, gamma)
    return w, gamma


# ---------------------------------------------------------------------------
# Refuting occupancies


def _ones(length: int, lo: int, hi: int) -> tuple[int, ...]:
    return tuple(1 if lo <= i <= hi else 0 for i in range(length))


def _two_case_candidate(blocks: BlockPartition, last: int):
    """Descent and jump constructions over lifted blocks ``0..last``."""
    N, L = blocks.lifted, len(blocks.lifted)
    top = blocks.m_lifted

    def at(i):
        return N[i] if i >= 0 else 0

    drops = [s for s in range(last + 1) if at(s) <= at(s - 1) - 1]
    if drops:
        return _ones(L, 0, drops[0] - 1)
    jumps = [s for s in range(last + 1) if at(s) >= at(s - 1) + 2]
    if jumps:
        s = jumps[-1]
        return _ones(L, s, top - s)
    return None


def refuting_occupancy(blocks: BlockPartition) -> Occupancy | None:
    """The constructive witness for a non-distinguished weighting, or ``None``."""
    N, L, m = blocks.lifted, len(blocks.lifted), blocks.m
    case = blocks.case
    if case == "A":
        candidates = [_ones(L, 0, i - 1) for i in range(1, m + 1)]
        candidates += [_ones(L, i, m) for i in range(0, m + 1)]
    elif case in ("B", "D00"):
        candidates = [_two_case_candidate(blocks, m)]
    elif case == "D22":
        candidates = [_two_case_candidate(blocks, m - 1)]
    elif case == "C2":
        candidates = [_two_case_candidate(blocks, m - 1)]
    elif case == "C0":
        s = min(s for s in range(m + 1) if all(N[j] >= 2 for j in range(s, m + 1)))
        candidates = [_ones(L, s, 2 * m - s)]
    else:  # D02
        s = min(s for s in range(m) if all(N[j] >= 2 for j in range(s, m)))
        candidates = [_ones(L, s, m - 1)]
    for a in candidates:
        if a is not None and occupancy_feasible(blocks, a) and occupancy_value(blocks, a) <= 0:
            return Occupancy(a, blocks)
    return None


# ---------------------------------------------------------------------------
# Verdict from occupancies alone


def closedform_verdict(rs: RootSystem, rho) -> Verdict:
    """Decide positivity by scanning feasible occupancies instead of group elements.

    For type A every splitting is an occupancy with ``1 <= sum(a) <= n-1``;
    the other types use the feasibility conditions for signed permutations.
    The reported counterexample is the first non-positive occupancy in
    product order, realized as an element of W.
    """
    if rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"no closed forms for {rs.name}")
    start = time.perf_counter()
    rho = as_weighting(rs, rho)
    bp = block_partition(rs, rho)
    scanned = 0
    found = None
    for occ in feasible_occupancies(bp):
        scanned += 1
        value = occupancy_value(bp, occ)
        if value <= 0:
            found = (occ, value)
            break
    ce = None
    if found is not None:
        occ, value = found
        w, gamma = realize_counterexample(rs, rho, occ)
        z = zeta_of(rs, rho, w)
        if z[gamma] != value:
            raise DiscrepancyError(f"closed form {value} but zeta gives {z[gamma]} at {w!r}")
        ce = Counterexample(w.word, gamma, z)
    return Verdict(rho, is_distinguished_cardinality(rs, rho), is_distinguished_closed_form(rs, rho),
                   ce, scanned, (time.perf_counter() - start) * 1000)
