"""Maps from an A-type root lattice onto a smaller root lattice.

A ``ReductionMap`` is a linear map ``f`` on ambient coordinates sending the
lattice of ``A_{N-1}`` onto the lattice of a target system; a
``WeylEmbedding`` sends target group elements to permutations of ``[N]``.
The checks here verify, by exhaustion over small ranks, the properties that
let the target's zeta vector be computed from A-type data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import ParameterError
from .rootsys import Root, RootSystem, build_root_system
from .weights import as_weighting, weight_classes, weight_table
from .weyl import (ExtendedElementD, compose_signed, element_from_signed_permutation,
                   element_from_word, enumerate_extended_D, enumerate_weyl, group_order,
                   signed_permutation)
from .zeta import zeta_from_sets, zeta_of

G2_AMBIENT_SIMPLE = ((1, -1, 0), (-1, 2, -1))
G2_F_COLUMNS = ((1, 0, -1), (0, 1, -1), (1, -1, 0), (0, 0, 0),
                (-1, 1, 0), (0, -1, 1), (-1, 0, 1))
# s_alpha -> (12)(35)(67), s_beta -> (23)(56), as images of 1..7
G2_GENERATORS = ((2, 1, 5, 4, 3, 7, 6), (1, 3, 2, 4, 6, 5, 7))

EXHAUSTIVE_LIMIT = 10 ** 4
SAMPLE_SIZE = 10 ** 3


def _target_labels(family: str, n: int) -> tuple[int, ...]:
    middle = (0,) if family == "B" else ()
    return tuple(range(1, n + 1)) + middle + tuple(-i for i in range(n, 0, -1))


def _f_matrix(family: str, n: int) -> np.ndarray:
    if family == "G":
        return np.array(G2_F_COLUMNS, dtype=np.int64).T
    labels = _target_labels(family, n)
    mat = np.zeros((n, len(labels)), dtype=np.int64)
    for p, label in enumerate(labels):
        if label:
            mat[abs(label) - 1, p] = 1 if label > 0 else -1
    return mat


@dataclass(frozen=True, eq=False)
class ReductionMap:
    family: str
    source: RootSystem
    target: RootSystem
    matrix: np.ndarray
    target_ambient: tuple[tuple[int, ...], ...]

    @cached_property
    def _target_basis(self) -> np.ndarray:
        return np.array([self.target_ambient[i] for i in self.target.simple_indices], dtype=np.int64).T

    @cached_property
    def _target_index(self) -> dict[tuple[int, ...], int]:
        return {v: i for i, v in enumerate(self.target_ambient)}

    def apply(self, vec) -> tuple[int, ...]:
        return tuple(int(x) for x in self.matrix @ np.asarray(vec, dtype=np.int64))

    def target_coords(self, vec) -> tuple[int, ...]:
        """Delta-coordinates of an ambient target lattice point."""
        basis = self._target_basis
        v = np.asarray(vec, dtype=np.int64)
        sol = np.linalg.lstsq(basis.astype(float), v.astype(float), rcond=None)[0]
        coords = np.rint(sol).astype(np.int64)
        if not np.array_equal(basis @ coords, v):
            raise ParameterError(f"{tuple(vec)} is not in the target root lattice")
        return tuple(int(c) for c in coords)

    def target_vector(self, coords) -> tuple[int, ...]:
        return tuple(int(x) for x in self._target_basis @ np.asarray(coords, dtype=np.int64))

    @cached_property
    def images(self) -> tuple[int | None, ...]:
        """Target root index of ``f(r)`` for each source root, or ``None``."""
        idx = self._target_index
        return tuple(idx.get(self.apply(v)) for v in self.source.ambient)

    @cached_property
    def fiber_table(self) -> tuple[tuple[int, ...], ...]:
        table = [[] for _ in self.target.roots]
        for r, s in enumerate(self.images):
            if s is not None:
                table[s].append(r)
        return tuple(tuple(x) for x in table)

    @cached_property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.fiber_table)

    @property
    def constant_multiplicity(self) -> int | None:
        values = set(self.multiplicities)
        return values.pop() if len(values) == 1 else None

    @cached_property
    def simple_images(self) -> tuple[tuple[int, ...], ...]:
        """Target Delta-coordinates of ``f(delta)`` for each source simple root."""
        src = self.source
        return tuple(self.target_coords(self.apply(src.ambient[i])) for i in src.simple_indices)

    def pullback(self, rho) -> tuple[int, ...]:
        """``rho o f`` on the source simple roots; entries may fall outside {0, 2}."""
        rho = as_weighting(self.target, rho)
        return tuple(sum(c * v for c, v in zip(coords, rho.values)) for coords in self.simple_images)


@lru_cache(maxsize=1 << 16)
def _embed(source: RootSystem, perm: tuple[int, ...]):
    return element_from_signed_permutation(source, perm)


@dataclass(frozen=True, eq=False)
class WeylEmbedding:
    """Sends target group elements to permutations of the source labels ``1..N``."""

    source: RootSystem
    target: RootSystem
    family: str

    def permutation(self, w) -> tuple[int, ...]:
        if self.family == "G":
            size = len(G2_GENERATORS[0])
            perm = tuple(range(1, size + 1))
            for letter in reversed(w.word):
                perm = compose_signed(G2_GENERATORS[letter], perm)
            return perm
        n = self.target.rank
        labels = _target_labels(self.family, n)
        position = {label: p for p, label in enumerate(labels, start=1)}
        sig = signed_permutation(self.target, w)

        def image(label):
            if label == 0:
                return 0
            y = sig[abs(label) - 1]
            return y if label > 0 else -y

        return tuple(position[image(label)] for label in labels)

    def __call__(self, w):
        return _embed(self.source, self.permutation(w))

    def homomorphic_on_generators(self) -> bool:
        """``phi(s_i s_j) = phi(s_i) phi(s_j)`` for every pair of generators."""
        rs = self.target
        for i in range(rs.rank):
            for j in range(rs.rank):
                lhs = self(element_from_word(rs, (i, j)))
                rhs = self(element_from_word(rs, (i,))) * self(element_from_word(rs, (j,)))
                if lhs != rhs:
                    return False
        return True


def build_reduction(family: str, n: int) -> tuple[ReductionMap, WeylEmbedding]:
    family = family.upper()
    if family in ("G", "G2"):
        if n != 2:
            raise ParameterError(f"the G2 map has rank 2, got {n}")
        target = build_root_system("G", 2)
        source = build_root_system("A", 6)
        basis = np.array(G2_AMBIENT_SIMPLE, dtype=np.int64).T
        amb = tuple(tuple(int(x) for x in basis @ np.array(r.coords)) for r in target.roots)
        family = "G"
    elif family in ("B", "C", "D"):
        target = build_root_system(family, n)
        size = 2 * n + 1 if family == "B" else 2 * n
        source = build_root_system("A", size - 1)
        amb = target.ambient
    else:
        raise ParameterError(f"no reduction map for family {family!r}")
    fmap = ReductionMap(family, source, target, _f_matrix(family, n), amb)
    return fmap, WeylEmbedding(source, target, family)


def fiber(fmap: ReductionMap, s: Root) -> frozenset[Root]:
    rs = fmap.target
    if not isinstance(s, Root) or s.index >= len(rs.roots) or rs.roots[s.index] != s:
        raise ParameterError(f"{s!r} is not a root of {rs.name}")
    return frozenset(fmap.source.roots[r] for r in fmap.fiber_table[s.index])


def target_group(rs: RootSystem):
    """W' (the group phi is defined on): W extended by the diagram flip in type D."""
    if rs.family == "D":
        return enumerate_extended_D(rs)
    return enumerate_weyl(rs)


def target_group_order(rs: RootSystem) -> int:
    return group_order(rs) * (2 if rs.family == "D" else 1)


def sample_target_group(rs: RootSystem, size: int = SAMPLE_SIZE, seed: int = 0) -> list:
    """Deterministic sample of ``size`` elements from random words."""
    rng = random.Random(seed)
    depth = 2 * len(rs.positive_indices)
    out = []
    for _ in range(size):
        w = element_from_word(rs, tuple(rng.randrange(rs.rank) for _ in range(depth)))
        if rs.family == "D" and rng.random() < 0.5:
            w = ExtendedElementD(w, True)
        out.append(w)
    return out


def group_elements(rs: RootSystem, sample_seed: int = 0) -> list:
    if target_group_order(rs) <= EXHAUSTIVE_LIMIT:
        return list(target_group(rs))
    return sample_target_group(rs, SAMPLE_SIZE, sample_seed)


@dataclass(frozen=True)
class ReductionProperties:
    positive: bool
    root_surjective: bool
    compatible: bool


def is_positive_map(fmap: ReductionMap) -> bool:
    src = fmap.source
    return all(all(src.is_positive[r] for r in fmap.fiber_table[s])
               for s in fmap.target.positive_indices)


def is_root_surjective(fmap: ReductionMap) -> bool:
    return all(fmap.fiber_table)


def is_compatible(fmap: ReductionMap, emb: WeylEmbedding, elements=None) -> bool:
    """``f^{-1}(w s) = phi(w) f^{-1}(s)`` for every target root and every element."""
    elements = group_elements(fmap.target) if elements is None else elements
    fibers = [frozenset(x) for x in fmap.fiber_table]
    for w in elements:
        act = emb(w).action
        for s, fib in enumerate(fibers):
            if frozenset(act[r] for r in fib) != fibers[w.action[s]]:
                return False
    return True


def check_reduction_properties(fmap: ReductionMap, emb: WeylEmbedding, elements=None) -> ReductionProperties:
    return ReductionProperties(is_positive_map(fmap), is_root_surjective(fmap),
                               is_compatible(fmap, emb, elements))


def abs_fiber_identity(fmap: ReductionMap) -> bool:
    """``f^{-1}(|s|) = |f^{-1}(s)|`` for every target root."""
    tgt, src = fmap.target, fmap.source
    for s in range(len(tgt.roots)):
        abs_s = s if tgt.is_positive[s] else tgt.negation[s]
        lhs = set(fmap.fiber_table[abs_s])
        rhs = {r if src.is_positive[r] else src.negation[r] for r in fmap.fiber_table[s]}
        if lhs != rhs:
            return False
    return True


def pulled_back_weight_classes(fmap: ReductionMap, rho) -> bool:
    """``f^{-1}(V_k(S))`` lies in ``V_k(R)`` for the pullback weighting, every k."""
    tgt_wt = weight_table(fmap.target, as_weighting(fmap.target, rho).values)
    src_wt = weight_table(fmap.source, fmap.pullback(rho))
    return all(src_wt[r] == tgt_wt[s] for s, fib in enumerate(fmap.fiber_table) for r in fib)


def u_sets(fmap: ReductionMap, rho) -> dict[int, frozenset[int]]:
    """``U_k = V_k(R) minus f^{-1}(V_k(S))`` for k = 0, 2."""
    tgt_classes = weight_classes(fmap.target, rho)
    src_wt = weight_table(fmap.source, fmap.pullback(rho))
    out = {}
    for k in (0, 2):
        pulled = {r for s in tgt_classes.V(k) for r in fmap.fiber_table[s]}
        out[k] = frozenset(r for r, wt in enumerate(src_wt) if wt == k and r not in pulled)
    return out


def coefficient_expansion_holds(fmap: ReductionMap, points) -> bool:
    """``f(x)_gamma = sum_delta f(delta)_gamma x_delta`` for the given source Delta-coordinates."""
    src = fmap.source
    for x in points:
        lhs = fmap.target_coords(fmap.apply(src.to_ambient(x)))
        rhs = tuple(sum(img[g] * xd for img, xd in zip(fmap.simple_images, x))
                    for g in range(fmap.target.rank))
        if lhs != rhs:
            return False
    return True


def fiber_weighted_zeta(fmap: ReductionMap, emb: WeylEmbedding, rho, w) -> tuple[Fraction, ...]:
    """Fiber-weighted sum of ``|phi(w) r|`` pushed through ``f``, in target ambient coordinates."""
    tgt, src = fmap.target, fmap.source
    classes = weight_classes(tgt, rho)
    act = emb(w).action
    mult = fmap.multiplicities
    acc = [Fraction(0)] * src.rank + [Fraction(0)]
    for sign, k in ((1, 2), (-1, 0)):
        for s in classes.V(k):
            ws = w.action[s]
            m = mult[ws if tgt.is_positive[ws] else tgt.negation[ws]]
            for r in fmap.fiber_table[s]:
                img = act[r]
                if not src.is_positive[img]:
                    img = src.negation[img]
                for p, c in enumerate(src.ambient[img]):
                    if c:
                        acc[p] += Fraction(sign * c, m)
    return tuple(sum((Fraction(int(fmap.matrix[q, p])) * acc[p] for p in range(len(acc))), Fraction(0))
                 for q in range(fmap.matrix.shape[0]))


def coefficient_identity_holds(fmap: ReductionMap, emb: WeylEmbedding, rho, w) -> bool:
    m = fmap.constant_multiplicity
    if m is None:
        raise ParameterError("the coefficient identity needs constant fiber multiplicities")
    src = fmap.source
    pulled = fmap.pullback(rho)
    src_wt = weight_table(src, pulled)
    v2 = [r for r, x in enumerate(src_wt) if x == 2]
    v0 = [r for r, x in enumerate(src_wt) if x == 0]
    phi_w = emb(w)
    zeta_r = zeta_from_sets(src, v2, v0, phi_w.action)
    u = u_sets(fmap, rho)
    corr = zeta_from_sets(src, sorted(u[2]), sorted(u[0]), phi_w.action)
    zeta_s = zeta_of(fmap.target, rho, w)
    for g in range(fmap.target.rank):
        total = sum(img[g] * (zr - cr) for img, zr, cr in zip(fmap.simple_images, zeta_r, corr))
        if Fraction(total, m) != zeta_s[g]:
            return False
    return True


def score_identity(fmap: ReductionMap, emb: WeylEmbedding, rho, w) -> bool:
    """The fiber-weighted identity for ``zeta(w)``; plus the coefficient form when
    multiplicities are constant."""
    zeta_s = zeta_of(fmap.target, rho, w)
    if tuple(Fraction(x) for x in fmap.target_vector(zeta_s.coords)) != fiber_weighted_zeta(fmap, emb, rho, w):
        return False
    if fmap.constant_multiplicity is not None:
        return coefficient_identity_holds(fmap, emb, rho, w)
    return True
