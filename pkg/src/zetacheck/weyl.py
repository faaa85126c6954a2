"""Weyl group elements acting on root indices, and streaming enumeration.

Every element is identified with its canonical word: the lexicographically
least reduced word.  Its first letter is the smallest left descent, so
deleting the first letter of a canonical word gives another canonical word.
Enumeration walks the resulting tree depth first by prepending letters; a
node holds the root indices of ``w^{-1}(alpha_j)`` for every simple root,
which is enough to decide both length growth and canonicity in O(rank^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import ParameterError, UnsupportedOperationError
from .rootsys import CLASSICAL, Root, RootSystem


def reflect(rs: RootSystem, i: int, r: Root) -> Root:
    if not 0 <= i < rs.rank:
        raise ParameterError(f"generator {i} out of range for {rs.name}")
    return rs.roots[rs.reflection_table[i][r.index]]


def apply_word(rs: RootSystem, word, r: Root) -> Root:
    """Apply ``s_{w_1} ... s_{w_k}`` to ``r`` (rightmost letter acts first)."""
    table = rs.reflection_table
    idx = r.index
    for letter in reversed(tuple(word)):
        if not 0 <= letter < rs.rank:
            raise ParameterError(f"generator {letter} out of range for {rs.name}")
        idx = table[letter][idx]
    return rs.roots[idx]


def format_word(word) -> str:
    """Dot-separated 1-based generator indices; the identity is ``""``."""
    return ".".join(str(i + 1) for i in word)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        letters = tuple(int(tok) - 1 for tok in text.split("."))
    except ValueError:
        raise ParameterError(f"bad word {text!r}") from None
    if any(x < 0 for x in letters):
        raise ParameterError(f"bad word {text!r}")
    return letters


def _action_from_images(rs: RootSystem, images) -> tuple[int, ...]:
    cols = [rs.roots[i].coords for i in images]
    idx = rs.index_of
    out = []
    for r in rs.roots:
        img = [0] * rs.rank
        for x, col in zip(r.coords, cols):
            if x:
                for k in range(rs.rank):
                    img[k] += x * col[k]
        out.append(idx[tuple(img)])
    return tuple(out)


def _canonical_word(rs: RootSystem, images) -> tuple[int, ...]:
    table = rs.reflection_table
    pos = rs.is_positive
    simple = rs.simple_indices
    action = _action_from_images(rs, images)
    inverse = [0] * len(action)
    for src, dst in enumerate(action):
        inverse[dst] = src
    word = []
    while True:
        descent = next((j for j in range(rs.rank) if not pos[inverse[simple[j]]]), None)
        if descent is None:
            return tuple(word)
        word.append(descent)
        # (s_j x)^{-1} = x^{-1} s_j
        row = table[descent]
        inverse = [inverse[row[k]] for k in range(len(inverse))]


@dataclass(frozen=True, eq=False)
class WeylElement:
    """A Weyl group element, stored through the images of the simple roots."""

    rs: RootSystem
    word: tuple[int, ...]
    images: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    @cached_property
    def action(self) -> tuple[int, ...]:
        """Permutation of root indices: ``action[r]`` is the index of ``w(r)``."""
        return _action_from_images(self.rs, self.images)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """Columns are the simple-root coordinates of ``w(alpha_j)``."""
        return tuple(self.rs.roots[i].coords for i in self.images)

    def __call__(self, r: Root) -> Root:
        return self.rs.roots[self.action[r.index]]

    def __eq__(self, other):
        return isinstance(other, WeylElement) and other.rs is self.rs and other.images == self.images

    def __hash__(self):
        return hash((self.rs.name, self.images))

    def __repr__(self):
        return f"WeylElement({self.rs.name}, word={format_word(self.word)!r})"

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return element_from_word(self.rs, self.word + other.word)

    def inverse(self) -> "WeylElement":
        return element_from_word(self.rs, tuple(reversed(self.word)))


def identity(rs: RootSystem) -> WeylElement:
    return WeylElement(rs, (), tuple(rs.simple_indices))


def element_from_images(rs: RootSystem, images) -> WeylElement:
    images = tuple(images)
    return WeylElement(rs, _canonical_word(rs, images), images)


def element_from_word(rs: RootSystem, word) -> WeylElement:
    table = rs.reflection_table
    images = list(rs.simple_indices)
    for letter in reversed(tuple(word)):
        if not 0 <= letter < rs.rank:
            raise ParameterError(f"generator {letter} out of range for {rs.name}")
        images = [table[letter][k] for k in images]
    return element_from_images(rs, images)


@lru_cache(maxsize=None)
def step_tables(rs: RootSystem):
    """Lookup tables for the enumeration step.

    ``comb[c][r][q]`` is the index of ``root_r + c * root_q`` (or -1) for the
    multiples ``c`` that occur as negated off-diagonal Cartan entries.
    """
    idx = rs.index_of
    coords = [r.coords for r in rs.roots]
    needed = sorted({-a for row in rs.cartan for a in row if a < 0})
    comb = {}
    for c in needed:
        rows = []
        for x in coords:
            rows.append([idx.get(tuple(a + c * b for a, b in zip(x, y)), -1) for y in coords])
        comb[c] = rows
    return comb


def child_inverse(rs: RootSystem, inv, i: int, check_canonical: bool = True):
    """Inverse images for ``s_i w`` given those of ``w``.

    Returns ``None`` if ``s_i w`` is shorter than ``w`` or, when
    ``check_canonical`` is set, if prepending ``i`` does not give the
    canonical word of ``s_i w``.
    """
    pos = rs.is_positive
    vi = inv[i]
    if not pos[vi]:
        return None
    comb = step_tables(rs)
    row = rs.cartan[i]
    out = list(inv)
    for j in range(rs.rank):
        a = row[j]
        if j == i:
            out[j] = rs.negation[vi]
        elif a:
            out[j] = comb[-a][inv[j]][vi]
        if check_canonical and j < i and not pos[out[j]]:
            return None
    return out


def group_order(rs: RootSystem) -> int:
    n = rs.rank
    if rs.family == "A":
        return math.factorial(n + 1)
    if rs.family in ("B", "C"):
        return 2 ** n * math.factorial(n)
    if rs.family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {("G", 2): 12, ("F", 4): 1152, ("E", 6): 51840,
            ("E", 7): 2903040, ("E", 8): 696729600}[(rs.family, n)]


def longest_length(rs: RootSystem) -> int:
    return len(rs.positive_indices)


def _walk(rs: RootSystem, word):
    """Inverse images and forward images of the element with canonical ``word``."""
    inv = list(rs.simple_indices)
    fwd = list(rs.simple_indices)
    table = rs.reflection_table
    for k, letter in enumerate(reversed(tuple(word))):
        nxt = child_inverse(rs, inv, letter)
        if nxt is None:
            raise ParameterError(f"{format_word(word)!r} is not a canonical reduced word")
        inv = nxt
        fwd = [table[letter][x] for x in fwd]
    return inv, fwd


def enumerate_weyl(rs: RootSystem, subtree=(), max_length: int | None = None):
    """Yield every element of W exactly once, depth first.

    ``subtree`` restricts the stream to the elements whose canonical word ends
    with the given canonical word (the descendants of that node).
    ``max_length`` truncates the walk.
    """
    subtree = tuple(subtree)
    inv, fwd = _walk(rs, subtree)
    table = rs.reflection_table
    rank = rs.rank
    stack = [(subtree, inv, fwd)]
    while stack:
        word, inv, fwd = stack.pop()
        yield WeylElement(rs, word, tuple(fwd))
        if max_length is not None and len(word) >= max_length:
            continue
        for i in range(rank - 1, -1, -1):
            child = child_inverse(rs, inv, i)
            if child is not None:
                stack.append(((i,) + word, child, [table[i][x] for x in fwd]))


def nodes_at_depth(rs: RootSystem, depth: int) -> list[tuple[int, ...]]:
    """Canonical words of length ``depth`` in enumeration order."""
    out = []
    stack = [((), list(rs.simple_indices))]
    while stack:
        word, inv = stack.pop()
        if len(word) == depth:
            out.append(word)
            continue
        for i in range(rs.rank - 1, -1, -1):
            child = child_inverse(rs, inv, i)
            if child is not None:
                stack.append(((i,) + word, child))
    return out


# ---------------------------------------------------------------------------
# D-type diagram twist and the extended group W'


def twist_permutation(rs: RootSystem) -> tuple[int, ...]:
    """Root-index permutation of the diagram flip swapping the two tail nodes."""
    if rs.family != "D":
        raise UnsupportedOperationError(f"the outer twist is defined for type D, not {rs.name}")
    idx = rs.index_of
    out = []
    for r in rs.roots:
        c = list(r.coords)
        c[-2], c[-1] = c[-1], c[-2]
        out.append(idx[tuple(c)])
    return tuple(out)


def twist_index(rs: RootSystem, gamma: int) -> int:
    """Image of a simple-root index under the diagram flip."""
    n = rs.rank
    if gamma == n - 1:
        return n - 2
    if gamma == n - 2:
        return n - 1
    return gamma


@dataclass(frozen=True, eq=False)
class ExtendedElementD:
    """An element of W' = W x <theta>; ``twisted`` means ``theta`` is applied after ``base``."""

    base: WeylElement
    twisted: bool

    @property
    def rs(self) -> RootSystem:
        return self.base.rs

    @cached_property
    def images(self) -> tuple[int, ...]:
        if not self.twisted:
            return self.base.images
        theta = twist_permutation(self.rs)
        return tuple(theta[i] for i in self.base.images)

    @cached_property
    def action(self) -> tuple[int, ...]:
        if not self.twisted:
            return self.base.action
        theta = twist_permutation(self.rs)
        return tuple(theta[i] for i in self.base.action)

    @cached_property
    def matrix(self):
        return tuple(self.rs.roots[i].coords for i in self.images)

    def __call__(self, r: Root) -> Root:
        return self.rs.roots[self.action[r.index]]

    def __eq__(self, other):
        return (isinstance(other, ExtendedElementD) and other.twisted == self.twisted
                and other.base == self.base)

    def __hash__(self):
        return hash((self.base, self.twisted))

    def __repr__(self):
        return f"ExtendedElementD({format_word(self.base.word)!r}, twisted={self.twisted})"


def outer_twist(rs: RootSystem, w) -> ExtendedElementD:
    """Compose ``w`` with the sign flip of ``e_n``."""
    if rs.family != "D":
        raise UnsupportedOperationError(f"the outer twist is defined for type D, not {rs.name}")
    if isinstance(w, ExtendedElementD):
        return ExtendedElementD(w.base, not w.twisted)
    return ExtendedElementD(w, True)


def enumerate_extended_D(rs: RootSystem):
    if rs.family != "D":
        raise UnsupportedOperationError(f"W' is defined for type D, not {rs.name}")
    for w in enumerate_weyl(rs):
        yield ExtendedElementD(w, False)
        yield ExtendedElementD(w, True)


# ---------------------------------------------------------------------------
# Signed-permutation view of classical Weyl groups
#
# A signed permutation of [n] is a tuple ``sig`` with ``sig[x-1] = +-y``
# meaning ``e_x -> +-e_y``.  For type A it is a plain permutation of [n+1].


def _generator_signed_perm(rs: RootSystem, i: int) -> tuple[int, ...]:
    n = rs.rank + 1 if rs.family == "A" else rs.rank
    sig = list(range(1, n + 1))
    if rs.family == "A" or i < rs.rank - 1:
        sig[i], sig[i + 1] = sig[i + 1], sig[i]
    elif rs.family in ("B", "C"):
        sig[n - 1] = -n
    else:
        sig[n - 2], sig[n - 1] = -n, -(n - 1)
    return tuple(sig)


def compose_signed(sigma, tau) -> tuple[int, ...]:
    """``(sigma o tau)(x) = sigma(tau(x))``."""
    out = []
    for t in tau:
        s = sigma[abs(t) - 1]
        out.append(s if t > 0 else -s)
    return tuple(out)


def signed_permutation(rs: RootSystem, w) -> tuple[int, ...]:
    if rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"no signed-permutation view for {rs.name}")
    twisted = isinstance(w, ExtendedElementD) and w.twisted
    base = w.base if isinstance(w, ExtendedElementD) else w
    n = rs.rank + 1 if rs.family == "A" else rs.rank
    sig = tuple(range(1, n + 1))
    for letter in reversed(base.word):
        sig = compose_signed(_generator_signed_perm(rs, letter), sig)
    if twisted:
        flip = tuple(range(1, n)) + (-n,)
        sig = compose_signed(flip, sig)
    return sig


def _apply_signed_ambient(sig, vec) -> tuple[int, ...]:
    out = [0] * len(vec)
    for x, c in enumerate(vec):
        if c:
            y = sig[x]
            out[abs(y) - 1] += c if y > 0 else -c
    return tuple(out)


def element_from_signed_permutation(rs: RootSystem, sig):
    """Weyl element (or, in type D with an odd number of sign changes, a
    twisted element of W') acting on the ambient basis as ``sig``."""
    if rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"no signed-permutation view for {rs.name}")
    sig = tuple(int(s) for s in sig)
    n = rs.rank + 1 if rs.family == "A" else rs.rank
    if sorted(abs(s) for s in sig) != list(range(1, n + 1)):
        raise ParameterError(f"{sig} is not a signed permutation of [{n}]")
    if rs.family == "A" and any(s < 0 for s in sig):
        raise ParameterError("type A elements are unsigned permutations")
    twisted = rs.family == "D" and sum(s < 0 for s in sig) % 2 == 1
    if twisted:
        flip = tuple(range(1, n)) + (-n,)
        sig = compose_signed(flip, sig)
    amb = rs.ambient_index
    images = []
    for k in rs.simple_indices:
        img = _apply_signed_ambient(sig, rs.ambient[k])
        if img not in amb:
            raise ParameterError(f"{sig} does not preserve the roots of {rs.name}")
        images.append(amb[img])
    base = element_from_images(rs, images)
    return ExtendedElementD(base, True) if twisted else base
