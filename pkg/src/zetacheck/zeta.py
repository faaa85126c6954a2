"""The score vector zeta(w) in simple-root coordinates.

``zeta(w) = sum_{v in V_2} |w v| - sum_{v in V_0} |w v|``.  The literal
evaluation gathers through the action permutation; the incremental form used
by the enumeration rests on

    zeta(s_i w) = s_i zeta(w) + 2 g alpha_i,

where ``g = [h == 2] + [h == -2] - 2 [h == 0]`` and ``h`` is the weight of
``w^{-1}(alpha_i)``: only the pair ``+-w^{-1}(alpha_i)`` changes sign.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .rootsys import RootSystem
from .weights import as_weighting, weight_classes, weight_table
from .weyl import _walk, child_inverse


@dataclass(frozen=True)
class ZetaVector:
    coords: tuple[int, ...]

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coords) + "]"

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)

    @classmethod
    def parse(cls, text: str) -> "ZetaVector":
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ParameterError(f"bad zeta vector {text!r}")
        body = text[1:-1].strip()
        try:
            return cls(tuple(int(x) for x in body.split(",")) if body else ())
        except ValueError:
            raise ParameterError(f"bad zeta vector {text!r}") from None


def strictly_positive(z) -> bool:
    coords = z.coords if isinstance(z, ZetaVector) else z
    return all(c > 0 for c in coords)


def zeta_from_sets(rs: RootSystem, plus, minus, action) -> tuple[int, ...]:
    """``sum_{v in plus} |w v| - sum_{v in minus} |w v|`` for a root permutation ``action``."""
    roots = rs.roots
    pos = rs.is_positive
    acc = [0] * rs.rank
    for sign, group in ((1, plus), (-1, minus)):
        for v in group:
            img = action[v]
            s = sign if pos[img] else -sign
            for k, c in enumerate(roots[img].coords):
                acc[k] += s * c
    return tuple(acc)


def zeta_of(rs: RootSystem, rho, w) -> ZetaVector:
    """Literal evaluation; ``w`` is a WeylElement or (type D) an ExtendedElementD."""
    classes = weight_classes(rs, rho)
    return ZetaVector(zeta_from_sets(rs, classes.sorted_V2, classes.sorted_V0, w.action))


def zeta_identity(rs: RootSystem, rho) -> tuple[int, ...]:
    classes = weight_classes(rs, rho)
    return zeta_from_sets(rs, classes.sorted_V2, classes.sorted_V0, range(len(rs.roots)))


def step_gain(h: int) -> int:
    return (h == 2) + (h == -2) - 2 * (h == 0)


def zeta_step(rs: RootSystem, z, i: int, h: int) -> list[int]:
    """``zeta(s_i w)`` from ``zeta(w)`` and the weight ``h`` of ``w^{-1}(alpha_i)``."""
    out = list(z)
    out[i] -= sum(a * x for a, x in zip(rs.cartan[i], z))
    out[i] += 2 * step_gain(h)
    return out


def iter_zeta(rs: RootSystem, rho, subtree=(), max_length=None):
    """Yield ``(word, zeta)`` over the enumeration tree, updating incrementally."""
    rho = as_weighting(rs, rho)
    wt = weight_table(rs, rho.values)
    _walk(rs, subtree)  # validates the word
    z = list(zeta_identity(rs, rho))
    inv = list(rs.simple_indices)
    for letter in reversed(tuple(subtree)):
        z = zeta_step(rs, z, letter, wt[inv[letter]])
        inv = child_inverse(rs, inv, letter)
    stack = [(tuple(subtree), inv, z)]
    while stack:
        word, inv, z = stack.pop()
        yield word, ZetaVector(tuple(z))
        if max_length is not None and len(word) >= max_length:
            continue
        for i in range(rs.rank - 1, -1, -1):
            child = child_inverse(rs, inv, i)
            if child is not None:
                stack.append(((i,) + word, child, zeta_step(rs, z, i, wt[inv[i]])))
