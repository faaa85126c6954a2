import random

import pytest
from hypothesis import given, settings, strategies as st

from zetacheck.errors import ParameterError
from zetacheck.rootsys import build_root_system
from zetacheck.weights import all_weightings, weight_classes
from zetacheck.weyl import element_from_word, enumerate_weyl, identity, outer_twist
from zetacheck.zeta import (ZetaVector, iter_zeta, strictly_positive, zeta_identity, zeta_of,
                            zeta_step)


def zeta_word(family, rank, rho, word):
    rs = build_root_system(family, rank)
    return zeta_of(rs, rho, element_from_word(rs, word)).coords


def test_examples():
    assert zeta_word("A", 1, "2", ()) == (1,)
    assert zeta_word("A", 2, "20", ()) == (2, -1)
    assert zeta_word("A", 2, "22", (0,)) == (2, 1)
    assert zeta_word("B", 2, "20", (0,)) == (0, 1)
    assert zeta_word("B", 2, "20", ()) == (3, 1)


def test_strictly_positive_examples():
    assert strictly_positive(ZetaVector((1, 1)))
    assert not strictly_positive(ZetaVector((0, 1)))
    assert not strictly_positive((2, -1))


def test_serialization():
    z = ZetaVector((0, -1, 3))
    assert str(z) == "[0,-1,3]"
    assert ZetaVector.parse(str(z)) == z
    assert ZetaVector.parse("[]") == ZetaVector(())
    with pytest.raises(ParameterError):
        ZetaVector.parse("0,1")


def _literal(rs, rho, w):
    """Independent evaluation through ambient vectors and root lookup."""
    classes = weight_classes(rs, rho)
    total = [0] * rs.rank
    for sign, group in ((1, classes.V(2)), (-1, classes.V(0))):
        for v in group:
            image = w(rs.roots[v])
            coords = image.coords if image.positive else tuple(-c for c in image.coords)
            total = [t + sign * c for t, c in zip(total, coords)]
    return tuple(total)


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2)])
def test_literal_evaluation(family, rank):
    rs = build_root_system(family, rank)
    elements = list(enumerate_weyl(rs))
    rng = random.Random(1)
    for rho in all_weightings(rs):
        for w in rng.sample(elements, min(40, len(elements))):
            assert zeta_of(rs, rho, w).coords == _literal(rs, rho, w)


@pytest.mark.parametrize("family,rank", [("A", 4), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)])
def test_regular_weighting(family, rank):
    rs = build_root_system(family, rank)
    rho = "2" * rank
    assert zeta_identity(rs, rho) == (1,) * rank
    assert all(strictly_positive(z) for _, z in iter_zeta(rs, rho))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)]),
       st.lists(st.integers(0, 3), max_size=20), st.integers(0, 255))
def test_independent_of_word(system, letters, bits):
    rs = build_root_system(*system)
    word = tuple(x % rs.rank for x in letters)
    rho = "".join("2" if bits >> i & 1 else "0" for i in range(rs.rank))
    w = element_from_word(rs, word)
    # the raw word and the canonical word name the same element
    assert zeta_word(rs.family, rs.rank, rho, word) == zeta_word(rs.family, rs.rank, rho, w.word)


@pytest.mark.parametrize("n", [3, 4])
def test_d_swap_under_outer_twist(n):
    rs = build_root_system("D", n)
    for rho in all_weightings(rs):
        for w in enumerate_weyl(rs):
            z = zeta_of(rs, rho, w).coords
            zt = zeta_of(rs, rho, outer_twist(rs, w)).coords
            assert zt[:n - 2] == z[:n - 2]
            assert (zt[n - 2], zt[n - 1]) == (z[n - 1], z[n - 2])


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("C", 4), ("D", 4), ("G", 2), ("F", 4)])
def test_incremental_matches_literal(family, rank):
    rs = build_root_system(family, rank)
    for rho in all_weightings(rs)[::3]:
        seen = 0
        for word, z in iter_zeta(rs, rho):
            assert z == zeta_of(rs, rho, element_from_word(rs, word))
            seen += 1
        assert seen == len(list(enumerate_weyl(rs)))


def test_single_step():
    rs = build_root_system("A", 2)
    z = zeta_identity(rs, "20")
    # w^{-1}(alpha_1) = alpha_1 has weight 2 at the identity
    assert tuple(zeta_step(rs, z, 0, 2)) == zeta_of(rs, "20", element_from_word(rs, (0,))).coords
    assert zeta_of(rs, "20", identity(rs)).coords == z
