from itertools import product

import pytest
from hypothesis import given, strategies as st

from zetacheck.closedform import (Occupancy, PairVector, _ones, a_type_zeta, b_type_zeta,
                                  c_type_zeta, closedform_value, closedform_verdict,
                                  d_type_zeta, feasible_occupancies, gamma_kind,
                                  induced_occupancy, occupancy_feasible, occupancy_realize,
                                  occupancy_value, quad_form_term, realize_counterexample,
                                  refuting_occupancy)
from zetacheck.errors import ParameterError, UnsupportedOperationError
from zetacheck.rootsys import build_root_system
from zetacheck.weights import all_weightings, block_partition, is_distinguished_closed_form
from zetacheck.weyl import (element_from_signed_permutation, enumerate_extended_D,
                            enumerate_weyl, signed_permutation)
from zetacheck.zeta import zeta_of

LOW = {"A": 1, "B": 2, "C": 2, "D": 3}


def blocks(family, n, rho):
    return block_partition(build_root_system(family, n), rho)


def test_quad_form_term_examples():
    assert quad_form_term((1, 1)) == 2
    assert quad_form_term((0, -1)) == 0
    assert quad_form_term((-1, 2)) == -4


def test_pair_vector():
    assert PairVector.of(1, 3).u == (1, 2)
    assert PairVector.of(1, 3) - PairVector.of(0, 2) == (1, 0)
    with pytest.raises(ParameterError):
        PairVector.of(4, 3)


def test_a_type_examples():
    bp = blocks("A", 2, "20")
    assert bp.lifted == (1, 2)
    assert a_type_zeta(bp, (1, 0)) == 2
    assert a_type_zeta(bp, (1, 1)) == -1
    with pytest.raises(ParameterError):
        a_type_zeta(bp, (2, 0))
    with pytest.raises(ParameterError):
        b_type_zeta(bp, (1, 0))


@pytest.mark.parametrize("n", range(2, 8))
def test_a_type_staircase_value(n):
    rs = build_root_system("A", n)
    for rho in all_weightings(rs):
        bp = block_partition(rs, rho)
        N = bp.lifted
        for i in range(1, bp.m + 1):
            expected = (N[i] - N[i - 1] + 1) - (N[0] - 1)
            assert a_type_zeta(bp, _ones(len(N), 0, i - 1)) == expected


def test_b_type_examples():
    bp = blocks("B", 2, "20")
    assert bp.lifted == (1, 3, 1)
    assert b_type_zeta(bp, (0, 1, 0)) == 0
    assert b_type_zeta(bp, (0, 0, 0)) == 0


@pytest.mark.parametrize("family,n", [("B", n) for n in range(2, 7)] + [("D", n) for n in range(4, 8)]
                         + [("C", n) for n in range(2, 7)])
def test_first_converse_value(family, n):
    # a_i = 1 for 0 <= i <= s-1 gives -(N_0 - 1) + (N_s - N_{s-1} + 1)
    rs = build_root_system(family, n)
    for rho in all_weightings(rs):
        bp = block_partition(rs, rho)
        if bp.case not in ("B", "D00", "C2"):
            continue
        N = bp.lifted
        last = bp.m if bp.case != "C2" else bp.m - 1
        for s in range(1, last + 1):
            a = _ones(len(N), 0, s - 1)
            expected = -(N[0] - 1) + (N[s] - N[s - 1] + 1)
            if bp.case == "B":
                assert b_type_zeta(bp, a) == expected
            elif bp.case == "C2":
                assert c_type_zeta(bp, a, "short") == expected
            elif gamma_kind(bp, sum(a)) == "generic":
                assert d_type_zeta(bp, a, "generic") == expected


def test_c_converse_zero_tail_is_at_most_minus_two():
    for n in range(2, 7):
        rs = build_root_system("C", n)
        for rho in all_weightings(rs):
            bp = block_partition(rs, rho)
            if bp.case == "C0":
                occ = refuting_occupancy(bp)
                assert occupancy_value(bp, occ) <= -2


def test_d_converse_cases():
    seen = set()
    for n in range(4, 8):
        rs = build_root_system("D", n)
        for rho in all_weightings(rs):
            bp = block_partition(rs, rho)
            occ = refuting_occupancy(bp)
            if occ is not None:
                seen.add(bp.case)
                assert occupancy_value(bp, occ) <= 0
    assert seen == {"D00", "D02", "D22"}


def test_regular_values_are_positive():
    for family, n in [("C", 2), ("C", 3), ("D", 4), ("B", 3)]:
        bp = blocks(family, n, "2" * n)
        values = [occupancy_value(bp, occ) for occ in feasible_occupancies(bp)]
        assert values and all(v > 0 for v in values)


def test_feasibility_examples():
    bp = blocks("B", 2, "20")
    assert occupancy_feasible(bp, (0, 1, 0))
    assert not occupancy_feasible(bp, (0, 0, 0))
    assert not occupancy_feasible(bp, (1, 3, 1))
    d4 = blocks("D", 4, "2200")
    assert d4.case == "D00"
    sums3 = [a for a in product(*(range(s + 1) for s in d4.lifted)) if sum(a) == 3]
    assert sums3 and not any(occupancy_feasible(d4, a) for a in sums3)
    assert not occupancy_feasible(d4, (9,))


def test_realize_b5_occupancy():
    bp = blocks("B", 5, "20200")
    assert (bp.m, bp.lifted) == (2, (1, 2, 5, 2, 1))
    sig, gamma = occupancy_realize(bp, (0, 0, 2, 1, 0))
    assert sig == (4, 5, -3, 1, 2)
    full = {0: 0}
    for x, y in enumerate(sig, start=1):
        full[x], full[-x] = y, -y
    assert [full[x] for x in bp.labels] == [4, 5, -3, 1, 2, 0, -2, -1, 3, -5, -4]
    assert induced_occupancy(bp, sig, gamma).a == (0, 0, 2, 1, 0)


def test_realize_b2():
    rs = build_root_system("B", 2)
    bp = block_partition(rs, "20")
    sig, gamma = occupancy_realize(bp, (0, 1, 0))
    w = element_from_signed_permutation(rs, sig)
    assert w.word == (0,) and gamma == 0
    with pytest.raises(ParameterError):
        occupancy_realize(bp, (0, 0, 0))


def test_realize_a_staircase():
    rs = build_root_system("A", 5)
    bp = block_partition(rs, "22020")
    for i in range(1, bp.m + 1):
        a = _ones(len(bp.lifted), 0, i - 1)
        sig, gamma = occupancy_realize(bp, a)
        assert gamma == i - 1
        firsts = {block[0] for block in bp.lifted_labels[:i]}
        assert {sig[x - 1] for x in firsts} == set(range(1, i + 1))


def test_refuting_examples():
    occ = refuting_occupancy(blocks("A", 2, "20"))
    assert occ.a == (1, 1) and occupancy_value(occ.blocks, occ) == -1
    occ = refuting_occupancy(blocks("B", 2, "20"))
    assert occ.a == (0, 1, 0) and occupancy_value(occ.blocks, occ) == 0
    assert refuting_occupancy(blocks("B", 2, "22")) is None


@pytest.mark.parametrize("family", "ABCD")
def test_refuting_occupancy_iff_not_distinguished(family):
    for n in range(LOW[family], 9):
        rs = build_root_system(family, n)
        for rho in all_weightings(rs):
            bp = block_partition(rs, rho)
            occ = refuting_occupancy(bp)
            assert (occ is None) == is_distinguished_closed_form(rs, rho)
            if occ is not None:
                assert occupancy_feasible(bp, occ) and occupancy_value(bp, occ) <= 0


@pytest.mark.parametrize("family", "ABCD")
def test_refuting_occupancy_realizes(family):
    for n in range(LOW[family], 6):
        rs = build_root_system(family, n)
        for rho in all_weightings(rs):
            occ = refuting_occupancy(block_partition(rs, rho))
            if occ is None:
                continue
            w, gamma = realize_counterexample(rs, rho, occ)
            assert zeta_of(rs, rho, w)[gamma] == occupancy_value(occ.blocks, occ)


def _all_signed(rs):
    if rs.family == "D":
        yield from (signed_permutation(rs, w) for w in enumerate_extended_D(rs))
    else:
        yield from (signed_permutation(rs, w) for w in enumerate_weyl(rs))


def _coverable(rs):
    return [g for g in range(rs.rank) if not (rs.family == "D" and g == rs.rank - 2)]


@pytest.mark.parametrize("family,n", [("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3),
                                      ("D", 3), ("D", 4)])
def test_feasibility_sound_and_complete(family, n):
    rs = build_root_system(family, n)
    sigs = list(_all_signed(rs))
    for rho in all_weightings(rs):
        bp = block_partition(rs, rho)
        if bp.twisted:
            continue
        induced = {induced_occupancy(bp, sig, g).a for sig in sigs for g in _coverable(rs)}
        assert induced == {occ.a for occ in feasible_occupancies(bp)}


@pytest.mark.parametrize("family,n", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_closed_form_equals_zeta(family, n):
    rs = build_root_system(family, n)
    for rho in all_weightings(rs):
        for w in enumerate_weyl(rs):
            z = zeta_of(rs, rho, w)
            for g in range(n):
                value = closedform_value(rs, rho, w, g)
                if value is not None:
                    assert value == z[g]


def test_closedform_verdict_examples():
    v = closedform_verdict(build_root_system("A", 2), "22")
    assert v.all_positive and v.counterexample is None
    rs = build_root_system("B", 2)
    v = closedform_verdict(rs, "20")
    assert not v.all_positive and v.counterexample.zeta[v.counterexample.gamma] == 0
    assert v.counterexample.gamma == 0
    assert not closedform_verdict(build_root_system("C", 2), "20").all_positive
    with pytest.raises(UnsupportedOperationError):
        closedform_verdict(build_root_system("G", 2), "22")


@given(st.sampled_from(["B", "C", "D"]), st.integers(3, 6), st.data())
def test_realization_round_trip(family, n, data):
    rs = build_root_system(family, n)
    rho = data.draw(st.sampled_from(all_weightings(rs)))
    bp = block_partition(rs, rho)
    a = tuple(data.draw(st.integers(0, s)) for s in bp.lifted)
    if not occupancy_feasible(bp, a):
        return
    sig, gamma = occupancy_realize(bp, a)
    assert induced_occupancy(bp, sig, gamma).a == a
    w, g = realize_counterexample(rs, rho, Occupancy(a, bp))
    assert zeta_of(rs, rho, w)[g] == occupancy_value(bp, a)
