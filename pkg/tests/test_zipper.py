"""Subgroup lattices, normal-closure descent, and the dichotomy scan."""

import pytest

from engelfit.errors import PreconditionError, ResourceLimitError
from engelfit.group import close_group, generated_by
from engelfit.perm import Permutation, parse_cycles
from engelfit.subgrp import is_subnormal, join, normal_closure
from engelfit.zipper import (all_subgroups, descent_lemma_failures,
                             normal_closure_descent, unique_max_element_check,
                             zipper_case)
from tests.test_group import alt, sym
from tests.test_subgroups import closure_oracle


def brute_force_subgroups(group):
    """Oracle: grow subgroups by adjoining single elements until stable."""
    elems = sorted(group.elements())
    found = {frozenset([group.identity])}
    frontier = list(found)
    while frontier:
        base = frontier.pop()
        for g in elems:
            if g in base:
                continue
            new = frozenset(closure_oracle(base | {g}, group.degree))
            if new not in found:
                found.add(new)
                frontier.append(new)
    return found


def test_s3_subgroups():
    s3 = sym(3)
    lattice = all_subgroups(s3)
    assert len(lattice) == 6
    maximal_orders = sorted(lattice.members[i].order for i in lattice.maximal)
    assert maximal_orders == [2, 2, 2, 3]


def test_s4_subgroups_against_brute_force():
    s4 = sym(4)
    lattice = all_subgroups(s4)
    oracle = brute_force_subgroups(s4)
    assert len(lattice) == len(oracle) == 30
    assert {m.group.elements() for m in lattice.members} == oracle


def test_prime_cyclic_has_two_subgroups():
    for p in (2, 3, 5, 7):
        cp = close_group([parse_cycles("(" + " ".join(map(str, range(1, p + 1))) + ")", p)])
        assert len(all_subgroups(cp)) == 2


def test_a4_subgroups_against_brute_force():
    a4 = alt(4)
    lattice = all_subgroups(a4)
    oracle = brute_force_subgroups(a4)
    assert len(lattice) == len(oracle) == 10
    assert {m.group.elements() for m in lattice.members} == oracle


def test_lattice_closed_under_join_and_intersection():
    d6 = close_group([parse_cycles("(1 2 3 4 5 6)", 6), parse_cycles("(2 6)(3 5)", 6)])
    lattice = all_subgroups(d6)
    sets = {m.group.elements() for m in lattice.members}
    for a in lattice.members:
        for b in lattice.members:
            assert a.group.elements() & b.group.elements() in sets
            assert join(a.group, b.group).elements() in sets


def test_lattice_order_cap():
    with pytest.raises(ResourceLimitError):
        all_subgroups(sym(5), max_order=100)


def test_lattice_member_cap():
    with pytest.raises(ResourceLimitError):
        all_subgroups(sym(4), member_cap=10)


def test_descent_transposition_in_s4():
    s4 = sym(4)
    sub = generated_by([parse_cycles("(1 2)", 4)])
    series = normal_closure_descent(sub, s4)
    assert [t.order for t in series.terms] == [24]  # closure is everything
    assert series.length == 0


def test_descent_double_transposition_in_s4():
    s4 = sym(4)
    sub = generated_by([parse_cycles("(1 2)(3 4)", 4)])
    series = normal_closure_descent(sub, s4)
    assert [t.order for t in series.terms] == [24, 4, 2]
    assert series.terms[-1].group.same_elements(sub)
    assert descent_lemma_failures(sub, series) == []


def test_descent_from_itself_has_length_zero():
    s4 = sym(4)
    sub = generated_by([parse_cycles("(1 2 3)", 4)])
    series = normal_closure_descent(sub, sub)
    assert series.length == 0
    assert series.terms[0].group.same_elements(sub)


def test_descent_containment_guard():
    with pytest.raises(ValueError):
        normal_closure_descent(generated_by([parse_cycles("(1 2)", 4)]), alt(4))


def test_descent_lemma_on_many_pairs():
    s4 = sym(4)
    lattice = all_subgroups(s4)
    for member in lattice.members:
        sub = member.group
        series = normal_closure_descent(sub, s4)
        assert descent_lemma_failures(sub, series) == []
        stable = series.terms[-1].group
        # stable term self-closes, and equals sub exactly when sub is subnormal
        assert normal_closure(sub, stable).same_elements(stable)
        assert stable.same_elements(sub) == is_subnormal(sub, s4)[0]


def test_zipper_four_cycle_in_s4():
    s4 = sym(4)
    lattice = all_subgroups(s4)
    sub = generated_by([parse_cycles("(1 2 3 4)", 4)])
    case = zipper_case(s4, sub, lattice)
    assert case.branch == "unique_maximal"
    assert case.y_join.order == 4
    assert [m.order for m in case.maximal_over] == [8]
    assert case.lemma_failures == ()


def test_zipper_transposition_in_s3():
    s3 = sym(3)
    sub = generated_by([parse_cycles("(1 2)", 3)])
    case = zipper_case(s3, sub, all_subgroups(s3))
    assert case.branch == "unique_maximal"
    assert case.y_join.order == 2
    assert case.y_join.group.same_elements(sub)


def test_zipper_transposition_in_s4_joins_whole():
    s4 = sym(4)
    sub = generated_by([parse_cycles("(1 2)", 4)])
    case = zipper_case(s4, sub, all_subgroups(s4))
    assert case.branch == "join_is_whole"
    assert case.y_join.group.same_elements(s4)


def test_zipper_precondition():
    s4 = sym(4)
    v4_gen = generated_by([parse_cycles("(1 2)(3 4)", 4)])
    with pytest.raises(PreconditionError):
        zipper_case(s4, v4_gen, all_subgroups(s4))  # closure is V4, not S4


def test_zipper_dichotomy_exhaustive_on_small_groups():
    for group in [sym(3), sym(4), alt(4), alt(5)]:
        lattice = all_subgroups(group)
        for member in lattice.members:
            sub = member.group
            if sub.order >= group.order:
                continue
            if not normal_closure(sub, group).same_elements(group):
                continue
            case = zipper_case(group, sub, lattice)
            assert case.branch in ("join_is_whole", "unique_maximal")
            assert case.lemma_failures == ()


def test_unique_max_element_check_cases():
    s4 = sym(4)
    lattice = all_subgroups(s4)
    sub = generated_by([parse_cycles("(1 2)(3 4)", 4)])
    assert unique_max_element_check(s4, sub, lattice) in (True, False)
    # a subgroup inside exactly one maximal is trivially unique
    sub8 = generated_by([parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)])
    assert unique_max_element_check(s4, sub8, lattice)
    # normal subgroup: descent stabilizes at the subgroup in every maximal
    v4 = generated_by([parse_cycles("(1 2)(3 4)", 4), parse_cycles("(1 3)(2 4)", 4)])
    assert unique_max_element_check(s4, v4, lattice)
    with pytest.raises(PreconditionError):
        unique_max_element_check(s4, s4, lattice)


def test_flavell_remark_on_subnormal_overgroups():
    # when A is subnormal in every maximal overgroup except at most one,
    # the descent value is A itself in those overgroups
    s4 = sym(4)
    lattice = all_subgroups(s4)
    for member in lattice.members:
        sub = member.group
        if sub.order >= s4.order:
            continue
        maximal_over = [lattice.members[i].group for i in lattice.maximal
                        if sub.elements() <= lattice.members[i].group.elements()]
        not_subnormal = [m for m in maximal_over if not is_subnormal(sub, m)[0]]
        if len(not_subnormal) <= 1 and maximal_over:
            for m in maximal_over:
                if m in not_subnormal:
                    continue
                stable = normal_closure_descent(sub, m).terms[-1].group
                assert stable.same_elements(sub)
