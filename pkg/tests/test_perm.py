"""Permutation arithmetic: parsing, composition conventions, orders."""

import pytest
from hypothesis import given, strategies as st

from engelfit.errors import ParseError
from engelfit.perm import (Permutation, commutator, compose, element_order,
                           format_cycles, p_part, parse_cycles)


def test_parse_basic_cycles():
    p = parse_cycles("(1 2 3)(4 5)", 5)
    # point 1 -> 2, 2 -> 3, 3 -> 1, 4 -> 5, 5 -> 4
    assert p.images == (1, 2, 0, 4, 3)


def test_parse_identity():
    p = parse_cycles("()", 4)
    assert p.is_identity()
    assert p.degree == 4


def test_parse_repeated_point():
    with pytest.raises(ParseError, match="repeated point 2"):
        parse_cycles("(1 2 2)", 3)


def test_parse_point_exceeding_degree():
    with pytest.raises(ParseError, match="point 9 out of range"):
        parse_cycles("(1 9)", 5)


def test_parse_malformed():
    with pytest.raises(ParseError):
        parse_cycles("(1 2", 3)
    with pytest.raises(ParseError):
        parse_cycles("1 2 3", 3)
    with pytest.raises(ParseError):
        parse_cycles("(1 a)", 3)


def test_parse_comma_separated_and_crlf_tolerance():
    assert parse_cycles("(1, 2, 3)", 3) == parse_cycles("(1 2 3)", 3)


def test_involution_squared_is_identity():
    t = parse_cycles("(1 2)", 2)
    assert (t * t).is_identity()


def _mult_oracle(p, q):
    """Independent product: q after p, by chasing each point."""
    return tuple(q.images[p.images[i]] for i in range(p.degree))


def test_commutator_of_three_cycle_and_transposition():
    g = parse_cycles("(1 2 3)", 3)
    h = parse_cycles("(1 2)", 3)
    # oracle: direct four-term product g^-1 h^-1 g h
    gi, hi = g.inverse(), h.inverse()
    expected = _mult_oracle(Permutation(_mult_oracle(Permutation(_mult_oracle(gi, hi)), g)), h)
    c = commutator(g, h)
    assert c.images == expected
    assert c.order() == 3
    assert set(c.moved_points()) <= {0, 1, 2}


def test_self_conjugation_is_identity_action():
    for text in ["(1 2)", "(1 2 3)", "(1 3)(2 4)"]:
        g = parse_cycles(text, 4)
        assert g.conjugate(g) == g


def test_element_orders_and_p_parts():
    g = parse_cycles("(1 2)(3 4 5)", 5)
    assert element_order(g) == 6
    assert p_part(g, 2) == 2
    assert p_part(g, 3) == 3
    assert element_order(parse_cycles("()", 5)) == 1
    assert p_part(parse_cycles("()", 5), 2) == 1
    four = parse_cycles("(1 2 3 4)", 4)
    assert element_order(four) == 4
    assert p_part(four, 2) == 4


def test_p_part_requires_prime():
    with pytest.raises(ValueError):
        p_part(parse_cycles("(1 2)", 2), 4)


def test_degree_mismatch_raises():
    with pytest.raises(ValueError):
        parse_cycles("(1 2)", 2) * parse_cycles("(1 2)", 3)


perms = st.permutations(range(6)).map(Permutation)


@given(perms, perms, perms)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(perms, perms)
def test_inverse_antihomomorphism(a, b):
    assert (a * b).inverse() == b.inverse() * a.inverse()


@given(perms)
def test_format_parse_round_trip(p):
    assert parse_cycles(format_cycles(p), p.degree) == p


CANONICAL_STRINGS = ["()", "(1 2)", "(1 2 3)(4 5)", "(1 3 5)(2 4)",
                     "(2 6)(3 5)", "(1 4)(2 5)(3 6)", "(1 2 3 4 5 6)"]


def test_parse_then_format_identity_on_canonical_corpus():
    for text in CANONICAL_STRINGS:
        assert format_cycles(parse_cycles(text, 6)) == text


@given(perms)
def test_inverse_cancels(p):
    assert (p * p.inverse()).is_identity()
    assert p ** -1 == p.inverse()
    assert p ** p.order() == Permutation.identity(p.degree)


@given(perms, perms)
def test_conjugate_matches_definition(g, h):
    assert g.conjugate(h) == h.inverse() * g * h


@given(perms, perms)
def test_compose_applies_left_then_right(g, h):
    for i in range(1, 7):
        assert compose(g, h).act(i) == h.act(g.act(i))
