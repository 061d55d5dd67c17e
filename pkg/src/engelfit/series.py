"""Characteristic subgroups and series: F(G), E(G), F*(G), heights, insoluble length."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ConsistencyError, PreconditionError
from .group import GroupHandle, generated_by
from .subgrp import (SeriesRecord, Subgroup, centralizer, is_nilpotent,
                     is_quasisimple, is_soluble, join, normal_subgroups,
                     quotient, socle)

__all__ = [
    "CharacteristicProfile",
    "fitting_subgroup",
    "o_p_core",
    "odd_core",
    "soluble_radical",
    "layer",
    "generalized_fitting",
    "gen_fitting_series",
    "gen_fitting_height",
    "fitting_series",
    "fitting_height",
    "insoluble_length",
    "upper_insoluble_series",
    "characteristic_profile",
]

# Global memo tables keyed by group fingerprint.  Fills are idempotent
# (equal keys always produce equal values), so concurrent races are safe.
_LAYER_MEMO: dict[str, GroupHandle] = {}
_HSTAR_MEMO: dict[str, int] = {}
_LAMBDA_MEMO: dict[str, int] = {}


def _is_prime_power(n: int, p: int) -> bool:
    if n == 1:
        return True
    while n % p == 0:
        n //= p
    return n == 1


def _join_members(group: GroupHandle, keep) -> GroupHandle:
    lattice = normal_subgroups(group)
    picked = [m.group for m in lattice.members if keep(m.group)]
    gens = []
    for h in picked:
        gens.extend(h.generators)
    return generated_by(gens, degree=group.degree, cap=group.element_cap)


def fitting_subgroup(group: GroupHandle) -> GroupHandle:
    """Join of the nilpotent normal subgroups (nilpotent by Fitting's theorem)."""
    cached = group._cache.get("fitting")
    if cached is None:
        cached = _join_members(group, is_nilpotent)
        if not is_nilpotent(cached):
            raise ConsistencyError("join of nilpotent normal subgroups is not nilpotent")
        group._cache["fitting"] = cached
    return cached


def o_p_core(group: GroupHandle, p: int) -> GroupHandle:
    """Largest normal p-subgroup."""
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return _join_members(group, lambda h: _is_prime_power(h.order, p))


def odd_core(group: GroupHandle) -> GroupHandle:
    """Largest odd-order normal subgroup."""
    return _join_members(group, lambda h: h.order % 2 == 1)


def soluble_radical(group: GroupHandle) -> GroupHandle:
    """Largest soluble normal subgroup."""
    cached = group._cache.get("radical")
    if cached is None:
        cached = _join_members(group, is_soluble)
        group._cache["radical"] = cached
    return cached


def layer(group: GroupHandle) -> GroupHandle:
    """Subgroup generated by the quasisimple subnormal subgroups.

    Every component of a non-quasisimple group lies inside a maximal
    proper normal subgroup and is a component there, so the layer is the
    join of the layers of those subgroups; the recursion is memoized on
    group fingerprints since members recur across the lattice walk.
    """
    memo = _LAYER_MEMO.get(group.fingerprint)
    if memo is not None:
        return memo
    if is_soluble(group):
        result = GroupHandle.trivial(group.degree)
    elif is_quasisimple(group):
        result = group
    else:
        members = [m.group for m in normal_subgroups(group).members
                   if m.group.order < group.order]
        maximal = [m for m in members
                   if not any(m.order < other.order and m.is_subset_of(other)
                              for other in members)]
        gens = []
        for m in maximal:
            gens.extend(layer(m).generators)
        result = generated_by(gens, degree=group.degree, cap=group.element_cap)
    _LAYER_MEMO[group.fingerprint] = result
    return result


def _gen_fitting_by_socle(group: GroupHandle) -> GroupHandle:
    """Independent route to F*(G): pull back the socle of C(F)F/F.

    When F(G) is trivial there are no abelian minimal normal subgroups, so
    the formula collapses to the socle of the group itself.
    """
    f = fitting_subgroup(group)
    if f.same_elements(group):
        return group
    if f.is_trivial():
        return socle(group)
    q = quotient(group, f)
    cf = centralizer(group, f.generators)
    cff = join(cf, f)
    image_sub = generated_by([q.image_of(g) for g in cff.generators],
                             degree=q.image.degree)
    return q.preimage_of(socle(image_sub))


def generalized_fitting(group: GroupHandle, crosscheck: bool = False) -> GroupHandle:
    """F*(G) = F(G) E(G), optionally verified against the socle formula."""
    cached = group._cache.get("gen_fitting")
    if cached is None:
        cached = join(fitting_subgroup(group), layer(group))
        group._cache["gen_fitting"] = cached
    if crosscheck:
        alt = _gen_fitting_by_socle(group)
        if not alt.same_elements(cached):
            raise ConsistencyError(
                f"generalized Fitting subgroup mismatch: product route has order "
                f"{cached.order}, socle route has order {alt.order}")
    return cached


def _ascending_series(group: GroupHandle, step, kind: str) -> SeriesRecord:
    """Iterate `step` (current term -> next term) from the bottom up to G."""
    terms: list[GroupHandle] = []
    current = GroupHandle.trivial(group.degree)
    while current.order < group.order:
        nxt = step(current)
        if nxt.order <= current.order:
            raise ConsistencyError(f"{kind} series stalled at order {current.order}")
        terms.append(nxt)
        current = nxt
    return SeriesRecord(kind, tuple(Subgroup(group, t) for t in terms),
                        length=len(terms))


def gen_fitting_series(group: GroupHandle) -> SeriesRecord:
    """F*_1 < F*_2 < … = G; the length is the generalized Fitting height."""
    cached = group._cache.get("gen_fitting_series")
    if cached is not None:
        return cached

    def step(current: GroupHandle) -> GroupHandle:
        if current.is_trivial():
            return generalized_fitting(group)
        q = quotient(group, current)
        return q.preimage_of(generalized_fitting(q.image))

    record = _ascending_series(group, step, "generalized_fitting")
    group._cache["gen_fitting_series"] = record
    return record


def gen_fitting_height(group: GroupHandle) -> int:
    memo = _HSTAR_MEMO.get(group.fingerprint)
    if memo is None:
        memo = gen_fitting_series(group).length
        _HSTAR_MEMO[group.fingerprint] = memo
    return memo


def fitting_series(group: GroupHandle) -> SeriesRecord:
    """F_1 < F_2 < … = G for a soluble group."""
    if not is_soluble(group):
        raise PreconditionError("Fitting series requires a soluble group")
    cached = group._cache.get("fitting_series")
    if cached is not None:
        return cached

    def step(current: GroupHandle) -> GroupHandle:
        if current.is_trivial():
            return fitting_subgroup(group)
        q = quotient(group, current)
        return q.preimage_of(fitting_subgroup(q.image))

    record = _ascending_series(group, step, "fitting")
    group._cache["fitting_series"] = record
    return record


def fitting_height(group: GroupHandle) -> int:
    return fitting_series(group).length


def insoluble_length(group: GroupHandle) -> int:
    """Minimum number of insoluble factors in a normal series.

    Computed by peeling the soluble radical and the socle above it: that
    quotient step removes exactly one insoluble factor.
    """
    memo = _LAMBDA_MEMO.get(group.fingerprint)
    if memo is not None:
        return memo
    if is_soluble(group):
        result = 0
    else:
        radical = soluble_radical(group)
        if radical.is_trivial():
            top = socle(group)
        else:
            q0 = quotient(group, radical)
            top = q0.preimage_of(socle(q0.image))
        if top.same_elements(group):
            result = 1
        else:
            result = 1 + insoluble_length(quotient(group, top).image)
    _LAMBDA_MEMO[group.fingerprint] = result
    return result


def upper_insoluble_series(group: GroupHandle, h_max: Optional[int] = None) -> SeriesRecord:
    """R_0 ≤ R_1 ≤ … where R_i is the largest normal subgroup of insoluble length ≤ i."""
    if h_max is None:
        h_max = insoluble_length(group)
    terms: list[GroupHandle] = []
    for h in range(h_max + 1):
        r_h = _join_members(group, lambda m: insoluble_length(m) <= h)
        if terms and not terms[-1].is_subset_of(r_h):
            raise ConsistencyError("upper insoluble series is not ascending")
        terms.append(r_h)
    if not terms[0].same_elements(soluble_radical(group)):
        raise ConsistencyError("R_0 differs from the soluble radical")
    return SeriesRecord("insoluble_upper",
                        tuple(Subgroup(group, t) for t in terms),
                        length=h_max)


@dataclass(frozen=True)
class CharacteristicProfile:
    """The characteristic subgroups and lengths of one group."""

    fitting: Subgroup
    layer: Subgroup
    gen_fitting: Subgroup
    soluble_radical: Subgroup
    odd_core: Subgroup
    fitting_height: Optional[int]
    gen_fitting_height: int
    insoluble_length: int


def characteristic_profile(group: GroupHandle) -> CharacteristicProfile:
    soluble = is_soluble(group)
    return CharacteristicProfile(
        fitting=Subgroup(group, fitting_subgroup(group)),
        layer=Subgroup(group, layer(group)),
        gen_fitting=Subgroup(group, generalized_fitting(group)),
        soluble_radical=Subgroup(group, soluble_radical(group)),
        odd_core=Subgroup(group, odd_core(group)),
        fitting_height=fitting_height(group) if soluble else None,
        gen_fitting_height=gen_fitting_height(group),
        insoluble_length=insoluble_length(group),
    )
