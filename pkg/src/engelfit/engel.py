"""Engel sets, automorphism handling, inverted-element sets, Baer's criterion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import (AutomorphismError, ConsistencyError, PreconditionError,
                     ResourceLimitError)
from .group import GroupHandle, close_group, generated_by
from .perm import Permutation, p_part
from .subgrp import SeriesRecord, Subgroup, center

__all__ = [
    "AutomorphismMap",
    "EngelChain",
    "InvolutionReport",
    "CentralizerCheck",
    "make_automorphism",
    "inner",
    "fixed_subgroup",
    "commutator_with_actor",
    "engel_chain",
    "commutator_descent",
    "baer_membership",
    "j_set",
    "centralizer_intersection_check",
    "holomorph_extension",
]

PAIR_CHECK_CAP = 240
EXTENSION_CAP = 5_000

Actor = Union[Permutation, "AutomorphismMap"]


class AutomorphismMap:
    """An automorphism given by generator images, stored as a full element table."""

    __slots__ = ("group", "gen_images", "mapping", "order")

    def __init__(self, group: GroupHandle, gen_images: tuple[Permutation, ...],
                 mapping: dict[Permutation, Permutation], order: int):
        self.group = group
        self.gen_images = gen_images
        self.mapping = mapping
        self.order = order

    def apply(self, g: Permutation) -> Permutation:
        image = self.mapping.get(g)
        if image is None:
            raise ValueError(f"{g} is not a member of the automorphism's group")
        return image

    def is_involution(self) -> bool:
        return self.order == 2

    def is_identity(self) -> bool:
        return self.order == 1

    def __repr__(self) -> str:
        return f"<automorphism of order {self.order} on group of order {self.group.order}>"


def make_automorphism(group: GroupHandle, images, *,
                      pair_check_cap: int = PAIR_CHECK_CAP) -> AutomorphismMap:
    """Extend generator images to a validated element-level automorphism.

    The table is grown along the Cayley graph, checking every
    (element, generator) edge, which proves the extension is a
    homomorphism; bijectivity then follows from a size check.  For groups
    of order at most ``pair_check_cap`` the multiplicativity of every
    element pair is additionally verified.
    """
    images = tuple(images)
    if len(images) != len(group.generators):
        raise AutomorphismError(
            f"expected {len(group.generators)} images, got {len(images)}")
    for im in images:
        if not group.contains(im):
            raise AutomorphismError(f"image {im} is not a member of the group",
                                    pair=(im, None))
    identity = group.identity
    mapping = {identity: identity}
    frontier = [identity]
    pairs = list(zip(group.generators, images))
    while frontier:
        new: list[Permutation] = []
        for e in frontier:
            fe = mapping[e]
            for s, fs in pairs:
                t = e * s
                ft = fe * fs
                known = mapping.get(t)
                if known is None:
                    mapping[t] = ft
                    new.append(t)
                elif known != ft:
                    raise AutomorphismError(
                        "images do not define a homomorphism", pair=(e, s))
        frontier = new
    if len(set(mapping.values())) != len(mapping):
        seen: dict[Permutation, Permutation] = {}
        for g, fg in sorted(mapping.items()):
            if fg in seen:
                raise AutomorphismError("images do not define a bijection",
                                        pair=(seen[fg], g))
            seen[fg] = g
    if len(mapping) <= pair_check_cap:
        for a in mapping:
            fa = mapping[a]
            for b in mapping:
                if mapping[a * b] != fa * mapping[b]:
                    raise AutomorphismError(
                        "images do not define a homomorphism", pair=(a, b))
    return AutomorphismMap(group, images, mapping, _mapping_order(group, mapping))


def _mapping_order(group: GroupHandle, mapping: dict) -> int:
    from math import lcm
    seen: set[Permutation] = set()
    order = 1
    for start in group.sorted_elements():
        if start in seen:
            continue
        length = 1
        seen.add(start)
        x = mapping[start]
        while x != start:
            seen.add(x)
            length += 1
            x = mapping[x]
        order = lcm(order, length)
    return order


def inner(group: GroupHandle, t: Permutation) -> AutomorphismMap:
    """Conjugation by t; t need not lie in the group, only normalize it."""
    return make_automorphism(group, [g.conjugate(t) for g in group.generators])


def fixed_subgroup(alpha: AutomorphismMap) -> GroupHandle:
    """Elements fixed by the automorphism (its centralizer in the group)."""
    fixed = [g for g in alpha.group.sorted_elements() if alpha.mapping[g] == g]
    return generated_by(fixed, degree=alpha.group.degree,
                        cap=alpha.group.element_cap)


def _commutator_fn(group: GroupHandle, actor: Actor) -> Callable[[Permutation], Permutation]:
    if isinstance(actor, AutomorphismMap):
        if not actor.group.same_elements(group):
            raise ValueError("automorphism acts on a different group")
        table = actor.mapping
        return lambda g: g.inverse() * table[g]
    if not group.contains(actor):
        raise ValueError(f"inner actor {actor} is not a member of the group")
    return lambda g: g.inverse() * g.conjugate(actor)


def _actor_conjugation(actor: Actor) -> Callable[[Permutation], Permutation]:
    if isinstance(actor, AutomorphismMap):
        return lambda g: actor.mapping[g]
    return lambda g: g.conjugate(actor)


def commutator_with_actor(group: GroupHandle, g: Permutation, actor: Actor) -> Permutation:
    """[g, actor]: g^-1 x^-1 g x for an inner actor x, g^-1 α(g) for α."""
    if not group.contains(g):
        raise ValueError(f"{g} is not a member of the group")
    return _commutator_fn(group, actor)(g)


@dataclass(frozen=True)
class EngelChain:
    """Iterated commutator data for one (group, actor) pair.

    ``sets[k]`` is the k-fold commutator set (``sets[0]`` is all of G); the
    sequence is stored up to its first repetition, entering a cycle at
    ``cycle_start``.  ``generated[k-1]`` is the subgroup generated by
    ``sets[k]``; the descending generated chain stabilizes at ``stable_k``,
    and ``descent`` is the subgroup series G ≥ [G,actor] ≥ [[G,actor],actor] ≥ ….
    """

    group: GroupHandle
    actor: Actor
    sets: tuple[frozenset, ...]
    cycle_start: int
    generated: tuple[GroupHandle, ...]
    stable_k: GroupHandle
    descent: SeriesRecord

    @property
    def descent_stable(self) -> GroupHandle:
        return self.descent.terms[-1].group

    def reaches_identity(self) -> bool:
        """True when some commutator set with positive index collapses to {1}."""
        return (any(len(s) == 1 for s in self.sets[1:])
                or len(self.sets[self.cycle_start]) == 1)

    def indices_attained_beyond(self, k: int) -> tuple[int, ...]:
        """Set indices j >= 1 whose value occurs for some iteration > k.

        Pre-cycle indices qualify only if themselves > k; on-cycle values
        recur for arbitrarily large iteration counts, so they all qualify.
        """
        return tuple(j for j in range(1, len(self.sets))
                     if j > k or j >= self.cycle_start)


def engel_chain(group: GroupHandle, actor: Actor,
                k_cap: Optional[int] = None) -> EngelChain:
    """Iterate E ↦ {[e, actor]} from all of G until the set sequence repeats."""
    if k_cap is None:
        k_cap = max(group.order, 4)
    if k_cap < 1:
        raise ValueError("k_cap must be at least 1")
    com = _commutator_fn(group, actor)
    conj = _actor_conjugation(actor)
    sets: list[frozenset] = [frozenset(group.elements())]
    seen: dict[frozenset, int] = {sets[0]: 0}
    generated: list[GroupHandle] = []
    cycle_start = -1
    for k in range(1, k_cap + 1):
        nxt = frozenset(com(e) for e in sets[-1])
        if frozenset(conj(e) for e in nxt) != nxt:
            raise ConsistencyError("commutator set is not actor-invariant")
        earlier = seen.get(nxt)
        if earlier is not None:
            cycle_start = earlier
            break
        sets.append(nxt)
        seen[nxt] = k
        sub = generated_by(nxt, degree=group.degree, cap=group.element_cap)
        if generated and not sub.is_subset_of(generated[-1]):
            raise ConsistencyError("generated Engel chain is not descending")
        generated.append(sub)
    else:
        raise ResourceLimitError(
            f"no cycle within k_cap={k_cap} commutator iterations",
            partial_count=len(sets) - 1)
    stable_k = group if cycle_start == 0 else generated[cycle_start - 1]
    descent = commutator_descent(group, actor)
    return EngelChain(group, actor, tuple(sets), cycle_start, tuple(generated),
                      stable_k, descent)


def commutator_descent(group: GroupHandle, actor: Actor) -> SeriesRecord:
    """G ≥ [G,actor] ≥ [[G,actor],actor] ≥ … down to its stable term."""
    com = _commutator_fn(group, actor)
    terms = [group]
    while True:
        current = terms[-1]
        commutators = {com(e) for e in current.elements()}
        nxt = generated_by(commutators, degree=group.degree, cap=group.element_cap)
        if nxt.same_elements(current):
            break
        if not nxt.is_subset_of(current):
            raise ConsistencyError("commutator descent left the previous term")
        terms.append(nxt)
    return SeriesRecord("engel_chain",
                        tuple(Subgroup(group, t) for t in terms),
                        length=len(terms) - 1)


def baer_membership(group: GroupHandle, x: Permutation,
                    k_cap: Optional[int] = None) -> bool:
    """True iff some iterated commutator set [G,_k x] collapses to {1}.

    This runs the bare set iteration without building the generated
    subgroups, so it stays cheap inside exhaustive element scans.
    """
    if not group.contains(x):
        raise ValueError(f"{x} is not a member of the group")
    if k_cap is None:
        k_cap = max(group.order, 4)
    com = _commutator_fn(group, x)
    current = frozenset(group.elements())
    seen = {current}
    identity = group.identity
    for _ in range(k_cap):
        current = frozenset(com(e) for e in current)
        if len(current) == 1 and identity in current:
            return True
        if current in seen:
            return False
        seen.add(current)
    raise ResourceLimitError(f"no cycle within k_cap={k_cap} iterations",
                             partial_count=len(seen))


@dataclass(frozen=True)
class InvolutionReport:
    """Odd-order inverted elements of an involutory automorphism."""

    alpha: AutomorphismMap
    j_elements: frozenset
    two_part: int
    generated_j: GroupHandle
    fixed_points: GroupHandle

    @property
    def two_exponent(self) -> int:
        return self.two_part.bit_length() - 1


def j_set(group: GroupHandle, alpha: AutomorphismMap) -> InvolutionReport:
    """Collect {g of odd order : α(g) = g^-1} along with the 2-part bound.

    ``two_part`` maximizes over all inverted elements, even-order ones
    included.
    """
    if not (alpha.is_involution() or (group.is_trivial() and alpha.is_identity())):
        raise PreconditionError("requires an involutory automorphism")
    inverted = [g for g in group.sorted_elements()
                if alpha.mapping[g] == g.inverse()]
    odd = [g for g in inverted if g.order() % 2 == 1]
    two_part = max(p_part(g, 2) for g in inverted)
    return InvolutionReport(
        alpha=alpha,
        j_elements=frozenset(odd),
        two_part=two_part,
        generated_j=generated_by(odd, degree=group.degree, cap=group.element_cap),
        fixed_points=fixed_subgroup(alpha),
    )


@dataclass(frozen=True)
class CentralizerCheck:
    """Outcome of comparing ∩_{j∈J} C(α)^j with Z(G) ∩ C(α)."""

    ok: bool
    intersection: GroupHandle
    expected: GroupHandle


def centralizer_intersection_check(group: GroupHandle,
                                   alpha: AutomorphismMap) -> CentralizerCheck:
    """Check ∩_{j∈J} C_G(α)^j = Z(G) ∩ C_G(α), given [G, α] = G."""
    descent = commutator_descent(group, alpha)
    if not descent.terms[-1].group.same_elements(group):
        raise PreconditionError("requires [G, alpha] = G")
    report = j_set(group, alpha)
    centralizer_elems = report.fixed_points.elements()
    intersection = set(centralizer_elems)
    for j in sorted(report.j_elements):
        intersection &= {c.conjugate(j) for c in centralizer_elems}
    expected = center(group).elements() & centralizer_elems
    inter_handle = generated_by(intersection, degree=group.degree,
                                cap=group.element_cap)
    expected_handle = generated_by(expected, degree=group.degree,
                                   cap=group.element_cap)
    return CentralizerCheck(intersection == expected,
                            inter_handle, expected_handle)


def holomorph_extension(group: GroupHandle, alpha: AutomorphismMap,
                        cap: int = EXTENSION_CAP) -> GroupHandle:
    """⟨right translations of G, permutation of α⟩ acting on the element set.

    This realizes ⟨G, α⟩ inside the holomorph as a permutation group of
    degree |G|.
    """
    if group.order > cap:
        raise ResourceLimitError(
            f"extension cap {cap} exceeded by group of order {group.order}",
            partial_count=group.order)
    elems = group.sorted_elements()
    index = {e: i for i, e in enumerate(elems)}
    translations = [Permutation(tuple(index[e * g] for e in elems))
                    for g in group.generators]
    alpha_perm = Permutation(tuple(index[alpha.mapping[e]] for e in elems))
    return close_group(translations + [alpha_perm], cap=group.element_cap)
