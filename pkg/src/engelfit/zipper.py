"""Full subgroup lattices, normal-closure descent, and the generation dichotomy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import PreconditionError, ResourceLimitError
from .group import GroupHandle, generated_by
from .perm import Permutation
from .subgrp import Subgroup, SeriesRecord, is_normal_in, is_subnormal, normal_closure

__all__ = [
    "SubgroupLattice",
    "ZipperCase",
    "all_subgroups",
    "normal_closure_descent",
    "descent_lemma_failures",
    "zipper_case",
    "unique_max_element_check",
    "LATTICE_ORDER_CAP",
]

LATTICE_ORDER_CAP = 360
LATTICE_MEMBER_CAP = 20_000


@dataclass(frozen=True)
class SubgroupLattice:
    """Every subgroup of the parent, with inclusion and maximal members.

    ``supersets[i]`` lists the indices of the strict overgroups of member
    i; ``maximal`` indexes the maximal proper subgroups.  Members are
    sorted by (order, fingerprint).
    """

    parent: GroupHandle
    members: tuple[Subgroup, ...]
    supersets: tuple[tuple[int, ...], ...]
    maximal: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def index_of(self, handle: GroupHandle) -> Optional[int]:
        fp = handle.fingerprint
        for i, m in enumerate(self.members):
            if m.group.fingerprint == fp:
                return i
        return None

    def overgroups_of(self, i: int) -> tuple[int, ...]:
        return self.supersets[i]

    def maximal_over(self, i: int) -> list[int]:
        return [j for j in self.maximal if j in self.supersets[i] or j == i]


def _conjugated(handle: GroupHandle, t: Permutation) -> GroupHandle:
    gens = tuple(g.conjugate(t) for g in handle.generators)
    conj = GroupHandle(gens, element_cap=handle.element_cap)
    conj._elements = frozenset(e.conjugate(t) for e in handle.elements())
    return conj


def _conjugate_orbit(group: GroupHandle, handle: GroupHandle) -> list[GroupHandle]:
    """All conjugates of a subgroup under the parent group."""
    seen = {handle.elements(): handle}
    queue = [handle]
    while queue:
        current = queue.pop()
        for g in group.generators:
            image = _conjugated(current, g)
            if image.elements() not in seen:
                seen[image.elements()] = image
                queue.append(image)
    return sorted(seen.values(), key=lambda h: h.fingerprint)


def _double_coset_reps(group: GroupHandle, sub: GroupHandle) -> list[Permutation]:
    """Least representatives of the double cosets sub\\group/sub.

    ⟨M, g⟩ only depends on the double coset MgM, so extensions need just
    one candidate per class.
    """
    sub_elems = sorted(sub.elements())
    assigned: set[Permutation] = set()
    reps: list[Permutation] = []
    for e in group.sorted_elements():
        if e in assigned:
            continue
        reps.append(e)
        left = [a * e for a in sub_elems]
        assigned.update(x * b for x in left for b in sub_elems)
    return reps


def all_subgroups(group: GroupHandle, max_order: int = LATTICE_ORDER_CAP,
                  member_cap: int = LATTICE_MEMBER_CAP) -> SubgroupLattice:
    """Enumerate every subgroup by cyclic seeding and one-element extensions.

    Subgroup conjugacy classes are grown breadth-first: each class
    representative is extended by one generator per double coset, and each
    new class is expanded to its full conjugation orbit.  Every subgroup
    is reachable this way because any subgroup is a one-element extension
    of any of its maximal subgroups.
    """
    cached = group._cache.get("subgroup_lattice")
    if cached is not None:
        return cached
    if group.order > max_order:
        raise ResourceLimitError(
            f"lattice order cap {max_order} exceeded by group of order {group.order}",
            partial_count=0)

    seen: set[str] = set()
    class_reps: list[GroupHandle] = []
    members: list[GroupHandle] = []

    def register(handle: GroupHandle) -> None:
        if handle.fingerprint in seen:
            return
        orbit = _conjugate_orbit(group, handle)
        for h in orbit:
            seen.add(h.fingerprint)
            members.append(h)
        if len(members) > member_cap:
            raise ResourceLimitError(
                f"lattice member cap {member_cap} exceeded",
                partial_count=len(members))
        class_reps.append(handle)

    register(GroupHandle.trivial(group.degree))
    for rep in group.conjugacy_classes().representatives:
        register(generated_by([rep], degree=group.degree, cap=group.element_cap))

    i = 0
    while i < len(class_reps):
        base = class_reps[i]
        i += 1
        if base.order == group.order:
            continue
        for g in _double_coset_reps(group, base):
            if base.contains(g):
                continue
            register(generated_by(base.generators + (g,), cap=group.element_cap))

    members.sort(key=lambda h: (h.order, h.fingerprint))
    element_sets = [m.elements() for m in members]
    supersets: list[tuple[int, ...]] = []
    for a in range(len(members)):
        ups = tuple(b for b in range(len(members))
                    if a != b and members[b].order % members[a].order == 0
                    and element_sets[a] < element_sets[b])
        supersets.append(ups)
    top = len(members) - 1
    maximal = tuple(a for a in range(len(members)) if supersets[a] == (top,))
    lattice = SubgroupLattice(group,
                              tuple(Subgroup(group, m) for m in members),
                              tuple(supersets), maximal)
    group._cache["subgroup_lattice"] = lattice
    return lattice


def normal_closure_descent(sub: GroupHandle, ambient: GroupHandle) -> SeriesRecord:
    """H_0 = H, H_{i+1} = ⟨sub^{H_i}⟩ down to the stable term F(sub, H)."""
    if not sub.is_subset_of(ambient):
        raise ValueError("descent requires the subgroup to lie in the ambient group")
    terms = [ambient]
    while True:
        nxt = normal_closure(sub, terms[-1])
        if nxt.same_elements(terms[-1]):
            break
        terms.append(nxt)
    return SeriesRecord("normal_closure_descent",
                        tuple(Subgroup(ambient, t) for t in terms),
                        length=len(terms) - 1)


def descent_stable_term(sub: GroupHandle, ambient: GroupHandle) -> GroupHandle:
    return normal_closure_descent(sub, ambient).terms[-1].group


def descent_lemma_failures(sub: GroupHandle, series: SeriesRecord) -> list[str]:
    """Check the descent series facts: step normality, subnormality of every
    term in the top, and self-closure of the stable term.  Returns failure
    descriptions (empty when all hold)."""
    failures: list[str] = []
    top = series.terms[0].group
    groups = [t.group for t in series.terms]
    for i in range(len(groups) - 1):
        if not is_normal_in(groups[i + 1], groups[i]):
            failures.append(f"term {i + 1} is not normal in term {i}")
    for i, term in enumerate(groups):
        if not is_subnormal(term, top)[0]:
            failures.append(f"term {i} is not subnormal in the top group")
    stable = groups[-1]
    if not normal_closure(sub, stable).same_elements(stable):
        failures.append("stable term is not its own closure of the subgroup")
    return failures


@dataclass(frozen=True)
class ZipperCase:
    """Dichotomy data for one subgroup A with ⟨A^G⟩ = G.

    ``branch`` is ``"join_is_whole"`` when the self-closing proper
    overgroups generate G, ``"unique_maximal"`` when A lies in exactly one
    maximal subgroup, and ``"dichotomy_failed"`` otherwise (an engine bug,
    never expected).
    """

    subgroup: Subgroup
    omega: tuple[Subgroup, ...]
    y_join: Subgroup
    maximal_over: tuple[Subgroup, ...]
    branch: str
    lemma_failures: tuple[str, ...]
    unique_max_descent_value: bool


def zipper_case(group: GroupHandle, sub: GroupHandle,
                lattice: Optional[SubgroupLattice] = None) -> ZipperCase:
    """Scan the lattice for the generation dichotomy around one subgroup."""
    if lattice is None:
        lattice = all_subgroups(group)
    if not normal_closure(sub, group).same_elements(group):
        raise PreconditionError("requires the subgroup's normal closure to be the whole group")
    sub_elems = sub.elements()
    omega: list[GroupHandle] = []
    for member in lattice.members:
        h = member.group
        if h.order >= group.order or not sub_elems <= h.elements():
            continue
        if normal_closure(sub, h).same_elements(h):
            omega.append(h)
    y_gens: list[Permutation] = list(sub.generators)
    for h in omega:
        y_gens.extend(h.generators)
    y = generated_by(y_gens, degree=group.degree, cap=group.element_cap)
    maximal_over = [lattice.members[i].group for i in lattice.maximal
                    if sub_elems <= lattice.members[i].group.elements()]
    if y.same_elements(group):
        branch = "join_is_whole"
    elif len(maximal_over) == 1:
        branch = "unique_maximal"
    else:
        branch = "dichotomy_failed"

    failures: list[str] = []
    for m in maximal_over:
        series = normal_closure_descent(sub, m)
        failures.extend(f"maximal {m.order}: {msg}"
                        for msg in descent_lemma_failures(sub, series))
        stable = series.terms[-1].group.elements()
        for l in omega:
            if l.elements() <= m.elements() and not l.elements() <= stable:
                failures.append(
                    f"self-closing subgroup of order {l.order} escapes the "
                    f"descent value in a maximal of order {m.order}")
    unique_val = (unique_max_element_check(group, sub, lattice)
                  if maximal_over else False)
    return ZipperCase(
        subgroup=Subgroup(group, sub),
        omega=tuple(Subgroup(group, h) for h in omega),
        y_join=Subgroup(group, y),
        maximal_over=tuple(Subgroup(group, m) for m in maximal_over),
        branch=branch,
        lemma_failures=tuple(failures),
        unique_max_descent_value=unique_val,
    )


def unique_max_element_check(group: GroupHandle, sub: GroupHandle,
                             lattice: Optional[SubgroupLattice] = None) -> bool:
    """Whether {F(A, H) : H maximal over A} has a unique maximal element."""
    if lattice is None:
        lattice = all_subgroups(group)
    sub_elems = sub.elements()
    maximal_over = [lattice.members[i].group for i in lattice.maximal
                    if sub_elems <= lattice.members[i].group.elements()]
    if not maximal_over:
        raise PreconditionError("the subgroup lies in no maximal subgroup")
    values: dict[str, GroupHandle] = {}
    for m in maximal_over:
        v = descent_stable_term(sub, m)
        values.setdefault(v.fingerprint, v)
    handles = list(values.values())
    top_count = sum(
        1 for v in handles
        if not any(v.order < w.order and v.is_subset_of(w) for w in handles))
    return top_count == 1
