"""Finite permutation groups: closure, stabilizer chains, conjugacy classes."""

from __future__ import annotations

import hashlib
from array import array
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ConsistencyError, ResourceLimitError
from .perm import Permutation

__all__ = [
    "ELEMENT_CAP",
    "GroupHandle",
    "StabilizerChain",
    "ConjugacyClassTable",
    "close_group",
    "generated_by",
]

ELEMENT_CAP = 200_000


class _Level:
    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point: int, identity: Permutation):
        self.point = point
        self.gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {point: identity}


class StabilizerChain:
    """Deterministic Schreier-Sims stabilizer chain.

    One level is pre-created per support point in ascending order, so every
    generator or residue lands at the level of its smallest moved point and
    the base comes out as the smallest moved points, ascending.  Redundant
    levels are trimmed once construction finishes.  Seed generators are
    processed in sorted order and orbits grown breadth-first, making the
    chain a pure function of the generating set.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int):
        self.degree = degree
        self._identity = Permutation.identity(degree)
        gens = sorted({g for g in generators if not g.is_identity()})
        support = sorted({p for g in gens for p in g.moved_points()})
        self.levels: list[_Level] = [_Level(p, self._identity) for p in support]
        for g in gens:
            self._add(g)
        self.levels = [lvl for lvl in self.levels if len(lvl.transversal) > 1]

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(level.point for level in self.levels)

    @property
    def order(self) -> int:
        n = 1
        for level in self.levels:
            n *= len(level.transversal)
        return n

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise ValueError(f"degree mismatch: {g.degree} vs {self.degree}")
        residue, _ = self._sift(g, 0)
        return residue.is_identity()

    def _sift(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        """Reduce g by transversal elements; returns (residue, stuck level)."""
        for i in range(start, len(self.levels)):
            level = self.levels[i]
            point = g.images[level.point]
            u = level.transversal.get(point)
            if u is None:
                return g, i
            g = g * u.inverse()
        return g, len(self.levels)

    def _add(self, g: Permutation) -> None:
        residue, j = self._sift(g, 0)
        if residue.is_identity():
            return
        # a nontrivial residue moves some support point, so it sticks at a
        # real level and never needs the chain extended
        self.levels[j].gens.append(residue)
        self._complete(j)

    def _strong_gens(self, i: int) -> list[Permutation]:
        """Strong generators fixing the first i base points."""
        out: list[Permutation] = []
        for level in self.levels[i:]:
            out.extend(level.gens)
        return out

    def _recompute_orbit(self, i: int) -> None:
        level = self.levels[i]
        gens = self._strong_gens(i)
        transversal = {level.point: self._identity}
        queue = [level.point]
        while queue:
            point = queue.pop(0)
            u = transversal[point]
            for g in gens:
                q = g.images[point]
                if q not in transversal:
                    transversal[q] = u * g
                    queue.append(q)
        level.transversal = transversal

    def _find_missing(self, i: int) -> Optional[tuple[Permutation, int]]:
        """First Schreier generator at level i not generated below it."""
        level = self.levels[i]
        gens = self._strong_gens(i)
        for point in sorted(level.transversal):
            u = level.transversal[point]
            for g in gens:
                v = level.transversal[g.images[point]]
                schreier = u * g * v.inverse()
                residue, j = self._sift(schreier, i + 1)
                if not residue.is_identity():
                    return residue, j
        return None

    def _complete(self, start: int) -> None:
        # Walk levels from `start` upward; any missing Schreier residue is
        # placed deeper and processing resumes there, so on exit every
        # level's Schreier generators sift to the identity.
        i = start
        while i >= 0:
            self._recompute_orbit(i)
            missing = self._find_missing(i)
            if missing is None:
                i -= 1
                continue
            residue, j = missing
            self.levels[j].gens.append(residue)
            i = j


@dataclass(frozen=True)
class ConjugacyClassTable:
    """Class representatives (lexicographically least members) and sizes."""

    representatives: tuple[Permutation, ...]
    class_sizes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.representatives)


class GroupHandle:
    """A finite permutation group, immutable after construction.

    The element set is materialized lazily via breadth-first closure
    (bounded by ``element_cap``); the stabilizer chain supplies order and
    membership independently, and the two routes are cross-checked
    whenever both exist.
    """

    __slots__ = ("degree", "generators", "element_cap",
                 "_elements", "_sorted", "_chain", "_fingerprint", "_cache")

    def __init__(self, generators: Iterable[Permutation], element_cap: int = ELEMENT_CAP):
        gens = tuple(generators)
        if not gens:
            raise ValueError("generator list must be nonempty")
        degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators must share a degree")
        self.degree = degree
        self.generators = gens
        self.element_cap = element_cap
        self._elements: Optional[frozenset[Permutation]] = None
        self._sorted: Optional[tuple[Permutation, ...]] = None
        self._chain: Optional[StabilizerChain] = None
        self._fingerprint: Optional[str] = None
        self._cache: dict = {}

    @classmethod
    def trivial(cls, degree: int) -> "GroupHandle":
        h = cls((Permutation.identity(degree),))
        h._elements = frozenset([Permutation.identity(degree)])
        return h

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def elements(self) -> frozenset[Permutation]:
        if self._elements is None:
            self._elements = frozenset(
                _bfs_closure(self.generators, self.degree, self.element_cap))
            self._check_order_agreement()
        return self._elements

    def sorted_elements(self) -> tuple[Permutation, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.elements()))
        return self._sorted

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.generators, self.degree)
            self._check_order_agreement()
        return self._chain

    def _check_order_agreement(self) -> None:
        if self._chain is not None and self._elements is not None:
            if self._chain.order != len(self._elements):
                raise ConsistencyError(
                    f"stabilizer chain order {self._chain.order} != closure "
                    f"size {len(self._elements)}")

    @property
    def order(self) -> int:
        if self._elements is not None:
            return len(self._elements)
        return self.chain.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise ValueError(f"degree mismatch: {g.degree} vs {self.degree}")
        if self._elements is not None:
            return g in self._elements
        return self.chain.contains(g)

    def chain_contains(self, g: Permutation) -> bool:
        """Membership via the stabilizer chain, ignoring the element set."""
        return self.chain.contains(g)

    @property
    def fingerprint(self) -> str:
        """Digest of the sorted element list; equal iff same element set."""
        if self._fingerprint is None:
            h = hashlib.sha256()
            h.update(self.degree.to_bytes(4, "big"))
            for e in self.sorted_elements():
                h.update(array("I", e.images).tobytes())
            self._fingerprint = h.hexdigest()
        return self._fingerprint

    def same_elements(self, other: "GroupHandle") -> bool:
        return self.degree == other.degree and self.elements() == other.elements()

    def is_subset_of(self, other: "GroupHandle") -> bool:
        return self.degree == other.degree and self.elements() <= other.elements()

    def conjugacy_classes(self) -> ConjugacyClassTable:
        cached = self._cache.get("classes")
        if cached is not None:
            return cached
        seen: set[Permutation] = set()
        reps: list[Permutation] = []
        sizes: list[int] = []
        for e in self.sorted_elements():
            if e in seen:
                continue
            orbit = {e}
            queue = [e]
            while queue:
                x = queue.pop()
                for g in self.generators:
                    y = x.conjugate(g)
                    if y not in orbit:
                        orbit.add(y)
                        queue.append(y)
            reps.append(e)
            sizes.append(len(orbit))
            seen |= orbit
        table = ConjugacyClassTable(tuple(reps), tuple(sizes))
        self._cache["classes"] = table
        return table

    def __repr__(self) -> str:
        known = len(self._elements) if self._elements is not None else "?"
        return f"<group deg={self.degree} gens={len(self.generators)} order={known}>"


def _bfs_closure(generators: Iterable[Permutation], degree: int, cap: int) -> set[Permutation]:
    identity = Permutation.identity(degree)
    elements = {identity}
    frontier = [identity]
    while frontier:
        new: list[Permutation] = []
        for e in frontier:
            for g in generators:
                f = e * g
                if f not in elements:
                    if len(elements) >= cap:
                        raise ResourceLimitError(
                            f"element cap {cap} exceeded during closure",
                            partial_count=len(elements))
                    elements.add(f)
                    new.append(f)
        frontier = new
    return elements


def close_group(generators: Iterable[Permutation], cap: int = ELEMENT_CAP) -> GroupHandle:
    """Materialize the group generated by `generators` (fails loudly at cap)."""
    handle = GroupHandle(generators, element_cap=cap)
    handle.elements()
    return handle


def generated_by(perms: Iterable[Permutation], degree: Optional[int] = None,
                 cap: int = ELEMENT_CAP) -> GroupHandle:
    """Subgroup generated by the given permutations, with a reduced generator list.

    Permutations already generated by earlier ones are dropped, so the
    stored generator count stays logarithmic in the group order.  An empty
    input yields the trivial group (degree required).
    """
    items = sorted(set(perms))
    if not items:
        if degree is None:
            raise ValueError("degree required for an empty generating set")
        return GroupHandle.trivial(degree)
    degree = items[0].degree
    gens: list[Permutation] = []
    current = {Permutation.identity(degree)}
    for x in items:
        if x not in current:
            gens.append(x)
            current = _bfs_closure(gens, degree, cap)
    handle = GroupHandle(tuple(gens) or (Permutation.identity(degree),), element_cap=cap)
    handle._elements = frozenset(current)
    return handle
