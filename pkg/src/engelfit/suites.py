"""Theorem suites: per-group checks, orchestration, and parallel execution."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .corpus import CorpusEntry, rebuild_entry
from .engel import (AutomorphismMap, baer_membership,
                    centralizer_intersection_check, commutator_descent,
                    engel_chain, j_set)
from .errors import ConsistencyError, ResourceLimitError
from .group import GroupHandle
from .perm import Permutation, format_cycles
from .report import GroupSummary, SuiteResult, VerdictReport, Violation
from .series import (fitting_subgroup, gen_fitting_height, gen_fitting_series,
                     generalized_fitting, insoluble_length,
                     upper_insoluble_series)
from .subgrp import (is_normal_in, is_subnormal, normal_closure,
                     normal_subgroups, quotient)
from .zipper import LATTICE_ORDER_CAP, all_subgroups, zipper_case

__all__ = ["Caps", "SUITE_ORDER", "SUITE_STATEMENTS", "run_suites", "analyze_text"]

SUITE_ORDER = ("baer", "thm11", "thm12", "thm13", "thmE", "cor15",
               "thmJ", "cor19", "lem31", "engine-crosschecks")

SUITE_STATEMENTS = {
    "baer": "iterated commutation with x collapses to the identity exactly "
            "when x lies in the Fitting subgroup",
    "thm11": "membership of x above the h-th generalized Fitting term matches "
             "min-k generalized Fitting height of the generated Engel subgroups",
    "thm12": "membership of x in the h-th upper insoluble term matches min-k "
             "insoluble length of the generated Engel subgroups",
    "thm13": "a subgroup whose conjugates generate either joins to the whole "
             "group through self-closing overgroups or lies in a unique maximal subgroup",
    "thmE": "when [G,a] = G the k-fold commutator sets generate the whole "
            "group for every k",
    "cor15": "generated Engel subgroups are subnormal, both stable terms agree, "
             "and the minimal heights are attained at the stable term",
    "thmJ": "for involutory a with [G,a] = G the commutator sets beyond the "
            "2-part exponent equal the inverted odd-order set, which generates G",
    "cor19": "the index of the Fitting subgroup is below the fourth power of "
             "the factorial of the inverted odd-order set size",
    "lem31": "the intersection of the fixed-point subgroup's conjugates over "
             "the inverted odd-order set is the central part of the fixed points",
    "engine-crosschecks": "independent algorithm pairs agree: generalized "
                          "Fitting routes, upper insoluble recurrence, "
                          "subnormality versus exhaustive chain search, "
                          "pinned known values",
}

REGULAR_QUOTIENT_CAP = 500
EXHAUSTIVE_SEARCH_CAP = 100


@dataclass(frozen=True)
class Caps:
    """Resource limits shared by all suites."""

    max_order: int = 200_000
    exhaustive_cap: int = 2_000
    lattice_max_order: int = LATTICE_ORDER_CAP
    k_cap: Optional[int] = None
    jobs: int = 1
    crosschecks: bool = True


@dataclass
class _Outcome:
    cases: int = 0
    passes: int = 0
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    resource_hit: bool = False


def _fmt(p: Permutation) -> str:
    return format_cycles(p)


def _violation(suite: str, group: str, **kv) -> Violation:
    return Violation(suite, group, tuple((k, str(v)) for k, v in kv.items()))


def _sample_elements(entry: CorpusEntry, caps: Caps) -> tuple[list[Permutation], Optional[str]]:
    """All elements when the group is small, class representatives beyond."""
    group = entry.group
    if group.order <= caps.exhaustive_cap:
        return list(group.sorted_elements()), None
    reps = list(group.conjugacy_classes().representatives)
    note = (f"group {entry.name}: order {group.order} exceeds exhaustive cap "
            f"{caps.exhaustive_cap}; checked {len(reps)} class representatives")
    return reps, note


# Per-element Engel facts are shared by the baer/thm11/thm12/cor15 suites;
# key is (group fingerprint, element).  Values are equal whenever keys are,
# so concurrent idempotent fills are safe.
@dataclass(frozen=True)
class _ElementFacts:
    reaches_identity: bool
    min_hstar: int
    min_lambda: int
    subnormal_all: bool
    stable_terms_equal: bool
    min_hstar_at_stable: bool
    min_lambda_at_stable: bool


_ELEMENT_FACTS: dict[tuple[str, Permutation], _ElementFacts] = {}


def _element_facts(group: GroupHandle, x: Permutation, caps: Caps) -> _ElementFacts:
    key = (group.fingerprint, x)
    cached = _ELEMENT_FACTS.get(key)
    if cached is not None:
        return cached
    chain = engel_chain(group, x, k_cap=caps.k_cap)
    distinct: dict[str, GroupHandle] = {}
    for h in chain.generated:
        distinct.setdefault(h.fingerprint, h)
    if not distinct:  # trivial group: E_1 duplicates E_0 immediately
        distinct[group.fingerprint] = group
    hstars = {fp: gen_fitting_height(h) for fp, h in distinct.items()}
    lambdas = {fp: insoluble_length(h) for fp, h in distinct.items()}
    facts = _ElementFacts(
        reaches_identity=chain.reaches_identity(),
        min_hstar=min(hstars.values()),
        min_lambda=min(lambdas.values()),
        subnormal_all=all(is_subnormal(h, group)[0] for h in distinct.values()),
        stable_terms_equal=chain.descent_stable.same_elements(chain.stable_k),
        min_hstar_at_stable=min(hstars.values()) == gen_fitting_height(chain.stable_k),
        min_lambda_at_stable=min(lambdas.values()) == insoluble_length(chain.stable_k),
    )
    _ELEMENT_FACTS[key] = facts
    return facts


def _suite_baer(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    fitting = fitting_subgroup(group)
    xs, note = _sample_elements(entry, caps)
    if note:
        out.notes.append(note)
    for x in xs:
        out.cases += 1
        left = baer_membership(group, x, k_cap=caps.k_cap)
        right = fitting.contains(x)
        if left == right:
            out.passes += 1
        else:
            out.violations.append(_violation(
                "baer", entry.name, x=_fmt(x),
                engel_collapses=left, in_fitting=right))
    return out


def _suite_thm11(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    height = gen_fitting_height(group)
    terms = [t.group for t in gen_fitting_series(group).terms]
    # fit_above[h] is the preimage of F(G / F*_h); membership of x there is
    # the left side of the equivalence at height h.
    fit_above: list[GroupHandle] = [fitting_subgroup(group)]
    for h in range(1, height + 1):
        term = terms[h - 1]
        if term.same_elements(group):
            fit_above.append(group)
        else:
            q = quotient(group, term)
            fit_above.append(q.preimage_of(fitting_subgroup(q.image)))
    xs, note = _sample_elements(entry, caps)
    if note:
        out.notes.append(note)
    for x in xs:
        facts = _element_facts(group, x, caps)
        for h in range(height + 1):
            out.cases += 1
            left = fit_above[h].contains(x)
            right = facts.min_hstar <= h
            if left == right:
                out.passes += 1
            else:
                out.violations.append(_violation(
                    "thm11", entry.name, x=_fmt(x), h=h,
                    above_term=left, min_height=facts.min_hstar))
    return out


def _suite_thm12(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    lam = insoluble_length(group)
    r_terms = [t.group for t in upper_insoluble_series(group, lam).terms]
    xs, note = _sample_elements(entry, caps)
    if note:
        out.notes.append(note)
    for x in xs:
        facts = _element_facts(group, x, caps)
        for h in range(lam + 1):
            out.cases += 1
            left = r_terms[h].contains(x)
            right = facts.min_lambda <= h
            if left == right:
                out.passes += 1
            else:
                out.violations.append(_violation(
                    "thm12", entry.name, x=_fmt(x), h=h,
                    in_upper_term=left, min_length=facts.min_lambda))
    return out


def _suite_cor15(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    xs, note = _sample_elements(entry, caps)
    if note:
        out.notes.append(note)
    for x in xs:
        facts = _element_facts(group, x, caps)
        out.cases += 1
        problems = []
        if not facts.subnormal_all:
            problems.append("generated Engel subgroup not subnormal")
        if not facts.stable_terms_equal:
            problems.append("descent and generated stable terms differ")
        if not facts.min_hstar_at_stable:
            problems.append("min generalized Fitting height missed at stable term")
        if not facts.min_lambda_at_stable:
            problems.append("min insoluble length missed at stable term")
        if problems:
            out.violations.append(_violation(
                "cor15", entry.name, x=_fmt(x), problems="; ".join(problems)))
        else:
            out.passes += 1
    return out


def _suite_thm13(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    if group.order > caps.lattice_max_order:
        out.notes.append(f"group {entry.name}: order {group.order} exceeds "
                         f"lattice cap {caps.lattice_max_order}; skipped")
        return out
    lattice = all_subgroups(group, max_order=caps.lattice_max_order)
    for member in lattice.members:
        sub = member.group
        if sub.order >= group.order:
            continue
        if not normal_closure(sub, group).same_elements(group):
            continue
        out.cases += 1
        case = zipper_case(group, sub, lattice)
        if case.branch == "dichotomy_failed" or case.lemma_failures:
            out.violations.append(_violation(
                "thm13", entry.name,
                subgroup=" ".join(_fmt(g) for g in sub.generators),
                branch=case.branch,
                lemma_failures="; ".join(case.lemma_failures) or "none"))
        else:
            out.passes += 1
    return out


def _automorphism_cases(entry: CorpusEntry) -> list[tuple[str, AutomorphismMap]]:
    return list(entry.automorphisms)


def _descent_is_whole(group: GroupHandle, alpha: AutomorphismMap) -> bool:
    return commutator_descent(group, alpha).terms[-1].group.same_elements(group)


def _suite_thmE(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    for name, alpha in _automorphism_cases(entry):
        if not _descent_is_whole(group, alpha):
            out.notes.append(f"group {entry.name}: automorphism {name} has "
                             f"[G,a] smaller than G; skipped")
            continue
        out.cases += 1
        chain = engel_chain(group, alpha, k_cap=caps.k_cap)
        bad = [k + 1 for k, h in enumerate(chain.generated)
               if not h.same_elements(group)]
        if bad:
            out.violations.append(_violation(
                "thmE", entry.name, automorphism=name,
                failing_k=",".join(map(str, bad))))
        else:
            out.passes += 1
    return out


def _involutory_cases(entry: CorpusEntry) -> list[tuple[str, AutomorphismMap]]:
    return [(n, a) for n, a in entry.automorphisms if a.is_involution()]


def _suite_thmJ(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    for name, alpha in _involutory_cases(entry):
        if not _descent_is_whole(group, alpha):
            out.notes.append(f"group {entry.name}: automorphism {name} has "
                             f"[G,a] smaller than G; skipped")
            continue
        out.cases += 1
        report = j_set(group, alpha)
        chain = engel_chain(group, alpha, k_cap=caps.k_cap)
        k = report.two_exponent
        problems = []
        for j in chain.indices_attained_beyond(k):
            if chain.sets[j] != report.j_elements:
                problems.append(f"commutator set at step {j} differs from the inverted set")
        for j in range(1, len(chain.sets)):
            if not report.j_elements <= chain.sets[j]:
                problems.append(f"inverted set escapes commutator set at step {j}")
        if not report.generated_j.same_elements(group):
            problems.append("inverted odd-order set fails to generate the group")
        if problems:
            out.violations.append(_violation(
                "thmJ", entry.name, automorphism=name,
                j_size=len(report.j_elements), two_part=report.two_part,
                problems="; ".join(problems)))
        else:
            out.passes += 1
            out.notes.append(f"group {entry.name}: automorphism {name}: "
                             f"|J|={len(report.j_elements)} two-part={report.two_part}")
    return out


def _suite_cor19(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    for name, alpha in _involutory_cases(entry):
        if not _descent_is_whole(group, alpha):
            continue
        out.cases += 1
        report = j_set(group, alpha)
        index = group.order // fitting_subgroup(group).order
        j_size = len(report.j_elements)
        bound = 1
        for i in range(2, j_size + 1):  # exact integer factorial, no overflow
            bound *= i
        bound = bound ** 4
        if index < bound:
            out.passes += 1
        else:
            out.violations.append(_violation(
                "cor19", entry.name, automorphism=name,
                fitting_index=index, j_size=j_size))
    return out


def _suite_lem31(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group
    for name, alpha in _involutory_cases(entry):
        if not _descent_is_whole(group, alpha):
            out.notes.append(f"group {entry.name}: automorphism {name} has "
                             f"[G,a] smaller than G; skipped")
            continue
        out.cases += 1
        check = centralizer_intersection_check(group, alpha)
        if check.ok:
            out.passes += 1
        else:
            out.violations.append(_violation(
                "lem31", entry.name, automorphism=name,
                intersection_order=check.intersection.order,
                expected_order=check.expected.order))
    return out


def _is_even(p: Permutation) -> bool:
    moved = len(p.moved_points())
    cycles = 0
    seen: set[int] = set()
    for i in p.moved_points():
        if i in seen:
            continue
        cycles += 1
        j = p.images[i]
        while j != i:
            seen.add(j)
            j = p.images[j]
    return (moved - cycles) % 2 == 0


_KNOWN_VALUES = {
    # entry name -> list of (label, callable(group) -> bool)
    "s4": [
        ("fitting subgroup is the Klein four-group",
         lambda g: sorted(fitting_subgroup(g).elements()) ==
         sorted(x for x in g.elements()
                if x.is_identity() or (x.order() == 2 and len(x.moved_points()) == 4))),
        ("generalized Fitting height is 3", lambda g: gen_fitting_height(g) == 3),
        ("normal lattice has 4 members", lambda g: len(normal_subgroups(g)) == 4),
    ],
    "s5": [
        ("generalized Fitting subgroup is the even half",
         lambda g: generalized_fitting(g).order == 60 and
         all(_is_even(x) for x in generalized_fitting(g).elements())),
        ("insoluble length is 1", lambda g: insoluble_length(g) == 1),
    ],
}


def _suite_crosschecks(entry: CorpusEntry, caps: Caps) -> _Outcome:
    out = _Outcome()
    group = entry.group

    out.cases += 1
    try:
        generalized_fitting(group, crosscheck=True)
        out.passes += 1
    except ConsistencyError as exc:
        out.violations.append(_violation(
            "engine-crosschecks", entry.name, check="gen-fitting-dual", error=exc))

    lam = insoluble_length(group)
    r_terms = [t.group for t in upper_insoluble_series(group, lam).terms]
    for i in range(lam):
        if r_terms[i].is_trivial() and group.order > REGULAR_QUOTIENT_CAP:
            out.notes.append(
                f"group {entry.name}: upper-series recurrence at level {i} "
                f"skipped (trivial term would need a degree-{group.order} regular action)")
            continue
        out.cases += 1
        q = quotient(group, r_terms[i])
        r1_image = upper_insoluble_series(q.image, 1).terms[1].group
        pulled = q.preimage_of(r1_image)
        if pulled.same_elements(r_terms[i + 1]):
            out.passes += 1
        else:
            out.violations.append(_violation(
                "engine-crosschecks", entry.name, check="upper-series-recurrence",
                level=i, pulled_order=pulled.order,
                expected_order=r_terms[i + 1].order))

    if group.order <= EXHAUSTIVE_SEARCH_CAP:
        out.cases += 1
        mismatch = _subnormal_mismatch(group)
        if mismatch is None:
            out.passes += 1
        else:
            out.violations.append(_violation(
                "engine-crosschecks", entry.name,
                check="subnormality-vs-exhaustive", detail=mismatch))

    for label, check in _KNOWN_VALUES.get(entry.name, []):
        out.cases += 1
        if check(group):
            out.passes += 1
        else:
            out.violations.append(_violation(
                "engine-crosschecks", entry.name, check="known-value", value=label))
    return out


def _subnormal_mismatch(group: GroupHandle) -> Optional[str]:
    """Compare descent subnormality with exhaustive chain search over the lattice."""
    lattice = all_subgroups(group, max_order=EXHAUSTIVE_SEARCH_CAP)
    handles = [m.group for m in lattice.members]
    sets = [h.elements() for h in handles]
    normal_in: dict[tuple[int, int], bool] = {}

    def normal(a: int, b: int) -> bool:
        key = (a, b)
        if key not in normal_in:
            normal_in[key] = is_normal_in(handles[a], handles[b])
        return normal_in[key]

    for b, big in enumerate(handles):
        inside = [a for a in range(len(handles)) if sets[a] <= sets[b]]
        for a in inside:
            # breadth-first search for a chain a ⊴ ... ⊴ b through the lattice
            reachable = {a}
            frontier = [a]
            while frontier:
                cur = frontier.pop()
                for up in inside:
                    if up not in reachable and sets[cur] <= sets[up] and normal(cur, up):
                        reachable.add(up)
                        frontier.append(up)
            exhaustive = b in reachable
            decided = is_subnormal(handles[a], big)[0]
            if exhaustive != decided:
                return (f"pair orders ({handles[a].order}, {big.order}): "
                        f"descent={decided} exhaustive={exhaustive}")
    return None


_SUITE_FNS: dict[str, Callable[[CorpusEntry, Caps], _Outcome]] = {
    "baer": _suite_baer,
    "thm11": _suite_thm11,
    "thm12": _suite_thm12,
    "thm13": _suite_thm13,
    "thmE": _suite_thmE,
    "cor15": _suite_cor15,
    "thmJ": _suite_thmJ,
    "cor19": _suite_cor19,
    "lem31": _suite_lem31,
    "engine-crosschecks": _suite_crosschecks,
}


def _run_entry(recipe: tuple, suite_ids: tuple[str, ...],
               caps: Caps) -> dict[str, _Outcome]:
    entry = rebuild_entry(recipe)
    results: dict[str, _Outcome] = {}
    for suite in suite_ids:
        if entry.group.order > caps.max_order:
            out = _Outcome()
            out.notes.append(f"group {entry.name}: order {entry.group.order} "
                             f"exceeds max order {caps.max_order}; skipped")
            results[suite] = out
            continue
        try:
            out = _SUITE_FNS[suite](entry, caps)
            if caps.crosschecks and suite != "engine-crosschecks":
                try:
                    generalized_fitting(entry.group, crosscheck=True)
                except ConsistencyError as exc:
                    out.violations.append(_violation(
                        suite, entry.name, check="gen-fitting-dual", error=exc))
            results[suite] = out
        except ResourceLimitError as exc:
            out = _Outcome()
            out.resource_hit = True
            out.notes.append(f"group {entry.name}: resource limit: {exc}")
            results[suite] = out
    return results


def _worker(args):
    recipe, suite_ids, caps = args
    return recipe, _run_entry(recipe, suite_ids, caps)


def run_suites(suite_ids: Iterable[str], entries: list[CorpusEntry],
               caps: Caps, corpus_name: str) -> VerdictReport:
    """Run the selected suites over a corpus and assemble the verdict report.

    Work is split per corpus entry; results are merged in canonical
    (suite order, entry name) order so reports are identical for any job
    count.
    """
    suite_ids = tuple(suite_ids)
    started = time.monotonic()
    entries = sorted(entries, key=lambda e: e.name)
    tasks = [(e.recipe, suite_ids, caps) for e in entries]
    per_entry: dict[str, dict[str, _Outcome]] = {}
    if caps.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=caps.jobs) as pool:
            for recipe, results in pool.map(_worker, tasks):
                per_entry[_recipe_name(recipe)] = results
    else:
        for task in tasks:
            per_entry[_recipe_name(task[0])] = _run_entry(*task)

    suite_results = []
    for suite in suite_ids:
        cases = passes = 0
        violations: list[Violation] = []
        notes: list[str] = []
        resource_hit = False
        for entry in entries:
            outcome = per_entry[entry.name][suite]
            cases += outcome.cases
            passes += outcome.passes
            violations.extend(outcome.violations)
            notes.extend(outcome.notes)
            resource_hit = resource_hit or outcome.resource_hit
        suite_results.append(SuiteResult(
            suite=suite, statement=SUITE_STATEMENTS[suite], cases=cases,
            passes=passes, violations=tuple(violations), notes=tuple(notes),
            resource_hit=resource_hit))
    groups = tuple(GroupSummary(e.name, e.group.degree, e.group.order,
                                e.group.fingerprint[:16])
                   for e in entries)
    return VerdictReport(corpus=corpus_name, groups=groups,
                         suites=tuple(suite_results),
                         elapsed=time.monotonic() - started)


def _recipe_name(recipe: tuple) -> str:
    return recipe[2] if recipe[0] == "builtin" else recipe[1]


def analyze_text(entry: CorpusEntry, include_elements: bool = False,
                 caps: Optional[Caps] = None) -> str:
    """Deterministic profile text for one group (characteristic subgroups,
    series, and optionally per-element Engel facts)."""
    caps = caps or Caps()
    from .series import characteristic_profile
    group = entry.group
    profile = characteristic_profile(group)
    lines = [f"group {entry.name}",
             f"  degree {group.degree}",
             f"  order {group.order}",
             f"  fitting-order {profile.fitting.order}",
             f"  layer-order {profile.layer.order}",
             f"  generalized-fitting-order {profile.gen_fitting.order}",
             f"  soluble-radical-order {profile.soluble_radical.order}",
             f"  odd-core-order {profile.odd_core.order}",
             f"  fitting-height {profile.fitting_height if profile.fitting_height is not None else 'n/a'}",
             f"  generalized-fitting-height {profile.gen_fitting_height}",
             f"  insoluble-length {profile.insoluble_length}"]
    series = gen_fitting_series(group)
    lines.append("  generalized-fitting-series " +
                 (" < ".join(str(t.order) for t in series.terms) or "(empty)"))
    r = upper_insoluble_series(group)
    lines.append("  upper-insoluble-series " +
                 " <= ".join(str(t.order) for t in r.terms))
    if include_elements:
        xs, note = _sample_elements(entry, caps)
        if note:
            lines.append(f"  note {note}")
        for x in xs:
            facts = _element_facts(group, x, caps)
            lines.append(f"  element {_fmt(x)} engel-collapse "
                         f"{'yes' if facts.reaches_identity else 'no'} "
                         f"min-height {facts.min_hstar} min-length {facts.min_lambda}")
    return "\n".join(lines) + "\n"
