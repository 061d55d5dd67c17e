"""Finite permutation-group engine and verification harness.

Computes the invariants of finite groups tied to iterated commutator
(Engel) sets - Fitting and generalized Fitting series, insoluble length,
inverted-element sets, normal-closure descent - and exhaustively checks
the structural statements relating them over corpora of small groups.
"""

from .errors import (AutomorphismError, ConsistencyError, EngelfitError,
                     ParseError, PreconditionError, ResourceLimitError)
from .perm import (Permutation, commutator, compose, element_order,
                   format_cycles, p_part, parse_cycles)
from .group import (ConjugacyClassTable, GroupHandle, StabilizerChain,
                    close_group, generated_by)
from .subgrp import (NormalLattice, QuotientMap, SeriesRecord, Subgroup,
                     center, centralizer, commutator_subgroup, derived_series,
                     derived_subgroup, is_nilpotent, is_perfect, is_quasisimple,
                     is_simple, is_soluble, is_subnormal, join, lower_central_series,
                     minimal_normals, normal_closure, normal_core,
                     normal_subgroups, quotient, socle, subgroup_of)
from .series import (CharacteristicProfile, characteristic_profile,
                     fitting_height, fitting_series, fitting_subgroup,
                     gen_fitting_height, gen_fitting_series,
                     generalized_fitting, insoluble_length, layer, o_p_core,
                     odd_core, soluble_radical, upper_insoluble_series)
from .engel import (AutomorphismMap, CentralizerCheck, EngelChain,
                    InvolutionReport, baer_membership,
                    centralizer_intersection_check, commutator_descent,
                    commutator_with_actor, engel_chain, fixed_subgroup,
                    holomorph_extension, inner, j_set, make_automorphism)
from .zipper import (SubgroupLattice, ZipperCase, all_subgroups,
                     normal_closure_descent, unique_max_element_check,
                     zipper_case)
from .corpus import (CorpusEntry, builtin, get_corpus, load_corpus,
                     parse_group_file, serialize_group_file, small_std)
from .report import (GroupSummary, SuiteResult, VerdictReport, Violation,
                     parse_report, render_report, write_report)
from .suites import Caps, SUITE_ORDER, analyze_text, run_suites

__version__ = "0.1.0"
