"""Communication-complexity classification of regular languages.

The package computes syntactic ordered monoids of deterministic automata,
classifies languages by their non-deterministic communication complexity
with replayable certificates, and verifies the supporting protocols,
covers and reductions with exact brute-force oracles at desk scale.
"""

from .automata import (
    EPSILON, CapError, CcError, Dfa, FormatError, accepts, builtin_language,
    builtin_language_names, minimize, parse_dfa, serialize_dfa,
)
from .classify import (
    BUILTIN_MONOID_NAMES, Certificate, Classification, builtin_monoid,
    classify_nondet, find_polcom_exclusion_witness, find_shuffle_witness,
    is_shuffle, serialize_classification, verify_certificate,
)
from .commcc import (
    CommFunction, Cover, ProtocolNode, Rectangle, RectangleMeasure,
    builtin_function, exact_deterministic_cc, language_problem,
    language_problem_partition, max_fooling_set, max_rectangle_measure,
    min_cover, min_disjoint_cover, monochromatic_color, monoid_problem,
    serialize_cover, serialize_function, simulate_cover_protocol,
)
from .monoid import (
    FiniteMonoid, MonoidMorphism, OrderIdeal, OrderedMonoid, StableOrder,
    check_property, commutative_quotient, divides, eval_term, eval_word,
    exponent, find_tq, ideal_generated, maximal_subgroups,
    satisfies_identity, serialize_monoid, syntactic_ordered_monoid,
    transition_monoid,
)
from .reductions import (
    ACCEPT_IS_ONE, ACCEPT_IS_ZERO, BUILTIN_REDUCTION_NAMES, LocalReduction,
    MonoidLanguageEncoding, VerificationReport, apply_reduction,
    builtin_reduction, encode_monoid_as_language,
    search_local_reduction_nonexistence, serialize_reduction,
    verify_reduction,
)

__version__ = "0.1.0"
