"""Exact diagram-sum calculus for q-Gaussian variables.

Moments, Wick products and normal products are computed as canonical sums
over pair-partition diagrams weighted by crossing statistics, with every
coefficient kept as an exact rational polynomial in q.  A brute-force
truncated Fock-space oracle evaluates the same quantities operator by
operator so the two routes can be checked against each other.
"""

from .algebra import (
    NORMAL,
    WICK,
    CovarianceMonomial,
    Expansion,
    QPolynomial,
    VariableWord,
    diagram_term,
    expansion_combine,
    qpoly_eval,
    specialize_free,
    substitute_wick,
)
from .diagrams import (
    CrossingStats,
    DiagramClasses,
    FeynmanDiagram,
    GroundSet,
    PairStats,
    SignSequence,
    catalan_check,
    catalan_sequences,
    classify,
    crossing_stats,
    enumerate_compatible,
    enumerate_complete,
    enumerate_diagrams,
    enumerate_nonlinking,
    enumeration_cap,
    epsilon_of,
)
from .errors import DomainError, QwickError, SizeLimitError, TruncationOverflowError
from .fock import (
    FockParams,
    FockVector,
    OneParticleVector,
    annihilate,
    apply_field_word,
    apply_operator_word,
    apply_wick_product,
    create,
    evaluate_expansion,
    field_apply,
    gram_check,
    q_inner,
    vacuum_expectation,
)
from .verify import VerifyReport, run_check
from .wick import (
    OperatorWord,
    WickOperatorForm,
    free_moment_expansion,
    free_normal_to_wick,
    free_product_expansion,
    free_product_expectation,
    free_wick_to_normal,
    m_epsilon_expansion,
    moment_expansion,
    normal_to_wick,
    product_expansion,
    product_expectation,
    wick_operator_form,
    wick_recursive,
    wick_substitution_rules,
    wick_to_normal,
    wick_to_normal_word,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
