"""Expansion-valued identities for q-Gaussian variables.

Moments, conversions between plain products and Wick products, the
creator/annihilator operator form of a Wick product, and products of Wick
products over block-partitioned index sets.  Every function returns exact
canonical data with q kept as a formal variable; specializing q is left to
the evaluator in the oracle module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import (
    NORMAL,
    WICK,
    CovarianceMonomial,
    Expansion,
    QPolynomial,
    VariableWord,
    accumulate_term,
    diagram_term,
)
from .diagrams import (
    CrossingStats,
    GroundSet,
    SignSequence,
    catalan_check,
    crossing_stats,
    ensure_within_cap,
    enumerate_compatible,
    enumerate_complete,
    enumerate_diagrams,
    enumerate_nonlinking,
)
from .errors import DomainError


@dataclass(frozen=True)
class OperatorWord:
    """Product of creation (+1) and annihilation (-1) operators on indexed vectors.

    letters[0] is the leftmost factor; application to a vector runs right to
    left.  Operator order is meaningful, so there is no canonical reordering.
    """

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        letters = tuple((int(s), int(i)) for s, i in self.letters)
        object.__setattr__(self, "letters", letters)
        if any(s not in (1, -1) for s, _ in letters):
            raise DomainError("operator signs must be +1 (create) or -1 (annihilate)")

    def __len__(self) -> int:
        return len(self.letters)

    def to_json(self) -> list[list[int]]:
        return [list(letter) for letter in self.letters]


@dataclass(frozen=True)
class WickOperatorForm:
    """Creator-then-annihilator operator sum of a Wick product.

    One summand per split of the variables into a creator set and an
    annihilator set (each listed increasingly), weighted by q raised to the
    number of creator/annihilator index inversions.  n variables give 2^n
    summands.
    """

    summands: tuple[tuple[OperatorWord, int], ...]

    def to_json(self) -> list[dict]:
        return [{"word": w.to_json(), "qpow": p} for w, p in self.summands]


def wick_operator_form(n: int, cap: int | None = None) -> WickOperatorForm:
    """Operator form of the Wick product of variables 1..n."""
    if n < 0:
        raise DomainError(f"variable count must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    universe = tuple(range(1, n + 1))
    summands = []
    for k in range(n, -1, -1):
        for creators in itertools.combinations(universe, k):
            annihilators = tuple(x for x in universe if x not in creators)
            inversions = sum(1 for i in creators for j in annihilators if i > j)
            letters = tuple((1, i) for i in creators) + tuple(
                (-1, j) for j in annihilators
            )
            summands.append((OperatorWord(letters), inversions))
    return WickOperatorForm(tuple(summands))


def _diagram_sum(
    diagrams,
    kind: str,
    power: Callable[[CrossingStats], int],
    signed: bool = False,
    keep: Callable[[CrossingStats], bool] | None = None,
    labels=None,
) -> Expansion:
    acc: dict = {}
    for diagram in diagrams:
        stats = crossing_stats(diagram)
        if keep is not None and not keep(stats):
            continue
        coeff = -1 if signed and len(diagram.pairs) % 2 else 1
        cov, word = diagram_term(diagram, kind, labels=labels)
        accumulate_term(acc, cov, word, QPolynomial.q_power(power(stats), coeff))
    return Expansion(acc)


def m_epsilon_expansion(eps: SignSequence, cap: int | None = None) -> Expansion:
    """Vacuum expectation of the signed operator word as a covariance sum.

    Zero for non-Catalan patterns; otherwise one scalar term per compatible
    complete diagram, weighted by q to its crossing number.
    """
    ok, _ = catalan_check(eps)
    if not ok:
        return Expansion.zero()
    return _diagram_sum(enumerate_compatible(eps, cap=cap), NORMAL, lambda s: s.c)


def moment_expansion(n: int, cap: int | None = None) -> Expansion:
    """Joint moment of n variables: complete diagrams weighted by q^crossings.

    Odd n gives the zero expansion.
    """
    if n < 0:
        raise DomainError(f"moment order must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    if n % 2:
        return Expansion.zero()
    return _diagram_sum(enumerate_complete(GroundSet(n), cap=cap), NORMAL, lambda s: s.c)


def wick_to_normal_word(indices: Sequence[int], cap: int | None = None) -> Expansion:
    """Wick product of the given (strictly increasing) variable indices as a
    signed sum of plain products: every diagram contributes its covariance
    factors and singleton word, with sign (-1)^pairs and power g - c."""
    indices = tuple(int(i) for i in indices)
    if any(a >= b for a, b in zip(indices, indices[1:])):
        raise DomainError(f"variable indices must be strictly increasing, got {indices}")
    ensure_within_cap(len(indices), cap)
    return _diagram_sum(
        enumerate_diagrams(GroundSet(len(indices)), cap=cap),
        NORMAL,
        lambda s: s.a,
        signed=True,
        labels=indices,
    )


def wick_to_normal(n: int, cap: int | None = None) -> Expansion:
    """Wick product of variables 1..n expanded into plain products."""
    if n < 0:
        raise DomainError(f"variable count must be nonnegative, got {n}")
    return wick_to_normal_word(range(1, n + 1), cap=cap)


def wick_recursive(n: int, cap: int | None = None) -> Expansion:
    """Wick product of 1..n via the peel-the-first-variable recursion.

    Must agree term for term with wick_to_normal; kept as an independent
    construction so the two routes check each other.
    """
    if n < 0:
        raise DomainError(f"variable count must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    return _wick_recursive(tuple(range(1, n + 1)))


def _wick_recursive(indices: tuple[int, ...]) -> Expansion:
    if not indices:
        return Expansion.identity()
    head, rest = indices[0], indices[1:]
    acc: dict = {}
    # multiplying by the field of the head variable on the left prepends it
    # to every plain word
    for (cov, word), poly in _wick_recursive(rest).terms.items():
        accumulate_term(acc, cov, VariableWord((head,) + word.indices, NORMAL), poly)
    for pos, other in enumerate(rest):
        trimmed = rest[:pos] + rest[pos + 1 :]
        factor = QPolynomial.q_power(pos, -1)
        cov_head = CovarianceMonomial(((head, other),))
        for (cov, word), poly in _wick_recursive(trimmed).terms.items():
            accumulate_term(acc, cov_head * cov, word, poly * factor)
    return Expansion(acc)


def normal_to_wick(n: int, cap: int | None = None) -> Expansion:
    """Plain product of variables 1..n as a sum of Wick-tagged terms, with
    power the total crossing number and no sign factor."""
    if n < 0:
        raise DomainError(f"variable count must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    return _diagram_sum(
        enumerate_diagrams(GroundSet(n), cap=cap), WICK, lambda s: s.tc
    )


def wick_substitution_rules(
    e: Expansion, cap: int | None = None
) -> dict[VariableWord, Expansion]:
    """Normal-product rewrite rule for every Wick word occurring in e."""
    return {word: wick_to_normal_word(word.indices, cap=cap) for word in e.wick_words()}


def _block_ground(blocks: Sequence[int]) -> GroundSet:
    blocks = tuple(int(b) for b in blocks)
    if not blocks:
        raise DomainError("at least one block is required")
    return GroundSet(sum(blocks), blocks)


def product_expectation(blocks: Sequence[int], cap: int | None = None) -> Expansion:
    """Expectation of a product of Wick products, one per block.

    Positions are the block elements in lexicographic order, relabelled
    1..total; the sum runs over complete diagrams that never pair two
    positions of the same block, weighted by q^crossings.
    """
    ground = _block_ground(blocks)
    ensure_within_cap(ground.size, cap)
    return _diagram_sum(
        enumerate_nonlinking(ground, complete_only=True, cap=cap), NORMAL, lambda s: s.c
    )


def product_expansion(blocks: Sequence[int], cap: int | None = None) -> Expansion:
    """Product of Wick products, one per block, expanded into Wick terms.

    Runs over all non-linking diagrams (singletons allowed), each carrying a
    Wick-tagged singleton word and the power tc = crossings + degenerate.
    """
    ground = _block_ground(blocks)
    ensure_within_cap(ground.size, cap)
    return _diagram_sum(
        enumerate_nonlinking(ground, complete_only=False, cap=cap), WICK, lambda s: s.tc
    )


# Free specializations: the same sums restricted by diagram class instead of
# by killing q-powers afterwards.  Each must coincide with specialize_free of
# its general counterpart.

def free_moment_expansion(n: int, cap: int | None = None) -> Expansion:
    """Moment at q = 0: complete noncrossing diagrams only."""
    if n < 0:
        raise DomainError(f"moment order must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    if n % 2:
        return Expansion.zero()
    return _diagram_sum(
        enumerate_complete(GroundSet(n), cap=cap),
        NORMAL,
        lambda s: 0,
        keep=lambda s: s.c == 0,
    )


def free_wick_to_normal(n: int, cap: int | None = None) -> Expansion:
    """Wick product at q = 0: gap-free diagrams only, signs retained."""
    if n < 0:
        raise DomainError(f"variable count must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    return _diagram_sum(
        enumerate_diagrams(GroundSet(n), cap=cap),
        NORMAL,
        lambda s: 0,
        signed=True,
        keep=lambda s: s.g == 0,
    )


def free_normal_to_wick(n: int, cap: int | None = None) -> Expansion:
    """Plain product at q = 0: strongly noncrossing diagrams only."""
    if n < 0:
        raise DomainError(f"variable count must be nonnegative, got {n}")
    ensure_within_cap(n, cap)
    return _diagram_sum(
        enumerate_diagrams(GroundSet(n), cap=cap),
        WICK,
        lambda s: 0,
        keep=lambda s: s.tc == 0,
    )


def free_product_expectation(blocks: Sequence[int], cap: int | None = None) -> Expansion:
    """Product expectation at q = 0: noncrossing complete non-linking diagrams."""
    ground = _block_ground(blocks)
    ensure_within_cap(ground.size, cap)
    return _diagram_sum(
        enumerate_nonlinking(ground, complete_only=True, cap=cap),
        NORMAL,
        lambda s: 0,
        keep=lambda s: s.c == 0,
    )


def free_product_expansion(blocks: Sequence[int], cap: int | None = None) -> Expansion:
    """Product of Wick products at q = 0: strongly noncrossing non-linking diagrams."""
    ground = _block_ground(blocks)
    ensure_within_cap(ground.size, cap)
    return _diagram_sum(
        enumerate_nonlinking(ground, complete_only=False, cap=cap),
        WICK,
        lambda s: 0,
        keep=lambda s: s.tc == 0,
    )
