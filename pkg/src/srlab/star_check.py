"""Bounded verification of mutually reduced families of group elements.

Identity-free sets M_1, ..., M_n are *mutually reduced* when every
product g_1 g_2 ... g_k = 1 whose factors come from the symmetric
closures of the sets has two cyclically adjacent factors lying together
in a single closure (indices wrap around, g_{k+1} = g_1).  The property
quantifies over all finite products, so it is only semi-decidable; the
checker enumerates products up to a caller-supplied length bound and
reports that bound alongside the verdict.

The search meets in the middle.  For each length k it indexes all
admissible suffix half-sequences by their product, then walks prefix
half-sequences in lexicographic order and joins them against suffixes
whose product inverts the prefix, checking the two seam adjacencies.
A partial product whose size exceeds (open slots) * (largest factor)
is discarded: factor sizes are subadditive, so no completion can cancel
it back to the identity.  Counterexamples are therefore found smallest
length first, then lexicographically least in the fixed factor order
(factors sorted by size, then text).

Adjacency is tested by membership: a pair is blocked when some closure
contains both factors, regardless of which set each factor was chosen
from.  An element may belong to several closures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .elements import FreeGroupOps, GroupOps, product_of
from .errors import AlphabetMismatch, BudgetExceeded, EmptySet, StructureMismatch
from .words import Word, generator, invert, multiply, power

HOLDS = "HoldsUpToBound"
COUNTEREXAMPLE = "Counterexample"

DEFAULT_EXPANSION_BUDGET = 10_000_000


@dataclass(frozen=True)
class ElementSet:
    """Finite identity-free set of canonical group elements.

    Elements are deduplicated and kept in (size, text) order so that two
    sets with the same members compare equal and enumerations over them
    are deterministic.
    """

    ops: GroupOps
    elements: tuple

    @staticmethod
    def of(ops: GroupOps, elements) -> "ElementSet":
        unique = set(elements)
        for g in unique:
            if ops.is_identity(g):
                raise ValueError("identity element not allowed in an ElementSet")
        ordered = tuple(sorted(unique, key=lambda g: (ops.size(g), ops.fmt(g))))
        return ElementSet(ops, ordered)

    @staticmethod
    def from_words(elements) -> "ElementSet":
        elements = list(elements)
        if not elements:
            raise EmptySet("cannot infer the alphabet of an empty word set")
        return ElementSet.of(FreeGroupOps(elements[0].alphabet), elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in set(self.elements)


@dataclass(frozen=True)
class MutualVerdict:
    """Outcome of a bounded mutual-reduction check.

    status is HoldsUpToBound or Counterexample; bound is the product
    length that was requested; witness, when present, is the offending
    factor sequence.
    """

    status: str
    bound: int
    witness: Optional[tuple]

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def _same_ops(sets: Sequence[ElementSet]) -> GroupOps:
    ops = sets[0].ops
    for s in sets[1:]:
        if s.ops != ops:
            raise AlphabetMismatch("element sets live in different groups")
    return ops


def symmetric_closure(m: ElementSet) -> ElementSet:
    """The set together with all inverses of its members."""
    inverses = [m.ops.invert(g) for g in m.elements]
    return ElementSet.of(m.ops, list(m.elements) + inverses)


def conjugate_set(m: ElementSet, x) -> ElementSet:
    """{x^-1 f x : f in m}; conjugation is injective, so |result| = |m|."""
    ops = m.ops
    xinv = ops.invert(x)
    return ElementSet.of(
        ops, [ops.multiply(ops.multiply(xinv, f), x) for f in m.elements]
    )


class _Budget:
    __slots__ = ("left", "total")

    def __init__(self, total: int):
        self.left = total
        self.total = total

    def spend(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise BudgetExceeded(
                f"mutual-reduction search exceeded expansion budget {self.total}"
            )


def _halves(universe, masks, sizes, length, k, ops, budget):
    """Yield admissible half-sequences (indices, product) in lex order.

    A partial with d factors placed may still be completed to a length-k
    identity product only if its size fits in the remaining k - d slots.
    """
    max_size = max(sizes)
    identity_el = ops.identity_element()

    def extend(prefix, prod, last_mask):
        depth = len(prefix)
        if depth == length:
            yield prefix, prod
            return
        for i in range(len(universe)):
            if last_mask is not None and masks[i] & last_mask:
                continue
            budget.spend()
            nxt = ops.multiply(prod, universe[i])
            if ops.size(nxt) > (k - depth - 1) * max_size:
                continue
            yield from extend(prefix + (i,), nxt, masks[i])

    yield from extend((), identity_el, None)


def _search_length(k, universe, masks, sizes, ops, budget):
    k1 = (k + 1) // 2
    k2 = k - k1
    by_product: dict = {}
    for indices, prod in _halves(universe, masks, sizes, k2, k, ops, budget):
        by_product.setdefault(_key(ops, prod), []).append(indices)
    if not by_product:
        return None
    for indices, prod in _halves(universe, masks, sizes, k1, k, ops, budget):
        suffixes = by_product.get(_key(ops, ops.invert(prod)))
        if not suffixes:
            continue
        seam_mask = masks[indices[-1]]
        head_mask = masks[indices[0]]
        for suffix in suffixes:
            if masks[suffix[0]] & seam_mask:
                continue
            if masks[suffix[-1]] & head_mask:
                continue
            return tuple(universe[i] for i in indices + suffix)
    return None


def _key(ops, element):
    return element


def check_mutually_reduced(
    sets: Sequence[ElementSet],
    max_len: int,
    expansion_budget: int = DEFAULT_EXPANSION_BUDGET,
) -> MutualVerdict:
    """Search for a violating product of length <= max_len.

    Returns the lexicographically first counterexample of minimal
    length, or HoldsUpToBound when none exists within the bound.
    """
    if max_len < 2:
        raise ValueError("max_len must be at least 2")
    sets = list(sets)
    if not sets:
        return MutualVerdict(HOLDS, max_len, None)
    ops = _same_ops(sets)
    closures = [frozenset(symmetric_closure(s).elements) for s in sets]
    universe = sorted(
        {g for c in closures for g in c}, key=lambda g: (ops.size(g), ops.fmt(g))
    )
    if not universe:
        return MutualVerdict(HOLDS, max_len, None)
    masks = [
        sum(1 << j for j, c in enumerate(closures) if g in c) for g in universe
    ]
    sizes = [ops.size(g) for g in universe]
    budget = _Budget(expansion_budget)
    for k in range(2, max_len + 1):
        witness = _search_length(k, universe, masks, sizes, ops, budget)
        if witness is not None:
            return MutualVerdict(COUNTEREXAMPLE, max_len, witness)
    return MutualVerdict(HOLDS, max_len, None)


def verify_mutual_witness(sets: Sequence[ElementSet], witness) -> bool:
    """Independently re-check a counterexample sequence.

    True when every factor lies in some closure, the product is the
    identity, and no cyclically adjacent pair shares a closure.
    """
    witness = tuple(witness)
    if len(witness) < 2:
        return False
    sets = list(sets)
    if not sets:
        return False
    ops = _same_ops(sets)
    closures = [frozenset(symmetric_closure(s).elements) for s in sets]
    for g in witness:
        if not any(g in c for c in closures):
            return False
    if not ops.is_identity(product_of(ops, witness)):
        return False
    k = len(witness)
    for i in range(k):
        g, h = witness[i], witness[(i + 1) % k]
        if any(g in c and h in c for c in closures):
            return False
    return True


def star_witness_locally_free(m: ElementSet, x: str, y: str) -> tuple[Word, Word, Word]:
    """Conjugators x_i = x^(2p+i) y x^(2p+i) over the longest member p.

    The three conjugated copies of m are expected to be mutually reduced;
    check_mutually_reduced is the acceptance oracle for that claim.
    """
    if not m.elements:
        raise EmptySet("witness construction needs a non-empty element set")
    if x == y:
        raise ValueError("the two generators must be distinct")
    first = m.elements[0]
    if not isinstance(first, Word):
        raise StructureMismatch("locally-free witnesses require free-group words")
    alphabet = first.alphabet
    p = max(len(w) for w in m.elements)
    gx = generator(alphabet, x)
    gy = generator(alphabet, y)
    out = []
    for i in (1, 2, 3):
        wing = power(gx, 2 * p + i)
        out.append(multiply(multiply(wing, gy), wing))
    return tuple(out)


@dataclass(frozen=True)
class FreeGenVerdict:
    """Outcome of a bounded free-generator certificate.

    relation, when present, is the offending word in the candidate
    generators as (pair index, exponent) syllables.
    """

    holds: bool
    bound: int
    relation: Optional[tuple]
    mutual: MutualVerdict


def _expected_remark_set(ops: GroupOps, members) -> frozenset:
    expected = set(members)
    for g in members:
        ginv = ops.invert(g)
        for h in members:
            if g != h:
                expected.add(ops.multiply(ginv, h))
    return frozenset(expected)


def free_generator_certificate(
    m1: ElementSet,
    m2: ElementSet,
    pairing,
    max_len: int,
    expansion_budget: int = DEFAULT_EXPANSION_BUDGET,
) -> FreeGenVerdict:
    """Certify that z_i = x_i y_i^-1 freely generate, up to a bound.

    m1 must equal {x_i} with all quotients x_i^-1 x_j adjoined, m2 the
    same for the y_i.  The certificate searches for a nontrivial relation
    among the z_i of syllable length <= max_len and additionally requires
    the pair (m1, m2) to be mutually reduced at the same bound.
    """
    pairing = list(pairing)
    if not pairing:
        raise StructureMismatch("pairing must name at least one generator pair")
    ops = _same_ops([m1, m2])
    xs = [p[0] for p in pairing]
    ys = [p[1] for p in pairing]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise StructureMismatch("paired elements must be distinct")
    if frozenset(m1.elements) != _expected_remark_set(ops, xs):
        raise StructureMismatch("first set is not {x_i} with quotients adjoined")
    if frozenset(m2.elements) != _expected_remark_set(ops, ys):
        raise StructureMismatch("second set is not {y_i} with quotients adjoined")
    zs = [ops.multiply(x, ops.invert(y)) for x, y in zip(xs, ys)]
    relation = find_relation(ops, zs, max_len, expansion_budget)
    mutual = check_mutually_reduced([m1, m2], max_len, expansion_budget)
    holds = relation is None and mutual.holds
    return FreeGenVerdict(holds, max_len, relation, mutual)


def find_relation(ops, elements, max_len: int, expansion_budget: int = DEFAULT_EXPANSION_BUDGET):
    """Shortest nontrivial relation among the elements, as a tuple of
    (index, exponent) pairs with no adjacent inverse pair, or None if every
    reduced product of syllable length <= max_len is nontrivial.

    Iterative deepening keeps the first hit shortest, then lexicographically
    least; the subadditive size bound prunes products that cannot return to
    the identity in the remaining syllables.
    """
    elements = list(elements)
    inverses = [ops.invert(z) for z in elements]
    budget = _Budget(expansion_budget)
    max_z = max((ops.size(z) for z in elements), default=0)

    def relation_at(limit, prefix, prod):
        depth = len(prefix)
        if depth == limit:
            return prefix if ops.is_identity(prod) else None
        for j in range(len(elements)):
            for exp, val in ((1, elements[j]), (-1, inverses[j])):
                if prefix and prefix[-1] == (j, -exp):
                    continue
                budget.spend()
                nxt = ops.multiply(prod, val)
                if ops.size(nxt) > (limit - depth - 1) * max_z:
                    continue
                found = relation_at(limit, prefix + ((j, exp),), nxt)
                if found:
                    return found
        return None

    for limit in range(1, max_len + 1):
        relation = relation_at(limit, (), ops.identity_element())
        if relation is not None:
            return relation
    return None
