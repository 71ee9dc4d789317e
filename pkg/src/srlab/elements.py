"""Uniform group-element interface for the bounded product searches.

The checkers in :mod:`srlab.star_check` enumerate products of elements
drawn from arbitrary groups.  They only need multiplication, inversion,
an identity test, a size estimate for pruning, and a stable text form
for reports.  Concrete groups supply those through a small ops object;
free-group words are covered here, structured HNN and amalgam elements
ship their own ops in their modules.

Requirements on an ops object:

- elements are canonical values: equal group elements compare and hash
  equal, so they can key dictionaries;
- ``size`` is subadditive (size(g*h) <= size(g) + size(h)), invariant
  under inversion, and zero exactly on the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Protocol

from .words import Alphabet, Word, identity, invert, multiply


class GroupOps(Protocol):
    def multiply(self, g, h): ...

    def invert(self, g): ...

    def identity_element(self): ...

    def is_identity(self, g) -> bool: ...

    def size(self, g) -> int: ...

    def fmt(self, g) -> str: ...


@dataclass(frozen=True)
class FreeGroupOps:
    """Free-group words over a fixed alphabet as checker elements."""

    alphabet: Alphabet

    def multiply(self, g: Word, h: Word) -> Word:
        return multiply(g, h)

    def invert(self, g: Word) -> Word:
        return invert(g)

    def identity_element(self) -> Word:
        return identity(self.alphabet)

    def is_identity(self, g: Word) -> bool:
        return g.is_identity

    def size(self, g: Word) -> int:
        return len(g)

    def fmt(self, g: Word) -> str:
        return str(g)


def product_of(ops: GroupOps, factors) -> Hashable:
    """Left-to-right product of an iterable of elements."""
    acc = ops.identity_element()
    for g in factors:
        acc = ops.multiply(acc, g)
    return acc


def map_basis_coords(
    alphabet: Alphabet, basis: tuple[Word, ...], coords: tuple[int, ...]
) -> Word:
    """Product of signed basis words: coords (i, -j, ...) selects
    basis[i-1] * basis[j-1]^-1 * ...; the index-aligned isomorphisms in the
    extension modules are applied this way."""
    out = identity(alphabet)
    for e in coords:
        w = basis[abs(e) - 1]
        out = multiply(out, w if e > 0 else invert(w))
    return out
