"""Antichain bases for upward-closed sets of markings.

An upward-closed set is represented by its finite set of minimal
elements.  Basis sizes stay small in practice, so maintenance is a plain
pairwise dominance sweep (quadratic) over a flat list.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Sequence

from .net import Marking, Ordering


def _check_same_domain(elements: Sequence[Marking]) -> None:
    if elements:
        n = len(elements[0])
        for m in elements:
            if len(m) != n:
                raise ValueError("markings with different domains in one basis")


def _is_antichain(elements: Sequence[Marking]) -> bool:
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if a.compare(b) is not Ordering.INCOMPARABLE:
                return False
    return True


def _insert(kept: List[Marking], m: Marking) -> List[Marking]:
    # kept is an antichain; returns an antichain representing kept + {m}.
    out: List[Marking] = []
    for x in kept:
        c = m.compare(x)
        if c is Ordering.GREATER or c is Ordering.EQUAL:
            # Some x <= m already: m adds nothing.  No other element can
            # be above m, or it would be comparable with x.
            return kept
        if c is Ordering.LESS:
            continue  # m strictly below x: x is now redundant
        out.append(x)
    out.append(m)
    return out


class Basis:
    """Minimal elements of an upward-closed set, in insertion order."""

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[Marking] = ()) -> None:
        elements = tuple(elements)
        _check_same_domain(elements)
        if __debug__ and not _is_antichain(elements):
            raise ValueError("basis elements must be pairwise incomparable")
        self.elements = elements

    def contains(self, m: Marking) -> bool:
        """Whether ``m`` lies in the upward closure of this basis."""
        if self.elements:
            self.elements[0]._check_domain(m)
        return any(x.leq(m) for x in self.elements)

    def union(self, new: Iterable[Marking]) -> "Basis":
        """Minimal elements of (this set) union (upward closure of ``new``)."""
        kept = list(self.elements)
        for m in new:
            kept = _insert(kept, m)
        b = Basis.__new__(Basis)
        b.elements = tuple(kept)
        _check_same_domain(b.elements)
        return b

    def filter_uncovered(self, candidates: Iterable[Marking]) -> List[Marking]:
        """The candidates that are not already in this upward-closed set."""
        return [m for m in candidates if not self.contains(m)]

    def is_antichain(self) -> bool:
        return _is_antichain(self.elements)

    def sorted_elements(self) -> tuple:
        # Lexicographic, for reproducible display only.
        return tuple(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Marking]:
        return iter(self.elements)

    def __bool__(self) -> bool:
        return bool(self.elements)

    def __eq__(self, other: object) -> bool:
        # Bases denote sets; element order is irrelevant for equality.
        if not isinstance(other, Basis):
            return NotImplemented
        return frozenset(self.elements) == frozenset(other.elements)

    def __hash__(self) -> int:
        return hash(frozenset(self.elements))

    def __repr__(self) -> str:
        return f"Basis({list(self.sorted_elements())})"


def minimize(markings: Iterable[Marking]) -> Basis:
    """Drop every marking that lies above another one."""
    kept: List[Marking] = []
    for m in markings:
        if kept:
            kept[0]._check_domain(m)
        kept = _insert(kept, m)
    b = Basis.__new__(Basis)
    b.elements = tuple(kept)
    return b
