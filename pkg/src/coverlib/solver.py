"""Backward coverability search pruned by a downward-closed invariant.

The solver maintains the minimal basis of an upward-closed set of
markings known to cover the target backwards.  Each round generates the
covering predecessors of the basis, drops the ones already covered,
discards the ones outside the invariant, and merges the rest.  The
search stops as soon as the initial marking enters the set (coverable)
or a round contributes nothing new (uncoverable); termination is
guaranteed because strictly growing upward-closed sets of markings
cannot form an infinite chain.

Soundness of pruning needs the invariant to contain every reachable
marking and to be downward closed; all handles in
:mod:`coverlib.invariants` qualify.  With the trivial invariant the
search degrades to the classical backward algorithm.

A run is deterministic: transitions are expanded in declaration order,
bases keep insertion order, and duplicate predecessor candidates are
dropped on first occurrence.  Wall-clock time is deliberately not
measured here.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

from .invariants import Invariant, TrivialInvariant
from .net import Marking, PetriNet
from .upset import Basis, minimize


class Verdict(Enum):
    COVERABLE = "COVERABLE"
    UNCOVERABLE = "UNCOVERABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class IterationStats:
    """Counters for one round of the backward search.

    ``kept`` always equals ``new_after_antichain - pruned_by_invariant``;
    those are the candidates that actually entered the basis.
    """

    index: int
    basis_size: int
    candidates_generated: int
    new_after_antichain: int
    pruned_by_invariant: int
    kept: int


# marking -> (transition, successor marking) the candidate was derived
# from, or None for the target itself.
BackLinks = Dict[Marking, Optional[Tuple[int, Marking]]]


@dataclass(frozen=True)
class SolveResult:
    verdict: Verdict
    witness: Optional[Tuple[int, ...]]
    stats: Tuple[IterationStats, ...]
    invariant_name: str
    target_in_invariant: bool
    lp_calls: int
    sign_checks: int
    final_basis_size: int
    inconclusive_reason: Optional[str] = None
    bases: Optional[Tuple[Basis, ...]] = None
    backlinks: Optional[BackLinks] = None

    @property
    def kept_total(self) -> int:
        return sum(s.kept for s in self.stats)

    @property
    def pruned_total(self) -> int:
        return sum(s.pruned_by_invariant for s in self.stats)

    @property
    def discarded_including_target(self) -> int:
        """Markings the invariant rejected, counting the target itself."""
        return self.pruned_total + (0 if self.target_in_invariant else 1)


def extract_witness(backlinks: Mapping, start: Marking) -> List[int]:
    """Read a firing sequence off the predecessor links.

    ``start`` must be covered by the initial marking; following its links
    to the target yields transitions in firing order.  Covering
    predecessors are compatible with the marking order, so replaying the
    sequence from any marking above ``start`` stays enabled and ends
    above the target.
    """
    steps: List[int] = []
    node = start
    while True:
        if node not in backlinks:
            raise ValueError("marking has no recorded predecessor link")
        via = backlinks[node]
        if via is None:
            return steps
        t, nxt = via
        steps.append(t)
        node = nxt


def solve(
    net: PetriNet,
    target: Marking,
    invariant: Optional[Invariant] = None,
    *,
    budget_steps: Optional[int] = None,
    deadline: Optional[float] = None,
    record_bases: bool = False,
) -> SolveResult:
    """Decide whether some reachable marking covers ``target``.

    ``budget_steps`` bounds the number of search rounds and ``deadline``
    (a ``time.monotonic`` timestamp, checked once per round) bounds wall
    time; hitting either yields an INCONCLUSIVE verdict instead of an
    answer.  By default the search runs to completion, which always
    terminates.  ``record_bases`` keeps per-round basis snapshots and the
    predecessor links on the result, for inspection and testing.
    """
    target = net.marking(target)
    if invariant is None:
        invariant = TrivialInvariant(net)
    if invariant.net is not net:
        raise ValueError("invariant was built for a different net")

    counts_before = invariant.query_counts()
    m_init = net.initial
    target_admitted = invariant.member(target)
    backlinks: BackLinks = {}
    if target_admitted:
        backlinks[target] = None
        basis = minimize([target])
    else:
        basis = Basis()

    stats: List[IterationStats] = []
    bases_log: List[Basis] = []
    verdict: Verdict
    witness: Optional[Tuple[int, ...]] = None
    reason: Optional[str] = None
    nt = len(net.transitions)
    k = 0

    while True:
        if record_bases:
            bases_log.append(basis)
        entry = next((x for x in basis if x.leq(m_init)), None)
        if entry is not None:
            verdict = Verdict.COVERABLE
            witness = tuple(extract_witness(backlinks, entry))
            break
        if budget_steps is not None and k >= budget_steps:
            verdict = Verdict.INCONCLUSIVE
            reason = "budget"
            break
        if deadline is not None and time.monotonic() >= deadline:
            verdict = Verdict.INCONCLUSIVE
            reason = "deadline"
            break

        candidates: Dict[Marking, Tuple[int, Marking]] = {}
        raw = 0
        for t in range(nt):
            for m in basis:
                c = net.cpre(t, m)
                raw += 1
                if c not in candidates:
                    candidates[c] = (t, m)
        fresh = basis.filter_uncovered(candidates)
        kept: List[Marking] = []
        pruned = 0
        for c in fresh:
            if invariant.member(c):
                kept.append(c)
            else:
                pruned += 1
        stats.append(IterationStats(
            index=k,
            basis_size=len(basis),
            candidates_generated=raw,
            new_after_antichain=len(fresh),
            pruned_by_invariant=pruned,
            kept=len(kept),
        ))
        if not kept:
            verdict = Verdict.UNCOVERABLE
            break
        for c in kept:
            backlinks.setdefault(c, candidates[c])
        basis = basis.union(kept)
        k += 1

    counts_after = invariant.query_counts()
    deltas = {key: counts_after.get(key, 0) - counts_before.get(key, 0)
              for key in counts_after}
    return SolveResult(
        verdict=verdict,
        witness=witness,
        stats=tuple(stats),
        invariant_name=invariant.name,
        target_in_invariant=target_admitted,
        lp_calls=deltas.get("state", 0),
        sign_checks=deltas.get("sign", 0),
        final_basis_size=len(basis),
        inconclusive_reason=reason,
        bases=tuple(bases_log) if record_bases else None,
        backlinks=backlinks if record_bases else None,
    )


def solve_classical(net: PetriNet, target: Marking, **kwargs) -> SolveResult:
    """Backward coverability without pruning (trivial invariant)."""
    return solve(net, target, TrivialInvariant(net), **kwargs)
