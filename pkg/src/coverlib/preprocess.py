"""Removal of transitions that can never fire.

A transition is dead when its least enabling marking lies outside a
sound invariant: no reachable marking can then enable it, because
invariants are downward closed and contain all reachable markings.
Dropping dead transitions changes neither the reachable markings nor
any coverability answer.

The default test uses the sign invariant.  ``use_state`` additionally
tests against the relaxed token-flow invariant, which can remove more;
only then can a second round find new victims, since transitions that
fail the sign test never contributed to the sign fixpoint in the first
place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .ingest import Problem
from .invariants import StateInvariant, sign_analysis
from .net import Marking, PetriNet


@dataclass(frozen=True)
class PruneRound:
    """One analysis/removal round: what was removed, and the empty set used."""

    removed: Tuple[str, ...]
    always_empty: Tuple[str, ...]


@dataclass(frozen=True)
class PruneReport:
    mode: str
    rounds: Tuple[PruneRound, ...]
    removed: Tuple[str, ...]
    dropped_places: Tuple[str, ...] = ()

    @property
    def removal_rounds(self) -> int:
        return sum(1 for r in self.rounds if r.removed)


def _one_round(net: PetriNet, use_state: bool) -> Tuple[PetriNet, PruneRound]:
    analysis = sign_analysis(net)
    state = StateInvariant(net) if use_state else None
    dead: List[int] = []
    for t in range(len(net.transitions)):
        threshold = net.min_enabling_marking(t)
        if not analysis.member(threshold):
            dead.append(t)
        elif state is not None and not state.member(threshold):
            dead.append(t)
    empty_names = tuple(net.places[p] for p in sorted(analysis.always_empty))
    if not dead:
        return net, PruneRound(removed=(), always_empty=empty_names)
    keep = [t for t in range(len(net.transitions)) if t not in set(dead)]
    reduced = PetriNet(
        places=net.places,
        transitions=tuple(net.transitions[t] for t in keep),
        pre_arcs={(net.places[p], net.transitions[t]): w
                  for t in keep for p, w in enumerate(net.pre[t]) if w},
        post_arcs={(net.transitions[t], net.places[p]): w
                   for t in keep for p, w in enumerate(net.post[t]) if w},
        initial=net.initial,
    )
    removed_names = tuple(net.transitions[t] for t in dead)
    return reduced, PruneRound(removed=removed_names, always_empty=empty_names)


def prune_dead_transitions(
    net: PetriNet,
    mode: str = "fixpoint",
    use_state: bool = False,
) -> Tuple[PetriNet, List[str], PruneReport]:
    """Drop transitions whose least enabling marking violates an invariant.

    ``mode`` is "once" for a single round or "fixpoint" to repeat until a
    round removes nothing (that final empty round is recorded too).
    Places are never removed here.  Returns the reduced net, the removed
    transition names in removal order, and a per-round report.
    """
    if mode not in ("once", "fixpoint"):
        raise ValueError(f"mode must be 'once' or 'fixpoint', got {mode!r}")
    rounds: List[PruneRound] = []
    removed: List[str] = []
    current = net
    while True:
        current, rnd = _one_round(current, use_state)
        rounds.append(rnd)
        removed.extend(rnd.removed)
        if mode == "once" or not rnd.removed:
            break
    report = PruneReport(mode=mode, rounds=tuple(rounds), removed=tuple(removed))
    return current, removed, report


def prune_problem(
    problem: Problem,
    mode: str = "fixpoint",
    use_state: bool = False,
    drop_places: bool = False,
) -> Tuple[Problem, PruneReport]:
    """Prune a problem's net, keeping every target meaningful.

    With ``drop_places`` the provably always-empty places that no
    surviving transition touches and that every target ignores are
    removed as well; coverability answers are unaffected since those
    places hold zero tokens in every reachable marking.  The default
    keeps all places.
    """
    net, removed, report = prune_dead_transitions(problem.net, mode, use_state)
    targets = problem.targets
    dropped: Tuple[str, ...] = ()
    if drop_places:
        analysis = sign_analysis(net)
        droppable = []
        for p in sorted(analysis.always_empty):
            touched = any(net.pre[t][p] or net.post[t][p]
                          for t in range(len(net.transitions)))
            wanted = any(m[p] for m in targets)
            if not touched and not wanted:
                droppable.append(p)
        if droppable and len(droppable) < len(net.places):
            gone = set(droppable)
            keep = [p for p in range(len(net.places)) if p not in gone]
            net = PetriNet(
                places=tuple(net.places[p] for p in keep),
                transitions=net.transitions,
                pre_arcs={(net.places[p], net.transitions[t]): net.pre[t][p]
                          for t in range(len(net.transitions))
                          for p in keep if net.pre[t][p]},
                post_arcs={(net.transitions[t], net.places[p]): net.post[t][p]
                           for t in range(len(net.transitions))
                           for p in keep if net.post[t][p]},
                initial=Marking(net.initial[p] for p in keep),
            )
            targets = tuple(Marking(m[p] for p in keep) for m in targets)
            dropped = tuple(problem.net.places[p] for p in droppable)
    report = PruneReport(
        mode=report.mode,
        rounds=report.rounds,
        removed=report.removed,
        dropped_places=dropped,
    )
    return Problem(net=net, targets=targets, name=problem.name), report
