"""Downward-closed invariants that over-approximate the reachable markings.

Two non-trivial invariants are provided, plus the trivial one and
conjunctions:

* sign: a fixpoint computes the set of places that can ever carry a
  token; the invariant requires every other place to stay empty.
* state: a marking is admitted when the token-flow balance equations,
  relaxed to non-negative rational firing counts, can explain it from
  the initial marking.

Every invariant contains all reachable markings and is closed downward,
so it is sound for pruning a backward coverability search.  Handles are
built once per net; ``member`` is cheap to call repeatedly and keeps a
query counter for statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence

from .net import Marking, PetriNet
from .ratlp import FeasibilityProblem, feasible


# -- sign analysis ------------------------------------------------------------

@dataclass(frozen=True)
class SignAnalysis:
    """Result of the token sign fixpoint.

    ``possibly_marked`` holds the place indices that may ever be
    non-empty; ``always_empty`` is its complement.  Membership of a
    marking only requires the always-empty places to hold zero tokens.
    """

    possibly_marked: FrozenSet[int]
    always_empty: FrozenSet[int]

    def member(self, m: Sequence[int]) -> bool:
        return all(m[p] == 0 for p in self.always_empty)


def propagate(net: PetriNet, t: int, marked: FrozenSet[int]) -> FrozenSet[int]:
    """Places that firing ``t`` can newly mark, given possibly-marked places.

    If some input place of ``t`` lies outside ``marked`` the transition
    can never fire in the abstraction and nothing propagates.
    """
    net._check_transition(t)
    pre = net.pre[t]
    for p, w in enumerate(pre):
        if w and p not in marked:
            return frozenset()
    return frozenset(p for p, w in enumerate(net.post[t]) if w)


def sign_analysis(net: PetriNet) -> SignAnalysis:
    """Least set of possibly-marked places closed under transition effects."""
    marked = set(p for p, c in enumerate(net.initial) if c)
    # A transition contributes at most once: after its outputs are in the
    # set it can be retired.  Passes repeat while the set still grows.
    pending = list(range(len(net.transitions)))
    grew = True
    while grew:
        grew = False
        remaining = []
        for t in pending:
            added = propagate(net, t, frozenset(marked)) - marked
            if added:
                marked.update(added)
                grew = True
            else:
                remaining.append(t)
        pending = remaining
    all_places = frozenset(range(len(net.places)))
    pm = frozenset(marked)
    return SignAnalysis(possibly_marked=pm, always_empty=all_places - pm)


# -- invariant handles ---------------------------------------------------------

class Invariant:
    """Base for membership handles; subclasses fill in ``member``."""

    kind = "abstract"

    def __init__(self, net: PetriNet) -> None:
        self.net = net
        self.queries = 0

    @property
    def name(self) -> str:
        return self.kind

    def member(self, m: Marking) -> bool:
        raise NotImplementedError

    def query_counts(self) -> Dict[str, int]:
        """Membership queries so far, keyed by invariant kind."""
        return {self.kind: self.queries}

    def _check(self, m: Sequence[int]) -> None:
        self.net._check_marking(m)


class TrivialInvariant(Invariant):
    """Admits every marking (no pruning)."""

    kind = "trivial"

    def member(self, m: Marking) -> bool:
        self._check(m)
        self.queries += 1
        return True


class SignInvariant(Invariant):
    """Rejects markings with tokens on provably always-empty places."""

    kind = "sign"

    def __init__(self, net: PetriNet) -> None:
        super().__init__(net)
        self.analysis = sign_analysis(net)
        self._empty = tuple(sorted(self.analysis.always_empty))

    def member(self, m: Marking) -> bool:
        self._check(m)
        self.queries += 1
        return all(m[p] == 0 for p in self._empty)


class StateInvariant(Invariant):
    """Admits markings explainable by relaxed token flow.

    A marking m passes when some non-negative rational vector of firing
    counts lam satisfies  initial + D lam >= m  component-wise, where
    column t of D is the displacement of transition t.  The displacement
    matrix is computed once per handle; each query solves one small
    exact feasibility problem.
    """

    kind = "state"

    def __init__(self, net: PetriNet) -> None:
        super().__init__(net)
        nt = len(net.transitions)
        self.displacement_rows = tuple(
            tuple(net.post[t][p] - net.pre[t][p] for t in range(nt))
            for p in range(len(net.places))
        )

    def member(self, m: Marking) -> bool:
        self._check(m)
        self.queries += 1
        bounds = tuple(c - i for c, i in zip(m, self.net.initial))
        ok, _ = feasible(FeasibilityProblem(self.displacement_rows, bounds))
        return ok

    def explain(self, m: Marking):
        """The firing-count witness for a member, or None."""
        self._check(m)
        bounds = tuple(c - i for c, i in zip(m, self.net.initial))
        ok, lam = feasible(FeasibilityProblem(self.displacement_rows, bounds))
        return lam if ok else None


class IntersectionInvariant(Invariant):
    """Conjunction of invariants, tested in declared order.

    Evaluation short-circuits, so putting cheap members first (sign
    before state) avoids most of the expensive queries.
    """

    kind = "intersection"

    def __init__(self, parts: Sequence[Invariant]) -> None:
        parts = tuple(parts)
        if not parts:
            raise ValueError("intersection needs at least one invariant")
        nets = {id(p.net) for p in parts}
        if len(nets) != 1:
            raise ValueError("intersected invariants must share one net")
        super().__init__(parts[0].net)
        self.parts = parts

    @property
    def name(self) -> str:
        return ",".join(p.name for p in self.parts)

    def member(self, m: Marking) -> bool:
        self.queries += 1
        return all(p.member(m) for p in self.parts)

    def query_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {self.kind: self.queries}
        for p in self.parts:
            for k, v in p.query_counts().items():
                counts[k] = counts.get(k, 0) + v
        return counts


_FACTORIES = {
    "trivial": TrivialInvariant,
    "sign": SignInvariant,
    "state": StateInvariant,
}


def make_invariant(net: PetriNet, names: Iterable[str]) -> Invariant:
    """Build a handle from names in {trivial, sign, state}.

    Several names mean their conjunction, tested in the given order.
    """
    names = list(names)
    if not names:
        raise ValueError("no invariant names given")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate invariant name in {names}")
    parts: List[Invariant] = []
    for name in names:
        try:
            factory = _FACTORIES[name]
        except KeyError:
            raise ValueError(
                f"unknown invariant {name!r}; pick from {sorted(_FACTORIES)}"
            ) from None
        parts.append(factory(net))
    if len(parts) == 1:
        return parts[0]
    return IntersectionInvariant(parts)
