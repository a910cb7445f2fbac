from __future__ import annotations

import pytest

from coverlib import PetriNet, Problem


def make_pump_net() -> PetriNet:
    """Three-place loop: one start token, then tokens pump between p2/p3."""
    return PetriNet(
        places=["p1", "p2", "p3"],
        transitions=["t1", "t2", "t3"],
        pre_arcs={("p1", "t1"): 1, ("p2", "t2"): 1, ("p3", "t3"): 1},
        post_arcs={("t1", "p2"): 1, ("t2", "p3"): 2, ("t3", "p2"): 2},
        initial={"p1": 1},
    )


def make_stuck_net() -> PetriNet:
    """Two places and one transition that can never fire: p2 starts empty
    and nothing ever feeds it."""
    return PetriNet(
        places=["p1", "p2"],
        transitions=["t"],
        pre_arcs={("p2", "t"): 1},
        post_arcs={("t", "p1"): 1},
        initial={"p1": 1},
    )


def make_orbit_net() -> PetriNet:
    """Token orbit between two forever-empty places.

    The start token sits on p1 and cannot move; t and u would shuttle a
    token between p2 and p3 if one ever existed.  Backward search without
    help still explores the phantom orbit; sign analysis shuts it down.
    """
    return PetriNet(
        places=["p1", "p2", "p3"],
        transitions=["t", "u"],
        pre_arcs={("p2", "t"): 1, ("p3", "u"): 1},
        post_arcs={("t", "p3"): 1, ("u", "p2"): 1},
        initial={"p1": 1},
    )


@pytest.fixture
def pump_net() -> PetriNet:
    return make_pump_net()


@pytest.fixture
def stuck_net() -> PetriNet:
    return make_stuck_net()


@pytest.fixture
def orbit_net() -> PetriNet:
    return make_orbit_net()


@pytest.fixture
def pump_problem(pump_net) -> Problem:
    return Problem(
        net=pump_net,
        targets=(pump_net.marking((0, 2, 1)), pump_net.marking((2, 0, 0))),
        name="pump",
    )


PUMP_TEXT = """\
# three-place loop
places: p1 p2 p3
transitions:
t1: in p1 out p2 ;
t2: in p2 out p3*2 ;
t3: in p3 out p2*2 ;
init: p1=1
target: p2>=2 p3>=1
target: p1>=2
"""

STUCK_TEXT = """\
places: p1 p2
transitions:
t: in p2 out p1 ;
init: p1=1
target: p2>=1
"""
