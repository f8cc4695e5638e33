"""Cooperative relay network-formation game and its best-response dynamics.

Each relay either assists one source-destination pair, by sitting at the
best slot of that pair's path, or stays unused. Actions are encoded as the
0-based pair index, with ``None`` for "unused".

A pair's coalition value is ``-ln D`` where ``D`` is its multihop delay, and
the game's potential is the sum of coalition values (the log of the Nash
product of rates ``1/D``). A relay's repercussion utility for joining pair
``k`` is the change in pair ``k``'s value it causes, measured from the state
where the relay has first been detached from wherever it currently sits.
Because coalitions do not interact, that change is also the change in the
potential, so unilateral moves that raise a relay's repercussion utility
raise the potential by exactly the same amount.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, ParameterError
from .routing import Path, best_insertion, direct_path, insert_relay, path_delay, remove_relay
from .topology import Instance

#: Strict-improvement threshold on log-delay changes.
TAU = 1e-12


class Strategy(str, enum.Enum):
    PROPORTIONAL_FAIR = "pf"
    MINIMUM_DELAY = "md"


@dataclass(frozen=True)
class GameState:
    """Relay assignment (indexed by relay ordinal), paths, delays and potential."""

    assignment: tuple[int | None, ...]
    paths: tuple[Path, ...]
    delays: tuple[float, ...]
    potential: float

    def action_of(self, r: int, instance: Instance) -> int | None:
        return self.assignment[_ordinal(r, instance)]


def coalition_value(delay: float) -> float:
    """Value of a coalition whose pair sees multihop delay ``delay`` (s)."""
    if not delay > 0:
        raise DomainError(f"coalition value needs a positive delay, got {delay!r}")
    return -math.log(delay)


def potential_of(delays) -> float:
    return math.fsum(coalition_value(d) for d in delays)


def nash_product(state: GameState) -> float:
    """Product of the pairs' rates ``1/D_i``; equals ``exp(potential)``."""
    return math.prod(1.0 / d for d in state.delays)


def _ordinal(r: int, instance: Instance) -> int:
    r = int(r)
    if not instance.is_relay(r):
        raise ParameterError(f"node {r} is not a relay")
    return r - 2 * instance.m


def make_state(assignment, paths, instance: Instance) -> GameState:
    """Build a state, recomputing every delay and the potential from scratch."""
    paths = tuple(paths)
    delays = tuple(path_delay(p, instance) for p in paths)
    return GameState(tuple(assignment), paths, delays, potential_of(delays))


def initial_state(instance: Instance) -> GameState:
    """All relays unused, every pair on its direct link."""
    paths = [direct_path(i, instance) for i in range(instance.m)]
    return make_state((None,) * instance.n, paths, instance)


def _replace(state: GameState, r: int, action, changed: dict[int, Path], instance: Instance) -> GameState:
    assignment = list(state.assignment)
    assignment[_ordinal(r, instance)] = action
    paths = list(state.paths)
    delays = list(state.delays)
    for k, path in changed.items():
        paths[k] = path
        delays[k] = path_delay(path, instance)
    return GameState(tuple(assignment), tuple(paths), tuple(delays), potential_of(delays))


def detach(state: GameState, r: int, instance: Instance) -> GameState:
    """State with relay ``r`` removed from its path (a no-op when unused)."""
    current = state.action_of(r, instance)
    if current is None:
        return state
    return _replace(state, r, None, {current: remove_relay(state.paths[current], r)}, instance)


class _Candidate(NamedTuple):
    base_delay: float
    slot: int
    delay: float


def _candidates(state: GameState, r: int, instance: Instance) -> list[_Candidate]:
    current = state.action_of(r, instance)
    out = []
    for k, path in enumerate(state.paths):
        if k == current:
            path = remove_relay(path, r)
            base = path_delay(path, instance)
        else:
            base = state.delays[k]
        slot, delay = best_insertion(path, r, instance)
        out.append(_Candidate(base, slot, delay))
    return out


def _log_gain(base: float, after: float) -> float:
    return math.log(base) - math.log(after)


def repercussion_utility(state: GameState, r: int, target, instance: Instance) -> float:
    """Change in pair ``target``'s coalition value when ``r`` joins it.

    The relay is first detached from its current path; joining uses the best
    insertion slot. ``target=None`` (stay unused) is worth 0.
    """
    if target is None:
        return 0.0
    if not 0 <= target < instance.m:
        raise ParameterError(f"pair index {target} out of range")
    current = state.action_of(r, instance)
    path = state.paths[target]
    if target == current:
        path = remove_relay(path, r)
        base = path_delay(path, instance)
    else:
        base = state.delays[target]
    _, after = best_insertion(path, r, instance)
    return _log_gain(base, after)


def current_utility(state: GameState, r: int, instance: Instance) -> float:
    """Repercussion utility of the position ``r`` occupies right now."""
    current = state.action_of(r, instance)
    if current is None:
        return 0.0
    base = path_delay(remove_relay(state.paths[current], r), instance)
    return _log_gain(base, state.delays[current])


def choose_action(state: GameState, r: int, strategy: Strategy, instance: Instance):
    """Greedy (mutation-free) action of relay ``r`` under ``strategy``.

    Proportional fairness maximizes the repercussion utility and stays unused
    unless that maximum exceeds :data:`TAU`. Minimum delay joins, among the
    pairs the relay strictly improves, the one left with the smallest delay.
    Ties go to the lowest pair index.
    """
    strategy = Strategy(strategy)
    cands = _candidates(state, r, instance)
    if strategy is Strategy.PROPORTIONAL_FAIR:
        best, best_gain = None, TAU
        for k, c in enumerate(cands):
            gain = _log_gain(c.base_delay, c.delay)
            if gain > best_gain:
                best, best_gain = k, gain
        return best
    best, best_delay = None, math.inf
    for k, c in enumerate(cands):
        if c.delay < c.base_delay * (1.0 - TAU) and c.delay < best_delay:
            best, best_delay = k, c.delay
    return best


def apply_action(state: GameState, r: int, action, instance: Instance) -> GameState:
    """Detach ``r``, then insert it at the best slot of pair ``action``'s path."""
    if action is not None and not 0 <= action < instance.m:
        raise ParameterError(f"pair index {action} out of range")
    current = state.action_of(r, instance)
    changed = {}
    if current is not None:
        changed[current] = remove_relay(state.paths[current], r)
    if action is not None:
        path = changed.get(action, state.paths[action])
        slot, _ = best_insertion(path, r, instance)
        changed[action] = insert_relay(path, r, slot)
    if current is None and action is None:
        return state
    return _replace(state, r, action, changed, instance)


def is_nash_equilibrium(state: GameState, instance: Instance, tol: float = TAU) -> bool:
    """True when no relay can raise the potential by more than ``tol`` alone."""
    for r in instance.relays:
        held = current_utility(state, r, instance)
        for action in [None, *range(instance.m)]:
            if repercussion_utility(state, r, action, instance) - held > tol:
                return False
    return True


def _is_stable(state: GameState, strategy: Strategy, instance: Instance) -> bool:
    for r in instance.relays:
        greedy = choose_action(state, r, strategy, instance)
        if greedy != state.action_of(r, instance):
            return False
        if apply_action(state, r, greedy, instance).paths != state.paths:
            return False
    return True


@dataclass(frozen=True)
class TraceRecord:
    """One relay visit of the round-robin dynamics."""

    round: int
    relay: int
    greedy: int | None
    taken: int | None
    mutated: bool
    delta_potential: float
    utility: float
    previous_utility: float
    potential: float

    def to_dict(self) -> dict:
        return asdict(self)


class DynamicsResult(NamedTuple):
    state: GameState
    rounds: int
    converged: bool


def run_dynamics(
    instance: Instance,
    strategy: Strategy,
    epsilon: float,
    seed: int,
    max_rounds: int,
    trace: Callable[[TraceRecord], None] | None = None,
) -> DynamicsResult:
    """Round-robin best response with mutation, starting from direct paths.

    On each visit the relay takes its greedy action with probability
    ``1 - epsilon``; otherwise it joins a uniformly drawn pair other than the
    greedy one (never "unused"). After each full pass a mutation-free probe
    checks whether any relay would still change anything; if none would, the
    run has converged. Mutation draws come from ``PCG64(seed)``.
    """
    strategy = Strategy(strategy)
    if not 0.0 <= epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in [0, 1), got {epsilon}")
    if max_rounds < 1:
        raise ParameterError("max_rounds must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    state = initial_state(instance)
    for rnd in range(1, max_rounds + 1):
        for r in instance.relays:
            greedy = choose_action(state, r, strategy, instance)
            taken, mutated = greedy, False
            if rng.random() < epsilon:
                others = [j for j in range(instance.m) if j != greedy]
                if others:
                    taken, mutated = others[int(rng.integers(len(others)))], True
            new_state = apply_action(state, r, taken, instance)
            if trace is not None:
                trace(
                    TraceRecord(
                        round=rnd,
                        relay=r,
                        greedy=greedy,
                        taken=taken,
                        mutated=mutated,
                        delta_potential=new_state.potential - state.potential,
                        utility=repercussion_utility(state, r, taken, instance),
                        previous_utility=current_utility(state, r, instance),
                        potential=new_state.potential,
                    )
                )
            state = new_state
        if _is_stable(state, strategy, instance):
            return DynamicsResult(state, rnd, True)
    return DynamicsResult(state, max_rounds, False)
