"""Monte Carlo driver: direct vs proportional-fair vs minimum-delay relaying.

Run ``i`` of a batch uses instance seed ``master_seed + i``. Each strategy's
dynamics draws from its own stream, derived from the run seed with
:class:`numpy.random.SeedSequence`, so mutations in one strategy never shift
the other's draws.

Also home to the exhaustive oracle used to audit equilibria on small
instances.
"""

from __future__ import annotations

import csv
import itertools
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from .config import SimConfig
from .errors import SizeError
from .game import GameState, Strategy, TraceRecord, make_state, run_dynamics
from .routing import Path, direct_delay, direct_path, insert_relay, path_delay, remove_relay
from .topology import Instance, generate_instance

METHODS = ("direct", "pf", "md")
ORACLE_LIMIT = 10**7

_STREAM = {Strategy.PROPORTIONAL_FAIR: 1, Strategy.MINIMUM_DELAY: 2}


def dynamics_seed(run_seed: int, strategy: Strategy) -> int:
    """64-bit seed of the mutation stream for ``strategy`` in a given run."""
    ss = np.random.SeedSequence([run_seed, _STREAM[Strategy(strategy)]])
    return int(ss.generate_state(1, np.uint64)[0])


def instance_for(seed: int, config: SimConfig) -> Instance:
    return generate_instance(
        seed,
        config.m,
        config.n,
        area=config.area,
        params=config.channel_params(),
        file_sizes=config.pair_file_sizes(),
        beta=config.beta,
    )


@dataclass(frozen=True)
class RunRecord:
    """Per-pair delays (s) and formed paths for each method on one instance."""

    run: int
    seed: int
    delays: dict[str, tuple[float, ...]]
    paths: dict[str, tuple[tuple[int, ...], ...]]
    rounds: dict[str, int]
    converged: dict[str, bool]

    def total(self, method: str) -> float:
        return math.fsum(self.delays[method])

    def variance(self, method: str) -> float:
        """Population variance of the per-pair delays (s^2)."""
        return statistics.pvariance(self.delays[method])

    def to_dict(self) -> dict:
        return {
            "run": self.run,
            "seed": self.seed,
            "delays": {k: list(v) for k, v in self.delays.items()},
            "paths": {k: [list(p) for p in v] for k, v in self.paths.items()},
            "sums": {k: self.total(k) for k in self.delays},
            "variances": {k: self.variance(k) for k in self.delays},
            "rounds": dict(self.rounds),
            "converged": dict(self.converged),
        }


def run_single(
    seed: int,
    config: SimConfig,
    run: int = 0,
    trace: Callable[[Strategy, TraceRecord], None] | None = None,
    instance: Instance | None = None,
) -> RunRecord:
    """Generate the instance for ``seed`` and compare the three methods on it."""
    instance = instance or instance_for(seed, config)
    direct = tuple(direct_delay(i, instance) for i in range(instance.m))
    delays = {"direct": direct}
    paths = {"direct": tuple(direct_path(i, instance).nodes for i in range(instance.m))}
    rounds = {"direct": 0}
    converged = {"direct": True}
    for strategy in (Strategy.PROPORTIONAL_FAIR, Strategy.MINIMUM_DELAY):
        hook = None if trace is None else (lambda rec, s=strategy: trace(s, rec))
        result = run_dynamics(
            instance,
            strategy,
            config.epsilon,
            dynamics_seed(seed, strategy),
            config.max_rounds,
            trace=hook,
        )
        key = strategy.value
        delays[key] = result.state.delays
        paths[key] = tuple(p.nodes for p in result.state.paths)
        rounds[key] = result.rounds
        converged[key] = result.converged
    return RunRecord(run, seed, delays, paths, rounds, converged)


@dataclass(frozen=True)
class BatchStats:
    runs: int
    mean_sum: dict[str, float]
    mean_variance: dict[str, float]
    median_variance: dict[str, float]
    convergence_rate: dict[str, float]
    seconds_per_run: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        # wall-clock is left out so summaries stay byte-reproducible
        return {
            "runs": self.runs,
            "mean_sum": self.mean_sum,
            "mean_variance": self.mean_variance,
            "median_variance": self.median_variance,
            "convergence_rate": self.convergence_rate,
        }


def summarize(records: list[RunRecord], seconds_per_run: float = 0.0) -> BatchStats:
    """Aggregate records in list order."""
    n = len(records)
    return BatchStats(
        runs=n,
        mean_sum={k: math.fsum(r.total(k) for r in records) / n for k in METHODS},
        mean_variance={k: math.fsum(r.variance(k) for r in records) / n for k in METHODS},
        median_variance={k: statistics.median(r.variance(k) for r in records) for k in METHODS},
        convergence_rate={k: sum(r.converged[k] for r in records) / n for k in METHODS},
        seconds_per_run=seconds_per_run,
    )


def _run_indexed(args: tuple[int, SimConfig]) -> RunRecord:
    index, config = args
    return run_single(config.seed + index, config, run=index)


def run_batch(config: SimConfig, jobs: int | None = None) -> tuple[BatchStats, list[RunRecord]]:
    """Run ``config.runs`` independent instances; output never depends on ``jobs``."""
    jobs = jobs or config.jobs
    work = [(i, config) for i in range(config.runs)]
    start = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_indexed, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        records = [_run_indexed(w) for w in work]
    elapsed = time.perf_counter() - start
    return summarize(records, elapsed / len(records)), records


CSV_HEADER = ("run", "seed", "method", "pair", "delay_s", "hops", "converged", "rounds")


def write_csv(records: list[RunRecord], out: TextIO) -> None:
    """One row per (run, method, pair); floats use the shortest round-trip repr."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        for method in METHODS:
            for pair, (delay, nodes) in enumerate(zip(rec.delays[method], rec.paths[method])):
                writer.writerow(
                    (
                        rec.run,
                        rec.seed,
                        method,
                        pair,
                        repr(float(delay)),
                        len(nodes) - 1,
                        "true" if rec.converged[method] else "false",
                        rec.rounds[method],
                    )
                )


# -- exhaustive oracle ------------------------------------------------------


def configuration_count(m: int, n: int) -> int:
    """Number of (assignment, per-path ordering) configurations.

    Choosing ``j`` of the ``n`` relays and arranging them into ``m`` ordered
    (possibly empty) lists gives ``C(n, j) * j! * C(j + m - 1, m - 1)``.
    """
    return sum(
        math.comb(n, j) * math.factorial(j) * math.comb(j + m - 1, m - 1) for j in range(n + 1)
    )


def enumerate_optimum(instance: Instance, limit: int = ORACLE_LIMIT) -> tuple[float, tuple[Path, ...]]:
    """Global maximum of the potential over every relay assignment and ordering.

    Returns the best potential and one set of paths attaining it (first found
    in enumeration order). Raises :class:`SizeError` above ``limit``
    configurations.
    """
    count = configuration_count(instance.m, instance.n)
    if count > limit:
        raise SizeError(f"{count} configurations exceed the oracle limit of {limit}")
    relays = list(instance.relays)
    best_per_subset: dict[tuple[int, tuple[int, ...]], tuple[float, Path]] = {}

    def best_path(pair: int, members: tuple[int, ...]) -> tuple[float, Path]:
        key = (pair, members)
        if key not in best_per_subset:
            src, dst = instance.source(pair), instance.destination(pair)
            best = None
            for order in itertools.permutations(members):
                path = Path(pair, (src, *order, dst))
                value = -math.log(path_delay(path, instance))
                if best is None or value > best[0]:
                    best = (value, path)
            best_per_subset[key] = best
        return best_per_subset[key]

    best_value, best_paths = -math.inf, ()
    for assignment in itertools.product([None, *range(instance.m)], repeat=len(relays)):
        chosen = [best_path(k, tuple(r for r, a in zip(relays, assignment) if a == k)) for k in range(instance.m)]
        value = math.fsum(v for v, _ in chosen)
        if value > best_value:
            best_value, best_paths = value, tuple(p for _, p in chosen)
    return best_value, best_paths


@dataclass(frozen=True)
class Deviation:
    relay: int
    target: int | None
    slot: int | None
    gain: float


def _potential_from_scratch(paths, instance: Instance) -> float:
    return math.fsum(-math.log(path_delay(p, instance)) for p in paths)


def single_deviations(state: GameState, instance: Instance) -> list[Deviation]:
    """Every unilateral relay move (any pair, any slot, or unused) with its potential gain.

    Potentials are recomputed from the raw paths; nothing here relies on the
    game module's utility bookkeeping.
    """
    base_value = _potential_from_scratch(state.paths, instance)
    moves = []
    for r in instance.relays:
        detached = [remove_relay(p, r) if r in p.relays else p for p in state.paths]
        options: list[tuple[int | None, int | None, list[Path]]] = [(None, None, detached)]
        for k, path in enumerate(detached):
            for j in range(path.hops):
                trial = list(detached)
                trial[k] = insert_relay(path, r, j)
                options.append((k, j, trial))
        for target, slot, paths in options:
            gain = _potential_from_scratch(paths, instance) - base_value
            moves.append(Deviation(r, target, slot, gain))
    return moves


def improving_deviations(state: GameState, instance: Instance, tol: float = 1e-9) -> list[Deviation]:
    scale = max(1.0, abs(state.potential))
    return [d for d in single_deviations(state, instance) if d.gain > tol * scale]


@dataclass(frozen=True)
class OracleCase:
    seed: int
    potential: float
    optimum: float
    converged: bool
    improving_moves: int

    @property
    def below_optimum(self) -> bool:
        return self.potential <= self.optimum + 1e-9 * max(1.0, abs(self.optimum))

    @property
    def global_optimum(self) -> bool:
        return abs(self.potential - self.optimum) <= 1e-9 * max(1.0, abs(self.optimum))


def oracle_audit(config: SimConfig, instances: int, epsilon: float = 0.0) -> list[OracleCase]:
    """Run proportional-fair dynamics on small instances and audit them exhaustively."""
    if configuration_count(config.m, config.n) > ORACLE_LIMIT:
        raise SizeError(f"m={config.m}, n={config.n} is too large for exhaustive enumeration")
    cases = []
    for i in range(instances):
        seed = config.seed + i
        instance = instance_for(seed, config)
        result = run_dynamics(
            instance, Strategy.PROPORTIONAL_FAIR, epsilon, dynamics_seed(seed, Strategy.PROPORTIONAL_FAIR), config.max_rounds
        )
        optimum, _ = enumerate_optimum(instance)
        moves = improving_deviations(result.state, instance)
        cases.append(OracleCase(seed, result.state.potential, optimum, result.converged, len(moves)))
    return cases


def state_from_paths(paths, instance: Instance) -> GameState:
    """Rebuild a game state from explicit paths (relays off every path are unused)."""
    assignment = [None] * instance.n
    for k, path in enumerate(paths):
        for r in path.relays:
            assignment[r - 2 * instance.m] = k
    return make_state(assignment, paths, instance)
