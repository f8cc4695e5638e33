"""Relay paths, store-and-forward delay, and best-insertion search."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .topology import Instance


@dataclass(frozen=True)
class Path:
    """Ordered node sequence from the source of ``pair`` to its destination.

    Paths are values: every operation below returns a new ``Path``.
    """

    pair: int
    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ParameterError("a path needs at least a source and a destination")
        if len(set(self.nodes)) != len(self.nodes):
            raise ParameterError(f"path {self.nodes} visits a node twice")

    @property
    def relays(self) -> tuple[int, ...]:
        return self.nodes[1:-1]

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.nodes, self.nodes[1:]))

    def __contains__(self, node: int) -> bool:
        return node in self.nodes


def direct_path(pair: int, instance: Instance) -> Path:
    return Path(pair, (instance.source(pair), instance.destination(pair)))


def validate_path(path: Path, instance: Instance) -> None:
    """Raise :class:`ParameterError` unless ``path`` is well-formed for ``instance``."""
    if not 0 <= path.pair < instance.m:
        raise ParameterError(f"pair index {path.pair} out of range")
    if path.nodes[0] != instance.source(path.pair) or path.nodes[-1] != instance.destination(path.pair):
        raise ParameterError(f"path {path.nodes} does not join the endpoints of pair {path.pair}")
    for node in path.relays:
        if not instance.is_relay(node):
            raise ParameterError(f"interior node {node} is not a relay")


def path_delay(path: Path, instance: Instance) -> float:
    """Time (s) to push the pair's whole file hop by hop along ``path``.

    Every relay receives the full file before forwarding it, so the delay is
    ``B_i * sum(1 / R_edge)``.
    """
    spb = instance.seconds_per_bit
    nodes = path.nodes
    total = 0.0
    for a, b in zip(nodes, nodes[1:]):
        total += spb[a][b]
    return instance.file_sizes[path.pair] * total


def direct_delay(pair: int, instance: Instance) -> float:
    return path_delay(direct_path(pair, instance), instance)


def insert_relay(path: Path, r: int, j: int) -> Path:
    """Replace edge ``(sigma_j, sigma_j+1)`` with ``(sigma_j, r), (r, sigma_j+1)``."""
    r = int(r)
    if r in path.nodes:
        raise ParameterError(f"relay {r} is already on the path")
    if not 0 <= j < path.hops:
        raise ParameterError(f"insertion slot {j} out of range 0..{path.hops - 1}")
    nodes = path.nodes
    return Path(path.pair, nodes[: j + 1] + (r,) + nodes[j + 1 :])


def remove_relay(path: Path, r: int) -> Path:
    """Drop relay ``r`` and splice its neighbors into a single edge."""
    r = int(r)
    if r not in path.relays:
        raise ParameterError(f"relay {r} is not an interior node of the path")
    return Path(path.pair, tuple(v for v in path.nodes if v != r))


def best_insertion(path: Path, r: int, instance: Instance) -> tuple[int, float]:
    """Slot minimizing the delay after inserting ``r``; ties go to the lowest slot."""
    best_j, best_delay = -1, float("inf")
    for j in range(path.hops):
        delay = path_delay(insert_relay(path, r, j), instance)
        if delay < best_delay:
            best_j, best_delay = j, delay
    return best_j, best_delay
