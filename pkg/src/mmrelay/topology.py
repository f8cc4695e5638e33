"""Random scenario generation and geometric queries.

Node indices are dense and laid out by role: for ``m`` pairs and ``n``
relays, sources occupy ``0..m-1``, destinations ``m..2m-1`` and relays
``2m..2m+n-1``. Pair ``i`` (0-based) is ``(i, m + i)``.

Randomness comes from a single NumPy ``PCG64`` stream seeded with the
instance seed. Draw order is fixed:

1. ``2m+n`` rows of ``(u_x, u_y)`` uniforms in node index order, scaled to
   ``[0, width] x [0, height]``;
2. one uniform per unordered node pair ``(a, b)``, ``a < b``, in
   lexicographic order, skipping the ``m`` direct source-destination pairs.
   The link is LOS when the uniform is below ``exp(-beta * d)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .channel import D_MIN, ChannelParams, link_rate
from .errors import DomainError, ParameterError

#: Average LOS range of the reference deployment, 1/beta in meters.
DEFAULT_LOS_RANGE = 141.4
DEFAULT_AREA = (1000.0, 1000.0)
DEFAULT_FILE_SIZE = 1e9


class Role(str, enum.Enum):
    SOURCE = "source"
    DESTINATION = "destination"
    RELAY = "relay"


@dataclass(frozen=True)
class NodeId:
    """A node index together with its role; ``pair`` is None for relays."""

    index: int
    role: Role
    pair: int | None = None

    def __index__(self) -> int:
        return self.index


def los_probability(d: float, beta: float) -> float:
    """Probability that a link of length ``d`` is unblocked, ``exp(-beta d)``."""
    if d < 0 or beta <= 0 or math.isnan(d) or math.isnan(beta):
        raise ParameterError(f"need d >= 0 and beta > 0, got d={d!r}, beta={beta!r}")
    return math.exp(-beta * d)


@dataclass(frozen=True)
class Instance:
    """An immutable scenario: geometry, frozen blockage and link constants."""

    m: int
    n: int
    positions: tuple[tuple[float, float], ...]
    los_pairs: frozenset[tuple[int, int]]
    params: ChannelParams = field(default_factory=ChannelParams)
    file_sizes: tuple[float, ...] = ()
    beta: float = 1.0 / DEFAULT_LOS_RANGE
    area: tuple[float, float] = DEFAULT_AREA
    seed: int | None = None

    def __post_init__(self):
        if self.m < 1 or self.n < 0:
            raise ParameterError(f"need m >= 1 and n >= 0, got m={self.m}, n={self.n}")
        if len(self.positions) != 2 * self.m + self.n:
            raise ParameterError("positions must hold exactly 2m+n nodes")
        if len(self.file_sizes) != self.m:
            raise ParameterError("file_sizes must hold one entry per pair")
        if any(b < 0 for b in self.file_sizes):
            raise ParameterError("file sizes must be non-negative")
        width, height = self.area
        for x, y in self.positions:
            if not (0.0 <= x <= width and 0.0 <= y <= height):
                raise ParameterError(f"node at ({x}, {y}) lies outside the area")
        for a, b in self.los_pairs:
            if not (0 <= a < b < self.num_nodes):
                raise ParameterError(f"LOS pair ({a}, {b}) must be ordered and in range")
        for i in range(self.m):
            if (self.source(i), self.destination(i)) in self.los_pairs:
                raise ParameterError(f"direct link of pair {i} must be NLOS")

    @property
    def num_nodes(self) -> int:
        return 2 * self.m + self.n

    def source(self, pair: int) -> int:
        return pair

    def destination(self, pair: int) -> int:
        return self.m + pair

    @property
    def relays(self) -> range:
        return range(2 * self.m, 2 * self.m + self.n)

    def is_relay(self, node: int) -> bool:
        return 2 * self.m <= node < self.num_nodes

    def node(self, index: int) -> NodeId:
        if not 0 <= index < self.num_nodes:
            raise ParameterError(f"node index {index} out of range")
        if index < self.m:
            return NodeId(index, Role.SOURCE, index)
        if index < 2 * self.m:
            return NodeId(index, Role.DESTINATION, index - self.m)
        return NodeId(index, Role.RELAY)

    @property
    def nodes(self) -> list[NodeId]:
        return [self.node(i) for i in range(self.num_nodes)]

    def is_los(self, a: int, b: int) -> bool:
        a, b = int(a), int(b)
        return (min(a, b), max(a, b)) in self.los_pairs

    @cached_property
    def los_matrix(self) -> np.ndarray:
        los = np.zeros((self.num_nodes, self.num_nodes), dtype=bool)
        for a, b in self.los_pairs:
            los[a, b] = los[b, a] = True
        los.flags.writeable = False
        return los

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        xy = np.asarray(self.positions, dtype=float)
        d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
        d = np.maximum(d, D_MIN)
        d.flags.writeable = False
        return d

    @cached_property
    def rate_matrix(self) -> np.ndarray:
        """Pairwise link rates (bits/s); the diagonal is meaningless."""
        rates = link_rate(self.distance_matrix, self.los_matrix, self.params)
        rates.flags.writeable = False
        return rates

    @cached_property
    def seconds_per_bit(self) -> list[list[float]]:
        """Reciprocal rates as nested Python lists, for fast scalar lookups."""
        return (1.0 / self.rate_matrix).tolist()

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "seed": self.seed,
            "area": list(self.area),
            "beta": self.beta,
            "file_sizes": list(self.file_sizes),
            "params": self.params.to_dict(),
            "nodes": [
                {
                    "id": node.index,
                    "role": node.role.value,
                    "pair": node.pair,
                    "x": self.positions[node.index][0],
                    "y": self.positions[node.index][1],
                }
                for node in self.nodes
            ],
            "los": sorted([a, b] for a, b in self.los_pairs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Instance:
        nodes = sorted(data["nodes"], key=lambda nd: nd["id"])
        return cls(
            m=int(data["m"]),
            n=int(data["n"]),
            positions=tuple((float(nd["x"]), float(nd["y"])) for nd in nodes),
            los_pairs=frozenset((int(a), int(b)) for a, b in data["los"]),
            params=ChannelParams.from_dict(data["params"]),
            file_sizes=tuple(float(b) for b in data["file_sizes"]),
            beta=float(data["beta"]),
            area=(float(data["area"][0]), float(data["area"][1])),
            seed=data.get("seed"),
        )


def distance(instance: Instance, a: int, b: int) -> float:
    """Euclidean distance in meters, clamped below at ``D_MIN``."""
    a, b = int(a), int(b)
    if a == b:
        raise DomainError("distance from a node to itself is undefined")
    (xa, ya), (xb, yb) = instance.positions[a], instance.positions[b]
    return max(math.hypot(xa - xb, ya - yb), D_MIN)


def generate_instance(
    seed: int,
    m: int,
    n: int,
    area: tuple[float, float] = DEFAULT_AREA,
    params: ChannelParams | None = None,
    file_sizes: float | tuple[float, ...] = DEFAULT_FILE_SIZE,
    beta: float = 1.0 / DEFAULT_LOS_RANGE,
) -> Instance:
    """Place ``2m+n`` nodes uniformly on ``area`` and sample static blockage.

    ``file_sizes`` is either one size shared by every pair or one per pair.
    """
    if m < 1 or n < 0:
        raise ParameterError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    width, height = area
    if not (width > 0 and height > 0):
        raise ParameterError(f"area dimensions must be positive, got {area}")
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    if seed < 0:
        raise ParameterError("seed must be a non-negative integer")
    if np.ndim(file_sizes) == 0:
        file_sizes = (float(file_sizes),) * m
    params = params or ChannelParams()

    rng = np.random.Generator(np.random.PCG64(seed))
    count = 2 * m + n
    xy = rng.random((count, 2)) * np.array([width, height])
    positions = tuple((float(x), float(y)) for x, y in xy)

    direct = {(i, m + i) for i in range(m)}
    candidates = [(a, b) for a in range(count) for b in range(a + 1, count) if (a, b) not in direct]
    draws = rng.random(len(candidates))
    los_pairs = set()
    for (a, b), u in zip(candidates, draws):
        if u < los_probability(math.hypot(*(xy[a] - xy[b])), beta):
            los_pairs.add((a, b))

    return Instance(
        m=m,
        n=n,
        positions=positions,
        los_pairs=frozenset(los_pairs),
        params=params,
        file_sizes=tuple(float(b) for b in file_sizes),
        beta=float(beta),
        area=(float(width), float(height)),
        seed=seed,
    )
