"""Simulation configuration: defaults, ``key = value`` files and overrides."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .channel import ChannelParams, dbm_to_watts
from .errors import ConfigError, ParameterError
from .topology import DEFAULT_FILE_SIZE, DEFAULT_LOS_RANGE

_CHANNEL_KEYS = ("a_los", "alpha_los", "a_nlos", "alpha_nlos", "m_t", "m_r", "p_t", "w")


@dataclass(frozen=True)
class SimConfig:
    m: int = 3
    n: int = 10
    width: float = 1000.0
    height: float = 1000.0
    beta: float = 1.0 / DEFAULT_LOS_RANGE
    a_los: float = 1.0
    alpha_los: float = 2.20
    a_nlos: float = 1.0
    alpha_nlos: float = 3.88
    m_t: float = 4.0
    m_r: float = 4.0
    p_t: float = 1.0
    n0_dbm: float = -40.87
    w: float = 1e9
    file_sizes: tuple[float, ...] = field(default=(DEFAULT_FILE_SIZE,))
    epsilon: float = 1e-4
    max_rounds: int = 100
    runs: int = 1000
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.m < 1 or self.n < 0:
            raise ParameterError("m must be >= 1 and n >= 0")
        if not (self.width > 0 and self.height > 0 and self.beta > 0):
            raise ParameterError("width, height and beta must be positive")
        if not 0.0 <= self.epsilon < 1.0:
            raise ParameterError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if self.max_rounds < 1 or self.runs < 1 or self.jobs < 1:
            raise ParameterError("max_rounds, runs and jobs must be >= 1")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative")
        if len(self.file_sizes) not in (1, self.m) or any(b <= 0 for b in self.file_sizes):
            raise ParameterError("file_sizes needs one positive size, or one per pair")
        self.channel_params()  # validates the link constants

    @property
    def area(self) -> tuple[float, float]:
        return (self.width, self.height)

    def channel_params(self) -> ChannelParams:
        values = {k: getattr(self, k) for k in _CHANNEL_KEYS}
        return ChannelParams(n0=dbm_to_watts(self.n0_dbm), **values)

    def pair_file_sizes(self) -> tuple[float, ...]:
        if len(self.file_sizes) == 1:
            return self.file_sizes * self.m
        return self.file_sizes

    def to_dict(self) -> dict:
        data = asdict(self)
        data["file_sizes"] = list(self.file_sizes)
        return data


_FIELDS = {f.name: f for f in fields(SimConfig)}


def _convert(key: str, raw) -> object:
    if key == "file_sizes":
        if isinstance(raw, str):
            return tuple(float(part) for part in raw.replace(",", " ").split())
        if isinstance(raw, (int, float)):
            return (float(raw),)
        return tuple(float(b) for b in raw)
    if _FIELDS[key].type == "int":
        if isinstance(raw, int):
            return raw
        try:
            return int(raw)
        except ValueError:
            value = float(raw)
        if not value.is_integer():
            raise ValueError(f"{raw!r} is not an integer")
        return int(value)
    return float(raw)


def parse_config(
    path: str | Path | None = None, overrides: dict | None = None, base: SimConfig | None = None
) -> SimConfig:
    """Defaults (or ``base``), then values from the ``key = value`` file at ``path``, then ``overrides``.

    Blank lines and ``#`` comments are ignored. Unknown keys and unparseable
    values raise :class:`ConfigError` naming the key (and line, for files).
    """
    values: dict[str, object] = {}
    if path is not None:
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, raw = line.partition("=")
            key = key.strip()
            if not sep:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
            if key not in _FIELDS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                values[key] = _convert(key, raw.strip())
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        if key not in _FIELDS:
            raise ConfigError(f"unknown key {key!r}")
        try:
            values[key] = _convert(key, raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
    try:
        return replace(base or SimConfig(), **values)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None
