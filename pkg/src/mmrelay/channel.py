"""Millimeter-wave link budget: received power, SNR and Shannon rate.

Two pathloss regimes are supported, line of sight (LOS) and non line of
sight (NLOS), each with its own coefficient and exponent::

    P_R = A * M_T * M_R * d**(-alpha) * P_T
    SNR = P_R / N_0
    R   = W * log2(1 + SNR)

``N_0`` is treated as the total noise power in watts (not a density), and
distances enter the power law in raw meters.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import DomainError, ParameterError

#: Smallest distance (m) the pathloss law is evaluated at.
D_MIN = 1.0


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def dbm_to_watts(p_dbm):
    """Convert a power level from dBm to watts."""
    return _scalar_or_array(10.0 ** (np.asarray(p_dbm, dtype=float) / 10.0) * 1e-3)


@dataclass(frozen=True)
class ChannelParams:
    """Pathloss and link-budget constants shared by every node.

    Defaults are the measured values used in the reference
    experiments: unit pathloss coefficients, exponents 2.2 (LOS) and 3.88
    (NLOS), antenna gains of 4, 1 W transmit power, -40.87 dBm noise and
    1 GHz of bandwidth.
    """

    a_los: float = 1.0
    alpha_los: float = 2.20
    a_nlos: float = 1.0
    alpha_nlos: float = 3.88
    m_t: float = 4.0
    m_r: float = 4.0
    p_t: float = 1.0
    n0: float = dbm_to_watts(-40.87)
    w: float = 1e9

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (np.isfinite(value) and value > 0):
                raise ParameterError(f"{f.name} must be finite and > 0, got {value!r}")
        if self.alpha_nlos < self.alpha_los:
            raise ParameterError("alpha_nlos must be >= alpha_los")

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> ChannelParams:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown channel parameters: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})


def received_power(d, los, params: ChannelParams):
    """Received power in watts at distance ``d`` (m).

    ``d`` and ``los`` may be scalars or broadcastable arrays. Distances below
    :data:`D_MIN` raise :class:`DomainError`; clamping is the caller's job.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d < D_MIN) or np.any(np.isnan(d)):
        raise DomainError(f"distance below the {D_MIN} m clamp")
    los = np.asarray(los, dtype=bool)
    a = np.where(los, params.a_los, params.a_nlos)
    alpha = np.where(los, params.alpha_los, params.alpha_nlos)
    return _scalar_or_array(a * params.m_t * params.m_r * d ** (-alpha) * params.p_t)


def snr(d, los, params: ChannelParams):
    """Received signal-to-noise ratio (linear, not dB)."""
    return _scalar_or_array(np.asarray(received_power(d, los, params)) / params.n0)


def link_rate(d, los, params: ChannelParams):
    """Shannon rate in bits/s, ``W * log2(1 + SNR)``."""
    # log1p keeps precision when the SNR of long NLOS links is tiny
    return _scalar_or_array(params.w * np.log1p(np.asarray(snr(d, los, params))) / np.log(2.0))
