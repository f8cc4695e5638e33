"""Multihop relay path formation in millimeter-wave networks.

Relays choose which source-destination pair to assist through a
cooperative network-formation game whose potential is the proportional-fair
sum ``sum_i -ln D_i`` of the pairs' multihop delays.
"""

from .channel import ChannelParams, dbm_to_watts, link_rate, received_power, snr
from .config import SimConfig, parse_config
from .errors import ConfigError, DomainError, ParameterError, SizeError
from .game import (
    GameState,
    Strategy,
    apply_action,
    choose_action,
    coalition_value,
    is_nash_equilibrium,
    nash_product,
    repercussion_utility,
    run_dynamics,
)
from .harness import BatchStats, RunRecord, enumerate_optimum, run_batch, run_single
from .routing import Path, best_insertion, direct_delay, insert_relay, path_delay, remove_relay
from .topology import Instance, NodeId, Role, distance, generate_instance, los_probability

__all__ = [
    "BatchStats",
    "ChannelParams",
    "ConfigError",
    "DomainError",
    "GameState",
    "Instance",
    "NodeId",
    "ParameterError",
    "Path",
    "Role",
    "RunRecord",
    "SimConfig",
    "SizeError",
    "Strategy",
    "apply_action",
    "best_insertion",
    "choose_action",
    "coalition_value",
    "dbm_to_watts",
    "direct_delay",
    "distance",
    "enumerate_optimum",
    "generate_instance",
    "insert_relay",
    "is_nash_equilibrium",
    "link_rate",
    "los_probability",
    "nash_product",
    "parse_config",
    "path_delay",
    "received_power",
    "remove_relay",
    "repercussion_utility",
    "run_batch",
    "run_dynamics",
    "run_single",
    "snr",
]
