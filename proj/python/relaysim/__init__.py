"""Jammed multi-UAV relay simulator with a CTDE training stack."""

from ._core import (
    ConfigError,
    Env,
    RunConfig,
    Vec3,
    channel_gain,
    decode_action,
    encode_action,
    link_rate,
    load_config,
    num_actions,
    run_eval,
    sinr,
    train,
)

__all__ = [
    "ConfigError",
    "Env",
    "RunConfig",
    "Vec3",
    "channel_gain",
    "decode_action",
    "encode_action",
    "link_rate",
    "load_config",
    "num_actions",
    "run_eval",
    "sinr",
    "train",
]
