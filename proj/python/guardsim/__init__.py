"""Guard-channel admission control simulator (FCA, static guard channels, ACAS)."""

from ._guardsim import (
    AdaptationReport,
    AdaptationRule,
    Decision,
    OracleResult,
    PolicyKind,
    PolicyParams,
    PolicyState,
    ValidationError,
    compare,
    erlang_b,
    guard_channel_stationary,
    run,
)

__all__ = [
    "AdaptationReport",
    "AdaptationRule",
    "Decision",
    "OracleResult",
    "PolicyKind",
    "PolicyParams",
    "PolicyState",
    "ValidationError",
    "compare",
    "erlang_b",
    "guard_channel_stationary",
    "run",
]
