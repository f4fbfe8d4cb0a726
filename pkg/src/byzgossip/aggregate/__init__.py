"""Aggregation rules and error-term instrumentation."""

from .error_term import (
    ErrorTermReport,
    extract_error_term,
    pairwise_energy_pairs,
    pairwise_energy_quadratic,
)
from .inbox import Inbox, Mailbox, assemble_inbox
from .rule_config import build_rule_config
from .rules import (
    RoundOutcome,
    aggregation_round,
    cgplus_round,
    clippedgossip_oracle_round,
    nna_round,
    plain_gossip_round,
)
from .threshold import cgplus_threshold, clip, clip_rows, clipping_err

__all__ = [
    "ErrorTermReport",
    "Inbox",
    "Mailbox",
    "RoundOutcome",
    "aggregation_round",
    "assemble_inbox",
    "build_rule_config",
    "cgplus_round",
    "cgplus_threshold",
    "clip",
    "clip_rows",
    "clipping_err",
    "clippedgossip_oracle_round",
    "extract_error_term",
    "nna_round",
    "pairwise_energy_pairs",
    "pairwise_energy_quadratic",
    "plain_gossip_round",
]
