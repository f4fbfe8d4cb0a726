"""One synchronous round of each aggregation rule.

All rules read from the pre-round snapshot ``X`` and sum neighbor contributions in
increasing sender-id order, so results do not depend on evaluation order.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger

from ..errors import ContractViolationError, InvalidParameterError
from ..schema.models import AggregationRule, RuleConfig
from .inbox import Inbox
from .threshold import cgplus_threshold, clip_rows


@dataclass(frozen=True)
class RoundOutcome:
    """Result of one aggregation round."""

    X: np.ndarray
    clipped: int
    thresholds: np.ndarray


def _check(X: np.ndarray, inbox: Inbox) -> np.ndarray:
    matrix = np.asarray(X, dtype=np.float64)
    if matrix.ndim != 2:
        raise ContractViolationError(f"ParamMatrix must be 2-D, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ContractViolationError("ParamMatrix has non-finite entries")
    if matrix.shape[0] != len(inbox.receivers):
        raise ContractViolationError(
            f"ParamMatrix has {matrix.shape[0]} rows, inbox has {len(inbox.receivers)} receivers"
        )
    inbox.validate(matrix.shape[1])
    return matrix


def _gossip(X: np.ndarray, inbox: Inbox, eta: float) -> RoundOutcome:
    Y = X.copy()
    for row, box in enumerate(inbox.mailboxes):
        if box.senders:
            Y[row] = X[row] + eta * np.sum(box.vectors - X[row], axis=0)
    return RoundOutcome(Y, 0, np.full(X.shape[0], math.inf))


def _cgplus(X: np.ndarray, inbox: Inbox, cfg: RuleConfig) -> RoundOutcome:
    Y = X.copy()
    taus = np.zeros(X.shape[0])
    clipped = 0
    for row, box in enumerate(inbox.mailboxes):
        if not box.senders:
            continue
        diffs = box.vectors - X[row]
        tau = cgplus_threshold(np.linalg.norm(diffs, axis=1), cfg.b)
        kept, count = clip_rows(diffs, tau)
        Y[row] = X[row] + cfg.eta * np.sum(kept, axis=0)
        taus[row] = tau
        clipped += count
    return RoundOutcome(Y, clipped, taus)


def _nna(X: np.ndarray, inbox: Inbox, cfg: RuleConfig) -> RoundOutcome:
    Y = X.copy()
    taus = np.zeros(X.shape[0])
    dropped = 0
    for row, box in enumerate(inbox.mailboxes):
        k = len(box.senders)
        if k == 0:
            continue
        diffs = box.vectors - X[row]
        distances = np.linalg.norm(diffs, axis=1)
        # distance descending, then sender id ascending
        order = np.lexsort((np.asarray(box.senders), -distances))
        keep = np.ones(k, dtype=bool)
        keep[order[: cfg.b]] = False
        step = 1.0 / (k - cfg.b + 1) if cfg.nna_local_step else cfg.eta
        if keep.any():
            Y[row] = X[row] + step * np.sum(diffs[keep], axis=0)
            taus[row] = float(distances[keep].max())
        dropped += int((~keep).sum())
    return RoundOutcome(Y, dropped, taus)


def _oracle(
    X: np.ndarray, inbox: Inbox, cfg: RuleConfig, honest_labels: frozenset[int]
) -> RoundOutcome:
    if cfg.b < 1:
        raise InvalidParameterError("ClippedGossip oracle threshold needs b >= 1")
    n_honest = X.shape[0]
    if n_honest <= cfg.b:
        raise InvalidParameterError(
            f"oracle threshold needs |H| > b, got |H|={n_honest}, b={cfg.b}"
        )

    Y = X.copy()
    taus = np.zeros(n_honest)
    clipped = 0
    for row, box in enumerate(inbox.mailboxes):
        if not box.senders:
            continue
        diffs = box.vectors - X[row]
        honest_slots = [slot for slot, s in enumerate(box.senders) if s in honest_labels]
        energy = float(np.sum(diffs[honest_slots] ** 2)) if honest_slots else 0.0
        tau = math.sqrt(energy / ((n_honest - cfg.b) * cfg.b))
        kept, count = clip_rows(diffs, tau)
        Y[row] = X[row] + cfg.eta * np.sum(kept, axis=0)
        taus[row] = tau
        clipped += count
    return RoundOutcome(Y, clipped, taus)


def plain_gossip_round(X: np.ndarray, inbox: Inbox, eta: float) -> np.ndarray:
    """Unprotected gossip ``x_i + eta * sum_j (x_j - x_i)`` over declared values."""
    if eta <= 0:
        raise InvalidParameterError(f"eta must be > 0, got {eta}")
    return _gossip(_check(X, inbox), inbox, eta).X


def cgplus_round(X: np.ndarray, inbox: Inbox, cfg: RuleConfig) -> np.ndarray:
    """Clipped gossip with the (b+1)-th largest declared distance as radius."""
    return _cgplus(_check(X, inbox), inbox, cfg).X


def nna_round(X: np.ndarray, inbox: Inbox, cfg: RuleConfig) -> np.ndarray:
    """Trimmed gossip dropping the b furthest declared neighbors.

    Ties at the cut are dropped by (distance desc, sender id asc). The step is the
    gossip ``eta`` unless ``cfg.nna_local_step`` selects ``1/(|n(i)| - b + 1)``.
    """
    return _nna(_check(X, inbox), inbox, cfg).X


def clippedgossip_oracle_round(
    X: np.ndarray, inbox: Inbox, cfg: RuleConfig, honest_labels: frozenset[int]
) -> np.ndarray:
    """Clipped gossip with the oracle radius.

    ``tau_i = sqrt(sum_{j in n_H(i)} ||x_i - x_j||^2 / ((|H| - b) b))``. Only the
    simulation harness may supply ``honest_labels``.
    """
    return _oracle(_check(X, inbox), inbox, cfg, frozenset(honest_labels)).X


def aggregation_round(
    X: np.ndarray,
    inbox: Inbox,
    cfg: RuleConfig,
    honest_labels: Optional[frozenset[int]] = None,
) -> RoundOutcome:
    """Dispatch one round of ``cfg.rule`` and report clipping activity.

    ``clipped`` counts shortened differences for clipping rules and dropped
    neighbors for NNA.
    """
    matrix = _check(X, inbox)
    if cfg.rule == AggregationRule.PLAIN_GOSSIP:
        outcome = _gossip(matrix, inbox, cfg.eta)
    elif cfg.rule == AggregationRule.CG_PLUS:
        outcome = _cgplus(matrix, inbox, cfg)
    elif cfg.rule == AggregationRule.NNA:
        outcome = _nna(matrix, inbox, cfg)
    elif cfg.rule == AggregationRule.CLIPPED_GOSSIP_ORACLE:
        if honest_labels is None:
            raise InvalidParameterError("ClippedGossipOracle needs honest labels")
        outcome = _oracle(matrix, inbox, cfg, frozenset(honest_labels))
    else:
        raise InvalidParameterError(f"Unknown aggregation rule: {cfg.rule}")

    logger.debug(f"{cfg.rule.value} round: {outcome.clipped} clipped/dropped")
    return outcome
