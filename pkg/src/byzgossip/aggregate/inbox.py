"""Per-round message collections and their assembly from honest state and forged entries."""

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from loguru import logger

from ..errors import ContractViolationError, ProtocolViolationError
from ..graph.topology import Topology


@dataclass(frozen=True)
class Mailbox:
    """Declared vectors received by one honest node, one row per sender, senders sorted."""

    senders: tuple[int, ...]
    vectors: np.ndarray


@dataclass(frozen=True)
class Inbox:
    """Messages for every honest receiver, in ParamMatrix row order.

    ``expected`` holds each receiver's full neighbor set; ``validate`` checks that
    every mailbox covers exactly that set.
    """

    receivers: tuple[int, ...]
    mailboxes: tuple[Mailbox, ...]
    expected: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return sum(len(box.senders) for box in self.mailboxes)

    def validate(self, dim: int) -> None:
        if len(self.mailboxes) != len(self.receivers) or len(self.expected) != len(self.receivers):
            raise ProtocolViolationError("inbox does not have one mailbox per honest receiver")
        for receiver, box, expected in zip(self.receivers, self.mailboxes, self.expected):
            if box.senders != expected:
                missing = sorted(set(expected) - set(box.senders))
                extra = sorted(set(box.senders) - set(expected))
                raise ProtocolViolationError(
                    f"mailbox of node {receiver}: missing senders {missing}, unexpected {extra}"
                )
            if box.vectors.shape != (len(expected), dim):
                raise ProtocolViolationError(
                    f"mailbox of node {receiver} has shape {box.vectors.shape}, "
                    f"expected {(len(expected), dim)}"
                )
            if not np.all(np.isfinite(box.vectors)):
                raise ContractViolationError(f"mailbox of node {receiver} has non-finite vectors")


def assemble_inbox(
    X: np.ndarray,
    topology: Topology,
    forged: Mapping[tuple[int, int], np.ndarray],
) -> Inbox:
    """Merge true honest parameters with forged Byzantine entries.

    Args:
        X: Honest ParamMatrix (rows follow ``topology.honest_ids()``)
        topology: Full topology
        forged: Declared vectors keyed by ``(byzantine sender, honest receiver)``

    Returns:
        Inbox with exactly one entry per (honest receiver, neighbor) edge

    Raises:
        ProtocolViolationError: If forged entries miss or overlap an edge, or sit on a non-edge
    """
    honest = topology.honest_ids()
    row_of = {node: row for row, node in enumerate(honest)}
    if X.shape[0] != len(honest):
        raise ContractViolationError(f"X has {X.shape[0]} rows for {len(honest)} honest nodes")

    for sender, receiver in forged:
        if sender not in topology.byzantine:
            raise ProtocolViolationError(f"forged entry from non-Byzantine node {sender}")
        if receiver not in row_of:
            raise ProtocolViolationError(f"forged entry addressed to non-honest node {receiver}")
        if receiver not in topology.neighbors(sender):
            raise ProtocolViolationError(f"forged entry on non-edge ({sender}, {receiver})")

    mailboxes = []
    expected = []
    for receiver in honest:
        senders = topology.neighbors(receiver)
        vectors = np.empty((len(senders), X.shape[1]), dtype=np.float64)
        for slot, sender in enumerate(senders):
            if sender in row_of:
                vectors[slot] = X[row_of[sender]]
            else:
                declared = forged.get((sender, receiver))
                if declared is None:
                    raise ProtocolViolationError(
                        f"no forged entry for Byzantine edge ({sender}, {receiver})"
                    )
                vectors[slot] = declared
        mailboxes.append(Mailbox(senders=senders, vectors=vectors))
        expected.append(senders)

    inbox = Inbox(receivers=honest, mailboxes=tuple(mailboxes), expected=tuple(expected))
    logger.debug(f"Assembled inbox with {len(inbox)} entries ({len(forged)} forged)")
    return inbox
