"""This module implements the per-run energy ledger.

Every transmission costs ``hops * unit_cost`` energy units, paid by the sender.
A sender that cannot pay does not transmit; the attempt is recorded as a drop.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import logging
import math
from typing import Iterable, List, NamedTuple, Optional

from . import SimulationError
from .field import SensorNode

logger = logging.getLogger(__name__)


class Charge(NamedTuple):
    tick: int
    node_id: int
    amount: float
    hops: int


class DropEvent(NamedTuple):
    tick: int
    node_id: int
    hops: int
    reason: str


class Transmission(NamedTuple):
    ledger: 'EnergyLedger'
    sender: SensorNode
    delivered: bool


class EnergyLedger(object):
    """Append-only record of charges and drops for one run.

    A ledger belongs to a single run and is never shared between runs.
    """

    def __init__(self, unit_cost: float, entries: Iterable[Charge] = (), drops: Iterable[DropEvent] = ()):
        if not unit_cost > 0:
            raise SimulationError('unit_cost must be positive, got %r.' % (unit_cost,))
        self.unit_cost = float(unit_cost)
        self.entries = list(entries)    # type: List[Charge]
        self.drops = list(drops)        # type: List[DropEvent]

    def total(self, tick: Optional[int] = None) -> float:
        return math.fsum(entry.amount for entry in self.entries if tick is None or entry.tick == tick)

    def series(self, ticks: Iterable[int]) -> List[float]:
        return [self.total(tick) for tick in ticks]

    def node_total(self, node_id: int) -> float:
        return math.fsum(entry.amount for entry in self.entries if entry.node_id == node_id)

    def transmissions(self, tick: Optional[int] = None) -> int:
        return sum(entry.hops for entry in self.entries if tick is None or entry.tick == tick)

    def record_drop(self, tick: int, node_id: int, hops: int, reason: str) -> DropEvent:
        event = DropEvent(tick, node_id, hops, reason)
        self.drops.append(event)
        logger.debug('tick %d: node %d dropped a %d-hop transmission: %s', tick, node_id, hops, reason)
        return event

    def extend(self, other: 'EnergyLedger') -> 'EnergyLedger':
        self.entries.extend(other.entries)
        self.drops.extend(other.drops)
        return self

    def __eq__(self, other):
        if not isinstance(other, EnergyLedger):
            return NotImplemented
        return (self.unit_cost, self.entries, self.drops) == (other.unit_cost, other.entries, other.drops)

    def __repr__(self):
        return '<EnergyLedger %d charges, %d drops, total %.2f>' % (
            len(self.entries), len(self.drops), self.total())


def charge_transmission(ledger: EnergyLedger, tick: int, sender: SensorNode, hops: int) -> Transmission:
    """Charge ``sender`` for a ``hops``-hop transmission.

    Returns:
        A ``Transmission`` holding the ledger, the sender with its energy decremented,
        and whether the transmission took place. A dead sender, or one with less
        energy than the charge, leaves its energy untouched and records a drop.
    """
    if hops < 1:
        raise SimulationError('A transmission needs at least one hop, got %r.' % (hops,))
    amount = hops * ledger.unit_cost
    if not sender.alive:
        ledger.record_drop(tick, sender.id, hops, 'sender is dead')
        return Transmission(ledger, sender, False)
    if sender.residual_energy < amount:
        ledger.record_drop(tick, sender.id, hops, 'insufficient energy (%.2f < %.2f)'
                           % (sender.residual_energy, amount))
        return Transmission(ledger, sender, False)

    ledger.entries.append(Charge(tick, sender.id, amount, hops))
    sender = sender.with_energy(sender.residual_energy - amount)
    return Transmission(ledger, sender, True)
