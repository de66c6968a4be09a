"""This module implements the structured run report written by ``--out``.

A report is plain text made of blocks. Each block starts with a ``[name]`` line:
``[config]`` echoes the settings, ``[series <mode>]`` lists per-tick energy,
``[totals]`` sums each series and ``[transmissions]`` counts the hops paid for.
``[accuracy]`` lists per-tick aggregate errors, ``[drops]`` lists transmissions
that could not be paid for, and ``[tree]`` holds the canonical index tree
serialization.

``sweep`` and ``query`` write smaller reports with the same ``[config]`` block.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import dataclasses
import math
from typing import List, Mapping, Optional, Sequence, Tuple

from . import SimulationError
from .energy_ledger import DropEvent
from .index_tree import serialize_tree
from .simulation import SimulationResult


def format_energy(value: float) -> str:
    return '%.2f' % value


def format_error(value: Optional[float]) -> str:
    return '-' if value is None else '%.6f' % value


@dataclasses.dataclass(frozen=True)
class RunReport(object):
    config_echo: str
    modes: Tuple[str, ...]
    series: Mapping[str, Tuple[Tuple[int, float], ...]]
    totals: Mapping[str, float]
    transmissions: Mapping[str, int]
    accuracy: Mapping[str, Tuple[Tuple[int, Optional[float]], ...]]
    drops: Mapping[str, Tuple[DropEvent, ...]]
    tree: str
    note: str = ''

    @classmethod
    def from_results(cls, config_echo: str, results: Mapping[str, SimulationResult], note: str = '') -> 'RunReport':
        """Collect the measured series of one result per mode (``'normal'``, ``'dedup'``)."""
        if not results:
            raise SimulationError('A run report needs at least one result.')
        modes = tuple(results)
        series, totals, transmissions, accuracy, drops = {}, {}, {}, {}, {}
        for mode, result in results.items():
            ticks = result.measured_ticks
            series[mode] = tuple(zip(ticks, result.energy_series()))
            totals[mode] = result.total_energy()
            transmissions[mode] = sum(result.ledger.transmissions(tick) for tick in ticks)
            accuracy[mode] = tuple(zip(ticks, result.accuracy_series()))
            drops[mode] = tuple(result.ledger.drops)
        first = results[modes[0]]
        return cls(config_echo=config_echo, modes=modes, series=series, totals=totals, transmissions=transmissions,
                   accuracy=accuracy, drops=drops, tree=serialize_tree(first.deployment.tree), note=note)

    def check_totals(self):
        for mode in self.modes:
            expected = math.fsum(energy for _, energy in self.series[mode])
            if format_energy(expected) != format_energy(self.totals[mode]):
                raise SimulationError('Total for mode %s (%s) does not match its series (%s).'
                                      % (mode, format_energy(self.totals[mode]), format_energy(expected)))

    def comparison_rows(self) -> List[str]:
        """``tick,<mode>,...`` rows followed by a ``total`` row."""
        rows = ['tick,' + ','.join(self.modes)]
        ticks = [tick for tick, _ in self.series[self.modes[0]]]
        energy = {mode: dict(self.series[mode]) for mode in self.modes}
        for tick in ticks:
            rows.append('%d,%s' % (tick, ','.join(format_energy(energy[mode][tick]) for mode in self.modes)))
        rows.append('total,' + ','.join(format_energy(self.totals[mode]) for mode in self.modes))
        return rows

    def render(self) -> str:
        self.check_totals()
        lines = _preamble('run', self.config_echo, self.note)

        for mode in self.modes:
            lines.append('')
            lines.append('[series %s]' % mode)
            lines.append('tick,energy')
            lines.extend('%d,%s' % (tick, format_energy(energy)) for tick, energy in self.series[mode])

        lines.append('')
        lines.append('[totals]')
        lines.extend('%s = %s' % (mode, format_energy(self.totals[mode])) for mode in self.modes)

        lines.append('')
        lines.append('[transmissions]')
        lines.extend('%s = %d' % (mode, self.transmissions[mode]) for mode in self.modes)

        lines.append('')
        lines.append('[accuracy]')
        lines.append('tick,' + ','.join(self.modes))
        errors = {mode: dict(self.accuracy[mode]) for mode in self.modes}
        for tick, _ in self.accuracy[self.modes[0]]:
            lines.append('%d,%s' % (tick, ','.join(format_error(errors[mode].get(tick)) for mode in self.modes)))

        lines.append('')
        lines.append('[drops]')
        lines.append('mode,tick,node_id,hops,reason')
        for mode in self.modes:
            lines.extend('%s,%d,%d,%d,%s' % (mode, event.tick, event.node_id, event.hops, event.reason)
                         for event in self.drops[mode])

        lines.append('')
        lines.append('[tree]')
        lines.extend(self.tree.splitlines())
        return '\n'.join(lines) + '\n'

    def write(self, path: str) -> None:
        _write(path, self.render())


def _preamble(kind: str, config_echo: str, note: str) -> List[str]:
    lines = ['# Flask-GridTree %s report' % kind]
    if note:
        lines.append('# note: %s' % note)
    lines.append('[config]')
    lines.extend(config_echo.splitlines())
    return lines


def _write(path: str, text: str) -> None:
    with open(path, 'w') as f:
        f.write(text)


@dataclasses.dataclass(frozen=True)
class SweepReport(object):
    """Mean accuracy error per cluster count, as printed by ``sweep``."""
    config_echo: str
    metric: str
    rows: Tuple[Tuple[int, Optional[float]], ...]
    note: str = ''

    def render(self) -> str:
        lines = _preamble('sweep', self.config_echo, self.note)
        lines.append('')
        lines.append('[sweep %s]' % self.metric)
        lines.append('clusters,error')
        lines.extend('%d,%s' % (count, format_error(error)) for count, error in self.rows)
        return '\n'.join(lines) + '\n'

    def write(self, path: str) -> None:
        _write(path, self.render())


@dataclasses.dataclass(frozen=True)
class QueryReport(object):
    config_echo: str
    query: str
    exact: bool
    value: str
    cells: Sequence[int]
    note: str = ''

    def render(self) -> str:
        lines = _preamble('query', self.config_echo, self.note)
        lines.append('')
        lines.append('[query]')
        lines.append('query = %s' % self.query)
        lines.append('exact = %s' % ('yes' if self.exact else 'no'))
        lines.append('value = %s' % self.value)
        lines.append('cells = %s' % ','.join(str(cell) for cell in self.cells))
        return '\n'.join(lines) + '\n'

    def write(self, path: str) -> None:
        _write(path, self.render())
