"""
The work behind each hfavg action. Every function takes a validated RunConfig
and returns plain data for the renderers; nothing here writes output.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List

import numpy as np
from django.conf import settings

from averaging.evaluation import SchemeReport, avg_frequency, quadrupole_sum_rule_checks, verify_scheme
from averaging.schemes import AveragingScheme
from fieldpoint.search import FieldIndependentPoint, analytic_fip, find_fip
from species.constants import GAUSS_PER_TESLA
from species.levels import LevelSpec, SpeciesDb, TrapGeometry
from zeeman.hamiltonian import build_block, eigenstates

from .runconfig import RunConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Table:
    columns: List[str]
    rows: List[List[float]]

    def in_tesla(self) -> 'Table':
        """First column converted from gauss to tesla"""
        columns = ['B_tesla', *self.columns[1:]]
        return Table(columns, [[row[0] / GAUSS_PER_TESLA, *row[1:]] for row in self.rows])


def state_label(level: LevelSpec, two_f: int, two_mf: int) -> str:
    return f'{level.ref}_F{two_f}_mF{two_mf}'


def spectrum(config: RunConfig, db: SpeciesDb) -> Table:
    """Every dressed-state energy of one level over the B grid, Hz from the hyperfine centroid"""
    level = db.level(config.level)
    two_f_max = level.two_i + level.two_j
    projections = range(-two_f_max, two_f_max + 1, 2)
    states = sorted(
        (two_f, two_mf) for two_mf in projections for two_f in level.block_basis(two_mf)
    )
    rows = []
    for field_gauss in config.fields:
        energies = {}
        for two_mf in projections:
            for state in eigenstates(build_block(level, two_mf, field_gauss)):
                energies[(state.two_f, two_mf)] = state.energy
        rows.append([field_gauss, *(energies[s] for s in states)])
    return Table(['B_gauss', *(state_label(level, f, m) for f, m in states)], rows)


def curve(config: RunConfig, scheme: AveragingScheme) -> Table:
    """
    Component frequencies and their weighted average relative to B = 0, with
    the fine-structure quadratic included.
    """
    transitions = scheme.transitions
    origin = [t.frequency(0.0, fine_structure=True) for t in transitions]
    avg_origin = avg_frequency(scheme, 0.0, fine_structure=True)
    rows = []
    for field_gauss in config.fields:
        components = [
            t.frequency(field_gauss, fine_structure=True) - zero for t, zero in zip(transitions, origin)
        ]
        average = avg_frequency(scheme, field_gauss, fine_structure=True) - avg_origin
        rows.append([field_gauss, *components, average])
    return Table(['B_gauss', *(t.name for t in transitions), 'avg'], rows)


def random_geometries(a_grad: float, count: int, seed: int) -> List[TrapGeometry]:
    rng = np.random.default_rng(seed)
    return [
        TrapGeometry(
            a_grad=a_grad,
            epsilon=float(rng.uniform(-1.0, 1.0)),
            alpha=float(rng.uniform(0.0, 2 * math.pi)),
            beta=float(rng.uniform(0.0, math.pi)),
        )
        for _ in range(count)
    ]


def verify(config: RunConfig, scheme: AveragingScheme) -> SchemeReport:
    """
    The scheme's cancellation checks, then the quadrupole sum rules of each
    of its J >= 1 levels at the configured geometry and over the sweep.
    """
    report = verify_scheme(scheme, config.geometry, config.fields)
    levels = [level for level in scheme.levels if level.two_j >= 2]
    checks = list(report.checks)
    for level in levels:
        checks.extend(quadrupole_sum_rule_checks(level, config.geometry))

    sweep = random_geometries(config.geometry.a_grad, config.geom_samples, settings.HFAVG['GEOMETRY_SEED'])
    for index, geom in enumerate(sweep):
        for level in levels:
            checks.extend(quadrupole_sum_rule_checks(level, geom, f'#{index}'))
    logger.info(f'Verified {scheme.name}: {len(checks)} checks over {len(sweep)} random geometries')
    return SchemeReport(scheme.name, checks)


def fip(config: RunConfig, scheme: AveragingScheme) -> Dict[str, Any]:
    """
    Closed-form and numeric field-independent points. A scheme with no net
    delta m has its analytic point at zero field, and the numeric search is
    skipped.
    """
    analytic = analytic_fip(scheme)
    result = {'scheme': scheme.name, 'analytic': analytic, 'numeric': None, 'discrepancy': None}
    if analytic.B_star == 0:
        logger.info(f'Scheme {scheme.name} has no linear slope; skipping the numeric search')
        return result
    lo, hi, _ = config.b_range
    numeric = find_fip(scheme, lo, hi)
    result['numeric'] = numeric
    result['discrepancy'] = numeric.B_star - analytic.B_star
    return result


def point_in_tesla(point: FieldIndependentPoint) -> FieldIndependentPoint:
    """Fields in T, slopes in Hz/T, curvature in Hz/T²"""
    bracket = point.bracket and tuple(b / GAUSS_PER_TESLA for b in point.bracket)
    return replace(
        point,
        B_star=point.B_star / GAUSS_PER_TESLA,
        bracket=bracket,
        curvature=point.curvature * GAUSS_PER_TESLA ** 2,
        component_slopes={name: s * GAUSS_PER_TESLA for name, s in point.component_slopes.items()},
        residual_slope=point.residual_slope * GAUSS_PER_TESLA,
    )
