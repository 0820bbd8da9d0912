"""Minimum-voltage selection and savings rollup against a characterization table.

Feasibility comes straight from measured post-route operating points, not
from a parametric delay law: achieved clock speed is an empirical outcome
of the flow, so the table is authoritative.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Mapping

from .crossings import IssueKind, analyze_crossings
from .netlist import ActivityProfile, CharTable, Design
from .power import DynamicPowerParams, dynamic_power

__all__ = [
    "OperatingPoint",
    "VoltagePlan",
    "SavingsRow",
    "SavingsReport",
    "InfeasibleError",
    "select_min_voltage",
    "assign_voltages",
    "power_savings_summary",
]


class InfeasibleError(Exception):
    """No characterized operating point meets the frequency requirement."""

    def __init__(self, island_class: str, f_req_mhz: float, best_fmax_mhz: float) -> None:
        self.island_class = island_class
        self.f_req_mhz = f_req_mhz
        self.best_fmax_mhz = best_fmax_mhz
        super().__init__(
            f"island class '{island_class}': required {f_req_mhz:g} MHz exceeds"
            f" best available {best_fmax_mhz:g} MHz"
        )


@dataclass(frozen=True)
class OperatingPoint:
    island_class: str
    vdd: float
    fmax_mhz: float | None
    area_um2: float | None
    cap_factor: float


@dataclass(frozen=True)
class VoltagePlan:
    """Chosen per-island operating points plus the retargeted design copy."""

    choices: Mapping[str, OperatingPoint]
    f_req_mhz: Mapping[str, float | None]
    baseline_v: float
    baseline_points: Mapping[str, OperatingPoint | None]
    retargeted: Design

    def point(self, island: str) -> OperatingPoint:
        try:
            return self.choices[island]
        except KeyError:
            raise ValueError(f"plan does not cover island '{island}'") from None


@dataclass(frozen=True)
class SavingsRow:
    island: str
    vdd_from: float
    vdd_to: float
    theoretical_pct: float
    actual_pct: float
    area_delta_pct: float
    levelshifters_added: int
    iso_added: int
    within_theoretical: bool


@dataclass(frozen=True)
class SavingsReport:
    rows: tuple[SavingsRow, ...]
    baseline_dynamic_w: float
    planned_dynamic_w: float

    @property
    def total_actual_pct(self) -> float:
        if self.baseline_dynamic_w <= 0:
            return 0.0
        return 100.0 * (1.0 - self.planned_dynamic_w / self.baseline_dynamic_w)


def select_min_voltage(table: CharTable, island_class: str, f_req_mhz: float) -> OperatingPoint:
    """Lowest-voltage operating point that still meets f_req; ties fall to
    the smaller area.  Independent of table row order."""
    rows = table.rows_for(island_class)
    if not rows:
        raise ValueError(f"no characterization rows for class '{island_class}'")
    feasible = [r for r in rows if r.fmax_mhz >= f_req_mhz]
    if not feasible:
        raise InfeasibleError(island_class, f_req_mhz, max(r.fmax_mhz for r in rows))
    best = min(feasible, key=lambda r: (r.vdd, r.area_um2))
    return OperatingPoint(best.island_class, best.vdd, best.fmax_mhz, best.area_um2, best.cap_factor)


def _pinned_point(table: CharTable, island_class: str, vdd: float) -> OperatingPoint:
    row = table.row(island_class, vdd)
    if row is not None:
        return OperatingPoint(row.island_class, row.vdd, row.fmax_mhz, row.area_um2, row.cap_factor)
    return OperatingPoint(island_class, vdd, None, None, 1.0)


def assign_voltages(
    design: Design,
    table: CharTable,
    f_req_mhz: Mapping[str, float],
    pinned: Mapping[str, float],
    baseline_v: float = 1.2,
) -> VoltagePlan:
    """Pick a supply for every island: pinned islands keep their voltage,
    the rest get the minimum feasible table entry for their class (the
    island name doubles as the class key).

    The returned plan carries a copy of the design retargeted to the chosen
    voltages so crossing analysis can price the level-shifter bill of
    materials.
    """
    for name in list(f_req_mhz) + list(pinned):
        if name not in design.islands_by_name():
            raise ValueError(f"unknown island '{name}'")

    choices: dict[str, OperatingPoint] = {}
    freqs: dict[str, float | None] = {}
    baseline_points: dict[str, OperatingPoint | None] = {}
    for island in design.islands:
        if island.name in pinned:
            choices[island.name] = _pinned_point(table, island.name, pinned[island.name])
            freqs[island.name] = f_req_mhz.get(island.name)
        elif island.name in f_req_mhz:
            choices[island.name] = select_min_voltage(table, island.name, f_req_mhz[island.name])
            freqs[island.name] = f_req_mhz[island.name]
        else:
            raise ValueError(
                f"island '{island.name}' has neither a frequency requirement nor a pinned voltage"
            )
        row = table.row(island.name, baseline_v)
        baseline_points[island.name] = (
            OperatingPoint(row.island_class, row.vdd, row.fmax_mhz, row.area_um2, row.cap_factor)
            if row is not None
            else None
        )

    retargeted = replace(
        design,
        islands=tuple(replace(i, vdd=choices[i.name].vdd) for i in design.islands),
    )
    return VoltagePlan(choices, freqs, baseline_v, baseline_points, retargeted)


def power_savings_summary(
    baseline_v: float,
    plan: VoltagePlan,
    design: Design,
    activity: ActivityProfile,
    params: DynamicPowerParams,
) -> SavingsReport:
    """Per-island and SoC-level dynamic savings versus a single-voltage baseline.

    actual = 1 - cap_factor * (vdd / baseline)^2, which trails the pure-V^2
    theoretical bound whenever the slower library costs extra capacitance
    (cap_factor > 1).  Area deltas come from the raw characterized areas.
    """
    issues = analyze_crossings(plan.retargeted)
    shifters = Counter(i.receiver_island for i in issues if i.kind is IssueKind.NEEDS_LEVEL_SHIFTER)
    isolations = Counter(i.receiver_island for i in issues if i.kind is IssueKind.NEEDS_ISOLATION)

    baseline_design = replace(
        design,
        islands=tuple(replace(i, vdd=baseline_v) for i in design.islands),
    )
    base = dynamic_power(baseline_design, activity, params)
    base_by_island = {row.island: row.dynamic_w for row in base.islands}

    rows: list[SavingsRow] = []
    total_base = 0.0
    total_planned = 0.0
    for island in design.islands:
        point = plan.point(island.name)
        ratio_sq = (point.vdd / baseline_v) ** 2
        theoretical = (1.0 - ratio_sq) * 100.0
        actual = (1.0 - point.cap_factor * ratio_sq) * 100.0
        if point.area_um2 is None:
            area_delta = 0.0
        else:
            baseline_point = plan.baseline_points.get(island.name)
            if baseline_point is None or baseline_point.area_um2 is None:
                raise ValueError(
                    f"missing baseline row ({island.name}, {baseline_v:g} V) in characterization table"
                )
            area_delta = (point.area_um2 / baseline_point.area_um2 - 1.0) * 100.0
        rows.append(SavingsRow(
            island=island.name,
            vdd_from=baseline_v,
            vdd_to=point.vdd,
            theoretical_pct=theoretical,
            actual_pct=actual,
            area_delta_pct=area_delta,
            levelshifters_added=shifters.get(island.name, 0),
            iso_added=isolations.get(island.name, 0),
            within_theoretical=actual <= theoretical + 1e-9,
        ))
        base_w = base_by_island.get(island.name, 0.0)
        total_base += base_w
        total_planned += base_w * point.cap_factor * ratio_sq

    return SavingsReport(tuple(rows), total_base, total_planned)
