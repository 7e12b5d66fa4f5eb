"""Voltage-security analytics: local stability indices, state classification,
and a loadability scan used as a collapse-proximity oracle.

The per-load-bus index follows the classic hybrid-matrix construction.
Split the admittance matrix by the generator/load partition:

    [I_G]   [Y_GG  Y_GL] [V_G]
    [I_L] = [Y_LG  Y_LL] [V_L]

and let F = -inv(Y_LL) @ Y_LG, the matrix mapping generator voltages to the
no-load (current-free) load voltages. Each load bus j then scores

    L_j = | 1 - (sum_i F_ji V_i) / V_j |

which is 0 at no load and approaches 1 as the bus nears voltage collapse.
The system indicator is L_max = max_j L_j; L_sum = sum_j L_j is reported as
an aggregate stress measure. Derivation sketch: at bus j, the transformed
injection divided by Y_jj+ equals V_j (V_j - V_oj) where V_oj is the no-load
voltage; L_j measures |V_j - V_oj| / |V_j|, the relative distance from the
unloaded operating point, which reaches unity exactly when the maximum
deliverable power is hit (see the two-bus case in the tests).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .network import BusKind, NetworkCase, Perturbation, apply_perturbation
from .powerflow import (
    AdmittanceMatrix,
    PowerFlowOptions,
    PowerFlowSolution,
    build_ybus,
    solve_power_flow,
)


class StabilityError(ValueError):
    """Analytics preconditions violated (no load buses, no steady state...)."""


class SecurityClass(str, Enum):
    NORMAL = "normal"
    ALARM = "alarm"
    EMERGENCY = "emergency"


@dataclass(frozen=True)
class Thresholds:
    """Classification thresholds on L_max; must be strictly increasing."""

    alarm: float = 0.5
    emergency: float = 0.8

    def __post_init__(self) -> None:
        if not 0 < self.alarm < self.emergency:
            raise StabilityError(
                "thresholds must satisfy 0 < alarm < emergency"
            )


@dataclass(frozen=True)
class BusPartition:
    """Generator/load split of the bus set, in case bus order.

    Generator buses are those carrying an in-service generator (the slack
    included); every other bus is a load bus, whether or not it draws load.
    Positions index into the case bus order for matrix work.
    """

    generator_buses: tuple[int, ...]
    load_buses: tuple[int, ...]
    generator_positions: tuple[int, ...]
    load_positions: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FMatrix:
    """F = -inv(Y_LL) @ Y_LG for a fixed topology and partition."""

    entries: np.ndarray  # complex, shape (n_load, n_gen)
    partition: BusPartition


@dataclass(frozen=True)
class LIndexReport:
    l_local: dict[int, float]  # load bus id -> L_j
    l_max: float
    l_sum: float
    state_class: SecurityClass
    thresholds: Thresholds

    def to_dict(self) -> dict:
        return {
            "l_local": {str(k): v for k, v in sorted(self.l_local.items())},
            "l_max": self.l_max,
            "l_sum": self.l_sum,
            "state_class": self.state_class.value,
            "thresholds": {
                "alarm": self.thresholds.alarm,
                "emergency": self.thresholds.emergency,
            },
        }


def partition_buses(case: NetworkCase) -> BusPartition:
    """Deterministic generator/load partition by in-service generator presence."""
    gen_ids, load_ids, gen_pos, load_pos = [], [], [], []
    for i, bus in enumerate(case.buses):
        if bus.kind is BusKind.SLACK or bus.id in case.generators_at:
            gen_ids.append(bus.id)
            gen_pos.append(i)
        else:
            load_ids.append(bus.id)
            load_pos.append(i)
    if not load_ids:
        raise StabilityError("no load buses: index undefined on this case")
    return BusPartition(
        tuple(gen_ids), tuple(load_ids), tuple(gen_pos), tuple(load_pos)
    )


def partition_regulating(
    case: NetworkCase, solution: PowerFlowSolution
) -> BusPartition:
    """Partition counting only buses that still regulate voltage as sources.

    A generator bus pinned at a VAR limit (reported by the solver when limit
    enforcement is on) no longer holds its voltage and is moved to the load
    set; keeping it among the sources would mask the very sag the index is
    meant to expose. Falls back to the static partition when nothing is
    limited.
    """
    limited = set(solution.q_limited)
    gen_ids, load_ids, gen_pos, load_pos = [], [], [], []
    for i, bus in enumerate(case.buses):
        is_source = (
            bus.kind is BusKind.SLACK
            or (bus.id in case.generators_at and bus.id not in limited)
        )
        if is_source:
            gen_ids.append(bus.id)
            gen_pos.append(i)
        else:
            load_ids.append(bus.id)
            load_pos.append(i)
    if not load_ids:
        raise StabilityError("no load buses: index undefined on this case")
    return BusPartition(
        tuple(gen_ids), tuple(load_ids), tuple(gen_pos), tuple(load_pos)
    )


def compute_f_matrix(ybus: AdmittanceMatrix, partition: BusPartition) -> FMatrix:
    """Solve Y_LL F = -Y_LG column-wise; refuses a degenerate load subnetwork."""
    lp = np.array(partition.load_positions, dtype=int)
    gp = np.array(partition.generator_positions, dtype=int)
    y_ll = ybus.matrix[np.ix_(lp, lp)]
    y_lg = ybus.matrix[np.ix_(lp, gp)]
    try:
        f = np.linalg.solve(y_ll, -y_lg)
    except np.linalg.LinAlgError as exc:
        raise StabilityError("degenerate load subnetwork: singular Y_LL") from exc
    residual = np.abs(y_ll @ f + y_lg).max() if f.size else 0.0
    if not np.isfinite(residual) or residual > 1e-9:
        raise StabilityError(
            f"degenerate load subnetwork: residual {residual:.2e}"
        )
    return FMatrix(entries=f, partition=partition)


def compute_l_index(
    solution: PowerFlowSolution,
    f: FMatrix,
    thresholds: Thresholds = Thresholds(),
) -> LIndexReport:
    """Local indices, aggregates, and security class for a solved state."""
    if not solution.converged:
        raise StabilityError("no steady state: power flow did not converge")
    part = f.partition
    v = solution.v
    v_load = v[np.array(part.load_positions, dtype=int)]
    v_gen = v[np.array(part.generator_positions, dtype=int)]
    l_values = np.abs(1.0 - (f.entries @ v_gen) / v_load)
    l_max = float(l_values.max())
    l_sum = float(l_values.sum())
    return LIndexReport(
        l_local={bid: float(lv) for bid, lv in zip(part.load_buses, l_values)},
        l_max=l_max,
        l_sum=l_sum,
        state_class=classify_state(l_max, thresholds),
        thresholds=thresholds,
    )


def classify_state(l_max: float, thresholds: Thresholds) -> SecurityClass:
    """Normal below alarm, Emergency at or above emergency, Alarm between.

    Boundaries are closed on the left: l_max equal to a threshold lands in
    the more severe class.
    """
    if l_max < 0:
        raise StabilityError("l_max must be non-negative")
    if l_max < thresholds.alarm:
        return SecurityClass.NORMAL
    if l_max < thresholds.emergency:
        return SecurityClass.ALARM
    return SecurityClass.EMERGENCY


def assess(
    case: NetworkCase,
    solution: PowerFlowSolution,
    thresholds: Thresholds = Thresholds(),
    ybus: AdmittanceMatrix | None = None,
    f: FMatrix | None = None,
) -> LIndexReport:
    """One-call analytics: partition, F matrix, and index report."""
    if f is None:
        f = compute_f_matrix(ybus or build_ybus(case), partition_buses(case))
    return compute_l_index(solution, f, thresholds)


@dataclass(frozen=True)
class LoadabilityResult:
    lambda_max: float
    direction: dict[int, float]
    trace: tuple[tuple[float, float], ...]  # (lambda, l_max) at converged points


def scaled_case(
    case: NetworkCase,
    lam: float,
    direction: dict[int, float],
    scale_generation: bool = True,
    reactive_only: bool = False,
) -> NetworkCase:
    """Case with loads moved along ``direction``: load_i *= 1 + (lam-1)*d_i.

    With ``scale_generation`` every non-slack generator's active output is
    scaled by ``lam`` so the added demand is met systemwide rather than
    dumped on the slack. ``reactive_only`` grows only reactive demand (the
    voltage-collapse axis); active load and generation stay at base.
    """
    if reactive_only:
        buses = tuple(
            replace(b, q_load=b.q_load * (1.0 + (lam - 1.0) * direction.get(b.id, 0.0)))
            if direction.get(b.id, 0.0) != 0.0
            else b
            for b in case.buses
        )
        return replace(case, buses=buses)
    scale = {
        bid: 1.0 + (lam - 1.0) * d for bid, d in direction.items() if d != 0.0
    }
    stepped = apply_perturbation(case, Perturbation(load_scale=scale))
    if not scale_generation or lam == 1.0:
        return stepped
    slack_id = case.slack_bus.id
    gens = tuple(
        replace(g, p_gen=g.p_gen * lam) if g.bus != slack_id else g
        for g in stepped.generators
    )
    return replace(stepped, generators=gens)


def find_loadability_limit(
    case: NetworkCase,
    direction: dict[int, float] | None = None,
    lambda_tol: float = 1e-3,
    scale_generation: bool = True,
    reactive_only: bool = False,
    limit_aware: bool = True,
    options: PowerFlowOptions | None = None,
    thresholds: Thresholds = Thresholds(),
    initial_step: float = 0.5,
    lambda_cap: float = 64.0,
) -> LoadabilityResult:
    """Bisect for the largest load scale with a solvable power flow.

    Steps outward from lambda=1 (warm-starting each solve from the previous
    point), brackets the first failure, then bisects to ``lambda_tol``. The
    trace records (lambda, L_max) at every converged point visited, in
    lambda order.

    ``reactive_only`` stresses the reactive axis (see ``scaled_case``).
    When VAR limits are enforced in ``options`` and ``limit_aware`` is set,
    trace indices are computed on the regulating partition, recomputed per
    point as units saturate.
    """
    options = options or PowerFlowOptions()
    if direction is None:
        direction = {b.id: 1.0 for b in case.buses}
    if all(d == 0.0 for d in direction.values()):
        raise StabilityError("flat direction: loadability unbounded")

    ybus = build_ybus(case)
    static_f = compute_f_matrix(ybus, partition_buses(case))
    dynamic = limit_aware and options.enforce_q_limits

    points: dict[float, float] = {}

    def try_lambda(lam: float, v_start: np.ndarray | None) -> PowerFlowSolution:
        stepped = scaled_case(case, lam, direction, scale_generation, reactive_only)
        opts = options
        if v_start is not None:
            opts = PowerFlowOptions(
                tolerance=options.tolerance,
                max_iter=options.max_iter,
                flat_start=False,
                enforce_q_limits=options.enforce_q_limits,
                v_start=tuple(v_start),
            )
        sol = solve_power_flow(stepped, opts)
        if sol.converged:
            f = static_f
            if dynamic and sol.q_limited:
                f = compute_f_matrix(ybus, partition_regulating(case, sol))
            points[lam] = compute_l_index(sol, f, thresholds).l_max
        return sol

    base = try_lambda(1.0, None)
    if not base.converged:
        raise StabilityError("base case does not converge at lambda = 1")

    lo, v_lo = 1.0, base.v
    step = initial_step
    hi = None
    while hi is None:
        lam = lo + step
        sol = try_lambda(lam, v_lo)
        if sol.converged:
            lo, v_lo = lam, sol.v
            if lam >= lambda_cap:
                raise StabilityError(
                    f"no collapse found below lambda = {lambda_cap}"
                )
        else:
            hi = lam
    while hi - lo > lambda_tol:
        mid = 0.5 * (lo + hi)
        sol = try_lambda(mid, v_lo)
        if sol.converged:
            lo, v_lo = mid, sol.v
        else:
            hi = mid
    trace = tuple(sorted(points.items()))
    return LoadabilityResult(lambda_max=lo, direction=dict(direction), trace=trace)
