"""Greedy reactive-injection search: the power-flow-verified oracle that both
labels training data and serves as the analytic fallback controller.

Starting from a solved insecure state, the search repeatedly injects a fixed
reactive step at whichever candidate bus yields the largest verified drop in
L_max, until the state is secure (L_max below the alarm threshold), the
injection budget is spent, or no candidate helps anymore.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import NetworkCase, Perturbation, apply_perturbation
from .powerflow import (
    PowerFlowOptions,
    PowerFlowSolution,
    build_ybus,
    solve_power_flow,
)
from .stability import (
    FMatrix,
    StabilityError,
    Thresholds,
    compute_f_matrix,
    compute_l_index,
    partition_buses,
)


@dataclass(frozen=True)
class GreedyStep:
    bus: int
    dq: float
    l_max_after: float
    l_sum_after: float


@dataclass(frozen=True)
class GreedyResult:
    steps: tuple[GreedyStep, ...]
    injections: dict[int, float]  # total dq per bus, zeros omitted
    l_max_initial: float
    l_sum_initial: float
    l_max_final: float
    l_sum_final: float
    secured: bool  # reached l_max < alarm
    budget_exhausted: bool

    @property
    def total_injection(self) -> float:
        return sum(self.injections.values())


def greedy_reactive_injections(
    case: NetworkCase,
    solution: PowerFlowSolution,
    candidates: tuple[int, ...],
    alarm: float,
    step_dq: float = 0.1,
    budget: float = 5.0,
    options: PowerFlowOptions | None = None,
    f: FMatrix | None = None,
) -> GreedyResult:
    """Greedy corrective search; pure with respect to its inputs.

    Candidate buses must be load buses of the case (no in-service
    generator). Each trial re-solves the power flow warm-started from the
    current point; trials that do not converge are skipped that round.
    """
    if not solution.converged:
        raise StabilityError("no steady state: power flow did not converge")
    if not candidates:
        raise ValueError("no candidate buses given")
    candidates = tuple(sorted(set(candidates)))  # ties break to lower bus id
    options = options or PowerFlowOptions()
    ybus = build_ybus(case)
    if f is None:
        f = compute_f_matrix(ybus, partition_buses(case))
    load_set = set(f.partition.load_buses)
    for c in candidates:
        if c not in load_set:
            raise ValueError(f"candidate bus {c} not in load set")

    thresholds = Thresholds(alarm=alarm, emergency=max(2 * alarm, alarm + 0.1))
    report = compute_l_index(solution, f, thresholds)
    l_max = report.l_max
    l_sum = report.l_sum
    l_max0, l_sum0 = l_max, l_sum

    injections: dict[int, float] = {}
    steps: list[GreedyStep] = []
    current_v = solution.v
    total = 0.0
    budget_exhausted = False

    def solve_with(injected: dict[int, float], v_start: np.ndarray):
        perturbed = apply_perturbation(case, Perturbation(injections=injected))
        opts = PowerFlowOptions(
            tolerance=options.tolerance,
            max_iter=options.max_iter,
            flat_start=False,
            enforce_q_limits=options.enforce_q_limits,
            v_start=tuple(v_start),
        )
        return solve_power_flow(perturbed, opts)

    while l_max >= alarm:
        if total + step_dq > budget + 1e-12:
            budget_exhausted = True
            break
        best = None  # (l_max, l_sum, bus, solution)
        for c in candidates:
            trial = dict(injections)
            trial[c] = trial.get(c, 0.0) + step_dq
            sol = solve_with(trial, current_v)
            if not sol.converged:
                continue
            rep = compute_l_index(sol, f, thresholds)
            if rep.l_max < l_max - 1e-12 and (
                best is None or rep.l_max < best[0] - 1e-12
            ):
                best = (rep.l_max, rep.l_sum, c, sol)
        if best is None:
            break  # no candidate improves the state
        l_max, l_sum, bus, sol = best
        injections[bus] = injections.get(bus, 0.0) + step_dq
        total += step_dq
        current_v = sol.v
        steps.append(
            GreedyStep(bus=bus, dq=step_dq, l_max_after=l_max, l_sum_after=l_sum)
        )

    return GreedyResult(
        steps=tuple(steps),
        injections=injections,
        l_max_initial=l_max0,
        l_sum_initial=l_sum0,
        l_max_final=l_max,
        l_sum_final=l_sum,
        secured=l_max < alarm,
        budget_exhausted=budget_exhausted,
    )
