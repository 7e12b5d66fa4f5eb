"""Turning model outputs into verified, ranked control actions.

A recommendation is built from the injection models' positive predictions
(or, with no model loaded, from the greedy analytic search), each action
optionally verified by an actual power flow before ranking. Verification is
the security gate: closed-loop operation only ever applies actions whose
post-state has been machine-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .corrective import greedy_reactive_injections
from .learner import ModelBundle
from .network import NetworkCase, Perturbation, apply_perturbation
from .powerflow import (
    AdmittanceMatrix,
    PowerFlowOptions,
    PowerFlowSolution,
    build_ybus,
    solve_power_flow,
)
from .stability import (
    FMatrix,
    SecurityClass,
    StabilityError,
    Thresholds,
    compute_f_matrix,
    compute_l_index,
    partition_buses,
)
from .telemetry import MeasurementVector, build_schema, extract_features


class ActionKind(str, Enum):
    PREVENTIVE = "preventive"  # issued in alarm, keeps the system out of danger
    CORRECTIVE = "corrective"  # issued in emergency


class RecommendationBasis(str, Enum):
    MODEL_ONLY = "model_only"
    MODEL_PLUS_VERIFICATION = "model_plus_verification"
    ANALYTIC_FALLBACK = "analytic_fallback"


@dataclass(frozen=True)
class ControlAction:
    """One reactive injection at one bus, plus its predicted/verified effect."""

    id: str
    bus: int
    dq: float  # p.u., non-negative
    kind: ActionKind
    predicted_l_max_after: float
    verified_l_max_after: float | None = None
    auto_eligible: bool = False
    unverifiable: bool = False  # verification power flow diverged

    def effective_l_max(self) -> float:
        return (
            self.verified_l_max_after
            if self.verified_l_max_after is not None
            else self.predicted_l_max_after
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "bus": self.bus,
            "dq": self.dq,
            "kind": self.kind.value,
            "predicted_l_max_after": self.predicted_l_max_after,
            "verified_l_max_after": self.verified_l_max_after,
            "auto_eligible": self.auto_eligible,
            "unverifiable": self.unverifiable,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ControlAction":
        return cls(
            id=d["id"],
            bus=int(d["bus"]),
            dq=float(d["dq"]),
            kind=ActionKind(d["kind"]),
            predicted_l_max_after=float(d["predicted_l_max_after"]),
            verified_l_max_after=(
                None
                if d.get("verified_l_max_after") is None
                else float(d["verified_l_max_after"])
            ),
            auto_eligible=bool(d.get("auto_eligible", False)),
            unverifiable=bool(d.get("unverifiable", False)),
        )


@dataclass(frozen=True)
class Recommendation:
    id: str
    actions: tuple[ControlAction, ...]  # ranked, best first
    basis: RecommendationBasis
    state_class: SecurityClass
    issued_tick: int
    incomplete: bool = False  # analytic search ran out of budget

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "actions": [a.to_dict() for a in self.actions],
            "basis": self.basis.value,
            "state_class": self.state_class.value,
            "issued_tick": self.issued_tick,
            "incomplete": self.incomplete,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Recommendation":
        return cls(
            id=d["id"],
            actions=tuple(ControlAction.from_dict(a) for a in d["actions"]),
            basis=RecommendationBasis(d["basis"]),
            state_class=SecurityClass(d["state_class"]),
            issued_tick=int(d["issued_tick"]),
            incomplete=bool(d.get("incomplete", False)),
        )


@dataclass(frozen=True)
class ControlConfig:
    thresholds: Thresholds = Thresholds()
    verify: bool = True
    auto_cap: float = 0.5  # largest dq the combined mode may apply unattended
    noise_floor: float = 0.01  # model predictions below this are treated as zero
    step_dq: float = 0.1
    budget: float = 5.0
    candidates: tuple[int, ...] = ()  # fallback search set; model buses otherwise
    pf_options: PowerFlowOptions = field(default_factory=PowerFlowOptions)


def _rank(actions: list[ControlAction]) -> tuple[ControlAction, ...]:
    """Total order: effective post-action index ascending, then smaller dq,
    then lower bus id. Unverifiable actions sink to the bottom."""
    return tuple(
        sorted(
            actions,
            key=lambda a: (a.unverifiable, a.effective_l_max(), a.dq, a.bus),
        )
    )


def verify_action(
    case: NetworkCase,
    action: ControlAction,
    f: FMatrix | None = None,
    thresholds: Thresholds = Thresholds(),
    options: PowerFlowOptions | None = None,
    warm_start: np.ndarray | None = None,
) -> ControlAction:
    """Apply the injection, re-solve, recompute the index; pure.

    Divergence leaves ``verified_l_max_after`` unset and flags the action
    unverifiable instead of raising.
    """
    if case.index_of.get(action.bus) is None:
        raise ValueError(f"action bus {action.bus} not in case")
    perturbed = apply_perturbation(
        case, Perturbation(injections={action.bus: action.dq})
    )
    options = options or PowerFlowOptions()
    if warm_start is not None:
        options = replace(
            options, flat_start=False, v_start=tuple(warm_start)
        )
    ybus = build_ybus(perturbed)
    sol = solve_power_flow(perturbed, options, ybus)
    if not sol.converged:
        return replace(action, verified_l_max_after=None, unverifiable=True)
    if f is None:
        f = compute_f_matrix(ybus, partition_buses(perturbed))
    report = compute_l_index(sol, f, thresholds)
    return replace(action, verified_l_max_after=report.l_max, unverifiable=False)


def greedy_corrective_search(
    case: NetworkCase,
    solution: PowerFlowSolution,
    candidates: tuple[int, ...],
    alarm: float,
    step_dq: float = 0.1,
    budget: float = 5.0,
    options: PowerFlowOptions | None = None,
    id_prefix: str = "g",
    kind: ActionKind = ActionKind.CORRECTIVE,
) -> tuple[tuple[ControlAction, ...], bool]:
    """The labeling oracle's search, returned as an ordered action sequence.

    Each step's ``verified_l_max_after`` is the power-flow-checked index
    after that step given all previous ones, so applying the sequence in
    order walks a non-increasing index path. Returns (sequence, incomplete).
    """
    result = greedy_reactive_injections(
        case, solution, candidates, alarm, step_dq, budget, options
    )
    actions = tuple(
        ControlAction(
            id=f"{id_prefix}-{i}",
            bus=step.bus,
            dq=step.dq,
            kind=kind,
            predicted_l_max_after=step.l_max_after,
            verified_l_max_after=step.l_max_after,
        )
        for i, step in enumerate(result.steps)
    )
    return actions, not result.secured


def recommend_actions(
    case: NetworkCase,
    solution: PowerFlowSolution,
    bundle: ModelBundle | None,
    config: ControlConfig = ControlConfig(),
    rec_id: str = "r0",
    tick: int = 0,
) -> Recommendation:
    """Build the ranked recommendation for a solved state.

    Normal states yield an empty list. Insecure states query the injection
    models (one aggregate action per bus with a positive prediction above
    the noise floor); without a bundle the greedy analytic search supplies
    the actions instead. Verification fills ``verified_l_max_after`` per
    action; a failed verification marks the action rather than aborting.
    """
    if not solution.converged:
        raise StabilityError("no steady state: power flow did not converge")
    ybus = build_ybus(case)
    f = compute_f_matrix(ybus, partition_buses(case))
    report = compute_l_index(solution, f, config.thresholds)
    kind = (
        ActionKind.CORRECTIVE
        if report.state_class is SecurityClass.EMERGENCY
        else ActionKind.PREVENTIVE
    )
    if report.state_class is SecurityClass.NORMAL:
        return Recommendation(
            id=rec_id,
            actions=(),
            basis=RecommendationBasis.MODEL_ONLY,
            state_class=report.state_class,
            issued_tick=tick,
        )

    incomplete = False
    totals: dict[int, float] = {}
    basis = RecommendationBasis.MODEL_ONLY
    predicted: dict[int, float] = {}
    if bundle is not None:
        m = extract_features(case, solution, bundle.schema)
        predictions = bundle.predict_injections(m)
        predicted_l = bundle.predict_indicator(m)
        totals = {
            bus: dq for bus, dq in predictions.items() if dq > config.noise_floor
        }
        basis = (
            RecommendationBasis.MODEL_PLUS_VERIFICATION
            if config.verify
            else RecommendationBasis.MODEL_ONLY
        )
        predicted = {bus: predicted_l for bus in totals}
    if bundle is None or (
        not totals and report.state_class is SecurityClass.EMERGENCY
    ):
        # No model, or the model offers nothing in an emergency: search.
        candidates = config.candidates or tuple(f.partition.load_buses)
        sequence, incomplete = greedy_corrective_search(
            case,
            solution,
            candidates,
            config.thresholds.alarm,
            config.step_dq,
            config.budget,
            config.pf_options,
            id_prefix=f"{rec_id}-a",
            kind=kind,
        )
        totals = {}
        for a in sequence:
            totals[a.bus] = totals.get(a.bus, 0.0) + a.dq
        basis = RecommendationBasis.ANALYTIC_FALLBACK
        predicted = {bus: report.l_max for bus in totals}

    actions: list[ControlAction] = []
    for i, (bus, dq) in enumerate(sorted(totals.items())):
        action = ControlAction(
            id=f"{rec_id}-a{i}",
            bus=bus,
            dq=round(float(dq), 9),
            kind=kind,
            predicted_l_max_after=predicted[bus],
        )
        if config.verify:
            action = verify_action(
                case,
                action,
                f=f,
                thresholds=config.thresholds,
                options=config.pf_options,
                warm_start=solution.v,
            )
        action = replace(action, auto_eligible=action.dq <= config.auto_cap)
        actions.append(action)

    return Recommendation(
        id=rec_id,
        actions=_rank(actions),
        basis=basis,
        state_class=report.state_class,
        issued_tick=tick,
        incomplete=incomplete,
    )
