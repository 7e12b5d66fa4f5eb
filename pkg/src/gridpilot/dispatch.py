"""The dispatcher state machine: four control modes over a live grid, an
event-sourced log, an adversary, and scored disturbance episodes.

Every transition is expressed as events folded through one reducer;
``dispatch_step`` builds its events by folding as it decides, so replaying
a persisted log through the same reducer reproduces the final state
exactly. Solutions are recomputed during replay (the solver is
deterministic), keeping events small.

Mode semantics per telemetry tick:

    monitor      assess and classify only, never recommend.
    open_loop    assess; queue a recommendation; apply only on operator
                 approval.
    closed_loop  assess; apply the best power-flow-verified action
                 immediately; nothing is ever queued.
    combined     auto-apply verified actions within the magnitude cap,
                 queue the rest for the operator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from .control import (
    ControlConfig,
    Recommendation,
    RecommendationBasis,
    recommend_actions,
)
from .learner import ModelBundle
from .network import (
    NetworkCase,
    Perturbation,
    PerturbationError,
    apply_perturbation,
)
from .powerflow import PowerFlowOptions, PowerFlowSolution, solve_power_flow
from .stability import (
    SecurityClass,
    Thresholds,
    assess,
)
from .telemetry import CorruptionConfig


class Mode(str, Enum):
    MONITOR = "monitor"
    OPEN_LOOP = "open_loop"
    CLOSED_LOOP = "closed_loop"
    COMBINED = "combined"


class EventKind(str, Enum):
    TELEMETRY = "telemetry"
    RECOMMENDATION_ISSUED = "recommendation_issued"
    OPERATOR_APPLIED = "operator_applied"
    OPERATOR_REJECTED = "operator_rejected"
    AUTO_APPLIED = "auto_applied"
    MODE_CHANGED = "mode_changed"
    DISTURBANCE_INJECTED = "disturbance_injected"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class DispatchEvent:
    tick: int
    kind: EventKind
    payload: dict

    def to_dict(self) -> dict:
        return {"tick": self.tick, "kind": self.kind.value, "payload": self.payload}

    @classmethod
    def from_dict(cls, d: dict) -> "DispatchEvent":
        return cls(tick=int(d["tick"]), kind=EventKind(d["kind"]), payload=d["payload"])


# ---------------------------------------------------------------------------
# Inputs


@dataclass(frozen=True)
class TelemetryTick:
    pass


@dataclass(frozen=True)
class OperatorDecision:
    action_id: str
    approve: bool


@dataclass(frozen=True)
class ModeChange:
    mode: Mode


@dataclass(frozen=True)
class Disturbance:
    perturbation: Perturbation | None = None
    telemetry_attack: CorruptionConfig | None = None
    label: str = "drill"


DispatchInput = TelemetryTick | OperatorDecision | ModeChange | Disturbance


class DispatchError(ValueError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    control: ControlConfig = ControlConfig()
    pf_options: PowerFlowOptions = field(default_factory=PowerFlowOptions)

    @property
    def thresholds(self) -> Thresholds:
        return self.control.thresholds


@dataclass(frozen=True)
class Engine:
    """Static context for transitions: configuration plus the loaded model."""

    config: EngineConfig = EngineConfig()
    bundle: ModelBundle | None = None


@dataclass(frozen=True, eq=False)
class DispatchState:
    mode: Mode
    case: NetworkCase
    solution: PowerFlowSolution | None
    report: object | None  # LIndexReport when last solve converged
    pending: tuple[Recommendation, ...]
    event_log: tuple[DispatchEvent, ...]
    tick: int
    pending_attack: CorruptionConfig | None = None

    def state_class(self) -> SecurityClass | None:
        return None if self.report is None else self.report.state_class

    def find_pending_action(self, action_id: str):
        for rec in self.pending:
            for action in rec.actions:
                if action.id == action_id:
                    return rec, action
        return None


def initial_state(case: NetworkCase, mode: Mode, engine: Engine) -> DispatchState:
    sol = solve_power_flow(case, engine.config.pf_options)
    report = (
        assess(case, sol, engine.config.thresholds) if sol.converged else None
    )
    return DispatchState(
        mode=mode,
        case=case,
        solution=sol,
        report=report,
        pending=(),
        event_log=(),
        tick=0,
    )


# ---------------------------------------------------------------------------
# Reducer


def _solve_current(
    state: DispatchState, engine: Engine, case: NetworkCase
) -> PowerFlowSolution:
    opts = engine.config.pf_options
    if state.solution is not None and state.solution.v.size == case.n:
        opts = replace(opts, flat_start=False, v_start=tuple(state.solution.v))
    sol = solve_power_flow(case, opts)
    if not sol.converged and not opts.flat_start:
        sol = solve_power_flow(case, engine.config.pf_options)  # retry cold
    return sol


def _apply_injection(
    state: DispatchState, engine: Engine, bus: int, dq: float
) -> tuple[NetworkCase, PowerFlowSolution, object | None]:
    case = apply_perturbation(state.case, Perturbation(injections={bus: dq}))
    sol = _solve_current(state, engine, case)
    report = assess(case, sol, engine.config.thresholds) if sol.converged else None
    return case, sol, report


def apply_event(
    state: DispatchState, event: DispatchEvent, engine: Engine
) -> DispatchState:
    """Pure transition; folding the event log through this reproduces state."""
    kind = event.kind
    p = event.payload
    log = state.event_log + (event,)

    if kind is EventKind.TELEMETRY:
        sol = _solve_current(state, engine, state.case)
        report = (
            assess(state.case, sol, engine.config.thresholds)
            if sol.converged
            else None
        )
        pending = state.pending
        if report is not None and report.state_class is SecurityClass.NORMAL:
            pending = ()  # back to normal: queued actions are stale
        return replace(
            state,
            tick=event.tick,
            solution=sol,
            report=report,
            pending=pending,
            pending_attack=None,  # consumed by this assessment
            event_log=log,
        )

    if kind is EventKind.UNRESOLVED:
        return replace(state, event_log=log)

    if kind is EventKind.RECOMMENDATION_ISSUED:
        rec = Recommendation.from_dict(p["recommendation"])
        pending = state.pending
        if state.mode in (Mode.OPEN_LOOP, Mode.COMBINED) and rec.actions:
            pending = (rec,)  # fresh assessment supersedes older queues
        return replace(state, pending=pending, event_log=log)

    if kind in (EventKind.AUTO_APPLIED, EventKind.OPERATOR_APPLIED):
        case, sol, report = _apply_injection(
            state, engine, int(p["bus"]), float(p["dq"])
        )
        pending = _without_action(state.pending, p.get("action_id"))
        return replace(
            state,
            case=case,
            solution=sol,
            report=report,
            pending=pending,
            event_log=log,
        )

    if kind is EventKind.OPERATOR_REJECTED:
        pending = _without_action(state.pending, p.get("action_id"))
        return replace(state, pending=pending, event_log=log)

    if kind is EventKind.MODE_CHANGED:
        mode = Mode(p["to"])
        pending = () if mode is Mode.CLOSED_LOOP else state.pending
        return replace(state, mode=mode, pending=pending, event_log=log)

    if kind is EventKind.DISTURBANCE_INJECTED:
        case = state.case
        if p.get("perturbation") is not None:
            case = apply_perturbation(
                state.case, Perturbation.from_dict(p["perturbation"])
            )
        attack = p.get("telemetry_attack")
        return replace(
            state,
            case=case,
            pending_attack=None
            if attack is None
            else CorruptionConfig.from_dict(attack),
            event_log=log,
        )

    raise DispatchError(f"unknown event kind {kind}")


def _without_action(
    pending: tuple[Recommendation, ...], action_id: str | None
) -> tuple[Recommendation, ...]:
    if action_id is None:
        return pending
    out = []
    for rec in pending:
        actions = tuple(a for a in rec.actions if a.id != action_id)
        if actions:
            out.append(replace(rec, actions=actions))
    return tuple(out)


def replay(
    initial: DispatchState, events: Iterable[DispatchEvent], engine: Engine
) -> DispatchState:
    state = initial
    for event in events:
        state = apply_event(state, event, engine)
    return state


# ---------------------------------------------------------------------------
# Decision logic


def dispatch_step(
    state: DispatchState, inp: DispatchInput, engine: Engine
) -> tuple[DispatchState, tuple[DispatchEvent, ...]]:
    """One deterministic transition; returns the new state and its events."""
    events: list[DispatchEvent] = []

    def emit(kind: EventKind, payload: dict, tick: int) -> None:
        nonlocal state
        event = DispatchEvent(tick=tick, kind=kind, payload=payload)
        state = apply_event(state, event, engine)
        events.append(event)

    if isinstance(inp, TelemetryTick):
        tick = state.tick + 1
        attack = state.pending_attack
        emit(
            EventKind.TELEMETRY,
            {"attacked": attack is not None},
            tick,
        )
        if state.report is None:
            emit(
                EventKind.UNRESOLVED,
                {"reason": state.solution.failure or "power flow diverged"},
                tick,
            )
            return state, tuple(events)
        _mode_moves(state, engine, tick, attack, emit)
        return state, tuple(events)

    if isinstance(inp, OperatorDecision):
        tick = state.tick
        found = state.find_pending_action(inp.action_id)
        if found is None:
            emit(
                EventKind.OPERATOR_REJECTED,
                {"action_id": inp.action_id, "error": "unknown_action"},
                tick,
            )
            return state, tuple(events)
        rec, action = found
        if inp.approve:
            emit(
                EventKind.OPERATOR_APPLIED,
                {
                    "recommendation_id": rec.id,
                    "action_id": action.id,
                    "bus": action.bus,
                    "dq": action.dq,
                },
                tick,
            )
        else:
            emit(
                EventKind.OPERATOR_REJECTED,
                {"recommendation_id": rec.id, "action_id": action.id},
                tick,
            )
        return state, tuple(events)

    if isinstance(inp, ModeChange):
        emit(
            EventKind.MODE_CHANGED,
            {"from": state.mode.value, "to": inp.mode.value},
            state.tick,
        )
        return state, tuple(events)

    if isinstance(inp, Disturbance):
        payload = {
            "label": inp.label,
            "perturbation": None
            if inp.perturbation is None
            else inp.perturbation.to_dict(),
            "telemetry_attack": None
            if inp.telemetry_attack is None
            else inp.telemetry_attack.to_dict(),
        }
        if inp.perturbation is not None:
            # validate before the event enters the log
            apply_perturbation(state.case, inp.perturbation)
        emit(EventKind.DISTURBANCE_INJECTED, payload, state.tick)
        return state, tuple(events)

    raise DispatchError(f"unknown input {inp!r}")


def _mode_moves(state, engine, tick, attack, emit) -> None:
    """Mode-specific controller move after a converged assessment."""
    report = state.report
    if state.mode is Mode.MONITOR or report is None:
        return
    if report.state_class is SecurityClass.NORMAL:
        return

    config = engine.config.control
    if state.mode in (Mode.CLOSED_LOOP, Mode.COMBINED):
        config = replace(config, verify=True)  # machine-checked before issue

    bundle = engine.bundle
    measurement_note = {}
    if attack is not None and bundle is not None:
        # the model sees attacked telemetry; assessment keeps the true state
        measurement_note = {"attacked": True}
    rec = _recommend(state, engine, config, bundle, tick, attack)

    if state.mode is Mode.OPEN_LOOP:
        emit(
            EventKind.RECOMMENDATION_ISSUED,
            {"recommendation": rec.to_dict(), **measurement_note},
            tick,
        )
        return

    if state.mode is Mode.CLOSED_LOOP:
        best = next(
            (a for a in rec.actions if a.verified_l_max_after is not None), None
        )
        if best is None:
            emit(
                EventKind.RECOMMENDATION_ISSUED,
                {
                    "recommendation": rec.to_dict(),
                    "note": "no verified action available",
                    **measurement_note,
                },
                tick,
            )
            return
        emit(
            EventKind.AUTO_APPLIED,
            {
                "recommendation_id": rec.id,
                "action_id": best.id,
                "bus": best.bus,
                "dq": best.dq,
                "mode": state.mode.value,
            },
            tick,
        )
        return

    # combined: verified actions within the cap go out automatically,
    # the rest wait for the operator
    auto = [
        a
        for a in rec.actions
        if a.auto_eligible and a.verified_l_max_after is not None
    ]
    manual = tuple(a for a in rec.actions if a not in auto)
    for action in auto:
        emit(
            EventKind.AUTO_APPLIED,
            {
                "recommendation_id": rec.id,
                "action_id": action.id,
                "bus": action.bus,
                "dq": action.dq,
                "mode": state.mode.value,
            },
            tick,
        )
        if state.report is not None and (
            state.report.state_class is SecurityClass.NORMAL
        ):
            return  # secured mid-sequence; leftover actions are stale
    if manual:
        emit(
            EventKind.RECOMMENDATION_ISSUED,
            {"recommendation": replace(rec, actions=manual).to_dict()},
            tick,
        )


def _recommend(state, engine, config, bundle, tick, attack) -> Recommendation:
    from .telemetry import corrupt_measurements  # local to avoid cycle noise

    if attack is not None and bundle is not None:
        # predictions must flow from the corrupted vector: rebuild bundle
        # inputs through recommend_actions is not possible directly, so the
        # attack corrupts what the model sees via a wrapped bundle
        from .telemetry import MeasurementVector

        class _AttackedBundle:
            schema = bundle.schema
            candidates = bundle.candidates

            @staticmethod
            def _corrupt(m: MeasurementVector) -> MeasurementVector:
                return corrupt_measurements(m, attack, bundle.schema)

            @staticmethod
            def predict_indicator(m: MeasurementVector) -> float:
                return bundle.predict_indicator(_AttackedBundle._corrupt(m))

            @staticmethod
            def predict_injections(m: MeasurementVector) -> dict[int, float]:
                return bundle.predict_injections(_AttackedBundle._corrupt(m))

        bundle = _AttackedBundle()
    return recommend_actions(
        state.case,
        state.solution,
        bundle,
        config,
        rec_id=f"r{tick}",
        tick=tick,
    )


# ---------------------------------------------------------------------------
# Adversary


@dataclass(frozen=True)
class AdversaryConfig:
    line_outage_rate: float = 0.0
    gen_outage_rate: float = 0.0
    load_spike_probability: float = 0.0
    load_spike_range: tuple[float, float] = (1.1, 1.4)
    telemetry_attack_probability: float = 0.0
    telemetry_attack: CorruptionConfig | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for p in (
            self.line_outage_rate,
            self.gen_outage_rate,
            self.load_spike_probability,
            self.telemetry_attack_probability,
        ):
            if not 0.0 <= p <= 1.0:
                raise DispatchError("adversary probabilities must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "line_outage_rate": self.line_outage_rate,
            "gen_outage_rate": self.gen_outage_rate,
            "load_spike_probability": self.load_spike_probability,
            "load_spike_range": list(self.load_spike_range),
            "telemetry_attack_probability": self.telemetry_attack_probability,
            "telemetry_attack": None
            if self.telemetry_attack is None
            else self.telemetry_attack.to_dict(),
            "rng_seed": self.rng_seed,
        }


def sample_disturbance(
    config: AdversaryConfig, case: NetworkCase, tick: int
) -> Disturbance | None:
    """Independent category draws, deterministic under (seed, tick).

    Line outages are drawn uniformly over in-service lines whose loss does
    not island the grid; a draw with no viable candidate lapses.
    """
    rng = np.random.default_rng(np.random.SeedSequence((config.rng_seed, tick)))
    branch_out: frozenset[int] = frozenset()
    gen_out: frozenset[int] = frozenset()
    load_scale: dict[int, float] = {}
    attack: CorruptionConfig | None = None

    if rng.random() < config.line_outage_rate:
        viable = []
        for k, br in enumerate(case.branches):
            if not br.in_service:
                continue
            try:
                apply_perturbation(case, Perturbation(branch_outages=frozenset({k})))
                viable.append(k)
            except PerturbationError:
                continue
        if viable:
            branch_out = frozenset({viable[int(rng.integers(len(viable)))]})
    if rng.random() < config.gen_outage_rate:
        slack_id = case.slack_bus.id
        gens = [
            k
            for k, g in enumerate(case.generators)
            if g.in_service and g.bus != slack_id
        ]
        if gens:
            gen_out = frozenset({gens[int(rng.integers(len(gens)))]})
    if rng.random() < config.load_spike_probability:
        lo, hi = config.load_spike_range
        factor = float(rng.uniform(lo, hi))
        loads = [b.id for b in case.buses if b.p_load != 0.0]
        if loads:
            load_scale = {loads[int(rng.integers(len(loads)))]: factor}
    if (
        config.telemetry_attack is not None
        and rng.random() < config.telemetry_attack_probability
    ):
        attack = replace(
            config.telemetry_attack, rng_seed=config.telemetry_attack.rng_seed + tick
        )

    if not branch_out and not gen_out and not load_scale and attack is None:
        return None
    pert = None
    if branch_out or gen_out or load_scale:
        pert = Perturbation(
            load_scale=load_scale,
            branch_outages=branch_out,
            generator_outages=gen_out,
        )
    return Disturbance(perturbation=pert, telemetry_attack=attack, label="adversary")


# ---------------------------------------------------------------------------
# Episodes


@dataclass(frozen=True)
class PayoffWeights:
    normal: float = 1.0
    alarm: float = 0.0
    emergency: float = -1.0
    unresolved: float = -10.0
    effort: float = 0.01  # penalty per p.u. of applied injection

    def to_dict(self) -> dict:
        return {
            "normal": self.normal,
            "alarm": self.alarm,
            "emergency": self.emergency,
            "unresolved": self.unresolved,
            "effort": self.effort,
        }


@dataclass(frozen=True)
class GameEpisode:
    ticks: int
    mode: Mode
    payoff: float
    recovered: bool
    time_to_recover: int | None
    l_sum_trace: tuple[float | None, ...]  # None on unresolved ticks
    disturbances: tuple[dict, ...]
    actions_taken: tuple[dict, ...]
    unresolved_ticks: int
    headless_auto_approve: bool
    payoff_weights: PayoffWeights
    seed: int

    def to_dict(self) -> dict:
        return {
            "ticks": self.ticks,
            "mode": self.mode.value,
            "payoff": self.payoff,
            "recovered": self.recovered,
            "time_to_recover": self.time_to_recover,
            "l_sum_trace": list(self.l_sum_trace),
            "disturbances": list(self.disturbances),
            "actions_taken": list(self.actions_taken),
            "unresolved_ticks": self.unresolved_ticks,
            "headless_auto_approve": self.headless_auto_approve,
            "payoff_weights": self.payoff_weights.to_dict(),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def run_episode(
    case: NetworkCase,
    adversary: AdversaryConfig,
    mode: Mode,
    engine: Engine,
    ticks: int,
    weights: PayoffWeights = PayoffWeights(),
) -> GameEpisode:
    """Adversary move, assessment, controller move, repeat; fully seeded.

    Headless episodes in open-loop mode auto-approve the queued actions of
    the freshest recommendation so modes stay comparable in batch runs; the
    flag records it.
    """
    if not solve_power_flow(case, engine.config.pf_options).converged:
        raise DispatchError("base case does not converge")
    state = initial_state(case, mode, engine)
    payoff = 0.0
    l_sum_trace: list[float | None] = []
    disturbances: list[dict] = []
    actions: list[dict] = []
    unresolved = 0
    first_insecure: int | None = None
    recover_tick: int | None = None

    for tick in range(1, ticks + 1):
        disturbance = sample_disturbance(adversary, state.case, tick)
        if disturbance is not None:
            try:
                state, evs = dispatch_step(state, disturbance, engine)
                disturbances.append(evs[0].to_dict())
            except PerturbationError:
                pass  # drawn outage islanded against a moved topology; lapse
        state, evs = dispatch_step(state, TelemetryTick(), engine)
        if state.mode is Mode.OPEN_LOOP and state.pending:
            for action in state.pending[0].actions:
                state, dec_evs = dispatch_step(
                    state, OperatorDecision(action.id, approve=True), engine
                )
                evs += dec_evs
                if state.report is None or (
                    state.report.state_class is SecurityClass.NORMAL
                ):
                    break

        applied_dq = 0.0
        for e in evs:
            if e.kind in (EventKind.AUTO_APPLIED, EventKind.OPERATOR_APPLIED):
                applied_dq += float(e.payload["dq"])
                actions.append(e.to_dict())
        if state.report is None:
            unresolved += 1
            payoff += weights.unresolved
            l_sum_trace.append(None)
            if first_insecure is None:
                first_insecure = tick
            recover_tick = None
            continue
        cls = state.report.state_class
        payoff += {
            SecurityClass.NORMAL: weights.normal,
            SecurityClass.ALARM: weights.alarm,
            SecurityClass.EMERGENCY: weights.emergency,
        }[cls]
        payoff -= weights.effort * applied_dq
        l_sum_trace.append(state.report.l_sum)
        if cls is not SecurityClass.NORMAL:
            if first_insecure is None:
                first_insecure = tick
            recover_tick = None
        elif first_insecure is not None and recover_tick is None:
            recover_tick = tick

    recovered = state.report is not None and (
        state.report.state_class is SecurityClass.NORMAL
    )
    time_to_recover = None
    if first_insecure is not None and recover_tick is not None:
        time_to_recover = recover_tick - first_insecure
    return GameEpisode(
        ticks=ticks,
        mode=mode,
        payoff=round(payoff, 9),
        recovered=recovered,
        time_to_recover=time_to_recover,
        l_sum_trace=tuple(l_sum_trace),
        disturbances=tuple(disturbances),
        actions_taken=tuple(actions),
        unresolved_ticks=unresolved,
        headless_auto_approve=mode is Mode.OPEN_LOOP,
        payoff_weights=weights,
        seed=adversary.rng_seed,
    )


# ---------------------------------------------------------------------------
# Event log persistence


def save_event_log(events: Iterable[DispatchEvent], path: str | Path) -> None:
    with Path(path).open("w") as fh:
        for e in events:
            fh.write(json.dumps(e.to_dict(), sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def load_event_log(path: str | Path) -> tuple[DispatchEvent, ...]:
    with Path(path).open() as fh:
        return tuple(DispatchEvent.from_dict(json.loads(line)) for line in fh)
