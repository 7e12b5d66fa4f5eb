"""HTTP + server-push service exposing one live dispatch loop.

Endpoints (JSON unless noted):

    GET  /api/state                  -> ApiStateSnapshot
    GET  /api/recommendations        -> pending Recommendation array
    POST /api/actions/{id}/apply     -> 204 (operator approval)
    POST /api/actions/{id}/reject    -> 204
    POST /api/mode {"mode": "..."}   -> 204
    POST /api/disturbance {...}      -> 204 (drill injection)
    POST /api/tick                   -> 204 (manual clock)
    GET  /api/events?since=<tick>    -> event page
    GET  /api/stream                 -> text/event-stream of snapshot deltas

One writer task serializes every mutation through ``dispatch_step``;
readers see atomically swapped immutable states. Each stream subscriber
owns a queue fed on every mutation, so deltas reach clients as soon as the
transition lands. Malformed bodies return 400 with a machine-readable
code, unknown ids 404, decisions illegal in the current mode 409.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response, StreamingResponse
from pydantic import BaseModel, ValidationError

from .dispatch import (
    DispatchState,
    Disturbance,
    Engine,
    EventKind,
    Mode,
    ModeChange,
    OperatorDecision,
    TelemetryTick,
    dispatch_step,
    initial_state,
)
from .network import NetworkCase, Perturbation, PerturbationError
from .telemetry import CorruptionConfig

RECENT_EVENTS = 50


def build_snapshot(state: DispatchState) -> dict:
    outaged_branches = [
        k for k, br in enumerate(state.case.branches) if not br.in_service
    ]
    outaged_generators = [
        k for k, g in enumerate(state.case.generators) if not g.in_service
    ]
    return {
        "tick": state.tick,
        "mode": state.mode.value,
        "case": {
            "name": state.case.name,
            "n_buses": state.case.n,
            "n_branches": len(state.case.branches),
            "outaged_branches": outaged_branches,
            "outaged_generators": outaged_generators,
            "total_p_load": round(state.case.total_load()[0], 9),
        },
        "converged": state.solution.converged if state.solution else False,
        "l_report": None if state.report is None else state.report.to_dict(),
        "pending": [r.to_dict() for r in state.pending],
        "recent_events": [e.to_dict() for e in state.event_log[-RECENT_EVENTS:]],
    }


class ModeBody(BaseModel):
    mode: str


class DisturbanceBody(BaseModel):
    load_scale: dict[str, float] = {}
    branch_outages: list[int] = []
    generator_outages: list[int] = []
    injections: dict[str, float] = {}
    telemetry_attack: dict | None = None


@dataclass
class ServiceState:
    engine: Engine
    state: DispatchState
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    subscribers: list[asyncio.Queue] = field(default_factory=list)

    async def mutate(self, inp) -> DispatchState:
        async with self.lock:
            new_state, events = dispatch_step(self.state, inp, self.engine)
            self.state = new_state
            if events:
                delta = {
                    "tick": new_state.tick,
                    "snapshot": build_snapshot(new_state),
                }
                for q in list(self.subscribers):
                    q.put_nowait(delta)
            return new_state


def create_app(
    case: NetworkCase,
    engine: Engine,
    mode: Mode = Mode.MONITOR,
    tick_interval: float = 0.0,
) -> FastAPI:
    """App factory; ``tick_interval`` > 0 arms the wall-clock driver,
    otherwise the clock advances only via POST /api/tick."""
    svc: ServiceState = None  # type: ignore[assignment]

    async def ticker() -> None:
        while True:
            await asyncio.sleep(tick_interval)
            await svc.mutate(TelemetryTick())

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        clock = asyncio.create_task(ticker()) if tick_interval > 0 else None
        try:
            yield
        finally:
            if clock is not None:
                clock.cancel()

    if engine.bundle is not None:
        from .telemetry import build_schema

        expected = build_schema(case).schema_id
        if engine.bundle.schema.schema_id != expected:
            raise ValueError(
                f"model bundle schema {engine.bundle.schema.schema_id} does "
                f"not match the served case (expected {expected})"
            )

    app = FastAPI(title="gridpilot", docs_url=None, redoc_url=None,
                  lifespan=lifespan)
    svc = ServiceState(engine=engine, state=initial_state(case, mode, engine))
    app.state.svc = svc

    @app.exception_handler(RequestValidationError)
    async def bad_request(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "malformed_request", "detail": str(exc.errors()[:3])},
        )

    @app.get("/api/state")
    async def get_state():
        return build_snapshot(svc.state)

    @app.get("/api/recommendations")
    async def get_recommendations():
        return [r.to_dict() for r in svc.state.pending]

    @app.post("/api/actions/{action_id}/apply", status_code=204)
    async def apply_action(action_id: str):
        return await _decide(action_id, approve=True)

    @app.post("/api/actions/{action_id}/reject", status_code=204)
    async def reject_action(action_id: str):
        return await _decide(action_id, approve=False)

    async def _decide(action_id: str, approve: bool):
        if svc.state.mode not in (Mode.OPEN_LOOP, Mode.COMBINED):
            return JSONResponse(
                status_code=409,
                content={
                    "error": "wrong_mode",
                    "detail": f"operator decisions are not accepted in "
                    f"{svc.state.mode.value} mode",
                },
            )
        if svc.state.find_pending_action(action_id) is None:
            return JSONResponse(
                status_code=404,
                content={"error": "unknown_action", "detail": action_id},
            )
        await svc.mutate(OperatorDecision(action_id=action_id, approve=approve))
        return Response(status_code=204)

    @app.post("/api/mode", status_code=204)
    async def set_mode(body: ModeBody):
        try:
            mode = Mode(body.mode)
        except ValueError:
            return JSONResponse(
                status_code=400,
                content={"error": "unknown_mode", "detail": body.mode},
            )
        await svc.mutate(ModeChange(mode))
        return Response(status_code=204)

    @app.post("/api/disturbance", status_code=204)
    async def inject_disturbance(body: DisturbanceBody):
        try:
            pert = Perturbation(
                load_scale={int(k): v for k, v in body.load_scale.items()},
                branch_outages=frozenset(body.branch_outages),
                generator_outages=frozenset(body.generator_outages),
                injections={int(k): v for k, v in body.injections.items()},
            )
            attack = (
                None
                if body.telemetry_attack is None
                else CorruptionConfig.from_dict(body.telemetry_attack)
            )
            disturbance = Disturbance(
                perturbation=None if pert.is_identity() else pert,
                telemetry_attack=attack,
            )
            await svc.mutate(disturbance)
        except (PerturbationError, ValueError) as exc:
            return JSONResponse(
                status_code=400,
                content={"error": "bad_disturbance", "detail": str(exc)},
            )
        return Response(status_code=204)

    @app.post("/api/tick", status_code=204)
    async def advance_tick():
        await svc.mutate(TelemetryTick())
        return Response(status_code=204)

    @app.get("/api/events")
    async def get_events(since: int = -1):
        events = [e.to_dict() for e in svc.state.event_log if e.tick > since]
        return {"events": events, "tick": svc.state.tick}

    @app.get("/api/stream")
    async def stream(request: Request):
        queue: asyncio.Queue = asyncio.Queue()
        svc.subscribers.append(queue)

        async def gen():
            try:
                yield _sse(
                    {"tick": svc.state.tick, "snapshot": build_snapshot(svc.state)}
                )
                while True:
                    if await request.is_disconnected():
                        return
                    try:
                        delta = await asyncio.wait_for(queue.get(), timeout=15.0)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    yield _sse(delta)
            finally:
                svc.subscribers.remove(queue)

        return StreamingResponse(gen(), media_type="text/event-stream")

    return app


def _sse(data: dict) -> str:
    return f"data: {json.dumps(data, sort_keys=True)}\n\n"
