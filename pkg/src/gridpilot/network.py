"""Network data model: buses, branches, generators, and case perturbations.

All quantities are in per-unit on the case's MVA base. Cases are immutable
value objects; every mutation-like operation returns a new, re-validated
``NetworkCase``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Mapping


class CaseError(ValueError):
    """A case violates a structural invariant (bad topology, bad data)."""


class PerturbationError(ValueError):
    """A perturbation references unknown elements or islands the grid."""


class BusKind(str, Enum):
    SLACK = "slack"
    PV = "pv"
    PQ = "pq"


@dataclass(frozen=True)
class Bus:
    """A network node.

    ``p_load``/``q_load`` are demands (positive = consumption), ``g_shunt``/
    ``b_shunt`` the shunt admittance at nominal voltage, all in p.u.
    ``v_mag``/``v_ang`` carry the last known operating point and seed warm
    starts; they are not setpoints.
    """

    id: int
    kind: BusKind
    p_load: float = 0.0
    q_load: float = 0.0
    g_shunt: float = 0.0
    b_shunt: float = 0.0
    v_mag: float = 1.0
    v_ang: float = 0.0
    base_kv: float = 1.0
    v_min: float = 0.9
    v_max: float = 1.1

    def __post_init__(self) -> None:
        if self.base_kv <= 0:
            raise CaseError(f"bus {self.id}: base_kv must be positive")
        if not self.v_min < self.v_max:
            raise CaseError(f"bus {self.id}: v_min must be below v_max")


@dataclass(frozen=True)
class Branch:
    """A line or transformer between two buses.

    ``b_charging`` is the total line charging susceptance; ``tap`` the
    off-nominal ratio on the from side (1.0 = nominal); ``shift`` the phase
    shift in radians. ``mva_rating`` of 0 means unrated.
    """

    from_bus: int
    to_bus: int
    r: float
    x: float
    b_charging: float = 0.0
    tap: float = 1.0
    shift: float = 0.0
    in_service: bool = True
    mva_rating: float = 0.0

    def __post_init__(self) -> None:
        if self.from_bus == self.to_bus:
            raise CaseError(f"branch {self.from_bus}-{self.to_bus}: self-loop")
        if self.in_service and self.x == 0.0:
            raise CaseError(
                f"branch {self.from_bus}-{self.to_bus}: zero-impedance branch"
            )


@dataclass(frozen=True)
class Generator:
    """A reactive-capable source attached to a slack or PV bus."""

    bus: int
    p_gen: float = 0.0
    q_gen: float = 0.0
    q_min: float = -9.99
    q_max: float = 9.99
    v_set: float = 1.0
    in_service: bool = True

    def __post_init__(self) -> None:
        if self.q_min > self.q_max:
            raise CaseError(f"generator at bus {self.bus}: q_min > q_max")


@dataclass(frozen=True)
class NetworkCase:
    """A complete grid model in per-unit on ``base_mva``.

    Construction validates structural invariants: exactly one slack,
    existing branch endpoints, generators only on slack/PV buses. The
    connectivity invariant (every bus reachable from the slack over
    in-service branches) is enforced where cases enter the system - the
    file loaders and ``apply_perturbation`` - via ``validate_connectivity``,
    so matrix-level work on deliberately de-energized fragments stays
    possible in memory.
    """

    base_mva: float
    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...] = ()
    generators: tuple[Generator, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "buses", tuple(self.buses))
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.base_mva <= 0:
            raise CaseError("base_mva must be positive")
        if not self.buses:
            raise CaseError("case has no buses")
        ids = [b.id for b in self.buses]
        if len(set(ids)) != len(ids):
            raise CaseError("duplicate bus ids")
        slacks = [b.id for b in self.buses if b.kind is BusKind.SLACK]
        if len(slacks) == 0:
            raise CaseError("no slack bus")
        if len(slacks) > 1:
            raise CaseError(f"multiple slack buses: {slacks}")
        known = set(ids)
        for br in self.branches:
            if br.from_bus not in known or br.to_bus not in known:
                raise CaseError(
                    f"branch {br.from_bus}-{br.to_bus}: endpoint not a known bus"
                )
        kind_of = {b.id: b.kind for b in self.buses}
        for g in self.generators:
            if g.bus not in known:
                raise CaseError(f"generator at unknown bus {g.bus}")
            if g.in_service and kind_of[g.bus] is BusKind.PQ:
                raise CaseError(f"generator at bus {g.bus}: bus is PQ")
        vset: dict[int, float] = {}
        for g in self.generators:
            if not g.in_service:
                continue
            if g.bus in vset and abs(vset[g.bus] - g.v_set) > 1e-9:
                raise CaseError(
                    f"generators at bus {g.bus} disagree on v_set"
                )
            vset[g.bus] = g.v_set

    def unreachable_from_slack(self) -> set[int]:
        adj: dict[int, list[int]] = {b.id: [] for b in self.buses}
        for br in self.branches:
            if br.in_service:
                adj[br.from_bus].append(br.to_bus)
                adj[br.to_bus].append(br.from_bus)
        start = self.slack_bus.id
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return {b.id for b in self.buses} - seen

    @cached_property
    def n(self) -> int:
        return len(self.buses)

    @cached_property
    def index_of(self) -> Mapping[int, int]:
        """Bus id -> position in ``buses`` order."""
        return {b.id: i for i, b in enumerate(self.buses)}

    @cached_property
    def slack_bus(self) -> Bus:
        return next(b for b in self.buses if b.kind is BusKind.SLACK)

    @cached_property
    def generators_at(self) -> Mapping[int, tuple[Generator, ...]]:
        """In-service generators grouped by bus id."""
        at: dict[int, list[Generator]] = {}
        for g in self.generators:
            if g.in_service:
                at.setdefault(g.bus, []).append(g)
        return {k: tuple(v) for k, v in at.items()}

    def effective_kind(self, bus: Bus) -> BusKind:
        """PV buses without any in-service generator behave as PQ."""
        if bus.kind is BusKind.PV and bus.id not in self.generators_at:
            return BusKind.PQ
        return bus.kind

    def voltage_setpoint(self, bus: Bus) -> float:
        gens = self.generators_at.get(bus.id)
        return gens[0].v_set if gens else bus.v_mag

    def total_load(self) -> tuple[float, float]:
        return (
            sum(b.p_load for b in self.buses),
            sum(b.q_load for b in self.buses),
        )


def validate_connectivity(case: NetworkCase) -> NetworkCase:
    """Reject cases with buses cut off from the slack; returns the case."""
    unreachable = case.unreachable_from_slack()
    if unreachable:
        raise CaseError(
            f"buses disconnected from slack: {sorted(unreachable)}"
        )
    return case


@dataclass(frozen=True)
class Perturbation:
    """A disturbance applied to a case.

    ``load_scale`` multiplies both P and Q demand at the listed buses
    (missing buses keep factor 1). ``injections`` add reactive injection at
    the listed buses, modeled as a reduction of q_load. Outages reference
    positions in the case's branch/generator lists.
    """

    load_scale: Mapping[int, float] = field(default_factory=dict)
    branch_outages: frozenset[int] = frozenset()
    generator_outages: frozenset[int] = frozenset()
    injections: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "load_scale", dict(self.load_scale))
        object.__setattr__(self, "branch_outages", frozenset(self.branch_outages))
        object.__setattr__(
            self, "generator_outages", frozenset(self.generator_outages)
        )
        object.__setattr__(self, "injections", dict(self.injections))

    def is_identity(self) -> bool:
        return (
            all(abs(f - 1.0) < 1e-15 for f in self.load_scale.values())
            and not self.branch_outages
            and not self.generator_outages
            and all(abs(d) < 1e-15 for d in self.injections.values())
        )

    def to_dict(self) -> dict:
        return {
            "load_scale": {str(k): v for k, v in sorted(self.load_scale.items())},
            "branch_outages": sorted(self.branch_outages),
            "generator_outages": sorted(self.generator_outages),
            "injections": {str(k): v for k, v in sorted(self.injections.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Perturbation":
        return cls(
            load_scale={int(k): float(v) for k, v in d.get("load_scale", {}).items()},
            branch_outages=frozenset(d.get("branch_outages", ())),
            generator_outages=frozenset(d.get("generator_outages", ())),
            injections={int(k): float(v) for k, v in d.get("injections", {}).items()},
        )


def apply_perturbation(case: NetworkCase, perturbation: Perturbation) -> NetworkCase:
    """Return a new case with the perturbation applied.

    Raises ``PerturbationError`` for unknown element references or when the
    outages island part of the grid from the slack.
    """
    known = set(case.index_of)
    for bid in perturbation.load_scale:
        if bid not in known:
            raise PerturbationError(f"load_scale references unknown bus {bid}")
    for bid in perturbation.injections:
        if bid not in known:
            raise PerturbationError(f"injection references unknown bus {bid}")
    for i in perturbation.branch_outages:
        if not 0 <= i < len(case.branches):
            raise PerturbationError(f"unknown branch index {i}")
    for i in perturbation.generator_outages:
        if not 0 <= i < len(case.generators):
            raise PerturbationError(f"unknown generator index {i}")

    buses = []
    for b in case.buses:
        f = perturbation.load_scale.get(b.id, 1.0)
        dq = perturbation.injections.get(b.id, 0.0)
        if f != 1.0 or dq != 0.0:
            b = replace(b, p_load=b.p_load * f, q_load=b.q_load * f - dq)
        buses.append(b)
    branches = [
        replace(br, in_service=False) if i in perturbation.branch_outages else br
        for i, br in enumerate(case.branches)
    ]
    generators = [
        replace(g, in_service=False) if i in perturbation.generator_outages else g
        for i, g in enumerate(case.generators)
    ]
    out = NetworkCase(
        base_mva=case.base_mva,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(generators),
        name=case.name,
    )
    unreachable = out.unreachable_from_slack()
    if unreachable:
        raise PerturbationError(
            f"islanding: buses disconnected from slack: {sorted(unreachable)}"
        )
    return out
