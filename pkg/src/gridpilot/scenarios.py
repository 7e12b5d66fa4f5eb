"""Scenario sampling and the labeled dataset feeding the surrogate models.

A scenario is a perturbed steady state: loads drawn lognormally around a
system-wide scale factor (generation following the system factor), plus
independent element outages. Each converged scenario yields a telemetry
vector, the true security indices, and (for insecure states) the greedy
oracle's corrective injections as regression targets.

Dataset file format: JSON Lines. The first line is a header object carrying
the schema manifest, the full generation config, and bookkeeping counts;
every following line is one sample. Files are byte-stable for a fixed
(case, config, count) triple.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corrective import greedy_reactive_injections
from .network import CaseError, NetworkCase, PerturbationError
from .powerflow import PowerFlowOptions, PowerFlowSolution, build_ybus, solve_power_flow
from .stability import Thresholds, compute_f_matrix, compute_l_index, partition_buses
from .telemetry import MeasurementSchema, MeasurementVector, build_schema, extract_features


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    """Sampling distribution for steady-state scenarios.

    ``load_scale_range`` bounds the uniform system-wide demand factor;
    ``per_bus_sigma`` is the lognormal spread of individual bus loads around
    it (mean-one); ``outage_probability`` applies independently to each
    in-service branch and non-slack generator. Generation tracks the system
    factor when ``scale_generation`` is set so stress stays voltage-shaped
    rather than slack-angle-shaped.

    Voltage insecurity is reactive scarcity, so two extra axes shape the
    reactive side: ``q_stress_range`` draws one system-wide multiplier on
    reactive demand (power-factor degradation), and each loaded bus
    independently becomes a hotspot with ``hotspot_probability``, its
    reactive demand further multiplied by a ``hotspot_range`` draw. Both
    default to off.
    """

    load_scale_range: tuple[float, float] = (0.8, 1.2)
    per_bus_sigma: float = 0.0
    outage_probability: float = 0.0
    injection_candidates: tuple[int, ...] = ()
    rng_seed: int = 0
    scale_generation: bool = True
    q_stress_range: tuple[float, float] = (1.0, 1.0)
    hotspot_probability: float = 0.0
    hotspot_range: tuple[float, float] = (1.5, 2.5)

    def __post_init__(self) -> None:
        for name in ("load_scale_range", "q_stress_range", "hotspot_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ScenarioError(f"{name} min exceeds max")
        for name in ("outage_probability", "hotspot_probability"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ScenarioError(f"{name} must lie in [0, 1]")
        if self.per_bus_sigma < 0:
            raise ScenarioError("per_bus_sigma must be non-negative")
        object.__setattr__(
            self, "injection_candidates", tuple(self.injection_candidates)
        )

    def to_dict(self) -> dict:
        return {
            "load_scale_range": list(self.load_scale_range),
            "per_bus_sigma": self.per_bus_sigma,
            "outage_probability": self.outage_probability,
            "injection_candidates": list(self.injection_candidates),
            "rng_seed": self.rng_seed,
            "scale_generation": self.scale_generation,
            "q_stress_range": list(self.q_stress_range),
            "hotspot_probability": self.hotspot_probability,
            "hotspot_range": list(self.hotspot_range),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        return cls(
            load_scale_range=tuple(d["load_scale_range"]),
            per_bus_sigma=float(d.get("per_bus_sigma", 0.0)),
            outage_probability=float(d.get("outage_probability", 0.0)),
            injection_candidates=tuple(d.get("injection_candidates", ())),
            rng_seed=int(d.get("rng_seed", 0)),
            scale_generation=bool(d.get("scale_generation", True)),
            q_stress_range=tuple(d.get("q_stress_range", (1.0, 1.0))),
            hotspot_probability=float(d.get("hotspot_probability", 0.0)),
            hotspot_range=tuple(d.get("hotspot_range", (1.5, 2.5))),
        )


@dataclass(frozen=True)
class ScenarioMeta:
    lam: float  # system-wide load scale factor of the draw
    outages: tuple[str, ...]  # "branch:<idx>" / "generator:<idx>"
    seed: int  # attempt index within the config's stream

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "outages": list(self.outages), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioMeta":
        return cls(
            lam=float(d["lambda"]),
            outages=tuple(d.get("outages", ())),
            seed=int(d.get("seed", 0)),
        )


@dataclass(frozen=True)
class Scenario:
    case: NetworkCase
    solution: PowerFlowSolution
    meta: ScenarioMeta


def _sample_case(
    case: NetworkCase, config: ScenarioConfig, attempt: int
) -> tuple[NetworkCase, float, tuple[str, ...]]:
    """Deterministic draw for one attempt; own stream per (seed, attempt).

    Draw order is fixed (system factor, reactive stress, per-bus spread and
    hotspots in bus order, branch then generator outages) so files rebuilt
    from the same config are byte-identical.
    """
    from dataclasses import replace as _replace

    rng = np.random.default_rng(
        np.random.SeedSequence((config.rng_seed, attempt))
    )
    lam = float(rng.uniform(*config.load_scale_range))
    q_stress = float(rng.uniform(*config.q_stress_range))
    sigma = config.per_bus_sigma
    buses = []
    for b in case.buses:
        factor = lam
        if sigma > 0:
            # mean-one lognormal spread around the system factor
            factor *= float(np.exp(rng.normal(-0.5 * sigma**2, sigma)))
        q_extra = q_stress
        if (
            config.hotspot_probability > 0
            and b.q_load > 0
            and rng.random() < config.hotspot_probability
        ):
            q_extra *= float(rng.uniform(*config.hotspot_range))
        buses.append(
            _replace(b, p_load=b.p_load * factor, q_load=b.q_load * factor * q_extra)
        )
    branch_out = [
        k
        for k, br in enumerate(case.branches)
        if br.in_service and rng.random() < config.outage_probability
    ]
    slack_id = case.slack_bus.id
    gen_out = [
        k
        for k, g in enumerate(case.generators)
        if g.in_service
        and g.bus != slack_id
        and rng.random() < config.outage_probability
    ]
    branches = tuple(
        _replace(br, in_service=False) if k in set(branch_out) else br
        for k, br in enumerate(case.branches)
    )
    gens = tuple(
        _replace(g, in_service=False) if k in set(gen_out) else g
        for k, g in enumerate(case.generators)
    )
    if config.scale_generation and lam != 1.0:
        gens = tuple(
            _replace(g, p_gen=g.p_gen * lam) if g.bus != slack_id else g
            for g in gens
        )
    outages = tuple(
        sorted(
            [f"branch:{k}" for k in branch_out]
            + [f"generator:{k}" for k in gen_out]
        )
    )
    sampled = _replace(case, buses=tuple(buses), branches=branches, generators=gens)
    if branch_out and sampled.unreachable_from_slack():
        raise PerturbationError("islanding draw")
    return sampled, lam, outages


def generate_scenarios(
    case: NetworkCase,
    config: ScenarioConfig,
    count: int,
    options: PowerFlowOptions | None = None,
) -> tuple[list[Scenario], int]:
    """Sample ``count`` converged scenarios; returns (scenarios, discarded).

    Unconverged or islanding draws are discarded and resampled from the
    stream, so results are deterministic under the config seed. Gives up
    when 10x the requested count has been attempted.
    """
    options = options or PowerFlowOptions()
    base = solve_power_flow(case, options)
    if not base.converged:
        raise ScenarioError("base case does not converge")
    warm = PowerFlowOptions(
        tolerance=options.tolerance,
        max_iter=max(options.max_iter, 25),
        flat_start=False,
        enforce_q_limits=options.enforce_q_limits,
        v_start=tuple(base.v),
    )
    cold = PowerFlowOptions(
        tolerance=options.tolerance,
        max_iter=max(options.max_iter, 25),
        enforce_q_limits=options.enforce_q_limits,
    )
    scenarios: list[Scenario] = []
    discarded = 0
    attempt = 0
    budget = 10 * count
    while len(scenarios) < count:
        if attempt >= budget:
            raise ScenarioError(
                f"infeasible scenario space: {discarded} of {attempt} draws discarded"
            )
        try:
            sampled, lam, outages = _sample_case(case, config, attempt)
        except (CaseError, PerturbationError):
            attempt += 1
            discarded += 1
            continue
        attempt += 1
        sol = solve_power_flow(sampled, warm)
        if not sol.converged:
            sol = solve_power_flow(sampled, cold)  # heavy stress: retry cold
        if not sol.converged:
            discarded += 1
            continue
        scenarios.append(
            Scenario(
                case=sampled,
                solution=sol,
                meta=ScenarioMeta(lam=lam, outages=outages, seed=attempt - 1),
            )
        )
    return scenarios, discarded


def label_corrective_injections(
    case: NetworkCase,
    solution: PowerFlowSolution,
    candidates: tuple[int, ...],
    alarm: float,
    step_dq: float = 0.1,
    budget: float = 5.0,
    options: PowerFlowOptions | None = None,
) -> dict[int, float] | None:
    """Training target: per-candidate corrective injections, or None when the
    greedy oracle cannot secure the state within budget ("unlabelable")."""
    ybus = build_ybus(case)
    f = compute_f_matrix(ybus, partition_buses(case))
    report = compute_l_index(
        solution, f, Thresholds(alarm=alarm, emergency=max(2 * alarm, alarm + 0.1))
    )
    if report.l_max < alarm:
        return {int(c): 0.0 for c in candidates}
    result = greedy_reactive_injections(
        case, solution, candidates, alarm, step_dq, budget, options, f=f
    )
    if not result.secured:
        return None
    return {int(c): float(result.injections.get(c, 0.0)) for c in candidates}


@dataclass(frozen=True)
class LabeledSample:
    measurement: MeasurementVector
    l_max_true: float
    l_sum_true: float
    dq_star: dict[int, float] | None  # None = unlabelable within budget
    meta: ScenarioMeta

    def to_dict(self) -> dict:
        return {
            "measurement": self.measurement.to_dict(),
            "l_max_true": self.l_max_true,
            "l_sum_true": self.l_sum_true,
            "dq_star": None
            if self.dq_star is None
            else {str(k): v for k, v in sorted(self.dq_star.items())},
            "meta": self.meta.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LabeledSample":
        dq = d.get("dq_star")
        return cls(
            measurement=MeasurementVector.from_dict(d["measurement"]),
            l_max_true=float(d["l_max_true"]),
            l_sum_true=float(d["l_sum_true"]),
            dq_star=None if dq is None else {int(k): float(v) for k, v in dq.items()},
            meta=ScenarioMeta.from_dict(d["meta"]),
        )


@dataclass(frozen=True)
class LabelingConfig:
    alarm: float = 0.5
    step_dq: float = 0.1
    budget: float = 5.0

    def to_dict(self) -> dict:
        return {"alarm": self.alarm, "step_dq": self.step_dq, "budget": self.budget}

    @classmethod
    def from_dict(cls, d: dict) -> "LabelingConfig":
        return cls(
            alarm=float(d.get("alarm", 0.5)),
            step_dq=float(d.get("step_dq", 0.1)),
            budget=float(d.get("budget", 5.0)),
        )


@dataclass
class Dataset:
    schema: MeasurementSchema
    scenario_config: ScenarioConfig
    labeling: LabelingConfig
    samples: list[LabeledSample] = field(default_factory=list)
    discarded: int = 0
    unlabelable: int = 0

    @property
    def convergence_rate(self) -> float:
        total = len(self.samples) + self.discarded
        return len(self.samples) / total if total else 1.0

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for s in self.samples:
            h.update(
                json.dumps(s.to_dict(), sort_keys=True, separators=(",", ":")).encode()
            )
        return h.hexdigest()[:16]

    def header(self) -> dict:
        return {
            "kind": "gridpilot-dataset",
            "schema": self.schema.to_manifest(),
            "scenario_config": self.scenario_config.to_dict(),
            "labeling": self.labeling.to_dict(),
            "n_samples": len(self.samples),
            "discarded": self.discarded,
            "unlabelable": self.unlabelable,
            "convergence_rate": self.convergence_rate,
            "content_hash": self.content_hash(),
        }

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w") as fh:
            fh.write(
                json.dumps(self.header(), sort_keys=True, separators=(",", ":"))
                + "\n"
            )
            for s in self.samples:
                fh.write(
                    json.dumps(s.to_dict(), sort_keys=True, separators=(",", ":"))
                    + "\n"
                )

    @classmethod
    def load(cls, path: str | Path) -> "Dataset":
        path = Path(path)
        with path.open() as fh:
            header = json.loads(fh.readline())
            if header.get("kind") != "gridpilot-dataset":
                raise ScenarioError(f"{path} is not a dataset file")
            samples = [LabeledSample.from_dict(json.loads(line)) for line in fh]
        return cls(
            schema=MeasurementSchema.from_manifest(header["schema"]),
            scenario_config=ScenarioConfig.from_dict(header["scenario_config"]),
            labeling=LabelingConfig.from_dict(header["labeling"]),
            samples=samples,
            discarded=int(header.get("discarded", 0)),
            unlabelable=int(header.get("unlabelable", 0)),
        )

    def export_csv(self, path: str | Path) -> None:
        """Feature matrix plus targets for external tools."""
        path = Path(path)
        candidates = sorted(self.scenario_config.injection_candidates)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                list(self.schema.feature_names)
                + ["l_max_true", "l_sum_true"]
                + [f"dq_star:{c}" for c in candidates]
            )
            for s in self.samples:
                dq = ["" for _ in candidates]
                if s.dq_star is not None:
                    dq = [repr(s.dq_star.get(c, 0.0)) for c in candidates]
                writer.writerow(
                    [repr(float(x)) for x in s.measurement.features]
                    + [repr(s.l_max_true), repr(s.l_sum_true)]
                    + dq
                )


def build_dataset(
    case: NetworkCase,
    config: ScenarioConfig,
    count: int,
    labeling: LabelingConfig = LabelingConfig(),
    options: PowerFlowOptions | None = None,
    thresholds: Thresholds | None = None,
) -> Dataset:
    """Sample, assess, and label ``count`` scenarios into a dataset."""
    if not config.injection_candidates:
        raise ScenarioError("injection_candidates must be non-empty for labeling")
    schema = build_schema(case)
    thresholds = thresholds or Thresholds(
        alarm=labeling.alarm, emergency=max(2 * labeling.alarm, labeling.alarm + 0.1)
    )
    scenarios, discarded = generate_scenarios(case, config, count, options)
    ds = Dataset(
        schema=schema, scenario_config=config, labeling=labeling, discarded=discarded
    )
    f_cache: dict[tuple[str, ...], object] = {}
    for sc in scenarios:
        key = sc.meta.outages
        f = f_cache.get(key)
        if f is None:
            f = compute_f_matrix(build_ybus(sc.case), partition_buses(sc.case))
            f_cache[key] = f
        report = compute_l_index(sc.solution, f, thresholds)
        measurement = extract_features(sc.case, sc.solution, schema)
        if report.l_max < labeling.alarm:
            dq = {int(c): 0.0 for c in config.injection_candidates}
        else:
            result = greedy_reactive_injections(
                sc.case,
                sc.solution,
                config.injection_candidates,
                labeling.alarm,
                labeling.step_dq,
                labeling.budget,
                options,
                f=f,
            )
            if result.secured:
                dq = {
                    int(c): float(result.injections.get(c, 0.0))
                    for c in config.injection_candidates
                }
            else:
                dq = None
                ds.unlabelable += 1
        ds.samples.append(
            LabeledSample(
                measurement=measurement,
                l_max_true=report.l_max,
                l_sum_true=report.l_sum,
                dq_star=dq,
                meta=sc.meta,
            )
        )
    return ds
