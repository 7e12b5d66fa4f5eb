"""Surrogate models: trees predicting the security indicator and corrective
injections from telemetry, with sliding-window refits and evaluation.

"Online" here means a bounded training window refit on arrival of new
samples: deterministic, cheap at desk scale, and the swap is atomic (the
update builds a fresh bundle; readers keep the old one until it lands).

Evaluation under corruption also reports the error of the traditional
analytic route: rebuild the state a power-flow engine would infer from the
(corrupted) telemetry - measured injections as loads, measured magnitudes
as setpoints - and score the indicator computed from that implied state.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .network import BusKind, NetworkCase
from .powerflow import PowerFlowOptions, build_ybus, solve_power_flow
from .scenarios import Dataset, LabeledSample
from .stability import Thresholds, compute_f_matrix, compute_l_index, partition_buses
from .telemetry import (
    CorruptionConfig,
    MeasurementSchema,
    MeasurementVector,
    SchemaMismatch,
    corrupt_measurements,
)
from .trees import RegressionTree, TreeHyperparams, fit_tree_matrix


class LearnerError(ValueError):
    pass


@dataclass(frozen=True)
class TrainingMeta:
    dataset_hash: str
    window_size: int
    n_window: int
    created_at: str | None = None  # informational; None keeps bundles bit-stable

    def to_dict(self) -> dict:
        return {
            "dataset_hash": self.dataset_hash,
            "window_size": self.window_size,
            "n_window": self.n_window,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainingMeta":
        return cls(
            dataset_hash=d["dataset_hash"],
            window_size=int(d["window_size"]),
            n_window=int(d["n_window"]),
            created_at=d.get("created_at"),
        )


@dataclass(frozen=True, eq=False)
class ModelBundle:
    """Indicator tree plus one injection tree per candidate bus.

    The bundle retains its training window so online updates can refit; all
    member trees share the window's measurement schema.
    """

    indicator_model: RegressionTree
    injection_models: dict[int, RegressionTree]
    schema: MeasurementSchema
    corruption_augment: CorruptionConfig | None
    hyperparams_indicator: TreeHyperparams
    hyperparams_injection: TreeHyperparams
    training_meta: TrainingMeta
    window: tuple[LabeledSample, ...]

    @property
    def candidates(self) -> tuple[int, ...]:
        return tuple(sorted(self.injection_models))

    def predict_indicator(self, m: MeasurementVector) -> float:
        """Masked channels are integrated out (see the trees' masked walk);
        clean vectors take the plain single-path route."""
        self._check(m)
        if m.corruption_mask.any():
            return self.indicator_model.predict_one_masked(
                m.features, m.corruption_mask
            )
        return self.indicator_model.predict_one(m.features)

    def predict_injections(self, m: MeasurementVector) -> dict[int, float]:
        self._check(m)
        if m.corruption_mask.any():
            return {
                bus: tree.predict_one_masked(m.features, m.corruption_mask)
                for bus, tree in sorted(self.injection_models.items())
            }
        return {
            bus: tree.predict_one(m.features)
            for bus, tree in sorted(self.injection_models.items())
        }

    def _check(self, m: MeasurementVector) -> None:
        if m.schema_id != self.schema.schema_id:
            raise SchemaMismatch(
                f"vector schema {m.schema_id} != model schema {self.schema.schema_id}"
            )

    def to_dict(self) -> dict:
        return {
            "kind": "gridpilot-model-bundle",
            "indicator_model": self.indicator_model.to_dict(),
            "injection_models": {
                str(bus): tree.to_dict()
                for bus, tree in sorted(self.injection_models.items())
            },
            "schema": self.schema.to_manifest(),
            "corruption_augment": None
            if self.corruption_augment is None
            else self.corruption_augment.to_dict(),
            "hyperparams_indicator": self.hyperparams_indicator.to_dict(),
            "hyperparams_injection": self.hyperparams_injection.to_dict(),
            "training_meta": self.training_meta.to_dict(),
            "window": [s.to_dict() for s in self.window],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
        )

    @classmethod
    def from_dict(cls, d: dict) -> "ModelBundle":
        if d.get("kind") != "gridpilot-model-bundle":
            raise LearnerError("not a model bundle document")
        aug = d.get("corruption_augment")
        return cls(
            indicator_model=RegressionTree.from_dict(d["indicator_model"]),
            injection_models={
                int(bus): RegressionTree.from_dict(tree)
                for bus, tree in d["injection_models"].items()
            },
            schema=MeasurementSchema.from_manifest(d["schema"]),
            corruption_augment=None if aug is None else CorruptionConfig.from_dict(aug),
            hyperparams_indicator=TreeHyperparams.from_dict(d["hyperparams_indicator"]),
            hyperparams_injection=TreeHyperparams.from_dict(d["hyperparams_injection"]),
            training_meta=TrainingMeta.from_dict(d["training_meta"]),
            window=tuple(LabeledSample.from_dict(s) for s in d["window"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ModelBundle":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _window_hash(samples: Sequence[LabeledSample]) -> str:
    import hashlib

    h = hashlib.sha256()
    for s in samples:
        h.update(json.dumps(s.to_dict(), sort_keys=True, separators=(",", ":")).encode())
    return h.hexdigest()[:16]


def _training_matrices(
    samples: Sequence[LabeledSample],
    candidates: tuple[int, ...],
    augment: CorruptionConfig | None,
    schema: MeasurementSchema,
) -> tuple[np.ndarray, np.ndarray, dict[int, np.ndarray], np.ndarray]:
    """Feature matrix, indicator targets, per-bus injection targets, and a
    labeled-row mask. Corruption augmentation appends one corrupted copy of
    each sample with clean targets, teaching the trees to route around bad
    channels."""
    x_rows = [s.measurement.features for s in samples]
    y_lmax = [s.l_max_true for s in samples]
    labeled = [s.dq_star is not None for s in samples]
    dq_rows = {
        c: [0.0 if s.dq_star is None else s.dq_star.get(c, 0.0) for s in samples]
        for c in candidates
    }
    if augment is not None:
        rng = np.random.default_rng(augment.rng_seed)
        for s in samples:
            corrupted = corrupt_measurements(s.measurement, augment, schema, rng=rng)
            x_rows.append(corrupted.features)
            y_lmax.append(s.l_max_true)
            labeled.append(s.dq_star is not None)
            for c in candidates:
                dq_rows[c].append(
                    0.0 if s.dq_star is None else s.dq_star.get(c, 0.0)
                )
    x = np.asarray(x_rows, dtype=float)
    return (
        x,
        np.asarray(y_lmax, dtype=float),
        {c: np.asarray(v, dtype=float) for c, v in dq_rows.items()},
        np.asarray(labeled, dtype=bool),
    )


def fit_bundle(
    samples: Sequence[LabeledSample],
    schema: MeasurementSchema,
    candidates: tuple[int, ...],
    hyperparams_indicator: TreeHyperparams = TreeHyperparams(),
    hyperparams_injection: TreeHyperparams = TreeHyperparams(),
    window_size: int = 10_000,
    corruption_augment: CorruptionConfig | None = None,
) -> ModelBundle:
    """Fit indicator and injection trees on (the tail of) the sample list."""
    window = tuple(samples[-window_size:])
    if not window:
        raise LearnerError("empty dataset")
    for s in window:
        if s.measurement.schema_id != schema.schema_id:
            raise SchemaMismatch("sample schema does not match bundle schema")
    candidates = tuple(sorted(candidates))
    x, y_lmax, dq, labeled = _training_matrices(
        window, candidates, corruption_augment, schema
    )
    indicator = fit_tree_matrix(x, y_lmax, hyperparams_indicator, schema.schema_id)
    injections: dict[int, RegressionTree] = {}
    for c in candidates:
        injections[c] = fit_tree_matrix(
            x[labeled], dq[c][labeled], hyperparams_injection, schema.schema_id
        )
    return ModelBundle(
        indicator_model=indicator,
        injection_models=injections,
        schema=schema,
        corruption_augment=corruption_augment,
        hyperparams_indicator=hyperparams_indicator,
        hyperparams_injection=hyperparams_injection,
        training_meta=TrainingMeta(
            dataset_hash=_window_hash(window),
            window_size=window_size,
            n_window=len(window),
        ),
        window=window,
    )


def fit_bundle_from_dataset(
    dataset: Dataset,
    hyperparams_indicator: TreeHyperparams = TreeHyperparams(),
    hyperparams_injection: TreeHyperparams = TreeHyperparams(),
    window_size: int = 10_000,
    corruption_augment: CorruptionConfig | None = None,
) -> ModelBundle:
    return fit_bundle(
        dataset.samples,
        dataset.schema,
        tuple(dataset.scenario_config.injection_candidates),
        hyperparams_indicator,
        hyperparams_injection,
        window_size,
        corruption_augment,
    )


def online_update(
    bundle: ModelBundle,
    new_samples: Sequence[LabeledSample],
    window_size: int | None = None,
) -> ModelBundle:
    """Append samples, evict beyond the window, refit every tree.

    Returns a fresh bundle; the caller swaps it in. With no new samples the
    refit reproduces the same trees (fitting is deterministic).
    """
    window_size = window_size or bundle.training_meta.window_size
    merged = list(bundle.window) + list(new_samples)
    return fit_bundle(
        merged,
        bundle.schema,
        bundle.candidates,
        bundle.hyperparams_indicator,
        bundle.hyperparams_injection,
        window_size,
        bundle.corruption_augment,
    )


@dataclass(frozen=True)
class MetricBlock:
    rmse: float
    relative_rmse: float  # rmse / std of true targets
    mae: float
    n: int

    def to_dict(self) -> dict:
        return {
            "rmse": self.rmse,
            "relative_rmse": self.relative_rmse,
            "mae": self.mae,
            "n": self.n,
        }


def _metrics(pred: np.ndarray, true: np.ndarray) -> MetricBlock:
    if pred.size == 0:
        raise LearnerError("empty evaluation set")
    err = pred - true
    rmse = float(np.sqrt(np.mean(err**2)))
    std = float(np.std(true))
    return MetricBlock(
        rmse=rmse,
        relative_rmse=rmse / std if std > 0 else (0.0 if rmse == 0 else np.inf),
        mae=float(np.mean(np.abs(err))),
        n=int(pred.size),
    )


@dataclass(frozen=True)
class EvalReport:
    """Held-out metrics; ``indicator`` is the headline block.

    ``injections`` pools residuals over every (sample, candidate-bus) pair
    and normalizes by the pooled target deviation, so thinly-used candidate
    buses cannot blow up the relative figure. ``baseline`` carries the
    analytic route's indicator metrics when evaluating under corruption.
    """

    indicator: MetricBlock
    injections: MetricBlock | None
    per_bus: dict[int, MetricBlock]
    latency_s: float
    corruption: CorruptionConfig | None
    baseline: MetricBlock | None

    @property
    def rmse(self) -> float:
        return self.indicator.rmse

    @property
    def relative_rmse(self) -> float:
        return self.indicator.relative_rmse

    def to_dict(self) -> dict:
        return {
            "indicator": self.indicator.to_dict(),
            "injections": None if self.injections is None else self.injections.to_dict(),
            "per_bus": {str(b): m.to_dict() for b, m in sorted(self.per_bus.items())},
            "latency_s": self.latency_s,
            "corruption": None if self.corruption is None else self.corruption.to_dict(),
            "baseline": None if self.baseline is None else self.baseline.to_dict(),
        }

    def table(self) -> str:
        lines = [
            f"{'target':<14} {'rmse':>10} {'rel rmse':>10} {'mae':>10} {'n':>7}",
            f"{'l_max':<14} {self.indicator.rmse:>10.5f} "
            f"{self.indicator.relative_rmse:>10.4f} {self.indicator.mae:>10.5f} "
            f"{self.indicator.n:>7}",
        ]
        if self.injections is not None:
            lines.append(
                f"{'dq (pooled)':<14} {self.injections.rmse:>10.5f} "
                f"{self.injections.relative_rmse:>10.4f} "
                f"{self.injections.mae:>10.5f} {self.injections.n:>7}"
            )
        if self.baseline is not None:
            lines.append(
                f"{'analytic l_max':<14} {self.baseline.rmse:>10.5f} "
                f"{self.baseline.relative_rmse:>10.4f} {self.baseline.mae:>10.5f} "
                f"{self.baseline.n:>7}"
            )
        lines.append(f"latency: {self.latency_s * 1e3:.3f} ms/vector")
        return "\n".join(lines)


def evaluate_model(
    bundle: ModelBundle,
    samples: Sequence[LabeledSample],
    corruption: CorruptionConfig | None = None,
    base_case: NetworkCase | None = None,
    thresholds: Thresholds = Thresholds(),
) -> EvalReport:
    """Score the bundle on (optionally corrupted) features vs clean targets.

    When ``corruption`` is given and ``base_case`` is known, the analytic
    baseline runs the implied-state route on the same corrupted vectors.
    """
    if not samples:
        raise LearnerError("empty evaluation set")
    vectors: list[MeasurementVector] = []
    if corruption is not None and corruption.rate > 0:
        rng = np.random.default_rng(corruption.rng_seed)
        for s in samples:
            vectors.append(
                corrupt_measurements(s.measurement, corruption, bundle.schema, rng=rng)
            )
    else:
        vectors = [s.measurement for s in samples]

    t0 = time.perf_counter()
    pred_lmax = np.array([bundle.predict_indicator(m) for m in vectors])
    latency = (time.perf_counter() - t0) / len(vectors)
    true_lmax = np.array([s.l_max_true for s in samples])
    indicator = _metrics(pred_lmax, true_lmax)

    labeled_idx = [i for i, s in enumerate(samples) if s.dq_star is not None]
    injections = None
    per_bus: dict[int, MetricBlock] = {}
    if labeled_idx and bundle.injection_models:
        dq_preds = [bundle.predict_injections(vectors[i]) for i in labeled_idx]
        preds, trues = [], []
        for c in bundle.candidates:
            p = np.array([d[c] for d in dq_preds])
            t = np.array([samples[i].dq_star.get(c, 0.0) for i in labeled_idx])
            per_bus[c] = _metrics(p, t)
            preds.append(p)
            trues.append(t)
        injections = _metrics(np.concatenate(preds), np.concatenate(trues))

    baseline = None
    if corruption is not None and base_case is not None:
        est = np.array(
            [
                analytic_indicator_estimate(base_case, m, bundle.schema, s.meta.outages)
                for m, s in zip(vectors, samples)
            ]
        )
        baseline = _metrics(est, true_lmax)

    return EvalReport(
        indicator=indicator,
        injections=injections,
        per_bus=per_bus,
        latency_s=latency,
        corruption=corruption,
        baseline=baseline,
    )


def analytic_indicator_estimate(
    base_case: NetworkCase,
    m: MeasurementVector,
    schema: MeasurementSchema,
    outages: tuple[str, ...] = (),
    options: PowerFlowOptions | None = None,
) -> float:
    """Traditional route: indicator from the state implied by telemetry.

    Loads at non-generator buses are set from the measured injections,
    generator setpoints from the measured magnitudes (the breaker states in
    ``outages`` are assumed known to the EMS), then a power flow rebuilds
    the state and the indicator formula is evaluated on it. Bad channels
    propagate undamped, which is the point of the comparison. A diverged
    rebuild is scored from the last iterate, capped at 10.
    """
    if m.schema_id != schema.schema_id:
        raise SchemaMismatch("vector schema does not match")
    options = options or PowerFlowOptions(max_iter=15)
    n = base_case.n
    vm = m.features[:n]
    p_inj = m.features[n : 2 * n]
    q_inj = m.features[2 * n : 3 * n]

    case = base_case
    if outages:
        from .network import Perturbation, apply_perturbation

        pert = Perturbation(
            branch_outages=frozenset(
                int(o.split(":")[1]) for o in outages if o.startswith("branch:")
            ),
            generator_outages=frozenset(
                int(o.split(":")[1]) for o in outages if o.startswith("generator:")
            ),
        )
        try:
            case = apply_perturbation(base_case, pert)
        except Exception:
            case = base_case

    buses = []
    gen_p_target: dict[int, float] = {}
    gen_v_target: dict[int, float] = {}
    for i, b in enumerate(case.buses):
        if case.effective_kind(b) is BusKind.PQ:
            buses.append(replace(b, p_load=-p_inj[i], q_load=-q_inj[i]))
        else:
            buses.append(b)
            gen_v_target[b.id] = float(np.clip(vm[i], 0.5, 1.5))
            if case.effective_kind(b) is BusKind.PV:
                gen_p_target[b.id] = p_inj[i] + b.p_load
    gens = []
    seen_p: set[int] = set()
    for g in case.generators:
        if not g.in_service or g.bus not in gen_v_target:
            gens.append(g)
            continue
        p = g.p_gen
        if g.bus in gen_p_target and g.bus not in seen_p:
            p = gen_p_target[g.bus]
            seen_p.add(g.bus)
        elif g.bus in seen_p:
            p = 0.0
        gens.append(replace(g, p_gen=p, v_set=gen_v_target[g.bus]))
    implied = replace(case, buses=tuple(buses), generators=tuple(gens))

    ybus = build_ybus(implied)
    sol = solve_power_flow(implied, options, ybus)
    try:
        f = compute_f_matrix(ybus, partition_buses(implied))
    except Exception:
        return 10.0
    part = f.partition
    v = sol.v
    v_load = v[np.array(part.load_positions, dtype=int)]
    v_gen = v[np.array(part.generator_positions, dtype=int)]
    with np.errstate(all="ignore"):
        l_values = np.abs(1.0 - (f.entries @ v_gen) / v_load)
    l_values = l_values[np.isfinite(l_values)]
    if l_values.size == 0:
        return 10.0
    return float(min(l_values.max(), 10.0))
