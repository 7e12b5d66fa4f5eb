"""SCADA-style telemetry vectors: schema, extraction, and bad-data injection.

Feature ordering is fixed per topology and recorded in the schema manifest:

    [vm:<bus> ...] [p:<bus> ...] [q:<bus> ...] [flow:<k>:<from>-<to> ...]

i.e. per-bus voltage magnitudes, per-bus net P and Q injections, then the
from-side active power flow of every branch, all in case order and p.u.
Out-of-service branches report zero flow, keeping vector length constant
across outage scenarios of one topology.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .network import NetworkCase
from .powerflow import PowerFlowSolution, _injections, build_ybus


class SchemaMismatch(ValueError):
    """Measurement vector and consumer disagree on the feature schema."""


@dataclass(frozen=True, eq=False)
class MeasurementSchema:
    schema_id: str
    feature_names: tuple[str, ...]
    nominal_values: np.ndarray  # per-feature fallback for stuck channels

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def to_manifest(self) -> dict:
        return {
            "schema_id": self.schema_id,
            "feature_names": list(self.feature_names),
            "nominal_values": [float(x) for x in self.nominal_values],
        }

    @classmethod
    def from_manifest(cls, d: dict) -> "MeasurementSchema":
        return cls(
            schema_id=d["schema_id"],
            feature_names=tuple(d["feature_names"]),
            nominal_values=np.asarray(d["nominal_values"], dtype=float),
        )


def build_schema(case: NetworkCase) -> MeasurementSchema:
    names: list[str] = []
    nominals: list[float] = []
    for b in case.buses:
        names.append(f"vm:{b.id}")
        nominals.append(1.0)
    for prefix in ("p", "q"):
        for b in case.buses:
            names.append(f"{prefix}:{b.id}")
            nominals.append(0.0)
    for k, br in enumerate(case.branches):
        names.append(f"flow:{k}:{br.from_bus}-{br.to_bus}")
        nominals.append(0.0)
    digest = hashlib.sha256(
        json.dumps([case.base_mva, names], sort_keys=True).encode()
    ).hexdigest()[:16]
    return MeasurementSchema(
        schema_id=digest,
        feature_names=tuple(names),
        nominal_values=np.asarray(nominals),
    )


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    schema_id: str
    features: np.ndarray
    corruption_mask: np.ndarray  # bool, True where a channel is known bad

    def __post_init__(self) -> None:
        if self.features.shape != self.corruption_mask.shape:
            raise SchemaMismatch("features and mask lengths differ")

    def to_dict(self) -> dict:
        return {
            "schema_id": self.schema_id,
            "features": [float(x) for x in self.features],
            "corruption_mask": [bool(x) for x in self.corruption_mask],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MeasurementVector":
        return cls(
            schema_id=d["schema_id"],
            features=np.asarray(d["features"], dtype=float),
            corruption_mask=np.asarray(d["corruption_mask"], dtype=bool),
        )


def extract_features(
    case: NetworkCase,
    solution: PowerFlowSolution,
    schema: MeasurementSchema,
) -> MeasurementVector:
    """Telemetry snapshot of a converged state, in schema order, clean mask."""
    if not solution.converged:
        raise ValueError("cannot extract features from an unconverged state")
    expected = build_schema(case)
    if expected.schema_id != schema.schema_id:
        raise SchemaMismatch(
            f"case topology (schema {expected.schema_id}) does not match "
            f"schema {schema.schema_id}"
        )
    s = _injections(solution.v, build_ybus(case).matrix)
    flows = solution.branch_flows[:, 0].real
    features = np.concatenate([np.abs(solution.v), s.real, s.imag, flows])
    return MeasurementVector(
        schema_id=schema.schema_id,
        features=features,
        corruption_mask=np.zeros(features.size, dtype=bool),
    )


class CorruptionMode(str, Enum):
    GAP = "gap"
    NOISE = "noise"
    STUCK = "stuck"


class GapFill(str, Enum):
    TRAINING_MEAN = "training_mean"
    ZERO = "zero"
    LAST_VALUE = "last_value"


@dataclass(frozen=True, eq=False)
class CorruptionConfig:
    """Bad-data model: each feature is independently corrupted with
    probability ``rate``.

    Gap channels are replaced by the fill policy value (``fill_values``
    supplies the per-feature vector for TRAINING_MEAN and LAST_VALUE fills);
    Noise multiplies by 1 + N(0, noise_sigma); Stuck pins the channel at the
    schema's nominal value.
    """

    rate: float
    mode: CorruptionMode = CorruptionMode.GAP
    noise_sigma: float = 0.05
    gap_fill: GapFill = GapFill.ZERO
    rng_seed: int = 0
    fill_values: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("corruption rate must lie in [0, 1]")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        if (
            self.mode is CorruptionMode.GAP
            and self.gap_fill in (GapFill.TRAINING_MEAN, GapFill.LAST_VALUE)
            and self.fill_values is None
        ):
            raise ValueError(f"gap_fill {self.gap_fill.value} needs fill_values")

    def to_dict(self) -> dict:
        return {
            "rate": self.rate,
            "mode": self.mode.value,
            "noise_sigma": self.noise_sigma,
            "gap_fill": self.gap_fill.value,
            "rng_seed": self.rng_seed,
            "fill_values": None
            if self.fill_values is None
            else [float(x) for x in self.fill_values],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CorruptionConfig":
        fills = d.get("fill_values")
        return cls(
            rate=float(d["rate"]),
            mode=CorruptionMode(d.get("mode", "gap")),
            noise_sigma=float(d.get("noise_sigma", 0.05)),
            gap_fill=GapFill(d.get("gap_fill", "zero")),
            rng_seed=int(d.get("rng_seed", 0)),
            fill_values=None if fills is None else np.asarray(fills, dtype=float),
        )


def corrupt_measurements(
    m: MeasurementVector,
    config: CorruptionConfig,
    schema: MeasurementSchema | None = None,
    rng: np.random.Generator | None = None,
) -> MeasurementVector:
    """Independently corrupt each feature with probability ``config.rate``.

    Deterministic under ``config.rng_seed`` unless an explicit ``rng`` is
    passed (streamed use). Stuck mode needs the schema for nominal values.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    n = m.features.size
    hit = rng.random(n) < config.rate
    features = m.features.copy()
    if config.mode is CorruptionMode.GAP:
        if config.gap_fill is GapFill.ZERO:
            fill = np.zeros(n)
        else:
            if config.fill_values is None or config.fill_values.size != n:
                raise SchemaMismatch("fill_values length does not match vector")
            fill = config.fill_values
        features[hit] = fill[hit]
    elif config.mode is CorruptionMode.NOISE:
        noise = rng.normal(0.0, config.noise_sigma, size=n)
        features[hit] *= 1.0 + noise[hit]
    else:  # STUCK
        if schema is None:
            raise SchemaMismatch("stuck mode needs the schema for nominals")
        if schema.schema_id != m.schema_id:
            raise SchemaMismatch("schema does not match measurement vector")
        features[hit] = schema.nominal_values[hit]
    return MeasurementVector(
        schema_id=m.schema_id,
        features=features,
        corruption_mask=m.corruption_mask | hit,
    )
