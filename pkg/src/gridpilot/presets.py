"""Bundled, seeded experiment configurations.

These freeze the exact setups behind the packaged benchmark workflow so
runs are reproducible end to end: the large-system dataset distribution,
its candidate reactive-source buses, and the surrogate hyperparameters.
Candidate buses were picked by ranking local indices under uniform
reactive stress and keeping regional spread.
"""

from __future__ import annotations

from .scenarios import LabelingConfig, ScenarioConfig
from .telemetry import CorruptionConfig, CorruptionMode, GapFill
from .trees import TreeHyperparams

# Weak-region load buses of the large bundled system with controllable
# reactive sources attached (the dispatchable resource set).
IEEE118_CANDIDATES: tuple[int, ...] = (
    13, 20, 21, 22, 43, 44, 45, 51, 52, 53, 82, 83, 94, 95, 96,
)

IEEE118_DATASET_SEED = 118


def ieee118_scenario_config(seed: int = IEEE118_DATASET_SEED) -> ScenarioConfig:
    """Benchmark distribution: demand spread around base plus a dominant
    reactive-stress axis with per-bus hotspots, concentrating samples near
    the security boundary (about one state in five lands in alarm)."""
    return ScenarioConfig(
        load_scale_range=(0.8, 1.3),
        per_bus_sigma=0.04,
        outage_probability=0.001,
        injection_candidates=IEEE118_CANDIDATES,
        rng_seed=seed,
        scale_generation=True,
        q_stress_range=(3.0, 10.0),
        hotspot_probability=0.06,
        hotspot_range=(1.5, 2.5),
    )


def ieee118_labeling_config() -> LabelingConfig:
    """Coarser injection quantum than the library default: the benchmark
    targets span up to ~1.5 p.u., so 0.2 p.u. steps keep labels crisp and
    the oracle fast; recorded in every dataset header."""
    return LabelingConfig(alarm=0.5, step_dq=0.2, budget=5.0)


def indicator_hyperparams() -> TreeHyperparams:
    return TreeHyperparams(max_depth=16, min_leaf=3, min_variance_gain=1e-12)


def injection_hyperparams() -> TreeHyperparams:
    return TreeHyperparams(max_depth=16, min_leaf=3, min_variance_gain=1e-12)


def training_augmentation(fill_values, seed: int = 7) -> CorruptionConfig:
    """Train-time bad-data augmentation: one gap-corrupted copy per sample
    (clean targets), teaching trees to route around missing channels."""
    return CorruptionConfig(
        rate=0.1,
        mode=CorruptionMode.GAP,
        gap_fill=GapFill.TRAINING_MEAN,
        rng_seed=seed,
        fill_values=fill_values,
    )
