"""Command-line interface.

    gridpilot --case ieee118 --seed 7 --out runs/demo <command> [options]

``--case`` accepts a bundled name (ieee14, ieee30, ieee118) or a path to a
.cdf / CaseJSON file. Commands that write files put them under ``--out``
(default ./runs) together with a manifest of the full configuration.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import click

from . import __version__
from .caseio import load_bundled_case, load_case
from .control import ControlConfig
from .dispatch import (
    AdversaryConfig,
    Engine,
    EngineConfig,
    Mode,
    run_episode,
)
from .experiments import ExperimentSpec, run_experiment
from .learner import ModelBundle, evaluate_model, fit_bundle_from_dataset
from .network import NetworkCase
from .powerflow import PowerFlowOptions, solve_power_flow
from .scenarios import Dataset, LabelingConfig, ScenarioConfig, build_dataset
from .stability import Thresholds, assess, find_loadability_limit
from .telemetry import CorruptionConfig, CorruptionMode, GapFill
from .trees import TreeHyperparams


def _resolve_case(ref: str) -> NetworkCase:
    if Path(ref).exists():
        return load_case(ref)
    try:
        return load_bundled_case(ref)
    except FileNotFoundError:
        raise click.ClickException(
            f"{ref!r} is neither a file nor a bundled case name"
        )


def _manifest(out: Path, command: str, config: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(
        json.dumps(
            {"command": command, "version": __version__, "config": config},
            sort_keys=True,
            indent=1,
        )
        + "\n"
    )


@click.group()
@click.option("--case", "case_ref", default="ieee14", show_default=True,
              help="Bundled case name or case file path.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", default="runs", show_default=True,
              type=click.Path(path_type=Path))
@click.version_option(__version__)
@click.pass_context
def main(ctx: click.Context, case_ref: str, seed: int, out_dir: Path) -> None:
    """Desk-scale grid security sandbox and dispatcher autopilot."""
    ctx.ensure_object(dict)
    ctx.obj["case_ref"] = case_ref
    ctx.obj["seed"] = seed
    ctx.obj["out"] = out_dir


@main.command()
@click.option("--tolerance", default=1e-8, show_default=True)
@click.option("--max-iter", default=20, show_default=True)
@click.option("--q-limits/--no-q-limits", default=False, show_default=True)
@click.pass_context
def solve(ctx, tolerance: float, max_iter: int, q_limits: bool) -> None:
    """Run one power flow and print the summary."""
    case = _resolve_case(ctx.obj["case_ref"])
    t0 = time.perf_counter()
    sol = solve_power_flow(
        case,
        PowerFlowOptions(
            tolerance=tolerance, max_iter=max_iter, enforce_q_limits=q_limits
        ),
    )
    dt = time.perf_counter() - t0
    click.echo(
        json.dumps(
            {
                "case": case.name or ctx.obj["case_ref"],
                "converged": sol.converged,
                "iterations": sol.iterations,
                "max_mismatch": sol.max_mismatch,
                "p_slack": sol.p_slack,
                "q_slack": sol.q_slack,
                "total_loss": sol.total_loss,
                "failure": sol.failure,
                "runtime_s": round(dt, 6),
            },
            indent=1,
        )
    )
    if not sol.converged:
        sys.exit(1)


@main.command()
@click.option("--alarm", default=0.5, show_default=True)
@click.option("--emergency", default=0.8, show_default=True)
@click.pass_context
def lindex(ctx, alarm: float, emergency: float) -> None:
    """Security indices of the solved case."""
    case = _resolve_case(ctx.obj["case_ref"])
    sol = solve_power_flow(case)
    if not sol.converged:
        raise click.ClickException("power flow did not converge")
    report = assess(case, sol, Thresholds(alarm=alarm, emergency=emergency))
    click.echo(json.dumps(report.to_dict(), indent=1))


@main.command()
@click.option("--lambda-tol", default=1e-4, show_default=True)
@click.option("--q-limits/--no-q-limits", default=False, show_default=True)
@click.option("--reactive-only/--proportional", default=False, show_default=True,
              help="Grow only reactive demand instead of scaling P and Q.")
@click.pass_context
def scan(ctx, lambda_tol: float, q_limits: bool, reactive_only: bool) -> None:
    """Loadability scan along the uniform direction."""
    case = _resolve_case(ctx.obj["case_ref"])
    result = find_loadability_limit(
        case,
        lambda_tol=lambda_tol,
        reactive_only=reactive_only,
        options=PowerFlowOptions(enforce_q_limits=q_limits, max_iter=40),
    )
    click.echo(
        json.dumps(
            {
                "lambda_max": result.lambda_max,
                "trace": [list(p) for p in result.trace],
            },
            indent=1,
        )
    )


@main.command()
@click.option("--count", default=1000, show_default=True)
@click.option("--scale-min", default=0.8, show_default=True)
@click.option("--scale-max", default=1.2, show_default=True)
@click.option("--sigma", default=0.05, show_default=True)
@click.option("--outage-probability", default=0.0, show_default=True)
@click.option("--candidates", default="", help="Comma-separated bus ids.")
@click.option("--alarm", default=0.5, show_default=True)
@click.option("--step-dq", default=0.1, show_default=True)
@click.option("--budget", default=5.0, show_default=True)
@click.option("--name", default="dataset", show_default=True)
@click.pass_context
def datagen(ctx, count, scale_min, scale_max, sigma, outage_probability,
            candidates, alarm, step_dq, budget, name) -> None:
    """Sample, assess, and label scenarios into a dataset file."""
    case = _resolve_case(ctx.obj["case_ref"])
    if not candidates:
        raise click.ClickException("--candidates is required for labeling")
    cand = tuple(int(c) for c in candidates.split(","))
    config = ScenarioConfig(
        load_scale_range=(scale_min, scale_max),
        per_bus_sigma=sigma,
        outage_probability=outage_probability,
        injection_candidates=cand,
        rng_seed=ctx.obj["seed"],
    )
    labeling = LabelingConfig(alarm=alarm, step_dq=step_dq, budget=budget)
    t0 = time.perf_counter()
    dataset = build_dataset(case, config, count, labeling)
    dt = time.perf_counter() - t0
    out: Path = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.jsonl"
    dataset.save(path)
    dataset.export_csv(out / f"{name}.csv")
    _manifest(out, "datagen", {
        "case": ctx.obj["case_ref"], "count": count,
        "scenario_config": config.to_dict(), "labeling": labeling.to_dict(),
        "runtime_s": round(dt, 3), "header": dataset.header(),
    })
    click.echo(f"wrote {path} ({len(dataset.samples)} samples, "
               f"{dataset.unlabelable} unlabelable, {dt:.1f}s)")


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--max-depth", default=14, show_default=True)
@click.option("--min-leaf", default=3, show_default=True)
@click.option("--window", default=10000, show_default=True)
@click.option("--augment-rate", default=0.0, show_default=True,
              help="Train with corrupted copies at this gap rate.")
@click.option("--name", default="model", show_default=True)
@click.pass_context
def train(ctx, dataset_path, max_depth, min_leaf, window, augment_rate, name) -> None:
    """Fit the indicator and injection trees on a dataset."""
    dataset = Dataset.load(dataset_path)
    hp = TreeHyperparams(max_depth=max_depth, min_leaf=min_leaf)
    augment = None
    if augment_rate > 0:
        import numpy as np

        fill = np.mean(
            np.asarray([s.measurement.features for s in dataset.samples]), axis=0
        )
        augment = CorruptionConfig(
            rate=augment_rate,
            mode=CorruptionMode.GAP,
            gap_fill=GapFill.TRAINING_MEAN,
            rng_seed=ctx.obj["seed"],
            fill_values=fill,
        )
    t0 = time.perf_counter()
    bundle = fit_bundle_from_dataset(
        dataset, hp, hp, window_size=window, corruption_augment=augment
    )
    dt = time.perf_counter() - t0
    out: Path = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.json"
    bundle.save(path)
    _manifest(out, "train", {
        "dataset": str(dataset_path), "hyperparams": hp.to_dict(),
        "window": window, "augment_rate": augment_rate,
        "dataset_hash": dataset.content_hash(), "runtime_s": round(dt, 3),
    })
    click.echo(f"wrote {path} ({dt:.1f}s, "
               f"indicator depth {bundle.indicator_model.depth})")


@main.command("eval")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--corruption-rate", default=0.0, show_default=True)
@click.option("--mode", default="gap", show_default=True,
              type=click.Choice([m.value for m in CorruptionMode]))
@click.option("--holdout", default=0.2, show_default=True)
@click.pass_context
def eval_cmd(ctx, dataset_path, model_path, corruption_rate, mode, holdout) -> None:
    """Score a model on the dataset's holdout tail."""
    dataset = Dataset.load(dataset_path)
    bundle = ModelBundle.load(model_path)
    split = max(1, int(len(dataset.samples) * (1.0 - holdout)))
    test = dataset.samples[split:]
    corruption = None
    if corruption_rate > 0:
        import numpy as np

        fill = np.mean(
            np.asarray(
                [s.measurement.features for s in dataset.samples[:split]]
            ),
            axis=0,
        )
        corruption = CorruptionConfig(
            rate=corruption_rate,
            mode=CorruptionMode(mode),
            gap_fill=GapFill.TRAINING_MEAN,
            rng_seed=ctx.obj["seed"],
            fill_values=fill,
        )
    case = _resolve_case(ctx.obj["case_ref"])
    report = evaluate_model(bundle, test, corruption=corruption, base_case=case)
    click.echo(report.table())
    out: Path = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    (out / "eval.json").write_text(json.dumps(report.to_dict(), indent=1) + "\n")


@main.command("control-demo")
@click.option("--scenarios", default=20, show_default=True)
@click.option("--candidates", default="", help="Comma-separated bus ids.")
@click.option("--scale-min", default=1.0, show_default=True)
@click.option("--scale-max", default=1.6, show_default=True)
@click.option("--alarm", default=0.5, show_default=True)
@click.pass_context
def control_demo(ctx, scenarios, candidates, scale_min, scale_max, alarm) -> None:
    """Greedy corrective-control traces on sampled alarm scenarios."""
    if not candidates:
        raise click.ClickException("--candidates is required")
    case = _resolve_case(ctx.obj["case_ref"])
    spec = ExperimentSpec(
        name="control-demo",
        case_path=ctx.obj["case_ref"],
        out_dir=str(ctx.obj["out"]),
        seed=ctx.obj["seed"],
        params={
            "scenarios": scenarios,
            "alarm_scenarios": scenarios,
            "candidates": [int(c) for c in candidates.split(",")],
            "load_scale_range": (scale_min, scale_max),
            "alarm": alarm,
        },
    )
    out = run_experiment(spec, case)
    click.echo(f"wrote {out}/lsum_traces.csv and {out}/before_after.csv")


@main.command()
@click.option("--ticks", default=30, show_default=True)
@click.option("--episodes", default=10, show_default=True)
@click.option("--mode", "modes", multiple=True,
              default=("monitor", "closed_loop"), show_default=True)
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--spike-probability", default=0.2, show_default=True)
@click.option("--candidates", default="", help="Fallback search buses.")
@click.pass_context
def episode(ctx, ticks, episodes, modes, model_path, spike_probability,
            candidates) -> None:
    """Seeded adversary episodes, one payoff row per (mode, seed)."""
    case = _resolve_case(ctx.obj["case_ref"])
    spec = ExperimentSpec(
        name="episode-batch",
        case_path=ctx.obj["case_ref"],
        out_dir=str(ctx.obj["out"]),
        model_path=model_path,
        seed=ctx.obj["seed"],
        params={
            "ticks": ticks,
            "episodes": episodes,
            "modes": list(modes),
            "load_spike_probability": spike_probability,
            "candidates": [int(c) for c in candidates.split(",")] if candidates else [],
        },
    )
    out = run_experiment(spec, case)
    click.echo(f"wrote {out}/episodes.csv")


@main.command("corruption-sweep")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--rates", default="0,0.05,0.1,0.2", show_default=True)
@click.pass_context
def corruption_sweep(ctx, dataset_path, model_path, rates) -> None:
    """Model vs analytic-route accuracy as telemetry corruption grows."""
    case = _resolve_case(ctx.obj["case_ref"])
    spec = ExperimentSpec(
        name="corruption-sweep",
        case_path=ctx.obj["case_ref"],
        out_dir=str(ctx.obj["out"]),
        dataset_path=dataset_path,
        model_path=model_path,
        seed=ctx.obj["seed"],
        params={"rates": [float(r) for r in rates.split(",")]},
    )
    out = run_experiment(spec, case)
    click.echo(f"wrote {out}/corruption_sweep.csv")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
@click.option("--mode", default="monitor", show_default=True,
              type=click.Choice([m.value for m in Mode]))
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--tick-interval", default=1.0, show_default=True,
              help="Seconds per automatic tick; 0 = manual clock.")
@click.option("--candidates", default="", help="Fallback search buses.")
@click.option("--alarm", default=0.5, show_default=True)
@click.option("--emergency", default=0.8, show_default=True)
@click.pass_context
def serve(ctx, host, port, mode, model_path, tick_interval, candidates,
          alarm, emergency) -> None:
    """Serve the live dispatch loop over HTTP."""
    import uvicorn

    from .service import create_app

    case = _resolve_case(ctx.obj["case_ref"])
    bundle = ModelBundle.load(model_path) if model_path else None
    engine = Engine(
        config=EngineConfig(
            control=ControlConfig(
                thresholds=Thresholds(alarm=alarm, emergency=emergency),
                candidates=tuple(int(c) for c in candidates.split(","))
                if candidates
                else (),
            )
        ),
        bundle=bundle,
    )
    app = create_app(case, engine, Mode(mode), tick_interval=tick_interval)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
