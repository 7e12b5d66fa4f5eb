"""Model bundle: fitting, online updates, evaluation, analytic baseline."""

import numpy as np
import pytest

from gridpilot.learner import (
    LearnerError,
    ModelBundle,
    analytic_indicator_estimate,
    evaluate_model,
    fit_bundle,
    fit_bundle_from_dataset,
    online_update,
)
from gridpilot.scenarios import (
    Dataset,
    LabeledSample,
    LabelingConfig,
    ScenarioConfig,
    ScenarioMeta,
    build_dataset,
)
from gridpilot.telemetry import (
    CorruptionConfig,
    CorruptionMode,
    GapFill,
    MeasurementVector,
    SchemaMismatch,
    build_schema,
)
from gridpilot.trees import TreeHyperparams

from conftest import make_five_bus

HP = TreeHyperparams(max_depth=6, min_leaf=2)


def synthetic_schema(n_features: int):
    from gridpilot.telemetry import MeasurementSchema

    return MeasurementSchema(
        schema_id=f"synthetic-{n_features}",
        feature_names=tuple(f"f{i}" for i in range(n_features)),
        nominal_values=np.zeros(n_features),
    )


def synthetic_samples(n: int, seed: int, regime: int = 0,
                      schema=None) -> list[LabeledSample]:
    """Deterministic targets from a known piecewise rule; regime switches
    the rule to emulate concept drift."""
    schema = schema or synthetic_schema(4)
    rng = np.random.default_rng(seed)
    levels = np.array([-0.8, -0.4, 0.2, 0.6, 1.0])
    out = []
    for _ in range(n):
        x = rng.choice(levels, size=4)
        # dyadic constants keep leaf means exact in binary float
        if regime == 0:
            l_max = 0.25 + 0.5 * (x[0] > 0) + 0.125 * (x[1] > 0)
        else:
            l_max = 0.875 - 0.5 * (x[0] > 0) - 0.25 * (x[2] > 0)
        dq = {7: 0.25 if l_max >= 0.5 else 0.0}
        out.append(
            LabeledSample(
                measurement=MeasurementVector(
                    schema_id=schema.schema_id,
                    features=x.astype(float),
                    corruption_mask=np.zeros(4, dtype=bool),
                ),
                l_max_true=float(l_max),
                l_sum_true=float(l_max) * 2,
                dq_star=dq,
                meta=ScenarioMeta(lam=1.0, outages=(), seed=0),
            )
        )
    return out


class TestFitBundle:
    def test_memorizes_deterministic_rule(self):
        schema = synthetic_schema(4)
        samples = synthetic_samples(400, seed=1, schema=schema)
        bundle = fit_bundle(samples, schema, (7,), HP, HP)
        probe = synthetic_samples(100, seed=2, schema=schema)
        report = evaluate_model(bundle, probe)
        assert report.indicator.rmse == 0.0
        assert report.injections.rmse == 0.0

    def test_schema_mismatch_rejected(self):
        schema = synthetic_schema(4)
        samples = synthetic_samples(50, seed=1, schema=schema)
        with pytest.raises(SchemaMismatch):
            fit_bundle(samples, synthetic_schema(5), (7,), HP, HP)

    def test_serialization_roundtrip_predicts_identically(self, tmp_path):
        schema = synthetic_schema(4)
        samples = synthetic_samples(300, seed=3, schema=schema)
        bundle = fit_bundle(samples, schema, (7,), HP, HP)
        path = tmp_path / "bundle.json"
        bundle.save(path)
        clone = ModelBundle.load(path)
        for s in synthetic_samples(50, seed=4, schema=schema):
            assert clone.predict_indicator(s.measurement) == bundle.predict_indicator(
                s.measurement
            )
            assert clone.predict_injections(s.measurement) == bundle.predict_injections(
                s.measurement
            )
        # and the serialized form is stable
        path2 = tmp_path / "bundle2.json"
        clone.save(path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_trees_share_schema_id(self):
        schema = synthetic_schema(4)
        bundle = fit_bundle(synthetic_samples(200, seed=5, schema=schema),
                            schema, (7,), HP, HP)
        assert bundle.indicator_model.schema_id == schema.schema_id
        assert all(
            t.schema_id == schema.schema_id
            for t in bundle.injection_models.values()
        )


class TestOnlineUpdate:
    def test_empty_update_preserves_predictions(self):
        schema = synthetic_schema(4)
        samples = synthetic_samples(300, seed=6, schema=schema)
        bundle = fit_bundle(samples, schema, (7,), HP, HP, window_size=500)
        updated = online_update(bundle, [])
        probes = synthetic_samples(80, seed=7, schema=schema)
        for p in probes:
            assert updated.predict_indicator(p.measurement) == bundle.predict_indicator(
                p.measurement
            )

    def test_window_eviction_arithmetic(self):
        schema = synthetic_schema(4)
        first = synthetic_samples(600, seed=8, schema=schema)
        bundle = fit_bundle(first, schema, (7,), HP, HP, window_size=1000)
        extra = synthetic_samples(900, seed=9, schema=schema)
        updated = online_update(bundle, extra, window_size=1000)
        assert updated.training_meta.n_window == 1000
        # the retained window is exactly the newest 1000 samples
        merged = list(first) + list(extra)
        expect = merged[-1000:]
        assert [tuple(s.measurement.features) for s in updated.window] == [
            tuple(s.measurement.features) for s in expect
        ]

    def test_concept_drift_recovery(self):
        """After the target rule switches, a refit on the recent window
        beats the stale model on the new regime."""
        schema = synthetic_schema(4)
        old = synthetic_samples(500, seed=10, regime=0, schema=schema)
        bundle = fit_bundle(old, schema, (7,), HP, HP, window_size=600)
        new = synthetic_samples(500, seed=11, regime=1, schema=schema)
        updated = online_update(bundle, new, window_size=500)
        probe = synthetic_samples(200, seed=12, regime=1, schema=schema)
        stale = evaluate_model(bundle, probe)
        fresh = evaluate_model(updated, probe)
        assert fresh.indicator.rmse < stale.indicator.rmse


class TestEvaluate:
    def test_empty_test_set_rejected(self):
        schema = synthetic_schema(4)
        bundle = fit_bundle(synthetic_samples(100, seed=13, schema=schema),
                            schema, (7,), HP, HP)
        with pytest.raises(LearnerError, match="empty"):
            evaluate_model(bundle, [])

    def test_zero_rate_corruption_bitwise_identical(self):
        schema = synthetic_schema(4)
        samples = synthetic_samples(300, seed=14, schema=schema)
        bundle = fit_bundle(samples[:200], schema, (7,), HP, HP)
        clean = evaluate_model(bundle, samples[200:])
        zero = evaluate_model(
            bundle, samples[200:], corruption=CorruptionConfig(rate=0.0)
        )
        assert zero.indicator.rmse == clean.indicator.rmse
        assert zero.injections.rmse == clean.injections.rmse

    def test_latency_positive_and_small(self):
        schema = synthetic_schema(4)
        samples = synthetic_samples(300, seed=15, schema=schema)
        bundle = fit_bundle(samples[:200], schema, (7,), HP, HP)
        report = evaluate_model(bundle, samples[200:])
        assert 0 < report.latency_s < 0.01

    def test_report_table_and_dict(self):
        schema = synthetic_schema(4)
        samples = synthetic_samples(260, seed=16, schema=schema)
        bundle = fit_bundle(samples[:200], schema, (7,), HP, HP)
        report = evaluate_model(bundle, samples[200:])
        text = report.table()
        assert "l_max" in text and "latency" in text
        d = report.to_dict()
        assert d["indicator"]["n"] == 60


class TestAnalyticBaseline:
    @pytest.fixture(scope="class")
    def five_bus_dataset(self):
        case = make_five_bus()
        config = ScenarioConfig(
            load_scale_range=(1.2, 2.4), per_bus_sigma=0.08,
            injection_candidates=(3, 4, 5), rng_seed=21,
        )
        ds = build_dataset(case, config, 80,
                           LabelingConfig(alarm=0.3, step_dq=0.05, budget=3.0))
        return case, ds

    def test_clean_estimate_recovers_truth(self, five_bus_dataset):
        case, ds = five_bus_dataset
        for s in ds.samples[:10]:
            est = analytic_indicator_estimate(
                case, s.measurement, ds.schema, s.meta.outages
            )
            assert est == pytest.approx(s.l_max_true, abs=1e-5)

    def test_corrupted_estimate_degrades_beyond_model(self, five_bus_dataset):
        case, ds = five_bus_dataset
        split = 60
        bundle = fit_bundle_from_dataset(
            Dataset(schema=ds.schema, scenario_config=ds.scenario_config,
                    labeling=ds.labeling, samples=ds.samples[:split]),
            HP, HP,
        )
        fill = np.mean(
            np.asarray([s.measurement.features for s in ds.samples[:split]]), axis=0
        )
        corruption = CorruptionConfig(
            rate=0.15, mode=CorruptionMode.GAP,
            gap_fill=GapFill.TRAINING_MEAN, rng_seed=5, fill_values=fill,
        )
        report = evaluate_model(
            bundle, ds.samples[split:], corruption=corruption, base_case=case
        )
        assert report.baseline is not None
        assert report.indicator.rmse < report.baseline.rmse
