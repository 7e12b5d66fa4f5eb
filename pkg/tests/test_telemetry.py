"""Measurement schema, feature extraction, and bad-data injection."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gridpilot.powerflow import solve_power_flow
from gridpilot.telemetry import (
    CorruptionConfig,
    CorruptionMode,
    GapFill,
    MeasurementSchema,
    MeasurementVector,
    SchemaMismatch,
    build_schema,
    corrupt_measurements,
    extract_features,
)

from conftest import make_two_bus


class TestSchema:
    def test_two_bus_vector_length(self, two_bus):
        schema = build_schema(two_bus)
        # 2 Vm + 2 P + 2 Q + 1 flow
        assert schema.n_features == 7
        sol = solve_power_flow(two_bus)
        m = extract_features(two_bus, sol, schema)
        assert m.features.size == 7
        assert not m.corruption_mask.any()

    def test_ieee14_vector_length_matches_manifest(self, ieee14):
        schema = build_schema(ieee14)
        assert schema.n_features == 14 + 28 + 20
        manifest = schema.to_manifest()
        assert len(manifest["feature_names"]) == 62
        assert manifest["feature_names"][0] == "vm:1"
        assert manifest["feature_names"][14] == "p:1"
        assert manifest["feature_names"][42].startswith("flow:0:")
        back = MeasurementSchema.from_manifest(manifest)
        assert back.schema_id == schema.schema_id

    def test_flat_no_load_features(self):
        case = make_two_bus(q=0.0)
        schema = build_schema(case)
        sol = solve_power_flow(case)
        m = extract_features(case, sol, schema)
        assert np.allclose(m.features[:2], 1.0)  # voltage magnitudes
        assert np.allclose(m.features[2:], 0.0)  # injections and flow

    def test_topology_mismatch_rejected(self, two_bus, five_bus):
        schema5 = build_schema(five_bus)
        sol = solve_power_flow(two_bus)
        with pytest.raises(SchemaMismatch):
            extract_features(two_bus, sol, schema5)

    def test_unconverged_rejected(self):
        case = make_two_bus(q=3.0)
        sol = solve_power_flow(case)
        with pytest.raises(ValueError, match="unconverged"):
            extract_features(case, sol, build_schema(case))


class TestCorruption:
    def _vector(self, n: int = 62, seed: int = 1) -> MeasurementVector:
        rng = np.random.default_rng(seed)
        return MeasurementVector(
            schema_id="s",
            features=rng.uniform(0.5, 1.5, size=n),
            corruption_mask=np.zeros(n, dtype=bool),
        )

    def test_rate_zero_is_identity(self):
        m = self._vector()
        out = corrupt_measurements(m, CorruptionConfig(rate=0.0, rng_seed=3))
        assert np.array_equal(out.features, m.features)
        assert not out.corruption_mask.any()

    def test_rate_one_gap_zero_fill_blanks_everything(self):
        m = self._vector()
        out = corrupt_measurements(
            m,
            CorruptionConfig(rate=1.0, mode=CorruptionMode.GAP,
                             gap_fill=GapFill.ZERO),
        )
        assert np.all(out.features == 0.0)
        assert out.corruption_mask.all()

    def test_binomial_mask_popcount(self):
        """Mean popcount over many draws sits inside the 3-sigma binomial
        band around n*rate (62 features, rate 0.1 -> mean 6.2)."""
        m = self._vector()
        rng = np.random.default_rng(12345)
        config = CorruptionConfig(rate=0.1, mode=CorruptionMode.GAP,
                                  gap_fill=GapFill.ZERO)
        counts = [
            int(corrupt_measurements(m, config, rng=rng).corruption_mask.sum())
            for _ in range(1000)
        ]
        mean = float(np.mean(counts))
        assert 5.7 <= mean <= 6.7

    def test_deterministic_under_seed(self):
        m = self._vector()
        config = CorruptionConfig(rate=0.3, mode=CorruptionMode.NOISE,
                                  noise_sigma=0.1, rng_seed=9)
        a = corrupt_measurements(m, config)
        b = corrupt_measurements(m, config)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.corruption_mask, b.corruption_mask)

    def test_training_mean_fill(self):
        m = self._vector()
        fill = np.full(m.features.size, 0.77)
        out = corrupt_measurements(
            m,
            CorruptionConfig(rate=1.0, mode=CorruptionMode.GAP,
                             gap_fill=GapFill.TRAINING_MEAN, fill_values=fill),
        )
        assert np.all(out.features == 0.77)

    def test_training_mean_requires_fill_values(self):
        with pytest.raises(ValueError, match="needs fill_values"):
            CorruptionConfig(rate=0.5, mode=CorruptionMode.GAP,
                             gap_fill=GapFill.TRAINING_MEAN)

    def test_stuck_pins_to_schema_nominal(self, two_bus):
        schema = build_schema(two_bus)
        sol = solve_power_flow(two_bus)
        m = extract_features(two_bus, sol, schema)
        out = corrupt_measurements(
            m,
            CorruptionConfig(rate=1.0, mode=CorruptionMode.STUCK),
            schema,
        )
        assert np.array_equal(out.features, schema.nominal_values)

    def test_stuck_without_schema_rejected(self):
        with pytest.raises(SchemaMismatch, match="stuck"):
            corrupt_measurements(
                self._vector(), CorruptionConfig(rate=0.5, mode=CorruptionMode.STUCK)
            )

    def test_noise_multiplies_only_hit_channels(self):
        m = self._vector()
        config = CorruptionConfig(rate=0.4, mode=CorruptionMode.NOISE,
                                  noise_sigma=0.2, rng_seed=5)
        out = corrupt_measurements(m, config)
        hit = out.corruption_mask
        assert np.array_equal(out.features[~hit], m.features[~hit])
        assert not np.array_equal(out.features[hit], m.features[hit])

    @given(rate=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
           seed=st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=40, deadline=None)
    def test_corruption_preserves_length_and_schema(self, rate, seed):
        m = self._vector()
        out = corrupt_measurements(
            m, CorruptionConfig(rate=rate, gap_fill=GapFill.ZERO, rng_seed=seed)
        )
        assert out.schema_id == m.schema_id
        assert out.features.size == m.features.size
        assert out.corruption_mask.size == m.corruption_mask.size

    def test_invalid_rate_rejected(self):
        with pytest.raises(ValueError):
            CorruptionConfig(rate=1.5)
        with pytest.raises(ValueError):
            CorruptionConfig(rate=0.5, noise_sigma=-1.0)

    def test_vector_roundtrips_through_dict(self):
        m = self._vector(n=5)
        back = MeasurementVector.from_dict(m.to_dict())
        assert back.schema_id == m.schema_id
        assert np.array_equal(back.features, m.features)
