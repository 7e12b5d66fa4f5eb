"""Shared fixtures: tiny analytic networks and the bundled systems."""

from __future__ import annotations

import numpy as np
import pytest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion in the run summary."""
    rows = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance" in rep.nodeid:
                name = rep.nodeid.split("::")[-1]
                rows.append((name, status.upper()))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"{status:<6} {name}")

from gridpilot.caseio import load_bundled_case
from gridpilot.network import Branch, Bus, BusKind, Generator, NetworkCase


def make_two_bus(q: float = 1.0, x: float = 0.1, p: float = 0.0) -> NetworkCase:
    """Slack feeding one PQ bus over a lossless line; closed-form solvable."""
    return NetworkCase(
        base_mva=100.0,
        buses=(
            Bus(id=1, kind=BusKind.SLACK, v_mag=1.0, base_kv=138.0,
                v_min=0.4, v_max=1.5),
            Bus(id=2, kind=BusKind.PQ, p_load=p, q_load=q, base_kv=138.0,
                v_min=0.4, v_max=1.5),
        ),
        branches=(Branch(from_bus=1, to_bus=2, r=0.0, x=x),),
        generators=(Generator(bus=1, v_set=1.0),),
        name="two-bus",
    )


def make_five_bus(load_scale: float = 1.0) -> NetworkCase:
    """Small meshed case for state-machine and property tests."""
    s = load_scale
    return NetworkCase(
        base_mva=100.0,
        buses=(
            Bus(id=1, kind=BusKind.SLACK, v_mag=1.02, base_kv=138.0,
                v_min=0.4, v_max=1.5),
            Bus(id=2, kind=BusKind.PV, p_load=0.2 * s, q_load=0.1 * s,
                base_kv=138.0, v_min=0.4, v_max=1.5),
            Bus(id=3, kind=BusKind.PQ, p_load=0.45 * s, q_load=0.15 * s,
                base_kv=138.0, v_min=0.4, v_max=1.5),
            Bus(id=4, kind=BusKind.PQ, p_load=0.4 * s, q_load=0.05 * s,
                base_kv=138.0, v_min=0.4, v_max=1.5),
            Bus(id=5, kind=BusKind.PQ, p_load=0.6 * s, q_load=0.1 * s,
                base_kv=138.0, v_min=0.4, v_max=1.5),
        ),
        branches=(
            Branch(from_bus=1, to_bus=2, r=0.02, x=0.06, b_charging=0.03),
            Branch(from_bus=1, to_bus=3, r=0.08, x=0.24, b_charging=0.025),
            Branch(from_bus=2, to_bus=3, r=0.06, x=0.18, b_charging=0.02),
            Branch(from_bus=2, to_bus=4, r=0.06, x=0.18, b_charging=0.02),
            Branch(from_bus=2, to_bus=5, r=0.04, x=0.12, b_charging=0.015),
            Branch(from_bus=3, to_bus=4, r=0.01, x=0.03, b_charging=0.01),
            Branch(from_bus=4, to_bus=5, r=0.08, x=0.24, b_charging=0.025),
        ),
        generators=(
            Generator(bus=1, p_gen=0.0, v_set=1.02),
            Generator(bus=2, p_gen=0.4, q_min=-3.0, q_max=3.0, v_set=1.0),
        ),
        name="five-bus",
    )


@pytest.fixture(scope="session")
def two_bus() -> NetworkCase:
    return make_two_bus()


@pytest.fixture(scope="session")
def five_bus() -> NetworkCase:
    return make_five_bus()


@pytest.fixture(scope="session")
def ieee14() -> NetworkCase:
    return load_bundled_case("ieee14")


@pytest.fixture(scope="session")
def ieee30() -> NetworkCase:
    return load_bundled_case("ieee30")


@pytest.fixture(scope="session")
def ieee118() -> NetworkCase:
    return load_bundled_case("ieee118")


def polar_mismatch(case, v: np.ndarray) -> float:
    """Independent mismatch evaluator on the trig form of the balance
    equations, written against the raw case data (no solver internals)."""
    n = case.n
    y = np.zeros((n, n), dtype=complex)
    idx = {b.id: i for i, b in enumerate(case.buses)}
    for br in case.branches:
        if not br.in_service:
            continue
        i, j = idx[br.from_bus], idx[br.to_bus]
        ys = 1.0 / complex(br.r, br.x)
        bc = 0.5j * br.b_charging
        tap = br.tap * np.exp(1j * br.shift)
        y[i, i] += (ys + bc) / (tap * np.conj(tap))
        y[i, j] += -ys / np.conj(tap)
        y[j, i] += -ys / tap
        y[j, j] += ys + bc
    for b in case.buses:
        y[idx[b.id], idx[b.id]] += complex(b.g_shunt, b.b_shunt)

    g, bmat = y.real, y.imag
    vm, th = np.abs(v), np.angle(v)
    p_spec = np.zeros(n)
    q_spec = np.zeros(n)
    for b in case.buses:
        p_spec[idx[b.id]] -= b.p_load
        q_spec[idx[b.id]] -= b.q_load
    for gen in case.generators:
        if gen.in_service:
            p_spec[idx[gen.bus]] += gen.p_gen

    gens_at = {gen.bus for gen in case.generators if gen.in_service}
    worst = 0.0
    for i, bus in enumerate(case.buses):
        p_calc = sum(
            vm[i] * vm[k] * (
                g[i, k] * np.cos(th[i] - th[k]) + bmat[i, k] * np.sin(th[i] - th[k])
            )
            for k in range(n)
        )
        q_calc = sum(
            vm[i] * vm[k] * (
                g[i, k] * np.sin(th[i] - th[k]) - bmat[i, k] * np.cos(th[i] - th[k])
            )
            for k in range(n)
        )
        kind = bus.kind
        if kind is BusKind.PV and bus.id not in gens_at:
            kind = BusKind.PQ
        if kind in (BusKind.PV, BusKind.PQ):
            worst = max(worst, abs(p_spec[i] - p_calc))
        if kind is BusKind.PQ:
            worst = max(worst, abs(q_spec[i] - q_calc))
    return worst
