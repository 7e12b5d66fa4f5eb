"""Bus admittance matrix and full Newton-Raphson AC power flow (polar form).

The solver iterates the standard mismatch equations

    dP_i = P_i^spec - V_i * sum_k V_k (G_ik cos th_ik + B_ik sin th_ik)
    dQ_i = Q_i^spec - V_i * sum_k V_k (G_ik sin th_ik - B_ik cos th_ik)

with unknown angles at PV+PQ buses and magnitudes at PQ buses. Dense
algebra throughout: the target systems are desk scale (<= a few hundred
buses) where a dense Jacobian solve is faster than sparse bookkeeping.

Non-convergence is a result, not an exception: callers such as the
loadability scan probe the solvable region and rely on ``converged=False``
round trips. A singular Jacobian is reported distinctly via ``failure``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .network import BusKind, NetworkCase


@dataclass(frozen=True, eq=False)
class AdmittanceMatrix:
    """Dense bus admittance matrix in case bus order."""

    n: int
    matrix: np.ndarray  # complex, shape (n, n)


class _BranchYParts(NamedTuple):
    f: np.ndarray  # from-bus positions
    t: np.ndarray  # to-bus positions
    yff: np.ndarray
    yft: np.ndarray
    ytf: np.ndarray
    ytt: np.ndarray
    active: np.ndarray  # bool, in_service


def branch_admittance_parts(case: NetworkCase) -> _BranchYParts:
    """Two-port admittances per branch; out-of-service rows zeroed."""
    m = len(case.branches)
    f = np.zeros(m, dtype=int)
    t = np.zeros(m, dtype=int)
    yff = np.zeros(m, dtype=complex)
    yft = np.zeros(m, dtype=complex)
    ytf = np.zeros(m, dtype=complex)
    ytt = np.zeros(m, dtype=complex)
    active = np.zeros(m, dtype=bool)
    idx = case.index_of
    for k, br in enumerate(case.branches):
        f[k] = idx[br.from_bus]
        t[k] = idx[br.to_bus]
        if not br.in_service:
            continue
        active[k] = True
        ys = 1.0 / complex(br.r, br.x)
        bc = 0.5j * br.b_charging
        tap = br.tap * np.exp(1j * br.shift)
        yff[k] = (ys + bc) / (tap * np.conj(tap))
        yft[k] = -ys / np.conj(tap)
        ytf[k] = -ys / tap
        ytt[k] = ys + bc
    return _BranchYParts(f, t, yff, yft, ytf, ytt, active)


def build_ybus(case: NetworkCase) -> AdmittanceMatrix:
    """Standard Y-bus: branch two-ports plus bus shunts on the diagonal."""
    n = case.n
    y = np.zeros((n, n), dtype=complex)
    parts = branch_admittance_parts(case)
    np.add.at(y, (parts.f, parts.f), parts.yff)
    np.add.at(y, (parts.f, parts.t), parts.yft)
    np.add.at(y, (parts.t, parts.f), parts.ytf)
    np.add.at(y, (parts.t, parts.t), parts.ytt)
    shunts = np.array([complex(b.g_shunt, b.b_shunt) for b in case.buses])
    y[np.diag_indices(n)] += shunts
    return AdmittanceMatrix(n=n, matrix=y)


@dataclass(frozen=True)
class PowerFlowOptions:
    tolerance: float = 1e-8
    max_iter: int = 20
    flat_start: bool = True
    enforce_q_limits: bool = False
    v_start: tuple[complex, ...] | None = None  # overrides flat/case start


@dataclass(frozen=True, eq=False)
class PowerFlowSolution:
    """Solved (or last-iterate) operating point.

    ``p_slack``/``q_slack`` are the slack bus generation, i.e. its computed
    net injection plus the local load. ``branch_flows`` holds complex power
    entering each branch at its from and to ends; ``total_loss`` is the sum
    of both ends' real parts over all in-service branches.
    """

    v: np.ndarray  # complex voltage per bus
    converged: bool
    iterations: int
    max_mismatch: float
    p_slack: float
    q_slack: float
    branch_flows: np.ndarray  # complex, shape (m, 2)
    total_loss: float
    failure: str | None = None
    q_limited: tuple[int, ...] = ()  # bus ids switched PV->PQ at a VAR limit


class _CaseArrays(NamedTuple):
    p_spec: np.ndarray
    q_spec: np.ndarray
    vset: np.ndarray  # setpoint magnitude where regulated, else nan
    slack: int
    pv: np.ndarray
    pq: np.ndarray
    pvpq: np.ndarray


def _case_arrays(case: NetworkCase) -> _CaseArrays:
    n = case.n
    p_spec = np.zeros(n)
    q_spec = np.zeros(n)
    vset = np.full(n, np.nan)
    kinds = []
    for i, bus in enumerate(case.buses):
        p_spec[i] -= bus.p_load
        q_spec[i] -= bus.q_load
        kinds.append(case.effective_kind(bus))
    for g in case.generators:
        if g.in_service:
            i = case.index_of[g.bus]
            p_spec[i] += g.p_gen
    for i, bus in enumerate(case.buses):
        if kinds[i] in (BusKind.PV, BusKind.SLACK):
            vset[i] = case.voltage_setpoint(bus)
    slack = case.index_of[case.slack_bus.id]
    pv = np.array(
        [i for i, k in enumerate(kinds) if k is BusKind.PV], dtype=int
    )
    pq = np.array(
        [i for i, k in enumerate(kinds) if k is BusKind.PQ], dtype=int
    )
    pvpq = np.concatenate([pv, pq])
    return _CaseArrays(p_spec, q_spec, vset, slack, pv, pq, pvpq)


def _injections(v: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Complex net injection S = V conj(Y V) per bus."""
    return v * np.conj(y @ v)


def evaluate_mismatch(
    case: NetworkCase, v: np.ndarray, ybus: AdmittanceMatrix | None = None
) -> float:
    """Max |mismatch| of the balance equations at ``v`` (p.u.).

    P is checked at PV and PQ buses, Q at PQ buses; slack and PV magnitudes
    are boundary conditions, not equations.
    """
    y = (ybus or build_ybus(case)).matrix
    arr = _case_arrays(case)
    s = _injections(v, y)
    dp = arr.p_spec[arr.pvpq] - s.real[arr.pvpq]
    dq = arr.q_spec[arr.pq] - s.imag[arr.pq]
    if dp.size + dq.size == 0:
        return 0.0
    return float(np.max(np.abs(np.concatenate([dp, dq]))))


def _branch_flows(
    case: NetworkCase, v: np.ndarray
) -> tuple[np.ndarray, float]:
    parts = branch_admittance_parts(case)
    vf = v[parts.f]
    vt = v[parts.t]
    sf = vf * np.conj(parts.yff * vf + parts.yft * vt)
    st = vt * np.conj(parts.ytf * vf + parts.ytt * vt)
    flows = np.stack([sf, st], axis=1)
    loss = float(np.sum((sf.real + st.real)[parts.active]))
    return flows, loss


def _start_voltage(case: NetworkCase, arr: _CaseArrays, options: PowerFlowOptions) -> np.ndarray:
    if options.v_start is not None:
        return np.asarray(options.v_start, dtype=complex).copy()
    slack_ang = case.slack_bus.v_ang
    if options.flat_start:
        vm = np.where(np.isnan(arr.vset), 1.0, arr.vset)
        va = np.full(case.n, slack_ang)
    else:
        vm = np.array([b.v_mag for b in case.buses])
        va = np.array([b.v_ang for b in case.buses])
        vm = np.where(np.isnan(arr.vset), vm, arr.vset)
        va[arr.slack] = slack_ang
    return vm * np.exp(1j * va)


def _solution(
    case: NetworkCase,
    v: np.ndarray,
    y: np.ndarray,
    arr: _CaseArrays,
    converged: bool,
    iterations: int,
    max_mismatch: float,
    failure: str | None,
    q_limited: tuple[int, ...] = (),
) -> PowerFlowSolution:
    s = _injections(v, y)
    slack_bus = case.buses[arr.slack]
    flows, loss = _branch_flows(case, v)
    return PowerFlowSolution(
        v=v,
        converged=converged,
        iterations=iterations,
        max_mismatch=max_mismatch,
        p_slack=float(s.real[arr.slack] + slack_bus.p_load),
        q_slack=float(s.imag[arr.slack] + slack_bus.q_load),
        branch_flows=flows,
        total_loss=loss,
        failure=failure,
        q_limited=q_limited,
    )


def _newton(
    v0: np.ndarray,
    y: np.ndarray,
    arr: _CaseArrays,
    tolerance: float,
    max_iter: int,
) -> tuple[np.ndarray, bool, int, float, str | None]:
    v = v0.copy()
    vm = np.abs(v)
    va = np.angle(v)
    pvpq, pq = arr.pvpq, arr.pq
    n_free = pvpq.size + pq.size
    for iteration in range(max_iter + 1):
        s = _injections(v, y)
        dp = arr.p_spec[pvpq] - s.real[pvpq]
        dq = arr.q_spec[pq] - s.imag[pq]
        mismatch = np.concatenate([dp, dq])
        max_mis = float(np.max(np.abs(mismatch))) if n_free else 0.0
        if max_mis <= tolerance:
            return v, True, iteration, max_mis, None
        if iteration == max_iter:
            return v, False, iteration, max_mis, None
        # Complex-form power flow derivatives, then real Jacobian blocks.
        ibus = y @ v
        vnorm = v / np.abs(v)
        ds_dva = 1j * v[:, None] * np.conj(np.diag(ibus) - y * v[None, :])
        ds_dvm = v[:, None] * np.conj(y * vnorm[None, :]) + np.diag(
            np.conj(ibus) * vnorm
        )
        j11 = ds_dva[np.ix_(pvpq, pvpq)].real
        j12 = ds_dvm[np.ix_(pvpq, pq)].real
        j21 = ds_dva[np.ix_(pq, pvpq)].imag
        j22 = ds_dvm[np.ix_(pq, pq)].imag
        jac = np.block([[j11, j12], [j21, j22]])
        try:
            dx = np.linalg.solve(jac, mismatch)
        except np.linalg.LinAlgError:
            return v, False, iteration, max_mis, "singular jacobian"
        if not np.all(np.isfinite(dx)):
            return v, False, iteration, max_mis, "diverged"
        va[pvpq] += dx[: pvpq.size]
        vm[pq] += dx[pvpq.size :]
        if np.any(vm <= 0) or not np.all(np.isfinite(vm)):
            return v, False, iteration + 1, max_mis, "diverged"
        v = vm * np.exp(1j * va)
    return v, False, max_iter, np.inf, None


def solve_power_flow(
    case: NetworkCase,
    options: PowerFlowOptions | None = None,
    ybus: AdmittanceMatrix | None = None,
) -> PowerFlowSolution:
    """Full Newton-Raphson power flow.

    Returns ``converged=False`` (never raises) when the iteration does not
    reach tolerance; ``failure`` distinguishes a singular Jacobian or a
    diverging iterate from plain non-convergence.
    """
    options = options or PowerFlowOptions()
    y = (ybus or build_ybus(case)).matrix
    arr = _case_arrays(case)
    v0 = _start_voltage(case, arr, options)
    v, ok, iters, max_mis, failure = _newton(
        v0, y, arr, options.tolerance, options.max_iter
    )
    q_limited: tuple[int, ...] = ()
    if ok and options.enforce_q_limits and arr.pv.size:
        v, ok, iters, max_mis, failure, q_limited = _solve_with_q_limits(
            case, v, y, arr, options, iters, max_mis
        )
    return _solution(case, v, y, arr, ok, iters, max_mis, failure, q_limited)


def _solve_with_q_limits(
    case: NetworkCase,
    v: np.ndarray,
    y: np.ndarray,
    arr: _CaseArrays,
    options: PowerFlowOptions,
    iters_so_far: int,
    initial_mismatch: float,
) -> tuple[np.ndarray, bool, int, float, str | None, tuple[int, ...]]:
    """PV -> PQ switching at aggregate generator Q limits (one-way)."""
    q_min = np.zeros(case.n)
    q_max = np.zeros(case.n)
    for g in case.generators:
        if g.in_service:
            i = case.index_of[g.bus]
            q_min[i] += g.q_min
            q_max[i] += g.q_max
    q_load = np.array([b.q_load for b in case.buses])
    p_spec, q_spec = arr.p_spec.copy(), arr.q_spec.copy()
    pv = list(arr.pv)
    pq = list(arr.pq)
    total_iters = iters_so_far
    last_mis = initial_mismatch
    limited: list[int] = []
    for _ in range(len(pv) + 1):
        s = _injections(v, y)
        q_gen = s.imag + q_load
        switched = False
        for i in sorted(pv):
            if q_gen[i] > q_max[i] + 1e-9:
                q_spec[i] = q_max[i] - q_load[i]
            elif q_gen[i] < q_min[i] - 1e-9:
                q_spec[i] = q_min[i] - q_load[i]
            else:
                continue
            pv.remove(i)
            pq = sorted(pq + [i])
            limited.append(i)
            switched = True
        lim_ids = tuple(sorted(case.buses[i].id for i in limited))
        if not switched:
            return v, True, total_iters, last_mis, None, lim_ids
        sub = _CaseArrays(
            p_spec,
            q_spec,
            arr.vset,
            arr.slack,
            np.array(pv, dtype=int),
            np.array(pq, dtype=int),
            np.concatenate([np.array(pv, dtype=int), np.array(pq, dtype=int)]),
        )
        v, ok, iters, last_mis, failure = _newton(
            v, y, sub, options.tolerance, options.max_iter
        )
        total_iters += iters
        if not ok:
            return v, False, total_iters, last_mis, failure, lim_ids
    return v, True, total_iters, last_mis, None, tuple(
        sorted(case.buses[i].id for i in limited)
    )
